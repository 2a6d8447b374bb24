#include "pplab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pplab {

std::string format_configuration(const PointConfiguration& config) {
    std::ostringstream os;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d %.17g %llu %s", config.window.dim,
                  config.window.volume,
                  static_cast<unsigned long long>(config.provenance.seed),
                  config.provenance.process.c_str());
    os << buf << "\n";
    for (const Point& p : config.points) {
        for (int c = 0; c < config.window.dim; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", p[c]);
            os << (c ? " " : "") << buf;
        }
        os << "\n";
    }
    return os.str();
}

PointConfiguration parse_configuration(const std::string& text) {
    std::istringstream is(text);
    int d = 0;
    double n = 0.0;
    unsigned long long seed = 0;
    std::string process;
    if (!(is >> d >> n >> seed >> process))
        throw std::runtime_error("configuration header malformed");
    PointConfiguration cfg;
    cfg.window = build_window(n, d);
    cfg.provenance.process = process;
    cfg.provenance.seed = seed;
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        Point p;
        p.dim = d;
        for (int c = 0; c < d; ++c)
            if (!(ls >> p[c])) throw std::runtime_error("bad point line");
        cfg.points.push_back(p);
    }
    return cfg;
}

void write_configuration(const std::string& path,
                         const PointConfiguration& config) {
    write_text_file(path, format_configuration(config));
}

PointConfiguration read_configuration(const std::string& path) {
    return parse_configuration(read_text_file(path));
}

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap cfg;
    std::istringstream is(text);
    std::string line, section = "global";
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config line " + std::to_string(lineno) +
                                         ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            cfg[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        cfg[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

ConfigMap read_config_file(const std::string& path) {
    return parse_config_text(read_text_file(path));
}

std::uint64_t config_hash(const ConfigMap& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0x1f;
        h *= 0x100000001b3ULL;
    };
    for (const auto& [section, kv] : cfg) {
        feed(section);
        for (const auto& [k, v] : kv) {
            feed(k);
            feed(v);
        }
    }
    return h;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace pplab
