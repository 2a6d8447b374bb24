#include "pplab/experiment.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <thread>

namespace pplab {

namespace {

double get_param(const std::map<std::string, double>& m, const std::string& key,
                 double fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::function<double(const Point&)> make_test_function(const std::string& tag) {
    if (tag == "const") return [](const Point&) { return 1.0; };
    if (tag == "half_window")
        return [](const Point& p) { return p[0] < 0.0 ? 1.0 : 0.0; };
    if (tag == "affine") return [](const Point& p) { return 1.0 + p[0]; };
    throw config_error("unknown test function tag: " + tag);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

}  // namespace

const char* version_string() { return "pplab 0.1.0"; }

ExperimentSpec ExperimentSpec::from_config(const ConfigMap& cfg) {
    ExperimentSpec spec;
    spec.hash = config_hash(cfg);
    const auto exp_it = cfg.find("experiment");
    if (exp_it == cfg.end()) throw config_error("missing [experiment] section");
    const auto& exp = exp_it->second;
    auto get = [&exp](const char* key) -> const std::string* {
        const auto it = exp.find(key);
        return it == exp.end() ? nullptr : &it->second;
    };
    if (const auto* v = get("name")) spec.name = *v;
    if (const auto* v = get("process")) spec.process = *v;
    if (const auto* v = get("score")) spec.score = *v;
    if (const auto* v = get("test_function")) spec.test_function = *v;
    if (const auto* v = get("ladder")) {
        spec.ladder.clear();
        for (const auto& tok : split_ws(*v)) spec.ladder.push_back(std::stod(tok));
    }
    if (const auto* v = get("replicates")) spec.replicates = std::stoi(*v);
    if (const auto* v = get("seed")) spec.seed = std::stoull(*v);
    if (const auto* v = get("outputs")) spec.outputs = split_ws(*v);
    if (const auto* v = get("max_points")) spec.max_points = std::stol(*v);
    if (const auto* v = get("threads")) spec.threads = std::stoi(*v);
    auto load_params = [&cfg](const char* section,
                              std::map<std::string, double>& out) {
        const auto it = cfg.find(section);
        if (it == cfg.end()) return;
        for (const auto& [k, v] : it->second) {
            try {
                out[k] = std::stod(v);
            } catch (const std::exception&) {
                throw config_error(std::string("non-numeric value for [") +
                                   section + "] " + k);
            }
        }
    };
    load_params("process", spec.process_params);
    load_params("score", spec.score_params);
    const auto m2_it = cfg.find("m2");
    if (m2_it != cfg.end()) {
        for (const auto& [k, v] : m2_it->second) {
            if (k == "bin_width") spec.m2_bin_width = std::stod(v);
            else if (k == "max_range") spec.m2_max_range = std::stod(v);
            else throw config_error("unknown [m2] key: " + k);
        }
    }
    spec.validate();
    return spec;
}

void ExperimentSpec::validate() const {
    if (ladder.empty()) throw config_error("ladder must not be empty");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] > ladder[i - 1]))
            throw config_error("ladder must be strictly increasing");
    if (replicates < 1) throw config_error("replicates must be >= 1");
    make_score();  // throws on unknown score tag
    static const std::vector<std::string> kProcesses = {
        "poisson",     "ginibre",     "beta_ginibre",
        "matern2",     "matern_cluster", "permanental",
        "gef",         "alpha_determinantal"};
    if (std::find(kProcesses.begin(), kProcesses.end(), process) ==
        kProcesses.end())
        throw config_error("unknown process tag: " + process);
    for (const auto& out : outputs)
        if (out != "H" && out != "Hhat" && out != "mu" && out != "m2" &&
            out != "cumulants" && out != "clt" && out != "decay")
            throw config_error("unknown output tag: " + out);
    make_test_function(test_function);
}

ScoreFunction ExperimentSpec::make_score() const {
    const double r = get_param(score_params, "r", 0.5);
    const int k = static_cast<int>(get_param(score_params, "k", 2));
    const int j = static_cast<int>(get_param(score_params, "j", 2));
    const int nodes = static_cast<int>(get_param(score_params, "nodes", 4096));
    if (score == "const_one") return const_one_score();
    if (score == "clique_count") return clique_count_score(k, r);
    if (score == "edge_length") return edge_length_score(r);
    if (score == "degree") return degree_score(k, r);
    if (score == "morse") return morse_score(k, r);
    if (score == "coverage") return coverage_score(k, r, nodes);
    if (score == "intrinsic_volume") return intrinsic_volume_score(j, r);
    if (score == "knn_edge_length") return knn_edge_length_score(k);
    throw config_error("unknown score tag: " + score);
}

bool ExperimentSpec::wants(const std::string& output) const {
    return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

double ExperimentSpec::buffer_margin() const {
    if (!wants("Hhat") && !wants("m2") && !wants("decay")) return 0.0;
    const ScoreFunction s = make_score();
    const double declared = declared_stabilization_radius(s);
    if (std::isfinite(declared)) return std::max(declared, 1e-6);
    // k-NN: six spacings at the k-th-neighbor scale
    const double intensity = get_param(process_params, "lambda", 1.0);
    const int d = static_cast<int>(get_param(process_params, "d", 2));
    return 6.0 * std::pow(static_cast<double>(s.k) / intensity, 1.0 / d);
}

PointConfiguration ExperimentSpec::sample(double n, std::uint64_t rep) const {
    const int d = static_cast<int>(get_param(process_params, "d", 2));
    const Window w = build_window(n, d);
    RngStream rng(seed ^ mix64(static_cast<std::uint64_t>(n)), rep);
    const double margin = buffer_margin();
    PointConfiguration cfg;
    if (process == "poisson") {
        cfg = sample_poisson(w, margin, get_param(process_params, "lambda", 1.0),
                             rng);
    } else if (process == "ginibre") {
        GinibreOptions opt;
        opt.max_matrix_dim =
            static_cast<int>(get_param(process_params, "max_n", 4096));
        cfg = sample_ginibre(w, margin, rng, opt);
    } else if (process == "beta_ginibre") {
        GinibreOptions opt;
        opt.max_matrix_dim =
            static_cast<int>(get_param(process_params, "max_n", 4096));
        cfg = sample_beta_ginibre(w, get_param(process_params, "beta", 0.5), rng,
                                  opt);
    } else if (process == "matern2") {
        cfg = sample_matern2(w, margin,
                             get_param(process_params, "lambda_p", 2.0),
                             get_param(process_params, "h", 0.3), rng);
    } else if (process == "matern_cluster") {
        cfg = sample_matern_cluster(w, margin,
                                    get_param(process_params, "parent", 0.25),
                                    get_param(process_params, "mu", 4.0),
                                    get_param(process_params, "rc", 0.5), rng);
    } else if (process == "permanental") {
        PermanentalOptions opt;
        opt.ell = get_param(process_params, "ell", 1.0);
        opt.grid_step = get_param(process_params, "grid_step", 0.0);
        cfg = sample_permanental_cox(w, margin, rng, opt);
    } else if (process == "gef") {
        cfg = sample_gef_zeros(w, rng,
                               static_cast<int>(get_param(process_params, "j", 0)));
    } else if (process == "alpha_determinantal") {
        GinibreOptions opt;
        opt.max_matrix_dim =
            static_cast<int>(get_param(process_params, "max_n", 4096));
        cfg = sample_alpha_determinantal(
            w, static_cast<int>(get_param(process_params, "m", 2)), rng, opt);
    } else {
        throw config_error("unknown process tag: " + process);
    }
    cfg.provenance.seed = seed;
    cfg.provenance.stream = rep;
    if (static_cast<long>(cfg.points.size()) > max_points)
        throw resource_limit_error("replicate exceeds max point budget");
    return cfg;
}

ResultSet run(const ExperimentSpec& spec) {
    spec.validate();
    ResultSet rs;
    rs.spec_hash = spec.hash ? spec.hash : 0;
    rs.seed = spec.seed;
    rs.version = version_string();

    const ScoreFunction score = spec.make_score();
    const auto f = make_test_function(spec.test_function);
    const std::size_t ladder_n = spec.ladder.size();
    const std::size_t reps = static_cast<std::size_t>(spec.replicates);

    struct TaskOut {
        double h = 0.0, hhat = 0.0, overruns = 0.0, mu = 0.0;
    };
    std::vector<TaskOut> out(ladder_n * reps);
    // m2 accumulation wants whole configurations; cap the retained replicates
    const bool keep_configs = spec.wants("m2") || spec.wants("decay");
    const std::size_t keep_cap = 500;
    std::vector<std::vector<PointConfiguration>> kept(ladder_n);

    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    const std::size_t total = ladder_n * reps;
    auto worker = [&]() {
        for (;;) {
            const std::size_t t = cursor.fetch_add(1);
            if (t >= total || failed.load()) return;
            const std::size_t li = t / reps, rep = t % reps;
            try {
                PointConfiguration cfg = spec.sample(spec.ladder[li], rep);
                TaskOut& o = out[t];
                o.h = total_statistic(score, cfg);
                const BufferedStatistic bs = buffered_statistic(score, cfg);
                o.hhat = bs.value;
                o.overruns = static_cast<double>(bs.overrun_flags);
                o.mu = weighted_measure_integral(score, cfg, f);
                if (!std::isfinite(o.h) || !std::isfinite(o.hhat) ||
                    !std::isfinite(o.mu))
                    throw numeric_error("non-finite statistic");
                if (keep_configs && rep < keep_cap) {
                    static std::mutex keep_mutex;
                    std::lock_guard<std::mutex> lock(keep_mutex);
                    kept[li].push_back(std::move(cfg));
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failure = e.what();
                failed.store(true);
                return;
            }
        }
    };
    const int nthreads = std::max(1, spec.threads);
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) {
        if (failure.find("max point budget") != std::string::npos)
            throw resource_limit_error(failure);
        if (failure.find("non-finite") != std::string::npos)
            throw numeric_error(failure);
        throw config_error(failure);
    }

    // rows in deterministic (n, replicate) order
    for (std::size_t li = 0; li < ladder_n; ++li)
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const TaskOut& o = out[li * reps + rep];
            const double n = spec.ladder[li];
            if (spec.wants("H"))
                rs.rows.push_back({n, static_cast<int>(rep), "H", o.h});
            if (spec.wants("Hhat")) {
                rs.rows.push_back({n, static_cast<int>(rep), "Hhat", o.hhat});
                rs.rows.push_back(
                    {n, static_cast<int>(rep), "overruns", o.overruns});
            }
            if (spec.wants("mu"))
                rs.rows.push_back({n, static_cast<int>(rep), "mu", o.mu});
        }

    // summaries
    std::ostringstream sum;
    sum << "# " << version_string() << " spec_hash " << std::hex << rs.spec_hash
        << std::dec << " seed " << rs.seed << "\n";
    std::vector<double> ns, var_h;
    for (std::size_t li = 0; li < ladder_n; ++li) {
        const double n = spec.ladder[li];
        double mean = 0.0, mean_hat = 0.0, mean_mu = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            mean += out[li * reps + rep].h;
            mean_hat += out[li * reps + rep].hhat;
            mean_mu += out[li * reps + rep].mu;
        }
        mean /= static_cast<double>(reps);
        mean_hat /= static_cast<double>(reps);
        mean_mu /= static_cast<double>(reps);
        double var = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const double d = out[li * reps + rep].h - mean;
            var += d * d;
        }
        var = reps > 1 ? var / (static_cast<double>(reps) - 1.0) : 0.0;
        ns.push_back(n);
        var_h.push_back(var);
        sum << "n " << n << " mean_H " << mean << " var_H " << var
            << " mean_Hhat " << mean_hat << " mean_mu " << mean_mu << "\n";
    }
    if (ns.size() >= 2) {
        const SlopeFit fit = fit_loglog(ns, var_h);
        sum << "slope var_H_vs_n " << fit.slope << " stderr " << fit.stderror
            << "\n";
    }
    if (spec.wants("cumulants") || spec.wants("clt")) {
        std::map<double, std::vector<double>> per_n;
        for (std::size_t li = 0; li < ladder_n; ++li) {
            auto& v = per_n[spec.ladder[li]];
            for (std::size_t rep = 0; rep < reps; ++rep)
                v.push_back(out[li * reps + rep].mu);
        }
        if (spec.wants("cumulants")) {
            const CumulantLadder ladder = estimate_cumulant_ladder(
                per_n, reps >= 2000 ? 4 : 3);
            for (const auto& row : ladder.rows) {
                rs.rows.push_back({row.n, -1,
                                   "S" + std::to_string(row.order), row.value});
                sum << "cumulant n " << row.n << " k " << row.order << " value "
                    << row.value << " stderr " << row.stderror << " slope "
                    << row.slope_so_far << "\n";
            }
        }
        if (spec.wants("clt")) {
            const auto& v = per_n.rbegin()->second;
            const CltReport rep_ = clt_diagnostics(v);
            sum << "clt n " << per_n.rbegin()->first << " skew " << rep_.skewness
                << " ex_kurt " << rep_.excess_kurtosis << " ks " << rep_.ks_distance
                << " ks_p " << rep_.ks_p_value << "\n";
        }
    }
    if (keep_configs) {
        for (std::size_t li = 0; li < ladder_n; ++li) {
            if (kept[li].size() < 2) continue;
            const ScoreFunction s = score;
            const double bin =
                spec.m2_bin_width > 0 ? spec.m2_bin_width : std::max(s.r, 0.1) / 4.0;
            const double range = spec.m2_max_range > 0
                                     ? spec.m2_max_range
                                     : 8.0 * std::max(s.r, 0.5);
            const MomentEstimate est =
                estimate_m2_radial(s, kept[li], bin, range);
            for (std::size_t b = 0; b < est.m2.size(); ++b) {
                rs.rows.push_back(
                    {spec.ladder[li], -1, "m2@" + std::to_string(est.s_mid[b]),
                     est.m2[b]});
            }
            sum << "m2 n " << spec.ladder[li] << " m1 " << est.m1.value
                << " sq_term " << est.sq_term.value << "\n";
            if (spec.wants("decay")) {
                const DecayCurve curve = factorization_error_curve(est);
                for (std::size_t b = 0; b < curve.s.size(); ++b)
                    rs.rows.push_back({spec.ladder[li], -1,
                                       "decay@" + std::to_string(curve.s[b]),
                                       curve.error[b]});
            }
        }
    }
    std::istringstream lines(sum.str());
    std::string line;
    while (std::getline(lines, line)) rs.summary.push_back(line);
    return rs;
}

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    const std::size_t n = lx.size();
    if (n < 2) throw numeric_error("slope fit needs at least 2 positive points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    SlopeFit fit;
    fit.slope = sxy / sxx;
    if (n > 2) {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = ly[i] - my - fit.slope * (lx[i] - mx);
            ss += e * e;
        }
        fit.stderror = std::sqrt(ss / (static_cast<double>(n) - 2.0) / sxx);
    }
    return fit;
}

namespace {
std::string provenance_line(const ResultSet& rs, bool json) {
    std::ostringstream os;
    if (json) {
        nlohmann::json j;
        j["spec_hash"] = rs.spec_hash;
        j["seed"] = rs.seed;
        j["version"] = rs.version;
        os << j.dump();
    } else {
        os << "# spec_hash " << std::hex << rs.spec_hash << std::dec << " seed "
           << rs.seed << " version " << rs.version;
    }
    return os.str();
}
}  // namespace

void emit(const ResultSet& results, const std::string& format,
          const std::string& path) {
    if (format != "csv" && format != "jsonl")
        throw config_error("format must be csv or jsonl");
    const bool json = format == "jsonl";
    const std::string head = provenance_line(results, json);
    if (std::filesystem::exists(path)) {
        std::istringstream is(read_text_file(path));
        std::string first;
        std::getline(is, first);
        if (first != head)
            throw config_error("existing results carry a different spec hash: " +
                               path);
    }
    std::ostringstream os;
    os << head << "\n";
    char buf[64];
    if (json) {
        for (const auto& row : results.rows) {
            nlohmann::json j;
            j["n"] = row.n;
            j["replicate"] = row.replicate;
            j["statistic"] = row.statistic;
            j["value"] = row.value;
            os << j.dump() << "\n";
        }
    } else {
        os << "n,replicate,statistic,value\n";
        for (const auto& row : results.rows) {
            std::snprintf(buf, sizeof buf, "%.17g", row.value);
            os << row.n << "," << row.replicate << "," << row.statistic << ","
               << buf << "\n";
        }
    }
    write_text_file(path, os.str());
    std::ostringstream sum;
    sum << head << "\n";
    for (const auto& line : results.summary) sum << line << "\n";
    write_text_file(path + ".summary", sum.str());
}

ResultSet parse_results(const std::string& text, const std::string& format) {
    ResultSet rs;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    const bool json = format == "jsonl";
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (json) {
                const auto j = nlohmann::json::parse(line);
                rs.spec_hash = j.value("spec_hash", 0ULL);
                rs.seed = j.value("seed", 0ULL);
                rs.version = j.value("version", "");
            }
            continue;
        }
        if (json) {
            const auto j = nlohmann::json::parse(line);
            rs.rows.push_back({j["n"].get<double>(), j["replicate"].get<int>(),
                               j["statistic"].get<std::string>(),
                               j["value"].get<double>()});
        } else {
            if (line.rfind("n,", 0) == 0) continue;  // header
            std::istringstream ls(line);
            ResultRow row;
            std::string tok;
            std::getline(ls, tok, ',');
            row.n = std::stod(tok);
            std::getline(ls, tok, ',');
            row.replicate = std::stoi(tok);
            std::getline(ls, row.statistic, ',');
            std::getline(ls, tok, ',');
            row.value = std::stod(tok);
            rs.rows.push_back(row);
        }
    }
    return rs;
}

}  // namespace pplab
