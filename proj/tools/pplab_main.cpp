#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "pplab/experiment.hpp"
#include "pplab/fme.hpp"
#include "pplab/io.hpp"

namespace {

using namespace pplab;

int cmd_sample(const std::string& config_path, std::uint64_t seed,
               std::uint64_t stream, const std::string& out) {
    ConfigMap cfg = read_config_file(config_path);
    ExperimentSpec spec = ExperimentSpec::from_config(cfg);
    if (seed) spec.seed = seed;
    PointConfiguration pc = spec.sample(spec.ladder.front(), stream);
    if (out.empty())
        std::cout << format_configuration(pc);
    else
        write_configuration(out, pc);
    return 0;
}

int cmd_score(const std::string& in, const std::string& score_tag, double r,
              int k, int j) {
    PointConfiguration pc = read_configuration(in);
    ExperimentSpec spec;
    spec.score = score_tag;
    spec.score_params["r"] = r;
    spec.score_params["k"] = k;
    spec.score_params["j"] = j;
    const ScoreFunction s = spec.make_score();
    const double h = total_statistic(s, pc);
    const BufferedStatistic bs = buffered_statistic(s, pc);
    std::printf("H %.17g\nHhat %.17g\noverruns %ld\n", h, bs.value,
                bs.overrun_flags);
    return 0;
}

int cmd_experiment(const std::string& config_path, std::uint64_t seed,
                   const std::string& out_dir, int threads,
                   const std::string& format) {
    ConfigMap cfg = read_config_file(config_path);
    ExperimentSpec spec = ExperimentSpec::from_config(cfg);
    if (seed) spec.seed = seed;
    if (threads > 0) spec.threads = threads;
    ResultSet rs = run(spec);
    std::filesystem::create_directories(out_dir);
    const std::string path =
        out_dir + "/" + spec.name + (format == "jsonl" ? ".jsonl" : ".csv");
    emit(rs, format, path);
    std::cout << "wrote " << path << " and " << path << ".summary\n";
    return 0;
}

int cmd_analyze(const std::string& in, const std::string& format) {
    ResultSet rs = parse_results(read_text_file(in), format);
    std::map<double, std::vector<double>> per_n;
    for (const auto& row : rs.rows)
        if (row.statistic == "H") per_n[row.n].push_back(row.value);
    std::vector<double> ns, vars;
    for (const auto& [n, v] : per_n) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var = v.size() > 1 ? var / (static_cast<double>(v.size()) - 1.0) : 0.0;
        std::printf("n %g replicates %zu mean_H %.8g var_H %.8g\n", n, v.size(),
                    mean, var);
        ns.push_back(n);
        vars.push_back(var);
    }
    if (ns.size() >= 2) {
        const SlopeFit fit = fit_loglog(ns, vars);
        std::printf("slope var_H_vs_n %.5g stderr %.3g\n", fit.slope,
                    fit.stderror);
    }
    return 0;
}

int cmd_selftest() {
    int failures = 0;
    auto check = [&failures](bool ok, const char* name) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
        if (!ok) ++failures;
    };
    const Window w = build_window(16.0, 2);
    check(std::abs(w.side - 4.0) < 1e-12, "window side 16^(1/2)");
    const std::vector<Point> tri{{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}};
    const Ball mb = miniball(tri);
    check(std::abs(mb.radius - std::sqrt(2.0)) < 1e-9, "miniball right triangle");
    RngStream rng(7, 0);
    double total = 0.0;
    const int reps = 200;
    for (int i = 0; i < reps; ++i) {
        RngStream r2(7, static_cast<std::uint64_t>(i));
        total += static_cast<double>(
            sample_poisson(w, 0.0, 1.0, r2).points.size());
    }
    check(std::abs(total / reps - 16.0) < 1.5, "poisson mean count");
    const auto pmf = ginibre_disk_count_pmf(1.0, 40);
    double mass = 0.0;
    for (double p : pmf) mass += p;
    check(std::abs(mass - 1.0) < 1e-12, "ginibre pmf normalization");
    const PartitionTable table(5);
    check(table.partitions().size() == 52, "bell number B(5)");
    return failures == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"point-process statistics laboratory"};
    app.require_subcommand(1);

    std::string config_path, out, in, format = "csv", score_tag = "edge_length";
    std::uint64_t seed = 0, stream = 0;
    int threads = 0, k = 2, j = 2;
    double r = 0.5;

    auto* sc_sample = app.add_subcommand("sample", "sample one configuration");
    sc_sample->add_option("--config", config_path)->required();
    sc_sample->add_option("--seed", seed);
    sc_sample->add_option("--stream", stream);
    sc_sample->add_option("--out", out);

    auto* sc_score = app.add_subcommand("score", "score a stored configuration");
    sc_score->add_option("--in", in)->required();
    sc_score->add_option("--score", score_tag);
    sc_score->add_option("--r", r);
    sc_score->add_option("--k", k);
    sc_score->add_option("--j", j);

    auto* sc_exp = app.add_subcommand("experiment", "run a declarative experiment");
    sc_exp->add_option("--config", config_path)->required();
    sc_exp->add_option("--seed", seed);
    sc_exp->add_option("--out", out)->required();
    sc_exp->add_option("--threads", threads);
    sc_exp->add_option("--format", format)
        ->check(CLI::IsMember({"csv", "jsonl"}));

    auto* sc_an = app.add_subcommand("analyze", "summarize emitted results");
    sc_an->add_option("--in", in)->required();
    sc_an->add_option("--format", format)
        ->check(CLI::IsMember({"csv", "jsonl"}));

    auto* sc_self = app.add_subcommand("selftest", "quick coherence battery");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sc_sample->parsed()) return cmd_sample(config_path, seed, stream, out);
        if (sc_score->parsed()) return cmd_score(in, score_tag, r, k, j);
        if (sc_exp->parsed())
            return cmd_experiment(config_path, seed, out, threads, format);
        if (sc_an->parsed()) return cmd_analyze(in, format);
        if (sc_self->parsed()) return cmd_selftest();
    } catch (const pplab::resource_limit_error& e) {
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        return 3;
    } catch (const pplab::numeric_error& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 4;
    } catch (const pplab::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const pplab::invalid_argument_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 0;
}
