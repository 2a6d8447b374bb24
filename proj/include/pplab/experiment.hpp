#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pplab/cumulants.hpp"
#include "pplab/io.hpp"
#include "pplab/moments.hpp"
#include "pplab/processes.hpp"
#include "pplab/scores.hpp"

namespace pplab {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class resource_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Declarative experiment: process, score, test function, window ladder,
// replicate count, master seed, and the requested outputs.
struct ExperimentSpec {
    std::string name = "experiment";
    std::string process = "poisson";
    std::map<std::string, double> process_params;
    std::string score = "const_one";
    std::map<std::string, double> score_params;
    std::string test_function = "const";  // const | half_window | affine
    std::vector<double> ladder{256.0};
    int replicates = 1;
    std::uint64_t seed = 1;
    std::vector<std::string> outputs{"H"};  // H Hhat mu m2 cumulants clt decay
    double m2_bin_width = 0.0;   // 0 -> r/4
    double m2_max_range = 0.0;   // 0 -> 8 max(r, 0.5)
    long max_points = 1000000;
    int threads = 1;
    std::uint64_t hash = 0;

    static ExperimentSpec from_config(const ConfigMap& cfg);
    void validate() const;
    ScoreFunction make_score() const;
    bool wants(const std::string& output) const;
    double buffer_margin() const;
    // deterministic sampler for ladder point n, replicate stream id = rep
    PointConfiguration sample(double n, std::uint64_t rep) const;
};

struct ResultRow {
    double n = 0.0;
    int replicate = 0;
    std::string statistic;
    double value = 0.0;
};

struct ResultSet {
    std::vector<ResultRow> rows;
    std::vector<std::string> summary;
    std::uint64_t spec_hash = 0;
    std::uint64_t seed = 0;
    std::string version;
};

ResultSet run(const ExperimentSpec& spec);

// csv: `n,replicate,statistic,value` (+ provenance comment line);
// jsonl: one object per row with a provenance first line. A `.summary`
// sidecar carries the aggregates. Refuses to overwrite results carrying a
// different spec hash.
void emit(const ResultSet& results, const std::string& format,
          const std::string& path);

ResultSet parse_results(const std::string& text, const std::string& format);

struct SlopeFit {
    double slope = 0.0;
    double stderror = 0.0;
};
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y);

const char* version_string();

}  // namespace pplab
