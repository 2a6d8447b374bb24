#pragma once

#include <functional>
#include <map>
#include <span>
#include <vector>

#include "pplab/geometry.hpp"
#include "pplab/rng.hpp"

namespace pplab {

// All set partitions of {0..k-1} with the Moebius weight
// (-1)^{|gamma|-1} (|gamma|-1)! attached.
struct Partition {
    std::vector<std::vector<int>> blocks;
    double moebius_weight = 1.0;
};

class PartitionTable {
public:
    explicit PartitionTable(int k);  // k <= 6
    const std::vector<Partition>& partitions() const { return partitions_; }
    int k() const { return k_; }
    // number of partitions with exactly j blocks (Stirling second kind)
    long block_count(int j) const;

private:
    int k_;
    std::vector<Partition> partitions_;
};

// S_1..S_k from raw moments M_1..M_k via the Moebius sum over partitions
std::vector<double> cumulants_from_moments(std::span<const double> moments);

// inverse map (complete Bell sum), used for round-trip checks
std::vector<double> moments_from_cumulants(std::span<const double> cumulants);

// Ursell function of the xi-weighted measure at p points. The oracle maps a
// subset of {0..p-1} to m^{(k_j : j in subset)}(x_j : j in subset).
double ursell_from_correlations(
    const std::function<double(std::span<const int>)>& block_moment, int p);

struct DecayScanPoint {
    double diameter = 0.0;
    double max_abs_ursell = 0.0;
};

// max |m_T| over random p-point configurations rescaled to each diameter
std::vector<DecayScanPoint> ursell_decay_scan(
    const std::function<double(std::span<const Point>)>& ursell_of_points,
    int p, std::span<const double> diameters, int trials, RngStream& rng);

// unbiased cumulant estimators (k-statistics) with delete-1 jackknife errors
struct KStatistics {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0;
    double se1 = 0.0, se2 = 0.0, se3 = 0.0, se4 = 0.0;
    long n = 0;

    double value(int order) const;
    double stderror(int order) const;
};

KStatistics k_statistics(std::span<const double> samples);

struct CumulantLadderRow {
    double n = 0.0;
    int order = 0;
    double value = 0.0;
    double stderror = 0.0;
    double slope_so_far = 0.0;  // log-log LS slope over the rungs up to here
};

struct CumulantLadder {
    std::vector<CumulantLadderRow> rows;
    // normalized |S_3| / S_2^{3/2} per rung, CLT contraction diagnostic
    std::vector<double> skew_ratio;
    std::vector<double> skew_ratio_se;
};

// per_n: replicate statistic values per window volume (ascending n);
// k_max <= 4, replicate minimums: 500 for k <= 3, 2000 for k = 4
CumulantLadder estimate_cumulant_ladder(
    const std::map<double, std::vector<double>>& per_n, int k_max);

struct CltReport {
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double ks_distance = 0.0;
    double ks_p_value = 0.0;
    long n = 0;
};

// standardizes internally by sample mean/sd; >= 1000 replicates required
CltReport clt_diagnostics(std::span<const double> values);

// Kolmogorov asymptotic tail Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2)
double kolmogorov_tail(double lambda);

// least-squares slope of log(y) against log(x)
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace pplab
