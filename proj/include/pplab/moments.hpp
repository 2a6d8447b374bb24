#pragma once

#include <span>
#include <vector>

#include "pplab/processes.hpp"
#include "pplab/scores.hpp"

namespace pplab {

struct ValueWithError {
    double value = 0.0;
    double stderror = 0.0;
};

// Radial mixed-moment profile: per-bin estimates of m_(2)(s) together with
// the spatial-average estimates of m_(1) and of the E_0 xi^2 rho term.
struct MomentEstimate {
    std::vector<double> s_mid;
    std::vector<double> m2;
    std::vector<double> m2_stderr;
    std::vector<long> pair_count;
    std::vector<bool> empty_bin;
    double bin_width = 0.0;
    double max_range = 0.0;
    int dim = 2;
    int replicates = 0;
    ValueWithError m1;
    ValueWithError sq_term;  // estimate of E_0 xi^2(0,P) rho
};

// average of H-hat_n / n across replicates (>= 30 required)
ValueWithError estimate_m1(const ScoreFunction& score,
                           std::span<const PointConfiguration> configs);

// Ohser translation-corrected isotropic estimator of m_(2)(s) on bins
// [s, s+bin_width) up to max_range
MomentEstimate estimate_m2_radial(const ScoreFunction& score,
                                  std::span<const PointConfiguration> configs,
                                  double bin_width, double max_range);

struct SigmaSqResult {
    double value = 0.0;
    double tail_bound = 0.0;   // |last-bin integrand|, reported convergence proxy
    double stderror = 0.0;
};

// sigma^2(xi) = E_0 xi^2 rho + integral of (m_2 - m_1^2); shell-weighted sum
// over the radial profile
SigmaSqResult sigma_sq_plugin(const MomentEstimate& est);

// sigma^2(xi, gamma) = integral of (m_1^2 - m_2) gamma for the cube limit
// gamma(y) = sum_i |y_i|, via its angular average
SigmaSqResult sigma_sq_surface(const MomentEstimate& est);

struct DecayCurve {
    std::vector<double> s;
    std::vector<double> error;      // |m_2(s) - m_1^2|
    std::vector<double> stderror;
    std::vector<double> envelope;   // running max from the right
};

DecayCurve factorization_error_curve(const MomentEstimate& est);

// shell measure of [s, s+ds) in R^d to first order: 2 ds, 2 pi s ds, 4 pi s^2 ds
double shell_measure(int d, double s_mid, double width);

}  // namespace pplab
