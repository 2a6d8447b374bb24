#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pplab/geometry.hpp"
#include "pplab/rng.hpp"
#include "pplab/scores.hpp"

namespace pplab {

// Strict total order on R^d by polar coordinates: radius ascending, then
// angles ascending (d = 2: angle in [0, 2pi) from the positive x-axis;
// d = 3: inclination then azimuth). The origin is the minimum.
bool polar_less(const Point& a, const Point& b);

// points of the configuration strictly below x in the polar order
std::vector<Point> restrict_below(std::span<const Point> config, const Point& x);

// functional of a finite configuration
using ConfigFunctional = std::function<double(const std::vector<Point>&)>;

// D^l_{y_1..y_l} psi(mu) = sum over J subset of [l] of
// (-1)^{l-|J|} psi(mu|_{y*} + sum_{j in J} delta_{y_j});  l <= 12
double difference_kernel(const ConfigFunctional& psi,
                         std::span<const Point> ys,
                         std::span<const Point> mu);

// true iff the difference kernel vanishes at these arguments; for a
// score-built psi of interaction radius r this must hold whenever some y
// lies outside every B_r(x_i)
bool fme_vanishing_check(const ConfigFunctional& psi, std::span<const Point> ys,
                         std::span<const Point> anchors, double r,
                         std::span<const Point> mu);

// psi^!(mu) = prod_i xi(x_i, mu + sum_j delta_{x_j})^{k_i} for a score on a
// small explicit configuration (no spatial index; configs stay tiny)
ConfigFunctional palm_product_functional(const ScoreFunction& score,
                                         std::vector<Point> anchors,
                                         std::vector<int> exponents,
                                         const Window& window);

struct FmeResult {
    double value = 0.0;        // truncated expansion total
    std::vector<double> terms; // term l = 0..L
    int truncation_order = 0;
};

// Truncated factorial moment expansion of E_{x_1..x_p}[prod xi^{k_i}] for a
// Poisson(lambda) process on a small window: the l-th integral is evaluated
// by Monte Carlo over uniform l-tuples.
// truncation L = (k-1) * sum(k_i) with k the U-statistic order of the score.
FmeResult fme_truncated_expectation(const ScoreFunction& score,
                                    std::span<const Point> anchors,
                                    std::span<const int> exponents,
                                    double lambda, const Window& window,
                                    long mc_samples, RngStream& rng);

// Direct Palm Monte Carlo of the same expectation via add-the-anchors
// (Slivnyak): sample Poisson, adjoin the anchors, evaluate the product.
double palm_direct_expectation(const ScoreFunction& score,
                               std::span<const Point> anchors,
                               std::span<const int> exponents, double lambda,
                               const Window& window, long mc_samples,
                               RngStream& rng);

// U-statistic order of a score family (the k in its defining kernel);
// throws for non-U-statistic families
int u_statistic_order(const ScoreFunction& score);

}  // namespace pplab
