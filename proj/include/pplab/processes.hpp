#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pplab/geometry.hpp"
#include "pplab/rng.hpp"

namespace pplab {

struct Provenance {
    std::string process;
    std::string params;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Finite sample of a point process. When a buffer is present the stored
// points fill the buffer cube; statistics restrict to `window` as needed.
struct PointConfiguration {
    std::vector<Point> points;
    Window window;
    std::optional<Window> buffer;
    Provenance provenance;

    const Window& sampling_region() const { return buffer ? *buffer : window; }
    double buffer_margin() const {
        return buffer ? 0.5 * (buffer->side - window.side) : 0.0;
    }
    std::vector<int> window_point_ids() const;
    // throws invalid_argument_error on exact coordinate collisions
    void check_simple() const;
};

// Hermitian kernel with a decay majorant: |K(x,y)| <= omega(|x-y|),
// sup |K| = sup_norm, intensity = K(0,0).
struct Kernel {
    std::function<std::complex<double>(const Point&, const Point&)> eval;
    double sup_norm = 1.0;
    std::function<double(double)> omega;
    double intensity = 1.0;
};

// Ginibre kernel in the sampler's coordinates (unit intensity):
// K(u,v) = exp(i pi Im(u vbar)) exp(-pi |u-v|^2 / 2), K(0,0) = 1.
Kernel ginibre_kernel();
// Ginibre kernel in eigenvalue coordinates scaled to unit trace density:
// K(u,v) = exp(i Im(u vbar)) exp(-|u-v|^2 / 2); omega(s) = exp(-s^2/2).
// Pair shape matches the raw eigenvalue ensemble; used for matrix bounds.
Kernel ginibre_kernel_standard();
// Real Gaussian kernel K(x,y) = exp(-|x-y|^2/(2 ell^2)) (permanental K = 2C).
Kernel gaussian_kernel(double ell);

// --- samplers -------------------------------------------------------------
// All samplers are pure functions of (parameters, rng state at entry).
// buffer_margin >= 0 enlarges the sampled cube on every side.

PointConfiguration sample_poisson(const Window& window, double buffer_margin,
                                  double intensity, RngStream& rng);

struct GinibreOptions {
    int max_matrix_dim = 4096;
    double spectral_margin = 4.0;  // added to the covering radius before squaring
};

// Eigenvalues of an N x N iid standard complex Gaussian matrix, divided by
// sqrt(pi) so the intensity is K(0,0) = 1, restricted to the cube.
PointConfiguration sample_ginibre(const Window& window, double buffer_margin,
                                  RngStream& rng,
                                  const GinibreOptions& opt = {});

// Independent beta-thinning of a Ginibre sample with coordinates rescaled by
// sqrt(beta); intensity stays 1, repulsion range shrinks with beta.
PointConfiguration sample_beta_ginibre(const Window& window, double beta,
                                       RngStream& rng,
                                       const GinibreOptions& opt = {});

// Matern II: Poisson(lambda_p) proposals with iid uniform marks; a proposal
// survives iff no proposal within h carries a smaller mark.
PointConfiguration sample_matern2(const Window& window, double buffer_margin,
                                  double lambda_p, double h, RngStream& rng);

PointConfiguration sample_matern_cluster(const Window& window,
                                         double buffer_margin,
                                         double parent_intensity,
                                         double mean_offspring,
                                         double cluster_radius, RngStream& rng);

struct PermanentalOptions {
    double ell = 1.0;        // Gaussian covariance length, C(s) = (1/2) e^{-s^2/(2 ell^2)}
    double grid_step = 0.0;  // 0 -> ell / 8
};

// Cox process directed by Z1^2 + Z2^2 where Z1, Z2 are iid mean-zero
// Gaussian fields with covariance C = K/2, sampled by circulant embedding
// on a periodic grid; points by thinning against the grid maximum with
// bilinear interpolation. d = 2 only.
PointConfiguration sample_permanental_cox(const Window& window,
                                          double buffer_margin, RngStream& rng,
                                          const PermanentalOptions& opt = {});

// Zeros of the degree-J truncation of sum_j X_j z^j / sqrt(j!), found as
// companion-matrix eigenvalues and filtered to the window. d = 2, zero
// intensity 1/pi. J = 0 selects the tail-safe default ceil(R^2 + 10 R + 20).
PointConfiguration sample_gef_zeros(const Window& window, RngStream& rng,
                                    int truncation = 0);

// Independent p-thinning.
PointConfiguration thin(const PointConfiguration& config, double p,
                        RngStream& rng);

// Multiset union of configurations over identical windows; exact coordinate
// collisions are rejected.
PointConfiguration superpose(std::span<const PointConfiguration> configs);

// Superposition of m iid (1/m)-thinned Ginibre samples (alpha = -1/m).
PointConfiguration sample_alpha_determinantal(const Window& window, int m,
                                              RngStream& rng,
                                              const GinibreOptions& opt = {});

// --- closed-form evaluators -------------------------------------------v---

// alpha-permanent correlation: sum over permutations of
// alpha^{k - nu(pi)} prod K(x_i, x_{pi(i)}); alpha = 0 means the Poisson
// product convention (identity permutation only). k <= 9.
double correlation_alpha(const Kernel& kernel, double alpha,
                         std::span<const Point> points);

// Exact law of the Ginibre point count in B_r(0), eigenvalue coordinates:
// Poisson-binomial of independent Bernoulli(lambda_i) with
// lambda_i = P(Gamma(i,1) <= r^2). Throws when the truncation leaves
// lambda_{T+1} >= 1e-12.
std::vector<double> ginibre_disk_count_pmf(double r, int truncation);

}  // namespace pplab
