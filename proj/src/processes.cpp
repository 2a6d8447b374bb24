#include "pplab/processes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <fftw3.h>

#include <boost/math/special_functions/gamma.hpp>

namespace pplab {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::string fmt_params(std::initializer_list<std::pair<const char*, double>> kv) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : kv) {
        if (!first) os << " ";
        first = false;
        os << k << "=" << v;
    }
    return os.str();
}

Window enlarged(const Window& w, double margin) {
    Window b = w;
    b.side = w.side + 2.0 * margin;
    b.volume = std::pow(b.side, w.dim);
    return b;
}

Point uniform_in_cube(const Window& w, int d, RngStream& rng) {
    Point p;
    p.dim = d;
    for (int c = 0; c < d; ++c) p[c] = rng.uniform(-w.half(), w.half());
    return p;
}

// eigenvalues of a complex matrix, column-major, eigenvalues only
std::vector<cplx> eigenvalues(std::vector<cplx>& a, int n) {
    std::vector<cplx> w(static_cast<std::size_t>(n));
    int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n,
                             w.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("zgeev failed, info != 0");
    return w;
}

}  // namespace

std::vector<int> PointConfiguration::window_point_ids() const {
    std::vector<int> ids;
    ids.reserve(points.size());
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
        if (window.contains(points[i])) ids.push_back(i);
    return ids;
}

void PointConfiguration::check_simple() const {
    std::vector<Point> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) {
        return a.coords < b.coords;
    });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].coords == sorted[i - 1].coords)
            throw invalid_argument_error("duplicate point coordinates");
}

Kernel ginibre_kernel() {
    Kernel k;
    k.eval = [](const Point& a, const Point& b) {
        const cplx u(a[0], a[1]), v(b[0], b[1]);
        const double im = std::imag(u * std::conj(v));
        return std::exp(cplx(-0.5 * kPi * dist2(a, b), kPi * im));
    };
    k.sup_norm = 1.0;
    k.omega = [](double s) { return std::exp(-0.5 * kPi * s * s); };
    k.intensity = 1.0;
    return k;
}

Kernel ginibre_kernel_standard() {
    Kernel k;
    k.eval = [](const Point& a, const Point& b) {
        const cplx u(a[0], a[1]), v(b[0], b[1]);
        const double im = std::imag(u * std::conj(v));
        return std::exp(cplx(-0.5 * dist2(a, b), im));
    };
    k.sup_norm = 1.0;
    k.omega = [](double s) { return std::exp(-0.5 * s * s); };
    k.intensity = 1.0;
    return k;
}

Kernel gaussian_kernel(double ell) {
    Kernel k;
    k.eval = [ell](const Point& a, const Point& b) {
        return cplx(std::exp(-0.5 * dist2(a, b) / (ell * ell)), 0.0);
    };
    k.sup_norm = 1.0;
    k.omega = [ell](double s) { return std::exp(-0.5 * s * s / (ell * ell)); };
    k.intensity = 1.0;
    return k;
}

PointConfiguration sample_poisson(const Window& window, double buffer_margin,
                                  double intensity, RngStream& rng) {
    if (!(intensity > 0.0))
        throw invalid_argument_error("intensity must be positive");
    PointConfiguration cfg;
    cfg.window = window;
    if (buffer_margin > 0.0) cfg.buffer = enlarged(window, buffer_margin);
    const Window& region = cfg.sampling_region();
    const long count = rng.poisson(intensity * region.volume);
    cfg.points.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
        cfg.points.push_back(uniform_in_cube(region, window.dim, rng));
    cfg.provenance = {"poisson", fmt_params({{"lambda", intensity}}), 0, 0};
    return cfg;
}

PointConfiguration sample_ginibre(const Window& window, double buffer_margin,
                                  RngStream& rng, const GinibreOptions& opt) {
    if (window.dim != 2)
        throw invalid_argument_error("ginibre sampler requires d = 2");
    PointConfiguration cfg;
    cfg.window = window;
    if (buffer_margin > 0.0) cfg.buffer = enlarged(window, buffer_margin);
    const Window& region = cfg.sampling_region();
    // covering radius in eigenvalue coordinates (points get divided by sqrt(pi))
    const double eig_radius = std::sqrt(kPi) * region.circumradius();
    const double root_n = eig_radius + opt.spectral_margin;
    const int n = static_cast<int>(std::ceil(root_n * root_n));
    if (n > opt.max_matrix_dim)
        throw invalid_argument_error(
            "ginibre: window too large for configured max matrix dimension");
    std::vector<cplx> a(static_cast<std::size_t>(n) * n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (auto& v : a) v = cplx(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
    const std::vector<cplx> eig = eigenvalues(a, n);
    const double scale = 1.0 / std::sqrt(kPi);
    for (const cplx& z : eig) {
        Point p(z.real() * scale, z.imag() * scale);
        if (region.contains(p)) cfg.points.push_back(p);
    }
    cfg.provenance = {"ginibre", fmt_params({{"N", static_cast<double>(n)}}), 0, 0};
    return cfg;
}

PointConfiguration sample_beta_ginibre(const Window& window, double beta,
                                       RngStream& rng,
                                       const GinibreOptions& opt) {
    if (!(beta > 0.0) || beta > 1.0)
        throw invalid_argument_error("beta must lie in (0, 1]");
    const double pre_side = window.side / std::sqrt(beta);
    Window pre = build_window(std::pow(pre_side, window.dim), window.dim);
    PointConfiguration gin = sample_ginibre(pre, 0.0, rng, opt);
    PointConfiguration cfg;
    cfg.window = window;
    const double s = std::sqrt(beta);
    for (const Point& p : gin.points) {
        if (rng.uniform() >= beta) continue;
        Point q(p[0] * s, p[1] * s);
        if (window.contains(q)) cfg.points.push_back(q);
    }
    cfg.provenance = {"beta_ginibre", fmt_params({{"beta", beta}}), 0, 0};
    return cfg;
}

PointConfiguration sample_matern2(const Window& window, double buffer_margin,
                                  double lambda_p, double h, RngStream& rng) {
    if (!(lambda_p > 0.0)) throw invalid_argument_error("lambda_p must be positive");
    if (h < 0.0) throw invalid_argument_error("hardcore radius must be >= 0");
    PointConfiguration cfg;
    cfg.window = window;
    if (buffer_margin > 0.0) cfg.buffer = enlarged(window, buffer_margin);
    const Window& region = cfg.sampling_region();
    // proposals must extend h beyond the kept region so thinning is exact
    const Window prop_region = enlarged(region, h);
    const long count = rng.poisson(lambda_p * prop_region.volume);
    std::vector<Point> proposals;
    std::vector<double> marks;
    proposals.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        proposals.push_back(uniform_in_cube(prop_region, window.dim, rng));
        marks.push_back(rng.uniform());
    }
    if (h == 0.0) {
        for (const auto& p : proposals)
            if (region.contains(p)) cfg.points.push_back(p);
    } else {
        SpatialIndex index(proposals, h);
        std::vector<int> nbrs;
        for (int i = 0; i < static_cast<int>(proposals.size()); ++i) {
            if (!region.contains(proposals[static_cast<std::size_t>(i)])) continue;
            index.query(proposals[static_cast<std::size_t>(i)], h, nbrs, i);
            bool retained = true;
            for (int j : nbrs)
                if (marks[static_cast<std::size_t>(j)] <
                    marks[static_cast<std::size_t>(i)]) {
                    retained = false;
                    break;
                }
            if (retained) cfg.points.push_back(proposals[static_cast<std::size_t>(i)]);
        }
    }
    cfg.provenance = {"matern2", fmt_params({{"lambda_p", lambda_p}, {"h", h}}), 0, 0};
    return cfg;
}

PointConfiguration sample_matern_cluster(const Window& window,
                                         double buffer_margin,
                                         double parent_intensity,
                                         double mean_offspring,
                                         double cluster_radius, RngStream& rng) {
    if (!(parent_intensity > 0.0) || !(mean_offspring > 0.0) ||
        !(cluster_radius > 0.0))
        throw invalid_argument_error("matern cluster parameters must be positive");
    PointConfiguration cfg;
    cfg.window = window;
    if (buffer_margin > 0.0) cfg.buffer = enlarged(window, buffer_margin);
    const Window& region = cfg.sampling_region();
    const Window parent_region = enlarged(region, cluster_radius);
    const long parents = rng.poisson(parent_intensity * parent_region.volume);
    const int d = window.dim;
    for (long i = 0; i < parents; ++i) {
        const Point parent = uniform_in_cube(parent_region, d, rng);
        const long kids = rng.poisson(mean_offspring);
        for (long k = 0; k < kids; ++k) {
            Point off;
            off.dim = d;
            // uniform in the d-ball by rejection
            for (;;) {
                double s2 = 0.0;
                for (int c = 0; c < d; ++c) {
                    off[c] = rng.uniform(-cluster_radius, cluster_radius);
                    s2 += off[c] * off[c];
                }
                if (s2 <= cluster_radius * cluster_radius) break;
            }
            for (int c = 0; c < d; ++c) off[c] += parent[c];
            if (region.contains(off)) cfg.points.push_back(off);
        }
    }
    cfg.provenance = {"matern_cluster",
                      fmt_params({{"parent", parent_intensity},
                                  {"mu", mean_offspring},
                                  {"Rc", cluster_radius}}),
                      0, 0};
    return cfg;
}

PointConfiguration sample_permanental_cox(const Window& window,
                                          double buffer_margin, RngStream& rng,
                                          const PermanentalOptions& opt) {
    if (window.dim != 2)
        throw invalid_argument_error("permanental sampler requires d = 2");
    const double ell = opt.ell;
    if (!(ell > 0.0)) throw invalid_argument_error("ell must be positive");
    double step = opt.grid_step > 0.0 ? opt.grid_step : ell / 8.0;
    if (step > ell / 4.0)
        throw invalid_argument_error("grid step too coarse relative to ell");
    PointConfiguration cfg;
    cfg.window = window;
    if (buffer_margin > 0.0) cfg.buffer = enlarged(window, buffer_margin);
    const Window& region = cfg.sampling_region();

    const double period = region.side + 6.0 * ell;
    int m = static_cast<int>(std::ceil(period / step));
    m += m % 2;
    const double delta = period / m;
    const std::size_t mm = static_cast<std::size_t>(m) * m;

    // periodized covariance on the torus grid
    std::vector<double> cov(mm);
    auto cval = [&](double dx, double dy) {
        double s = 0.0;
        for (int a = -1; a <= 1; ++a)
            for (int b = -1; b <= 1; ++b) {
                const double ux = dx - a * period, uy = dy - b * period;
                s += 0.5 * std::exp(-0.5 * (ux * ux + uy * uy) / (ell * ell));
            }
        return s;
    };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            cov[static_cast<std::size_t>(i) * m + j] = cval(i * delta, j * delta);

    fftw_complex* buf = fftw_alloc_complex(mm);
    for (std::size_t i = 0; i < mm; ++i) {
        buf[i][0] = cov[i];
        buf[i][1] = 0.0;
    }
    fftw_plan fwd = fftw_plan_dft_2d(m, m, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(fwd);
    fftw_destroy_plan(fwd);
    double lam_max = 0.0, lam_min = 0.0;
    std::vector<double> lam(mm);
    for (std::size_t i = 0; i < mm; ++i) {
        lam[i] = buf[i][0];
        lam_max = std::max(lam_max, lam[i]);
        lam_min = std::min(lam_min, lam[i]);
    }
    if (lam_min < -1e-8 * lam_max) {
        fftw_free(buf);
        throw invalid_argument_error(
            "covariance not embeddable at requested resolution");
    }
    // complex white noise; Re/Im of the synthesized field give two iid fields
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < mm; ++i) {
        const double s = std::sqrt(std::max(0.0, lam[i]));
        const double wr = rng.normal() * inv_sqrt2, wi = rng.normal() * inv_sqrt2;
        buf[i][0] = s * wr;
        buf[i][1] = s * wi;
    }
    fftw_plan bwd = fftw_plan_dft_2d(m, m, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(bwd);
    fftw_destroy_plan(bwd);
    // intensity Z1^2 + Z2^2 with Z = sqrt(2)/m * (Re, Im)
    std::vector<double> intensity(mm);
    double peak = 0.0;
    const double zscale = std::sqrt(2.0) / m;
    for (std::size_t i = 0; i < mm; ++i) {
        const double z1 = zscale * buf[i][0], z2 = zscale * buf[i][1];
        intensity[i] = z1 * z1 + z2 * z2;
        peak = std::max(peak, intensity[i]);
    }
    fftw_free(buf);

    // thin a dominating Poisson against the bilinear interpolation
    const double x0 = -0.5 * period, y0 = -0.5 * period;
    auto interp = [&](double x, double y) {
        double fx = (x - x0) / delta, fy = (y - y0) / delta;
        int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
        fx -= ix;
        fy -= iy;
        const int ix1 = (ix + 1) % m, iy1 = (iy + 1) % m;
        const double v00 = intensity[static_cast<std::size_t>(ix) * m + iy];
        const double v10 = intensity[static_cast<std::size_t>(ix1) * m + iy];
        const double v01 = intensity[static_cast<std::size_t>(ix) * m + iy1];
        const double v11 = intensity[static_cast<std::size_t>(ix1) * m + iy1];
        return (1 - fx) * ((1 - fy) * v00 + fy * v01) +
               fx * ((1 - fy) * v10 + fy * v11);
    };
    if (peak > 0.0) {
        const long count = rng.poisson(peak * region.volume);
        for (long i = 0; i < count; ++i) {
            const Point p = uniform_in_cube(region, 2, rng);
            if (rng.uniform() * peak <= interp(p[0], p[1])) cfg.points.push_back(p);
        }
    }
    cfg.provenance = {"permanental",
                      fmt_params({{"ell", ell}, {"step", delta}}), 0, 0};
    return cfg;
}

PointConfiguration sample_gef_zeros(const Window& window, RngStream& rng,
                                    int truncation) {
    if (window.dim != 2)
        throw invalid_argument_error("gef sampler requires d = 2");
    const double radius = window.circumradius();
    const int j_safe =
        static_cast<int>(std::ceil(radius * radius + 10.0 * radius + 20.0));
    int deg = truncation > 0 ? truncation : j_safe;
    if (deg < j_safe)
        throw invalid_argument_error("gef truncation below tail-safety bound");
    // scaled coefficients c_j = X_j s^j / sqrt(j!), s = sqrt(deg), roots z = s w
    const double s = std::sqrt(static_cast<double>(deg));
    const double logs = std::log(s);
    std::vector<cplx> coef(static_cast<std::size_t>(deg) + 1);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j <= deg; ++j) {
        const cplx x(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
        const double mag = std::exp(j * logs - 0.5 * std::lgamma(j + 1.0));
        coef[static_cast<std::size_t>(j)] = x * mag;
    }
    // companion matrix of the monic polynomial, column-major
    const cplx lead = coef[static_cast<std::size_t>(deg)];
    std::vector<cplx> a(static_cast<std::size_t>(deg) * deg, cplx(0.0, 0.0));
    for (int j = 0; j < deg; ++j)
        a[static_cast<std::size_t>(deg - 1) * deg + j] =
            -coef[static_cast<std::size_t>(j)] / lead;
    for (int j = 1; j < deg; ++j)
        a[static_cast<std::size_t>(j - 1) * deg + j] = cplx(1.0, 0.0);
    const std::vector<cplx> roots = eigenvalues(a, deg);

    PointConfiguration cfg;
    cfg.window = window;
    for (const cplx& w : roots) {
        const cplx z = s * w;
        Point p(z.real(), z.imag());
        if (window.contains(p)) cfg.points.push_back(p);
    }
    cfg.provenance = {"gef", fmt_params({{"J", static_cast<double>(deg)}}), 0, 0};
    return cfg;
}

PointConfiguration thin(const PointConfiguration& config, double p,
                        RngStream& rng) {
    if (p < 0.0 || p > 1.0)
        throw invalid_argument_error("retention probability must be in [0,1]");
    PointConfiguration out = config;
    out.points.clear();
    for (const Point& pt : config.points)
        if (rng.uniform() < p) out.points.push_back(pt);
    out.provenance.process = config.provenance.process + "+thin";
    return out;
}

PointConfiguration superpose(std::span<const PointConfiguration> configs) {
    if (configs.empty()) throw invalid_argument_error("superpose of nothing");
    PointConfiguration out;
    out.window = configs[0].window;
    out.buffer = configs[0].buffer;
    for (const auto& c : configs) {
        if (c.window.dim != out.window.dim ||
            std::abs(c.window.volume - out.window.volume) >
                1e-12 * out.window.volume)
            throw invalid_argument_error("superpose: window mismatch");
        out.points.insert(out.points.end(), c.points.begin(), c.points.end());
    }
    out.check_simple();
    out.provenance = {"superposition",
                      fmt_params({{"m", static_cast<double>(configs.size())}}),
                      0, 0};
    return out;
}

PointConfiguration sample_alpha_determinantal(const Window& window, int m,
                                              RngStream& rng,
                                              const GinibreOptions& opt) {
    if (m < 1) throw invalid_argument_error("m must be >= 1");
    std::vector<PointConfiguration> parts;
    parts.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        PointConfiguration g = sample_ginibre(window, 0.0, rng, opt);
        parts.push_back(thin(g, 1.0 / m, rng));
    }
    PointConfiguration out = superpose(parts);
    out.provenance = {"alpha_determinantal",
                      fmt_params({{"m", static_cast<double>(m)}}), 0, 0};
    return out;
}

double correlation_alpha(const Kernel& kernel, double alpha,
                         std::span<const Point> points) {
    const int k = static_cast<int>(points.size());
    if (k < 1 || k > 9)
        throw invalid_argument_error("correlation_alpha supports 1 <= k <= 9");
    std::vector<std::vector<cplx>> kmat(static_cast<std::size_t>(k),
                                        std::vector<cplx>(static_cast<std::size_t>(k)));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            kmat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                kernel.eval(points[static_cast<std::size_t>(i)],
                            points[static_cast<std::size_t>(j)]);
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    cplx total(0.0, 0.0);
    std::vector<bool> seen(static_cast<std::size_t>(k));
    do {
        int cycles = 0;
        std::fill(seen.begin(), seen.end(), false);
        for (int i = 0; i < k; ++i) {
            if (seen[static_cast<std::size_t>(i)]) continue;
            ++cycles;
            int j = i;
            while (!seen[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = true;
                j = perm[static_cast<std::size_t>(j)];
            }
        }
        double w;
        if (alpha == 0.0) {
            w = (cycles == k) ? 1.0 : 0.0;  // Poisson: identity only
        } else {
            w = std::pow(alpha, k - cycles);
        }
        if (w != 0.0) {
            cplx prod(1.0, 0.0);
            for (int i = 0; i < k; ++i)
                prod *= kmat[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
            total += w * prod;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total.real();
}

std::vector<double> ginibre_disk_count_pmf(double r, int truncation) {
    if (!(r > 0.0)) throw invalid_argument_error("radius must be positive");
    if (truncation < 1) throw invalid_argument_error("truncation must be >= 1");
    const double r2 = r * r;
    const double tail = boost::math::gamma_p(truncation + 1.0, r2);
    if (tail >= 1e-12)
        throw invalid_argument_error(
            "truncation too small: Bernoulli weight beyond it exceeds 1e-12");
    std::vector<double> pmf{1.0};
    for (int i = 1; i <= truncation; ++i) {
        const double lam = boost::math::gamma_p(static_cast<double>(i), r2);
        pmf.push_back(0.0);
        for (int c = static_cast<int>(pmf.size()) - 1; c >= 1; --c)
            pmf[static_cast<std::size_t>(c)] =
                pmf[static_cast<std::size_t>(c)] * (1.0 - lam) +
                pmf[static_cast<std::size_t>(c - 1)] * lam;
        pmf[0] *= (1.0 - lam);
    }
    return pmf;
}

}  // namespace pplab
