#include "pplab/fme.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pplab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieTol = 1e-12;

std::array<double, 3> polar_key(const Point& p) {
    const double r = norm(p);
    if (p.dim == 1) return {r, p[0] >= 0.0 ? 0.0 : kPi, 0.0};
    if (p.dim == 2) {
        double ang = std::atan2(p[1], p[0]);
        if (ang < 0) ang += 2.0 * kPi;
        return {r, ang, 0.0};
    }
    const double incl = r > 0.0 ? std::acos(std::clamp(p[2] / r, -1.0, 1.0)) : 0.0;
    double az = std::atan2(p[1], p[0]);
    if (az < 0) az += 2.0 * kPi;
    return {r, incl, az};
}

// brute-force score on an explicit small configuration; x = pts[xid]
double score_on_list(const ScoreFunction& s, std::size_t xid,
                     const std::vector<Point>& pts) {
    const Point& x = pts[xid];
    switch (s.family) {
        case ScoreFamily::kConstOne:
            return 1.0;
        case ScoreFamily::kEdgeLength: {
            double acc = 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (i == xid) continue;
                const double d = dist(x, pts[i]);
                if (d <= s.r + kTieTol) acc += d;
            }
            return 0.5 * acc;
        }
        case ScoreFamily::kCliqueCount: {
            const int k = s.k;
            if (k == 1) return 1.0;
            std::vector<std::size_t> others;
            for (std::size_t i = 0; i < pts.size(); ++i)
                if (i != xid) others.push_back(i);
            if (static_cast<int>(others.size()) < k - 1) return 0.0;
            long hits = 0;
            std::vector<int> comb(static_cast<std::size_t>(k - 1));
            for (int i = 0; i < k - 1; ++i) comb[static_cast<std::size_t>(i)] = i;
            std::vector<Point> simplex(static_cast<std::size_t>(k));
            simplex[0] = x;
            for (;;) {
                for (int i = 0; i < k - 1; ++i)
                    simplex[static_cast<std::size_t>(i + 1)] =
                        pts[others[static_cast<std::size_t>(
                            comb[static_cast<std::size_t>(i)])]];
                if (miniball(simplex).radius <= s.r + kTieTol) ++hits;
                int i = k - 2;
                for (; i >= 0; --i)
                    if (comb[static_cast<std::size_t>(i)] <
                        static_cast<int>(others.size()) - (k - 1) + i)
                        break;
                if (i < 0) break;
                ++comb[static_cast<std::size_t>(i)];
                for (int q = i + 1; q < k - 1; ++q)
                    comb[static_cast<std::size_t>(q)] =
                        comb[static_cast<std::size_t>(q - 1)] + 1;
            }
            return static_cast<double>(hits) / k;
        }
        default:
            throw invalid_argument_error(
                "score family not supported on explicit lists");
    }
}

double palm_product(const ScoreFunction& s, const std::vector<Point>& anchors,
                    const std::vector<int>& exponents,
                    const std::vector<Point>& extra) {
    std::vector<Point> all = anchors;
    all.insert(all.end(), extra.begin(), extra.end());
    double prod = 1.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        const double xi = score_on_list(s, i, all);
        double powv = 1.0;
        for (int e = 0; e < exponents[i]; ++e) powv *= xi;
        prod *= powv;
    }
    return prod;
}

// nested difference over ys[from..): exact pairwise cancellation when some
// y never changes psi
double nested_difference(const ConfigFunctional& psi,
                         std::span<const Point> ys, std::size_t from,
                         std::vector<Point>& config) {
    if (from == ys.size()) return psi(config);
    config.push_back(ys[from]);
    const double with = nested_difference(psi, ys, from + 1, config);
    config.pop_back();
    const double without = nested_difference(psi, ys, from + 1, config);
    return with - without;
}

}  // namespace

bool polar_less(const Point& a, const Point& b) {
    return polar_key(a) < polar_key(b);
}

std::vector<Point> restrict_below(std::span<const Point> config,
                                  const Point& x) {
    std::vector<Point> out;
    for (const Point& p : config)
        if (polar_less(p, x)) out.push_back(p);
    return out;
}

double difference_kernel(const ConfigFunctional& psi, std::span<const Point> ys,
                         std::span<const Point> mu) {
    const std::size_t l = ys.size();
    if (l == 0) {
        const std::vector<Point> empty;
        return psi(empty);
    }
    if (l > 12) throw invalid_argument_error("difference kernel supports l <= 12");
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = i + 1; j < l; ++j)
            if (ys[i].coords == ys[j].coords)
                throw invalid_argument_error("duplicate difference arguments");
    // y* = polar minimum; base measure mu restricted strictly below it
    std::size_t imin = 0;
    for (std::size_t i = 1; i < l; ++i)
        if (polar_less(ys[i], ys[imin])) imin = i;
    std::vector<Point> config = restrict_below(mu, ys[imin]);
    return nested_difference(psi, ys, 0, config);
}

bool fme_vanishing_check(const ConfigFunctional& psi, std::span<const Point> ys,
                         std::span<const Point> anchors, double r,
                         std::span<const Point> mu) {
    (void)anchors;
    (void)r;
    const double d = difference_kernel(psi, ys, mu);
    return d == 0.0;
}

ConfigFunctional palm_product_functional(const ScoreFunction& score,
                                         std::vector<Point> anchors,
                                         std::vector<int> exponents,
                                         const Window& window) {
    (void)window;
    if (anchors.size() != exponents.size())
        throw invalid_argument_error("anchors and exponents must match");
    return [score, anchors = std::move(anchors),
            exponents = std::move(exponents)](const std::vector<Point>& mu) {
        return palm_product(score, anchors, exponents, mu);
    };
}

int u_statistic_order(const ScoreFunction& score) {
    switch (score.family) {
        case ScoreFamily::kConstOne: return 1;
        case ScoreFamily::kEdgeLength: return 2;
        case ScoreFamily::kCliqueCount: return score.k;
        case ScoreFamily::kDegree: return score.k + 2;
        default:
            throw invalid_argument_error("score is not a plain U-statistic");
    }
}

FmeResult fme_truncated_expectation(const ScoreFunction& score,
                                    std::span<const Point> anchors,
                                    std::span<const int> exponents,
                                    double lambda, const Window& window,
                                    long mc_samples, RngStream& rng) {
    if (!(lambda > 0.0) || lambda > 5.0)
        throw invalid_argument_error("lambda must lie in (0, 5]");
    if (window.volume > 4.0)
        throw invalid_argument_error("window volume must be <= 4");
    const int order = u_statistic_order(score);
    int ksum = 0;
    for (int e : exponents) ksum += e;
    const int big_l = (order - 1) * ksum;

    const ConfigFunctional psi = palm_product_functional(
        score, std::vector<Point>(anchors.begin(), anchors.end()),
        std::vector<int>(exponents.begin(), exponents.end()), window);

    FmeResult out;
    out.truncation_order = big_l;
    const std::vector<Point> empty;
    out.terms.push_back(psi(empty));
    const int d = window.dim;
    std::vector<Point> ys;
    for (int l = 1; l <= big_l; ++l) {
        double acc = 0.0;
        for (long s = 0; s < mc_samples; ++s) {
            ys.clear();
            for (int i = 0; i < l; ++i) {
                Point y;
                y.dim = d;
                for (int c = 0; c < d; ++c)
                    y[c] = rng.uniform(-window.half(), window.half());
                ys.push_back(y);
            }
            acc += difference_kernel(psi, ys, empty);
        }
        double factor = 1.0;
        for (int i = 1; i <= l; ++i) factor *= lambda * window.volume / i;
        out.terms.push_back(factor * acc / static_cast<double>(mc_samples));
    }
    for (double t : out.terms) out.value += t;
    return out;
}

double palm_direct_expectation(const ScoreFunction& score,
                               std::span<const Point> anchors,
                               std::span<const int> exponents, double lambda,
                               const Window& window, long mc_samples,
                               RngStream& rng) {
    if (!(lambda > 0.0)) throw invalid_argument_error("lambda must be positive");
    const std::vector<Point> anchor_vec(anchors.begin(), anchors.end());
    const std::vector<int> exp_vec(exponents.begin(), exponents.end());
    const int d = window.dim;
    double acc = 0.0;
    std::vector<Point> extra;
    for (long s = 0; s < mc_samples; ++s) {
        extra.clear();
        const long count = rng.poisson(lambda * window.volume);
        for (long i = 0; i < count; ++i) {
            Point y;
            y.dim = d;
            for (int c = 0; c < d; ++c)
                y[c] = rng.uniform(-window.half(), window.half());
            extra.push_back(y);
        }
        acc += palm_product(score, anchor_vec, exp_vec, extra);
    }
    return acc / static_cast<double>(mc_samples);
}

}  // namespace pplab
