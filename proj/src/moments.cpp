#include "pplab/moments.hpp"

#include <cmath>
#include <numbers>

namespace pplab {

namespace {
constexpr double kPi = std::numbers::pi;

ValueWithError mean_and_se(const std::vector<double>& v) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

// exact cube set-covariance Vol(W ∩ (W - z))
double cube_set_covariance(const Window& w, const Point& z) {
    double v = 1.0;
    for (int c = 0; c < w.dim; ++c) v *= std::max(0.0, w.side - std::abs(z[c]));
    return v;
}
}  // namespace

double shell_measure(int d, double s_mid, double width) {
    switch (d) {
        case 1: return 2.0 * width;
        case 2: return 2.0 * kPi * s_mid * width;
        case 3: return 4.0 * kPi * s_mid * s_mid * width;
        default: throw invalid_argument_error("dimension must be 1, 2, or 3");
    }
}

ValueWithError estimate_m1(const ScoreFunction& score,
                           std::span<const PointConfiguration> configs) {
    if (configs.size() < 30)
        throw invalid_argument_error("estimate_m1 needs at least 30 replicates");
    std::vector<double> vals;
    vals.reserve(configs.size());
    for (const auto& cfg : configs)
        vals.push_back(buffered_statistic(score, cfg).value / cfg.window.volume);
    return mean_and_se(vals);
}

MomentEstimate estimate_m2_radial(const ScoreFunction& score,
                                  std::span<const PointConfiguration> configs,
                                  double bin_width, double max_range) {
    if (configs.empty()) throw invalid_argument_error("no replicates");
    if (!(bin_width > 0.0)) throw invalid_argument_error("bin width must be positive");
    const int d = configs[0].window.dim;
    const int nbins = static_cast<int>(std::ceil(max_range / bin_width));
    MomentEstimate est;
    est.bin_width = bin_width;
    est.max_range = nbins * bin_width;
    est.dim = d;
    est.replicates = static_cast<int>(configs.size());
    est.s_mid.resize(static_cast<std::size_t>(nbins));
    for (int b = 0; b < nbins; ++b)
        est.s_mid[static_cast<std::size_t>(b)] = (b + 0.5) * bin_width;

    std::vector<std::vector<double>> per_rep(
        static_cast<std::size_t>(nbins),
        std::vector<double>(configs.size(), 0.0));
    std::vector<long> counts(static_cast<std::size_t>(nbins), 0);
    std::vector<double> m1_vals, sq_vals;

    std::vector<int> nb;
    for (std::size_t rep = 0; rep < configs.size(); ++rep) {
        const PointConfiguration& cfg = configs[rep];
        ScoreEvaluator ev(score, cfg);
        const std::vector<int> wids = cfg.window_point_ids();
        std::vector<double> xi(cfg.points.size(), 0.0);
        double h = 0.0, sq = 0.0;
        std::vector<bool> in_window(cfg.points.size(), false);
        for (int id : wids) {
            xi[static_cast<std::size_t>(id)] = ev.score(id);
            in_window[static_cast<std::size_t>(id)] = true;
            h += xi[static_cast<std::size_t>(id)];
            sq += xi[static_cast<std::size_t>(id)] * xi[static_cast<std::size_t>(id)];
        }
        m1_vals.push_back(h / cfg.window.volume);
        sq_vals.push_back(sq / cfg.window.volume);
        for (int id : wids) {
            ev.index().query(cfg.points[static_cast<std::size_t>(id)],
                             est.max_range, nb, id);
            for (int other : nb) {
                if (!in_window[static_cast<std::size_t>(other)]) continue;
                if (other <= id) continue;  // unordered pair once, weight 2 below
                const Point& a = cfg.points[static_cast<std::size_t>(id)];
                const Point& bpt = cfg.points[static_cast<std::size_t>(other)];
                const double s = dist(a, bpt);
                const int bin = static_cast<int>(s / bin_width);
                if (bin < 0 || bin >= nbins) continue;
                Point z;
                z.dim = d;
                for (int c = 0; c < d; ++c) z[c] = a[c] - bpt[c];
                const double cw = cube_set_covariance(cfg.window, z);
                if (cw <= 0.0) continue;
                per_rep[static_cast<std::size_t>(bin)][rep] +=
                    2.0 * xi[static_cast<std::size_t>(id)] *
                    xi[static_cast<std::size_t>(other)] / cw;
                counts[static_cast<std::size_t>(bin)] += 1;
            }
        }
    }

    est.m2.resize(static_cast<std::size_t>(nbins));
    est.m2_stderr.resize(static_cast<std::size_t>(nbins));
    est.pair_count.assign(counts.begin(), counts.end());
    est.empty_bin.resize(static_cast<std::size_t>(nbins));
    for (int b = 0; b < nbins; ++b) {
        const double shell = shell_measure(d, est.s_mid[static_cast<std::size_t>(b)],
                                           bin_width);
        for (double& v : per_rep[static_cast<std::size_t>(b)]) v /= shell;
        const ValueWithError we = mean_and_se(per_rep[static_cast<std::size_t>(b)]);
        est.m2[static_cast<std::size_t>(b)] = we.value;
        est.m2_stderr[static_cast<std::size_t>(b)] = we.stderror;
        est.empty_bin[static_cast<std::size_t>(b)] =
            counts[static_cast<std::size_t>(b)] == 0;
    }
    est.m1 = mean_and_se(m1_vals);
    est.sq_term = mean_and_se(sq_vals);
    return est;
}

SigmaSqResult sigma_sq_plugin(const MomentEstimate& est) {
    if (est.m2.empty()) throw invalid_argument_error("empty profile");
    SigmaSqResult out;
    const double m1sq = est.m1.value * est.m1.value;
    double integral = 0.0, var = 0.0;
    for (std::size_t b = 0; b < est.m2.size(); ++b) {
        const double shell =
            shell_measure(est.dim, est.s_mid[b], est.bin_width);
        integral += (est.m2[b] - m1sq) * shell;
        var += est.m2_stderr[b] * est.m2_stderr[b] * shell * shell;
    }
    out.value = est.sq_term.value + integral;
    out.tail_bound =
        std::abs(est.m2.back() - m1sq) *
        shell_measure(est.dim, est.s_mid.back(), est.bin_width);
    out.stderror = std::sqrt(var + est.sq_term.stderror * est.sq_term.stderror);
    return out;
}

SigmaSqResult sigma_sq_surface(const MomentEstimate& est) {
    if (est.m2.empty()) throw invalid_argument_error("empty profile");
    SigmaSqResult out;
    const double m1sq = est.m1.value * est.m1.value;
    const double cd = boundary_overlap_angular_coeff(est.dim);
    double integral = 0.0, var = 0.0;
    for (std::size_t b = 0; b < est.m2.size(); ++b) {
        const double w =
            cd * est.s_mid[b] * shell_measure(est.dim, est.s_mid[b], est.bin_width);
        integral += (m1sq - est.m2[b]) * w;
        var += est.m2_stderr[b] * est.m2_stderr[b] * w * w;
    }
    out.value = integral;
    out.tail_bound = std::abs(m1sq - est.m2.back()) * cd * est.s_mid.back() *
                     shell_measure(est.dim, est.s_mid.back(), est.bin_width);
    out.stderror = std::sqrt(var);
    return out;
}

DecayCurve factorization_error_curve(const MomentEstimate& est) {
    DecayCurve curve;
    const double m1sq = est.m1.value * est.m1.value;
    curve.s = est.s_mid;
    curve.error.resize(est.m2.size());
    curve.stderror = est.m2_stderr;
    for (std::size_t b = 0; b < est.m2.size(); ++b)
        curve.error[b] = std::abs(est.m2[b] - m1sq);
    curve.envelope.resize(est.m2.size());
    double running = 0.0;
    for (std::size_t b = est.m2.size(); b-- > 0;) {
        running = std::max(running, curve.error[b]);
        curve.envelope[b] = running;
    }
    return curve;
}

}  // namespace pplab
