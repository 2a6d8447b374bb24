#include "pplab/cumulants.hpp"

#include <algorithm>
#include <cmath>

namespace pplab {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// enumerate set partitions via restricted growth strings
void enumerate_partitions(int k, std::vector<Partition>& out) {
    std::vector<int> rgs(static_cast<std::size_t>(k), 0);
    for (;;) {
        int nblocks = 0;
        for (int v : rgs) nblocks = std::max(nblocks, v + 1);
        Partition p;
        p.blocks.assign(static_cast<std::size_t>(nblocks), {});
        for (int i = 0; i < k; ++i)
            p.blocks[static_cast<std::size_t>(rgs[static_cast<std::size_t>(i)])]
                .push_back(i);
        const int b = static_cast<int>(p.blocks.size());
        p.moebius_weight = ((b - 1) % 2 == 0 ? 1.0 : -1.0) * factorial(b - 1);
        out.push_back(std::move(p));
        // next restricted growth string
        int i = k - 1;
        for (; i > 0; --i) {
            int maxprev = 0;
            for (int q = 0; q < i; ++q)
                maxprev = std::max(maxprev, rgs[static_cast<std::size_t>(q)]);
            if (rgs[static_cast<std::size_t>(i)] <= maxprev) break;
        }
        if (i == 0) break;
        ++rgs[static_cast<std::size_t>(i)];
        for (int q = i + 1; q < k; ++q) rgs[static_cast<std::size_t>(q)] = 0;
    }
}

}  // namespace

PartitionTable::PartitionTable(int k) : k_(k) {
    if (k < 1 || k > 6)
        throw invalid_argument_error("partition table supports 1 <= k <= 6");
    enumerate_partitions(k, partitions_);
}

long PartitionTable::block_count(int j) const {
    long c = 0;
    for (const auto& p : partitions_)
        if (static_cast<int>(p.blocks.size()) == j) ++c;
    return c;
}

std::vector<double> cumulants_from_moments(std::span<const double> moments) {
    const int k = static_cast<int>(moments.size());
    if (k < 1 || k > 6)
        throw invalid_argument_error("cumulants_from_moments supports k <= 6");
    std::vector<double> cum(static_cast<std::size_t>(k), 0.0);
    for (int order = 1; order <= k; ++order) {
        const PartitionTable table(order);
        double s = 0.0;
        for (const auto& part : table.partitions()) {
            double prod = part.moebius_weight;
            for (const auto& block : part.blocks)
                prod *= moments[block.size() - 1];
            s += prod;
        }
        cum[static_cast<std::size_t>(order - 1)] = s;
    }
    return cum;
}

std::vector<double> moments_from_cumulants(std::span<const double> cumulants) {
    const int k = static_cast<int>(cumulants.size());
    if (k < 1 || k > 6)
        throw invalid_argument_error("moments_from_cumulants supports k <= 6");
    std::vector<double> mom(static_cast<std::size_t>(k), 0.0);
    for (int order = 1; order <= k; ++order) {
        const PartitionTable table(order);
        double s = 0.0;
        for (const auto& part : table.partitions()) {
            double prod = 1.0;  // complete Bell polynomial: weight one
            for (const auto& block : part.blocks)
                prod *= cumulants[block.size() - 1];
            s += prod;
        }
        mom[static_cast<std::size_t>(order - 1)] = s;
    }
    return mom;
}

double ursell_from_correlations(
    const std::function<double(std::span<const int>)>& block_moment, int p) {
    if (p < 1 || p > 6)
        throw invalid_argument_error("ursell_from_correlations supports p <= 6");
    const PartitionTable table(p);
    double s = 0.0;
    for (const auto& part : table.partitions()) {
        double prod = part.moebius_weight;
        for (const auto& block : part.blocks)
            prod *= block_moment(std::span<const int>(block));
        s += prod;
    }
    return s;
}

std::vector<DecayScanPoint> ursell_decay_scan(
    const std::function<double(std::span<const Point>)>& ursell_of_points,
    int p, std::span<const double> diameters, int trials, RngStream& rng) {
    std::vector<DecayScanPoint> out;
    for (double diam : diameters) {
        double worst = 0.0;
        for (int t = 0; t < trials; ++t) {
            std::vector<Point> pts;
            pts.reserve(static_cast<std::size_t>(p));
            for (int i = 0; i < p; ++i)
                pts.emplace_back(rng.uniform(), rng.uniform());
            double dmax = 0.0;
            for (int i = 0; i < p; ++i)
                for (int jj = i + 1; jj < p; ++jj)
                    dmax = std::max(dmax, dist(pts[static_cast<std::size_t>(i)],
                                               pts[static_cast<std::size_t>(jj)]));
            if (dmax <= 0.0) continue;
            const double scale = diam / dmax;
            for (auto& q : pts) {
                q[0] *= scale;
                q[1] *= scale;
            }
            worst = std::max(worst, std::abs(ursell_of_points(pts)));
        }
        out.push_back({diam, worst});
    }
    return out;
}

double KStatistics::value(int order) const {
    switch (order) {
        case 1: return k1;
        case 2: return k2;
        case 3: return k3;
        case 4: return k4;
        default: throw invalid_argument_error("k-statistics support order <= 4");
    }
}

double KStatistics::stderror(int order) const {
    switch (order) {
        case 1: return se1;
        case 2: return se2;
        case 3: return se3;
        case 4: return se4;
        default: throw invalid_argument_error("k-statistics support order <= 4");
    }
}

namespace {
// k-statistics from power sums; n treated as double throughout
void kstats_from_power_sums(double n, double s1, double s2, double s3,
                            double s4, double out[4]) {
    const double m = s1 / n;
    const double c2 = s2 / n - m * m;
    const double c3 = s3 / n - 3.0 * m * s2 / n + 2.0 * m * m * m;
    const double m4 =
        s4 / n - 4.0 * m * s3 / n + 6.0 * m * m * s2 / n - 3.0 * m * m * m * m;
    out[0] = m;
    out[1] = n / (n - 1.0) * c2;
    out[2] = n * n / ((n - 1.0) * (n - 2.0)) * c3;
    out[3] = n * n *
             ((n + 1.0) * m4 - 3.0 * (n - 1.0) * c2 * c2) /
             ((n - 1.0) * (n - 2.0) * (n - 3.0));
}
}  // namespace

KStatistics k_statistics(std::span<const double> samples) {
    const long n = static_cast<long>(samples.size());
    if (n < 5) throw invalid_argument_error("k_statistics needs >= 5 samples");
    // center on the sample mean first: the k-statistics are shift-equivariant
    // only in k1, and centering keeps the power sums well conditioned
    double rough = 0.0;
    for (double x : samples) rough += x;
    rough /= static_cast<double>(n);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (double x : samples) {
        const double y = x - rough;
        s1 += y;
        s2 += y * y;
        s3 += y * y * y;
        s4 += y * y * y * y;
    }
    KStatistics out;
    out.n = n;
    double k[4];
    kstats_from_power_sums(static_cast<double>(n), s1, s2, s3, s4, k);
    out.k1 = k[0] + rough;
    out.k2 = k[1];
    out.k3 = k[2];
    out.k4 = k[3];
    // delete-1 jackknife from the global power sums
    double mean_j[4] = {0, 0, 0, 0};
    std::vector<std::array<double, 4>> jack(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double y = samples[static_cast<std::size_t>(i)] - rough;
        double kj[4];
        kstats_from_power_sums(static_cast<double>(n - 1), s1 - y,
                               s2 - y * y, s3 - y * y * y, s4 - y * y * y * y,
                               kj);
        for (int q = 0; q < 4; ++q) {
            jack[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] = kj[q];
            mean_j[q] += kj[q];
        }
    }
    for (double& v : mean_j) v /= static_cast<double>(n);
    double var_j[4] = {0, 0, 0, 0};
    for (long i = 0; i < n; ++i)
        for (int q = 0; q < 4; ++q) {
            const double dv =
                jack[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] -
                mean_j[q];
            var_j[q] += dv * dv;
        }
    const double scale = (static_cast<double>(n) - 1.0) / static_cast<double>(n);
    out.se1 = std::sqrt(scale * var_j[0]);
    out.se2 = std::sqrt(scale * var_j[1]);
    out.se3 = std::sqrt(scale * var_j[2]);
    out.se4 = std::sqrt(scale * var_j[3]);
    return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw invalid_argument_error("slope fit needs matched x, y with n >= 2");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++used;
    }
    if (used < 2) throw invalid_argument_error("slope fit: fewer than 2 usable points");
    const double un = static_cast<double>(used);
    return (un * sxy - sx * sy) / (un * sxx - sx * sx);
}

CumulantLadder estimate_cumulant_ladder(
    const std::map<double, std::vector<double>>& per_n, int k_max) {
    if (k_max < 1 || k_max > 4)
        throw invalid_argument_error("cumulant ladder supports k <= 4");
    CumulantLadder ladder;
    for (const auto& [n, vals] : per_n) {
        const long r = static_cast<long>(vals.size());
        if (k_max >= 4 && r < 2000)
            throw invalid_argument_error("k = 4 ladder needs >= 2000 replicates");
        if (r < 500)
            throw invalid_argument_error("cumulant ladder needs >= 500 replicates");
        (void)n;
    }
    std::vector<double> ns;
    std::vector<std::vector<double>> values(static_cast<std::size_t>(k_max));
    for (const auto& [n, vals] : per_n) {
        const KStatistics ks = k_statistics(vals);
        ns.push_back(n);
        for (int order = 1; order <= k_max; ++order) {
            CumulantLadderRow row;
            row.n = n;
            row.order = order;
            row.value = ks.value(order);
            row.stderror = ks.stderror(order);
            values[static_cast<std::size_t>(order - 1)].push_back(row.value);
            const auto& hist = values[static_cast<std::size_t>(order - 1)];
            if (hist.size() >= 2) {
                std::vector<double> xs(ns.end() - static_cast<long>(hist.size()),
                                       ns.end());
                std::vector<double> ys;
                for (double v : hist) ys.push_back(std::abs(v));
                try {
                    row.slope_so_far = loglog_slope(xs, ys);
                } catch (const invalid_argument_error&) {
                    row.slope_so_far = 0.0;
                }
            }
            ladder.rows.push_back(row);
        }
        if (k_max >= 3) {
            const double denom = std::pow(ks.k2, 1.5);
            ladder.skew_ratio.push_back(std::abs(ks.k3) / denom);
            // first-order error propagation from (k3, k2)
            const double d3 = ks.se3 / denom;
            const double d2 = 1.5 * std::abs(ks.k3) * ks.se2 / (denom * ks.k2);
            ladder.skew_ratio_se.push_back(std::sqrt(d3 * d3 + d2 * d2));
        }
    }
    return ladder;
}

double kolmogorov_tail(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double s = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term =
            std::exp(-2.0 * j * j * lambda * lambda) * ((j % 2) ? 1.0 : -1.0);
        s += term;
        if (std::abs(term) < 1e-16) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

CltReport clt_diagnostics(std::span<const double> values) {
    const long n = static_cast<long>(values.size());
    if (n < 1000)
        throw invalid_argument_error("clt_diagnostics needs >= 1000 replicates");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (m2 <= 0.0) throw invalid_argument_error("degenerate sample: zero variance");
    CltReport rep;
    rep.n = n;
    rep.skewness = m3 / std::pow(m2, 1.5);
    rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    const double sd = std::sqrt(m2);
    std::vector<double> z(values.begin(), values.end());
    for (double& v : z) v = (v - mean) / sd;
    std::sort(z.begin(), z.end());
    double dmax = 0.0;
    for (long i = 0; i < n; ++i) {
        const double phi =
            0.5 * std::erfc(-z[static_cast<std::size_t>(i)] / std::sqrt(2.0));
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        dmax = std::max({dmax, std::abs(phi - lo), std::abs(phi - hi)});
    }
    rep.ks_distance = dmax;
    const double sn = std::sqrt(static_cast<double>(n));
    rep.ks_p_value = kolmogorov_tail((sn + 0.12 + 0.11 / sn) * dmax);
    return rep;
}

}  // namespace pplab
