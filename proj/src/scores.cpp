#include "pplab/scores.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace pplab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTieTol = 1e-12;
constexpr int kNeighborCap = 64;

// next (k)-combination of indices into [0, n)
bool next_combination(std::vector<int>& c, int n) {
    const int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[static_cast<std::size_t>(i)] < n - k + i) {
            ++c[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

bool lex_less(const Point& a, const Point& b) { return a.coords < b.coords; }

// Halton low-discrepancy sequence, bases 2 and 3
double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    int i = index;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

// deterministic nodes filling the unit disk uniformly in area
const std::vector<std::pair<double, double>>& unit_disk_nodes(int count) {
    static std::vector<std::pair<double, double>> cache;
    if (static_cast<int>(cache.size()) != count) {
        cache.clear();
        cache.reserve(static_cast<std::size_t>(count));
        for (int i = 1; i <= count; ++i) {
            const double s = std::sqrt(halton(i, 2));
            const double th = 2.0 * kPi * halton(i, 3);
            cache.emplace_back(s * std::cos(th), s * std::sin(th));
        }
    }
    return cache;
}

}  // namespace

std::string ScoreFunction::tag() const {
    std::ostringstream os;
    switch (family) {
        case ScoreFamily::kConstOne: os << "const_one"; break;
        case ScoreFamily::kCliqueCount: os << "clique_count k=" << k << " r=" << r; break;
        case ScoreFamily::kEdgeLength: os << "edge_length r=" << r; break;
        case ScoreFamily::kDegree: os << "degree k=" << k << " r=" << r; break;
        case ScoreFamily::kMorse: os << "morse k=" << k << " r=" << r; break;
        case ScoreFamily::kCoverage: os << "coverage k=" << k << " r=" << r; break;
        case ScoreFamily::kIntrinsicVolume: os << "intrinsic j=" << j << " r=" << r; break;
        case ScoreFamily::kKnnEdgeLength: os << "knn_edge_length k=" << k; break;
    }
    return os.str();
}

ScoreFunction const_one_score() { return {ScoreFamily::kConstOne, 0.0, 1, 0, 0}; }

ScoreFunction clique_count_score(int k, double r) {
    if (k < 1) throw invalid_argument_error("clique order must be >= 1");
    return {ScoreFamily::kCliqueCount, r, k, 0, 0};
}

ScoreFunction edge_length_score(double r) {
    if (!(r > 0.0)) throw invalid_argument_error("radius must be positive");
    return {ScoreFamily::kEdgeLength, r, 2, 0, 0};
}

ScoreFunction degree_score(int k, double r) {
    if (k < 1) throw invalid_argument_error("degree order must be >= 1");
    return {ScoreFamily::kDegree, r, k, 0, 0};
}

ScoreFunction morse_score(int k, double r) {
    if (k < 1 || k > 2) throw invalid_argument_error("morse index must be 1 or 2");
    if (!(r > 0.0)) throw invalid_argument_error("radius must be positive");
    return {ScoreFamily::kMorse, r, k, 0, 0};
}

ScoreFunction coverage_score(int k, double r, int quadrature_nodes) {
    if (k < 1) throw invalid_argument_error("coverage order must be >= 1");
    if (quadrature_nodes < 16)
        throw invalid_argument_error("too few quadrature nodes");
    return {ScoreFamily::kCoverage, r, k, 0, quadrature_nodes};
}

ScoreFunction intrinsic_volume_score(int j, double r) {
    if (j < 0 || j > 2)
        throw invalid_argument_error("intrinsic volume index must be 0, 1, or 2");
    return {ScoreFamily::kIntrinsicVolume, r, 1, j, 0};
}

ScoreFunction knn_edge_length_score(int k) {
    if (k < 1) throw invalid_argument_error("knn order must be >= 1");
    return {ScoreFamily::kKnnEdgeLength, 0.0, k, 0, 0};
}

double declared_stabilization_radius(const ScoreFunction& s) {
    switch (s.family) {
        case ScoreFamily::kConstOne: return 0.0;
        case ScoreFamily::kCliqueCount: return 2.0 * s.r;
        case ScoreFamily::kEdgeLength: return s.r;
        case ScoreFamily::kDegree: return 4.0 * s.r;
        case ScoreFamily::kMorse: return 2.0 * s.r;
        case ScoreFamily::kCoverage: return 2.0 * s.r;
        case ScoreFamily::kIntrinsicVolume: return 2.0 * s.r;
        case ScoreFamily::kKnnEdgeLength:
            return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

DiskIntersection disk_intersection(std::span<const Point> centers, double r) {
    DiskIntersection out;
    if (centers.empty() || !(r > 0.0)) return out;
    // dedup identical centers (equal disks)
    std::vector<Point> cs;
    for (const auto& c : centers) {
        bool dup = false;
        for (const auto& d : cs)
            if (d.coords == c.coords) { dup = true; break; }
        if (!dup) cs.push_back(c);
    }
    const Ball mb = miniball(cs);
    if (mb.radius > r + kTieTol) return out;  // empty common intersection
    out.nonempty = true;
    if (cs.size() == 1) {
        out.area = kPi * r * r;
        out.perimeter = 2.0 * kPi * r;
        return out;
    }
    const int m = static_cast<int>(cs.size());
    double area = 0.0, perim = 0.0;
    for (int i = 0; i < m; ++i) {
        // intersect the inside-arcs of circle i over all other disks;
        // every constraint arc has length <= pi so the running intersection
        // stays a single arc
        double start = 0.0, len = 2.0 * kPi;
        bool alive = true;
        for (int jj = 0; jj < m && alive; ++jj) {
            if (jj == i) continue;
            const double d = dist(cs[static_cast<std::size_t>(i)],
                                  cs[static_cast<std::size_t>(jj)]);
            if (d > 2.0 * r) { alive = false; break; }
            const double alpha = std::acos(std::clamp(d / (2.0 * r), -1.0, 1.0));
            const double phi =
                std::atan2(cs[static_cast<std::size_t>(jj)][1] - cs[static_cast<std::size_t>(i)][1],
                           cs[static_cast<std::size_t>(jj)][0] - cs[static_cast<std::size_t>(i)][0]);
            double bs = phi - alpha, bl = 2.0 * alpha;
            if (len >= 2.0 * kPi - 1e-15) {
                start = bs;
                len = bl;
                continue;
            }
            // place b relative to [start, start+len]
            double s = std::fmod(bs - start, 2.0 * kPi);
            if (s < 0) s += 2.0 * kPi;
            double best_lo = 0.0, best_len = -1.0;
            for (int shift = -1; shift <= 0; ++shift) {
                const double lo = std::max(0.0, s + shift * 2.0 * kPi);
                const double hi = std::min(len, s + shift * 2.0 * kPi + bl);
                if (hi - lo > best_len) { best_len = hi - lo; best_lo = lo; }
            }
            if (best_len <= 0.0) { alive = false; break; }
            start += best_lo;
            len = best_len;
        }
        if (!alive || len <= 1e-12) continue;
        const double a = start, b = start + len;
        const double cx = cs[static_cast<std::size_t>(i)][0];
        const double cy = cs[static_cast<std::size_t>(i)][1];
        area += 0.5 * (r * r * (b - a) +
                       r * (cx * (std::sin(b) - std::sin(a)) -
                            cy * (std::cos(b) - std::cos(a))));
        perim += r * (b - a);
    }
    out.area = std::max(0.0, area);
    out.perimeter = perim;
    return out;
}

struct ScoreEvaluator::Impl {
    ScoreFunction score;
    PointConfiguration cfg;
    SpatialIndex idx;
    // knn caches
    std::vector<std::vector<int>> knn_out;   // directed k nearest
    std::vector<std::vector<int>> edges;     // undirected incident lists
    double mean_spacing = 1.0;

    Impl(const ScoreFunction& s, const PointConfiguration& c) : score(s), cfg(c) {
        cfg.check_simple();
        double cell = 1.0;
        const double n_pts = std::max<std::size_t>(1, cfg.points.size());
        const Window& region = cfg.sampling_region();
        mean_spacing =
            std::pow(region.volume / static_cast<double>(n_pts), 1.0 / region.dim);
        switch (s.family) {
            case ScoreFamily::kConstOne: cell = std::max(1.0, mean_spacing); break;
            case ScoreFamily::kEdgeLength: cell = s.r; break;
            case ScoreFamily::kCoverage: cell = s.r; break;
            case ScoreFamily::kKnnEdgeLength:
                cell = std::max(mean_spacing, 1e-9);
                break;
            default: cell = 2.0 * s.r; break;
        }
        idx = SpatialIndex(cfg.points, std::max(cell, 1e-9));
        if (s.family == ScoreFamily::kKnnEdgeLength) build_knn();
    }

    // ids within radius, sorted ascending for reproducible enumeration
    std::vector<int> sorted_neighbors(int id, double radius) const {
        std::vector<int> nb =
            idx.neighbors_within(cfg.points[static_cast<std::size_t>(id)], radius, id);
        return nb;
    }

    void build_knn() {
        const int n = static_cast<int>(cfg.points.size());
        knn_out.assign(static_cast<std::size_t>(n), {});
        edges.assign(static_cast<std::size_t>(n), {});
        const int k = score.k;
        std::vector<int> cand;
        for (int i = 0; i < n; ++i) {
            const Point& x = cfg.points[static_cast<std::size_t>(i)];
            double radius = std::max(mean_spacing * (1.0 + std::sqrt(1.0 * k)), 1e-9);
            for (;;) {
                idx.query(x, radius, cand, i);
                if (static_cast<int>(cand.size()) >= k ||
                    static_cast<int>(cand.size()) >= n - 1)
                    break;
                radius *= 2.0;
            }
            std::sort(cand.begin(), cand.end(), [&](int a, int b) {
                const double da = dist2(x, cfg.points[static_cast<std::size_t>(a)]);
                const double db = dist2(x, cfg.points[static_cast<std::size_t>(b)]);
                if (da != db) return da < db;
                return lex_less(cfg.points[static_cast<std::size_t>(a)],
                                cfg.points[static_cast<std::size_t>(b)]);
            });
            // the query radius must certify the k-th distance
            while (static_cast<int>(cand.size()) > k &&
                   dist(x, cfg.points[static_cast<std::size_t>(
                               cand[static_cast<std::size_t>(k - 1)])]) > radius) {
                radius *= 2.0;
                idx.query(x, radius, cand, i);
                std::sort(cand.begin(), cand.end(), [&](int a, int b) {
                    const double da = dist2(x, cfg.points[static_cast<std::size_t>(a)]);
                    const double db = dist2(x, cfg.points[static_cast<std::size_t>(b)]);
                    if (da != db) return da < db;
                    return lex_less(cfg.points[static_cast<std::size_t>(a)],
                                    cfg.points[static_cast<std::size_t>(b)]);
                });
            }
            if (static_cast<int>(cand.size()) > k) cand.resize(static_cast<std::size_t>(k));
            knn_out[static_cast<std::size_t>(i)] = cand;
        }
        for (int i = 0; i < n; ++i)
            for (int j : knn_out[static_cast<std::size_t>(i)]) {
                edges[static_cast<std::size_t>(i)].push_back(j);
                edges[static_cast<std::size_t>(j)].push_back(i);
            }
        for (auto& e : edges) {
            std::sort(e.begin(), e.end());
            e.erase(std::unique(e.begin(), e.end()), e.end());
        }
    }

    double eval(int id) const {
        const Point& x = cfg.points[static_cast<std::size_t>(id)];
        switch (score.family) {
            case ScoreFamily::kConstOne:
                return 1.0;
            case ScoreFamily::kEdgeLength: {
                double s = 0.0;
                for (int nb : sorted_neighbors(id, score.r))
                    s += dist(x, cfg.points[static_cast<std::size_t>(nb)]);
                return 0.5 * s;
            }
            case ScoreFamily::kCliqueCount:
                return clique(id);
            case ScoreFamily::kDegree:
                return degree(id);
            case ScoreFamily::kMorse:
                return morse(id);
            case ScoreFamily::kCoverage:
                return coverage(id);
            case ScoreFamily::kIntrinsicVolume:
                return intrinsic(id);
            case ScoreFamily::kKnnEdgeLength: {
                double s = 0.0;
                for (int j : edges[static_cast<std::size_t>(id)])
                    s += dist(x, cfg.points[static_cast<std::size_t>(j)]);
                return 0.5 * s;
            }
        }
        return 0.0;
    }

    double clique(int id) const {
        const int k = score.k;
        if (k == 1) return 1.0;
        const Point& x = cfg.points[static_cast<std::size_t>(id)];
        const std::vector<int> nbrs = sorted_neighbors(id, 2.0 * score.r + kTieTol);
        if (static_cast<int>(nbrs.size()) < k - 1) return 0.0;
        if (static_cast<int>(nbrs.size()) > kNeighborCap)
            throw invalid_argument_error("clique score: neighborhood too dense");
        std::vector<int> comb(static_cast<std::size_t>(k - 1));
        for (int i = 0; i < k - 1; ++i) comb[static_cast<std::size_t>(i)] = i;
        std::vector<Point> simplex(static_cast<std::size_t>(k));
        simplex[0] = x;
        long hits = 0;
        do {
            for (int i = 0; i < k - 1; ++i)
                simplex[static_cast<std::size_t>(i + 1)] =
                    cfg.points[static_cast<std::size_t>(
                        nbrs[static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])])];
            if (miniball(simplex).radius <= score.r + kTieTol) ++hits;
        } while (next_combination(comb, static_cast<int>(nbrs.size())));
        return static_cast<double>(hits) / k;
    }

    double degree(int id) const {
        const int k = score.k;
        const Point& x = cfg.points[static_cast<std::size_t>(id)];
        const std::vector<int> nbrs = sorted_neighbors(id, 2.0 * score.r + kTieTol);
        if (static_cast<int>(nbrs.size()) < k) return 0.0;
        if (static_cast<int>(nbrs.size()) > kNeighborCap)
            throw invalid_argument_error("degree score: neighborhood too dense");
        std::vector<int> comb(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
        std::vector<Point> face(static_cast<std::size_t>(k + 1));
        std::vector<Point> other(static_cast<std::size_t>(k + 1));
        std::vector<int> ycand;
        double total = 0.0;
        do {
            face[0] = x;
            for (int i = 0; i < k; ++i)
                face[static_cast<std::size_t>(i + 1)] = cfg.points[static_cast<std::size_t>(
                    nbrs[static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])])];
            if (miniball(face).radius > score.r + kTieTol) continue;
            // shared face is (x_1..x_k); the opposite simplex adds one vertex
            const Point& anchor = face[1];
            idx.query(anchor, 2.0 * score.r + kTieTol, ycand, -1);
            for (int y : ycand) {
                if (y == id) continue;
                bool in_face = false;
                for (int i = 0; i < k; ++i)
                    if (nbrs[static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])] == y) {
                        in_face = true;
                        break;
                    }
                if (in_face) continue;
                for (int i = 0; i < k; ++i)
                    other[static_cast<std::size_t>(i)] = face[static_cast<std::size_t>(i + 1)];
                other[static_cast<std::size_t>(k)] =
                    cfg.points[static_cast<std::size_t>(y)];
                if (miniball(other).radius <= score.r + kTieTol) total += 1.0;
            }
        } while (next_combination(comb, static_cast<int>(nbrs.size())));
        return total;
    }

    double morse(int id) const {
        const int k = score.k;
        const Point& x = cfg.points[static_cast<std::size_t>(id)];
        if (cfg.window.dim != 2)
            throw invalid_argument_error("morse score requires d = 2");
        const std::vector<int> nbrs = sorted_neighbors(id, 2.0 * score.r + kTieTol);
        if (static_cast<int>(nbrs.size()) < k) return 0.0;
        if (static_cast<int>(nbrs.size()) > kNeighborCap)
            throw invalid_argument_error("morse score: neighborhood too dense");
        std::vector<int> comb(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) comb[static_cast<std::size_t>(i)] = i;
        std::vector<Point> z(static_cast<std::size_t>(k + 1));
        std::vector<int> inside;
        double total = 0.0;
        do {
            z[0] = x;
            for (int i = 0; i < k; ++i)
                z[static_cast<std::size_t>(i + 1)] = cfg.points[static_cast<std::size_t>(
                    nbrs[static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])])];
            try {
                const Ball b = circumsphere(z);
                if (b.radius > score.r + kTieTol) continue;
                if (!in_open_convex_hull(b.center, z)) continue;
                // open ball must contain no other configuration point
                idx.query(b.center, b.radius * (1.0 + 1e-9), inside, -1);
                bool empty = true;
                for (int q : inside) {
                    if (q == id) continue;
                    bool is_gen = false;
                    for (int i = 0; i < k; ++i)
                        if (nbrs[static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])] ==
                            q) {
                            is_gen = true;
                            break;
                        }
                    if (is_gen) continue;
                    if (dist(cfg.points[static_cast<std::size_t>(q)], b.center) <
                        b.radius * (1.0 - 1e-12) - kTieTol) {
                        empty = false;
                        break;
                    }
                }
                if (empty) total += 1.0 / (k + 1);
            } catch (const degeneracy_error&) {
                // measure-zero tuple, skip
            }
        } while (next_combination(comb, static_cast<int>(nbrs.size())));
        return total;
    }

    double coverage(int id) const {
        const Point& x = cfg.points[static_cast<std::size_t>(id)];
        const int d = cfg.window.dim;
        if (d != 2)
            throw invalid_argument_error("coverage quadrature implemented for d = 2");
        const auto& nodes = unit_disk_nodes(score.coverage_nodes);
        double acc = 0.0;
        Point y;
        y.dim = 2;
        for (const auto& [ux, uy] : nodes) {
            y[0] = x[0] + score.r * ux;
            y[1] = x[1] + score.r * uy;
            const int cnt = idx.count_within(y, score.r);
            if (cnt >= score.k) acc += 1.0 / cnt;
        }
        return kPi * score.r * score.r * acc /
               static_cast<double>(nodes.size());
    }

    double intrinsic(int id) const {
        if (cfg.window.dim != 2)
            throw invalid_argument_error("intrinsic volumes implemented for d = 2");
        const Point& x = cfg.points[static_cast<std::size_t>(id)];
        const double r = score.r;
        const std::vector<int> nbrs = sorted_neighbors(id, 2.0 * r + kTieTol);
        if (static_cast<int>(nbrs.size()) > 30)
            throw invalid_argument_error("intrinsic score: neighborhood too dense");
        // enumerate subsets S of pairwise-close neighbors; prune branches with
        // empty common intersection (monotone in S)
        std::vector<Point> centers{x};
        double total = single_term(centers, 0);
        std::vector<int> chosen;
        subsets(nbrs, 0, centers, chosen, total);
        return total;
    }

    double single_term(const std::vector<Point>& centers, int subset_size) const {
        const DiskIntersection di = disk_intersection(centers, score.r);
        if (!di.nonempty) return 0.0;
        double v = 0.0;
        if (score.j == 2) v = di.area;
        else if (score.j == 1) v = 0.5 * di.perimeter;
        else v = 1.0;
        const double sign = (subset_size % 2 == 0) ? 1.0 : -1.0;
        return sign * v / (subset_size + 1);
    }

    void subsets(const std::vector<int>& nbrs, std::size_t from,
                 std::vector<Point>& centers, std::vector<int>& chosen,
                 double& total) const {
        for (std::size_t t = from; t < nbrs.size(); ++t) {
            const Point& cand = cfg.points[static_cast<std::size_t>(nbrs[t])];
            // pairwise 2r constraint against current subset
            bool ok = true;
            for (const Point& c : centers)
                if (dist(c, cand) > 2.0 * score.r + kTieTol) { ok = false; break; }
            if (!ok) continue;
            centers.push_back(cand);
            const DiskIntersection di = disk_intersection(centers, score.r);
            if (di.nonempty) {
                chosen.push_back(nbrs[t]);
                total += single_term(centers, static_cast<int>(chosen.size()));
                subsets(nbrs, t + 1, centers, chosen, total);
                chosen.pop_back();
            }
            centers.pop_back();
        }
    }

    double stab_radius(int id) const {
        if (score.family != ScoreFamily::kKnnEdgeLength)
            return declared_stabilization_radius(score);
        const Point& x = cfg.points[static_cast<std::size_t>(id)];
        const int d = cfg.window.dim;
        const int need = score.k + 1;
        if (d > 2) return std::numeric_limits<double>::infinity();
        const int nsec = (d == 1) ? 2 : 6;
        std::vector<std::vector<double>> dists(static_cast<std::size_t>(nsec));
        for (int q = 0; q < static_cast<int>(cfg.points.size()); ++q) {
            if (q == id) continue;
            const Point& p = cfg.points[static_cast<std::size_t>(q)];
            int sec;
            if (d == 1) {
                sec = p[0] >= x[0] ? 0 : 1;
            } else {
                double ang = std::atan2(p[1] - x[1], p[0] - x[0]);
                if (ang < 0) ang += 2.0 * kPi;
                sec = std::min(5, static_cast<int>(ang / (kPi / 3.0)));
            }
            dists[static_cast<std::size_t>(sec)].push_back(dist(x, p));
        }
        double worst = 0.0;
        for (auto& v : dists) {
            if (static_cast<int>(v.size()) < need)
                return std::numeric_limits<double>::infinity();
            std::nth_element(v.begin(), v.begin() + (need - 1), v.end());
            worst = std::max(worst, v[static_cast<std::size_t>(need - 1)]);
        }
        // cone-to-triangle slack: points of a 60-degree sector within
        // t*sqrt(3)/2 lie in the triangle of side t
        const double t = (d == 1) ? worst : worst * 2.0 / std::sqrt(3.0);
        return 4.0 * t;
    }
};

ScoreEvaluator::ScoreEvaluator(const ScoreFunction& score,
                               const PointConfiguration& config)
    : impl_(std::make_unique<Impl>(score, config)) {}

ScoreEvaluator::~ScoreEvaluator() = default;

double ScoreEvaluator::score(int id) const { return impl_->eval(id); }

double ScoreEvaluator::stabilization_radius(int id) const {
    return impl_->stab_radius(id);
}

int ScoreEvaluator::size() const {
    return static_cast<int>(impl_->cfg.points.size());
}

const SpatialIndex& ScoreEvaluator::index() const { return impl_->idx; }

const PointConfiguration& ScoreEvaluator::config() const { return impl_->cfg; }

namespace {
PointConfiguration restrict_to_window(const PointConfiguration& config) {
    PointConfiguration inner;
    inner.window = config.window;
    inner.provenance = config.provenance;
    for (const Point& p : config.points)
        if (config.window.contains(p)) inner.points.push_back(p);
    return inner;
}
}  // namespace

double total_statistic(const ScoreFunction& score,
                       const PointConfiguration& config) {
    const PointConfiguration inner = restrict_to_window(config);
    if (inner.points.empty()) return 0.0;
    ScoreEvaluator ev(score, inner);
    double h = 0.0;
    for (int i = 0; i < ev.size(); ++i) h += ev.score(i);
    return h;
}

BufferedStatistic buffered_statistic(const ScoreFunction& score,
                                     const PointConfiguration& config) {
    BufferedStatistic out;
    if (config.points.empty()) return out;
    ScoreEvaluator ev(score, config);
    const double margin = config.buffer_margin();
    for (int id : config.window_point_ids()) {
        out.value += ev.score(id);
        if (ev.stabilization_radius(id) > margin) ++out.overrun_flags;
    }
    return out;
}

double WeightedMeasure::total_mass() const {
    double s = 0.0;
    for (const auto& [p, w] : atoms) s += w;
    return s;
}

WeightedMeasure weighted_measure(const ScoreFunction& score,
                                 const PointConfiguration& config) {
    WeightedMeasure mu;
    mu.n = config.window.volume;
    const PointConfiguration inner = restrict_to_window(config);
    if (inner.points.empty()) return mu;
    ScoreEvaluator ev(score, inner);
    const double scale = std::pow(mu.n, -1.0 / config.window.dim);
    for (int i = 0; i < ev.size(); ++i) {
        Point q = inner.points[static_cast<std::size_t>(i)];
        for (int c = 0; c < q.dim; ++c) q[c] *= scale;
        mu.atoms.emplace_back(q, ev.score(i));
    }
    return mu;
}

double weighted_measure_integral(const ScoreFunction& score,
                                 const PointConfiguration& config,
                                 const std::function<double(const Point&)>& f) {
    const WeightedMeasure mu = weighted_measure(score, config);
    double s = 0.0;
    for (const auto& [p, w] : mu.atoms) s += f(p) * w;
    return s;
}

}  // namespace pplab
