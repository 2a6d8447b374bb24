#include "pplab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pplab {

namespace {
constexpr double kPivotTol = 1e-12;

// Gaussian elimination with partial pivoting for tiny systems.
// Throws degeneracy_error when a pivot falls below tol * scale.
void solve_small(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const int n = static_cast<int>(b.size());
    double scale = 0.0;
    for (auto& row : a)
        for (double v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw degeneracy_error("singular system: zero matrix");
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < kPivotTol * scale)
            throw degeneracy_error("singular system: pivot below tolerance");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        for (int c = col + 1; c < n; ++c) b[col] -= a[col][c] * b[c];
        b[col] /= a[col][col];
    }
}

// circumsphere of a support set of size m <= d+1 (exact for m = 1, 2;
// Gram system otherwise); used by Welzl below
Ball ball_through(std::span<const Point> pts) {
    const std::size_t m = pts.size();
    if (m == 0) return Ball{Point{}, -1.0};
    if (m == 1) return Ball{pts[0], 0.0};
    const int d = pts[0].dim;
    const int k = static_cast<int>(m) - 1;
    // center = p0 + sum a_i v_i with 2 G a = diag(|v_i|^2)
    std::vector<std::vector<double>> g(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k, 0.0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int c = 0; c < d; ++c)
                s += (pts[i + 1][c] - pts[0][c]) * (pts[j + 1][c] - pts[0][c]);
            g[i][j] = 2.0 * s;
        }
        rhs[i] = 0.0;
        for (int c = 0; c < d; ++c) {
            const double v = pts[i + 1][c] - pts[0][c];
            rhs[i] += v * v;
        }
    }
    solve_small(g, rhs);
    Point c = pts[0];
    c.dim = d;
    for (int i = 0; i < k; ++i)
        for (int cc = 0; cc < d; ++cc)
            c[cc] += rhs[i] * (pts[i + 1][cc] - pts[0][cc]);
    return Ball{c, dist(c, pts[0])};
}

Ball welzl(std::vector<Point>& pts, std::size_t n, std::vector<Point>& support,
           int d) {
    if (n == 0 || static_cast<int>(support.size()) == d + 1) {
        if (support.empty()) return Ball{Point{}, -1.0};
        return ball_through(support);
    }
    Ball b = welzl(pts, n - 1, support, d);
    const Point& p = pts[n - 1];
    if (b.radius >= 0.0 && dist(b.center, p) <= b.radius + 1e-12) return b;
    support.push_back(p);
    b = welzl(pts, n - 1, support, d);
    support.pop_back();
    // move-to-front
    std::rotate(pts.begin(), pts.begin() + static_cast<long>(n) - 1,
                pts.begin() + static_cast<long>(n));
    return b;
}

}  // namespace

double dist2(const Point& a, const Point& b) {
    const double dx = a.coords[0] - b.coords[0];
    const double dy = a.coords[1] - b.coords[1];
    const double dz = a.coords[2] - b.coords[2];
    return dx * dx + dy * dy + dz * dz;
}

double dist(const Point& a, const Point& b) { return std::sqrt(dist2(a, b)); }

double norm(const Point& p) { return std::sqrt(dist2(p, Point{0.0, 0.0, 0.0})); }

double Window::circumradius() const {
    return 0.5 * side * std::sqrt(static_cast<double>(dim));
}

Window build_window(double n, int d) {
    if (!(n > 0.0)) throw invalid_argument_error("window volume must be positive");
    if (d < 1 || d > 3) throw invalid_argument_error("dimension must be 1, 2, or 3");
    Window w;
    w.volume = n;
    w.dim = d;
    w.side = std::pow(n, 1.0 / d);
    return w;
}

SpatialIndex::SpatialIndex(std::span<const Point> points, double cell_size)
    : points_(points.begin(), points.end()), cell_(cell_size) {
    if (cell_ <= 0.0) throw invalid_argument_error("cell size must be positive");
    dim_ = points_.empty() ? 2 : points_[0].dim;
    double hi[3] = {0, 0, 0};
    for (int c = 0; c < 3; ++c) {
        lo_[c] = 0.0;
        hi[c] = 0.0;
    }
    if (!points_.empty()) {
        for (int c = 0; c < dim_; ++c) {
            lo_[c] = hi[c] = points_[0][c];
        }
        for (const auto& p : points_)
            for (int c = 0; c < dim_; ++c) {
                lo_[c] = std::min(lo_[c], p[c]);
                hi[c] = std::max(hi[c], p[c]);
            }
    }
    long total = 1;
    for (int c = 0; c < dim_; ++c) {
        ncell_[c] = std::max<long>(1, static_cast<long>((hi[c] - lo_[c]) / cell_) + 1);
        total *= ncell_[c];
    }
    buckets_.assign(static_cast<std::size_t>(total), {});
    for (int i = 0; i < static_cast<int>(points_.size()); ++i)
        buckets_[static_cast<std::size_t>(cell_of(points_[i]))].push_back(i);
}

long SpatialIndex::cell_of(const Point& p) const {
    long idx = 0;
    for (int c = dim_ - 1; c >= 0; --c) {
        long k = static_cast<long>((p[c] - lo_[c]) / cell_);
        k = std::clamp<long>(k, 0, ncell_[c] - 1);
        idx = idx * ncell_[c] + k;
    }
    return idx;
}

void SpatialIndex::query(const Point& x, double r, std::vector<int>& out,
                         int exclude_id) const {
    out.clear();
    if (points_.empty() || r < 0.0) return;
    long klo[3] = {0, 0, 0}, khi[3] = {0, 0, 0};
    for (int c = 0; c < dim_; ++c) {
        klo[c] = std::clamp<long>(static_cast<long>((x[c] - r - lo_[c]) / cell_), 0,
                                  ncell_[c] - 1);
        khi[c] = std::clamp<long>(static_cast<long>((x[c] + r - lo_[c]) / cell_), 0,
                                  ncell_[c] - 1);
    }
    const double r2 = r * r;
    long k[3] = {klo[0], klo[1], klo[2]};
    for (;;) {
        long idx = 0;
        for (int c = dim_ - 1; c >= 0; --c) idx = idx * ncell_[c] + k[c];
        for (int id : buckets_[static_cast<std::size_t>(idx)]) {
            if (id == exclude_id) continue;
            if (dist2(points_[static_cast<std::size_t>(id)], x) <= r2)
                out.push_back(id);
        }
        int c = 0;
        for (; c < dim_; ++c) {
            if (++k[c] <= khi[c]) break;
            k[c] = klo[c];
        }
        if (c == dim_) break;
    }
}

std::vector<int> SpatialIndex::neighbors_within(const Point& x, double r,
                                                int exclude_id) const {
    std::vector<int> out;
    query(x, r, out, exclude_id);
    std::sort(out.begin(), out.end());
    return out;
}

int SpatialIndex::count_within(const Point& x, double r) const {
    std::vector<int> out;
    query(x, r, out);
    return static_cast<int>(out.size());
}

Ball miniball(std::span<const Point> points) {
    if (points.empty()) throw invalid_argument_error("miniball of empty set");
    std::vector<Point> pts(points.begin(), points.end());
    std::vector<Point> support;
    Ball b = welzl(pts, pts.size(), support, pts[0].dim);
    return b;
}

Ball circumsphere(std::span<const Point> points) {
    if (points.size() < 2)
        throw invalid_argument_error("circumsphere needs at least 2 points");
    const int d = points[0].dim;
    if (static_cast<int>(points.size()) > d + 1)
        throw invalid_argument_error("circumsphere of more than d+1 points");
    Ball b = ball_through(points);  // throws degeneracy_error when dependent
    // equidistance check
    for (const auto& p : points) {
        if (std::abs(dist(b.center, p) - b.radius) >
            1e-9 * std::max(1.0, b.radius))
            throw degeneracy_error("circumsphere: residual above tolerance");
    }
    return b;
}

bool in_open_convex_hull(const Point& c, std::span<const Point> points) {
    const std::size_t m = points.size();
    if (m < 2) throw invalid_argument_error("hull needs at least 2 points");
    const int d = points[0].dim;
    const int k = static_cast<int>(m) - 1;
    // barycentric weights: solve sum w_i (p_i - p_0) = c - p_0 in the
    // least-squares/Gram sense, then verify the residual (c must lie in the
    // affine hull for the question to be well posed)
    std::vector<std::vector<double>> g(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k, 0.0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            for (int cc = 0; cc < d; ++cc)
                g[i][j] += (points[i + 1][cc] - points[0][cc]) *
                           (points[j + 1][cc] - points[0][cc]);
        for (int cc = 0; cc < d; ++cc)
            rhs[i] += (points[i + 1][cc] - points[0][cc]) * (c[cc] - points[0][cc]);
    }
    solve_small(g, rhs);  // degenerate hull -> degeneracy_error
    // residual: point must be in the affine span
    double res2 = 0.0, scale2 = 1e-30;
    for (int cc = 0; cc < d; ++cc) {
        double v = c[cc] - points[0][cc];
        scale2 += v * v;
        for (int i = 0; i < k; ++i)
            v -= rhs[i] * (points[i + 1][cc] - points[0][cc]);
        res2 += v * v;
    }
    if (res2 > 1e-18 * scale2)
        throw degeneracy_error("point outside the affine span of the hull");
    double w0 = 1.0;
    for (int i = 0; i < k; ++i) w0 -= rhs[i];
    const double tol = 1e-12;
    if (w0 <= tol) return false;
    for (int i = 0; i < k; ++i)
        if (rhs[i] <= tol) return false;
    return true;
}

double boundary_overlap(const Window& w, const Point& y) {
    double inner = 1.0;
    for (int c = 0; c < w.dim; ++c)
        inner *= std::max(0.0, w.side - std::abs(y[c]));
    return w.volume - inner;
}

double boundary_overlap_limit(const Point& y) {
    double s = 0.0;
    for (int c = 0; c < y.dim; ++c) s += std::abs(y[c]);
    return s;
}

double boundary_overlap_angular_coeff(int d) {
    switch (d) {
        case 1: return 1.0;
        case 2: return 4.0 / std::numbers::pi;
        case 3: return 1.5;
        default: throw invalid_argument_error("dimension must be 1, 2, or 3");
    }
}

}  // namespace pplab
