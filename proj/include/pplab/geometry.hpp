#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pplab {

// Point in R^d, d in {1,2,3}. Unused coordinates stay zero so distance code
// can run over all three slots unconditionally.
struct Point {
    std::array<double, 3> coords{0.0, 0.0, 0.0};
    int dim = 2;

    Point() = default;
    Point(double x) : coords{x, 0.0, 0.0}, dim(1) {}
    Point(double x, double y) : coords{x, y, 0.0}, dim(2) {}
    Point(double x, double y, double z) : coords{x, y, z}, dim(3) {}

    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }

    bool operator==(const Point& o) const { return coords == o.coords; }
};

double dist2(const Point& a, const Point& b);
double dist(const Point& a, const Point& b);
double norm(const Point& p);

// Cube [-n^{1/d}/2, n^{1/d}/2]^d of volume exactly n.
struct Window {
    double volume = 1.0;
    int dim = 2;
    double side = 1.0;

    double half() const { return 0.5 * side; }
    bool contains(const Point& p) const {
        for (int i = 0; i < dim; ++i)
            if (p[i] < -half() || p[i] > half()) return false;
        return true;
    }
    // circumradius of the cube
    double circumradius() const;
};

class invalid_argument_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class degeneracy_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Window build_window(double n, int d);

// Uniform-grid bucket index over a finite configuration. Queries return the
// exact closed-ball neighborhood after filtering.
class SpatialIndex {
public:
    SpatialIndex() = default;
    SpatialIndex(std::span<const Point> points, double cell_size);

    // ids of points y != points[center_id] with |y - x| <= r
    void query(const Point& x, double r, std::vector<int>& out,
               int exclude_id = -1) const;
    std::vector<int> neighbors_within(const Point& x, double r,
                                      int exclude_id = -1) const;
    // number of points within distance r of x (no exclusion)
    int count_within(const Point& x, double r) const;

    std::size_t size() const { return points_.size(); }
    const Point& point(int id) const { return points_[id]; }

private:
    long cell_of(const Point& p) const;
    std::vector<Point> points_;
    std::vector<std::vector<int>> buckets_;
    double cell_ = 1.0;
    int dim_ = 2;
    double lo_[3] = {0, 0, 0};
    long ncell_[3] = {1, 1, 1};
};

struct Ball {
    Point center;
    double radius = 0.0;
};

// Smallest enclosing ball (Welzl, move-to-front), exact for d <= 3.
// Accepts any number of points; support size is at most d+1.
Ball miniball(std::span<const Point> points);

// Center/radius of the unique (k-1)-sphere through k+1 points (k <= d).
// Throws degeneracy_error for affinely dependent input.
Ball circumsphere(std::span<const Point> points);

// True iff c lies in the relative interior of the convex hull of k+1 points
// spanning a k-flat. Throws degeneracy_error when they do not span.
bool in_open_convex_hull(const Point& c, std::span<const Point> points);

// gamma_W(y) = Vol_d(W ∩ (R^d \ W - y)) for the centered cube
double boundary_overlap(const Window& w, const Point& y);

// limit gamma(y) = lim gamma_{W_n}(y) / n^{(d-1)/d} = sum_i |y_i|
double boundary_overlap_limit(const Point& y);

// angular average of gamma over |y| = s: gamma_bar(s) = c_d * s with
// c_1 = 1, c_2 = 4/pi, c_3 = 3/2
double boundary_overlap_angular_coeff(int d);

}  // namespace pplab
