// Brute-force reference implementations used only by tests. Everything here
// is deliberately independent of the library's algorithmic paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "pplab/geometry.hpp"
#include "pplab/rng.hpp"

namespace oracle {

using pplab::Point;

// exhaustive smallest enclosing ball: try every support subset of size
// 1..d+1, take the smallest candidate ball covering all points
inline pplab::Ball miniball_bruteforce(const std::vector<Point>& pts) {
    const int d = pts[0].dim;
    const double tol = 1e-9;
    pplab::Ball best;
    best.radius = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(pts.size());
    std::function<void(std::vector<Point>&, int, int)> rec =
        [&](std::vector<Point>& support, int from, int left) {
            if (!support.empty()) {
                pplab::Ball cand;
                bool ok = true;
                try {
                    cand = support.size() == 1
                               ? pplab::Ball{support[0], 0.0}
                               : pplab::circumsphere(support);
                } catch (const std::exception&) {
                    ok = false;
                }
                if (ok) {
                    for (const auto& p : pts)
                        if (pplab::dist(cand.center, p) > cand.radius + tol) {
                            ok = false;
                            break;
                        }
                    if (ok && cand.radius < best.radius) best = cand;
                }
            }
            if (left == 0) return;
            for (int i = from; i < n; ++i) {
                support.push_back(pts[static_cast<std::size_t>(i)]);
                rec(support, i + 1, left - 1);
                support.pop_back();
            }
        };
    std::vector<Point> support;
    rec(support, 0, d + 1);
    return best;
}

// plain O(N^2) closed-ball neighborhood
inline std::vector<int> neighbors_bruteforce(const std::vector<Point>& pts,
                                             const Point& x, double r,
                                             int exclude) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        if (i == exclude) continue;
        if (pplab::dist(pts[static_cast<std::size_t>(i)], x) <= r)
            out.push_back(i);
    }
    return out;
}

// midpoint quadrature of an integrand over [0, smax]
inline double radial_quadrature(const std::function<double(double)>& f,
                                double smax, int cells = 200000) {
    double acc = 0.0;
    const double h = smax / cells;
    for (int i = 0; i < cells; ++i) acc += f((i + 0.5) * h) * h;
    return acc;
}

inline Point random_point_2d(pplab::RngStream& rng, double scale) {
    return Point(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
}

}  // namespace oracle
