#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "pplab/geometry.hpp"
#include "pplab/processes.hpp"

namespace pplab {

enum class ScoreFamily {
    kConstOne,         // xi == 1; sums reduce to point counts
    kCliqueCount,      // Cech (k-1)-simplex count share, gamma^(k)
    kEdgeLength,       // half total length of edges within r
    kDegree,           // total down degree share of k-simplices
    kMorse,            // index-k critical points, d = 2
    kCoverage,         // k-covered volume share of the germ-grain model
    kIntrinsicVolume,  // V_j of the germ-grain model, d = 2
    kKnnEdgeLength,    // half total k-NN edge length at the vertex
};

struct ScoreFunction {
    ScoreFamily family = ScoreFamily::kConstOne;
    double r = 0.5;       // interaction radius
    int k = 1;            // order (clique size, degree order, morse index, coverage k, knn k)
    int j = 2;            // intrinsic volume index
    int coverage_nodes = 4096;

    std::string tag() const;
};

ScoreFunction const_one_score();
ScoreFunction clique_count_score(int k, double r);
ScoreFunction edge_length_score(double r);
ScoreFunction degree_score(int k, double r);
ScoreFunction morse_score(int k, double r);
ScoreFunction coverage_score(int k, double r, int quadrature_nodes = 4096);
ScoreFunction intrinsic_volume_score(int j, double r);
ScoreFunction knn_edge_length_score(int k);

// Deterministic stabilization radius for the family, or +inf when the radius
// is configuration dependent (k-NN).
double declared_stabilization_radius(const ScoreFunction& s);

// Binds a score to one configuration: owns the spatial index and any
// per-configuration caches (k-NN graph). Read-only after construction.
class ScoreEvaluator {
public:
    ScoreEvaluator(const ScoreFunction& score, const PointConfiguration& config);
    ~ScoreEvaluator();
    ScoreEvaluator(const ScoreEvaluator&) = delete;
    ScoreEvaluator& operator=(const ScoreEvaluator&) = delete;

    double score(int id) const;
    // realized stabilization radius at the point (may be +inf)
    double stabilization_radius(int id) const;
    int size() const;
    const SpatialIndex& index() const;
    const PointConfiguration& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// H_n: sum over window points, scores against the window-restricted input.
double total_statistic(const ScoreFunction& score,
                       const PointConfiguration& config);

struct BufferedStatistic {
    double value = 0.0;
    long overrun_flags = 0;  // window points whose radius exceeds the margin
};

// H-hat_n: sum over window points, scores against the full buffered input.
BufferedStatistic buffered_statistic(const ScoreFunction& score,
                                     const PointConfiguration& config);

struct WeightedMeasure {
    std::vector<std::pair<Point, double>> atoms;  // (n^{-1/d} x, xi(x, P_n))
    double n = 1.0;
    double total_mass() const;
};

WeightedMeasure weighted_measure(const ScoreFunction& score,
                                 const PointConfiguration& config);

// mu_n^xi(f) = sum_x f(n^{-1/d} x) xi(x, P_n) for bounded f on W_1
double weighted_measure_integral(const ScoreFunction& score,
                                 const PointConfiguration& config,
                                 const std::function<double(const Point&)>& f);

// Exact area and perimeter of the intersection of equal-radius disks, d = 2.
// Valid for any number of centers; (0,0) when the intersection is empty or
// degenerate. Used by the intrinsic-volume score and its tests.
struct DiskIntersection {
    double area = 0.0;
    double perimeter = 0.0;
    bool nonempty = false;
};
DiskIntersection disk_intersection(std::span<const Point> centers, double r);

}  // namespace pplab
