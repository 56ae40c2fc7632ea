#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lulc/execution.hpp"
#include "lulc/raster.hpp"

namespace lulc {

// A color observation lifted into 3D feature space.
using FeaturePoint = std::array<double, 3>;

inline FeaturePoint to_point(const RgbColor& c) { return {c.r, c.g, c.b}; }
inline RgbColor to_color(const FeaturePoint& p) { return {p[0], p[1], p[2]}; }

struct KMeansOptions {
    std::size_t max_iter = 100;
    double tol = 1e-6;  // max mean displacement, normalized RGB units
    Execution exec = Execution::parallel;
};

struct KMeansResult {
    std::vector<FeaturePoint> means;
    std::vector<std::uint32_t> assignments;
    double wcss = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    // Objective after every half-step: [assign_1, update_1, assign_2, ...].
    std::vector<double> wcss_trace;
    std::size_t repairs = 0;
};

// Within-cluster sum of squares, accumulated in point order.
// Throws ShapeError on length mismatch or out-of-range assignments.
double wcss(std::span<const FeaturePoint> points, std::span<const std::uint32_t> assignments,
            std::span<const FeaturePoint> means);

// Centroid of each cluster (members summed in point order, then divided by
// the count). Empty clusters keep `fallback[i]`. Per-cluster sizes are
// written to `counts`.
std::vector<FeaturePoint> centroids(std::span<const FeaturePoint> points, std::span<const std::uint32_t> assignments,
                                    std::span<const FeaturePoint> fallback, std::vector<std::size_t>& counts);

// Moves the mean of every empty cluster (counts[i] == 0), in index order, onto
// the point farthest from its assigned mean, never reusing a point. Returns
// the number of clusters re-seeded.
std::size_t repair_empty_clusters(std::span<const FeaturePoint> points, std::span<const std::uint32_t> assignments,
                                  std::span<const std::size_t> counts, std::span<FeaturePoint> means);

// Lloyd iteration from caller-supplied initial means. Assignment ties go to
// the lowest index. Stops once the largest mean displacement drops below
// `tol` in an iteration without repairs, or after `max_iter` iterations.
KMeansResult lloyd(std::span<const FeaturePoint> points, std::span<const FeaturePoint> initial_means,
                   const KMeansOptions& options = {});

} // namespace lulc
