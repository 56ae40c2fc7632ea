#include "lulc/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lulc/error.hpp"
#include "lulc/kernels.hpp"

namespace lulc {

namespace {

bool finite(const FeaturePoint& p) {
    return std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(p[2]);
}

void require_assignments(std::span<const FeaturePoint> points, std::span<const std::uint32_t> assignments,
                         std::size_t k, const char* who) {
    if (points.size() != assignments.size()) {
        throw ShapeError(std::string(who) + ": " + std::to_string(points.size()) + " points but " +
                         std::to_string(assignments.size()) + " assignments");
    }
    for (auto a : assignments) {
        if (a >= k) {
            throw ShapeError(std::string(who) + ": assignment " + std::to_string(a) + " >= k=" + std::to_string(k));
        }
    }
}

} // namespace

double wcss(std::span<const FeaturePoint> points, std::span<const std::uint32_t> assignments,
            std::span<const FeaturePoint> means) {
    require_assignments(points, assignments, means.size(), "wcss");
    double total = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        total += kernels::squared_distance(points[j], means[assignments[j]]);
    }
    return total;
}

std::vector<FeaturePoint> centroids(std::span<const FeaturePoint> points, std::span<const std::uint32_t> assignments,
                                    std::span<const FeaturePoint> fallback, std::vector<std::size_t>& counts) {
    const std::size_t k = fallback.size();
    require_assignments(points, assignments, k, "centroids");
    std::vector<FeaturePoint> sums(k, FeaturePoint{0.0, 0.0, 0.0});
    counts.assign(k, 0);
    for (std::size_t j = 0; j < points.size(); ++j) {
        auto& s = sums[assignments[j]];
        s[0] += points[j][0];
        s[1] += points[j][1];
        s[2] += points[j][2];
        ++counts[assignments[j]];
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (counts[i] == 0) {
            sums[i] = fallback[i];
            continue;
        }
        const auto n = static_cast<double>(counts[i]);
        sums[i] = {sums[i][0] / n, sums[i][1] / n, sums[i][2] / n};
    }
    return sums;
}

std::size_t repair_empty_clusters(std::span<const FeaturePoint> points, std::span<const std::uint32_t> assignments,
                                  std::span<const std::size_t> counts, std::span<FeaturePoint> means) {
    std::vector<double> dist;
    std::vector<bool> taken;
    std::size_t repaired = 0;
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (counts[i] != 0) {
            continue;
        }
        if (dist.empty()) {
            dist.resize(points.size());
            taken.assign(points.size(), false);
            for (std::size_t j = 0; j < points.size(); ++j) {
                dist[j] = kernels::squared_distance(points[j], means[assignments[j]]);
            }
        }
        std::size_t far = points.size();
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (!taken[j] && (far == points.size() || dist[j] > dist[far])) {
                far = j;
            }
        }
        if (far == points.size()) {
            break;  // more empty clusters than points; cannot happen when k <= n
        }
        taken[far] = true;
        dist[far] = 0.0;
        means[i] = points[far];
        ++repaired;
    }
    return repaired;
}

KMeansResult lloyd(std::span<const FeaturePoint> points, std::span<const FeaturePoint> initial_means,
                   const KMeansOptions& options) {
    const std::size_t n = points.size();
    const std::size_t k = initial_means.size();
    if (n == 0 || k == 0) {
        throw ShapeError("lloyd: points and initial means must be non-empty");
    }
    if (k > n) {
        throw InfeasibleError("lloyd: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
    }
    if (!std::all_of(points.begin(), points.end(), finite) ||
        !std::all_of(initial_means.begin(), initial_means.end(), finite)) {
        throw DomainError("lloyd: non-finite coordinates");
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (initial_means[i] == initial_means[j]) {
                throw RangeError("lloyd: initial means must be pairwise distinct");
            }
        }
    }

    KMeansResult result;
    result.means.assign(initial_means.begin(), initial_means.end());
    result.assignments.assign(n, 0);
    std::vector<std::size_t> counts;

    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        kernels::nearest_assign(options.exec, points, result.means, result.assignments);
        result.wcss_trace.push_back(wcss(points, result.assignments, result.means));

        auto next = centroids(points, result.assignments, result.means, counts);
        const std::size_t repaired = repair_empty_clusters(points, result.assignments, counts, next);
        result.repairs += repaired;

        double displacement = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            displacement = std::max(displacement, std::sqrt(kernels::squared_distance(next[i], result.means[i])));
        }
        result.means = std::move(next);
        result.wcss_trace.push_back(wcss(points, result.assignments, result.means));
        result.iterations = it;

        if (repaired == 0 && displacement < options.tol) {
            result.converged = true;
            break;
        }
    }
    result.wcss = result.wcss_trace.empty() ? wcss(points, result.assignments, result.means)
                                            : result.wcss_trace.back();
    return result;
}

} // namespace lulc
