#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lulc/execution.hpp"
#include "lulc/raster.hpp"

// Data-parallel inner loops shared by the classify, kmeans, stats and
// featurespace modules. Each kernel exists twice: a plain serial reference and
// an OpenMP version. The two must agree bit for bit on every input; the test
// suite and the benchmark compare them directly.
namespace lulc::kernels {

using Point3 = std::array<double, 3>;

namespace serial {

// out[p] = argmin_i |pixels[p] - centers[i]|^2, lowest index on ties.
void nearest_labels(std::span<const RgbColor> pixels, std::span<const RgbColor> centers, std::span<Label> out);

// Same rule over feature points; returns the number of changed assignments.
std::size_t nearest_assign(std::span<const Point3> points, std::span<const Point3> centers,
                           std::span<std::uint32_t> out);

std::vector<std::size_t> label_histogram(std::span<const Label> labels, std::size_t k);

// 3D histogram over [0,1]^3 with x fastest; values on the upper face land in
// the last bin. Caller guarantees points lie in the unit cube.
std::vector<std::uint32_t> bin_counts(std::span<const Point3> points, std::size_t bins);

// One pass of 3x3x3 box smoothing with zero padding outside the grid.
std::vector<double> box_smooth(std::span<const std::uint32_t> counts, std::size_t bins);

} // namespace serial

namespace parallel {

void nearest_labels(std::span<const RgbColor> pixels, std::span<const RgbColor> centers, std::span<Label> out);
std::size_t nearest_assign(std::span<const Point3> points, std::span<const Point3> centers,
                           std::span<std::uint32_t> out);
std::vector<std::size_t> label_histogram(std::span<const Label> labels, std::size_t k);
std::vector<std::uint32_t> bin_counts(std::span<const Point3> points, std::size_t bins);
std::vector<double> box_smooth(std::span<const std::uint32_t> counts, std::size_t bins);

} // namespace parallel

inline void nearest_labels(Execution exec, std::span<const RgbColor> pixels, std::span<const RgbColor> centers,
                           std::span<Label> out) {
    exec == Execution::parallel ? parallel::nearest_labels(pixels, centers, out)
                                : serial::nearest_labels(pixels, centers, out);
}

inline std::size_t nearest_assign(Execution exec, std::span<const Point3> points, std::span<const Point3> centers,
                                  std::span<std::uint32_t> out) {
    return exec == Execution::parallel ? parallel::nearest_assign(points, centers, out)
                                       : serial::nearest_assign(points, centers, out);
}

inline std::vector<std::size_t> label_histogram(Execution exec, std::span<const Label> labels, std::size_t k) {
    return exec == Execution::parallel ? parallel::label_histogram(labels, k) : serial::label_histogram(labels, k);
}

inline std::vector<std::uint32_t> bin_counts(Execution exec, std::span<const Point3> points, std::size_t bins) {
    return exec == Execution::parallel ? parallel::bin_counts(points, bins) : serial::bin_counts(points, bins);
}

inline std::vector<double> box_smooth(Execution exec, std::span<const std::uint32_t> counts, std::size_t bins) {
    return exec == Execution::parallel ? parallel::box_smooth(counts, bins) : serial::box_smooth(counts, bins);
}

// Shared scalar helpers; both kernel families call exactly these so the
// floating-point operation order is identical.
inline double squared_distance(const Point3& a, const Point3& b) {
    const double d0 = a[0] - b[0];
    const double d1 = a[1] - b[1];
    const double d2 = a[2] - b[2];
    return d0 * d0 + d1 * d1 + d2 * d2;
}

inline std::size_t bin_of(double v, std::size_t bins) {
    const auto i = static_cast<std::size_t>(v * static_cast<double>(bins));
    return i >= bins ? bins - 1 : i;
}

template <class T, class Dist>
std::size_t argmin_center(const T& x, std::span<const T> centers, Dist dist) {
    std::size_t best = 0;
    double best_d = dist(x, centers[0]);
    for (std::size_t i = 1; i < centers.size(); ++i) {
        const double d = dist(x, centers[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// Sum of the 27 neighbours of cell (x,y,z), zero outside.
inline std::uint64_t box_sum(std::span<const std::uint32_t> counts, std::size_t bins, std::size_t x, std::size_t y,
                             std::size_t z) {
    std::uint64_t sum = 0;
    const auto lo = [](std::size_t v) { return v == 0 ? 0 : v - 1; };
    const auto hi = [bins](std::size_t v) { return v + 1 >= bins ? bins - 1 : v + 1; };
    for (std::size_t zz = lo(z); zz <= hi(z); ++zz) {
        for (std::size_t yy = lo(y); yy <= hi(y); ++yy) {
            for (std::size_t xx = lo(x); xx <= hi(x); ++xx) {
                sum += counts[(zz * bins + yy) * bins + xx];
            }
        }
    }
    return sum;
}

} // namespace lulc::kernels
