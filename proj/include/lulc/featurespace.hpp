#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lulc/execution.hpp"
#include "lulc/kmeans.hpp"
#include "lulc/mesh.hpp"
#include "lulc/raster.hpp"

namespace lulc {

// Which color channel feeds each feature-space axis. Default R,G,B.
struct AxisOrder {
    std::array<std::uint8_t, 3> axes{0, 1, 2};

    // Accepts any permutation of "RGB" (case-insensitive), e.g. "BGR".
    static AxisOrder parse(std::string_view text);
    std::string name() const;
    FeaturePoint apply(const RgbColor& c) const;
};

// Histogram of feature points over the RGB unit cube, x index fastest.
class DensityGrid {
public:
    DensityGrid(std::size_t bins_per_axis, std::vector<std::uint32_t> counts);

    std::size_t bins() const { return bins_; }
    std::span<const std::uint32_t> counts() const { return counts_; }
    std::uint64_t total_points() const { return total_; }
    std::uint32_t at(std::size_t x, std::size_t y, std::size_t z) const { return counts_[(z * bins_ + y) * bins_ + x]; }
    std::uint32_t max_count() const;
    double cell_width() const { return 1.0 / static_cast<double>(bins_); }

private:
    std::size_t bins_;
    std::vector<std::uint32_t> counts_;
    std::uint64_t total_ = 0;
};

// Throws DomainError for points outside [0,1]^3 and RangeError for bins < 2.
DensityGrid density_grid(std::span<const FeaturePoint> points, std::size_t bins_per_axis,
                         Execution exec = Execution::parallel);

// Cellwise minimum of two grids with the same resolution (ShapeError otherwise).
DensityGrid cellwise_min(const DensityGrid& a, const DensityGrid& b);

// Colors of every pixel labeled k, in row-major order.
std::vector<FeaturePoint> cluster_points(const RgbImage& image, const IndexedImage& indexed, std::size_t k,
                                         const AxisOrder& axes = {});

inline constexpr std::size_t kDefaultSampleSize = 160;

struct TrainingSample {
    std::vector<FeaturePoint> points;
    std::vector<std::size_t> pixel_indices;  // row-major, ascending
};

// Uniform sample without replacement of min(n, |cluster k|) member pixels.
// Reproducible for a fixed seed. Throws EmptySampleError for an empty cluster.
TrainingSample sample_training_pixels(const RgbImage& image, const IndexedImage& indexed, std::size_t k,
                                      std::size_t n = kDefaultSampleSize, std::uint64_t seed = 0,
                                      const AxisOrder& axes = {});

using Matrix3 = std::array<std::array<double, 3>, 3>;

struct ClusterGaussian {
    FeaturePoint mean{};
    Matrix3 covariance{};  // population covariance
};

ClusterGaussian fit_gaussian(std::span<const FeaturePoint> points);

inline constexpr double kCovarianceRidge = 1e-6;

// Surface {x : (x - mean)^T S^-1 (x - mean) = scale^2} tessellated from an
// icosphere with `subdivisions` refinement passes. A singular covariance is
// repaired by adding kCovarianceRidge * I; anything still not positive
// definite raises DegenerateError.
IsoMesh ellipsoid_mesh(const ClusterGaussian& gaussian, double scale, std::size_t subdivisions);

} // namespace lulc
