#include "lulc/featurespace.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "lulc/error.hpp"
#include "lulc/kernels.hpp"

namespace lulc {

AxisOrder AxisOrder::parse(std::string_view text) {
    if (text.size() != 3) {
        throw RangeError("axis order must be a permutation of RGB");
    }
    AxisOrder order;
    std::array<bool, 3> seen{};
    for (std::size_t i = 0; i < 3; ++i) {
        const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
        const auto pos = std::string_view("RGB").find(c);
        if (pos == std::string_view::npos || seen[pos]) {
            throw RangeError("axis order must be a permutation of RGB");
        }
        seen[pos] = true;
        order.axes[i] = static_cast<std::uint8_t>(pos);
    }
    return order;
}

std::string AxisOrder::name() const {
    std::string out;
    for (auto a : axes) {
        out += "RGB"[a];
    }
    return out;
}

FeaturePoint AxisOrder::apply(const RgbColor& c) const {
    const std::array<double, 3> channels{c.r, c.g, c.b};
    return {channels[axes[0]], channels[axes[1]], channels[axes[2]]};
}

DensityGrid::DensityGrid(std::size_t bins_per_axis, std::vector<std::uint32_t> counts)
    : bins_(bins_per_axis), counts_(std::move(counts)) {
    if (bins_ < 2) {
        throw RangeError("density grid needs at least 2 bins per axis");
    }
    if (counts_.size() != bins_ * bins_ * bins_) {
        throw ShapeError("density grid cell count does not match bins^3");
    }
    total_ = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint32_t DensityGrid::max_count() const {
    return *std::max_element(counts_.begin(), counts_.end());
}

DensityGrid density_grid(std::span<const FeaturePoint> points, std::size_t bins_per_axis, Execution exec) {
    if (bins_per_axis < 2) {
        throw RangeError("density grid needs at least 2 bins per axis");
    }
    if (bins_per_axis > 1024) {
        throw RangeError("density grid limited to 1024 bins per axis");
    }
    for (const auto& p : points) {
        for (double v : p) {
            if (!(v >= 0.0 && v <= 1.0)) {
                throw DomainError("density_grid: point outside the unit cube");
            }
        }
    }
    return DensityGrid(bins_per_axis, kernels::bin_counts(exec, points, bins_per_axis));
}

DensityGrid cellwise_min(const DensityGrid& a, const DensityGrid& b) {
    if (a.bins() != b.bins()) {
        throw ShapeError("cellwise_min: grids differ in bins per axis");
    }
    std::vector<std::uint32_t> out(a.counts().size());
    std::transform(a.counts().begin(), a.counts().end(), b.counts().begin(), out.begin(),
                   [](std::uint32_t x, std::uint32_t y) { return std::min(x, y); });
    return DensityGrid(a.bins(), std::move(out));
}

namespace {

std::vector<std::size_t> member_pixels(const IndexedImage& indexed, std::size_t k) {
    if (k >= indexed.cluster_count()) {
        throw IndexError("cluster " + std::to_string(k) + " out of range");
    }
    std::vector<std::size_t> members;
    const auto labels = indexed.labels();
    for (std::size_t p = 0; p < labels.size(); ++p) {
        if (labels[p] == k) {
            members.push_back(p);
        }
    }
    return members;
}

void require_same_raster(const RgbImage& image, const IndexedImage& indexed) {
    if (image.width() != indexed.width() || image.height() != indexed.height()) {
        throw ShapeError("image and label raster differ in size");
    }
}

} // namespace

std::vector<FeaturePoint> cluster_points(const RgbImage& image, const IndexedImage& indexed, std::size_t k,
                                         const AxisOrder& axes) {
    require_same_raster(image, indexed);
    const auto members = member_pixels(indexed, k);
    std::vector<FeaturePoint> points(members.size());
    const auto pixels = image.pixels();
    std::transform(members.begin(), members.end(), points.begin(), [&](std::size_t p) { return axes.apply(pixels[p]); });
    return points;
}

TrainingSample sample_training_pixels(const RgbImage& image, const IndexedImage& indexed, std::size_t k,
                                      std::size_t n, std::uint64_t seed, const AxisOrder& axes) {
    require_same_raster(image, indexed);
    auto members = member_pixels(indexed, k);
    if (members.empty()) {
        throw EmptySampleError("cluster " + std::to_string(k + 1) + " has no pixels to sample");
    }
    TrainingSample sample;
    if (n >= members.size()) {
        sample.pixel_indices = std::move(members);
    } else {
        std::mt19937_64 rng(seed);
        sample.pixel_indices.reserve(n);
        std::sample(members.begin(), members.end(), std::back_inserter(sample.pixel_indices), n, rng);
    }
    const auto pixels = image.pixels();
    sample.points.reserve(sample.pixel_indices.size());
    for (auto p : sample.pixel_indices) {
        sample.points.push_back(axes.apply(pixels[p]));
    }
    return sample;
}

ClusterGaussian fit_gaussian(std::span<const FeaturePoint> points) {
    if (points.empty()) {
        throw EmptySampleError("fit_gaussian: no points");
    }
    ClusterGaussian g;
    const auto n = static_cast<double>(points.size());
    for (const auto& p : points) {
        for (int a = 0; a < 3; ++a) {
            g.mean[a] += p[a];
        }
    }
    for (auto& m : g.mean) {
        m /= n;
    }
    for (const auto& p : points) {
        for (int a = 0; a < 3; ++a) {
            for (int b = a; b < 3; ++b) {
                g.covariance[a][b] += (p[a] - g.mean[a]) * (p[b] - g.mean[b]);
            }
        }
    }
    for (int a = 0; a < 3; ++a) {
        for (int b = a; b < 3; ++b) {
            g.covariance[a][b] /= n;
            g.covariance[b][a] = g.covariance[a][b];
        }
    }
    return g;
}

namespace {

struct Icosphere {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
};

Vec3 normalized(const Vec3& v) {
    const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return {v[0] / len, v[1] / len, v[2] / len};
}

// Unit icosphere with outward (counter-clockwise) faces.
Icosphere make_icosphere(std::size_t subdivisions) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    Icosphere s;
    s.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                  {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& v : s.vertices) {
        v = normalized(v);
    }
    s.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                   {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                   {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (std::size_t pass = 0; pass < subdivisions; ++pass) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
        const auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            if (auto it = midpoints.find(key); it != midpoints.end()) {
                return it->second;
            }
            const auto& va = s.vertices[a];
            const auto& vb = s.vertices[b];
            s.vertices.push_back(normalized({va[0] + vb[0], va[1] + vb[1], va[2] + vb[2]}));
            const auto idx = static_cast<std::uint32_t>(s.vertices.size() - 1);
            midpoints.emplace(key, idx);
            return idx;
        };
        std::vector<Triangle> next;
        next.reserve(s.triangles.size() * 4);
        for (const auto& tri : s.triangles) {
            const auto ab = midpoint(tri[0], tri[1]);
            const auto bc = midpoint(tri[1], tri[2]);
            const auto ca = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        s.triangles = std::move(next);
    }
    return s;
}

} // namespace

IsoMesh ellipsoid_mesh(const ClusterGaussian& gaussian, double scale, std::size_t subdivisions) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw RangeError("ellipsoid_mesh: scale must be positive");
    }
    if (subdivisions > 7) {
        throw RangeError("ellipsoid_mesh: at most 7 subdivisions");
    }
    Eigen::Matrix3d cov;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            cov(a, b) = gaussian.covariance[a][b];
        }
    }
    if (!cov.allFinite() || !std::isfinite(gaussian.mean[0] + gaussian.mean[1] + gaussian.mean[2])) {
        throw DegenerateError("ellipsoid_mesh: non-finite mean or covariance");
    }
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw DegenerateError("ellipsoid_mesh: covariance is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    Eigen::Vector3d eigenvalues = solver.eigenvalues();
    if (eigenvalues.minCoeff() < -1e-12) {
        throw DegenerateError("ellipsoid_mesh: covariance has a negative eigenvalue");
    }
    if (eigenvalues.minCoeff() <= 0.0 || eigenvalues.minCoeff() < 1e-12 * std::max(1.0, eigenvalues.maxCoeff())) {
        solver.compute(cov + kCovarianceRidge * Eigen::Matrix3d::Identity());
        eigenvalues = solver.eigenvalues();
        if (eigenvalues.minCoeff() <= 0.0) {
            throw DegenerateError("ellipsoid_mesh: covariance singular even after ridge repair");
        }
    }
    const Eigen::Matrix3d axes = solver.eigenvectors() * eigenvalues.cwiseSqrt().asDiagonal();
    const bool flips = axes.determinant() < 0.0;

    const auto sphere = make_icosphere(subdivisions);
    IsoMesh mesh;
    mesh.vertices.reserve(sphere.vertices.size());
    const Eigen::Vector3d mu(gaussian.mean[0], gaussian.mean[1], gaussian.mean[2]);
    for (const auto& u : sphere.vertices) {
        const Eigen::Vector3d x = mu + scale * (axes * Eigen::Vector3d(u[0], u[1], u[2]));
        mesh.vertices.push_back({x[0], x[1], x[2]});
    }
    mesh.triangles = sphere.triangles;
    if (flips) {
        for (auto& t : mesh.triangles) {
            std::swap(t[1], t[2]);
        }
    }
    return mesh;
}

} // namespace lulc
