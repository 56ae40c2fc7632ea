#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "lulc/classify.hpp"
#include "lulc/kmeans.hpp"
#include "lulc/raster.hpp"

namespace lulc::fixtures {

// Pixel counts of a 563x613 seven-class reference classification, background
// first.
inline const std::vector<std::size_t> kReferenceCounts{156877, 616, 32849, 2123, 88743, 39960, 23951};

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("lulc-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Seven well separated colors; entry 0 is the background.
inline SeedPalette seven_class_palette() {
    return SeedPalette({
        {"background", RgbColor::from_bytes(0, 0, 0)},
        {"constructed", RgbColor::from_bytes(255, 63, 67)},
        {"vegetation", RgbColor::from_bytes(30, 160, 40)},
        {"water", RgbColor::from_bytes(30, 60, 220)},
        {"agriculture", RgbColor::from_bytes(235, 225, 60)},
        {"barren", RgbColor::from_bytes(150, 150, 150)},
        {"scrub", RgbColor::from_bytes(140, 90, 40)},
    });
}

inline double min_seed_distance(const SeedPalette& palette) {
    double best = 1e300;
    for (std::size_t i = 0; i < palette.size(); ++i) {
        for (std::size_t j = i + 1; j < palette.size(); ++j) {
            best = std::min(best, std::sqrt(squared_distance(palette[i].color, palette[j].color)));
        }
    }
    return best;
}

struct PaintedImage {
    RgbImage image;
    std::vector<Label> labels;
    std::vector<std::size_t> areas;
};

// Blocky regions of random palette labels with bounded isotropic noise added
// to every pixel, clamped to the unit cube.
inline PaintedImage paint(const SeedPalette& palette, std::size_t w, std::size_t h, double max_noise,
                          std::uint64_t seed, std::size_t block = 16) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, palette.size() - 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const std::size_t bw = (w + block - 1) / block;
    const std::size_t bh = (h + block - 1) / block;
    std::vector<Label> blocks(bw * bh);
    for (auto& b : blocks) {
        b = static_cast<Label>(pick(rng));
    }
    PaintedImage out{RgbImage(1, 1, {RgbColor{}}), std::vector<Label>(w * h), std::vector<std::size_t>(palette.size())};
    std::vector<RgbColor> pixels(w * h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const Label l = blocks[(y / block) * bw + x / block];
            const RgbColor c = palette[l].color;
            // Noise direction uniform in the ball, length at most max_noise.
            std::array<double, 3> d{};
            double n2 = 0.0;
            do {
                d = {unit(rng), unit(rng), unit(rng)};
                n2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            } while (n2 > 1.0);
            const auto clamp = [](double v) { return std::min(1.0, std::max(0.0, v)); };
            pixels[y * w + x] = {clamp(c.r + max_noise * d[0]), clamp(c.g + max_noise * d[1]),
                                 clamp(c.b + max_noise * d[2])};
            out.labels[y * w + x] = l;
            ++out.areas[l];
        }
    }
    out.image = RgbImage(w, h, std::move(pixels));
    return out;
}

// Isotropic Gaussian cloud clamped to the unit cube.
inline std::vector<FeaturePoint> gaussian_cloud(const FeaturePoint& mean, double sigma, std::size_t n,
                                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    std::vector<FeaturePoint> pts(n);
    for (auto& p : pts) {
        for (int i = 0; i < 3; ++i) {
            p[i] = std::min(1.0, std::max(0.0, mean[i] + normal(rng)));
        }
    }
    return pts;
}

// Minimum WCSS over every assignment of points to k non-empty clusters, and
// the centroids of one optimal partition. Exhaustive, so only for tiny n.
struct BruteForce {
    double wcss = 0.0;
    std::vector<FeaturePoint> means;
};

inline BruteForce exhaustive_kmeans(const std::vector<FeaturePoint>& pts, std::size_t k) {
    const std::size_t n = pts.size();
    std::vector<std::uint32_t> a(n, 0);
    BruteForce best{1e300, {}};
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= k;
    }
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<std::uint32_t>(c % k);
            c /= k;
            ++count[a[i]];
        }
        if (std::find(count.begin(), count.end(), 0u) != count.end()) {
            continue;
        }
        std::vector<FeaturePoint> m(k, FeaturePoint{0, 0, 0});
        for (std::size_t i = 0; i < n; ++i) {
            for (int d = 0; d < 3; ++d) {
                m[a[i]][d] += pts[i][d];
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            for (int d = 0; d < 3; ++d) {
                m[j][d] /= static_cast<double>(count[j]);
            }
        }
        // Per-point squared distance first, then the running total, so an
        // identical partition gives a bit-identical objective.
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e0 = pts[i][0] - m[a[i]][0];
            const double e1 = pts[i][1] - m[a[i]][1];
            const double e2 = pts[i][2] - m[a[i]][2];
            w += e0 * e0 + e1 * e1 + e2 * e2;
        }
        if (w < best.wcss) {
            best = {w, m};
        }
    }
    return best;
}

} // namespace lulc::fixtures
