#include "lulc/kernels.hpp"

namespace lulc::kernels::serial {

void nearest_labels(std::span<const RgbColor> pixels, std::span<const RgbColor> centers, std::span<Label> out) {
    for (std::size_t p = 0; p < pixels.size(); ++p) {
        out[p] = static_cast<Label>(argmin_center(pixels[p], centers, lulc::squared_distance));
    }
}

std::size_t nearest_assign(std::span<const Point3> points, std::span<const Point3> centers,
                           std::span<std::uint32_t> out) {
    std::size_t changed = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
        const auto best = static_cast<std::uint32_t>(argmin_center(points[j], centers, kernels::squared_distance));
        changed += (best != out[j]);
        out[j] = best;
    }
    return changed;
}

std::vector<std::size_t> label_histogram(std::span<const Label> labels, std::size_t k) {
    std::vector<std::size_t> counts(k, 0);
    for (Label l : labels) {
        ++counts[l];
    }
    return counts;
}

std::vector<std::uint32_t> bin_counts(std::span<const Point3> points, std::size_t bins) {
    std::vector<std::uint32_t> counts(bins * bins * bins, 0);
    for (const auto& p : points) {
        const auto x = bin_of(p[0], bins);
        const auto y = bin_of(p[1], bins);
        const auto z = bin_of(p[2], bins);
        ++counts[(z * bins + y) * bins + x];
    }
    return counts;
}

std::vector<double> box_smooth(std::span<const std::uint32_t> counts, std::size_t bins) {
    std::vector<double> out(counts.size());
    for (std::size_t z = 0; z < bins; ++z) {
        for (std::size_t y = 0; y < bins; ++y) {
            for (std::size_t x = 0; x < bins; ++x) {
                out[(z * bins + y) * bins + x] = static_cast<double>(box_sum(counts, bins, x, y, z)) / 27.0;
            }
        }
    }
    return out;
}

} // namespace lulc::kernels::serial
