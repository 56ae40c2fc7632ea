#include "lulc/kernels.hpp"

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lulc/execution.hpp"

namespace lulc {

int worker_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace lulc

namespace lulc::kernels::parallel {

void nearest_labels(std::span<const RgbColor> pixels, std::span<const RgbColor> centers, std::span<Label> out) {
    const auto n = static_cast<std::int64_t>(pixels.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t p = 0; p < n; ++p) {
        out[p] = static_cast<Label>(argmin_center(pixels[p], centers, lulc::squared_distance));
    }
}

std::size_t nearest_assign(std::span<const Point3> points, std::span<const Point3> centers,
                           std::span<std::uint32_t> out) {
    const auto n = static_cast<std::int64_t>(points.size());
    std::size_t changed = 0;
#pragma omp parallel for schedule(static) reduction(+ : changed)
    for (std::int64_t j = 0; j < n; ++j) {
        const auto best = static_cast<std::uint32_t>(argmin_center(points[j], centers, kernels::squared_distance));
        changed += (best != out[j]);
        out[j] = best;
    }
    return changed;
}

// Integer histograms merge exactly, so per-thread partials cannot change the
// result relative to the serial pass.
std::vector<std::size_t> label_histogram(std::span<const Label> labels, std::size_t k) {
    std::vector<std::size_t> counts(k, 0);
    const auto n = static_cast<std::int64_t>(labels.size());
#pragma omp parallel
    {
        std::vector<std::size_t> local(k, 0);
#pragma omp for schedule(static) nowait
        for (std::int64_t p = 0; p < n; ++p) {
            ++local[labels[p]];
        }
#pragma omp critical(lulc_label_histogram)
        for (std::size_t i = 0; i < k; ++i) {
            counts[i] += local[i];
        }
    }
    return counts;
}

std::vector<std::uint32_t> bin_counts(std::span<const Point3> points, std::size_t bins) {
    const std::size_t cells = bins * bins * bins;
    std::vector<std::uint32_t> counts(cells, 0);
    const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel
    {
        std::vector<std::uint32_t> local(cells, 0);
#pragma omp for schedule(static) nowait
        for (std::int64_t j = 0; j < n; ++j) {
            const auto& p = points[j];
            ++local[(bin_of(p[2], bins) * bins + bin_of(p[1], bins)) * bins + bin_of(p[0], bins)];
        }
#pragma omp critical(lulc_bin_counts)
        for (std::size_t c = 0; c < cells; ++c) {
            counts[c] += local[c];
        }
    }
    return counts;
}

std::vector<double> box_smooth(std::span<const std::uint32_t> counts, std::size_t bins) {
    std::vector<double> out(counts.size());
    const auto nb = static_cast<std::int64_t>(bins);
#pragma omp parallel for collapse(2) schedule(static)
    for (std::int64_t z = 0; z < nb; ++z) {
        for (std::int64_t y = 0; y < nb; ++y) {
            for (std::size_t x = 0; x < bins; ++x) {
                const auto zu = static_cast<std::size_t>(z);
                const auto yu = static_cast<std::size_t>(y);
                out[(zu * bins + yu) * bins + x] = static_cast<double>(box_sum(counts, bins, x, yu, zu)) / 27.0;
            }
        }
    }
    return out;
}

} // namespace lulc::kernels::parallel
