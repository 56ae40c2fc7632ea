#include "lulc/stats.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "lulc/color_json.hpp"
#include "lulc/error.hpp"
#include "lulc/kernels.hpp"

namespace lulc {

std::vector<std::size_t> cluster_areas(const IndexedImage& image, Execution exec) {
    return kernels::label_histogram(exec, image.labels(), image.cluster_count());
}

std::vector<RgbColor> cluster_mean_colors(const RgbImage& image, const IndexedImage& indexed) {
    if (image.width() != indexed.width() || image.height() != indexed.height()) {
        throw ShapeError("cluster_mean_colors: image and label raster differ in size");
    }
    const std::size_t k = indexed.cluster_count();
    std::vector<RgbColor> sums(k);
    std::vector<std::size_t> counts(k, 0);
    const auto pixels = image.pixels();
    const auto labels = indexed.labels();
    for (std::size_t p = 0; p < pixels.size(); ++p) {
        auto& s = sums[labels[p]];
        s.r += pixels[p].r;
        s.g += pixels[p].g;
        s.b += pixels[p].b;
        ++counts[labels[p]];
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (counts[i] == 0) {
            sums[i] = indexed.colormap()[i];
        } else {
            const auto n = static_cast<double>(counts[i]);
            sums[i] = {sums[i].r / n, sums[i].g / n, sums[i].b / n};
        }
    }
    return sums;
}

ClusterStats area_report(std::span<const std::size_t> counts, std::size_t background_index) {
    if (counts.empty()) {
        throw ShapeError("area_report: no clusters");
    }
    if (background_index >= counts.size()) {
        throw IndexError("area_report: background index out of range");
    }
    ClusterStats stats;
    stats.background_index = background_index;
    stats.image_area = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    stats.background_area = counts[background_index];
    stats.foreground_area = stats.image_area - stats.background_area;
    if (stats.foreground_area == 0) {
        throw DegenerateError("area_report: every pixel is background");
    }
    const auto image_area = static_cast<double>(stats.image_area);
    const auto foreground_area = static_cast<double>(stats.foreground_area);
    stats.background_pct = 100.0 * static_cast<double>(stats.background_area) / image_area;
    stats.foreground_pct = 100.0 * foreground_area / image_area;

    stats.clusters.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        auto& c = stats.clusters[i];
        c.label = "Cluster" + std::to_string(i + 1);
        c.count = counts[i];
        c.pct_of_image = 100.0 * static_cast<double>(counts[i]) / image_area;
        if (i != background_index) {
            c.pct_of_foreground = 100.0 * static_cast<double>(counts[i]) / foreground_area;
        }
    }
    return stats;
}

ClusterStats summarize(const RgbImage& image, const IndexedImage& indexed, const SeedPalette& palette,
                       Execution exec) {
    if (palette.size() != indexed.cluster_count()) {
        throw ShapeError("summarize: palette and indexed image disagree on k");
    }
    const auto counts = cluster_areas(indexed, exec);
    auto stats = area_report(counts, 0);
    const auto means = cluster_mean_colors(image, indexed);
    for (std::size_t i = 0; i < stats.clusters.size(); ++i) {
        stats.clusters[i].label = palette[i].label;
        stats.clusters[i].display_color = palette[i].color;
        stats.clusters[i].mean_color = means[i];
    }
    return stats;
}

std::vector<Bar> bar_chart_series(const ClusterStats& stats) {
    std::vector<Bar> bars;
    bars.reserve(stats.clusters.size());
    for (std::size_t i = 0; i < stats.clusters.size(); ++i) {
        const auto& c = stats.clusters[i];
        const double pct = i == stats.background_index ? c.pct_of_image : c.pct_of_foreground.value_or(0.0);
        bars.push_back({c.label, pct, c.display_color});
    }
    return bars;
}

std::string format_percent(double value) {
    // Nudge by a few ulps of the scaled value so decimal halves such as 0.125
    // (stored as 0.12499999...) still round away from zero.
    const double scaled = value * 100.0;
    const double nudged = scaled + std::copysign(std::abs(scaled) * 4 * std::numeric_limits<double>::epsilon(), scaled);
    const double rounded = std::round(nudged) / 100.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", rounded == 0.0 ? 0.0 : rounded);
    return buf;
}

std::string format_report(const ClusterStats& stats) {
    std::ostringstream out;
    out << "Total image area= " << stats.image_area << " pixels\n";
    out << "Background area= " << stats.background_area << " pixels or " << format_percent(stats.background_pct)
        << "% image area (i.e Cluster" << stats.background_index + 1 << "/null data)\n";
    out << "Total LULC area= " << stats.foreground_area << " pixels or " << format_percent(stats.foreground_pct)
        << "% image area.\n";
    for (std::size_t i = 0; i < stats.clusters.size(); ++i) {
        if (i == stats.background_index) {
            continue;
        }
        const auto& c = stats.clusters[i];
        out << "Cluster" << i + 1 << " area= " << c.count << " pixels or " << format_percent(*c.pct_of_foreground)
            << "% LULC area (" << format_percent(c.pct_of_image) << "% image area)";
        if (!c.label.empty() && c.label != "Cluster" + std::to_string(i + 1)) {
            out << " [" << c.label << "]";
        }
        out << "\n";
    }
    return out.str();
}

nlohmann::json stats_to_json(const ClusterStats& stats) {
    nlohmann::json clusters = nlohmann::json::array();
    for (std::size_t i = 0; i < stats.clusters.size(); ++i) {
        const auto& c = stats.clusters[i];
        clusters.push_back({
            {"cluster", i + 1},
            {"label", c.label},
            {"count", c.count},
            {"color", color_to_json(c.display_color)},
            {"mean_color", color_to_json(c.mean_color)},
            {"pct_of_image", c.pct_of_image},
            {"pct_of_foreground", c.pct_of_foreground ? nlohmann::json(*c.pct_of_foreground) : nlohmann::json()},
            {"background", i == stats.background_index},
        });
    }
    nlohmann::json bars = nlohmann::json::array();
    for (const auto& b : bar_chart_series(stats)) {
        bars.push_back({{"label", b.label}, {"percent", b.percent}, {"color", color_to_json(b.color)}});
    }
    return {
        {"image_area", stats.image_area},
        {"background_area", stats.background_area},
        {"foreground_area", stats.foreground_area},
        {"background_pct", stats.background_pct},
        {"foreground_pct", stats.foreground_pct},
        {"background_cluster", stats.background_index + 1},
        {"clusters", std::move(clusters)},
        {"bars", std::move(bars)},
    };
}

} // namespace lulc
