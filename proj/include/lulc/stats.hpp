#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lulc/classify.hpp"
#include "lulc/execution.hpp"
#include "lulc/raster.hpp"

namespace lulc {

std::vector<std::size_t> cluster_areas(const IndexedImage& image, Execution exec = Execution::parallel);

// Centroid of the member pixels of every cluster; empty clusters get the
// colormap entry.
std::vector<RgbColor> cluster_mean_colors(const RgbImage& image, const IndexedImage& indexed);

struct ClusterEntry {
    std::string label;
    std::size_t count = 0;
    RgbColor display_color;  // legend / palette color
    RgbColor mean_color;     // centroid of member pixels
    double pct_of_image = 0.0;
    std::optional<double> pct_of_foreground;  // absent for the background entry
};

struct ClusterStats {
    std::size_t image_area = 0;
    std::size_t background_area = 0;
    std::size_t foreground_area = 0;
    std::size_t background_index = 0;
    double background_pct = 0.0;
    double foreground_pct = 0.0;
    std::vector<ClusterEntry> clusters;
};

// Percentages from raw counts. Labels default to "Cluster<n>" (1-based) and
// colors to the mean/display defaults of RgbColor{}. Throws DegenerateError
// when every pixel is background.
ClusterStats area_report(std::span<const std::size_t> counts, std::size_t background_index = 0);

// Full report for a classified image: counts, palette labels and colors, and
// per-cluster mean colors.
ClusterStats summarize(const RgbImage& image, const IndexedImage& indexed, const SeedPalette& palette,
                       Execution exec = Execution::parallel);

struct Bar {
    std::string label;
    double percent = 0.0;
    RgbColor color;
};

// One bar per cluster in palette order: background uses its share of the
// image, thematic clusters their share of the foreground.
std::vector<Bar> bar_chart_series(const ClusterStats& stats);

// Two decimals, half away from zero.
std::string format_percent(double value);

// Plain-text listing, clusters numbered from 1 with the background first.
std::string format_report(const ClusterStats& stats);

nlohmann::json stats_to_json(const ClusterStats& stats);

} // namespace lulc
