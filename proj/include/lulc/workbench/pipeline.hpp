#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lulc/classify.hpp"
#include "lulc/featurespace.hpp"
#include "lulc/isosurface.hpp"
#include "lulc/kmeans.hpp"
#include "lulc/mesh.hpp"
#include "lulc/raster.hpp"
#include "lulc/stats.hpp"

namespace lulc::workbench {

struct PipelineOptions {
    // true: K-means over all foreground pixels, seeded from the palette, may
    // move pixels between thematic classes. false: keep the nearest-seed
    // labels and only report per-class centroids.
    bool refine_means = true;
    std::size_t bins_per_axis = kDefaultBins;
    double iso_level_fraction = kDefaultIsoFraction;
    std::size_t sample_n = kDefaultSampleSize;
    std::uint64_t rng_seed = 0;
    std::size_t max_iter = 100;
    double tol = 1e-6;
    bool smooth = true;
    AxisOrder axes;
    RgbColor mute = kWhite;
    Execution exec = Execution::parallel;

    // Throws RangeError for out-of-range values.
    void validate() const;
};

// Unknown keys are rejected; missing keys keep the defaults above.
PipelineOptions options_from_json(const nlohmann::json& doc);
nlohmann::json options_to_json(const PipelineOptions& options);

enum class Stage { segment = 1, stats = 2, mesh = 3 };

struct PipelineResult {
    SeedPalette palette;
    IndexedImage indexed;
    KMeansResult kmeans;
    Stage completed = Stage::segment;
    std::optional<ClusterStats> stats;
    std::vector<BitMask> masks;              // one per cluster, background first
    std::vector<ColorMap> individual_maps;   // one per cluster
    std::vector<DensityGrid> grids;          // thematic clusters only: grids[k - 1]
    std::vector<IsoMesh> meshes;             // thematic clusters only: meshes[k - 1]
};

// classify -> K-means (refined or frozen) -> masks and individual colormaps
// -> area statistics -> density grids and isosurfaces, stopping after
// `until`. Pure: no files are touched.
PipelineResult run_pipeline(const RgbImage& image, const SeedPalette& palette, const PipelineOptions& options,
                            Stage until = Stage::mesh);

// Density grid for cluster k built from all of its pixels.
DensityGrid cluster_grid(const RgbImage& image, const IndexedImage& indexed, std::size_t k,
                         const PipelineOptions& options);

// Isosurface at `fraction` of the smoothed maximum; empty when the grid is.
IsoMesh cluster_mesh(const DensityGrid& grid, double fraction, const PipelineOptions& options);

nlohmann::json kmeans_to_json(const KMeansResult& result);

// {cluster (1-based), axis_order, points, pixel_indices}.
nlohmann::json sample_to_json(const TrainingSample& sample, std::size_t k, const AxisOrder& axes);

// File names inside a run directory; k is 1-based.
std::string mask_file(std::size_t k);
std::string colormap_file(std::size_t k);
std::string mesh_file(std::size_t k);
std::string samples_file(std::size_t k);
inline constexpr const char* kStatsJson = "stats.json";
inline constexpr const char* kRunJson = "run.json";

// Writes every artifact of `result` into an existing directory.
void write_artifacts(const PipelineResult& result, const PipelineOptions& options, const std::filesystem::path& dir);

} // namespace lulc::workbench
