#include "lulc/workbench/pipeline.hpp"

#include <cmath>
#include <exception>
#include <set>

#include "lulc/color_json.hpp"
#include "lulc/error.hpp"
#include "lulc/image_io.hpp"

namespace lulc::workbench {

void PipelineOptions::validate() const {
    if (bins_per_axis < 2 || bins_per_axis > 256) {
        throw RangeError("bins must lie in [2, 256]");
    }
    if (!(iso_level_fraction > 0.0 && iso_level_fraction <= 1.0)) {
        throw RangeError("iso level fraction must lie in (0, 1]");
    }
    if (sample_n == 0) {
        throw RangeError("sample size must be positive");
    }
    if (!(tol >= 0.0) || !std::isfinite(tol)) {
        throw RangeError("tol must be a finite non-negative number");
    }
    if (!mute.in_unit_cube()) {
        throw RangeError("mute color must lie in [0,1]");
    }
}

PipelineOptions options_from_json(const nlohmann::json& doc) {
    PipelineOptions o;
    if (doc.is_null()) {
        return o;
    }
    if (!doc.is_object()) {
        throw FormatError("options must be a JSON object");
    }
    static const std::set<std::string> known = {"refine_means", "bins_per_axis", "iso_level_fraction", "sample_n",
                                                "rng_seed",     "max_iter",      "tol",                "smooth",
                                                "axis_order",   "mute_color"};
    try {
        for (const auto& [key, value] : doc.items()) {
            if (!known.contains(key)) {
                throw FormatError("unknown pipeline option \"" + key + "\"");
            }
        }
        o.refine_means = doc.value("refine_means", o.refine_means);
        o.bins_per_axis = doc.value("bins_per_axis", o.bins_per_axis);
        o.iso_level_fraction = doc.value("iso_level_fraction", o.iso_level_fraction);
        o.sample_n = doc.value("sample_n", o.sample_n);
        o.rng_seed = doc.value("rng_seed", o.rng_seed);
        o.max_iter = doc.value("max_iter", o.max_iter);
        o.tol = doc.value("tol", o.tol);
        o.smooth = doc.value("smooth", o.smooth);
        if (doc.contains("axis_order")) {
            o.axes = AxisOrder::parse(doc.at("axis_order").get<std::string>());
        }
        if (doc.contains("mute_color")) {
            o.mute = color_from_json(doc.at("mute_color"));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("pipeline options: ") + e.what());
    }
    o.validate();
    return o;
}

nlohmann::json options_to_json(const PipelineOptions& o) {
    return {
        {"refine_means", o.refine_means},
        {"bins_per_axis", o.bins_per_axis},
        {"iso_level_fraction", o.iso_level_fraction},
        {"sample_n", o.sample_n},
        {"rng_seed", o.rng_seed},
        {"max_iter", o.max_iter},
        {"tol", o.tol},
        {"smooth", o.smooth},
        {"axis_order", o.axes.name()},
        {"mute_color", color_to_json(o.mute)},
    };
}

nlohmann::json kmeans_to_json(const KMeansResult& r) {
    nlohmann::json means = nlohmann::json::array();
    for (const auto& m : r.means) {
        means.push_back({m[0], m[1], m[2]});
    }
    return {
        {"means", std::move(means)},
        {"wcss", r.wcss},
        {"iterations", r.iterations},
        {"converged", r.converged},
        {"repairs", r.repairs},
        {"wcss_trace", r.wcss_trace},
    };
}

nlohmann::json sample_to_json(const TrainingSample& sample, std::size_t k, const AxisOrder& axes) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : sample.points) {
        points.push_back({p[0], p[1], p[2]});
    }
    return {{"cluster", k + 1},
            {"axis_order", axes.name()},
            {"points", std::move(points)},
            {"pixel_indices", sample.pixel_indices}};
}

namespace {

// Foreground pixels lifted to points; `where[j]` is the pixel of point j.
std::vector<FeaturePoint> foreground_points(const RgbImage& image, const IndexedImage& indexed,
                                            std::vector<std::size_t>& where) {
    std::vector<FeaturePoint> points;
    const auto labels = indexed.labels();
    const auto pixels = image.pixels();
    where.clear();
    for (std::size_t p = 0; p < labels.size(); ++p) {
        if (labels[p] != 0) {
            points.push_back(to_point(pixels[p]));
            where.push_back(p);
        }
    }
    return points;
}

KMeansResult frozen_means(std::span<const FeaturePoint> points, const IndexedImage& indexed,
                          std::span<const std::size_t> where, const SeedPalette& palette) {
    const std::size_t k = palette.size() - 1;
    std::vector<FeaturePoint> seeds(k);
    for (std::size_t i = 0; i < k; ++i) {
        seeds[i] = to_point(palette[i + 1].color);
    }
    KMeansResult r;
    r.assignments.resize(points.size());
    const auto labels = indexed.labels();
    for (std::size_t j = 0; j < points.size(); ++j) {
        r.assignments[j] = static_cast<std::uint32_t>(labels[where[j]] - 1);
    }
    std::vector<std::size_t> counts;
    r.means = centroids(points, r.assignments, seeds, counts);
    r.wcss = wcss(points, r.assignments, r.means);
    r.wcss_trace = {r.wcss};
    r.converged = true;
    return r;
}

} // namespace

DensityGrid cluster_grid(const RgbImage& image, const IndexedImage& indexed, std::size_t k,
                         const PipelineOptions& options) {
    const auto points = cluster_points(image, indexed, k, options.axes);
    return density_grid(points, options.bins_per_axis, options.exec);
}

IsoMesh cluster_mesh(const DensityGrid& grid, double fraction, const PipelineOptions& options) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw RangeError("iso level fraction must lie in (0, 1]");
    }
    const IsoOptions iso{options.smooth, options.exec};
    const double peak = field_max(grid, iso);
    if (peak <= 0.0) {
        return {};
    }
    return isosurface(grid, fraction * peak, iso);
}

PipelineResult run_pipeline(const RgbImage& image, const SeedPalette& palette, const PipelineOptions& options,
                            Stage until) {
    options.validate();
    IndexedImage indexed = classify_nearest(image, palette, options.exec);

    std::vector<std::size_t> where;
    const auto points = foreground_points(image, indexed, where);
    KMeansResult kmeans;
    if (options.refine_means) {
        std::vector<FeaturePoint> seeds;
        for (std::size_t i = 1; i < palette.size(); ++i) {
            seeds.push_back(to_point(palette[i].color));
        }
        kmeans = lloyd(points, seeds, KMeansOptions{options.max_iter, options.tol, options.exec});
        std::vector<Label> labels(indexed.labels().begin(), indexed.labels().end());
        for (std::size_t j = 0; j < points.size(); ++j) {
            labels[where[j]] = static_cast<Label>(kmeans.assignments[j] + 1);
        }
        indexed = IndexedImage(image.width(), image.height(), std::move(labels), palette.colors());
    } else {
        kmeans = frozen_means(points, indexed, where, palette);
    }

    PipelineResult result{palette, indexed, std::move(kmeans), Stage::segment, {}, {}, {}, {}, {}};
    const std::size_t k = palette.size();
    for (std::size_t i = 0; i < k; ++i) {
        result.masks.push_back(logical_mask(indexed, i));
        result.individual_maps.push_back(individual_colormap(indexed.colormap(), i, options.mute));
    }
    if (until == Stage::segment) {
        return result;
    }

    result.stats = summarize(image, indexed, palette, options.exec);
    result.completed = Stage::stats;
    if (until == Stage::stats) {
        return result;
    }

    // One task per thematic cluster; exceptions are carried out of the
    // parallel region and rethrown in cluster order.
    const std::size_t thematic = k - 1;
    std::vector<std::optional<DensityGrid>> grids(thematic);
    std::vector<IsoMesh> meshes(thematic);
    std::vector<std::exception_ptr> failures(thematic);
    PipelineOptions inner = options;
    inner.exec = Execution::serial;
    const auto n = static_cast<std::int64_t>(thematic);
#pragma omp parallel for schedule(dynamic) if (options.exec == Execution::parallel)
    for (std::int64_t t = 0; t < n; ++t) {
        try {
            const auto c = static_cast<std::size_t>(t) + 1;
            grids[t] = cluster_grid(image, indexed, c, inner);
            meshes[t] = cluster_mesh(*grids[t], options.iso_level_fraction, inner);
            meshes[t].cluster = c;
            meshes[t].color = palette[c].color;
        } catch (...) {
            failures[t] = std::current_exception();
        }
    }
    for (std::size_t t = 0; t < thematic; ++t) {
        if (failures[t]) {
            std::rethrow_exception(failures[t]);
        }
        result.grids.push_back(std::move(*grids[t]));
    }
    result.meshes = std::move(meshes);
    result.completed = Stage::mesh;
    return result;
}

std::string mask_file(std::size_t k) { return "cluster_mask_" + std::to_string(k) + ".png"; }
std::string colormap_file(std::size_t k) { return "individual_colormap_" + std::to_string(k) + ".json"; }
std::string mesh_file(std::size_t k) { return "mesh_" + std::to_string(k) + ".json"; }
std::string samples_file(std::size_t k) { return "samples_" + std::to_string(k) + ".json"; }

namespace {

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    const std::string text = doc.dump(2) + "\n";
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

const char* stage_name(Stage s) {
    switch (s) {
    case Stage::segment:
        return "segment";
    case Stage::stats:
        return "stats";
    case Stage::mesh:
        return "mesh";
    }
    return "segment";
}

} // namespace

void write_artifacts(const PipelineResult& result, const PipelineOptions& options, const std::filesystem::path& dir) {
    write_indexed_sidecar(result.indexed, dir);
    for (std::size_t i = 0; i < result.masks.size(); ++i) {
        write_file(dir / mask_file(i + 1), encode_mask_png(result.masks[i]));
        write_json(dir / colormap_file(i + 1), colormap_to_json(result.individual_maps[i]));
    }
    if (result.stats) {
        write_json(dir / kStatsJson, stats_to_json(*result.stats));
    }
    for (const auto& mesh : result.meshes) {
        write_json(dir / mesh_file(mesh.cluster + 1), mesh_to_json(mesh));
    }
    write_json(dir / kRunJson, {
                                   {"stage", stage_name(result.completed)},
                                   {"clusters", result.palette.size()},
                                   {"palette", palette_to_json(result.palette)},
                                   {"options", options_to_json(options)},
                                   {"kmeans", kmeans_to_json(result.kmeans)},
                               });
}

} // namespace lulc::workbench
