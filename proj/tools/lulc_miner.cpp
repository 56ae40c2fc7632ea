// Command-line front end: runs pipeline stages into a directory or hosts the
// HTTP workbench.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "lulc/error.hpp"
#include "lulc/image_io.hpp"
#include "lulc/workbench/http_api.hpp"
#include "lulc/workbench/pipeline.hpp"

namespace fs = std::filesystem;
using namespace lulc;
using namespace lulc::workbench;

namespace {

struct StageArgs {
    std::string image;
    std::string palette;
    std::string out;
    bool refine = false;
    bool freeze = false;
    std::size_t bins = kDefaultBins;
    double iso_frac = kDefaultIsoFraction;
    std::size_t sample_n = kDefaultSampleSize;
    std::uint64_t seed = 0;
    std::string axes = "RGB";
    bool serial = false;
    bool obj = false;
};

void add_stage_flags(CLI::App* cmd, StageArgs& a, bool out_required) {
    cmd->add_option("--image", a.image, "Input PNG or JPEG raster")->required()->check(CLI::ExistingFile);
    cmd->add_option("--palette", a.palette, "Seed palette JSON; first entry is the background")
        ->required()
        ->check(CLI::ExistingFile);
    auto* out = cmd->add_option("--out", a.out, "Output directory");
    if (out_required) {
        out->required();
    }
    auto* refine = cmd->add_flag("--refine-means", a.refine, "K-means over all foreground pixels (default)");
    cmd->add_flag("--freeze-assignments", a.freeze, "Keep nearest-seed labels; means are class centroids")
        ->excludes(refine);
    cmd->add_option("--bins", a.bins, "Density grid bins per axis")->capture_default_str();
    cmd->add_option("--iso-frac", a.iso_frac, "Iso level as a fraction of the smoothed peak")->capture_default_str();
    cmd->add_option("--sample-n", a.sample_n, "Training pixels sampled per cluster")->capture_default_str();
    cmd->add_option("--seed", a.seed, "RNG seed for sampling")->capture_default_str();
    cmd->add_option("--axes", a.axes, "Feature-space axis order, a permutation of RGB")->capture_default_str();
    cmd->add_flag("--serial", a.serial, "Use the serial reference kernels");
}

PipelineOptions to_options(const StageArgs& a) {
    PipelineOptions o;
    o.refine_means = !a.freeze;
    o.bins_per_axis = a.bins;
    o.iso_level_fraction = a.iso_frac;
    o.sample_n = a.sample_n;
    o.rng_seed = a.seed;
    o.axes = AxisOrder::parse(a.axes);
    o.exec = a.serial ? Execution::serial : Execution::parallel;
    return o;
}

SeedPalette read_palette(const std::string& path) {
    const auto bytes = read_file(path);
    try {
        return palette_from_json(nlohmann::json::parse(bytes.begin(), bytes.end()));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path + ": " + e.what());
    }
}

int run_stage(const StageArgs& a, Stage stage, bool print_report) {
    const auto options = to_options(a);
    const auto image = load_image(a.image);
    const auto palette = read_palette(a.palette);
    const auto result = run_pipeline(image, palette, options, stage);
    if (!a.out.empty()) {
        fs::create_directories(a.out);
        write_artifacts(result, options, a.out);
        if (stage == Stage::mesh) {
            // Training samples of every non-empty thematic cluster.
            for (std::size_t k = 1; k < palette.size(); ++k) {
                if (result.stats->clusters[k].count == 0) {
                    continue;
                }
                const auto sample =
                    sample_training_pixels(image, result.indexed, k, options.sample_n, options.rng_seed, options.axes);
                const auto text = sample_to_json(sample, k, options.axes).dump(2) + "\n";
                write_file(fs::path(a.out) / samples_file(k + 1),
                           std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
            }
        }
        if (a.obj) {
            for (const auto& mesh : result.meshes) {
                const auto text = mesh_to_obj(mesh);
                write_file(fs::path(a.out) / ("mesh_" + std::to_string(mesh.cluster + 1) + ".obj"),
                           std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
            }
        }
    }
    if (print_report && result.stats) {
        std::cout << format_report(*result.stats);
    } else {
        std::cerr << "k=" << palette.size() << " wcss=" << result.kmeans.wcss
                  << " iterations=" << result.kmeans.iterations << (a.out.empty() ? "" : " -> " + a.out) << "\n";
    }
    return 0;
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LULC visual data mining workbench"};
    app.require_subcommand(1);

    StageArgs segment_args, stats_args, mesh_args, report_args;
    auto* segment = app.add_subcommand("segment", "Classify, refine and write masks plus colormaps");
    add_stage_flags(segment, segment_args, true);
    auto* stats = app.add_subcommand("stats", "Segment and write per-cluster area statistics");
    add_stage_flags(stats, stats_args, true);
    auto* mesh = app.add_subcommand("mesh", "Full pipeline including feature-space isosurfaces");
    add_stage_flags(mesh, mesh_args, true);
    mesh->add_flag("--obj", mesh_args.obj, "Also write Wavefront OBJ meshes");
    auto* report = app.add_subcommand("report", "Print the area listing");
    add_stage_flags(report, report_args, false);

    std::string data_dir = env_or("LULC_MINER_DATA_DIR", "lulc-data");
    int port = std::stoi(env_or("LULC_MINER_PORT", "8080"));
    std::string host = "127.0.0.1";
    std::string ui_dir;
    auto* serve = app.add_subcommand("serve", "Host the HTTP API (and a static UI bundle)");
    serve->add_option("--data-dir", data_dir, "Session root (env LULC_MINER_DATA_DIR)")->capture_default_str();
    serve->add_option("--port", port, "Listen port (env LULC_MINER_PORT)")->capture_default_str();
    serve->add_option("--host", host, "Listen address")->capture_default_str();
    serve->add_option("--ui", ui_dir, "Directory with the static UI bundle")->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try {
        if (segment->parsed()) {
            return run_stage(segment_args, Stage::segment, false);
        }
        if (stats->parsed()) {
            return run_stage(stats_args, Stage::stats, true);
        }
        if (mesh->parsed()) {
            return run_stage(mesh_args, Stage::mesh, false);
        }
        if (report->parsed()) {
            return run_stage(report_args, Stage::stats, true);
        }
        if (serve->parsed()) {
            SessionStore store(data_dir);
            httplib::Server server;
            std::optional<fs::path> ui;
            if (!ui_dir.empty()) {
                ui = ui_dir;
            }
            register_routes(server, store, ui);
            std::cerr << "serving " << store.root() << " on http://" << host << ":" << port << "\n";
            return server.listen(host, port) ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
