#include "lulc/workbench/session_store.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>

#include "lulc/color_json.hpp"
#include "lulc/error.hpp"
#include "lulc/featurespace.hpp"
#include "lulc/image_io.hpp"

namespace fs = std::filesystem;

namespace lulc::workbench {

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kCurrent = "current";
constexpr const char* kRuns = "runs";

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string random_id() {
    std::random_device rd;
    std::uniform_int_distribution<unsigned> byte(0, 255);
    std::string id;
    char hex[3];
    for (int i = 0; i < 12; ++i) {
        std::snprintf(hex, sizeof hex, "%02x", byte(rd));
        id += hex;
    }
    return id;
}

bool valid_id(const std::string& id) {
    return !id.empty() && id.size() <= 64 &&
           std::all_of(id.begin(), id.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

std::string read_text(const fs::path& path) {
    const auto bytes = read_file(path);
    return std::string(bytes.begin(), bytes.end());
}

nlohmann::json read_json(const fs::path& path) {
    try {
        return nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.filename().string() + ": " + e.what());
    }
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    write_file(tmp, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    fs::rename(tmp, path);
}

Artifact json_artifact(const nlohmann::json& doc) { return {"application/json", doc.dump(2) + "\n"}; }

Artifact png_artifact(const Bytes& bytes) { return {"image/png", std::string(bytes.begin(), bytes.end())}; }

Artifact mesh_artifact(const IsoMesh& mesh, bool obj) {
    if (obj) {
        return {"model/obj", mesh_to_obj(mesh)};
    }
    return json_artifact(mesh_to_json(mesh));
}

std::size_t next_run_number(const fs::path& runs) {
    std::size_t highest = 0;
    if (fs::exists(runs)) {
        for (const auto& entry : fs::directory_iterator(runs)) {
            const auto name = entry.path().filename().string();
            const auto dash = name.rfind('-');
            if (dash == std::string::npos) {
                continue;
            }
            try {
                highest = std::max<std::size_t>(highest, std::stoul(name.substr(dash + 1)));
            } catch (const std::exception&) {
            }
        }
    }
    return highest + 1;
}

std::string run_name(std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run-%06zu", n);
    return buf;
}

} // namespace

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
}

fs::path SessionStore::session_dir(const std::string& id) const {
    if (!valid_id(id) || !fs::is_directory(root_ / id)) {
        throw NotFoundError("no session " + id);
    }
    return root_ / id;
}

std::shared_ptr<std::mutex> SessionStore::writer_lock(const std::string& id) {
    std::lock_guard guard(locks_guard_);
    auto& slot = locks_[id];
    if (!slot) {
        slot = std::make_shared<std::mutex>();
    }
    return slot;
}

nlohmann::json SessionStore::read_manifest(const std::string& id) const {
    return read_json(session_dir(id) / kManifest);
}

void SessionStore::write_manifest(const std::string& id, const nlohmann::json& manifest) const {
    write_text_atomic(session_dir(id) / kManifest, manifest.dump(2) + "\n");
}

std::string SessionStore::create(std::span<const std::uint8_t> image_bytes) {
    const RgbImage image = decode_image(image_bytes);
    const auto format = sniff_format(image_bytes);
    const std::string ext = format == ImageFormat::png ? "png" : "jpg";

    std::string id;
    fs::path dir;
    do {
        id = random_id();
        dir = root_ / id;
    } while (!fs::create_directory(dir));

    write_file(dir / ("source." + ext), image_bytes);
    fs::create_directory(dir / kRuns);
    const auto now = utc_now();
    const nlohmann::json manifest = {
        {"id", id},
        {"created", now},
        {"modified", now},
        {"width", image.width()},
        {"height", image.height()},
        {"pixels", image.size()},
        {"source", {{"file", "source." + ext}, {"format", ext}, {"bytes", image_bytes.size()}}},
        {"palette_draft", nlohmann::json::array()},
    };
    write_manifest(id, manifest);
    return id;
}

fs::path SessionStore::committed_run(const std::string& id) const {
    const fs::path link = session_dir(id) / kCurrent;
    std::error_code ec;
    const fs::path target = fs::read_symlink(link, ec);
    if (ec) {
        throw ConflictError("session " + id + " has no completed pipeline run");
    }
    return link.parent_path() / target;
}

nlohmann::json SessionStore::describe(const std::string& id) const {
    auto manifest = read_manifest(id);
    nlohmann::json stages = {{"palette", false}, {"indexed", false}, {"stats", false}, {"meshes", false}};
    manifest["run"] = nullptr;
    try {
        const auto run_dir = committed_run(id);
        const auto run = read_json(run_dir / kRunJson);
        const std::string stage = run.at("stage").get<std::string>();
        stages = {{"palette", true},
                  {"indexed", true},
                  {"stats", stage != "segment"},
                  {"meshes", stage == "mesh"}};
        manifest["run"] = run_dir.filename().string();
        manifest["palette"] = run.at("palette");
        manifest["options"] = run.at("options");
        manifest["kmeans"] = {{"wcss", run.at("kmeans").at("wcss")},
                              {"iterations", run.at("kmeans").at("iterations")},
                              {"converged", run.at("kmeans").at("converged")},
                              {"means", run.at("kmeans").at("means")}};
    } catch (const ConflictError&) {
    }
    manifest["stages"] = stages;
    return manifest;
}

nlohmann::json SessionStore::add_seed(const std::string& id, std::size_t x, std::size_t y,
                                      std::optional<std::string> label, PickMode mode) {
    const auto lock = writer_lock(id);
    std::lock_guard guard(*lock);
    auto manifest = read_manifest(id);
    const auto dir = session_dir(id);
    const RgbImage image = load_image(dir / manifest.at("source").at("file").get<std::string>());
    const RgbColor color = pick_seed(image, x, y, mode);

    auto& draft = manifest["palette_draft"];
    for (const auto& existing : draft) {
        if (color_from_json(existing.at("rgb")) == color) {
            throw PaletteError("color at (" + std::to_string(x) + ", " + std::to_string(y) +
                               ") is already in the palette");
        }
    }
    const std::size_t position = draft.size() + 1;
    nlohmann::json seed = {
        {"label", label.value_or(position == 1 ? "background" : "Cluster" + std::to_string(position))},
        {"rgb", color_to_json(color)},
        {"x", x},
        {"y", y},
        {"cluster", position},
        {"background", position == 1},
    };
    draft.push_back(seed);
    manifest["modified"] = utc_now();
    write_manifest(id, manifest);
    return seed;
}

nlohmann::json SessionStore::clear_seeds(const std::string& id) {
    const auto lock = writer_lock(id);
    std::lock_guard guard(*lock);
    auto manifest = read_manifest(id);
    manifest["palette_draft"] = nlohmann::json::array();
    manifest["modified"] = utc_now();
    write_manifest(id, manifest);
    return manifest["palette_draft"];
}

nlohmann::json SessionStore::run(const std::string& id, const std::optional<SeedPalette>& palette,
                                 const PipelineOptions& options) {
    const auto lock = writer_lock(id);
    std::lock_guard guard(*lock);
    auto manifest = read_manifest(id);
    const auto dir = session_dir(id);

    const SeedPalette effective = palette ? *palette : palette_from_json(manifest.at("palette_draft"));
    const RgbImage image = load_image(dir / manifest.at("source").at("file").get<std::string>());
    const PipelineResult result = run_pipeline(image, effective, options, Stage::mesh);

    const fs::path runs = dir / kRuns;
    fs::create_directories(runs);
    const std::size_t number = next_run_number(runs);
    const fs::path staging = runs / (".staging-" + std::to_string(number));
    const fs::path published = runs / run_name(number);
    fs::remove_all(staging);
    fs::create_directory(staging);
    try {
        write_artifacts(result, options, staging);
        fs::rename(staging, published);
    } catch (...) {
        std::error_code ignored;
        fs::remove_all(staging, ignored);
        throw;
    }

    // Publish: a fresh symlink renamed over `current` is an atomic swap.
    const fs::path link = dir / kCurrent;
    const fs::path tmp_link = dir / ".current.tmp";
    std::error_code ec;
    fs::remove(tmp_link, ec);
    const fs::path previous = fs::read_symlink(link, ec);
    const bool had_previous = !ec;
    fs::create_directory_symlink(fs::path(kRuns) / run_name(number), tmp_link);
    fs::rename(tmp_link, link);

    // Keep the run that was current until now for in-flight readers; drop
    // anything older.
    for (const auto& entry : fs::directory_iterator(runs)) {
        const auto name = entry.path().filename();
        if (name == run_name(number) || (had_previous && name == previous.filename())) {
            continue;
        }
        fs::remove_all(entry.path(), ec);
    }

    manifest["modified"] = utc_now();
    write_manifest(id, manifest);
    return describe(id);
}

Artifact SessionStore::artifact(const std::string& id, const std::string& kind, std::optional<std::size_t> k,
                                const ArtifactQuery& query) const {
    const auto dir = session_dir(id);
    const fs::path run_dir = committed_run(id);
    const auto run = read_json(run_dir / kRunJson);
    const std::size_t clusters = run.at("clusters").get<std::size_t>();

    const auto need_k = [&]() -> std::size_t {
        if (!k) {
            throw NotFoundError("artifact " + kind + " needs a cluster number");
        }
        if (*k == 0 || *k > clusters) {
            throw NotFoundError("no cluster " + std::to_string(*k) + " (run has " + std::to_string(clusters) + ")");
        }
        return *k;
    };
    const auto need_thematic = [&]() {
        const auto c = need_k();
        if (c == 1) {
            throw RangeError("cluster 1 is the background and has no feature-space geometry");
        }
        return c;
    };
    const auto load_source = [&]() {
        const auto manifest = read_manifest(id);
        return load_image(dir / manifest.at("source").at("file").get<std::string>());
    };
    const auto options = [&]() { return options_from_json(run.at("options")); };

    if (kind == "mask") {
        return {"image/png", read_text(run_dir / mask_file(need_k()))};
    }
    if (kind == "colormap") {
        return {"application/json", read_text(run_dir / colormap_file(need_k()))};
    }
    if (kind == "clustered") {
        return {"image/png", read_text(run_dir / kClusteredPng)};
    }
    if (kind == "clustered_map") {
        return {"application/json", read_text(run_dir / kClusteredMapJson)};
    }
    if (kind == "stats") {
        return {"application/json", read_text(run_dir / kStatsJson)};
    }
    if (kind == "run") {
        return {"application/json", read_text(run_dir / kRunJson)};
    }
    if (kind == "report") {
        // Rebuild the text block from the persisted numbers.
        const auto doc = read_json(run_dir / kStatsJson);
        std::vector<std::size_t> counts;
        for (const auto& c : doc.at("clusters")) {
            counts.push_back(c.at("count").get<std::size_t>());
        }
        auto stats = area_report(counts, doc.at("background_cluster").get<std::size_t>() - 1);
        for (std::size_t i = 0; i < counts.size(); ++i) {
            stats.clusters[i].label = doc.at("clusters")[i].at("label").get<std::string>();
        }
        return {"text/plain; charset=utf-8", format_report(stats)};
    }
    if (kind == "segmented" || kind == "rendered") {
        const auto indexed = read_indexed_sidecar(run_dir);
        if (kind == "segmented") {
            return png_artifact(encode_png_rgb(render_indexed(indexed, indexed.colormap())));
        }
        const auto map = colormap_from_json(read_json(run_dir / colormap_file(need_k())));
        return png_artifact(encode_png_rgb(render_indexed(indexed, map)));
    }
    if (kind == "mesh") {
        const auto c = need_thematic();
        if (!query.iso_fraction) {
            if (!query.obj) {
                return {"application/json", read_text(run_dir / mesh_file(c))};
            }
            return mesh_artifact(mesh_from_json(read_json(run_dir / mesh_file(c))), true);
        }
        const auto opts = options();
        const auto indexed = read_indexed_sidecar(run_dir);
        const auto grid = cluster_grid(load_source(), indexed, c - 1, opts);
        auto mesh = cluster_mesh(grid, *query.iso_fraction, opts);
        mesh.cluster = c - 1;
        mesh.color = indexed.colormap()[c - 1];
        return mesh_artifact(mesh, query.obj);
    }
    if (kind == "overlap") {
        const auto a = need_thematic();
        if (!query.with || *query.with < 2 || *query.with > clusters) {
            throw NotFoundError("overlap needs ?with=<thematic cluster number>");
        }
        const auto opts = options();
        const auto indexed = read_indexed_sidecar(run_dir);
        const auto image = load_source();
        const auto grid_a = cluster_grid(image, indexed, a - 1, opts);
        const auto grid_b = cluster_grid(image, indexed, *query.with - 1, opts);
        auto mesh = cluster_mesh(cellwise_min(grid_a, grid_b), query.iso_fraction.value_or(opts.iso_level_fraction),
                                 opts);
        mesh.cluster = a - 1;
        const auto& ca = indexed.colormap()[a - 1];
        const auto& cb = indexed.colormap()[*query.with - 1];
        mesh.color = {(ca.r + cb.r) / 2, (ca.g + cb.g) / 2, (ca.b + cb.b) / 2};
        return mesh_artifact(mesh, query.obj);
    }
    if (kind == "ellipsoid") {
        const auto c = need_thematic();
        const auto opts = options();
        const auto indexed = read_indexed_sidecar(run_dir);
        const auto points = cluster_points(load_source(), indexed, c - 1, opts.axes);
        if (points.empty()) {
            throw EmptySampleError("cluster " + std::to_string(c) + " has no pixels");
        }
        auto mesh = ellipsoid_mesh(fit_gaussian(points), query.scale.value_or(2.0), query.subdivisions.value_or(3));
        mesh.cluster = c - 1;
        mesh.color = indexed.colormap()[c - 1];
        return mesh_artifact(mesh, query.obj);
    }
    if (kind == "samples") {
        const auto c = need_k();
        const auto opts = options();
        const auto indexed = read_indexed_sidecar(run_dir);
        const auto sample =
            sample_training_pixels(load_source(), indexed, c - 1, opts.sample_n, opts.rng_seed, opts.axes);
        return json_artifact(sample_to_json(sample, c - 1, opts.axes));
    }
    throw NotFoundError("unknown artifact kind \"" + kind + "\"");
}

} // namespace lulc::workbench
