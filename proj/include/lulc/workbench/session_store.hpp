#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>

#include "json.hpp"
#include "lulc/classify.hpp"
#include "lulc/workbench/pipeline.hpp"

namespace lulc::workbench {

struct Artifact {
    std::string content_type;
    std::string body;
};

struct ArtifactQuery {
    std::optional<double> iso_fraction;       // recompute a mesh at this level
    std::optional<std::size_t> with;          // second cluster for overlap (1-based)
    std::optional<double> scale;              // ellipsoid scale
    std::optional<std::size_t> subdivisions;  // ellipsoid tessellation
    bool obj = false;                         // meshes as OBJ instead of JSON
};

// One directory per session under `root`:
//
//   <id>/manifest.json      session metadata and the seed-pick draft
//   <id>/source.<ext>       uploaded bytes, verbatim
//   <id>/runs/run-N/        committed pipeline output (see write_artifacts)
//   <id>/current -> runs/run-N
//
// A run is written to a staging directory and published by atomically
// replacing the `current` symlink, so readers only ever see complete runs.
// Mutations of one session are serialized; reads take no lock.
class SessionStore {
public:
    explicit SessionStore(std::filesystem::path root);

    const std::filesystem::path& root() const { return root_; }

    // Throws FormatError/DimensionError when the bytes do not decode.
    std::string create(std::span<const std::uint8_t> image_bytes);

    // Manifest merged with the committed run summary. NotFoundError for
    // unknown ids.
    nlohmann::json describe(const std::string& id) const;

    // Appends the color at (x, y) to the palette draft. The first pick is the
    // background.
    nlohmann::json add_seed(const std::string& id, std::size_t x, std::size_t y, std::optional<std::string> label,
                            PickMode mode = PickMode::single_pixel);
    nlohmann::json clear_seeds(const std::string& id);

    // Runs the full pipeline and commits it. Without a palette the draft is
    // used. On any failure the previously committed run stays in place.
    nlohmann::json run(const std::string& id, const std::optional<SeedPalette>& palette,
                       const PipelineOptions& options);

    // kind: mask, colormap, clustered, clustered_map, segmented, rendered,
    // stats, report, mesh, ellipsoid, overlap, samples, run. Cluster numbers
    // are 1-based with the background as cluster 1.
    Artifact artifact(const std::string& id, const std::string& kind, std::optional<std::size_t> k,
                      const ArtifactQuery& query = {}) const;

    // Directory of the committed run; ConflictError when nothing ran yet.
    std::filesystem::path committed_run(const std::string& id) const;

private:
    std::filesystem::path session_dir(const std::string& id) const;
    std::shared_ptr<std::mutex> writer_lock(const std::string& id);
    nlohmann::json read_manifest(const std::string& id) const;
    void write_manifest(const std::string& id, const nlohmann::json& manifest) const;

    std::filesystem::path root_;
    std::mutex locks_guard_;
    std::map<std::string, std::shared_ptr<std::mutex>> locks_;
};

} // namespace lulc::workbench
