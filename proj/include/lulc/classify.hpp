#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "lulc/execution.hpp"
#include "lulc/raster.hpp"

namespace lulc {

struct Seed {
    std::string label;
    RgbColor color;

    friend bool operator==(const Seed&, const Seed&) = default;
};

// Ordered user-picked class colors. Entry 0 is the background (null data).
// At least two seeds, all colors in [0,1] and pairwise distinct.
class SeedPalette {
public:
    explicit SeedPalette(std::vector<Seed> seeds);

    std::size_t size() const { return seeds_.size(); }
    const std::vector<Seed>& seeds() const { return seeds_; }
    const Seed& operator[](std::size_t i) const { return seeds_[i]; }
    ColorMap colors() const;

private:
    std::vector<Seed> seeds_;
};

// JSON array of {"label": ..., "rgb": [r, g, b]}; first entry is background.
SeedPalette palette_from_json(const nlohmann::json& doc);
nlohmann::json palette_to_json(const SeedPalette& palette);

enum class PickMode {
    single_pixel,
    neighborhood_mean,  // mean of the in-bounds 3x3 block around (x, y)
};

RgbColor pick_seed(const RgbImage& image, std::size_t x, std::size_t y, PickMode mode = PickMode::single_pixel);

// Nearest-seed labeling in RGB (squared Euclidean, lowest index on ties).
// The result's colormap is the palette colors in order.
IndexedImage classify_nearest(const RgbImage& image, const SeedPalette& palette,
                              Execution exec = Execution::parallel);

} // namespace lulc
