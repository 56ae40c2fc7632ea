#include "lulc/classify.hpp"

#include <algorithm>

#include "lulc/color_json.hpp"
#include "lulc/error.hpp"
#include "lulc/kernels.hpp"

namespace lulc {

SeedPalette::SeedPalette(std::vector<Seed> seeds) : seeds_(std::move(seeds)) {
    if (seeds_.size() < 2) {
        throw PaletteError("palette needs a background seed plus at least one class");
    }
    if (seeds_.size() > kMaxClusters) {
        throw PaletteError("palette supports at most 256 seeds");
    }
    for (std::size_t i = 0; i < seeds_.size(); ++i) {
        if (!seeds_[i].color.in_unit_cube()) {
            throw PaletteError("seed " + std::to_string(i + 1) + " has a channel outside [0,1]");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (seeds_[i].color == seeds_[j].color) {
                throw PaletteError("seeds " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                                   " share the same color");
            }
        }
    }
}

ColorMap SeedPalette::colors() const {
    std::vector<RgbColor> entries(seeds_.size());
    std::transform(seeds_.begin(), seeds_.end(), entries.begin(), [](const Seed& s) { return s.color; });
    return ColorMap(std::move(entries));
}

SeedPalette palette_from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) {
        throw FormatError("palette must be a JSON array");
    }
    std::vector<Seed> seeds;
    seeds.reserve(doc.size());
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("rgb")) {
            throw FormatError("palette entries need an \"rgb\" field");
        }
        Seed seed;
        seed.color = color_from_json(entry.at("rgb"));
        if (entry.contains("label")) {
            if (!entry.at("label").is_string()) {
                throw FormatError("palette label must be a string");
            }
            seed.label = entry.at("label").get<std::string>();
        } else {
            seed.label = seeds.empty() ? "background" : "Cluster" + std::to_string(seeds.size() + 1);
        }
        seeds.push_back(std::move(seed));
    }
    return SeedPalette(std::move(seeds));
}

nlohmann::json palette_to_json(const SeedPalette& palette) {
    auto out = nlohmann::json::array();
    for (const auto& s : palette.seeds()) {
        out.push_back({{"label", s.label}, {"rgb", color_to_json(s.color)}});
    }
    return out;
}

RgbColor pick_seed(const RgbImage& image, std::size_t x, std::size_t y, PickMode mode) {
    if (x >= image.width() || y >= image.height()) {
        throw BoundsError("pick_seed: (" + std::to_string(x) + ", " + std::to_string(y) + ") outside " +
                          std::to_string(image.width()) + "x" + std::to_string(image.height()));
    }
    if (mode == PickMode::single_pixel) {
        return image.at(x, y);
    }
    const std::size_t x0 = x == 0 ? 0 : x - 1;
    const std::size_t y0 = y == 0 ? 0 : y - 1;
    const std::size_t x1 = std::min(x + 1, image.width() - 1);
    const std::size_t y1 = std::min(y + 1, image.height() - 1);
    RgbColor sum;
    std::size_t n = 0;
    for (std::size_t yy = y0; yy <= y1; ++yy) {
        for (std::size_t xx = x0; xx <= x1; ++xx) {
            const auto& c = image.at(xx, yy);
            sum.r += c.r;
            sum.g += c.g;
            sum.b += c.b;
            ++n;
        }
    }
    const auto dn = static_cast<double>(n);
    return {sum.r / dn, sum.g / dn, sum.b / dn};
}

IndexedImage classify_nearest(const RgbImage& image, const SeedPalette& palette, Execution exec) {
    const ColorMap colors = palette.colors();
    std::vector<Label> labels(image.size());
    kernels::nearest_labels(exec, image.pixels(), colors.entries(), labels);
    return IndexedImage(image.width(), image.height(), std::move(labels), colors);
}

} // namespace lulc
