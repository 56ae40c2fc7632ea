#include "lulc/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lulc/error.hpp"

namespace lulc {

namespace {

void require_dimensions(std::size_t width, std::size_t height, std::size_t length, const char* what) {
    if (width == 0 || height == 0) {
        throw DimensionError(std::string(what) + ": width and height must be at least 1");
    }
    if (length != width * height) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(width * height) +
                             " elements, got " + std::to_string(length));
    }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw RangeError("memory_footprint: element count overflows 64 bits");
    }
    return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw RangeError("memory_footprint: element count overflows 64 bits");
    }
    return out;
}

} // namespace

bool RgbColor::in_unit_cube() const {
    const auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
    return ok(r) && ok(g) && ok(b);
}

std::uint8_t to_byte(double channel) {
    const double scaled = std::round(std::clamp(channel, 0.0, 1.0) * 255.0);
    return static_cast<std::uint8_t>(scaled);
}

RgbImage::RgbImage(std::size_t width, std::size_t height, std::vector<RgbColor> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    require_dimensions(width_, height_, pixels_.size(), "RgbImage");
    for (const auto& c : pixels_) {
        if (!c.in_unit_cube()) {
            throw DomainError("RgbImage: channel outside [0,1]");
        }
    }
}

ColorMap::ColorMap(std::vector<RgbColor> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw IndexError("ColorMap: at least one entry required");
    }
    if (entries_.size() > kMaxClusters) {
        throw IndexError("ColorMap: at most 256 entries supported");
    }
    for (const auto& c : entries_) {
        if (!c.in_unit_cube()) {
            throw DomainError("ColorMap: entry outside [0,1]");
        }
    }
}

IndexedImage::IndexedImage(std::size_t width, std::size_t height, std::vector<Label> labels, ColorMap colormap)
    : width_(width), height_(height), labels_(std::move(labels)), colormap_(std::move(colormap)) {
    require_dimensions(width_, height_, labels_.size(), "IndexedImage");
    if (colormap_.size() < 2) {
        throw IndexError("IndexedImage: need background plus at least one class");
    }
    const auto k = colormap_.size();
    for (Label l : labels_) {
        if (l >= k) {
            throw IndexError("IndexedImage: label " + std::to_string(l) + " >= cluster count " +
                             std::to_string(k));
        }
    }
}

BitMask::BitMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    require_dimensions(width_, height_, bits_.size(), "BitMask");
}

std::size_t BitMask::popcount() const {
    return static_cast<std::size_t>(std::count_if(bits_.begin(), bits_.end(), [](auto b) { return b != 0; }));
}

RgbImage render_indexed(const IndexedImage& image, const ColorMap& map) {
    const auto labels = image.labels();
    const Label max_label = *std::max_element(labels.begin(), labels.end());
    if (map.size() < static_cast<std::size_t>(max_label) + 1) {
        throw IndexError("render_indexed: colormap has " + std::to_string(map.size()) +
                         " entries but labels reach " + std::to_string(max_label));
    }
    std::vector<RgbColor> pixels(labels.size());
    std::transform(labels.begin(), labels.end(), pixels.begin(), [&](Label l) { return map[l]; });
    return RgbImage(image.width(), image.height(), std::move(pixels));
}

ColorMap individual_colormap(const ColorMap& shared, std::size_t k, const RgbColor& mute) {
    if (k >= shared.size()) {
        throw IndexError("individual_colormap: cluster " + std::to_string(k) + " out of range");
    }
    std::vector<RgbColor> entries(shared.size(), mute);
    entries[k] = shared[k];
    return ColorMap(std::move(entries));
}

BitMask logical_mask(const IndexedImage& image, std::size_t k) {
    if (k >= image.cluster_count()) {
        throw IndexError("logical_mask: cluster " + std::to_string(k) + " out of range");
    }
    const auto labels = image.labels();
    std::vector<std::uint8_t> bits(labels.size());
    std::transform(labels.begin(), labels.end(), bits.begin(),
                   [k](Label l) { return static_cast<std::uint8_t>(l == k ? 1 : 0); });
    return BitMask(image.width(), image.height(), std::move(bits));
}

IndexedImage relabel_exact(const RgbImage& rendered, const ColorMap& map) {
    const auto pixels = rendered.pixels();
    std::vector<Label> labels(pixels.size());
    for (std::size_t p = 0; p < pixels.size(); ++p) {
        const auto entries = map.entries();
        const auto it = std::find(entries.begin(), entries.end(), pixels[p]);
        if (it == entries.end()) {
            throw IndexError("relabel_exact: pixel " + std::to_string(p) + " matches no colormap entry");
        }
        labels[p] = static_cast<Label>(it - entries.begin());
    }
    return IndexedImage(rendered.width(), rendered.height(), std::move(labels), map);
}

MemoryFootprint memory_footprint(std::uint64_t width, std::uint64_t height, std::uint64_t k,
                                 MaskingMethod method) {
    if (width == 0 || height == 0 || k == 0) {
        throw RangeError("memory_footprint: width, height and k must be at least 1");
    }
    const std::uint64_t area = checked_mul(width, height);
    const std::uint64_t one_map = checked_mul(k, 3);
    MemoryFootprint fp;
    switch (method) {
    case MaskingMethod::per_cluster_images:
        fp.index_elements = checked_mul(area, k);
        fp.colormap_elements = one_map;
        break;
    case MaskingMethod::per_cluster_maps:
        fp.index_elements = area;
        fp.colormap_elements = checked_mul(one_map, k);
        break;
    }
    fp.total = checked_add(fp.index_elements, fp.colormap_elements);
    return fp;
}

double footprint_ratio(std::uint64_t width, std::uint64_t height, std::uint64_t k) {
    const auto m1 = memory_footprint(width, height, k, MaskingMethod::per_cluster_images);
    const auto m2 = memory_footprint(width, height, k, MaskingMethod::per_cluster_maps);
    return static_cast<double>(m1.total) / static_cast<double>(m2.total);
}

} // namespace lulc
