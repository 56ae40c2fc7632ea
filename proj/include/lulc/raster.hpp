#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lulc {

// Normalized RGB triple; each channel lies in [0,1].
struct RgbColor {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    static constexpr RgbColor from_bytes(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
        return {r8 / 255.0, g8 / 255.0, b8 / 255.0};
    }

    bool in_unit_cube() const;

    friend bool operator==(const RgbColor&, const RgbColor&) = default;
};

inline constexpr RgbColor kWhite{1.0, 1.0, 1.0};

inline double squared_distance(const RgbColor& a, const RgbColor& b) {
    const double dr = a.r - b.r;
    const double dg = a.g - b.g;
    const double db = a.b - b.b;
    return dr * dr + dg * dg + db * db;
}

// Quantize a normalized channel back to 8 bits (round to nearest).
std::uint8_t to_byte(double channel);

using Label = std::uint8_t;
inline constexpr std::size_t kMaxClusters = 256;

class RgbImage {
public:
    RgbImage(std::size_t width, std::size_t height, std::vector<RgbColor> pixels);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    std::span<const RgbColor> pixels() const { return pixels_; }
    const RgbColor& at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<RgbColor> pixels_;
};

class ColorMap {
public:
    ColorMap() = default;
    explicit ColorMap(std::vector<RgbColor> entries);

    std::size_t size() const { return entries_.size(); }
    std::span<const RgbColor> entries() const { return entries_; }
    const RgbColor& operator[](std::size_t i) const { return entries_[i]; }

    friend bool operator==(const ColorMap&, const ColorMap&) = default;

private:
    std::vector<RgbColor> entries_;
};

// One shared label matrix plus its k-entry colormap. Individual cluster views
// are produced by swapping the colormap, never by copying the labels.
class IndexedImage {
public:
    IndexedImage(std::size_t width, std::size_t height, std::vector<Label> labels, ColorMap colormap);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return labels_.size(); }
    std::size_t cluster_count() const { return colormap_.size(); }
    std::span<const Label> labels() const { return labels_; }
    const ColorMap& colormap() const { return colormap_; }

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<Label> labels_;
    ColorMap colormap_;
};

class BitMask {
public:
    BitMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> bits);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    std::span<const std::uint8_t> bits() const { return bits_; }
    std::size_t popcount() const;

private:
    std::size_t width_;
    std::size_t height_;
    std::vector<std::uint8_t> bits_;  // 0 or 1
};

// Paints every pixel with map[label]. Throws IndexError when the map does not
// cover the label range present in the image.
RgbImage render_indexed(const IndexedImage& image, const ColorMap& map);

// Copy of `shared` where every entry except `k` is replaced by `mute`.
ColorMap individual_colormap(const ColorMap& shared, std::size_t k, const RgbColor& mute = kWhite);

BitMask logical_mask(const IndexedImage& image, std::size_t k);

// Recovers labels from a rendering by exact color lookup in `map`. Pixels that
// match no entry raise IndexError.
IndexedImage relabel_exact(const RgbImage& rendered, const ColorMap& map);

enum class MaskingMethod {
    per_cluster_images = 1,  // k label matrices sharing one colormap
    per_cluster_maps = 2,    // one label matrix, k individual colormaps
};

struct MemoryFootprint {
    std::uint64_t index_elements = 0;
    std::uint64_t colormap_elements = 0;
    std::uint64_t total = 0;

    friend bool operator==(const MemoryFootprint&, const MemoryFootprint&) = default;
};

// Element counts needed to hold k single-cluster views of a w x h indexed
// image. Throws RangeError on zero arguments or 64-bit overflow.
MemoryFootprint memory_footprint(std::uint64_t width, std::uint64_t height, std::uint64_t k,
                                 MaskingMethod method);

// total(method 1) / total(method 2).
double footprint_ratio(std::uint64_t width, std::uint64_t height, std::uint64_t k);

} // namespace lulc
