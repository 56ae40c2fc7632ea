#include "lulc/color_json.hpp"

#include <vector>

#include "lulc/error.hpp"

namespace lulc {

nlohmann::json color_to_json(const RgbColor& color) {
    return nlohmann::json::array({color.r, color.g, color.b});
}

RgbColor color_from_json(const nlohmann::json& value) {
    if (!value.is_array() || value.size() != 3) {
        throw FormatError("color must be an [r, g, b] array");
    }
    for (const auto& c : value) {
        if (!c.is_number()) {
            throw FormatError("color channels must be numbers");
        }
    }
    RgbColor color{value[0].get<double>(), value[1].get<double>(), value[2].get<double>()};
    if (!color.in_unit_cube()) {
        throw DomainError("color channels must lie in [0,1]");
    }
    return color;
}

nlohmann::json colormap_to_json(const ColorMap& map) {
    auto out = nlohmann::json::array();
    for (const auto& c : map.entries()) {
        out.push_back(color_to_json(c));
    }
    return out;
}

ColorMap colormap_from_json(const nlohmann::json& value) {
    if (!value.is_array()) {
        throw FormatError("colormap must be an array of [r, g, b] triples");
    }
    std::vector<RgbColor> entries;
    entries.reserve(value.size());
    for (const auto& v : value) {
        entries.push_back(color_from_json(v));
    }
    return ColorMap(std::move(entries));
}

} // namespace lulc
