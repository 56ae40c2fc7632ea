#pragma once

#include "json.hpp"
#include "lulc/raster.hpp"

namespace lulc {

// [r, g, b] with normalized channels.
nlohmann::json color_to_json(const RgbColor& color);
RgbColor color_from_json(const nlohmann::json& value);

// Array of k [r, g, b] triples.
nlohmann::json colormap_to_json(const ColorMap& map);
ColorMap colormap_from_json(const nlohmann::json& value);

} // namespace lulc
