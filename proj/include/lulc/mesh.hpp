#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "lulc/raster.hpp"

namespace lulc {

using Vec3 = std::array<double, 3>;
using Triangle = std::array<std::uint32_t, 3>;

// Triangle mesh in RGB feature space for one cluster (0-based index).
struct IsoMesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    RgbColor color;
    std::size_t cluster = 0;

    bool empty() const { return triangles.empty(); }
};

// Every index in range and every coordinate finite.
bool well_formed(const IsoMesh& mesh);

// {vertices, triangles, color, cluster}; `cluster` is written 1-based.
nlohmann::json mesh_to_json(const IsoMesh& mesh);
IsoMesh mesh_from_json(const nlohmann::json& doc);

// Wavefront OBJ with positions and faces only.
std::string mesh_to_obj(const IsoMesh& mesh);

struct MeshTopology {
    std::size_t boundary_edges = 0;      // undirected edges used by one triangle
    std::size_t nonmanifold_edges = 0;   // used by three or more
    std::size_t misoriented_edges = 0;   // two uses with the same direction
    bool watertight() const { return boundary_edges == 0 && nonmanifold_edges == 0; }
    bool consistently_oriented() const { return misoriented_edges == 0; }
};

MeshTopology analyze_topology(const IsoMesh& mesh);

// Signed enclosed volume (divergence theorem); positive for outward-facing
// triangles of a closed mesh.
double signed_volume(const IsoMesh& mesh);

} // namespace lulc
