#include "lulc/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "lulc/color_json.hpp"
#include "lulc/error.hpp"

namespace lulc {

bool well_formed(const IsoMesh& mesh) {
    for (const auto& v : mesh.vertices) {
        if (!std::isfinite(v[0]) || !std::isfinite(v[1]) || !std::isfinite(v[2])) {
            return false;
        }
    }
    for (const auto& t : mesh.triangles) {
        for (auto i : t) {
            if (i >= mesh.vertices.size()) {
                return false;
            }
        }
    }
    return true;
}

nlohmann::json mesh_to_json(const IsoMesh& mesh) {
    nlohmann::json vertices = nlohmann::json::array();
    for (const auto& v : mesh.vertices) {
        vertices.push_back({v[0], v[1], v[2]});
    }
    nlohmann::json triangles = nlohmann::json::array();
    for (const auto& t : mesh.triangles) {
        triangles.push_back({t[0], t[1], t[2]});
    }
    return {
        {"vertices", std::move(vertices)},
        {"triangles", std::move(triangles)},
        {"color", color_to_json(mesh.color)},
        {"cluster", mesh.cluster + 1},
    };
}

IsoMesh mesh_from_json(const nlohmann::json& doc) {
    IsoMesh mesh;
    try {
        for (const auto& v : doc.at("vertices")) {
            mesh.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()});
        }
        for (const auto& t : doc.at("triangles")) {
            mesh.triangles.push_back(
                {t.at(0).get<std::uint32_t>(), t.at(1).get<std::uint32_t>(), t.at(2).get<std::uint32_t>()});
        }
        mesh.color = color_from_json(doc.at("color"));
        const auto cluster = doc.at("cluster").get<std::size_t>();
        if (cluster == 0) {
            throw FormatError("mesh cluster numbers start at 1");
        }
        mesh.cluster = cluster - 1;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("mesh JSON: ") + e.what());
    }
    if (!well_formed(mesh)) {
        throw FormatError("mesh JSON: triangle index out of range or non-finite vertex");
    }
    return mesh;
}

std::string mesh_to_obj(const IsoMesh& mesh) {
    std::string out;
    out += "# cluster " + std::to_string(mesh.cluster + 1) + "\n";
    char line[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(line, sizeof line, "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
        out += line;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(line, sizeof line, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out += line;
    }
    return out;
}

MeshTopology analyze_topology(const IsoMesh& mesh) {
    // undirected edge -> (uses, net direction)
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::pair<int, int>> edges;
    for (const auto& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const auto a = t[e];
            const auto b = t[(e + 1) % 3];
            auto& slot = edges[{std::min(a, b), std::max(a, b)}];
            ++slot.first;
            slot.second += a < b ? 1 : -1;
        }
    }
    MeshTopology topo;
    for (const auto& [edge, use] : edges) {
        if (use.first == 1) {
            ++topo.boundary_edges;
        } else if (use.first > 2) {
            ++topo.nonmanifold_edges;
        } else if (use.second != 0) {
            ++topo.misoriented_edges;
        }
    }
    return topo;
}

double signed_volume(const IsoMesh& mesh) {
    double six_v = 0.0;
    for (const auto& t : mesh.triangles) {
        const auto& a = mesh.vertices[t[0]];
        const auto& b = mesh.vertices[t[1]];
        const auto& c = mesh.vertices[t[2]];
        six_v += a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                 a[2] * (b[0] * c[1] - b[1] * c[0]);
    }
    return six_v / 6.0;
}

} // namespace lulc
