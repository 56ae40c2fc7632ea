#include "lulc/isosurface.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "lulc/error.hpp"
#include "lulc/kernels.hpp"

namespace lulc {

namespace {

#include "marching_cubes_table.inc"

// Corner offsets and edge endpoints matching kTriangleTable.
constexpr std::array<std::array<int, 3>, 8> kCorner = {{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
}};

constexpr std::array<std::array<int, 2>, 12> kEdge = {{
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {6, 5}, {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
}};

std::vector<double> field_values(const DensityGrid& grid, const IsoOptions& options) {
    if (options.smooth) {
        return kernels::box_smooth(options.exec, grid.counts(), grid.bins());
    }
    return std::vector<double>(grid.counts().begin(), grid.counts().end());
}

} // namespace

IsoMesh marching_cubes(const ScalarField& field, double level) {
    IsoMesh mesh;
    if (field.nx < 2 || field.ny < 2 || field.nz < 2) {
        return mesh;
    }
    if (field.values.size() != field.nx * field.ny * field.nz) {
        throw ShapeError("marching_cubes: value count does not match lattice size");
    }
    const auto point_id = [&](std::size_t i, std::size_t j, std::size_t k) {
        return (static_cast<std::uint64_t>(k) * field.ny + j) * field.nx + i;
    };
    std::unordered_map<std::uint64_t, std::uint32_t> welded;

    for (std::size_t k = 0; k + 1 < field.nz; ++k) {
        for (std::size_t j = 0; j + 1 < field.ny; ++j) {
            for (std::size_t i = 0; i + 1 < field.nx; ++i) {
                std::array<double, 8> v{};
                unsigned config = 0;
                for (int c = 0; c < 8; ++c) {
                    v[c] = field.at(i + kCorner[c][0], j + kCorner[c][1], k + kCorner[c][2]);
                    if (v[c] <= level) {
                        config |= 1u << c;
                    }
                }
                if (config == 0 || config == 255) {
                    continue;
                }
                std::array<std::uint32_t, 12> edge_vertex{};
                const auto vertex_on = [&](int e) {
                    // Orient every edge from its lower lattice point so both
                    // neighbouring cells compute an identical position.
                    int a = kEdge[e][0];
                    int b = kEdge[e][1];
                    if (kCorner[a][0] + kCorner[a][1] + kCorner[a][2] > kCorner[b][0] + kCorner[b][1] + kCorner[b][2]) {
                        std::swap(a, b);
                    }
                    const std::size_t ai = i + kCorner[a][0];
                    const std::size_t aj = j + kCorner[a][1];
                    const std::size_t ak = k + kCorner[a][2];
                    const int axis = kCorner[b][0] != kCorner[a][0] ? 0 : (kCorner[b][1] != kCorner[a][1] ? 1 : 2);
                    const std::uint64_t key = point_id(ai, aj, ak) * 3 + static_cast<std::uint64_t>(axis);
                    if (auto it = welded.find(key); it != welded.end()) {
                        return it->second;
                    }
                    const double t = (level - v[a]) / (v[b] - v[a]);
                    Vec3 p{static_cast<double>(ai), static_cast<double>(aj), static_cast<double>(ak)};
                    p[axis] += t;
                    for (int d = 0; d < 3; ++d) {
                        p[d] = field.origin[d] + field.spacing * p[d];
                    }
                    mesh.vertices.push_back(p);
                    const auto idx = static_cast<std::uint32_t>(mesh.vertices.size() - 1);
                    welded.emplace(key, idx);
                    return idx;
                };
                const auto& row = kTriangleTable[config];
                for (int t = 0; row[t] != -1; t += 3) {
                    for (int c = 0; c < 3; ++c) {
                        edge_vertex[row[t + c]] = vertex_on(row[t + c]);
                    }
                    mesh.triangles.push_back({edge_vertex[row[t]], edge_vertex[row[t + 1]], edge_vertex[row[t + 2]]});
                }
            }
        }
    }
    return mesh;
}

ScalarField density_field(const DensityGrid& grid, const IsoOptions& options) {
    const std::size_t bins = grid.bins();
    const auto values = field_values(grid, options);
    ScalarField field;
    field.nx = field.ny = field.nz = bins + 2;
    field.spacing = grid.cell_width();
    const double start = -0.5 * field.spacing;
    field.origin = {start, start, start};
    field.values.assign(field.nx * field.ny * field.nz, 0.0);
    for (std::size_t z = 0; z < bins; ++z) {
        for (std::size_t y = 0; y < bins; ++y) {
            for (std::size_t x = 0; x < bins; ++x) {
                field.values[((z + 1) * field.ny + (y + 1)) * field.nx + (x + 1)] = values[(z * bins + y) * bins + x];
            }
        }
    }
    return field;
}

double field_max(const DensityGrid& grid, const IsoOptions& options) {
    const auto values = field_values(grid, options);
    return *std::max_element(values.begin(), values.end());
}

std::size_t occupied_cells(const DensityGrid& grid, double level, const IsoOptions& options) {
    const auto values = field_values(grid, options);
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [level](double v) { return v >= level; }));
}

IsoMesh isosurface(const DensityGrid& grid, double level, const IsoOptions& options) {
    if (!std::isfinite(level) || level <= 0.0) {
        throw RangeError("isosurface: level must be a positive finite number");
    }
    return marching_cubes(density_field(grid, options), level);
}

IsoMesh overlap_mesh(const DensityGrid& a, const DensityGrid& b, double level, const IsoOptions& options) {
    return isosurface(cellwise_min(a, b), level, options);
}

} // namespace lulc
