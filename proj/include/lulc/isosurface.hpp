#pragma once

#include <cstddef>
#include <vector>

#include "lulc/execution.hpp"
#include "lulc/featurespace.hpp"
#include "lulc/mesh.hpp"

namespace lulc {

// Samples on a regular lattice: value(i,j,k) sits at origin + spacing*(i,j,k).
struct ScalarField {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t nz = 0;
    Vec3 origin{0.0, 0.0, 0.0};
    double spacing = 1.0;
    std::vector<double> values;  // x fastest

    double at(std::size_t i, std::size_t j, std::size_t k) const { return values[(k * ny + j) * nx + i]; }
};

// Marching cubes over every lattice cell. Samples above `level` are inside;
// triangles face outward (towards lower values). Vertices on shared lattice
// edges are welded, so a level set that stays clear of the lattice boundary
// yields a closed mesh.
IsoMesh marching_cubes(const ScalarField& field, double level);

struct IsoOptions {
    bool smooth = true;  // one 3x3x3 box pass before meshing
    Execution exec = Execution::parallel;
};

inline constexpr double kDefaultIsoFraction = 0.1;
inline constexpr std::size_t kDefaultBins = 32;

// Density sampled at cell centers and padded with one ring of zeros, so the
// lattice spans [-w/2, 1 + w/2] per axis for cell width w.
ScalarField density_field(const DensityGrid& grid, const IsoOptions& options = {});

// Largest value of the (optionally smoothed) density.
double field_max(const DensityGrid& grid, const IsoOptions& options = {});

// Number of cells whose (optionally smoothed) density is >= level.
std::size_t occupied_cells(const DensityGrid& grid, double level, const IsoOptions& options = {});

// Level set of the density at `level`. Throws RangeError unless level is a
// positive finite number; a level at or above the field maximum gives an
// empty mesh.
IsoMesh isosurface(const DensityGrid& grid, double level, const IsoOptions& options = {});

// Isosurface of cellwise min(a, b): where both clusters reach `level`.
IsoMesh overlap_mesh(const DensityGrid& a, const DensityGrid& b, double level, const IsoOptions& options = {});

} // namespace lulc
