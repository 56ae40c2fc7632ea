#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lulc/error.hpp"
#include "lulc/isosurface.hpp"
#include "support.hpp"

using namespace lulc;

namespace {

DensityGrid cloud_grid(const FeaturePoint& mean, double sigma, std::size_t n, std::uint64_t seed,
                       std::size_t bins = 32) {
    return density_grid(fixtures::gaussian_cloud(mean, sigma, n, seed), bins);
}

Vec3 vertex_centroid(const IsoMesh& m) {
    Vec3 c{0, 0, 0};
    for (const auto& v : m.vertices) {
        for (int d = 0; d < 3; ++d) {
            c[d] += v[d] / static_cast<double>(m.vertices.size());
        }
    }
    return c;
}

} // namespace

TEST(MarchingCubes, SingleHotSampleIsClosedOctahedron) {
    ScalarField f{3, 3, 3, {0, 0, 0}, 1.0, std::vector<double>(27, 0.0)};
    f.values[13] = 1.0;
    const auto m = marching_cubes(f, 0.5);
    EXPECT_EQ(m.vertices.size(), 6u);
    EXPECT_EQ(m.triangles.size(), 8u);
    const auto t = analyze_topology(m);
    EXPECT_TRUE(t.watertight());
    EXPECT_TRUE(t.consistently_oriented());
    EXPECT_NEAR(signed_volume(m), 4.0 / 3.0 * 0.125, 1e-12);
}

TEST(MarchingCubes, RandomFieldsAreClosed) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 7;
        ScalarField f{n, n, n, {0, 0, 0}, 0.1, std::vector<double>(n * n * n, 0.0)};
        for (std::size_t k = 1; k + 1 < n; ++k) {
            for (std::size_t j = 1; j + 1 < n; ++j) {
                for (std::size_t i = 1; i + 1 < n; ++i) {
                    f.values[(k * n + j) * n + i] = u(rng);
                }
            }
        }
        const auto m = marching_cubes(f, 0.5);
        ASSERT_TRUE(well_formed(m));
        const auto t = analyze_topology(m);
        ASSERT_TRUE(t.watertight()) << "trial " << trial;
        ASSERT_TRUE(t.consistently_oriented()) << "trial " << trial;
        ASSERT_GT(signed_volume(m), 0.0);
    }
    EXPECT_THROW(marching_cubes(ScalarField{2, 2, 2, {0, 0, 0}, 1.0, {0.0}}, 0.5), ShapeError);
}

TEST(Isosurface, ZeroGridIsEmpty) {
    const DensityGrid g(4, std::vector<std::uint32_t>(64, 0));
    EXPECT_TRUE(isosurface(g, 0.5).empty());
    EXPECT_THROW(isosurface(g, 0.0), RangeError);
    EXPECT_THROW(isosurface(g, std::nan("")), RangeError);
}

TEST(Isosurface, SphericalCloud) {
    const FeaturePoint mean{0.5, 0.45, 0.55};
    const auto g = cloud_grid(mean, 0.08, 50000, 21);
    const double level = 0.5 * field_max(g);
    const auto m = isosurface(g, level);
    ASSERT_FALSE(m.empty());
    EXPECT_TRUE(well_formed(m));
    const auto t = analyze_topology(m);
    EXPECT_TRUE(t.watertight());
    EXPECT_TRUE(t.consistently_oriented());
    EXPECT_GT(signed_volume(m), 0.0);

    std::vector<double> radii;
    for (const auto& v : m.vertices) {
        radii.push_back(std::hypot(v[0] - mean[0], v[1] - mean[1], v[2] - mean[2]));
    }
    std::nth_element(radii.begin(), radii.begin() + radii.size() / 2, radii.end());
    const double median = radii[radii.size() / 2];
    for (double r : radii) {
        ASSERT_NEAR(r, median, 0.15 * median);
    }
    const double eps = g.cell_width();
    for (const auto& v : m.vertices) {
        for (double c : v) {
            EXPECT_GE(c, -eps);
            EXPECT_LE(c, 1.0 + eps);
        }
    }
}

TEST(Isosurface, MonotoneLevels) {
    const auto g = cloud_grid({0.3, 0.6, 0.4}, 0.1, 20000, 5);
    const double peak = field_max(g);
    std::size_t prev = occupied_cells(g, 0.01 * peak);
    double prev_volume = signed_volume(isosurface(g, 0.01 * peak));
    for (double f : {0.05, 0.1, 0.3, 0.5, 0.8, 0.99}) {
        const std::size_t cur = occupied_cells(g, f * peak);
        EXPECT_LE(cur, prev);
        const double volume = signed_volume(isosurface(g, f * peak));
        EXPECT_LE(volume, prev_volume + 1e-12);
        prev = cur;
        prev_volume = volume;
    }
    EXPECT_TRUE(isosurface(g, peak).empty());
    EXPECT_TRUE(isosurface(g, 2 * peak).empty());
}

TEST(Overlap, IdenticalGridsMatchOwnSurface) {
    const auto g = cloud_grid({0.4, 0.4, 0.4}, 0.07, 10000, 8);
    const double level = 0.25 * field_max(g);
    const auto a = overlap_mesh(g, g, level);
    const auto b = isosurface(g, level);
    EXPECT_EQ(a.vertices, b.vertices);
    EXPECT_EQ(a.triangles, b.triangles);
}

TEST(Overlap, DisjointSupportsAreEmpty) {
    const auto a = cloud_grid({0.15, 0.15, 0.15}, 0.02, 5000, 1);
    const auto b = cloud_grid({0.85, 0.85, 0.85}, 0.02, 5000, 2);
    EXPECT_TRUE(overlap_mesh(a, b, 1.0).empty());
}

TEST(Overlap, SitsBetweenTheMeans) {
    const double sigma = 0.08;
    const FeaturePoint ma{0.46, 0.5, 0.5};
    const auto a = cloud_grid(ma, sigma, 40000, 31);
    const auto b = cloud_grid({ma[0] + sigma, 0.5, 0.5}, sigma, 40000, 32);
    const auto m = overlap_mesh(a, b, 0.2 * field_max(a));
    ASSERT_FALSE(m.empty());
    const auto c = vertex_centroid(m);
    EXPECT_GT(c[0], ma[0]);
    EXPECT_LT(c[0], ma[0] + sigma);
    EXPECT_THROW(overlap_mesh(a, density_grid(std::vector<FeaturePoint>{{0, 0, 0}}, 8), 1.0), ShapeError);
}

TEST(Mesh, JsonAndObj) {
    ScalarField f{3, 3, 3, {0, 0, 0}, 1.0, std::vector<double>(27, 0.0)};
    f.values[13] = 1.0;
    auto m = marching_cubes(f, 0.5);
    m.cluster = 2;
    m.color = {0.5, 0.25, 1.0};
    const auto j = mesh_to_json(m);
    EXPECT_EQ(j["cluster"], 3);
    EXPECT_EQ(j["triangles"].size(), 8u);
    const auto back = mesh_from_json(j);
    EXPECT_EQ(back.vertices, m.vertices);
    EXPECT_EQ(back.triangles, m.triangles);
    EXPECT_EQ(back.cluster, 2u);
    EXPECT_EQ(back.color, m.color);

    const auto obj = mesh_to_obj(m);
    std::istringstream lines(obj);
    std::size_t vs = 0, fs = 0;
    for (std::string line; std::getline(lines, line);) {
        vs += line.rfind("v ", 0) == 0;
        fs += line.rfind("f ", 0) == 0;
    }
    EXPECT_EQ(vs, 6u);
    EXPECT_EQ(fs, 8u);

    auto bad = j;
    bad["triangles"][0][0] = 99;
    EXPECT_THROW(mesh_from_json(bad), FormatError);
}

TEST(Mesh, TopologyDetectsDefects) {
    IsoMesh open;
    open.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    open.triangles = {{0, 1, 2}};
    EXPECT_EQ(analyze_topology(open).boundary_edges, 3u);
    open.triangles.push_back({0, 1, 2});
    EXPECT_EQ(analyze_topology(open).misoriented_edges, 3u);
    open.triangles.push_back({0, 2, 1});
    EXPECT_EQ(analyze_topology(open).nonmanifold_edges, 3u);
    open.triangles = {{0, 1, 5}};
    EXPECT_FALSE(well_formed(open));
}
