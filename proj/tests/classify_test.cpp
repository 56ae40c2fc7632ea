#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "lulc/classify.hpp"
#include "lulc/error.hpp"
#include "support.hpp"

using namespace lulc;

TEST(SeedPalette, Invariants) {
    EXPECT_THROW(SeedPalette({{"bg", {0, 0, 0}}}), PaletteError);
    EXPECT_THROW(SeedPalette({{"bg", {0, 0, 0}}, {"a", {0, 0, 0}}}), PaletteError);
    EXPECT_THROW(SeedPalette({{"bg", {0, 0, 0}}, {"a", {2, 0, 0}}}), PaletteError);
    EXPECT_NO_THROW(SeedPalette({{"bg", {0, 0, 0}}, {"a", {1, 0, 0}}}));
}

TEST(SeedPalette, JsonRoundTrip) {
    const auto p = fixtures::seven_class_palette();
    const auto back = palette_from_json(palette_to_json(p));
    EXPECT_EQ(back.seeds(), p.seeds());

    const auto unnamed = palette_from_json(nlohmann::json::parse(R"([{"rgb":[0,0,0]},{"rgb":[1,1,1]}])"));
    EXPECT_EQ(unnamed[0].label, "background");
    EXPECT_EQ(unnamed[1].label, "Cluster2");

    EXPECT_THROW(palette_from_json(nlohmann::json::parse(R"({"rgb":[0,0,0]})")), FormatError);
    EXPECT_THROW(palette_from_json(nlohmann::json::parse(R"([{"label":"x"},{"rgb":[1,1,1]}])")), FormatError);
    EXPECT_THROW(palette_from_json(nlohmann::json::parse(R"([{"rgb":[0,0,0]},{"rgb":[0,0,0]}])")), PaletteError);
}

TEST(PickSeed, ReturnsExactPixel) {
    const RgbImage red(3, 2, std::vector<RgbColor>(6, RgbColor{1, 0, 0}));
    EXPECT_EQ(pick_seed(red, 2, 1), (RgbColor{1, 0, 0}));
    const RgbImage one(1, 1, {RgbColor::from_bytes(255, 63, 67)});
    EXPECT_EQ(pick_seed(one, 0, 0), RgbColor::from_bytes(255, 63, 67));
    EXPECT_THROW(pick_seed(one, 1, 0), BoundsError);
    EXPECT_THROW(pick_seed(one, 0, 1), BoundsError);
}

TEST(PickSeed, NeighborhoodMean) {
    std::vector<RgbColor> px(9, RgbColor{0, 0, 0});
    px[4] = {0.9, 0.9, 0.9};
    const RgbImage img(3, 3, px);
    EXPECT_NEAR(pick_seed(img, 1, 1, PickMode::neighborhood_mean).r, 0.1, 1e-12);
    // Corner averages only the in-bounds 2x2 block.
    EXPECT_NEAR(pick_seed(img, 0, 0, PickMode::neighborhood_mean).g, 0.225, 1e-12);
}

TEST(ClassifyNearest, SymmetricTieGoesLow) {
    const SeedPalette p({{"bg", {0, 0, 0}}, {"r", {1, 0, 0}}});
    const auto out = classify_nearest(RgbImage(1, 1, {{0.5, 0, 0}}), p);
    EXPECT_EQ(out.labels()[0], 0);
    EXPECT_EQ(out.colormap(), p.colors());
}

TEST(ClassifyNearest, ExactPaintingIsRecovered) {
    const auto p = fixtures::seven_class_palette();
    const auto painted = fixtures::paint(p, 50, 30, 0.0, 4, 5);
    const auto out = classify_nearest(painted.image, p);
    EXPECT_TRUE(std::equal(out.labels().begin(), out.labels().end(), painted.labels.begin()));
}

TEST(ClassifyNearest, MatchesExhaustiveScan) {
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RgbColor> px(64 * 64);
    for (auto& c : px) {
        c = {u(rng), u(rng), u(rng)};
    }
    const RgbImage img(64, 64, px);
    const SeedPalette p({{"a", {0.1, 0.1, 0.1}}, {"b", {0.9, 0.2, 0.3}}, {"c", {0.2, 0.8, 0.4}}, {"d", {0.5, 0.5, 0.9}}});
    for (auto exec : {Execution::serial, Execution::parallel}) {
        const auto out = classify_nearest(img, p, exec);
        for (std::size_t i = 0; i < px.size(); ++i) {
            double best = 1e9;
            std::size_t arg = 0;
            for (std::size_t s = 0; s < p.size(); ++s) {
                const double dr = px[i].r - p[s].color.r;
                const double dg = px[i].g - p[s].color.g;
                const double db = px[i].b - p[s].color.b;
                const double d = dr * dr + dg * dg + db * db;
                if (d < best) {
                    best = d;
                    arg = s;
                }
            }
            ASSERT_EQ(out.labels()[i], arg);
        }
    }
}

TEST(ClassifyNearest, IdempotentOnRendering) {
    const auto p = fixtures::seven_class_palette();
    const auto painted = fixtures::paint(p, 40, 40, 0.1, 9, 4);
    const auto first = classify_nearest(painted.image, p);
    const auto second = classify_nearest(render_indexed(first, p.colors()), p);
    EXPECT_TRUE(std::equal(first.labels().begin(), first.labels().end(), second.labels().begin()));
}

TEST(ClassifyNearest, PermutationEquivariant) {
    const auto p = fixtures::seven_class_palette();
    const auto painted = fixtures::paint(p, 40, 40, 0.1, 10, 4);
    std::vector<std::size_t> perm{0, 3, 1, 6, 2, 5, 4};
    std::vector<Seed> seeds;
    for (auto i : perm) {
        seeds.push_back(p[i]);
    }
    const auto a = classify_nearest(painted.image, p);
    const auto b = classify_nearest(painted.image, SeedPalette(seeds));
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(perm[b.labels()[i]], a.labels()[i]);
    }
}
