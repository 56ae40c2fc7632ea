#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "lulc/error.hpp"
#include "lulc/stats.hpp"
#include "support.hpp"

using namespace lulc;
using lulc::fixtures::kReferenceCounts;

TEST(ClusterAreas, SmallCases) {
    const IndexedImage img(2, 2, {0, 0, 1, 1}, ColorMap({{0, 0, 0}, {1, 1, 1}}));
    EXPECT_EQ(cluster_areas(img), (std::vector<std::size_t>{2, 2}));
}

TEST(ClusterAreas, MatchesSecondPassAndMasks) {
    std::mt19937_64 rng(1);
    std::vector<Label> labels(97 * 31);
    for (auto& l : labels) {
        l = static_cast<Label>(rng() % 5);
    }
    const IndexedImage img(97, 31, labels, ColorMap(std::vector<RgbColor>(5)));
    const auto counts = cluster_areas(img);
    EXPECT_EQ(counts, cluster_areas(img, Execution::serial));
    for (std::size_t k = 0; k < 5; ++k) {
        EXPECT_EQ(counts[k], static_cast<std::size_t>(std::count(labels.begin(), labels.end(), k)));
        EXPECT_EQ(counts[k], logical_mask(img, k).popcount());
    }
}

TEST(AreaReport, ReferenceCounts) {
    const auto s = area_report(kReferenceCounts);
    EXPECT_EQ(s.image_area, 345119u);
    EXPECT_EQ(s.image_area, 563u * 613u);
    EXPECT_EQ(s.background_area, 156877u);
    EXPECT_EQ(s.foreground_area, 188242u);
    EXPECT_NEAR(s.background_pct, 45.46, 0.005);
    EXPECT_NEAR(s.foreground_pct, 54.54, 0.005);
    const double table[] = {0.33, 17.45, 1.13, 47.14, 21.23, 12.72};
    double sum = 0.0;
    for (std::size_t k = 1; k < 7; ++k) {
        EXPECT_NEAR(*s.clusters[k].pct_of_foreground, table[k - 1], 0.01) << "cluster " << k + 1;
        sum += *s.clusters[k].pct_of_foreground;
    }
    EXPECT_NEAR(sum, 100.0, 0.05);
    EXPECT_FALSE(s.clusters[0].pct_of_foreground.has_value());
    EXPECT_NEAR(s.clusters[1].pct_of_image, 100.0 * 616 / 345119, 1e-12);
}

TEST(AreaReport, Reconciliation) {
    std::size_t fg = 0;
    for (std::size_t k = 1; k < kReferenceCounts.size(); ++k) {
        fg += kReferenceCounts[k];
    }
    EXPECT_EQ(fg, 188242u);
    EXPECT_EQ(fg, std::accumulate(kReferenceCounts.begin(), kReferenceCounts.end(), std::size_t{0}) - kReferenceCounts[0]);
}

TEST(AreaReport, EdgeCases) {
    const std::vector<std::size_t> single{5, 20};
    EXPECT_EQ(*area_report(single).clusters[1].pct_of_foreground, 100.0);
    EXPECT_THROW(area_report(std::vector<std::size_t>{7, 0, 0}), DegenerateError);
    EXPECT_THROW(area_report(std::vector<std::size_t>{}), ShapeError);
    EXPECT_THROW(area_report(std::vector<std::size_t>{1, 2}, 2), IndexError);
}

TEST(BarChart, ReferenceSeries) {
    const auto bars = bar_chart_series(area_report(kReferenceCounts));
    const double expect[] = {45.46, 0.33, 17.45, 1.13, 47.14, 21.23, 12.72};
    ASSERT_EQ(bars.size(), 7u);
    for (std::size_t i = 0; i < 7; ++i) {
        EXPECT_NEAR(bars[i].percent, expect[i], 0.01);
    }
    EXPECT_EQ(bars[0].label, "Cluster1");
}

TEST(BarChart, EqualClusters) {
    const auto bars = bar_chart_series(area_report(std::vector<std::size_t>{10, 5, 5}));
    EXPECT_NEAR(bars[0].percent, 50.0, 1e-12);
    EXPECT_EQ(bars[1].percent, 50.0);
    EXPECT_EQ(bars[2].percent, 50.0);
}

TEST(BarChart, RecomputedFromCounts) {
    const std::vector<std::size_t> counts{13, 7, 11, 29};
    const auto bars = bar_chart_series(area_report(counts));
    EXPECT_DOUBLE_EQ(bars[0].percent, 100.0 * 13 / 60);
    double fg = 0.0;
    for (std::size_t i = 1; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(bars[i].percent, 100.0 * double(counts[i]) / 47.0);
        fg += bars[i].percent;
    }
    EXPECT_NEAR(fg, 100.0, 1e-9);
}

TEST(FormatPercent, HalfAwayFromZero) {
    EXPECT_EQ(format_percent(45.455939), "45.46");
    EXPECT_EQ(format_percent(0.125), "0.13");
    EXPECT_EQ(format_percent(0.375), "0.38");
    EXPECT_EQ(format_percent(2.675), "2.68");
    EXPECT_EQ(format_percent(100.0), "100.00");
    EXPECT_EQ(format_percent(0.0), "0.00");
}

TEST(FormatReport, ReferenceListing) {
    const auto text = format_report(area_report(kReferenceCounts));
    EXPECT_NE(text.find("Total image area= 345119 pixels"), std::string::npos) << text;
    EXPECT_NE(text.find("Background area= 156877 pixels or 45.46% image area"), std::string::npos) << text;
    EXPECT_NE(text.find("Total LULC area= 188242 pixels or 54.54% image area."), std::string::npos) << text;
    EXPECT_NE(text.find("Cluster2 area= 616 pixels or 0.33%"), std::string::npos) << text;
    EXPECT_NE(text.find("Cluster7 area= 23951 pixels or 12.72%"), std::string::npos) << text;
}

TEST(Summarize, MeanColorsAndLabels) {
    const SeedPalette p({{"null", {0, 0, 0}}, {"red", {1, 0, 0}}, {"blue", {0, 0, 1}}});
    const RgbImage img(4, 1, {{0, 0, 0}, {0.9, 0, 0}, {0.7, 0.2, 0}, {0, 0.1, 0.8}});
    const auto indexed = classify_nearest(img, p);
    const auto s = summarize(img, indexed, p);
    EXPECT_EQ(s.clusters[1].label, "red");
    EXPECT_EQ(s.clusters[1].count, 2u);
    EXPECT_NEAR(s.clusters[1].mean_color.r, 0.8, 1e-12);
    EXPECT_NEAR(s.clusters[1].mean_color.g, 0.1, 1e-12);
    EXPECT_EQ(s.clusters[2].display_color, (RgbColor{0, 0, 1}));

    const auto j = stats_to_json(s);
    EXPECT_EQ(j["image_area"], 4);
    EXPECT_EQ(j["clusters"][0]["cluster"], 1);
    EXPECT_TRUE(j["clusters"][0]["pct_of_foreground"].is_null());
    EXPECT_EQ(j["clusters"][1]["pct_of_foreground"], 200.0 / 3.0);
    EXPECT_EQ(j["bars"].size(), 3u);
}
