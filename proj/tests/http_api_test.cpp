#include <gtest/gtest.h>

#include <thread>

#include "lulc/image_io.hpp"
#include "lulc/workbench/http_api.hpp"
#include "support.hpp"

using namespace lulc;
using namespace lulc::workbench;

namespace {

class Api : public ::testing::Test {
protected:
    void SetUp() override {
        register_routes(server_, store_);
        port_ = server_.bind_to_any_port("127.0.0.1");
        ASSERT_GT(port_, 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
        client_->set_read_timeout(60, 0);
    }
    void TearDown() override {
        server_.stop();
        thread_.join();
    }

    std::string upload() {
        const auto png = encode_png_rgb(painted_.image);
        auto res = client_->Post("/sessions", std::string(png.begin(), png.end()), "image/png");
        EXPECT_EQ(res->status, 201);
        return nlohmann::json::parse(res->body)["id"];
    }

    fixtures::TempDir dir_;
    SessionStore store_{dir_.path()};
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::unique_ptr<httplib::Client> client_;
    fixtures::PaintedImage painted_ = fixtures::paint(fixtures::seven_class_palette(), 24, 20, 0.05, 14, 6);
};

} // namespace

TEST_F(Api, Health) {
    auto res = client_->Get("/healthz");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(nlohmann::json::parse(res->body)["status"], "ok");
}

TEST_F(Api, UploadRawAndMultipart) {
    const auto id = upload();
    auto got = client_->Get("/sessions/" + id);
    EXPECT_EQ(got->status, 200);
    EXPECT_EQ(nlohmann::json::parse(got->body)["pixels"], 480);

    const auto png = encode_png_rgb(painted_.image);
    httplib::MultipartFormDataItems items{{"image", std::string(png.begin(), png.end()), "a.png", "image/png"}};
    auto multi = client_->Post("/sessions", items);
    EXPECT_EQ(multi->status, 201);
    EXPECT_NE(nlohmann::json::parse(multi->body)["id"], id);

    EXPECT_EQ(client_->Post("/sessions", "not an image", "image/png")->status, 400);
    EXPECT_EQ(client_->Get("/sessions/0123abcd")->status, 404);
}

TEST_F(Api, FullFlow) {
    const auto id = upload();
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/stats")->status, 409);

    auto seed = client_->Post("/sessions/" + id + "/seeds", R"({"x": 0, "y": 0})", "application/json");
    EXPECT_EQ(seed->status, 201);
    EXPECT_EQ(nlohmann::json::parse(seed->body)["background"], true);
    EXPECT_EQ(client_->Post("/sessions/" + id + "/seeds", R"({"x": 0, "y": 0})", "application/json")->status, 422);
    EXPECT_EQ(client_->Post("/sessions/" + id + "/seeds", R"({"x": 999, "y": 0})", "application/json")->status, 422);
    EXPECT_EQ(client_->Post("/sessions/" + id + "/seeds", R"({"x": )", "application/json")->status, 400);
    EXPECT_EQ(client_->Delete("/sessions/" + id + "/seeds")->status, 200);

    nlohmann::json body = {{"palette", palette_to_json(fixtures::seven_class_palette())},
                           {"options", {{"bins_per_axis", 10}, {"rng_seed", 5}}}};
    auto run = client_->Post("/sessions/" + id + "/pipeline", body.dump(), "application/json");
    ASSERT_EQ(run->status, 200) << run->body;
    EXPECT_EQ(nlohmann::json::parse(run->body)["stages"]["meshes"], true);

    auto stats = client_->Get("/sessions/" + id + "/artifacts/stats");
    EXPECT_EQ(stats->status, 200);
    EXPECT_EQ(stats->get_header_value("Content-Type"), "application/json");
    EXPECT_EQ(nlohmann::json::parse(stats->body)["image_area"], 480);

    auto mask = client_->Get("/sessions/" + id + "/artifacts/mask/2");
    EXPECT_EQ(mask->status, 200);
    EXPECT_EQ(mask->get_header_value("Content-Type"), "image/png");
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/mask/8")->status, 404);
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/mesh/1")->status, 422);
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/mesh/2")->status, 200);

    auto obj = client_->Get("/sessions/" + id + "/artifacts/mesh/2?format=obj");
    EXPECT_EQ(obj->get_header_value("Content-Type"), "model/obj");
    httplib::Headers accept{{"Accept", "model/obj"}};
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/mesh/3", accept)->get_header_value("Content-Type"),
              "model/obj");
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/mesh/2?iso_frac=0.5")->status, 200);
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/mesh/2?iso_frac=2")->status, 422);
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/mesh/2?iso_frac=abc")->status, 400);
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/overlap/2?with=3")->status, 200);
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/ellipsoid/2?scale=1&subdivisions=2")->status, 200);
    EXPECT_EQ(client_->Get("/sessions/" + id + "/artifacts/report")->status, 200);

    nlohmann::json bad = {{"options", {{"unknown_key", 1}}}};
    EXPECT_EQ(client_->Post("/sessions/" + id + "/pipeline", bad.dump(), "application/json")->status, 400);
}
