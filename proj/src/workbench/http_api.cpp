#include "lulc/workbench/http_api.hpp"

#include <string>

#include "lulc/error.hpp"

namespace lulc::workbench {

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& doc) {
    res.status = status;
    res.set_content(doc.dump(2) + "\n", "application/json");
}

int status_for(const std::exception& e) {
    if (dynamic_cast<const NotFoundError*>(&e)) {
        return 404;
    }
    if (dynamic_cast<const ConflictError*>(&e)) {
        return 409;
    }
    if (dynamic_cast<const FormatError*>(&e) || dynamic_cast<const nlohmann::json::exception*>(&e)) {
        return 400;
    }
    if (dynamic_cast<const Error*>(&e)) {
        return 422;
    }
    return 500;
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
        try {
            handler(req, res);
        } catch (const std::exception& e) {
            send_json(res, status_for(e), {{"error", e.what()}});
        }
    };
}

nlohmann::json parse_body(const httplib::Request& req) {
    if (req.body.empty()) {
        return nlohmann::json::object();
    }
    try {
        return nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("request body: ") + e.what());
    }
}

template <class T>
std::optional<T> query_number(const httplib::Request& req, const char* name) {
    if (!req.has_param(name)) {
        return std::nullopt;
    }
    const auto text = req.get_param_value(name);
    try {
        std::size_t used = 0;
        T value{};
        if constexpr (std::is_floating_point_v<T>) {
            value = static_cast<T>(std::stod(text, &used));
        } else {
            value = static_cast<T>(std::stoull(text, &used));
        }
        if (used != text.size()) {
            throw FormatError("");
        }
        return value;
    } catch (const std::exception&) {
        throw FormatError(std::string("query parameter ") + name + " is not a number");
    }
}

bool wants_obj(const httplib::Request& req) {
    if (req.has_param("format")) {
        const auto f = req.get_param_value("format");
        if (f == "obj") {
            return true;
        }
        if (f != "json") {
            throw FormatError("format must be json or obj");
        }
        return false;
    }
    const auto accept = req.get_header_value("Accept");
    return accept.find("model/obj") != std::string::npos;
}

} // namespace

void register_routes(httplib::Server& server, SessionStore& store, const std::optional<std::filesystem::path>& ui_dir) {
    server.Get("/healthz", guarded([](const httplib::Request&, httplib::Response& res) {
                   send_json(res, 200, {{"status", "ok"}});
               }));

    server.Post("/sessions", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    std::string body = req.body;
                    if (req.is_multipart_form_data()) {
                        if (!req.has_file("image")) {
                            throw FormatError("multipart upload needs an \"image\" field");
                        }
                        body = req.get_file_value("image").content;
                    }
                    const auto* bytes = reinterpret_cast<const std::uint8_t*>(body.data());
                    const auto id = store.create(std::span(bytes, body.size()));
                    send_json(res, 201, store.describe(id));
                }));

    server.Get(R"(/sessions/([0-9a-zA-Z]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, 200, store.describe(req.matches[1]));
               }));

    server.Post(R"(/sessions/([0-9a-zA-Z]+)/seeds)",
                guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    const auto body = parse_body(req);
                    const auto x = body.at("x").get<std::int64_t>();
                    const auto y = body.at("y").get<std::int64_t>();
                    if (x < 0 || y < 0) {
                        throw BoundsError("seed coordinates must be non-negative");
                    }
                    std::optional<std::string> label;
                    if (body.contains("label")) {
                        label = body.at("label").get<std::string>();
                    }
                    const auto mode = body.value("neighborhood", false) ? PickMode::neighborhood_mean
                                                                        : PickMode::single_pixel;
                    send_json(res, 201,
                              store.add_seed(req.matches[1], static_cast<std::size_t>(x), static_cast<std::size_t>(y),
                                             label, mode));
                }));

    server.Delete(R"(/sessions/([0-9a-zA-Z]+)/seeds)",
                  guarded([&store](const httplib::Request& req, httplib::Response& res) {
                      send_json(res, 200, {{"palette_draft", store.clear_seeds(req.matches[1])}});
                  }));

    server.Post(R"(/sessions/([0-9a-zA-Z]+)/pipeline)",
                guarded([&store](const httplib::Request& req, httplib::Response& res) {
                    const auto body = parse_body(req);
                    std::optional<SeedPalette> palette;
                    if (body.contains("palette")) {
                        palette = palette_from_json(body.at("palette"));
                    }
                    const auto options = options_from_json(body.value("options", nlohmann::json()));
                    send_json(res, 200, store.run(req.matches[1], palette, options));
                }));

    server.Get(R"(/sessions/([0-9a-zA-Z]+)/artifacts/([a-z_]+)(?:/([0-9]+))?)",
               guarded([&store](const httplib::Request& req, httplib::Response& res) {
                   std::optional<std::size_t> k;
                   if (req.matches.size() > 3 && req.matches[3].matched) {
                       k = std::stoull(req.matches[3].str());
                   }
                   ArtifactQuery query;
                   query.iso_fraction = query_number<double>(req, "iso_frac");
                   query.with = query_number<std::size_t>(req, "with");
                   query.scale = query_number<double>(req, "scale");
                   query.subdivisions = query_number<std::size_t>(req, "subdivisions");
                   query.obj = wants_obj(req);
                   const auto artifact = store.artifact(req.matches[1], req.matches[2], k, query);
                   res.status = 200;
                   res.set_content(artifact.body, artifact.content_type);
               }));

    if (ui_dir) {
        server.set_mount_point("/", ui_dir->string());
    }
}

} // namespace lulc::workbench
