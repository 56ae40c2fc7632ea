#pragma once

#include <filesystem>
#include <optional>

#include "httplib.h"
#include "lulc/workbench/session_store.hpp"

namespace lulc::workbench {

// Session-scoped JSON-over-HTTP routes:
//
//   GET    /healthz
//   POST   /sessions                                 body: PNG/JPEG bytes
//   GET    /sessions/{id}
//   POST   /sessions/{id}/seeds                      {"x", "y", "label"?, "neighborhood"?}
//   DELETE /sessions/{id}/seeds
//   POST   /sessions/{id}/pipeline                   {"palette"?, "options"?}
//   GET    /sessions/{id}/artifacts/{kind}[/{k}]
//
// Errors are JSON {"error": message} with 400 (malformed), 404, 409 (stage
// not run yet) or 422 (well-formed but rejected).
void register_routes(httplib::Server& server, SessionStore& store,
                     const std::optional<std::filesystem::path>& ui_dir = std::nullopt);

} // namespace lulc::workbench
