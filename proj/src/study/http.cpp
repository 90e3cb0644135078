// Copyright 2026 The ferx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ferx/study/http.hpp"

#include <fstream>
#include <sstream>

#include "httplib.h"

namespace ferx::study {

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, StudyErrc code, const std::string& message) {
  send_json(res, http_status(code), Json{{"error", errc_name(code)}, {"message", message}});
}

bool authorized(const httplib::Request& req, const std::string& token) {
  if (token.empty()) return false;
  if (req.get_header_value("X-Admin-Token") == token) return true;
  return req.get_header_value("Authorization") == "Bearer " + token;
}

// Runs fn and turns exceptions into error responses.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const StudyError& e) {
    send_error(res, e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    send_error(res, StudyErrc::bad_request, e.what());
  } catch (const std::exception& e) {
    send_json(res, 500, Json{{"error", "internal"}, {"message", e.what()}});
  }
}

std::string content_type(const std::string& name) {
  if (name.ends_with(".bmp")) return "image/bmp";
  if (name.ends_with(".ppm")) return "image/x-portable-pixmap";
  if (name.ends_with(".pgm")) return "image/x-portable-graymap";
  return "application/octet-stream";
}

}  // namespace

int http_status(StudyErrc code) {
  switch (code) {
    case StudyErrc::not_found: return 404;
    case StudyErrc::bad_request: return 400;
    case StudyErrc::duplicate:
    case StudyErrc::stale:
    case StudyErrc::sequencing: return 409;
    case StudyErrc::out_of_domain: return 422;
    case StudyErrc::done: return 410;
    case StudyErrc::unauthorized: return 401;
    case StudyErrc::corrupt_log: return 500;
  }
  return 500;
}

void install_routes(httplib::Server& server, StudyService& service, const HttpOptions& options) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Authorization, X-Admin-Token");
    res.status = 204;
  });

  server.Post("/sessions", [&service, options](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::optional<Cohort> fixed;
      if (!req.body.empty()) {
        const Json body = Json::parse(req.body);
        if (!body.is_object()) throw StudyError(StudyErrc::bad_request, "body must be an object");
        if (body.contains("cohort")) {
          if (!authorized(req, options.admin_token)) {
            throw StudyError(StudyErrc::unauthorized, "choosing a cohort needs the admin token");
          }
          fixed = parse_cohort(body["cohort"].get<std::string>());
          if (!fixed) throw StudyError(StudyErrc::bad_request, "unknown cohort");
        }
      }
      send_json(res, 201, service.create_session(fixed));
    });
  });

  server.Get("/sessions/:id/next", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.next(req.path_params.at("id"))); });
  });

  server.Post("/sessions/:id/responses", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.submit(req.path_params.at("id"), Json::parse(req.body))); });
  });

  server.Get("/sessions/:id/state", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service.state(req.path_params.at("id"))); });
  });

  server.Get("/export", [&service, options](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!authorized(req, options.admin_token)) throw StudyError(StudyErrc::unauthorized, "admin token required");
      res.status = 200;
      res.set_content(service.export_records(), "application/x-ndjson");
    });
  });

  server.Get("/assets/:name", [options](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string name = req.path_params.at("name");
      if (!safe_asset_name(name)) throw StudyError(StudyErrc::bad_request, "bad asset name");
      std::ifstream in(options.asset_dir / name, std::ios::binary);
      if (!in) throw StudyError(StudyErrc::not_found, "no asset " + name);
      std::ostringstream ss;
      ss << in.rdbuf();
      res.status = 200;
      res.set_content(ss.str(), content_type(name));
    });
  });
}

}  // namespace ferx::study
