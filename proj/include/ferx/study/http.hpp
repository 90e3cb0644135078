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

#pragma once

#include <filesystem>
#include <string>

#include "ferx/study/service.hpp"

namespace httplib {
class Server;
}

namespace ferx::study {

struct HttpOptions {
  std::string admin_token;  // empty disables /export and fixed-cohort creation
  std::filesystem::path asset_dir;
};

int http_status(StudyErrc code);

// POST /sessions                  -> 201 state (body {"cohort": X} needs the admin token)
// GET  /sessions/:id/next         -> item payload
// POST /sessions/:id/responses    -> {"accepted": true, "state": ...}
// GET  /sessions/:id/state        -> state
// GET  /export                    -> JSONL records (admin token)
// GET  /assets/:name              -> bundle image
// Errors come back as {"error": <code>, "message": ...}.
void install_routes(httplib::Server& server, StudyService& service, const HttpOptions& options);

}  // namespace ferx::study
