// Copyright 2026 The Usersim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "http_server.h"

#include <httplib.h>

#include <glog/logging.h>

#include "usersim/errors.h"

namespace usersim::app {

namespace {

void Send(httplib::Response& res, const ServiceReply& reply) {
  res.status = reply.status;
  res.set_content(reply.body.dump(), "application/json");
}

template <typename F>
void Guarded(httplib::Response& res, F&& f) {
  try {
    Send(res, f());
  } catch (const std::exception& e) {
    LOG(ERROR) << "request failed: " << e.what();
    Send(res, {500, {{"error", e.what()}}});
  }
}

}  // namespace

void RegisterRoutes(httplib::Server& server, SessionService& service,
                    const std::string& static_dir) {
  server.Post("/api/session", [&service](const httplib::Request&, httplib::Response& res) {
    Guarded(res, [&] { return service.Open(); });
  });
  server.Post(R"(/api/session/([^/]+)/turn)",
              [&service](const httplib::Request& req, httplib::Response& res) {
                Guarded(res, [&] { return service.Turn(req.matches[1], req.body); });
              });
  server.Post(R"(/api/session/([^/]+)/judge)",
              [&service](const httplib::Request& req, httplib::Response& res) {
                Guarded(res, [&] { return service.Judge(req.matches[1], req.body); });
              });
  server.Get("/api/report", [&service](const httplib::Request&, httplib::Response& res) {
    Guarded(res, [&] { return service.Report(); });
  });
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir)) {
    throw Error(ErrorCode::kConfig, "cannot serve static files from " + static_dir);
  }
}

}  // namespace usersim::app
