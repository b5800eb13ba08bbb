// Copyright 2026 The WDC Authors.
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

#include "wdc/raterd/server.h"

#include "httplib.h"
#include "json.hpp"
#include "wdc/error.h"

namespace wdc::raterd {
namespace {

using nlohmann::json;

void Reply(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), "application/json");
}

}  // namespace

Server::Server(Study& study) : study_(study), http_(std::make_unique<httplib::Server>()) {
  httplib::Server& s = *http_;

  s.Get("/task", [this](const httplib::Request&, httplib::Response& res) {
    try {
      res.set_content(TaskToJson(study_.IssueTask()), "application/json");
      res.set_header("Cache-Control", "no-store");
    } catch (const ValueError& e) {
      Reply(res, 503, e.what());
    }
  });

  s.Post("/rating", [this](const httplib::Request& req, httplib::Response& res) {
    std::string task_id, rater_id;
    int side = 0;
    try {
      const json body = json::parse(req.body);
      task_id = body.at("task_id").get<std::string>();
      rater_id = body.at("rater_id").get<std::string>();
      side = body.at("chosen").get<int>();
    } catch (const json::exception&) {
      return Reply(res, 400, "expected {\"task_id\", \"chosen\": 1|2, \"rater_id\"}");
    }
    SubmitStatus st;
    try {
      st = study_.Submit(task_id, side, rater_id);
    } catch (const ValueError& e) {
      return Reply(res, 400, e.what());
    }
    switch (st) {
      case SubmitStatus::kOk:
        res.set_content(json{{"ok", true}, {"ratings", study_.RatingCount()}}.dump(),
                        "application/json");
        return;
      case SubmitStatus::kUnknownTask:
        return Reply(res, 410, "unknown or expired task");
      case SubmitStatus::kDuplicate:
        return Reply(res, 409, "task already rated");
      case SubmitStatus::kBadSide:
        return Reply(res, 400, "chosen must be 1 or 2");
    }
  });

  s.Get("/scores", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(study_.Scores()->ToJson(study_.RatingCount()), "application/json");
  });

  s.Get(R"(/crop/([A-Za-z0-9]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::optional<CropRef> ref = study_.ResolveCrop(req.matches[1]);
    if (!ref) return Reply(res, 404, "unknown crop");
    const std::vector<uint8_t> png = study_.CropBytes(*ref);
    res.set_content(std::string(png.begin(), png.end()), "image/png");
    res.set_header("Cache-Control", "private, max-age=600");
  });

  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      Reply(res, 500, e.what());
    } catch (...) {
      Reply(res, 500, "internal error");
    }
  });

  if (!study_.config().static_dir.empty()) s.set_mount_point("/", study_.config().static_dir);
}

Server::~Server() { Stop(); }

bool Server::Listen(const std::string& host, int port) { return http_->listen(host, port); }

int Server::BindToAnyPort(const std::string& host) { return http_->bind_to_any_port(host); }

bool Server::ListenAfterBind() { return http_->listen_after_bind(); }

void Server::Stop() {
  if (http_->is_running()) http_->stop();
}

void Server::WaitUntilReady() { http_->wait_until_ready(); }

}  // namespace wdc::raterd
