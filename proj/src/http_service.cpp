// Copyright 2026  The spoofeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spoofeval/http_service.hpp"

#include <httplib.h>
#include <json.hpp>

#include <functional>
#include <string>
#include <thread>
#include <utility>

#include "spoofeval/error.hpp"
#include "spoofeval/trialdata.hpp"

namespace spoofeval {

namespace {

int status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::auth_error:
      return 401;
    case ErrorKind::phase_closed:
      return 403;
    case ErrorKind::not_found:
    case ErrorKind::unknown_task:
      return 404;
    case ErrorKind::quota_exceeded:
      return 429;
    default:
      return 400;
  }
}

std::string error_json(const Error& error) {
  nlohmann::json body;
  body["error"] = to_string(error.kind());
  body["message"] = error.what();
  return body.dump(2) + "\n";
}

void send_json(httplib::Response& res, int status, std::string body) {
  res.status = status;
  res.set_content(std::move(body), "application/json");
}

/// Runs `handler`, translating toolkit errors into JSON error responses.
void guarded(httplib::Response& res, const std::function<void()>& handler) {
  try {
    handler();
  } catch (const Error& error) {
    send_json(res, status_for(error.kind()), error_json(error));
  } catch (const std::exception& error) {
    nlohmann::json body;
    body["error"] = "Internal";
    body["message"] = error.what();
    send_json(res, 500, body.dump(2) + "\n");
  }
}

Task task_from_path(const httplib::Request& req) {
  return parse_task(req.path_params.at("task"));
}

/// Token from the multipart "token" part, the X-Auth-Token header, or the
/// "token" query parameter — in that order.
std::string extract_token(const httplib::Request& req) {
  if (req.is_multipart_form_data() && req.has_file("token")) {
    return req.get_file_value("token").content;
  }
  if (req.has_header("X-Auth-Token")) {
    return req.get_header_value("X-Auth-Token");
  }
  if (req.has_param("token")) {
    return req.get_param_value("token");
  }
  return std::string();
}

}  // namespace

struct HttpService::Impl {
  Platform& platform;
  httplib::Server server;
  std::thread worker;

  explicit Impl(Platform& p) : platform(p) { install_routes(); }

  void install_routes() {
    server.Post("/api/v1/:task/submissions",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] { handle_submit(req, res); });
                });
    server.Get("/api/v1/:task/leaderboard",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] { handle_leaderboard(req, res); });
               });
    server.Get("/api/v1/:task/progress-series",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] { handle_series(req, res); });
               });
    server.Get("/api/v1/:task/submissions/:id",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] { handle_lookup(req, res); });
               });
  }

  void handle_submit(const httplib::Request& req, httplib::Response& res) {
    const Task task = task_from_path(req);
    const std::string token = extract_token(req);
    if (token.empty()) {
      fail(ErrorKind::auth_error, "missing token");
    }
    if (!req.is_multipart_form_data() || !req.has_file("scores")) {
      fail(ErrorKind::bad_file, "missing multipart 'scores' file part");
    }
    const SubmissionRecord record =
        platform.submit(token, task, req.get_file_value("scores").content);
    // A recorded rejection (malformed scores, alignment failure, ...) is a
    // successfully handled request: the caller gets the record and the
    // reason with a 200.  Only admission failures use error statuses.
    send_json(res, 200, submission_response_json(record));
  }

  void handle_leaderboard(const httplib::Request& req, httplib::Response& res) {
    const Task task = task_from_path(req);
    const std::string phase =
        req.has_param("phase") ? req.get_param_value("phase") : "progress";
    const auto entries = platform.leaderboard(task, phase);
    send_json(res, 200, leaderboard_to_json(task, phase, entries));
  }

  void handle_series(const httplib::Request& req, httplib::Response& res) {
    const Task task = task_from_path(req);
    const auto series = platform.progress_series(task);
    send_json(res, 200, series_to_json(task, series));
  }

  void handle_lookup(const httplib::Request& req, httplib::Response& res) {
    const Task task = task_from_path(req);
    (void)task;  // the id is globally unique; the task segment scopes the URL
    const std::string token = extract_token(req);
    if (token.empty()) {
      fail(ErrorKind::auth_error, "missing token");
    }
    const SubmissionRecord record =
        platform.find_submission(token, req.path_params.at("id"));
    send_json(res, 200, submission_response_json(record));
  }
};

HttpService::HttpService(Platform& platform)
    : impl_(new Impl(platform)) {}

HttpService::~HttpService() { stop(); }

bool HttpService::serve(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int HttpService::start_background(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port <= 0) {
    fail(ErrorKind::bad_config, "could not bind " + host);
  }
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void HttpService::stop() {
  if (!impl_) {
    return;
  }
  impl_->server.stop();
  if (impl_->worker.joinable()) {
    impl_->worker.join();
  }
}

}  // namespace spoofeval
