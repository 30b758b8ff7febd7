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

#ifndef SPOOFEVAL_HTTP_SERVICE_HPP
#define SPOOFEVAL_HTTP_SERVICE_HPP

#include <memory>
#include <string>

#include "spoofeval/service.hpp"

namespace spoofeval {

/// HTTP/JSON front door for a Platform.
///
/// Routes (all JSON responses):
///   POST /api/v1/{task}/submissions
///        multipart/form-data with a "token" text part and a "scores" file
///        part.  200 with the submission record (scored or rejected);
///        401 bad token, 403 phase closed, 404 unknown task, 429 quota.
///   GET  /api/v1/{task}/leaderboard?phase=NAME   (phase defaults to
///        "progress")
///   GET  /api/v1/{task}/progress-series
///   GET  /api/v1/{task}/submissions/{id}?token=...   owner-only lookup;
///        the token may also be supplied via the X-Auth-Token header.
///
/// The server owns no domain state: every request is delegated to the
/// Platform, whose locking makes concurrent submissions safe.
class HttpService {
 public:
  explicit HttpService(Platform& platform);
  ~HttpService();

  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;

  /// Serves on `host:port`, blocking until stop() is called from another
  /// thread (or the process exits).  Returns false if the socket could not
  /// be bound.
  bool serve(const std::string& host, int port);

  /// Binds to an OS-assigned free port on `host` and serves from a
  /// background thread.  Returns the bound port.  Intended for tests.
  int start_background(const std::string& host);

  /// Stops the server; joins the background thread if one was started.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace spoofeval

#endif  // SPOOFEVAL_HTTP_SERVICE_HPP
