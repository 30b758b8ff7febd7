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

#ifndef SPOOFEVAL_ERROR_HPP
#define SPOOFEVAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace spoofeval {

enum class ErrorKind {
  // file / format errors
  malformed_line,
  non_finite_score,
  duplicate_trial,
  unknown_task,
  unknown_condition,
  unknown_label,
  unknown_phase,
  missing_trial,
  extra_trial,
  bad_file,
  bad_audio,
  // metric errors
  empty_class,
  zero_normalizer,
  degenerate_variance,
  // feature / model errors
  too_short,
  bad_config,
  too_few_frames,
  dim_mismatch,
  clipped_input,
  // service errors
  quota_exceeded,
  phase_closed,
  auth_error,
  not_found,
};

const char* to_string(ErrorKind kind);

/// Single exception type for all toolkit errors; `kind()` identifies the
/// contract violation so callers (and the CLI exit-code mapping) can
/// dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace spoofeval

#endif  // SPOOFEVAL_ERROR_HPP
