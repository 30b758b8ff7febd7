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

#ifndef SPOOFEVAL_SERVICE_HPP_
#define SPOOFEVAL_SERVICE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "spoofeval/error.hpp"
#include "spoofeval/metrics.hpp"
#include "spoofeval/trialdata.hpp"

namespace spoofeval {

// ---------------------------------------------------------------------------
// Time utilities (UTC only).

/// Parses "YYYY-MM-DDTHH:MM:SS" with an optional trailing "Z" to seconds
/// since the Unix epoch.  BadConfig on malformed input.
std::int64_t parse_iso8601(std::string_view text);

/// Renders epoch seconds as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601(std::int64_t epoch_seconds);

/// UTC calendar day index (days since the epoch) of a timestamp.
std::int64_t utc_day_index(std::int64_t epoch_seconds);

/// Renders a UTC day index as "YYYY-MM-DD".
std::string format_utc_day(std::int64_t day_index);

/// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// ---------------------------------------------------------------------------
// Configuration.

struct TeamConfig {
  std::string token;  // opaque secret presented on submission
  std::string alias;  // anonymous name; the only identity ever published
  bool leaderboard = false;  // opt-in, default off
};

struct PhaseConfig {
  std::string name;  // "progress" | "evaluation" | "post_evaluation"
  std::int64_t start = 0;  // inclusive, epoch seconds
  std::int64_t end = 0;    // exclusive
  std::optional<int> daily_quota;  // per UTC day; absent = unlimited
  std::optional<int> total_quota;  // per phase; absent = unlimited
  TrialPhase trial_subset = TrialPhase::progress;  // key filter
  std::optional<TdcfCoefficients> coefficients;    // absent for DF
};

struct TaskConfig {
  Task task = Task::la;
  std::string key_file;
  std::vector<PhaseConfig> phases;
};

struct ServiceConfig {
  std::string data_dir = "data";
  int port = 8080;
  std::vector<TeamConfig> teams;
  std::vector<TaskConfig> tasks;
};

/// Parses the service configuration JSON (see the API reference in the
/// README for the schema) and applies built-in coefficient defaults for
/// LA/PA phases that do not override them.  The SPOOFEVAL_PORT and
/// SPOOFEVAL_DATA_DIR environment variables override the file values.
ServiceConfig parse_service_config(const std::string& json_text);
ServiceConfig load_service_config(const std::string& path);

// ---------------------------------------------------------------------------
// Records.

struct SubmissionResult {
  std::optional<double> min_tdcf;  // normalized; absent for DF
  double eer = 0.0;                // fraction
};

struct SubmissionRecord {
  std::string id;           // "sub-000001", assigned in admission order
  std::string team_alias;   // never the token
  Task task = Task::la;
  std::string phase;        // phase name
  std::int64_t received_at = 0;
  std::string digest;       // SHA-256 of the raw score file
  bool scored = false;      // false = rejected
  std::string reason;       // rejection reason when !scored
  std::optional<SubmissionResult> result;
};

struct LeaderboardEntry {
  std::string alias;
  double best = 0.0;  // primary metric: min t-DCF (LA/PA) or EER (DF)
  std::size_t submissions = 0;
  std::int64_t last_update = 0;
};

struct SeriesPoint {
  std::int64_t day = 0;  // UTC day index
  std::optional<double> best;  // running best primary metric (absent before
                               // the first scored submission)
  std::size_t submissions = 0;  // scored submissions that day
};

// ---------------------------------------------------------------------------
// Platform.

/// Injectable time source (UTC epoch seconds).
using Clock = std::function<std::int64_t()>;

/// The submission platform: phase and quota enforcement, hidden-key
/// scoring, append-only persistence, leaderboard.
///
/// Construction loads every task's key file, then replays
/// `<data_dir>/submissions.log` so a restarted platform continues with
/// identical state.  Raw score files are stored content-addressed under
/// `<data_dir>/files/<digest>`.
///
/// Admission is serialized per team (atomic quota checks under concurrent
/// submissions); teams do not block each other while scoring.
class Platform {
 public:
  explicit Platform(ServiceConfig config, Clock clock = nullptr);

  /// Admits, scores and records one submission.  Throws AuthError (unknown
  /// token), PhaseClosed (no active phase for the task) or QuotaExceeded.
  /// Parse and alignment failures are recorded as rejections — with the
  /// reason, without consuming quota — and returned, not thrown.
  SubmissionRecord submit(const std::string& token, Task task,
                          const std::string& score_text);

  /// Entries for opted-in teams with at least one scored submission in the
  /// phase, ascending by primary metric; ties rank the earlier achiever
  /// first.  Never exposes tokens or per-trial data.
  std::vector<LeaderboardEntry> leaderboard(Task task,
                                            const std::string& phase) const;

  /// Running per-UTC-day best of the primary metric over all scored
  /// submissions of the task, with per-day submission counts.  Days without
  /// submissions carry the previous best forward.
  std::vector<SeriesPoint> progress_series(Task task) const;

  /// Owner-only lookup: the record is returned only to the team that made
  /// it.  AuthError for unknown tokens; NotFound otherwise.
  SubmissionRecord find_submission(const std::string& token,
                                   const std::string& id) const;

  const ServiceConfig& config() const { return config_; }

  /// Primary metric of a task: min t-DCF for LA/PA, EER for DF.
  static const char* primary_metric_name(Task task);

 private:
  const PhaseConfig* active_phase(const TaskConfig& task_cfg,
                                  std::int64_t now) const;
  const TaskConfig* task_config(Task task) const;
  void persist_and_store(SubmissionRecord& record, const std::string& raw);
  void replay_log();
  static double primary_metric(Task task, const SubmissionResult& result);

  ServiceConfig config_;
  Clock clock_;
  std::map<Task, std::vector<TrialKey>> keys_;
  std::map<std::string, std::size_t> token_to_team_;  // token -> teams index
  std::map<std::string, std::size_t> alias_to_team_;

  // Guarded by mutex_: the append-only record list and the id counter.
  mutable std::mutex mutex_;
  std::vector<SubmissionRecord> records_;
  std::uint64_t next_id_ = 1;

  // One admission lock per team.
  std::vector<std::unique_ptr<std::mutex>> team_locks_;
};

/// Record <-> JSON used both for the append-only log (full precision) and
/// the API responses.
std::string record_to_json(const SubmissionRecord& record);
SubmissionRecord record_from_json(const std::string& json_text);

/// API renderings (rounded like the report formats: t-DCF 4 decimals,
/// EER% 2 decimals).
std::string leaderboard_to_json(Task task, const std::string& phase,
                                const std::vector<LeaderboardEntry>& entries);
std::string series_to_json(Task task, const std::vector<SeriesPoint>& series);
std::string submission_response_json(const SubmissionRecord& record);

}  // namespace spoofeval

#endif  // SPOOFEVAL_SERVICE_HPP_
