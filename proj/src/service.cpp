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

#include "spoofeval/service.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

namespace spoofeval {

// ---------------------------------------------------------------------------
// Time utilities.

namespace {

/// Days since 1970-01-01 of a proleptic-Gregorian civil date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day) {
  year -= month <= 2;
  const int era = (year >= 0 ? year : year - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(year - era * 400);
  const unsigned doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<std::int64_t>(era) * 146097 +
         static_cast<std::int64_t>(doe) - 719468;
}

/// Inverse of days_from_civil.
void civil_from_days(std::int64_t days, int& year, unsigned& month,
                     unsigned& day) {
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(days - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = doy - (153 * mp + 2) / 5 + 1;
  month = mp < 10 ? mp + 3 : mp - 9;
  year = static_cast<int>(y + (month <= 2));
}

bool days_in_month_ok(int year, unsigned month, unsigned day) {
  static const unsigned lengths[] = {31, 28, 31, 30, 31, 30,
                                     31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12 || day < 1) return false;
  unsigned limit = lengths[month - 1];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) limit = 29;
  return day <= limit;
}

}  // namespace

std::int64_t parse_iso8601(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS with an optional trailing Z.
  std::string s(text);
  if (!s.empty() && s.back() == 'Z') s.pop_back();
  int year, hour, minute, second;
  unsigned month, day;
  char sep;
  if (std::sscanf(s.c_str(), "%4d-%2u-%2u%c%2d:%2d:%2d", &year, &month, &day,
                  &sep, &hour, &minute, &second) != 7 ||
      (sep != 'T' && sep != ' ')) {
    fail(ErrorKind::bad_config, "bad timestamp: " + std::string(text));
  }
  if (!days_in_month_ok(year, month, day) || hour < 0 || hour > 23 ||
      minute < 0 || minute > 59 || second < 0 || second > 60) {
    fail(ErrorKind::bad_config, "bad timestamp: " + std::string(text));
  }
  return days_from_civil(year, month, day) * 86400 + hour * 3600 +
         minute * 60 + second;
}

std::string format_iso8601(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  std::int64_t rem = epoch_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  int year;
  unsigned month, day;
  civil_from_days(days, year, month, day);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", year,
                month, day, static_cast<int>(rem / 3600),
                static_cast<int>((rem / 60) % 60), static_cast<int>(rem % 60));
  return buf;
}

std::int64_t utc_day_index(std::int64_t epoch_seconds) {
  std::int64_t days = epoch_seconds / 86400;
  if (epoch_seconds % 86400 < 0) days -= 1;
  return days;
}

std::string format_utc_day(std::int64_t day_index) {
  int year;
  unsigned month, day;
  civil_from_days(day_index, year, month, day);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
  return buf;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    fail(ErrorKind::bad_config, "SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0x0f]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration.

namespace {

using nlohmann::json;

double round_tdcf(double v) { return std::round(v * 1e4) / 1e4; }
double round_eer_percent(double eer) {
  return std::round(eer * 100.0 * 1e2) / 1e2;
}

[[noreturn]] void config_fail(const std::string& message) {
  fail(ErrorKind::bad_config, "service config: " + message);
}

TrialPhase default_subset_for_phase(const std::string& name) {
  if (name == "progress") return TrialPhase::progress;
  return TrialPhase::evaluation;  // evaluation and post_evaluation
}

}  // namespace

ServiceConfig parse_service_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    config_fail(e.what());
  }
  if (!root.is_object()) config_fail("top level must be an object");

  ServiceConfig config;
  config.data_dir = root.value("data_dir", std::string("data"));
  config.port = root.value("port", 8080);

  if (!root.contains("teams") || !root["teams"].is_array()) {
    config_fail("missing teams array");
  }
  for (const auto& t : root["teams"]) {
    TeamConfig team;
    team.token = t.value("token", std::string());
    team.alias = t.value("alias", std::string());
    team.leaderboard = t.value("leaderboard", false);
    if (team.token.empty() || team.alias.empty()) {
      config_fail("each team needs a token and an alias");
    }
    for (const auto& other : config.teams) {
      if (other.token == team.token) config_fail("duplicate team token");
      if (other.alias == team.alias) config_fail("duplicate team alias");
    }
    config.teams.push_back(std::move(team));
  }

  if (!root.contains("tasks") || !root["tasks"].is_array()) {
    config_fail("missing tasks array");
  }
  for (const auto& t : root["tasks"]) {
    TaskConfig task_cfg;
    task_cfg.task = parse_task(t.value("task", std::string()));
    task_cfg.key_file = t.value("key_file", std::string());
    if (task_cfg.key_file.empty()) config_fail("each task needs a key_file");
    for (const auto& other : config.tasks) {
      if (other.task == task_cfg.task) config_fail("duplicate task");
    }

    if (!t.contains("phases") || !t["phases"].is_array()) {
      config_fail("each task needs a phases array");
    }
    for (const auto& p : t["phases"]) {
      PhaseConfig phase;
      phase.name = p.value("name", std::string());
      if (phase.name != "progress" && phase.name != "evaluation" &&
          phase.name != "post_evaluation") {
        config_fail("phase name must be progress, evaluation or post_evaluation");
      }
      if (!p.contains("start") || !p.contains("end")) {
        config_fail("each phase needs start and end timestamps");
      }
      phase.start = parse_iso8601(p["start"].get<std::string>());
      phase.end = parse_iso8601(p["end"].get<std::string>());
      if (phase.start >= phase.end) config_fail("phase start must precede end");

      if (p.contains("daily_quota")) {
        phase.daily_quota = p["daily_quota"].get<int>();
        if (*phase.daily_quota < 1) config_fail("daily_quota must be >= 1");
      } else if (phase.name == "progress") {
        phase.daily_quota = 3;  // challenge default: three per day
      }
      if (p.contains("total_quota")) {
        phase.total_quota = p["total_quota"].get<int>();
        if (*phase.total_quota < 1) config_fail("total_quota must be >= 1");
      } else if (phase.name == "evaluation") {
        phase.total_quota = 1;  // challenge default: one in total
      }

      phase.trial_subset =
          p.contains("trial_subset")
              ? parse_phase(p["trial_subset"].get<std::string>())
              : default_subset_for_phase(phase.name);

      if (p.contains("coefficients")) {
        const auto& c = p["coefficients"];
        TdcfCoefficients coeffs;
        coeffs.c0 = c.value("c0", -1.0);
        coeffs.c1 = c.value("c1", -1.0);
        coeffs.c2 = c.value("c2", -1.0);
        coeffs.task = task_cfg.task;
        coeffs.phase = phase.trial_subset;
        if (!coeffs.valid()) config_fail("invalid coefficients");
        phase.coefficients = coeffs;
      } else if (task_cfg.task != Task::df) {
        if (phase.trial_subset == TrialPhase::hidden) {
          config_fail("hidden-subset phases need explicit coefficients");
        }
        phase.coefficients =
            default_coefficients(task_cfg.task, phase.trial_subset);
      }

      for (const auto& other : task_cfg.phases) {
        if (phase.start < other.end && other.start < phase.end) {
          config_fail("phases of one task must not overlap");
        }
      }
      task_cfg.phases.push_back(std::move(phase));
    }
    config.tasks.push_back(std::move(task_cfg));
  }

  if (const char* port = std::getenv("SPOOFEVAL_PORT")) {
    config.port = std::atoi(port);
  }
  if (const char* dir = std::getenv("SPOOFEVAL_DATA_DIR")) {
    config.data_dir = dir;
  }
  if (config.port < 1 || config.port > 65535) config_fail("invalid port");
  return config;
}

ServiceConfig load_service_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::bad_file, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_service_config(buffer.str());
}

// ---------------------------------------------------------------------------
// Record serialization.

std::string record_to_json(const SubmissionRecord& record) {
  json j;
  j["id"] = record.id;
  j["team"] = record.team_alias;
  j["task"] = to_string(record.task);
  j["phase"] = record.phase;
  j["received_at"] = format_iso8601(record.received_at);
  j["digest"] = record.digest;
  j["status"] = record.scored ? "scored" : "rejected";
  if (!record.scored) j["reason"] = record.reason;
  if (record.result.has_value()) {
    // Full precision: the log must replay to identical state.
    if (record.result->min_tdcf.has_value()) {
      j["min_tdcf"] = *record.result->min_tdcf;
    }
    j["eer"] = record.result->eer;
  }
  return j.dump();
}

SubmissionRecord record_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorKind::bad_file, std::string("bad log record: ") + e.what());
  }
  SubmissionRecord record;
  record.id = j.value("id", std::string());
  record.team_alias = j.value("team", std::string());
  record.task = parse_task(j.value("task", std::string()));
  record.phase = j.value("phase", std::string());
  record.received_at = parse_iso8601(j.value("received_at", std::string()));
  record.digest = j.value("digest", std::string());
  record.scored = j.value("status", std::string()) == "scored";
  record.reason = j.value("reason", std::string());
  if (record.scored) {
    SubmissionResult result;
    if (j.contains("min_tdcf")) result.min_tdcf = j["min_tdcf"].get<double>();
    result.eer = j.value("eer", 0.0);
    record.result = result;
  }
  if (record.id.empty() || record.team_alias.empty() || record.phase.empty()) {
    fail(ErrorKind::bad_file, "incomplete log record");
  }
  return record;
}

// ---------------------------------------------------------------------------
// Platform.

Platform::Platform(ServiceConfig config, Clock clock)
    : config_(std::move(config)),
      clock_(clock ? std::move(clock)
                   : []() { return static_cast<std::int64_t>(std::time(nullptr)); }) {
  for (std::size_t i = 0; i < config_.teams.size(); ++i) {
    token_to_team_[config_.teams[i].token] = i;
    alias_to_team_[config_.teams[i].alias] = i;
    team_locks_.push_back(std::make_unique<std::mutex>());
  }
  for (const auto& task_cfg : config_.tasks) {
    keys_[task_cfg.task] = load_key_file(task_cfg.key_file);
  }
  std::filesystem::create_directories(config_.data_dir + "/files");
  replay_log();
}

void Platform::replay_log() {
  std::ifstream in(config_.data_dir + "/submissions.log");
  if (!in) return;  // fresh platform
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SubmissionRecord record = record_from_json(line);
    std::uint64_t numeric = 0;
    if (record.id.size() > 4 && record.id.compare(0, 4, "sub-") == 0) {
      numeric = std::strtoull(record.id.c_str() + 4, nullptr, 10);
    }
    next_id_ = std::max(next_id_, numeric + 1);
    records_.push_back(std::move(record));
  }
}

const TaskConfig* Platform::task_config(Task task) const {
  for (const auto& t : config_.tasks) {
    if (t.task == task) return &t;
  }
  return nullptr;
}

const PhaseConfig* Platform::active_phase(const TaskConfig& task_cfg,
                                          std::int64_t now) const {
  for (const auto& phase : task_cfg.phases) {
    if (now >= phase.start && now < phase.end) return &phase;
  }
  return nullptr;
}

double Platform::primary_metric(Task task, const SubmissionResult& result) {
  if (task == Task::df) return result.eer;
  if (!result.min_tdcf.has_value()) {
    fail(ErrorKind::bad_config, "missing t-DCF on a scored submission");
  }
  return *result.min_tdcf;
}

const char* Platform::primary_metric_name(Task task) {
  return task == Task::df ? "eer_percent" : "min_tdcf";
}

void Platform::persist_and_store(SubmissionRecord& record,
                                 const std::string& raw) {
  std::lock_guard<std::mutex> lock(mutex_);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "sub-%06llu",
                static_cast<unsigned long long>(next_id_++));
  record.id = buf;

  std::string file_path = config_.data_dir + "/files/" + record.digest;
  if (!std::filesystem::exists(file_path)) {
    std::ofstream out(file_path, std::ios::binary);
    out.write(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (!out) fail(ErrorKind::bad_file, "cannot store submission file");
  }

  std::ofstream log(config_.data_dir + "/submissions.log",
                    std::ios::app | std::ios::binary);
  if (!log) fail(ErrorKind::bad_file, "cannot open submission log");
  log << record_to_json(record) << "\n";
  log.flush();
  if (!log) fail(ErrorKind::bad_file, "cannot append to submission log");

  records_.push_back(record);
}

SubmissionRecord Platform::submit(const std::string& token, Task task,
                                  const std::string& score_text) {
  auto team_it = token_to_team_.find(token);
  if (team_it == token_to_team_.end()) {
    fail(ErrorKind::auth_error, "unknown team token");
  }
  const std::size_t team = team_it->second;
  const TaskConfig* task_cfg = task_config(task);
  if (task_cfg == nullptr) {
    fail(ErrorKind::not_found, "task not served by this platform");
  }

  // Admission is serialized per team: quota check and the recording of the
  // outcome happen under one lock, so concurrent submissions cannot
  // over-admit.  Other teams proceed in parallel.
  std::lock_guard<std::mutex> team_lock(*team_locks_[team]);

  const std::int64_t now = clock_();
  const PhaseConfig* phase = active_phase(*task_cfg, now);
  if (phase == nullptr) {
    fail(ErrorKind::phase_closed, "no open phase for this task");
  }

  const std::string& alias = config_.teams[team].alias;
  if (phase->daily_quota.has_value() || phase->total_quota.has_value()) {
    std::size_t today = 0;
    std::size_t total = 0;
    const std::int64_t day = utc_day_index(now);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      for (const auto& r : records_) {
        if (!r.scored || r.team_alias != alias || r.task != task ||
            r.phase != phase->name) {
          continue;
        }
        ++total;
        if (utc_day_index(r.received_at) == day) ++today;
      }
    }
    if (phase->daily_quota.has_value() &&
        today >= static_cast<std::size_t>(*phase->daily_quota)) {
      fail(ErrorKind::quota_exceeded, "daily submission quota reached");
    }
    if (phase->total_quota.has_value() &&
        total >= static_cast<std::size_t>(*phase->total_quota)) {
      fail(ErrorKind::quota_exceeded, "total submission quota reached");
    }
  }

  SubmissionRecord record;
  record.team_alias = alias;
  record.task = task;
  record.phase = phase->name;
  record.received_at = now;
  record.digest = sha256_hex(score_text);

  // Parse and alignment failures are recorded rejections: the reason is
  // returned and no quota is consumed.
  try {
    ScoreSet scores = parse_score_file(score_text);
    AlignResult aligned =
        align(scores, keys_.at(task), phase->trial_subset, AlignMode::strict);

    SubmissionResult result;
    result.eer = eer(aligned.labeled).eer;
    if (phase->coefficients.has_value()) {
      double raw = min_tdcf(aligned.labeled, *phase->coefficients).value;
      result.min_tdcf = normalize_tdcf(raw, *phase->coefficients);
    }
    record.scored = true;
    record.result = result;
  } catch (const Error& e) {
    record.scored = false;
    record.reason = to_string(e.kind());
  }

  persist_and_store(record, score_text);
  return record;
}

std::vector<LeaderboardEntry> Platform::leaderboard(
    Task task, const std::string& phase) const {
  struct Row {
    double best = 0.0;
    std::int64_t achieved_at = 0;  // when the best was first reached
    std::size_t submissions = 0;
    std::int64_t last_update = 0;
  };
  std::map<std::string, Row> rows;

  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& r : records_) {
      if (!r.scored || r.task != task || r.phase != phase) continue;
      auto team_it = alias_to_team_.find(r.team_alias);
      if (team_it == alias_to_team_.end() ||
          !config_.teams[team_it->second].leaderboard) {
        continue;  // opt-in only
      }
      double metric = primary_metric(task, *r.result);
      auto [it, fresh] = rows.try_emplace(r.team_alias);
      Row& row = it->second;
      if (fresh || metric < row.best) {
        row.best = metric;
        row.achieved_at = r.received_at;
      }
      ++row.submissions;
      row.last_update = std::max(row.last_update, r.received_at);
    }
  }

  std::vector<LeaderboardEntry> entries;
  std::vector<std::pair<std::string, Row>> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second.best != b.second.best) return a.second.best < b.second.best;
    if (a.second.achieved_at != b.second.achieved_at) {
      return a.second.achieved_at < b.second.achieved_at;
    }
    return a.first < b.first;
  });
  for (const auto& [alias, row] : sorted) {
    entries.push_back({alias, row.best, row.submissions, row.last_update});
  }
  return entries;
}

std::vector<SeriesPoint> Platform::progress_series(Task task) const {
  std::vector<std::pair<std::int64_t, double>> scored;  // (time, metric)
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& r : records_) {
      if (!r.scored || r.task != task) continue;
      scored.emplace_back(r.received_at, primary_metric(task, *r.result));
    }
  }
  if (scored.empty()) return {};
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  const std::int64_t first_day = utc_day_index(scored.front().first);
  const std::int64_t last_day = utc_day_index(scored.back().first);
  std::vector<SeriesPoint> series;
  std::size_t next = 0;
  std::optional<double> best;
  for (std::int64_t day = first_day; day <= last_day; ++day) {
    SeriesPoint point;
    point.day = day;
    while (next < scored.size() && utc_day_index(scored[next].first) == day) {
      ++point.submissions;
      if (!best.has_value() || scored[next].second < *best) {
        best = scored[next].second;
      }
      ++next;
    }
    point.best = best;  // running minimum, carried across empty days
    series.push_back(point);
  }
  return series;
}

SubmissionRecord Platform::find_submission(const std::string& token,
                                           const std::string& id) const {
  auto team_it = token_to_team_.find(token);
  if (team_it == token_to_team_.end()) {
    fail(ErrorKind::auth_error, "unknown team token");
  }
  const std::string& alias = config_.teams[team_it->second].alias;
  std::lock_guard<std::mutex> lock(mutex_);
  for (const auto& r : records_) {
    // Unknown ids and other teams' ids are indistinguishable by design.
    if (r.id == id && r.team_alias == alias) return r;
  }
  fail(ErrorKind::not_found, "no such submission");
}

// ---------------------------------------------------------------------------
// API renderings.

std::string submission_response_json(const SubmissionRecord& record) {
  json j;
  j["id"] = record.id;
  j["team"] = record.team_alias;
  j["task"] = to_string(record.task);
  j["phase"] = record.phase;
  j["received_at"] = format_iso8601(record.received_at);
  j["digest"] = record.digest;
  j["status"] = record.scored ? "scored" : "rejected";
  if (!record.scored) j["reason"] = record.reason;
  if (record.result.has_value()) {
    json results = json::object();
    if (record.result->min_tdcf.has_value()) {
      results["min_tdcf"] = round_tdcf(*record.result->min_tdcf);
    }
    results["eer_percent"] = round_eer_percent(record.result->eer);
    j["results"] = results;
  }
  return j.dump(2) + "\n";
}

std::string leaderboard_to_json(Task task, const std::string& phase,
                                const std::vector<LeaderboardEntry>& entries) {
  json j;
  j["task"] = to_string(task);
  j["phase"] = phase;
  j["metric"] = Platform::primary_metric_name(task);
  j["entries"] = json::array();
  for (const auto& e : entries) {
    json entry;
    entry["alias"] = e.alias;
    entry["best"] =
        task == Task::df ? round_eer_percent(e.best) : round_tdcf(e.best);
    entry["submissions"] = e.submissions;
    entry["last_update"] = format_iso8601(e.last_update);
    j["entries"].push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

std::string series_to_json(Task task, const std::vector<SeriesPoint>& series) {
  json j;
  j["task"] = to_string(task);
  j["metric"] = Platform::primary_metric_name(task);
  j["series"] = json::array();
  for (const auto& p : series) {
    json point;
    point["day"] = format_utc_day(p.day);
    if (p.best.has_value()) {
      point["best"] =
          task == Task::df ? round_eer_percent(*p.best) : round_tdcf(*p.best);
    } else {
      point["best"] = nullptr;
    }
    point["submissions"] = p.submissions;
    j["series"].push_back(std::move(point));
  }
  return j.dump(2) + "\n";
}

}  // namespace spoofeval
