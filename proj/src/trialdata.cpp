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

#include "spoofeval/trialdata.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace spoofeval {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_line: return "MalformedLine";
    case ErrorKind::non_finite_score: return "NonFiniteScore";
    case ErrorKind::duplicate_trial: return "DuplicateTrial";
    case ErrorKind::unknown_task: return "UnknownTask";
    case ErrorKind::unknown_condition: return "UnknownCondition";
    case ErrorKind::unknown_label: return "UnknownLabel";
    case ErrorKind::unknown_phase: return "UnknownPhase";
    case ErrorKind::missing_trial: return "MissingTrial";
    case ErrorKind::extra_trial: return "ExtraTrial";
    case ErrorKind::bad_file: return "BadFile";
    case ErrorKind::bad_audio: return "BadAudio";
    case ErrorKind::empty_class: return "EmptyClass";
    case ErrorKind::zero_normalizer: return "ZeroNormalizer";
    case ErrorKind::degenerate_variance: return "DegenerateVariance";
    case ErrorKind::too_short: return "TooShort";
    case ErrorKind::bad_config: return "BadConfig";
    case ErrorKind::too_few_frames: return "TooFewFrames";
    case ErrorKind::dim_mismatch: return "DimMismatch";
    case ErrorKind::clipped_input: return "ClippedInput";
    case ErrorKind::quota_exceeded: return "QuotaExceeded";
    case ErrorKind::phase_closed: return "PhaseClosed";
    case ErrorKind::auth_error: return "AuthError";
    case ErrorKind::not_found: return "NotFound";
  }
  return "Error";
}

Task parse_task(std::string_view text) {
  if (text == "LA") return Task::la;
  if (text == "PA") return Task::pa;
  if (text == "DF") return Task::df;
  fail(ErrorKind::unknown_task, std::string(text));
}

Label parse_label(std::string_view text) {
  if (text == "bonafide") return Label::bonafide;
  if (text == "spoof") return Label::spoof;
  fail(ErrorKind::unknown_label, std::string(text));
}

TrialPhase parse_phase(std::string_view text) {
  if (text == "progress") return TrialPhase::progress;
  if (text == "evaluation") return TrialPhase::evaluation;
  if (text == "hidden") return TrialPhase::hidden;
  fail(ErrorKind::unknown_phase, std::string(text));
}

const char* to_string(Task task) {
  switch (task) {
    case Task::la: return "LA";
    case Task::pa: return "PA";
    case Task::df: return "DF";
  }
  return "?";
}

const char* to_string(Label label) {
  return label == Label::bonafide ? "bonafide" : "spoof";
}

const char* to_string(TrialPhase phase) {
  switch (phase) {
    case TrialPhase::progress: return "progress";
    case TrialPhase::evaluation: return "evaluation";
    case TrialPhase::hidden: return "hidden";
  }
  return "?";
}

namespace {

bool is_factor_token(std::string_view token) {
  if (token.empty()) return false;
  return std::all_of(token.begin(), token.end(), [](unsigned char c) {
    return std::isalnum(c) != 0;
  });
}

}  // namespace

bool is_known_condition(Task task, std::string_view tag) {
  switch (task) {
    case Task::la:
      return tag.size() == 5 && tag.substr(0, 4) == "LA-C" && tag[4] >= '1' &&
             tag[4] <= '7';
    case Task::df:
      return tag.size() == 5 && tag.substr(0, 4) == "DF-C" && tag[4] >= '1' &&
             tag[4] <= '9';
    case Task::pa: {
      // Dash-joined factor tuple, e.g. "R1-M2-D3".
      std::size_t start = 0;
      while (true) {
        std::size_t dash = tag.find('-', start);
        std::string_view token = dash == std::string_view::npos
                                     ? tag.substr(start)
                                     : tag.substr(start, dash - start);
        if (!is_factor_token(token)) return false;
        if (dash == std::string_view::npos) return true;
        start = dash + 1;
      }
    }
  }
  return false;
}

std::vector<double> LabeledScores::bona_scores() const {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.label == Label::bonafide) out.push_back(r.score);
  return out;
}

std::vector<double> LabeledScores::spoof_scores() const {
  std::vector<double> out;
  for (const auto& r : records)
    if (r.label == Label::spoof) out.push_back(r.score);
  return out;
}

std::size_t LabeledScores::count(Label label) const {
  std::size_t n = 0;
  for (const auto& r : records)
    if (r.label == label) ++n;
  return n;
}

namespace {

// Splits one line on single spaces/tabs, collapsing runs of whitespace.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

// Iterates "\n"-separated lines, tolerating "\r\n" and a missing final
// terminator.  Calls fn(line_no, line) for every non-empty line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = eol == std::string_view::npos
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (!line.empty()) fn(line_no, line);
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
}

double parse_finite_score(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    // from_chars accepts "nan"/"inf"; anything it rejects is malformed.
    fail(ErrorKind::malformed_line,
         "line " + std::to_string(line_no) + ": bad score field '" +
             std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    fail(ErrorKind::non_finite_score, "line " + std::to_string(line_no));
  }
  return value;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::bad_file, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::bad_file, "cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::bad_file, "short write to " + path);
}

// Shortest decimal representation that round-trips exactly.
std::string format_score(double value) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    double parsed = 0.0;
    std::from_chars(buf, buf + std::char_traits<char>::length(buf), parsed);
    if (parsed == value) break;
  }
  return buf;
}

}  // namespace

ScoreSet parse_score_file(std::string_view text) {
  ScoreSet scores;
  std::unordered_set<std::string_view> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = split_fields(line);
    if (fields.size() != 2) {
      fail(ErrorKind::malformed_line,
           "line " + std::to_string(line_no) + ": expected 2 fields, got " +
               std::to_string(fields.size()));
    }
    double score = parse_finite_score(fields[1], line_no);
    scores.entries.push_back({std::string(fields[0]), score});
  });
  seen.reserve(scores.entries.size());
  for (const auto& e : scores.entries) {
    if (!seen.insert(e.trial).second)
      fail(ErrorKind::duplicate_trial, e.trial);
  }
  return scores;
}

ScoreSet load_score_file(const std::string& path) {
  return parse_score_file(read_text_file(path));
}

std::string write_score_file(const ScoreSet& scores) {
  std::string out;
  for (const auto& e : scores.entries) {
    out += e.trial;
    out += ' ';
    out += format_score(e.score);
    out += '\n';
  }
  return out;
}

void save_score_file(const ScoreSet& scores, const std::string& path) {
  write_text_file(path, write_score_file(scores));
}

std::vector<TrialKey> parse_key_file(std::string_view text) {
  std::vector<TrialKey> keys;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = split_fields(line);
    if (fields.size() != 6) {
      fail(ErrorKind::malformed_line,
           "line " + std::to_string(line_no) + ": expected 6 fields, got " +
               std::to_string(fields.size()));
    }
    TrialKey key;
    key.trial = std::string(fields[0]);
    key.task = parse_task(fields[1]);
    key.condition = std::string(fields[2]);
    if (!is_known_condition(key.task, key.condition)) {
      fail(ErrorKind::unknown_condition,
           key.condition + " for task " + to_string(key.task));
    }
    key.attack = fields[3] == "-" ? std::string() : std::string(fields[3]);
    key.label = parse_label(fields[4]);
    key.phase = parse_phase(fields[5]);
    keys.push_back(std::move(key));
  });
  std::unordered_set<std::string_view> seen;
  seen.reserve(keys.size());
  for (const auto& k : keys) {
    if (!seen.insert(k.trial).second) fail(ErrorKind::duplicate_trial, k.trial);
  }
  return keys;
}

std::vector<TrialKey> load_key_file(const std::string& path) {
  return parse_key_file(read_text_file(path));
}

std::string write_key_file(const std::vector<TrialKey>& keys) {
  std::string out;
  for (const auto& k : keys) {
    out += k.trial;
    out += ' ';
    out += to_string(k.task);
    out += ' ';
    out += k.condition;
    out += ' ';
    out += k.attack.empty() ? "-" : k.attack;
    out += ' ';
    out += to_string(k.label);
    out += ' ';
    out += to_string(k.phase);
    out += '\n';
  }
  return out;
}

AlignResult align(const ScoreSet& scores, const std::vector<TrialKey>& keys,
                  std::optional<TrialPhase> phase, AlignMode mode) {
  std::unordered_map<std::string_view, double> by_trial;
  by_trial.reserve(scores.entries.size());
  for (const auto& e : scores.entries) {
    if (!by_trial.emplace(e.trial, e.score).second)
      fail(ErrorKind::duplicate_trial, e.trial);
  }

  AlignResult result;
  std::vector<std::string> missing;
  std::size_t keyed = 0;
  for (const auto& k : keys) {
    if (phase && k.phase != *phase) continue;
    ++keyed;
    auto it = by_trial.find(k.trial);
    if (it == by_trial.end()) {
      missing.push_back(k.trial);
      continue;
    }
    result.labeled.records.push_back(
        {k.trial, it->second, k.label, k.condition, k.phase});
  }
  if (!missing.empty()) {
    std::string detail = std::to_string(missing.size()) + " keyed trial(s) " +
                         "without scores, first: " + missing.front();
    fail(ErrorKind::missing_trial, detail);
  }

  std::size_t extras = scores.entries.size() - keyed;
  // Every keyed trial matched, so any surplus entries are unknown trials.
  if (extras > 0) {
    if (mode == AlignMode::strict) {
      std::unordered_set<std::string_view> keyset;
      for (const auto& k : keys) {
        if (phase && k.phase != *phase) continue;
        keyset.insert(k.trial);
      }
      for (const auto& e : scores.entries) {
        if (!keyset.count(e.trial)) {
          fail(ErrorKind::extra_trial,
               std::to_string(extras) + " unkeyed trial(s), first: " + e.trial);
        }
      }
    }
    result.dropped_extras = extras;
  }
  return result;
}

std::map<std::string, LabeledScores> partition_by_condition(
    const LabeledScores& labeled) {
  std::map<std::string, LabeledScores> parts;
  for (const auto& r : labeled.records) parts[r.condition].records.push_back(r);
  return parts;
}

}  // namespace spoofeval
