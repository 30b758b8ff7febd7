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

#ifndef SPOOFEVAL_TRIALDATA_HPP
#define SPOOFEVAL_TRIALDATA_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spoofeval/error.hpp"

namespace spoofeval {

enum class Task { la, pa, df };
enum class Label { bonafide, spoof };
enum class TrialPhase { progress, evaluation, hidden };

Task parse_task(std::string_view text);
Label parse_label(std::string_view text);
TrialPhase parse_phase(std::string_view text);
const char* to_string(Task task);
const char* to_string(Label label);
const char* to_string(TrialPhase phase);

/// True when `tag` is a valid condition for `task`.  LA and DF have closed
/// vocabularies (LA-C1..LA-C7, DF-C1..DF-C9).  PA conditions are dash-joined
/// factor tuples (e.g. "R1-M2-D3"); some factor values are still undisclosed,
/// so PA accepts any well-formed tuple of alphanumeric tokens.
bool is_known_condition(Task task, std::string_view tag);

/// One keyed trial: identity, ground truth and the metadata needed for
/// per-condition and per-phase reports.  `attack` is empty for bonafide
/// trials (written as "-" on disk).
struct TrialKey {
  std::string trial;
  Task task = Task::la;
  std::string condition;
  std::string attack;
  Label label = Label::bonafide;
  TrialPhase phase = TrialPhase::progress;
};

struct ScoreEntry {
  std::string trial;
  double score = 0.0;
};

/// Ordered per-trial detection scores.  Higher score means "more bonafide".
/// Parsing rejects duplicate trial ids and non-finite scores.
struct ScoreSet {
  std::vector<ScoreEntry> entries;
};

struct TrialRecord {
  std::string trial;
  double score = 0.0;
  Label label = Label::bonafide;
  std::string condition;
  TrialPhase phase = TrialPhase::progress;
};

/// Scores joined with their keys: the substrate of every metric.
struct LabeledScores {
  std::vector<TrialRecord> records;

  std::vector<double> bona_scores() const;
  std::vector<double> spoof_scores() const;
  std::size_t count(Label label) const;
};

/// Parses the two-field score exchange format: one "<trial_id> <score>" pair
/// per line.  "\r\n" is tolerated on read; order is preserved.
ScoreSet parse_score_file(std::string_view text);
ScoreSet load_score_file(const std::string& path);

/// Canonical serialization: single space, "\n" terminators.
/// write(parse(f)) is byte-identical to the canonicalized input.
std::string write_score_file(const ScoreSet& scores);
void save_score_file(const ScoreSet& scores, const std::string& path);

/// Parses the six-field key format:
///   <trial_id> <task> <condition> <attack|-> <bonafide|spoof> <phase>
std::vector<TrialKey> parse_key_file(std::string_view text);
std::vector<TrialKey> load_key_file(const std::string& path);
std::string write_key_file(const std::vector<TrialKey>& keys);

enum class AlignMode { strict, lenient };

struct AlignResult {
  LabeledScores labeled;
  std::size_t dropped_extras = 0;  // lenient mode only
};

/// Joins scores to keys, keeping exactly the keyed trials of the requested
/// phase (all phases when `phase` is empty).  A keyed trial without a score
/// is always an error; a scored trial without a key is an error in strict
/// mode and is dropped (and counted) in lenient mode.
AlignResult align(const ScoreSet& scores, const std::vector<TrialKey>& keys,
                  std::optional<TrialPhase> phase,
                  AlignMode mode = AlignMode::strict);

/// Splits by condition tag.  Partitions are disjoint, preserve labels and
/// cover the input exactly.
std::map<std::string, LabeledScores> partition_by_condition(
    const LabeledScores& labeled);

}  // namespace spoofeval

#endif  // SPOOFEVAL_TRIALDATA_HPP
