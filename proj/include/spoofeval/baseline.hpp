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

#ifndef SPOOFEVAL_BASELINE_HPP_
#define SPOOFEVAL_BASELINE_HPP_

#include <string>
#include <vector>

#include "spoofeval/audio.hpp"
#include "spoofeval/gmm.hpp"
#include "spoofeval/trialdata.hpp"

namespace spoofeval {

/// The two classical front-ends.
enum class FrontEnd { lfcc, cqcc };

FrontEnd parse_front_end(std::string_view text);  // "lfcc" | "cqcc"

/// An utterance with its trial identifier.
struct NamedAudio {
  std::string id;
  AudioSignal audio;
};

struct BaselineConfig {
  FrontEnd front_end = FrontEnd::cqcc;
  Task task = Task::la;  // selects the front-end bandwidth (fmax)
  TrainConfig train;
};

/// Models trained by the baseline: one GMM per class.
struct BaselineModels {
  GmmModel bona;
  GmmModel spoof;
};

/// Extracts features for one utterance with the configured front-end.
FeatureMatrix extract_features(const AudioSignal& audio,
                               const BaselineConfig& config);

/// Pools per-utterance features (stacked rows) and trains the two GMMs.
/// EmptyClass if either training set is empty.
BaselineModels train_baseline(const std::vector<AudioSignal>& train_bona,
                              const std::vector<AudioSignal>& train_spoof,
                              const BaselineConfig& config);

/// Scores each trial with the frame-averaged log-likelihood ratio
/// loglik(bona) - loglik(spoof); higher means more bonafide.  Scores come
/// back in trial order.
ScoreSet score_trials(const BaselineModels& models,
                      const std::vector<NamedAudio>& trials,
                      const BaselineConfig& config);

/// End-to-end classical baseline: extract features with the task's
/// bandwidth, train the two GMMs, score every trial.  Deterministic given
/// the config; identical configs produce byte-identical score files.
ScoreSet baseline_pipeline(const std::vector<AudioSignal>& train_bona,
                           const std::vector<AudioSignal>& train_spoof,
                           const std::vector<NamedAudio>& trials,
                           const BaselineConfig& config);

}  // namespace spoofeval

#endif  // SPOOFEVAL_BASELINE_HPP_
