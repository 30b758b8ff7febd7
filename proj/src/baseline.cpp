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

#include "spoofeval/baseline.hpp"

namespace spoofeval {

FrontEnd parse_front_end(std::string_view text) {
  if (text == "lfcc") return FrontEnd::lfcc;
  if (text == "cqcc") return FrontEnd::cqcc;
  fail(ErrorKind::bad_config, "unknown front-end (expected lfcc or cqcc)");
}

FeatureMatrix extract_features(const AudioSignal& audio,
                               const BaselineConfig& config) {
  if (config.front_end == FrontEnd::lfcc) {
    return lfcc(audio, default_lfcc_config(config.task));
  }
  return cqcc(audio, default_cqcc_config(config.task));
}

namespace {

FeatureMatrix pooled_features(const std::vector<AudioSignal>& utterances,
                              const BaselineConfig& config) {
  FeatureMatrix pooled;
  for (const AudioSignal& audio : utterances) {
    FeatureMatrix features = extract_features(audio, config);
    if (pooled.cols == 0) {
      pooled.cols = features.cols;
    } else if (pooled.cols != features.cols) {
      fail(ErrorKind::dim_mismatch, "inconsistent feature dimensions");
    }
    pooled.rows += features.rows;
    pooled.values.insert(pooled.values.end(), features.values.begin(),
                         features.values.end());
  }
  return pooled;
}

}  // namespace

BaselineModels train_baseline(const std::vector<AudioSignal>& train_bona,
                              const std::vector<AudioSignal>& train_spoof,
                              const BaselineConfig& config) {
  if (train_bona.empty() || train_spoof.empty()) {
    fail(ErrorKind::empty_class, "both classes need training audio");
  }
  BaselineModels models;
  models.bona = em_train(pooled_features(train_bona, config), config.train);
  models.spoof = em_train(pooled_features(train_spoof, config), config.train);
  return models;
}

ScoreSet score_trials(const BaselineModels& models,
                      const std::vector<NamedAudio>& trials,
                      const BaselineConfig& config) {
  ScoreSet scores;
  scores.entries.reserve(trials.size());
  for (const NamedAudio& trial : trials) {
    FeatureMatrix features = extract_features(trial.audio, config);
    double llr = llr_score(models.bona, models.spoof, features);
    scores.entries.push_back({trial.id, llr});
  }
  return scores;
}

ScoreSet baseline_pipeline(const std::vector<AudioSignal>& train_bona,
                           const std::vector<AudioSignal>& train_spoof,
                           const std::vector<NamedAudio>& trials,
                           const BaselineConfig& config) {
  BaselineModels models = train_baseline(train_bona, train_spoof, config);
  return score_trials(models, trials, config);
}

}  // namespace spoofeval
