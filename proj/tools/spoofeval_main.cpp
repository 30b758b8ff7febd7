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
//
// spoofeval: command-line front door to every pipeline stage.
//
// Exit codes: 0 success, 1 data/runtime error, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spoofeval/baseline.hpp"
#include "spoofeval/companding.hpp"
#include "spoofeval/error.hpp"
#include "spoofeval/features.hpp"
#include "spoofeval/gmm.hpp"
#include "spoofeval/http_service.hpp"
#include "spoofeval/metrics.hpp"
#include "spoofeval/service.hpp"
#include "spoofeval/stats.hpp"
#include "spoofeval/trialdata.hpp"

namespace {

using spoofeval::Error;
using spoofeval::ErrorKind;

// ---------------------------------------------------------------------------
// Shared option state.

struct GlobalOptions {
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 = library default
  std::string format = "human";
  std::string out;  // empty = stdout
};

struct CommonInputs {
  std::string scores_path;
  std::string keys_path;
  std::string task = "";
  std::string phase = "";
  bool lenient = false;
};

bool json_format(const GlobalOptions& opts) { return opts.format == "json"; }

void emit(const GlobalOptions& opts, const std::string& text) {
  if (opts.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(opts.out, std::ios::binary);
  if (!file) {
    spoofeval::fail(ErrorKind::bad_file, "cannot open " + opts.out);
  }
  file << text;
  if (!file) {
    spoofeval::fail(ErrorKind::bad_file, "write failed: " + opts.out);
  }
}

std::string fixed(double value, int decimals) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(decimals);
  out << value;
  return out.str();
}

std::optional<spoofeval::TrialPhase> parse_phase_filter(
    const std::string& text) {
  if (text.empty() || text == "all") {
    return std::nullopt;
  }
  return spoofeval::parse_phase(text);
}

spoofeval::LabeledScores load_and_align(const CommonInputs& in) {
  const auto scores = spoofeval::load_score_file(in.scores_path);
  const auto keys = spoofeval::load_key_file(in.keys_path);
  const auto mode = in.lenient ? spoofeval::AlignMode::lenient
                               : spoofeval::AlignMode::strict;
  return spoofeval::align(scores, keys, parse_phase_filter(in.phase), mode)
      .labeled;
}

// Coefficients for LA/PA; nullopt for DF (EER-only task).  Explicit
// --c0/--c1/--c2 win over the built-in sets.
std::optional<spoofeval::TdcfCoefficients> resolve_coefficients(
    const std::string& task_text, const std::string& phase_text,
    const std::vector<double>& explicit_coeffs) {
  if (!explicit_coeffs.empty()) {
    spoofeval::TdcfCoefficients coeffs;
    coeffs.c0 = explicit_coeffs[0];
    coeffs.c1 = explicit_coeffs[1];
    coeffs.c2 = explicit_coeffs[2];
    if (!coeffs.valid()) {
      spoofeval::fail(ErrorKind::bad_config, "invalid cost coefficients");
    }
    return coeffs;
  }
  const spoofeval::Task task = spoofeval::parse_task(task_text);
  if (task == spoofeval::Task::df) {
    return std::nullopt;
  }
  const spoofeval::TrialPhase phase =
      (phase_text == "progress") ? spoofeval::TrialPhase::progress
                                 : spoofeval::TrialPhase::evaluation;
  return spoofeval::default_coefficients(task, phase);
}

std::vector<std::filesystem::path> sorted_files(const std::string& dir,
                                                const std::string& extension) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    spoofeval::fail(ErrorKind::bad_file, "not a directory: " + dir);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (!extension.empty() && entry.path().extension() != extension) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// ---------------------------------------------------------------------------
// Subcommand handlers.

int run_evaluate(const GlobalOptions& opts, const CommonInputs& in,
                 const std::vector<double>& explicit_coeffs) {
  const auto labeled = load_and_align(in);
  const auto coeffs =
      resolve_coefficients(in.task, in.phase, explicit_coeffs);
  const auto report = spoofeval::evaluate(labeled, coeffs);
  emit(opts, json_format(opts) ? spoofeval::report_to_json(report)
                               : spoofeval::format_report_text(report));
  return 0;
}

int run_eer(const GlobalOptions& opts, const CommonInputs& in) {
  const auto labeled = load_and_align(in);
  const auto result = spoofeval::eer(labeled);
  if (json_format(opts)) {
    nlohmann::json j;
    j["eer"] = result.eer;
    j["eer_percent"] = result.eer * 100.0;
    j["threshold"] = result.threshold;
    emit(opts, j.dump(2) + "\n");
  } else {
    emit(opts, "eer " + fixed(result.eer * 100.0, 2) + "\n" +  //
                   "threshold " + fixed(result.threshold, 6) + "\n");
  }
  return 0;
}

int run_tdcf(const GlobalOptions& opts, const CommonInputs& in,
             const std::vector<double>& explicit_coeffs) {
  const auto coeffs = resolve_coefficients(in.task, in.phase, explicit_coeffs);
  if (!coeffs) {
    spoofeval::fail(ErrorKind::bad_config,
                    "t-DCF is undefined for the DF task; pass --c0/--c1/--c2 "
                    "or an LA/PA task");
  }
  const auto labeled = load_and_align(in);
  const auto result = spoofeval::min_tdcf(labeled, *coeffs);
  const double normalized = spoofeval::normalize_tdcf(result.value, *coeffs);
  if (json_format(opts)) {
    nlohmann::json j;
    j["min_tdcf"] = normalized;
    j["min_tdcf_unnormalized"] = result.value;
    j["threshold"] = result.threshold;
    emit(opts, j.dump(2) + "\n");
  } else {
    emit(opts, "min_tdcf " + fixed(normalized, 4) + "\n" +  //
                   "threshold " + fixed(result.threshold, 6) + "\n");
  }
  return 0;
}

int run_significance(const GlobalOptions& opts, const CommonInputs& in,
                     const std::string& systems_dir, double alpha) {
  const auto keys = spoofeval::load_key_file(in.keys_path);
  const auto phase = parse_phase_filter(in.phase);
  const auto mode = in.lenient ? spoofeval::AlignMode::lenient
                               : spoofeval::AlignMode::strict;
  std::vector<spoofeval::SystemResult> systems;
  for (const auto& path : sorted_files(systems_dir, "")) {
    const auto scores = spoofeval::load_score_file(path.string());
    const auto labeled = spoofeval::align(scores, keys, phase, mode).labeled;
    systems.push_back(spoofeval::system_result_from_scores(
        path.stem().string(), labeled.bona_scores(), labeled.spoof_scores()));
  }
  const auto matrix = spoofeval::significance_matrix(systems, alpha);
  emit(opts, json_format(opts) ? spoofeval::matrix_to_json(matrix)
                               : spoofeval::format_matrix_text(matrix));
  return 0;
}

int run_extract(const GlobalOptions& opts, bool use_cqcc,
                const std::string& in_path, const std::string& out_path,
                const std::string& task_text) {
  const auto task = spoofeval::parse_task(task_text);
  const auto audio = spoofeval::read_wav(in_path);
  spoofeval::FeatureMatrix features;
  if (use_cqcc) {
    features = spoofeval::cqcc(audio, spoofeval::default_cqcc_config(task));
  } else {
    features = spoofeval::lfcc(audio, spoofeval::default_lfcc_config(task));
  }
  spoofeval::write_feature_file(out_path, features);
  if (json_format(opts)) {
    nlohmann::json j;
    j["frames"] = features.rows;
    j["dims"] = features.cols;
    j["file"] = out_path;
    emit(opts, j.dump(2) + "\n");
  } else {
    emit(opts, "frames " + std::to_string(features.rows) + "\ndims " +
                   std::to_string(features.cols) + "\n");
  }
  return 0;
}

int run_channel(const GlobalOptions& opts, bool alaw, const std::string& in_path,
                const std::string& out_path, bool narrowband) {
  const auto audio = spoofeval::read_wav(in_path);
  const auto processed = alaw ? spoofeval::alaw_roundtrip(audio, narrowband)
                              : spoofeval::mulaw_roundtrip(audio, narrowband);
  spoofeval::write_wav(out_path, processed);
  if (json_format(opts)) {
    nlohmann::json j;
    j["samples"] = processed.samples.size();
    j["sample_rate"] = processed.sample_rate;
    j["file"] = out_path;
    emit(opts, j.dump(2) + "\n");
  } else {
    emit(opts, "samples " + std::to_string(processed.samples.size()) +
                   "\nsample_rate " + std::to_string(processed.sample_rate) +
                   "\n");
  }
  return 0;
}

spoofeval::FeatureMatrix stack_feature_files(
    const std::vector<std::string>& paths) {
  spoofeval::FeatureMatrix pooled;
  for (const auto& path : paths) {
    const auto part = spoofeval::read_feature_file(path);
    if (pooled.cols == 0) {
      pooled.cols = part.cols;
    } else if (part.cols != pooled.cols) {
      spoofeval::fail(ErrorKind::dim_mismatch,
                      "feature dimension mismatch in " + path);
    }
    pooled.rows += part.rows;
    pooled.values.insert(pooled.values.end(), part.values.begin(),
                         part.values.end());
  }
  return pooled;
}

int run_gmm_train(const GlobalOptions& opts,
                  const std::vector<std::string>& feature_paths,
                  const std::string& model_path, int components,
                  int max_iterations, const std::string& init) {
  const auto frames = stack_feature_files(feature_paths);
  spoofeval::TrainConfig cfg;
  cfg.components = components;
  cfg.max_iterations = max_iterations;
  cfg.seed = opts.seed;
  cfg.init = (init == "random") ? spoofeval::TrainConfig::Init::random
                                : spoofeval::TrainConfig::Init::split;
  const auto model = spoofeval::em_train(frames, cfg);
  spoofeval::write_gmm_file(model_path, model);
  if (json_format(opts)) {
    nlohmann::json j;
    j["components"] = model.num_components();
    j["dim"] = model.dim;
    j["frames"] = frames.rows;
    j["file"] = model_path;
    emit(opts, j.dump(2) + "\n");
  } else {
    emit(opts, "components " + std::to_string(model.num_components()) +
                   "\ndim " + std::to_string(model.dim) + "\nframes " +
                   std::to_string(frames.rows) + "\n");
  }
  return 0;
}

int run_gmm_score(const GlobalOptions& opts, const std::string& bona_path,
                  const std::string& spoof_path,
                  const std::vector<std::string>& feature_paths) {
  const auto bona = spoofeval::read_gmm_file(bona_path);
  const auto spoof = spoofeval::read_gmm_file(spoof_path);
  spoofeval::ScoreSet scores;
  for (const auto& path : feature_paths) {
    const auto frames = spoofeval::read_feature_file(path);
    const double llr = spoofeval::llr_score(bona, spoof, frames);
    scores.entries.push_back(
        {std::filesystem::path(path).stem().string(), llr});
  }
  if (json_format(opts)) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& entry : scores.entries) {
      j.push_back({{"trial", entry.trial}, {"score", entry.score}});
    }
    emit(opts, j.dump(2) + "\n");
  } else {
    emit(opts, spoofeval::write_score_file(scores));
  }
  return 0;
}

std::vector<spoofeval::AudioSignal> load_wav_dir(const std::string& dir) {
  std::vector<spoofeval::AudioSignal> audio;
  for (const auto& path : sorted_files(dir, ".wav")) {
    audio.push_back(spoofeval::read_wav(path.string()));
  }
  return audio;
}

int run_baseline(const GlobalOptions& opts, const std::string& bona_dir,
                 const std::string& spoof_dir, const std::string& trials_dir,
                 const std::string& front_end, const std::string& task_text,
                 int components, int max_iterations) {
  spoofeval::BaselineConfig config;
  config.front_end = spoofeval::parse_front_end(front_end);
  config.task = spoofeval::parse_task(task_text);
  config.train.components = components;
  config.train.max_iterations = max_iterations;
  config.train.seed = opts.seed;

  const auto train_bona = load_wav_dir(bona_dir);
  const auto train_spoof = load_wav_dir(spoof_dir);
  std::vector<spoofeval::NamedAudio> trials;
  for (const auto& path : sorted_files(trials_dir, ".wav")) {
    trials.push_back({path.stem().string(), spoofeval::read_wav(path.string())});
  }

  const auto scores =
      spoofeval::baseline_pipeline(train_bona, train_spoof, trials, config);
  if (json_format(opts)) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& entry : scores.entries) {
      j.push_back({{"trial", entry.trial}, {"score", entry.score}});
    }
    emit(opts, j.dump(2) + "\n");
  } else {
    emit(opts, spoofeval::write_score_file(scores));
  }
  return 0;
}

int run_serve(const std::string& config_path, const std::string& host,
              int port_override) {
  auto config = spoofeval::load_service_config(config_path);
  if (port_override > 0) {
    config.port = port_override;
  }
  const int port = config.port;
  spoofeval::Platform platform(std::move(config));
  spoofeval::HttpService service(platform);
  std::cerr << "spoofeval: listening on " << host << ":" << port << "\n";
  if (!service.serve(host, port)) {
    spoofeval::fail(ErrorKind::bad_config,
                    "cannot bind " + host + ":" + std::to_string(port));
  }
  return 0;
}

int run_progress_series(const GlobalOptions& opts,
                        const std::string& config_path,
                        const std::string& task_text) {
  const auto task = spoofeval::parse_task(task_text);
  spoofeval::Platform platform(spoofeval::load_service_config(config_path));
  const auto series = platform.progress_series(task);
  if (json_format(opts)) {
    emit(opts, spoofeval::series_to_json(task, series));
  } else {
    std::string text;
    for (const auto& point : series) {
      text += "day " + spoofeval::format_utc_day(point.day);
      text += point.best ? " best " + fixed(*point.best, 4) : " best -";
      text += " submissions " + std::to_string(point.submissions) + "\n";
    }
    emit(opts, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  GlobalOptions opts;
  CommonInputs in;
  std::vector<double> explicit_coeffs;

  CLI::App app{"ASVspoof-style evaluation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", opts.seed, "Seed for randomized stages");
  app.add_option("--jobs", opts.jobs, "Worker threads (0 = default)");
  app.add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"human", "json"}))
      ->capture_default_str();
  app.add_option("--out", opts.out, "Write output here instead of stdout");

  const auto add_scores_keys = [&](CLI::App* cmd, bool scores_required) {
    auto* scores = cmd->add_option("--scores", in.scores_path, "Score file");
    if (scores_required) scores->required();
    cmd->add_option("--keys", in.keys_path, "Key file")->required();
    cmd->add_option("--phase", in.phase,
                    "Trial phase filter: progress|evaluation|hidden|all");
    cmd->add_flag("--lenient", in.lenient,
                  "Drop (instead of reject) scored trials without keys");
  };
  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Pooled and per-condition EER / min t-DCF report");
  add_scores_keys(evaluate, true);
  evaluate->add_option("--task", in.task, "Task: LA|PA|DF")->required();
  evaluate
      ->add_option("--coeffs", explicit_coeffs,
                   "Explicit cost coefficients: c0 c1 c2")
      ->expected(3);

  // eer
  auto* eer_cmd = app.add_subcommand("eer", "Equal error rate");
  add_scores_keys(eer_cmd, true);

  // tdcf
  auto* tdcf_cmd =
      app.add_subcommand("tdcf", "Normalized minimum tandem detection cost");
  add_scores_keys(tdcf_cmd, true);
  tdcf_cmd->add_option("--task", in.task, "Task: LA|PA (DF has no t-DCF)");
  tdcf_cmd
      ->add_option("--coeffs", explicit_coeffs,
                   "Explicit cost coefficients: c0 c1 c2")
      ->expected(3);
  double c0 = -1.0, c1 = -1.0, c2 = -1.0;
  tdcf_cmd->add_option("--c0", c0, "Cost coefficient c0");
  tdcf_cmd->add_option("--c1", c1, "Cost coefficient c1");
  tdcf_cmd->add_option("--c2", c2, "Cost coefficient c2");

  // significance
  std::string systems_dir;
  double alpha = 0.05;
  auto* significance = app.add_subcommand(
      "significance", "Pairwise Holm-Bonferroni significance matrix");
  significance->add_option("--systems", systems_dir, "Directory of score files")
      ->required();
  significance->add_option("--keys", in.keys_path, "Key file")->required();
  significance->add_option("--phase", in.phase, "Trial phase filter");
  significance->add_flag("--lenient", in.lenient, "Lenient alignment");
  significance->add_option("--alpha", alpha, "Family-wise error rate")
      ->capture_default_str();

  // extract lfcc|cqcc
  std::string io_in, io_out, extract_task = "LA";
  auto* extract = app.add_subcommand("extract", "Feature extraction");
  extract->require_subcommand(1);
  auto* extract_lfcc = extract->add_subcommand("lfcc", "LFCC front-end");
  auto* extract_cqcc = extract->add_subcommand("cqcc", "CQCC front-end");
  for (auto* cmd : {extract_lfcc, extract_cqcc}) {
    cmd->add_option("--in", io_in, "Input WAV (16-bit PCM mono)")->required();
    cmd->add_option("--out", io_out, "Output feature file")->required();
    cmd->add_option("--task", extract_task, "Task bandwidth preset: LA|PA|DF");
  }

  // channel mulaw|alaw
  bool narrowband = false;
  auto* channel = app.add_subcommand("channel", "Telephony codec simulation");
  channel->require_subcommand(1);
  auto* channel_mulaw = channel->add_subcommand("mulaw", "G.711 mu-law");
  auto* channel_alaw = channel->add_subcommand("alaw", "G.711 A-law");
  for (auto* cmd : {channel_mulaw, channel_alaw}) {
    cmd->add_option("--in", io_in, "Input WAV")->required();
    cmd->add_option("--out", io_out, "Output WAV")->required();
    cmd->add_flag("--narrowband", narrowband,
                  "8 kHz bandlimiting before companding");
  }

  // gmm-train
  std::vector<std::string> feature_paths;
  int components = 512;
  int max_iterations = 100;
  std::string init = "split";
  auto* gmm_train =
      app.add_subcommand("gmm-train", "Train a diagonal-covariance GMM");
  gmm_train->add_option("--features", feature_paths, "Feature files")
      ->required()
      ->expected(-1);
  gmm_train->add_option("--out", io_out, "Output model file")->required();
  gmm_train->add_option("--components", components, "Mixture components")
      ->capture_default_str();
  gmm_train->add_option("--max-iters", max_iterations, "EM iteration cap")
      ->capture_default_str();
  gmm_train->add_option("--init", init, "Initialization: split|random")
      ->check(CLI::IsMember({"split", "random"}))
      ->capture_default_str();

  // gmm-score
  std::string bona_model, spoof_model;
  auto* gmm_score =
      app.add_subcommand("gmm-score", "Log-likelihood-ratio scoring");
  gmm_score->add_option("--bona", bona_model, "Bonafide model")->required();
  gmm_score->add_option("--spoof", spoof_model, "Spoof model")->required();
  gmm_score->add_option("--features", feature_paths, "Feature files to score")
      ->required()
      ->expected(-1);

  // baseline
  std::string bona_dir, spoof_dir, trials_dir, front_end = "cqcc",
                                               baseline_task = "LA";
  auto* baseline =
      app.add_subcommand("baseline", "GMM baseline: train and score");
  baseline->add_option("--train-bona", bona_dir, "Bonafide training WAV dir")
      ->required();
  baseline->add_option("--train-spoof", spoof_dir, "Spoof training WAV dir")
      ->required();
  baseline->add_option("--trials", trials_dir, "Trial WAV dir")->required();
  baseline->add_option("--front-end", front_end, "Front-end: lfcc|cqcc")
      ->check(CLI::IsMember({"lfcc", "cqcc"}))
      ->capture_default_str();
  baseline->add_option("--task", baseline_task, "Task: LA|PA|DF")
      ->capture_default_str();
  baseline->add_option("--components", components, "Mixture components")
      ->capture_default_str();
  baseline->add_option("--max-iters", max_iterations, "EM iteration cap")
      ->capture_default_str();

  // serve
  std::string config_path, host = "0.0.0.0";
  int port_override = 0;
  auto* serve = app.add_subcommand("serve", "Run the submission platform");
  serve->add_option("--config", config_path, "Service configuration JSON")
      ->required();
  serve->add_option("--host", host, "Bind address")->capture_default_str();
  serve->add_option("--port", port_override,
                    "Override the configured port (> 0)");

  // progress-series
  std::string series_task;
  auto* progress = app.add_subcommand(
      "progress-series", "Per-day best primary metric from the service log");
  progress->add_option("--config", config_path, "Service configuration JSON")
      ->required();
  progress->add_option("--task", series_task, "Task: LA|PA|DF")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "spoofeval: " << e.what() << "\n";
    return 2;
  }

#ifdef _OPENMP
  if (opts.jobs > 0) {
    omp_set_num_threads(opts.jobs);
  }
#endif

  try {
    if (*evaluate) return run_evaluate(opts, in, explicit_coeffs);
    if (*eer_cmd) return run_eer(opts, in);
    if (*tdcf_cmd) {
      if (explicit_coeffs.empty() && c0 >= 0.0 && c1 >= 0.0 && c2 >= 0.0) {
        explicit_coeffs = {c0, c1, c2};
      }
      if (explicit_coeffs.empty() && in.task.empty()) {
        std::cerr << "spoofeval: tdcf needs --task or --c0/--c1/--c2\n";
        return 2;
      }
      return run_tdcf(opts, in, explicit_coeffs);
    }
    if (*significance)
      return run_significance(opts, in, systems_dir, alpha);
    if (*extract)
      return run_extract(opts, extract_cqcc->parsed(), io_in, io_out,
                         extract_task);
    if (*channel)
      return run_channel(opts, channel_alaw->parsed(), io_in, io_out,
                         narrowband);
    if (*gmm_train)
      return run_gmm_train(opts, feature_paths, io_out, components,
                           max_iterations, init);
    if (*gmm_score)
      return run_gmm_score(opts, bona_model, spoof_model, feature_paths);
    if (*baseline)
      return run_baseline(opts, bona_dir, spoof_dir, trials_dir, front_end,
                          baseline_task, components, max_iterations);
    if (*serve) return run_serve(config_path, host, port_override);
    if (*progress)
      return run_progress_series(opts, config_path, series_task);
  } catch (const Error& error) {
    std::cerr << "spoofeval: " << error.what() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "spoofeval: " << error.what() << "\n";
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}
