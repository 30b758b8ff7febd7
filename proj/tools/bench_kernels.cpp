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
// Parallel kernels vs their serial reference implementations.  Run with
// --benchmark_filter=... to select; OMP_NUM_THREADS controls the parallel
// side.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "spoofeval/audio.hpp"
#include "spoofeval/features.hpp"
#include "spoofeval/gmm.hpp"
#include "spoofeval/reference.hpp"

namespace {

spoofeval::AudioSignal make_audio(double seconds) {
  spoofeval::AudioSignal audio;
  audio.sample_rate = 16000;
  const std::size_t n = static_cast<std::size_t>(seconds * 16000.0);
  audio.samples.resize(n);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> noise(-0.05, 0.05);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / 16000.0;
    audio.samples[i] = 0.4 * std::sin(2.0 * M_PI * 440.0 * t) + noise(rng);
  }
  return audio;
}

spoofeval::FeatureMatrix make_frames(std::size_t rows, std::size_t cols) {
  spoofeval::FeatureMatrix frames(rows, cols);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (auto& v : frames.values) v = gauss(rng);
  return frames;
}

spoofeval::GmmModel make_model(std::size_t components, std::size_t dim) {
  spoofeval::TrainConfig cfg;
  cfg.components = static_cast<int>(components);
  cfg.max_iterations = 2;
  return spoofeval::em_train(make_frames(components * 40, dim), cfg);
}

void BM_LfccParallel(benchmark::State& state) {
  const auto audio = make_audio(static_cast<double>(state.range(0)));
  const auto cfg = spoofeval::default_lfcc_config(spoofeval::Task::la);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spoofeval::lfcc(audio, cfg));
  }
}
BENCHMARK(BM_LfccParallel)->Arg(5)->Arg(20);

void BM_LfccSerial(benchmark::State& state) {
  const auto audio = make_audio(static_cast<double>(state.range(0)));
  const auto cfg = spoofeval::default_lfcc_config(spoofeval::Task::la);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spoofeval::reference::lfcc(audio, cfg));
  }
}
BENCHMARK(BM_LfccSerial)->Arg(5)->Arg(20);

void BM_CqccParallel(benchmark::State& state) {
  const auto audio = make_audio(static_cast<double>(state.range(0)));
  const auto cfg = spoofeval::default_cqcc_config(spoofeval::Task::la);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spoofeval::cqcc(audio, cfg));
  }
}
BENCHMARK(BM_CqccParallel)->Arg(5)->Arg(20);

void BM_CqccSerial(benchmark::State& state) {
  const auto audio = make_audio(static_cast<double>(state.range(0)));
  const auto cfg = spoofeval::default_cqcc_config(spoofeval::Task::la);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spoofeval::reference::cqcc(audio, cfg));
  }
}
BENCHMARK(BM_CqccSerial)->Arg(5)->Arg(20);

void BM_LoglikParallel(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)), 20);
  const auto frames = make_frames(3000, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spoofeval::loglik(model, frames));
  }
}
BENCHMARK(BM_LoglikParallel)->Arg(8)->Arg(64);

void BM_LoglikSerial(benchmark::State& state) {
  const auto model = make_model(static_cast<std::size_t>(state.range(0)), 20);
  const auto frames = make_frames(3000, 20);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spoofeval::reference::loglik(model, frames));
  }
}
BENCHMARK(BM_LoglikSerial)->Arg(8)->Arg(64);

void BM_EmTrainParallel(benchmark::State& state) {
  const auto frames = make_frames(4000, 20);
  spoofeval::TrainConfig cfg;
  cfg.components = static_cast<int>(state.range(0));
  cfg.max_iterations = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spoofeval::em_train(frames, cfg));
  }
}
BENCHMARK(BM_EmTrainParallel)->Arg(8)->Arg(32);

void BM_EmTrainSerial(benchmark::State& state) {
  const auto frames = make_frames(4000, 20);
  spoofeval::TrainConfig cfg;
  cfg.components = static_cast<int>(state.range(0));
  cfg.max_iterations = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spoofeval::reference::em_train(frames, cfg));
  }
}
BENCHMARK(BM_EmTrainSerial)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
