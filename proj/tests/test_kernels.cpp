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
// The parallel kernels and their serial reference implementations must be
// bitwise identical: reductions are blocked with a fixed block size and the
// partials are folded in block order, so the arithmetic is the same whether
// blocks run on one thread or many.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spoofeval/features.hpp"
#include "spoofeval/gmm.hpp"
#include "spoofeval/parallel.hpp"
#include "spoofeval/reference.hpp"

using namespace spoofeval;

namespace {

struct ThreadCountGuard {
  explicit ThreadCountGuard(int n) {
#ifdef _OPENMP
    previous = omp_get_max_threads();
    omp_set_num_threads(n);
#else
    (void)n;
    previous = 1;
#endif
  }
  ~ThreadCountGuard() {
#ifdef _OPENMP
    omp_set_num_threads(previous);
#endif
  }
  int previous;
};

AudioSignal noise_audio(double seconds, std::uint64_t seed) {
  AudioSignal audio;
  audio.sample_rate = 16000;
  audio.samples.resize(static_cast<std::size_t>(seconds * 16000));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.4, 0.4);
  for (auto& s : audio.samples) s = dist(rng);
  return audio;
}

FeatureMatrix random_frames(std::size_t rows, std::size_t cols,
                            std::uint64_t seed) {
  FeatureMatrix frames(rows, cols);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.5);
  for (auto& v : frames.values) v = gauss(rng);
  return frames;
}

bool bitwise_equal(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] != b.values[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("blocked_reduce folds partials identically in both modes") {
  // A sum whose result depends on association order: many magnitudes.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(1e-9, 1e9);
  std::vector<double> xs(100001);
  for (auto& x : xs) x = dist(rng);

  auto block = [&](std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += xs[i];
    return acc;
  };
  auto merge = [](double& into, double part) { into += part; };

  const double serial = blocked_reduce(xs.size(), 0.0, block, merge, false);
  for (int threads : {1, 2, 3, 7}) {
    ThreadCountGuard guard(threads);
    const double parallel = blocked_reduce(xs.size(), 0.0, block, merge, true);
    REQUIRE(parallel == serial);  // bitwise
  }
}

TEST_CASE("lfcc: serial reference equals parallel bitwise") {
  const auto audio = noise_audio(2.0, 99);
  const auto cfg = default_lfcc_config(Task::la);
  const auto serial = reference::lfcc(audio, cfg);
  for (int threads : {1, 2, 5}) {
    ThreadCountGuard guard(threads);
    const auto parallel = lfcc(audio, cfg);
    REQUIRE(bitwise_equal(serial, parallel));
  }
}

TEST_CASE("cqcc: serial reference equals parallel bitwise") {
  const auto audio = noise_audio(1.0, 100);
  const auto cfg = default_cqcc_config(Task::la);
  const auto serial = reference::cqcc(audio, cfg);
  for (int threads : {1, 2, 5}) {
    ThreadCountGuard guard(threads);
    const auto parallel = cqcc(audio, cfg);
    REQUIRE(bitwise_equal(serial, parallel));
  }
}

TEST_CASE("loglik: serial reference equals parallel bitwise") {
  const auto train = random_frames(900, 12, 7);
  TrainConfig cfg;
  cfg.components = 16;
  cfg.max_iterations = 3;
  const auto model = em_train(train, cfg);

  const auto probe = random_frames(3000, 12, 8);
  const double serial = reference::loglik(model, probe);
  for (int threads : {1, 2, 5}) {
    ThreadCountGuard guard(threads);
    const double parallel = loglik(model, probe);
    REQUIRE(parallel == serial);  // bitwise
  }
}

TEST_CASE("em_train: serial reference equals parallel bitwise") {
  const auto frames = random_frames(1200, 6, 9);
  for (auto init : {TrainConfig::Init::split, TrainConfig::Init::random}) {
    TrainConfig cfg;
    cfg.components = 8;
    cfg.max_iterations = 5;
    cfg.seed = 17;
    cfg.init = init;
    const auto serial = reference::em_train(frames, cfg);
    for (int threads : {2, 5}) {
      ThreadCountGuard guard(threads);
      const auto parallel = em_train(frames, cfg);
      REQUIRE(parallel.weights == serial.weights);
      REQUIRE(parallel.means == serial.means);
      REQUIRE(parallel.variances == serial.variances);
    }
  }
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(10007, 0);
  ThreadCountGuard guard(4);
  parallel_for(hits.size(), true, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) REQUIRE(h == 1);
}
