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

#ifndef SPOOFEVAL_GMM_HPP_
#define SPOOFEVAL_GMM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "spoofeval/error.hpp"
#include "spoofeval/features.hpp"

namespace spoofeval {

/// A diagonal-covariance Gaussian mixture.
struct GmmModel {
  std::size_t dim = 0;
  std::vector<double> weights;    // K, positive, summing to 1
  std::vector<double> means;      // K * dim, row-major
  std::vector<double> variances;  // K * dim, row-major, strictly positive

  std::size_t num_components() const { return weights.size(); }

  /// BadConfig / DegenerateVariance if the invariants do not hold
  /// (weight simplex to 1e-10, variances strictly positive).
  void validate() const;
};

/// EM training settings.  The defaults are 512 components grown by binary
/// splitting from the global Gaussian, a variance floor of 1e-3 times the
/// global per-dimension variance, and convergence at a relative
/// mean-log-likelihood improvement below 1e-5 (at most 100 iterations).
struct TrainConfig {
  std::size_t components = 512;
  std::size_t max_iterations = 100;
  double tolerance = 1e-5;
  double variance_floor_factor = 1e-3;
  std::uint64_t seed = 0;

  enum class Init {
    split,   // deterministic binary splitting from the global Gaussian
    random,  // seeded choice of training frames as initial means
  };
  Init init = Init::split;
};

/// Trains a diagonal-covariance GMM on the rows of `frames` with EM.
/// Deterministic given the config (the split initializer uses no randomness
/// at all).  Per-iteration mean log-likelihood is non-decreasing within
/// 1e-8.  TooFewFrames if there are fewer frames than components.
GmmModel em_train(const FeatureMatrix& frames, const TrainConfig& cfg);

/// As above, also recording the mean log-likelihood evaluated at each EM
/// iteration, one inner vector per training stage (the split initializer
/// refines between component doublings; each stage is monotone).
GmmModel em_train(const FeatureMatrix& frames, const TrainConfig& cfg,
                  std::vector<std::vector<double>>* stage_loglik);

/// Mean per-frame log-likelihood, (1/T) sum_t log sum_k w_k N(x_t; mu_k,
/// sigma_k^2), evaluated with log-sum-exp stability.  DimMismatch if the
/// frame width differs from the model dimension.
double loglik(const GmmModel& model, const FeatureMatrix& frames);

/// Two-class log-likelihood ratio: loglik(bona) - loglik(spoof).  Higher
/// means more bonafide.
double llr_score(const GmmModel& bona, const GmmModel& spoof,
                 const FeatureMatrix& frames);

/// Binary model container: magic "SPGM", component and dimension counts as
/// 32-bit little-endian unsigned integers, then weights (K), means (K*D)
/// and variances (K*D) as IEEE-754 64-bit little-endian floats.
void write_gmm_file(const std::string& path, const GmmModel& model);
GmmModel read_gmm_file(const std::string& path);

}  // namespace spoofeval

#endif  // SPOOFEVAL_GMM_HPP_
