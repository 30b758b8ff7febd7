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

#ifndef SPOOFEVAL_STATS_HPP
#define SPOOFEVAL_STATS_HPP

#include <span>
#include <string>
#include <vector>

#include "spoofeval/trialdata.hpp"

namespace spoofeval {

/// One system's operating point at its EER, with the trial counts the
/// variance estimate needs.
struct SystemResult {
  std::string system_id;
  double eer = 0.0;
  double pmiss = 0.0;
  double pfa = 0.0;
  std::size_t n_bona = 0;
  std::size_t n_spoof = 0;
};

struct ZTestResult {
  double pvalue = 1.0;
  double z = 0.0;
  bool degenerate = false;  // both variances zero with unequal HTERs
};

/// Pairwise decisions over all systems after joint Holm-Bonferroni
/// correction.  Symmetric, with an all-false diagonal.
struct SignificanceMatrix {
  std::vector<std::string> system_ids;
  std::vector<std::vector<double>> pvalues;
  std::vector<std::vector<char>> significant;  // 0/1
  double alpha = 0.05;
};

/// Standard normal CDF, computed as erfc(-x / sqrt(2)) / 2.
double normal_cdf(double x);

/// Two-sided z-test on the half total error rates of two independently
/// evaluated systems:
///   HTER = (pmiss + pfa) / 2
///   var  = (pmiss(1-pmiss)/n_bona + pfa(1-pfa)/n_spoof) / 4
///   Z    = |HTER_a - HTER_b| / sqrt(var_a + var_b)
/// Z = 0 (including both variances zero with equal HTERs) gives p = 1; both
/// variances zero with different HTERs gives p = 0 with the degenerate flag
/// set.
ZTestResult hter_z_test(const SystemResult& a, const SystemResult& b);

/// Holm-Bonferroni step-down: sort p ascending and reject p_(k) while
/// p_(k) < alpha / (m - k + 1), stopping at the first failure.  Flags are
/// returned in the original order.
std::vector<char> holm_bonferroni(std::span<const double> pvalues,
                                  double alpha);

/// All m(m-1)/2 pairwise tests corrected jointly.
SignificanceMatrix significance_matrix(const std::vector<SystemResult>& systems,
                                       double alpha = 0.05);

/// Grid rendering with system ids on both axes; significant cells print
/// as a filled square, others as a middle dot.
std::string format_matrix_text(const SignificanceMatrix& matrix);

/// One record per unordered pair: sys_a, sys_b, p, significant.
std::string matrix_to_json(const SignificanceMatrix& matrix);

/// Builds a SystemResult from labeled scores: EER plus its operating point
/// (pmiss = pfa = EER there) and the class counts.
SystemResult system_result_from_scores(const std::string& system_id,
                                       std::span<const double> bona,
                                       std::span<const double> spoof);

}  // namespace spoofeval

#endif  // SPOOFEVAL_STATS_HPP
