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

#include "spoofeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "spoofeval/metrics.hpp"

namespace spoofeval {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

ZTestResult hter_z_test(const SystemResult& a, const SystemResult& b) {
  auto check = [](const SystemResult& s) {
    if (s.n_bona < 1 || s.n_spoof < 1) {
      fail(ErrorKind::bad_config,
           "system " + s.system_id + " has empty trial counts");
    }
    for (double r : {s.pmiss, s.pfa}) {
      if (!(r >= 0.0 && r <= 1.0)) {
        fail(ErrorKind::bad_config,
             "system " + s.system_id + " has a rate outside [0, 1]");
      }
    }
  };
  check(a);
  check(b);

  auto variance = [](const SystemResult& s) {
    return (s.pmiss * (1.0 - s.pmiss) / static_cast<double>(s.n_bona) +
            s.pfa * (1.0 - s.pfa) / static_cast<double>(s.n_spoof)) /
           4.0;
  };
  double hter_a = (a.pmiss + a.pfa) / 2.0;
  double hter_b = (b.pmiss + b.pfa) / 2.0;
  double var = variance(a) + variance(b);
  double diff = std::fabs(hter_a - hter_b);

  ZTestResult result;
  if (var == 0.0) {
    if (diff == 0.0) {
      result.pvalue = 1.0;
    } else {
      result.pvalue = 0.0;
      result.z = std::numeric_limits<double>::infinity();
      result.degenerate = true;
    }
    return result;
  }
  result.z = diff / std::sqrt(var);
  result.pvalue = 2.0 * (1.0 - normal_cdf(result.z));
  return result;
}

std::vector<char> holm_bonferroni(std::span<const double> pvalues,
                                  double alpha) {
  const std::size_t m = pvalues.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return pvalues[i] < pvalues[j];
  });

  std::vector<char> reject(m, 0);
  for (std::size_t k = 0; k < m; ++k) {
    double threshold = alpha / static_cast<double>(m - k);
    if (!(pvalues[order[k]] < threshold)) break;
    reject[order[k]] = 1;
  }
  return reject;
}

SignificanceMatrix significance_matrix(const std::vector<SystemResult>& systems,
                                       double alpha) {
  const std::size_t m = systems.size();
  if (m < 2) fail(ErrorKind::bad_config, "need at least 2 systems");

  SignificanceMatrix matrix;
  matrix.alpha = alpha;
  matrix.system_ids.reserve(m);
  for (const auto& s : systems) matrix.system_ids.push_back(s.system_id);
  matrix.pvalues.assign(m, std::vector<double>(m, 1.0));
  matrix.significant.assign(m, std::vector<char>(m, 0));

  std::vector<double> flat;
  flat.reserve(m * (m - 1) / 2);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      flat.push_back(hter_z_test(systems[i], systems[j]).pvalue);

  std::vector<char> reject = holm_bonferroni(flat, alpha);

  std::size_t k = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j, ++k) {
      matrix.pvalues[i][j] = matrix.pvalues[j][i] = flat[k];
      matrix.significant[i][j] = matrix.significant[j][i] = reject[k];
    }
  }
  return matrix;
}

std::string format_matrix_text(const SignificanceMatrix& matrix) {
  std::size_t width = 0;
  for (const auto& id : matrix.system_ids) width = std::max(width, id.size());

  std::string out;
  out.append(width, ' ');
  for (const auto& id : matrix.system_ids) {
    out += ' ';
    out += id;
  }
  out += '\n';
  for (std::size_t i = 0; i < matrix.system_ids.size(); ++i) {
    const auto& id = matrix.system_ids[i];
    out.append(width - id.size(), ' ');
    out += id;
    for (std::size_t j = 0; j < matrix.system_ids.size(); ++j) {
      // Center the glyph under each column label.
      std::size_t col = matrix.system_ids[j].size();
      std::size_t left = 1 + col / 2;
      std::size_t right = col - col / 2 - 1;
      out.append(left, ' ');
      out += matrix.significant[i][j] ? "■" : "·";
      out.append(right, ' ');
    }
    out += '\n';
  }
  return out;
}

std::string matrix_to_json(const SignificanceMatrix& matrix) {
  nlohmann::json j;
  j["alpha"] = matrix.alpha;
  j["systems"] = matrix.system_ids;
  j["pairs"] = nlohmann::json::array();
  for (std::size_t i = 0; i < matrix.system_ids.size(); ++i) {
    for (std::size_t col = i + 1; col < matrix.system_ids.size(); ++col) {
      nlohmann::json pair;
      pair["sys_a"] = matrix.system_ids[i];
      pair["sys_b"] = matrix.system_ids[col];
      pair["p"] = matrix.pvalues[i][col];
      pair["significant"] = static_cast<bool>(matrix.significant[i][col]);
      j["pairs"].push_back(std::move(pair));
    }
  }
  return j.dump(2) + "\n";
}

SystemResult system_result_from_scores(const std::string& system_id,
                                       std::span<const double> bona,
                                       std::span<const double> spoof) {
  EerResult e = eer(bona, spoof);
  SystemResult result;
  result.system_id = system_id;
  result.eer = e.eer;
  // At the EER operating point the two rates coincide by construction.
  result.pmiss = e.eer;
  result.pfa = e.eer;
  result.n_bona = bona.size();
  result.n_spoof = spoof.size();
  return result;
}

}  // namespace spoofeval
