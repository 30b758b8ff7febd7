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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spoofeval/stats.hpp"
#include "support/oracles.hpp"

using namespace spoofeval;

namespace {

SystemResult make_system(const std::string& id, double pmiss, double pfa,
                         std::size_t n_bona, std::size_t n_spoof) {
  SystemResult s;
  s.system_id = id;
  s.eer = (pmiss + pfa) / 2.0;
  s.pmiss = pmiss;
  s.pfa = pfa;
  s.n_bona = n_bona;
  s.n_spoof = n_spoof;
  return s;
}

}  // namespace

TEST_CASE("normal cdf matches quadrature oracle") {
  for (double x : {-6.0, -3.0, -1.0, -0.1, 0.0, 0.33, 1.0, 2.5, 6.0}) {
    CHECK(std::abs(normal_cdf(x) - oracles::normal_cdf(x)) <= 1e-9);
  }
  CHECK(normal_cdf(0.0) == 0.5);
}

TEST_CASE("z-test matches a hand-computed case") {
  // HTER_a = 0.10, HTER_b = 0.16; var_a = (.08*.92/500 + .12*.88/400)/4,
  // var_b = (.2*.8/500 + .12*.88/400)/4.
  const auto a = make_system("a", 0.08, 0.12, 500, 400);
  const auto b = make_system("b", 0.20, 0.12, 500, 400);
  const double var_a = (0.08 * 0.92 / 500 + 0.12 * 0.88 / 400) / 4.0;
  const double var_b = (0.20 * 0.80 / 500 + 0.12 * 0.88 / 400) / 4.0;
  const double z = std::abs(0.10 - 0.16) / std::sqrt(var_a + var_b);
  const double p = 2.0 * (1.0 - oracles::normal_cdf(z));

  const auto result = hter_z_test(a, b);
  CHECK(result.z == doctest::Approx(z).epsilon(1e-12));
  CHECK(std::abs(result.pvalue - p) <= 1e-6);
  CHECK_FALSE(result.degenerate);
}

TEST_CASE("z-test oracle equivalence on random systems") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> rate(0.01, 0.6);
  std::uniform_int_distribution<std::size_t> count(50, 5000);
  for (int i = 0; i < 200; ++i) {
    const auto a = make_system("a", rate(rng), rate(rng), count(rng), count(rng));
    const auto b = make_system("b", rate(rng), rate(rng), count(rng), count(rng));
    const auto result = hter_z_test(a, b);
    const double var_a =
        (a.pmiss * (1 - a.pmiss) / a.n_bona + a.pfa * (1 - a.pfa) / a.n_spoof) /
        4.0;
    const double var_b =
        (b.pmiss * (1 - b.pmiss) / b.n_bona + b.pfa * (1 - b.pfa) / b.n_spoof) /
        4.0;
    const double hter_a = (a.pmiss + a.pfa) / 2.0;
    const double hter_b = (b.pmiss + b.pfa) / 2.0;
    const double z = std::abs(hter_a - hter_b) / std::sqrt(var_a + var_b);
    const double p = 2.0 * (1.0 - oracles::normal_cdf(z));
    CHECK(std::abs(result.pvalue - p) <= 1e-6);
  }
}

TEST_CASE("z-test degenerate branches") {
  SUBCASE("identical systems with zero variance: p = 1") {
    const auto a = make_system("a", 0.0, 0.0, 100, 100);
    const auto b = make_system("b", 0.0, 0.0, 100, 100);
    const auto result = hter_z_test(a, b);
    CHECK(result.pvalue == 1.0);
    CHECK_FALSE(result.degenerate);
  }
  SUBCASE("different HTERs with zero variance: p = 0, flagged") {
    const auto a = make_system("a", 0.0, 0.0, 100, 100);
    const auto b = make_system("b", 1.0, 1.0, 100, 100);
    const auto result = hter_z_test(a, b);
    CHECK(result.pvalue == 0.0);
    CHECK(result.degenerate);
    CHECK(std::isinf(result.z));
  }
  SUBCASE("input validation") {
    auto bad = make_system("a", 1.5, 0.0, 100, 100);
    CHECK_THROWS_AS(hter_z_test(bad, make_system("b", 0.1, 0.1, 10, 10)),
                    Error);
    auto empty = make_system("a", 0.1, 0.1, 0, 100);
    CHECK_THROWS_AS(hter_z_test(empty, make_system("b", 0.1, 0.1, 10, 10)),
                    Error);
  }
}

TEST_CASE("Holm-Bonferroni fixtures") {
  SUBCASE("all three reject") {
    const auto flags = holm_bonferroni(std::vector<double>{0.01, 0.02, 0.04},
                                       0.05);
    CHECK(flags == std::vector<char>{1, 1, 1});
  }
  SUBCASE("step-down stops at the first failure") {
    const auto flags = holm_bonferroni(std::vector<double>{0.01, 0.03, 0.04},
                                       0.05);
    CHECK(flags == std::vector<char>{1, 0, 0});
  }
  SUBCASE("original order is preserved") {
    const auto flags = holm_bonferroni(std::vector<double>{0.04, 0.01, 0.03},
                                       0.05);
    CHECK(flags == std::vector<char>{0, 1, 0});
  }
  SUBCASE("empty input") {
    CHECK(holm_bonferroni(std::vector<double>{}, 0.05).empty());
  }
  SUBCASE("a failure masks smaller later thresholds") {
    // Sorted: 0.02 < 0.05/3? no (0.0167) -> stop immediately; nothing
    // rejected even though 0.02 < 0.05.
    const auto flags = holm_bonferroni(std::vector<double>{0.02, 0.03, 0.04},
                                       0.05);
    CHECK(flags == std::vector<char>{0, 0, 0});
  }
}

TEST_CASE("significance matrix structure and correction") {
  const auto a = make_system("sysA", 0.02, 0.02, 2000, 2000);
  const auto b = make_system("sysB", 0.02, 0.02, 2000, 2000);
  const auto c = make_system("sysC", 0.30, 0.30, 2000, 2000);
  const auto matrix = significance_matrix({a, b, c}, 0.05);

  REQUIRE(matrix.system_ids.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(matrix.pvalues[i][i] == 1.0);
    CHECK_FALSE(matrix.significant[i][i]);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(matrix.pvalues[i][j] == matrix.pvalues[j][i]);
      CHECK(matrix.significant[i][j] == matrix.significant[j][i]);
    }
  }
  // Identical systems never differ; the far system differs from both.
  CHECK_FALSE(matrix.significant[0][1]);
  CHECK(matrix.significant[0][2]);
  CHECK(matrix.significant[1][2]);
}

TEST_CASE("identical systems give p = 1 everywhere") {
  std::vector<SystemResult> systems;
  for (int i = 0; i < 4; ++i) {
    systems.push_back(make_system("s" + std::to_string(i), 0.1, 0.2, 300, 300));
  }
  const auto matrix = significance_matrix(systems, 0.05);
  for (const auto& row : matrix.pvalues) {
    for (double p : row) CHECK(p == 1.0);
  }
  for (const auto& row : matrix.significant) {
    for (char s : row) CHECK_FALSE(s);
  }
}

TEST_CASE("alpha monotonicity on random system sets") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> rate(0.01, 0.5);
  std::uniform_int_distribution<std::size_t> count(100, 3000);
  std::uniform_int_distribution<int> m(2, 6);
  for (int round = 0; round < 100; ++round) {
    std::vector<SystemResult> systems;
    const int n = m(rng);
    for (int i = 0; i < n; ++i) {
      systems.push_back(make_system("s" + std::to_string(i), rate(rng),
                                    rate(rng), count(rng), count(rng)));
    }
    const auto strict = significance_matrix(systems, 0.01);
    const auto loose = significance_matrix(systems, 0.10);
    for (std::size_t i = 0; i < systems.size(); ++i) {
      for (std::size_t j = 0; j < systems.size(); ++j) {
        // Everything significant at the stricter level stays significant
        // at the looser one; p-values themselves are alpha-independent.
        if (strict.significant[i][j]) CHECK(loose.significant[i][j]);
        CHECK(strict.pvalues[i][j] == loose.pvalues[i][j]);
      }
    }
  }
}

TEST_CASE("matrix needs at least two systems") {
  CHECK_THROWS_AS(significance_matrix({}, 0.05), Error);
  CHECK_THROWS_AS(significance_matrix({make_system("a", 0.1, 0.1, 10, 10)},
                                      0.05),
                  Error);
}

TEST_CASE("matrix renderings") {
  const auto a = make_system("A", 0.02, 0.02, 2000, 2000);
  const auto b = make_system("B", 0.30, 0.30, 2000, 2000);
  const auto matrix = significance_matrix({a, b}, 0.05);

  const std::string text = format_matrix_text(matrix);
  CHECK(text ==
        "  A B\n"
        "A · ■\n"
        "B ■ ·\n");

  const std::string json = matrix_to_json(matrix);
  CHECK(json.find("\"alpha\": 0.05") != std::string::npos);
  CHECK(json.find("\"sys_a\": \"A\"") != std::string::npos);
  CHECK(json.find("\"significant\": true") != std::string::npos);
  CHECK(json.back() == '\n');
}

TEST_CASE("system result derives the EER operating point") {
  const std::vector<double> bona{0.9, 0.8, 0.7, 0.6};
  const std::vector<double> spoof{0.75, 0.3, 0.2, 0.1};
  const auto s = system_result_from_scores("sys", bona, spoof);
  CHECK(s.system_id == "sys");
  CHECK(s.eer == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.pmiss == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.pfa == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s.n_bona == 4);
  CHECK(s.n_spoof == 4);
}
