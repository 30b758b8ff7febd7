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

#ifndef SPOOFEVAL_METRICS_HPP
#define SPOOFEVAL_METRICS_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spoofeval/trialdata.hpp"

namespace spoofeval {

/// Detection error trade-off curve: the full set of empirical operating
/// points as the decision threshold sweeps.
///
/// Convention: a trial is accepted as bonafide when score >= threshold, so
///   pmiss(t) = fraction of bonafide scores <  t   (non-decreasing in t)
///   pfa(t)   = fraction of spoof    scores >= t   (non-increasing in t)
/// The first point is always (pmiss=0, pfa=1) and the last (pmiss=1, pfa=0).
struct DetCurve {
  std::vector<double> thresholds;  // ascending
  std::vector<double> pmiss;
  std::vector<double> pfa;

  std::size_t size() const { return thresholds.size(); }
};

/// Cost coefficients of the simplified tandem detection cost
///   t-DCF = min over t of { c0 + c1 * pmiss(t) + c2 * pfa(t) }.
/// c0 is the ASV floor: the cost of an error-free detector.
struct TdcfCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  Task task = Task::la;
  TrialPhase phase = TrialPhase::evaluation;

  bool valid() const {
    return c0 >= 0.0 && c1 >= 0.0 && c2 >= 0.0 && (c0 + c1 + c2) > 0.0;
  }
};

/// Built-in coefficient sets for the LA and PA tasks, one per phase.
/// Throws for the DF task, which is evaluated by EER alone.
TdcfCoefficients default_coefficients(Task task, TrialPhase phase);

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

struct TdcfResult {
  double value = 0.0;
  double threshold = 0.0;
};

struct AsvOperatingPoint {
  double threshold = 0.0;
  double pmiss_asv = 0.0;
  double pfa_asv = 0.0;
  std::optional<double> pfa_spoof_asv;  // absent when no spoof scores given
  double eer_tar_non = 0.0;
};

struct ConditionReport {
  std::size_t n_bona = 0;
  std::size_t n_spoof = 0;
  std::optional<double> eer;       // absent when the condition was skipped
  std::optional<double> min_tdcf;  // normalized; absent for DF or skipped
  bool skipped = false;            // one class empty in this condition
};

/// Pooled and per-condition results.  `pooled_min_tdcf` and the per-condition
/// t-DCF values are normalized by the non-informative-detector cost
/// c0 + min(c1, c2); with the built-in coefficient sets the normalizer is 1.
struct EvalReport {
  std::optional<double> pooled_min_tdcf;
  double pooled_eer = 0.0;
  std::size_t n_bona = 0;
  std::size_t n_spoof = 0;
  std::map<std::string, ConditionReport> per_condition;
};

/// One operating point per distinct score value plus the two degenerate
/// endpoints.  Throws EmptyClass when either class is empty.
DetCurve det_points(std::span<const double> bona, std::span<const double> spoof);
DetCurve det_points(const LabeledScores& labeled);

/// Equal error rate: the crossing pmiss = pfa of the piecewise-linear
/// interpolation between adjacent DET operating points.  The returned
/// threshold is the interpolated t at the crossing.
EerResult eer(std::span<const double> bona, std::span<const double> spoof);
EerResult eer(const LabeledScores& labeled);

/// Minimum of c0 + c1*pmiss(t) + c2*pfa(t) over all operating points (the
/// objective is piecewise constant, so the minimum is attained on the finite
/// point set).  Ties resolve to the smallest t.
TdcfResult min_tdcf(std::span<const double> bona, std::span<const double> spoof,
                    const TdcfCoefficients& coeffs);
TdcfResult min_tdcf(const LabeledScores& labeled,
                    const TdcfCoefficients& coeffs);

/// value / (c0 + min(c1, c2)).  Throws ZeroNormalizer when the denominator
/// is zero.
double normalize_tdcf(double value, const TdcfCoefficients& coeffs);

/// Fixes the ASV operating point at the target-vs-nontarget EER threshold,
/// computed from data pooled across bonafide segments, and reports the
/// empirical rates of all three populations there.
AsvOperatingPoint asv_operating_point(std::span<const double> target,
                                      std::span<const double> nontarget,
                                      std::span<const double> spoof);

/// Pooled metrics plus one entry per condition.  min t-DCF is computed only
/// when coefficients are supplied (LA/PA); EER always.  Conditions with an
/// empty class are reported as skipped, never fatal.
EvalReport evaluate(const LabeledScores& labeled,
                    const std::optional<TdcfCoefficients>& coeffs);

/// Flat key-value rendering, t-DCF with 4 decimals and EER% with 2.
std::string format_report_text(const EvalReport& report);

/// Machine-readable rendering with the same rounding; one record per
/// condition with fields condition, min_tdcf, eer, n_bona, n_spoof.
std::string report_to_json(const EvalReport& report);

}  // namespace spoofeval

#endif  // SPOOFEVAL_METRICS_HPP
