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

#include "spoofeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

namespace spoofeval {

TdcfCoefficients default_coefficients(Task task, TrialPhase phase) {
  if (task == Task::df) {
    fail(ErrorKind::bad_config,
         "the DF task is evaluated by EER and has no t-DCF coefficients");
  }
  if (phase == TrialPhase::hidden) {
    fail(ErrorKind::bad_config, "no coefficient set for the hidden subset");
  }
  TdcfCoefficients c;
  c.task = task;
  c.phase = phase;
  if (task == Task::la) {
    if (phase == TrialPhase::progress) {
      c.c0 = 0.1588; c.c1 = 2.1007; c.c2 = 0.8412;
    } else {
      c.c0 = 0.1847; c.c1 = 2.0173; c.c2 = 0.8153;
    }
  } else {
    if (phase == TrialPhase::progress) {
      c.c0 = 0.1363; c.c1 = 1.6345; c.c2 = 0.8637;
    } else {
      c.c0 = 0.1291; c.c1 = 1.6800; c.c2 = 0.8709;
    }
  }
  return c;
}

namespace {

// A sentinel strictly below (or above) v, preferring the readable v -/+ 1.
double below(double v) {
  double s = v - 1.0;
  return s < v ? s : std::nextafter(v, -std::numeric_limits<double>::infinity());
}

double above(double v) {
  double s = v + 1.0;
  return s > v ? s : std::nextafter(v, std::numeric_limits<double>::infinity());
}

}  // namespace

DetCurve det_points(std::span<const double> bona,
                    std::span<const double> spoof) {
  if (bona.empty() || spoof.empty()) {
    fail(ErrorKind::empty_class,
         bona.empty() ? "no bonafide scores" : "no spoof scores");
  }
  std::vector<double> b(bona.begin(), bona.end());
  std::vector<double> s(spoof.begin(), spoof.end());
  std::sort(b.begin(), b.end());
  std::sort(s.begin(), s.end());

  std::vector<double> values;
  values.reserve(b.size() + s.size());
  std::merge(b.begin(), b.end(), s.begin(), s.end(),
             std::back_inserter(values));
  values.erase(std::unique(values.begin(), values.end()), values.end());

  const double nb = static_cast<double>(b.size());
  const double ns = static_cast<double>(s.size());

  DetCurve curve;
  curve.thresholds.reserve(values.size() + 2);
  curve.pmiss.reserve(values.size() + 2);
  curve.pfa.reserve(values.size() + 2);

  auto push = [&](double t) {
    auto nb_below = static_cast<double>(
        std::lower_bound(b.begin(), b.end(), t) - b.begin());
    auto ns_below = static_cast<double>(
        std::lower_bound(s.begin(), s.end(), t) - s.begin());
    curve.thresholds.push_back(t);
    curve.pmiss.push_back(nb_below / nb);
    curve.pfa.push_back((ns - ns_below) / ns);
  };

  push(below(values.front()));  // accepts everything: (0, 1)
  for (double v : values) push(v);
  push(above(values.back()));  // rejects everything: (1, 0)
  return curve;
}

DetCurve det_points(const LabeledScores& labeled) {
  return det_points(labeled.bona_scores(), labeled.spoof_scores());
}

EerResult eer(std::span<const double> bona, std::span<const double> spoof) {
  DetCurve curve = det_points(bona, spoof);
  // pmiss - pfa runs from -1 to +1 and is non-decreasing along the curve;
  // the EER sits at its zero crossing.
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double d = curve.pmiss[i] - curve.pfa[i];
    if (d < 0.0) continue;
    if (d == 0.0) return {curve.pmiss[i], curve.thresholds[i]};
    // d went negative -> positive between i-1 and i; interpolate.  i >= 1
    // because the first point is (0, 1) with d = -1.
    double d0 = curve.pmiss[i - 1] - curve.pfa[i - 1];
    double t = -d0 / (d - d0);
    double at_m = curve.pmiss[i - 1] + t * (curve.pmiss[i] - curve.pmiss[i - 1]);
    double at_f = curve.pfa[i - 1] + t * (curve.pfa[i] - curve.pfa[i - 1]);
    double threshold =
        curve.thresholds[i - 1] +
        t * (curve.thresholds[i] - curve.thresholds[i - 1]);
    return {0.5 * (at_m + at_f), threshold};
  }
  // Unreachable: the last point has d = +1.
  fail(ErrorKind::bad_config, "DET curve without an EER crossing");
}

EerResult eer(const LabeledScores& labeled) {
  return eer(labeled.bona_scores(), labeled.spoof_scores());
}

TdcfResult min_tdcf(std::span<const double> bona,
                    std::span<const double> spoof,
                    const TdcfCoefficients& coeffs) {
  if (!coeffs.valid()) {
    fail(ErrorKind::bad_config, "invalid t-DCF coefficients");
  }
  DetCurve curve = det_points(bona, spoof);
  TdcfResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double cost =
        coeffs.c0 + coeffs.c1 * curve.pmiss[i] + coeffs.c2 * curve.pfa[i];
    if (cost < best.value) {
      best.value = cost;
      best.threshold = curve.thresholds[i];
    }
  }
  return best;
}

TdcfResult min_tdcf(const LabeledScores& labeled,
                    const TdcfCoefficients& coeffs) {
  return min_tdcf(labeled.bona_scores(), labeled.spoof_scores(), coeffs);
}

double normalize_tdcf(double value, const TdcfCoefficients& coeffs) {
  double normalizer = coeffs.c0 + std::min(coeffs.c1, coeffs.c2);
  if (normalizer == 0.0) {
    fail(ErrorKind::zero_normalizer, "c0 + min(c1, c2) is zero");
  }
  return value / normalizer;
}

AsvOperatingPoint asv_operating_point(std::span<const double> target,
                                      std::span<const double> nontarget,
                                      std::span<const double> spoof) {
  EerResult e = eer(target, nontarget);
  AsvOperatingPoint op;
  op.threshold = e.threshold;
  op.eer_tar_non = e.eer;

  auto rate_below = [](std::span<const double> xs, double t) {
    std::size_t n = 0;
    for (double x : xs)
      if (x < t) ++n;
    return static_cast<double>(n) / static_cast<double>(xs.size());
  };
  // Count >= directly so the rates are the exact count ratios the DET curve
  // uses, not 1 - ratio (which differs in the last bit).
  auto rate_at_or_above = [](std::span<const double> xs, double t) {
    std::size_t n = 0;
    for (double x : xs)
      if (x >= t) ++n;
    return static_cast<double>(n) / static_cast<double>(xs.size());
  };
  op.pmiss_asv = rate_below(target, e.threshold);
  op.pfa_asv = rate_at_or_above(nontarget, e.threshold);
  if (!spoof.empty()) op.pfa_spoof_asv = rate_at_or_above(spoof, e.threshold);
  return op;
}

EvalReport evaluate(const LabeledScores& labeled,
                    const std::optional<TdcfCoefficients>& coeffs) {
  EvalReport report;
  auto bona = labeled.bona_scores();
  auto spoof = labeled.spoof_scores();
  report.n_bona = bona.size();
  report.n_spoof = spoof.size();
  report.pooled_eer = eer(bona, spoof).eer;
  if (coeffs) {
    report.pooled_min_tdcf =
        normalize_tdcf(min_tdcf(bona, spoof, *coeffs).value, *coeffs);
  }
  for (const auto& [condition, part] : partition_by_condition(labeled)) {
    ConditionReport entry;
    auto cb = part.bona_scores();
    auto cs = part.spoof_scores();
    entry.n_bona = cb.size();
    entry.n_spoof = cs.size();
    if (cb.empty() || cs.empty()) {
      entry.skipped = true;
    } else {
      entry.eer = eer(cb, cs).eer;
      if (coeffs) {
        entry.min_tdcf =
            normalize_tdcf(min_tdcf(cb, cs, *coeffs).value, *coeffs);
      }
    }
    report.per_condition.emplace(condition, std::move(entry));
  }
  return report;
}

namespace {

// Table-style rounding: 4 decimals for t-DCF, 2 for EER as a percentage.
double round_tdcf(double v) { return std::round(v * 1e4) / 1e4; }
double round_eer_percent(double v) { return std::round(v * 100.0 * 100.0) / 100.0; }

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::string format_report_text(const EvalReport& report) {
  std::string out;
  if (report.pooled_min_tdcf) {
    out += "pooled_min_tdcf " + fixed(*report.pooled_min_tdcf, 4) + "\n";
  }
  out += "pooled_eer " + fixed(report.pooled_eer * 100.0, 2) + "\n";
  out += "n_bona " + std::to_string(report.n_bona) + "\n";
  out += "n_spoof " + std::to_string(report.n_spoof) + "\n";
  for (const auto& [condition, entry] : report.per_condition) {
    out += "condition " + condition;
    if (entry.skipped) {
      out += " skipped";
    } else {
      if (entry.min_tdcf) out += " min_tdcf " + fixed(*entry.min_tdcf, 4);
      out += " eer " + fixed(*entry.eer * 100.0, 2);
    }
    out += " n_bona " + std::to_string(entry.n_bona);
    out += " n_spoof " + std::to_string(entry.n_spoof);
    out += "\n";
  }
  return out;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  if (report.pooled_min_tdcf) {
    j["pooled_min_tdcf"] = round_tdcf(*report.pooled_min_tdcf);
  }
  j["pooled_eer"] = round_eer_percent(report.pooled_eer);
  j["n_bona"] = report.n_bona;
  j["n_spoof"] = report.n_spoof;
  j["conditions"] = nlohmann::json::array();
  for (const auto& [condition, entry] : report.per_condition) {
    nlohmann::json c;
    c["condition"] = condition;
    c["n_bona"] = entry.n_bona;
    c["n_spoof"] = entry.n_spoof;
    if (entry.skipped) {
      c["skipped"] = true;
    } else {
      if (entry.min_tdcf) c["min_tdcf"] = round_tdcf(*entry.min_tdcf);
      c["eer"] = round_eer_percent(*entry.eer);
    }
    j["conditions"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

}  // namespace spoofeval
