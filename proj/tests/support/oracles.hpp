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
// Slow, transparent reference computations the tests compare the library
// against.  Everything here is written the straightforward way — exhaustive
// enumeration, direct counting, quadrature — deliberately sharing no code
// with the implementation under test.

#ifndef SPOOFEVAL_TESTS_ORACLES_HPP_
#define SPOOFEVAL_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracles {

// ---------------------------------------------------------------------------
// Detection metrics.

/// All decision thresholds that realize distinct (pmiss, pfa) pairs under
/// the accept-if-score>=t convention: one below every score, the midpoint
/// of every adjacent distinct pair, and one above every score.
inline std::vector<double> midpoint_thresholds(std::vector<double> pooled) {
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
  std::vector<double> ts;
  ts.push_back(pooled.front() - 1.0);
  for (std::size_t i = 0; i + 1 < pooled.size(); ++i) {
    ts.push_back(0.5 * (pooled[i] + pooled[i + 1]));
  }
  ts.push_back(pooled.back() + 1.0);
  return ts;
}

inline double pmiss_at(const std::vector<double>& bona, double t) {
  std::size_t n = 0;
  for (double s : bona) {
    if (s < t) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(bona.size());
}

inline double pfa_at(const std::vector<double>& spoof, double t) {
  std::size_t n = 0;
  for (double s : spoof) {
    if (s >= t) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(spoof.size());
}

/// EER by exhaustive midpoint-threshold sweep plus linear interpolation of
/// the polyline through the realized operating points at the pmiss = pfa
/// crossing (symmetrized mean of the two interpolated rates).
inline double eer(const std::vector<double>& bona,
                  const std::vector<double>& spoof) {
  std::vector<double> pooled = bona;
  pooled.insert(pooled.end(), spoof.begin(), spoof.end());
  const auto ts = midpoint_thresholds(pooled);

  double prev_m = 0.0, prev_f = 0.0, prev_d = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double m = pmiss_at(bona, ts[i]);
    const double f = pfa_at(spoof, ts[i]);
    const double d = m - f;
    if (d == 0.0) return m;
    if (d > 0.0) {
      // Sign change on (i-1, i): the first threshold accepts everything,
      // so d starts at -1 and i >= 1 here.
      const double lambda = prev_d / (prev_d - d);
      const double at_m = prev_m + lambda * (m - prev_m);
      const double at_f = prev_f + lambda * (f - prev_f);
      return 0.5 * (at_m + at_f);
    }
    prev_m = m;
    prev_f = f;
    prev_d = d;
  }
  return 1.0;  // unreachable: the last threshold rejects everything
}

/// Minimum detection cost by exhaustive enumeration of every realizable
/// operating point; ties keep the earliest (smallest threshold).
inline double min_tdcf(const std::vector<double>& bona,
                       const std::vector<double>& spoof, double c0, double c1,
                       double c2) {
  std::vector<double> pooled = bona;
  pooled.insert(pooled.end(), spoof.begin(), spoof.end());
  double best = std::numeric_limits<double>::infinity();
  for (double t : midpoint_thresholds(pooled)) {
    const double cost = c0 + c1 * pmiss_at(bona, t) + c2 * pfa_at(spoof, t);
    if (cost < best) best = cost;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Statistics.

/// Standard normal CDF by Simpson quadrature of the density over [0, |x|].
inline double normal_cdf(double x) {
  const double a = std::fabs(x);
  const int n = 4000;  // even
  const double h = a / n;
  auto phi = [](double u) {
    return std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
  };
  double sum = phi(0.0) + phi(a);
  for (int i = 1; i < n; ++i) {
    sum += phi(i * h) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  const double integral = sum * h / 3.0;
  return x >= 0.0 ? 0.5 + integral : 0.5 - integral;
}

// ---------------------------------------------------------------------------
// Signal processing.

/// O(n^2) discrete Fourier transform in extended precision.
inline std::vector<std::complex<double>> naive_dft(
    const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<long double> acc(0.0L, 0.0L);
    for (std::size_t t = 0; t < n; ++t) {
      const long double angle = -2.0L * static_cast<long double>(M_PI) *
                                static_cast<long double>(k) *
                                static_cast<long double>(t) /
                                static_cast<long double>(n);
      const std::complex<long double> w(std::cos(angle), std::sin(angle));
      acc += std::complex<long double>(x[t].real(), x[t].imag()) * w;
    }
    out[k] = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mixture models.

/// Log-likelihood of `frames` (row-major rows x dim) under a diagonal
/// Gaussian mixture, computed as the log of the literal density sum in
/// extended precision.  Only safe for small models on standardized data.
inline double gmm_loglik(const std::vector<double>& weights,
                         const std::vector<double>& means,
                         const std::vector<double>& variances,
                         const std::vector<double>& frames, std::size_t rows,
                         std::size_t dim) {
  const std::size_t k = weights.size();
  long double total = 0.0L;
  for (std::size_t r = 0; r < rows; ++r) {
    long double density = 0.0L;
    for (std::size_t c = 0; c < k; ++c) {
      long double log_p = std::log(static_cast<long double>(weights[c]));
      for (std::size_t d = 0; d < dim; ++d) {
        const long double var = variances[c * dim + d];
        const long double diff =
            frames[r * dim + d] - means[c * dim + d];
        log_p += -0.5L * (std::log(2.0L * static_cast<long double>(M_PI) * var) +
                          diff * diff / var);
      }
      density += std::exp(log_p);
    }
    total += std::log(density);
  }
  return static_cast<double>(total);
}

}  // namespace oracles

#endif  // SPOOFEVAL_TESTS_ORACLES_HPP_
