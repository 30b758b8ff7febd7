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

#include "spoofeval/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spoofeval {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& data) {
  const std::size_t n = data.size();
  if (!is_pow2(n)) fail(ErrorKind::bad_config, "FFT length must be a power of two");
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    std::complex<double> wlen(std::cos(angle), std::sin(angle));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = data[i + j];
        std::complex<double> v = data[i + j + len / 2] * w;
        data[i + j] = u + v;
        data[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

void ifft(std::vector<std::complex<double>>& data) {
  for (auto& z : data) z = std::conj(z);
  fft(data);
  double scale = 1.0 / static_cast<double>(data.size());
  for (auto& z : data) z = std::conj(z) * scale;
}

std::vector<std::complex<double>> fft_real(std::span<const double> input,
                                           std::size_t n) {
  if (!is_pow2(n) || n < input.size()) {
    fail(ErrorKind::bad_config, "FFT length must be a power of two >= input size");
  }
  std::vector<std::complex<double>> data(n);
  for (std::size_t i = 0; i < input.size(); ++i) data[i] = input[i];
  fft(data);
  return data;
}

std::vector<double> dct2_orthonormal(std::span<const double> input,
                                     std::size_t num_coeffs) {
  const std::size_t n = input.size();
  if (n == 0) fail(ErrorKind::bad_config, "DCT input must be non-empty");
  if (num_coeffs > n) {
    fail(ErrorKind::bad_config, "DCT coefficient count exceeds input size");
  }
  std::vector<double> out(num_coeffs);
  const double scale0 = std::sqrt(1.0 / static_cast<double>(n));
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < num_coeffs; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sum += input[i] *
             std::cos(std::numbers::pi / static_cast<double>(n) *
                      (static_cast<double>(i) + 0.5) * static_cast<double>(k));
    }
    out[k] = sum * (k == 0 ? scale0 : scale);
  }
  return out;
}

std::vector<double> hamming_window(std::size_t n) {
  if (n == 0) fail(ErrorKind::bad_config, "window length must be positive");
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi *
                                  static_cast<double>(i) /
                                  static_cast<double>(n - 1));
  }
  return w;
}

std::vector<double> hann_window(std::size_t n) {
  if (n == 0) fail(ErrorKind::bad_config, "window length must be positive");
  std::vector<double> w(n, 1.0);
  if (n == 1) return w;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                static_cast<double>(i) /
                                static_cast<double>(n - 1));
  }
  return w;
}

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) {
    fail(ErrorKind::bad_config, "spline needs at least two matching points");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1])) {
      fail(ErrorKind::bad_config, "spline abscissae must be strictly increasing");
    }
  }
  x_.assign(x.begin(), x.end());
  a_.assign(y.begin(), y.end());

  // Solve the natural-spline tridiagonal system for second derivatives.
  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x[i + 1] - x[i];

  std::vector<double> alpha(n, 0.0), l(n, 1.0), mu(n, 0.0), z(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    alpha[i] = 3.0 * ((a_[i + 1] - a_[i]) / h[i] - (a_[i] - a_[i - 1]) / h[i - 1]);
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    l[i] = 2.0 * (x[i + 1] - x[i - 1]) - h[i - 1] * mu[i - 1];
    mu[i] = h[i] / l[i];
    z[i] = (alpha[i] - h[i - 1] * z[i - 1]) / l[i];
  }

  b_.assign(n, 0.0);
  c_.assign(n, 0.0);
  d_.assign(n, 0.0);
  for (std::size_t ii = n - 1; ii-- > 0;) {
    c_[ii] = z[ii] - mu[ii] * c_[ii + 1];
    b_[ii] = (a_[ii + 1] - a_[ii]) / h[ii] - h[ii] * (c_[ii + 1] + 2.0 * c_[ii]) / 3.0;
    d_[ii] = (c_[ii + 1] - c_[ii]) / (3.0 * h[ii]);
  }
}

double CubicSpline::operator()(double q) const {
  const std::size_t n = x_.size();
  // Find the interval; clamp to the boundary polynomials outside the range.
  std::size_t i;
  if (q <= x_.front()) {
    i = 0;
  } else if (q >= x_.back()) {
    i = n - 2;
  } else {
    i = static_cast<std::size_t>(
            std::upper_bound(x_.begin(), x_.end(), q) - x_.begin()) -
        1;
  }
  double dx = q - x_[i];
  return a_[i] + dx * (b_[i] + dx * (c_[i] + dx * d_[i]));
}

std::vector<double> lowpass_fir(double cutoff_hz, int sample_rate, int half) {
  if (cutoff_hz <= 0.0 || sample_rate <= 0 ||
      cutoff_hz >= sample_rate / 2.0 || half < 1) {
    fail(ErrorKind::bad_config, "invalid low-pass filter parameters");
  }
  const int length = 2 * half + 1;
  const double fc = cutoff_hz / sample_rate;  // normalized cutoff
  std::vector<double> window = hamming_window(static_cast<std::size_t>(length));
  std::vector<double> taps(static_cast<std::size_t>(length));
  double sum = 0.0;
  for (int i = 0; i < length; ++i) {
    int m = i - half;
    double value;
    if (m == 0) {
      value = 2.0 * fc;
    } else {
      double arg = 2.0 * std::numbers::pi * fc * m;
      value = std::sin(arg) / (std::numbers::pi * m);
    }
    taps[static_cast<std::size_t>(i)] = value * window[static_cast<std::size_t>(i)];
    sum += taps[static_cast<std::size_t>(i)];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

std::vector<double> filter_symmetric(std::span<const double> input,
                                     std::span<const double> taps) {
  if (taps.size() % 2 == 0 || taps.empty()) {
    fail(ErrorKind::bad_config, "FIR length must be odd");
  }
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(taps.size() / 2);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(input.size());
  std::vector<double> out(input.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      std::ptrdiff_t j = i + k;
      if (j < 0 || j >= n) continue;
      acc += input[static_cast<std::size_t>(j)] *
             taps[static_cast<std::size_t>(k + half)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

}  // namespace spoofeval
