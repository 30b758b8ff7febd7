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

#ifndef SPOOFEVAL_DSP_HPP_
#define SPOOFEVAL_DSP_HPP_

#include <complex>
#include <span>
#include <vector>

#include "spoofeval/error.hpp"

namespace spoofeval {

/// In-place radix-2 decimation-in-time FFT.  The length must be a power of
/// two (BadConfig otherwise).
void fft(std::vector<std::complex<double>>& data);

/// Inverse FFT (conjugate / forward / conjugate / scale).  Power-of-two
/// length required.
void ifft(std::vector<std::complex<double>>& data);

/// Zero-pads `input` to `n` points (power of two, at least input.size())
/// and returns its FFT.
std::vector<std::complex<double>> fft_real(std::span<const double> input,
                                           std::size_t n);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

/// Orthonormal DCT-II.  Returns the first `num_coeffs` coefficients of the
/// transform of `input`:
///   y[k] = s(k) * sum_n x[n] cos(pi/N * (n + 1/2) * k)
/// with s(0) = sqrt(1/N) and s(k) = sqrt(2/N) for k > 0.
std::vector<double> dct2_orthonormal(std::span<const double> input,
                                     std::size_t num_coeffs);

/// Symmetric Hamming window of length n: 0.54 - 0.46 cos(2 pi i / (n - 1)).
std::vector<double> hamming_window(std::size_t n);

/// Symmetric Hann window of length n: 0.5 - 0.5 cos(2 pi i / (n - 1)).
std::vector<double> hann_window(std::size_t n);

/// Natural cubic spline through (x[i], y[i]), x strictly increasing,
/// at least two points.  Evaluation outside [x.front(), x.back()] clamps to
/// the boundary polynomial.
class CubicSpline {
 public:
  CubicSpline(std::span<const double> x, std::span<const double> y);

  double operator()(double q) const;

 private:
  std::vector<double> x_;
  std::vector<double> a_, b_, c_, d_;  // per-interval coefficients
};

/// Low-pass windowed-sinc FIR prototype: cutoff in Hz at the given sample
/// rate, `half` taps each side (length 2*half + 1), Hamming-windowed, scaled
/// to unit DC gain.
std::vector<double> lowpass_fir(double cutoff_hz, int sample_rate, int half);

/// Filters `input` with the symmetric FIR `taps` (odd length), compensating
/// the linear phase delay so the output aligns with the input.  Samples
/// beyond the ends are treated as zero.
std::vector<double> filter_symmetric(std::span<const double> input,
                                     std::span<const double> taps);

}  // namespace spoofeval

#endif  // SPOOFEVAL_DSP_HPP_
