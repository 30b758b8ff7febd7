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

#ifndef SPOOFEVAL_FEATURES_HPP_
#define SPOOFEVAL_FEATURES_HPP_

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "spoofeval/audio.hpp"
#include "spoofeval/error.hpp"
#include "spoofeval/trialdata.hpp"

namespace spoofeval {

/// A frames-by-coefficients feature matrix, row-major.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // rows * cols, row-major

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c)
      : rows(r), cols(c), values(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  const double* row(std::size_t r) const { return values.data() + r * cols; }
  double* row(std::size_t r) { return values.data() + r * cols; }
};

/// LFCC front-end parameters.  Defaults are the GMM-baseline settings:
/// 30 ms window / 15 ms shift, 1024-point transform, 70 linear filters,
/// energy plus 19 static cepstra, delta context 2.
struct LfccConfig {
  double window_ms = 30.0;
  double shift_ms = 15.0;
  std::size_t fft_size = 1024;
  std::size_t n_filters = 70;
  std::size_t n_ceps = 19;  // static cepstra kept in addition to c0 (energy)
  double fmax = 4000.0;     // 4000 for LA/DF, 8000 for PA
  int delta_width = 2;
  double pre_emphasis = 0.0;  // 0 disables (default: no pre-emphasis)
};

/// Task defaults: fmax = 4 kHz for LA and DF, 8 kHz for PA.
LfccConfig default_lfcc_config(Task task);

/// CQCC front-end parameters: 12 bins per octave over 9 octaves ending at
/// fmax (so fmin = fmax / 2^9), resampling period 16, energy plus 19 static
/// cepstra, delta context 2.  Per-bin analysis windows are capped at
/// `max_window` samples so that short utterances remain analyzable.
struct CqccConfig {
  int bins_per_octave = 12;
  int octaves = 9;
  int resampling_period = 16;
  double fmax = 4000.0;  // 4000 for LA/DF, 8000 for PA
  std::size_t n_ceps = 19;
  double hop_ms = 10.0;
  std::size_t max_window = 4096;
  int delta_width = 2;

  double fmin() const { return fmax / static_cast<double>(1 << octaves); }
  std::size_t n_bins() const {
    return static_cast<std::size_t>(octaves * bins_per_octave);
  }
};

/// Task defaults: fmax = 4 kHz for LA and DF, 8 kHz for PA.
CqccConfig default_cqcc_config(Task task);

/// Cuts a signal into frames of `window_ms` every `shift_ms` with no
/// padding: T = 1 + floor((N - W) / S).  TooShort if the signal is shorter
/// than one window.
std::vector<std::vector<double>> frame_signal(const AudioSignal& signal,
                                              double window_ms,
                                              double shift_ms);

/// Linear-frequency cepstral coefficients with deltas and delta-deltas:
/// per frame a windowed power spectrum, `n_filters` triangular filters
/// linearly spaced on [0, fmax], floored log energies, orthonormal DCT-II
/// keeping c0..c{n_ceps}, then dynamics appended -> 3*(n_ceps+1) columns.
FeatureMatrix lfcc(const AudioSignal& signal, const LfccConfig& cfg);

/// Constant-Q transform: frames (rows) by geometrically spaced bins
/// (columns) of complex projections.
struct CqtMatrix {
  std::size_t frames = 0;
  std::vector<double> bin_freqs;             // K bin center frequencies
  std::vector<std::complex<double>> values;  // frames * K, row-major

  std::complex<double> at(std::size_t t, std::size_t k) const {
    return values[t * bin_freqs.size() + k];
  }
};

/// Computes the constant-Q transform: K = octaves * bins_per_octave bins at
/// f_k = fmin * 2^(k / bins_per_octave), per-bin Hann-windowed complex
/// projections with constant Q, frame centers advancing by the hop.
/// TooShort if the signal cannot hold the longest analysis window.
CqtMatrix cqt(const AudioSignal& signal, const CqccConfig& cfg);

/// Constant-Q cepstral coefficients with deltas and delta-deltas: floored
/// log power of the CQT, spline resampling of the geometric frequency axis
/// onto a uniform grid (spacing fmin / resampling_period), orthonormal
/// DCT-II keeping c0..c{n_ceps}, then dynamics appended -> 3*(n_ceps+1)
/// columns.
FeatureMatrix cqcc(const AudioSignal& signal, const CqccConfig& cfg);

/// Number of points in the uniform resampling grid, a pure function of
/// (bins_per_octave, resampling_period, octaves).
std::size_t cqcc_resample_grid_size(const CqccConfig& cfg);

/// Regression deltas with edge replication:
///   delta_t = sum_{w=1..W} w * (x_{t+w} - x_{t-w}) / (2 * sum_{w} w^2).
FeatureMatrix deltas(const FeatureMatrix& features, int width);

/// Appends deltas and delta-deltas: [static | delta | delta-delta].
FeatureMatrix with_dynamics(const FeatureMatrix& static_features, int width);

/// Binary feature container: magic "SPFM", then frame and column counts as
/// 32-bit little-endian unsigned integers, then rows*cols row-major IEEE-754
/// 32-bit little-endian floats.
void write_feature_file(const std::string& path, const FeatureMatrix& features);
FeatureMatrix read_feature_file(const std::string& path);

}  // namespace spoofeval

#endif  // SPOOFEVAL_FEATURES_HPP_
