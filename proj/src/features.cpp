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

#include "spoofeval/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "spoofeval/dsp.hpp"
#include "spoofeval/parallel.hpp"
#include "spoofeval/reference.hpp"

namespace spoofeval {

namespace {

constexpr double kLogFloor = 1e-10;

std::size_t samples_for_ms(double ms, int sample_rate) {
  return static_cast<std::size_t>(
      std::llround(ms * sample_rate / 1000.0));
}

void check_signal(const AudioSignal& signal) {
  if (signal.samples.empty()) fail(ErrorKind::bad_audio, "empty signal");
  if (signal.sample_rate <= 0) fail(ErrorKind::bad_audio, "bad sample rate");
  for (double s : signal.samples) {
    if (!std::isfinite(s)) fail(ErrorKind::bad_audio, "non-finite sample");
  }
}

/// Precomputed truncated DCT-II basis: out[k][i] for k < num_coeffs rows of
/// an orthonormal DCT over length n.
std::vector<double> dct_basis(std::size_t n, std::size_t num_coeffs) {
  std::vector<double> basis(num_coeffs * n);
  const double scale0 = std::sqrt(1.0 / static_cast<double>(n));
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < num_coeffs; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      basis[k * n + i] =
          (k == 0 ? scale0 : scale) *
          std::cos(std::numbers::pi / static_cast<double>(n) *
                   (static_cast<double>(i) + 0.5) * static_cast<double>(k));
    }
  }
  return basis;
}

struct TriangularFilterbank {
  // Per filter: first spectrum bin index and the per-bin weights.
  std::vector<std::size_t> first_bin;
  std::vector<std::vector<double>> weights;
};

/// `n_filters` triangular filters linearly spaced on [0, fmax]: 72 edge
/// points for 70 filters, filter i spanning edges i..i+2 and peaking at
/// edge i+1.
TriangularFilterbank linear_filterbank(std::size_t n_filters, double fmax,
                                       int sample_rate, std::size_t fft_size) {
  const std::size_t n_bins = fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) /
                        static_cast<double>(fft_size);
  std::vector<double> edges(n_filters + 2);
  for (std::size_t j = 0; j < edges.size(); ++j) {
    edges[j] = fmax * static_cast<double>(j) /
               static_cast<double>(n_filters + 1);
  }

  TriangularFilterbank fb;
  fb.first_bin.resize(n_filters);
  fb.weights.resize(n_filters);
  for (std::size_t i = 0; i < n_filters; ++i) {
    const double left = edges[i];
    const double center = edges[i + 1];
    const double right = edges[i + 2];
    std::vector<double> w;
    std::size_t first = n_bins;
    for (std::size_t b = 0; b < n_bins; ++b) {
      double f = static_cast<double>(b) * bin_hz;
      double value = 0.0;
      if (f > left && f < center) {
        value = (f - left) / (center - left);
      } else if (f == center) {
        value = 1.0;
      } else if (f > center && f < right) {
        value = (right - f) / (right - center);
      } else {
        continue;
      }
      if (first == n_bins) first = b;
      w.push_back(value);
    }
    fb.first_bin[i] = first == n_bins ? 0 : first;
    fb.weights[i] = std::move(w);
  }
  return fb;
}

void check_lfcc_config(const LfccConfig& cfg, int sample_rate) {
  if (cfg.window_ms <= 0 || cfg.shift_ms <= 0) {
    fail(ErrorKind::bad_config, "window and shift must be positive");
  }
  if (cfg.fmax <= 0 || cfg.fmax > sample_rate / 2.0) {
    fail(ErrorKind::bad_config, "fmax must lie in (0, sample_rate/2]");
  }
  if (cfg.n_filters < cfg.n_ceps + 1) {
    fail(ErrorKind::bad_config, "need at least n_ceps+1 filters");
  }
  std::size_t window = samples_for_ms(cfg.window_ms, sample_rate);
  if (cfg.fft_size < window || (cfg.fft_size & (cfg.fft_size - 1)) != 0) {
    fail(ErrorKind::bad_config,
         "fft_size must be a power of two covering the window");
  }
  if (cfg.delta_width < 1) fail(ErrorKind::bad_config, "delta width must be >= 1");
}

FeatureMatrix lfcc_impl(const AudioSignal& signal, const LfccConfig& cfg,
                        bool parallel) {
  check_signal(signal);
  check_lfcc_config(cfg, signal.sample_rate);

  std::vector<double> samples = signal.samples;
  if (cfg.pre_emphasis != 0.0) {
    for (std::size_t i = samples.size(); i-- > 1;) {
      samples[i] -= cfg.pre_emphasis * samples[i - 1];
    }
  }

  const std::size_t window = samples_for_ms(cfg.window_ms, signal.sample_rate);
  const std::size_t shift = samples_for_ms(cfg.shift_ms, signal.sample_rate);
  if (samples.size() < window) {
    fail(ErrorKind::too_short, "signal shorter than one analysis window");
  }
  const std::size_t frames = 1 + (samples.size() - window) / shift;
  const std::size_t kept = cfg.n_ceps + 1;

  const std::vector<double> win = hamming_window(window);
  const TriangularFilterbank fb =
      linear_filterbank(cfg.n_filters, cfg.fmax, signal.sample_rate,
                        cfg.fft_size);
  const std::vector<double> basis = dct_basis(cfg.n_filters, kept);

  FeatureMatrix statics(frames, kept);
  parallel_for(frames, parallel, [&](std::size_t t) {
    std::vector<std::complex<double>> buf(cfg.fft_size);
    const double* x = samples.data() + t * shift;
    for (std::size_t i = 0; i < window; ++i) buf[i] = x[i] * win[i];
    fft(buf);

    std::vector<double> power(cfg.fft_size / 2 + 1);
    for (std::size_t b = 0; b < power.size(); ++b) power[b] = std::norm(buf[b]);

    std::vector<double> logfb(cfg.n_filters);
    for (std::size_t i = 0; i < cfg.n_filters; ++i) {
      double acc = 0.0;
      const auto& w = fb.weights[i];
      for (std::size_t j = 0; j < w.size(); ++j) {
        acc += w[j] * power[fb.first_bin[i] + j];
      }
      logfb[i] = std::log(std::max(acc, kLogFloor));
    }

    for (std::size_t k = 0; k < kept; ++k) {
      double acc = 0.0;
      const double* row = basis.data() + k * cfg.n_filters;
      for (std::size_t i = 0; i < cfg.n_filters; ++i) acc += row[i] * logfb[i];
      statics.at(t, k) = acc;
    }
  });

  return with_dynamics(statics, cfg.delta_width);
}

struct CqtKernels {
  std::vector<double> bin_freqs;
  std::vector<std::size_t> lengths;   // per-bin window length
  std::vector<std::size_t> offsets;   // start of each kernel in re/im
  std::vector<double> re, im;         // concatenated kernels
  std::size_t max_length = 0;
};

void check_cqcc_config(const CqccConfig& cfg, int sample_rate) {
  if (cfg.bins_per_octave < 1 || cfg.octaves < 1 || cfg.resampling_period < 1) {
    fail(ErrorKind::bad_config, "bins, octaves and period must be positive");
  }
  if (cfg.fmax <= 0 || cfg.fmax > sample_rate / 2.0) {
    fail(ErrorKind::bad_config, "fmax must lie in (0, sample_rate/2]");
  }
  if (cfg.hop_ms <= 0) fail(ErrorKind::bad_config, "hop must be positive");
  if (cfg.max_window < 2) fail(ErrorKind::bad_config, "max_window too small");
  if (cfg.delta_width < 1) fail(ErrorKind::bad_config, "delta width must be >= 1");
}

CqtKernels build_cqt_kernels(const CqccConfig& cfg, int sample_rate) {
  const std::size_t n_bins = cfg.n_bins();
  const double quality =
      1.0 / (std::pow(2.0, 1.0 / cfg.bins_per_octave) - 1.0);

  CqtKernels kernels;
  kernels.bin_freqs.resize(n_bins);
  kernels.lengths.resize(n_bins);
  kernels.offsets.resize(n_bins);
  std::size_t total = 0;
  for (std::size_t k = 0; k < n_bins; ++k) {
    double freq = cfg.fmin() * std::pow(2.0, static_cast<double>(k) /
                                                 cfg.bins_per_octave);
    kernels.bin_freqs[k] = freq;
    std::size_t length = static_cast<std::size_t>(
        std::llround(quality * sample_rate / freq));
    length = std::clamp<std::size_t>(length, 2, cfg.max_window);
    kernels.lengths[k] = length;
    kernels.offsets[k] = total;
    total += length;
    kernels.max_length = std::max(kernels.max_length, length);
  }

  kernels.re.resize(total);
  kernels.im.resize(total);
  for (std::size_t k = 0; k < n_bins; ++k) {
    const std::size_t length = kernels.lengths[k];
    const std::vector<double> win = hann_window(length);
    const double omega =
        2.0 * std::numbers::pi * kernels.bin_freqs[k] / sample_rate;
    const double norm = 1.0 / static_cast<double>(length);
    for (std::size_t n = 0; n < length; ++n) {
      double phase = omega * static_cast<double>(n);
      kernels.re[kernels.offsets[k] + n] = win[n] * std::cos(phase) * norm;
      kernels.im[kernels.offsets[k] + n] = -win[n] * std::sin(phase) * norm;
    }
  }
  return kernels;
}

CqtMatrix cqt_impl(const AudioSignal& signal, const CqccConfig& cfg,
                   bool parallel) {
  check_signal(signal);
  check_cqcc_config(cfg, signal.sample_rate);

  const CqtKernels kernels = build_cqt_kernels(cfg, signal.sample_rate);
  const std::size_t hop = samples_for_ms(cfg.hop_ms, signal.sample_rate);
  const std::size_t longest = kernels.max_length;
  if (signal.samples.size() < longest) {
    fail(ErrorKind::too_short,
         "signal shorter than the longest analysis window");
  }
  const std::size_t frames = 1 + (signal.samples.size() - longest) / hop;
  const std::size_t n_bins = kernels.bin_freqs.size();

  CqtMatrix out;
  out.frames = frames;
  out.bin_freqs = kernels.bin_freqs;
  out.values.resize(frames * n_bins);

  const double* x = signal.samples.data();
  parallel_for(frames, parallel, [&](std::size_t t) {
    const std::size_t center = longest / 2 + t * hop;
    for (std::size_t k = 0; k < n_bins; ++k) {
      const std::size_t length = kernels.lengths[k];
      const std::size_t start = center - length / 2;
      const double* kre = kernels.re.data() + kernels.offsets[k];
      const double* kim = kernels.im.data() + kernels.offsets[k];
      double acc_re = 0.0;
      double acc_im = 0.0;
      for (std::size_t n = 0; n < length; ++n) {
        acc_re += x[start + n] * kre[n];
        acc_im += x[start + n] * kim[n];
      }
      out.values[t * n_bins + k] = {acc_re, acc_im};
    }
  });
  return out;
}

FeatureMatrix cqcc_impl(const AudioSignal& signal, const CqccConfig& cfg,
                        bool parallel) {
  const CqtMatrix transform = cqt_impl(signal, cfg, parallel);
  const std::size_t n_bins = transform.bin_freqs.size();
  const std::size_t kept = cfg.n_ceps + 1;

  // Uniform frequency grid with spacing fmin / period across the bin range.
  const std::size_t grid_size = cqcc_resample_grid_size(cfg);
  const double step = cfg.fmin() / cfg.resampling_period;
  std::vector<double> grid(grid_size);
  for (std::size_t j = 0; j < grid_size; ++j) {
    grid[j] = cfg.fmin() + static_cast<double>(j) * step;
  }
  const std::vector<double> basis = dct_basis(grid_size, kept);

  FeatureMatrix statics(transform.frames, kept);
  parallel_for(transform.frames, parallel, [&](std::size_t t) {
    std::vector<double> logpower(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
      logpower[k] =
          std::log(std::max(std::norm(transform.at(t, k)), kLogFloor));
    }
    CubicSpline spline(transform.bin_freqs, logpower);
    std::vector<double> resampled(grid_size);
    for (std::size_t j = 0; j < grid_size; ++j) resampled[j] = spline(grid[j]);

    for (std::size_t k = 0; k < kept; ++k) {
      double acc = 0.0;
      const double* row = basis.data() + k * grid_size;
      for (std::size_t j = 0; j < grid_size; ++j) acc += row[j] * resampled[j];
      statics.at(t, k) = acc;
    }
  });

  return with_dynamics(statics, cfg.delta_width);
}

}  // namespace

LfccConfig default_lfcc_config(Task task) {
  LfccConfig cfg;
  cfg.fmax = task == Task::pa ? 8000.0 : 4000.0;
  return cfg;
}

CqccConfig default_cqcc_config(Task task) {
  CqccConfig cfg;
  cfg.fmax = task == Task::pa ? 8000.0 : 4000.0;
  return cfg;
}

std::vector<std::vector<double>> frame_signal(const AudioSignal& signal,
                                              double window_ms,
                                              double shift_ms) {
  check_signal(signal);
  if (window_ms <= 0 || shift_ms <= 0) {
    fail(ErrorKind::bad_config, "window and shift must be positive");
  }
  const std::size_t window = samples_for_ms(window_ms, signal.sample_rate);
  const std::size_t shift = samples_for_ms(shift_ms, signal.sample_rate);
  if (window == 0 || shift == 0) {
    fail(ErrorKind::bad_config, "window and shift must span at least a sample");
  }
  if (signal.samples.size() < window) {
    fail(ErrorKind::too_short, "signal shorter than one analysis window");
  }
  const std::size_t frames = 1 + (signal.samples.size() - window) / shift;
  std::vector<std::vector<double>> out(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* x = signal.samples.data() + t * shift;
    out[t].assign(x, x + window);
  }
  return out;
}

FeatureMatrix lfcc(const AudioSignal& signal, const LfccConfig& cfg) {
  return lfcc_impl(signal, cfg, true);
}

CqtMatrix cqt(const AudioSignal& signal, const CqccConfig& cfg) {
  return cqt_impl(signal, cfg, true);
}

FeatureMatrix cqcc(const AudioSignal& signal, const CqccConfig& cfg) {
  return cqcc_impl(signal, cfg, true);
}

std::size_t cqcc_resample_grid_size(const CqccConfig& cfg) {
  const double top_ratio =
      std::pow(2.0, static_cast<double>(cfg.n_bins() - 1) /
                        cfg.bins_per_octave);
  return static_cast<std::size_t>(
             std::floor((top_ratio - 1.0) * cfg.resampling_period)) +
         1;
}

FeatureMatrix deltas(const FeatureMatrix& features, int width) {
  if (width < 1) fail(ErrorKind::bad_config, "delta width must be >= 1");
  if (features.rows == 0) fail(ErrorKind::bad_config, "empty feature matrix");

  double denom = 0.0;
  for (int w = 1; w <= width; ++w) denom += static_cast<double>(w) * w;
  denom *= 2.0;

  const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(features.rows) - 1;
  FeatureMatrix out(features.rows, features.cols);
  for (std::ptrdiff_t t = 0; t <= last; ++t) {
    for (std::size_t c = 0; c < features.cols; ++c) {
      double acc = 0.0;
      for (int w = 1; w <= width; ++w) {
        std::ptrdiff_t ahead = std::min<std::ptrdiff_t>(t + w, last);
        std::ptrdiff_t behind = std::max<std::ptrdiff_t>(t - w, 0);
        acc += w * (features.at(static_cast<std::size_t>(ahead), c) -
                    features.at(static_cast<std::size_t>(behind), c));
      }
      out.at(static_cast<std::size_t>(t), c) = acc / denom;
    }
  }
  return out;
}

FeatureMatrix with_dynamics(const FeatureMatrix& static_features, int width) {
  FeatureMatrix d = deltas(static_features, width);
  FeatureMatrix dd = deltas(d, width);
  FeatureMatrix out(static_features.rows, static_features.cols * 3);
  for (std::size_t t = 0; t < out.rows; ++t) {
    for (std::size_t c = 0; c < static_features.cols; ++c) {
      out.at(t, c) = static_features.at(t, c);
      out.at(t, static_features.cols + c) = d.at(t, c);
      out.at(t, 2 * static_features.cols + c) = dd.at(t, c);
    }
  }
  return out;
}

void write_feature_file(const std::string& path,
                        const FeatureMatrix& features) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::bad_file, "cannot open " + path + " for writing");
  out.write("SPFM", 4);
  auto put_u32 = [&](std::uint32_t v) {
    char buf[4] = {static_cast<char>(v & 0xff),
                   static_cast<char>((v >> 8) & 0xff),
                   static_cast<char>((v >> 16) & 0xff),
                   static_cast<char>(v >> 24)};
    out.write(buf, 4);
  };
  put_u32(static_cast<std::uint32_t>(features.rows));
  put_u32(static_cast<std::uint32_t>(features.cols));
  for (double v : features.values) {
    float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put_u32(bits);
  }
  if (!out) fail(ErrorKind::bad_file, "failed writing " + path);
}

FeatureMatrix read_feature_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::bad_file, "cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SPFM", 4) != 0) {
    fail(ErrorKind::bad_file, path + ": bad feature-file magic");
  }
  auto get_u32 = [&]() {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4)) {
      fail(ErrorKind::bad_file, path + ": truncated feature file");
    }
    return static_cast<std::uint32_t>(buf[0]) |
           (static_cast<std::uint32_t>(buf[1]) << 8) |
           (static_cast<std::uint32_t>(buf[2]) << 16) |
           (static_cast<std::uint32_t>(buf[3]) << 24);
  };
  std::uint32_t rows = get_u32();
  std::uint32_t cols = get_u32();
  FeatureMatrix features(rows, cols);
  for (std::size_t i = 0; i < features.values.size(); ++i) {
    std::uint32_t bits = get_u32();
    float f;
    std::memcpy(&f, &bits, 4);
    features.values[i] = static_cast<double>(f);
  }
  char extra;
  if (in.read(&extra, 1)) {
    fail(ErrorKind::bad_file, path + ": trailing bytes in feature file");
  }
  return features;
}

namespace reference {

FeatureMatrix lfcc(const AudioSignal& signal, const LfccConfig& cfg) {
  return lfcc_impl(signal, cfg, false);
}

FeatureMatrix cqcc(const AudioSignal& signal, const CqccConfig& cfg) {
  return cqcc_impl(signal, cfg, false);
}

}  // namespace reference

}  // namespace spoofeval
