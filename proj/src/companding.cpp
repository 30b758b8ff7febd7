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

#include "spoofeval/companding.hpp"

#include <algorithm>
#include <cmath>

#include "spoofeval/dsp.hpp"
#include "spoofeval/error.hpp"

namespace spoofeval {

// The encoders follow ITU-T G.711: an 8-segment piecewise-linear
// approximation of the mu = 255 / A = 87.6 companding curves.  Negative
// values use ones' complement so the code space is symmetric around the
// zero crossing.

std::uint8_t alaw_encode(std::int16_t pcm) {
  int p = pcm;
  unsigned int a;
  if (p < 0) {
    p = ~p;
    a = 0x00;
  } else {
    a = 0x80;
  }

  // Segment and interval numbers.
  p >>= 4;
  if (p >= 0x20) {
    if (p >= 0x100) {
      p >>= 4;
      a += 0x40;
    }
    if (p >= 0x40) {
      p >>= 2;
      a += 0x20;
    }
    if (p >= 0x20) {
      p >>= 1;
      a += 0x10;
    }
  }
  a += static_cast<unsigned int>(p);

  return static_cast<std::uint8_t>(a ^ 0x55);  // even bits inverted on the wire
}

std::int16_t alaw_decode(std::uint8_t code) {
  code ^= 0x55;

  unsigned int sign = code & 0x80;
  int linear = code & 0x1f;
  linear <<= 4;
  linear += 8;  // half step: decode to the middle of the interval

  code &= 0x7f;
  if (code >= 0x20) {
    linear |= 0x100;  // restore the implicit leading bit
    unsigned int shift = static_cast<unsigned int>(code >> 4) - 1;
    linear <<= shift;
  }
  return static_cast<std::int16_t>(sign ? linear : -linear);
}

std::uint8_t mulaw_encode(std::int16_t pcm) {
  int p = pcm;
  unsigned int u;
  if (p < 0) {
    p = ~p;
    // Sign bit 1; the 0x10 cancels against the implicit leading bit below,
    // and 0xff pre-inverts the final code.
    u = 0x80 ^ 0x10 ^ 0xff;
  } else {
    u = 0x00 ^ 0x10 ^ 0xff;
  }

  p += 0x84;  // bias
  if (p > 0x7f00) p = 0x7f00;

  // Segment and interval numbers.
  p >>= 3;
  if (p >= 0x100) {
    p >>= 4;
    u ^= 0x40;
  }
  if (p >= 0x40) {
    p >>= 2;
    u ^= 0x20;
  }
  if (p >= 0x20) {
    p >>= 1;
    u ^= 0x10;
  }
  u ^= static_cast<unsigned int>(p);  // p still carries the implicit bit

  return static_cast<std::uint8_t>(u);
}

std::int16_t mulaw_decode(std::uint8_t code) {
  code ^= 0xff;  // all bits inverted on the wire

  int linear = code & 0x0f;
  linear <<= 3;
  linear |= 0x84;  // restore the implicit bit and the half step

  unsigned int shift = static_cast<unsigned int>(code >> 4) & 7;
  linear <<= shift;
  linear -= 0x84;  // remove the bias

  return static_cast<std::int16_t>((code & 0x80) ? -linear : linear);
}

namespace {

template <typename Encode, typename Decode>
AudioSignal companding_roundtrip(const AudioSignal& signal, bool narrowband,
                                 Encode encode, Decode decode) {
  if (signal.samples.empty()) fail(ErrorKind::bad_audio, "empty signal");
  for (double s : signal.samples) {
    if (!std::isfinite(s) || std::fabs(s) > 1.0) {
      fail(ErrorKind::clipped_input, "sample magnitude exceeds 1");
    }
  }
  AudioSignal source = narrowband ? narrowband_simulate(signal) : signal;
  AudioSignal out;
  out.sample_rate = source.sample_rate;
  out.samples.resize(source.samples.size());
  for (std::size_t i = 0; i < source.samples.size(); ++i) {
    std::int16_t pcm = double_to_pcm16(source.samples[i]);
    out.samples[i] = pcm16_to_double(decode(encode(pcm)));
  }
  return out;
}

}  // namespace

AudioSignal mulaw_roundtrip(const AudioSignal& signal, bool narrowband) {
  return companding_roundtrip(signal, narrowband, mulaw_encode, mulaw_decode);
}

AudioSignal alaw_roundtrip(const AudioSignal& signal, bool narrowband) {
  return companding_roundtrip(signal, narrowband, alaw_encode, alaw_decode);
}

AudioSignal narrowband_simulate(const AudioSignal& signal) {
  if (signal.sample_rate != 16000) {
    fail(ErrorKind::bad_audio, "narrowband simulation expects 16 kHz input");
  }
  if (signal.samples.empty()) fail(ErrorKind::bad_audio, "empty signal");

  // Anti-alias low-pass at telephone bandwidth, then 2:1 decimation.
  const std::vector<double> taps = lowpass_fir(3400.0, 16000, 64);
  std::vector<double> filtered = filter_symmetric(signal.samples, taps);
  std::vector<double> narrow;
  narrow.reserve((filtered.size() + 1) / 2);
  for (std::size_t i = 0; i < filtered.size(); i += 2) {
    narrow.push_back(filtered[i]);
  }

  // Back to 16 kHz: zero-stuff and interpolate with the same low-pass
  // (gain 2 restores the amplitude lost to zero insertion).
  std::vector<double> stuffed(signal.samples.size(), 0.0);
  for (std::size_t i = 0; i < narrow.size(); ++i) {
    if (2 * i < stuffed.size()) stuffed[2 * i] = narrow[i];
  }
  std::vector<double> wide = filter_symmetric(stuffed, taps);

  AudioSignal out;
  out.sample_rate = signal.sample_rate;
  out.samples.resize(wide.size());
  for (std::size_t i = 0; i < wide.size(); ++i) {
    // Clamp: filter overshoot may leave the nominal range slightly.
    double v = 2.0 * wide[i];
    out.samples[i] = std::clamp(v, -1.0, 1.0);
  }
  return out;
}

}  // namespace spoofeval
