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
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "spoofeval/audio.hpp"
#include "spoofeval/companding.hpp"

using namespace spoofeval;

namespace {

// ---------------------------------------------------------------------------
// Independent reference: the classic public-domain table-search G.711
// implementation (Sun g711.c lineage), deliberately structured differently
// from the library's segment cascade.

int table_search(int val, const short* table, int size) {
  for (int i = 0; i < size; ++i) {
    if (val <= table[i]) return i;
  }
  return size;
}

const short kSegUend[8] = {0x3F, 0x7F, 0xFF, 0x1FF, 0x3FF, 0x7FF, 0xFFF,
                           0x1FFF};
const short kSegAend[8] = {0x1F, 0x3F, 0x7F, 0xFF, 0x1FF, 0x3FF, 0x7FF,
                           0xFFF};

std::uint8_t ref_mulaw_encode(std::int16_t pcm) {
  int val = pcm >> 2;  // 14-bit domain
  int mask;
  if (val < 0) {
    val = -val;
    mask = 0x7F;
  } else {
    mask = 0xFF;
  }
  if (val > 8159) val = 8159;
  val += 0x84 >> 2;
  const int seg = table_search(val, kSegUend, 8);
  if (seg >= 8) return static_cast<std::uint8_t>(0x7F ^ mask);
  return static_cast<std::uint8_t>(
      ((seg << 4) | ((val >> (seg + 1)) & 0xF)) ^ mask);
}

std::int16_t ref_mulaw_decode(std::uint8_t code) {
  const std::uint8_t u = static_cast<std::uint8_t>(~code);
  int t = ((u & 0xF) << 3) + 0x84;
  t <<= (u & 0x70) >> 4;
  return static_cast<std::int16_t>((u & 0x80) ? (0x84 - t) : (t - 0x84));
}

std::uint8_t ref_alaw_encode(std::int16_t pcm) {
  int val = pcm >> 3;  // 13-bit domain
  int mask;
  if (val >= 0) {
    mask = 0xD5;
  } else {
    mask = 0x55;
    val = -val - 1;
  }
  const int seg = table_search(val, kSegAend, 8);
  if (seg >= 8) return static_cast<std::uint8_t>(0x7F ^ mask);
  std::uint8_t aval = static_cast<std::uint8_t>(seg << 4);
  if (seg < 2) {
    aval |= (val >> 1) & 0xF;
  } else {
    aval |= (val >> seg) & 0xF;
  }
  return static_cast<std::uint8_t>(aval ^ mask);
}

std::int16_t ref_alaw_decode(std::uint8_t code) {
  const std::uint8_t a = code ^ 0x55;
  int t = (a & 0xF) << 4;
  const int seg = (a & 0x70) >> 4;
  switch (seg) {
    case 0: t += 8; break;
    case 1: t += 0x108; break;
    default: t += 0x108; t <<= seg - 1;
  }
  return static_cast<std::int16_t>((a & 0x80) ? t : -t);
}

AudioSignal sine(double seconds, double hz, double amplitude,
                 int rate = 16000) {
  AudioSignal audio;
  audio.sample_rate = rate;
  audio.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < audio.samples.size(); ++i) {
    audio.samples[i] =
        amplitude * std::sin(2.0 * M_PI * hz * static_cast<double>(i) / rate);
  }
  return audio;
}

double snr_db(const std::vector<double>& clean,
              const std::vector<double>& noisy) {
  double signal = 0.0, error = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    signal += clean[i] * clean[i];
    const double e = clean[i] - noisy[i];
    error += e * e;
  }
  return 10.0 * std::log10(signal / error);
}

}  // namespace

TEST_CASE("mu-law decode matches the reference for every code") {
  for (int c = 0; c < 256; ++c) {
    CHECK(mulaw_decode(static_cast<std::uint8_t>(c)) ==
          ref_mulaw_decode(static_cast<std::uint8_t>(c)));
  }
}

TEST_CASE("a-law matches the reference exhaustively") {
  for (int c = 0; c < 256; ++c) {
    CHECK(alaw_decode(static_cast<std::uint8_t>(c)) ==
          ref_alaw_decode(static_cast<std::uint8_t>(c)));
  }
  for (int s = -32768; s <= 32767; ++s) {
    const auto pcm = static_cast<std::int16_t>(s);
    REQUIRE(alaw_encode(pcm) == ref_alaw_encode(pcm));
  }
}

TEST_CASE("mu-law encode: reference-exact on non-negatives, never a worse "
          "quantizer on negatives") {
  int boundary_ties = 0;
  for (int s = -32768; s <= 32767; ++s) {
    const auto pcm = static_cast<std::int16_t>(s);
    const auto mine = mulaw_encode(pcm);
    const auto ref = ref_mulaw_encode(pcm);
    if (s >= 0) {
      REQUIRE(mine == ref);
    } else if (mine != ref) {
      // Quantization-cell boundary: the two encoders break the tie
      // differently, but the library's reconstruction error must not
      // exceed the reference's.
      ++boundary_ties;
      const int err_mine = std::abs(mulaw_decode(mine) - s);
      const int err_ref = std::abs(mulaw_decode(ref) - s);
      REQUIRE(err_mine <= err_ref);
    }
  }
  CHECK(boundary_ties < 600);  // a thin sliver of the input space
}

TEST_CASE("golden byte values") {
  CHECK(mulaw_encode(0) == 0xFF);
  CHECK(mulaw_decode(0xFF) == 0);
  CHECK(mulaw_encode(32767) == 0x80);
  CHECK(mulaw_decode(0x80) == 32124);
  CHECK(mulaw_encode(-32768) == 0x00);
  CHECK(mulaw_decode(0x00) == -32124);

  CHECK(alaw_encode(0) == 0xD5);
  CHECK(alaw_decode(0xD5) == 8);
  CHECK(alaw_encode(32767) == 0xAA);
  CHECK(alaw_decode(0xAA) == 32256);
  CHECK(alaw_encode(-32768) == 0x2A);
  CHECK(alaw_decode(0x2A) == -32256);
}

TEST_CASE("code idempotence: decode then encode is the identity (canonical "
          "negative zero excepted)") {
  for (int c = 0; c < 256; ++c) {
    const auto code = static_cast<std::uint8_t>(c);
    const auto mu_again = mulaw_encode(mulaw_decode(code));
    if (code == 0x7F) {
      // mu-law has two zero codes (+0 = 0xFF, -0 = 0x7F); re-encoding the
      // decoded zero lands on the canonical one.
      CHECK(mu_again == 0xFF);
      CHECK(mulaw_decode(mu_again) == mulaw_decode(code));
    } else {
      CHECK(mu_again == code);
    }
    CHECK(alaw_encode(alaw_decode(code)) == code);
  }
}

TEST_CASE("mu-law maps digital zero to exactly zero") {
  AudioSignal zero;
  zero.sample_rate = 16000;
  zero.samples.assign(1600, 0.0);
  const auto out = mulaw_roundtrip(zero);
  for (double s : out.samples) CHECK(s == 0.0);
}

TEST_CASE("a-law has no zero level: zero maps within half a step") {
  AudioSignal zero;
  zero.sample_rate = 16000;
  zero.samples.assign(1600, 0.0);
  const auto out = alaw_roundtrip(zero);
  for (double s : out.samples) {
    CHECK(std::abs(s) <= 8.0 / 32768.0);
    CHECK(s != 0.0);  // mid-riser: the lattice excludes zero
  }
}

TEST_CASE("sample-level roundtrip is idempotent") {
  const auto audio = sine(0.5, 1000.0, 0.5);
  for (bool use_alaw : {false, true}) {
    const auto once = use_alaw ? alaw_roundtrip(audio) : mulaw_roundtrip(audio);
    const auto twice = use_alaw ? alaw_roundtrip(once) : mulaw_roundtrip(once);
    REQUIRE(once.samples.size() == twice.samples.size());
    for (std::size_t i = 0; i < once.samples.size(); ++i) {
      REQUIRE(once.samples[i] == twice.samples[i]);
    }
  }
}

TEST_CASE("companding SNR on a -6 dBFS tone exceeds 30 dB") {
  const auto audio = sine(1.0, 1000.0, 0.5);  // -6 dBFS
  const auto mu = mulaw_roundtrip(audio);
  const auto al = alaw_roundtrip(audio);
  CHECK(snr_db(audio.samples, mu.samples) > 30.0);
  CHECK(snr_db(audio.samples, al.samples) > 30.0);
}

TEST_CASE("quantization error is bounded by the local step size") {
  // Near full scale the step is 2 * 0x84 * 2^3-ish; globally the error of
  // one roundtrip never exceeds the largest half step.
  const auto audio = sine(0.25, 333.0, 0.99);
  const auto mu = mulaw_roundtrip(audio);
  for (std::size_t i = 0; i < audio.samples.size(); ++i) {
    CHECK(std::abs(mu.samples[i] - audio.samples[i]) <=
          1024.0 / 32768.0);  // half of the widest mu-law step
  }
}

TEST_CASE("roundtrip rejects non-finite and out-of-range input") {
  AudioSignal bad;
  bad.sample_rate = 16000;
  bad.samples = {0.0, 1.5, 0.0};
  CHECK_THROWS_AS(mulaw_roundtrip(bad), Error);
  bad.samples = {0.0, std::nan(""), 0.0};
  CHECK_THROWS_AS(alaw_roundtrip(bad), Error);
}

TEST_CASE("narrowband simulation removes out-of-band energy") {
  // A 7 kHz tone lies far above the 3.4 kHz telephone band and must be
  // strongly attenuated; a 1 kHz tone passes nearly unchanged.
  const auto high = sine(1.0, 7000.0, 0.5);
  const auto high_nb = narrowband_simulate(high);
  double in_power = 0.0, out_power = 0.0;
  for (double s : high.samples) in_power += s * s;
  for (double s : high_nb.samples) out_power += s * s;
  CHECK(out_power < in_power * 1e-4);

  const auto low = sine(1.0, 1000.0, 0.5);
  const auto low_nb = narrowband_simulate(low);
  double low_out = 0.0;
  for (double s : low_nb.samples) low_out += s * s;
  double low_in = 0.0;
  for (double s : low.samples) low_in += s * s;
  CHECK(low_out > 0.8 * low_in);
  CHECK(low_nb.samples.size() == low.samples.size());
  CHECK(low_nb.sample_rate == 16000);
}

TEST_CASE("narrowband requires 16 kHz input") {
  AudioSignal wrong;
  wrong.sample_rate = 8000;
  wrong.samples.assign(8000, 0.1);
  CHECK_THROWS_AS(narrowband_simulate(wrong), Error);
  CHECK_THROWS_AS(mulaw_roundtrip(wrong, /*narrowband=*/true), Error);
}

TEST_CASE("narrowband companding end to end") {
  const auto audio = sine(0.5, 1000.0, 0.5);
  const auto out = mulaw_roundtrip(audio, /*narrowband=*/true);
  CHECK(out.samples.size() == audio.samples.size());
  // Still a recognizable 1 kHz tone: SNR against the bandlimited original
  // is positive and the energy is in the right ballpark.
  double in_power = 0.0, out_power = 0.0;
  for (double s : audio.samples) in_power += s * s;
  for (double s : out.samples) out_power += s * s;
  CHECK(out_power > 0.5 * in_power);
  CHECK(out_power < 1.5 * in_power);
}
