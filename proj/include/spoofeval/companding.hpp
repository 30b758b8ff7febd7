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

#ifndef SPOOFEVAL_COMPANDING_HPP_
#define SPOOFEVAL_COMPANDING_HPP_

#include <cstdint>

#include "spoofeval/audio.hpp"

namespace spoofeval {

/// ITU-T G.711 mu-law (mu = 255): 16-bit linear PCM to the 8-bit companded
/// code (all bits inverted for transmission) and back.  Decoded values are
/// interval midpoints at 16-bit scale.
std::uint8_t mulaw_encode(std::int16_t pcm);
std::int16_t mulaw_decode(std::uint8_t code);

/// ITU-T G.711 A-law (A = 87.6): 16-bit linear PCM to the 8-bit companded
/// code (even bits inverted for transmission) and back.
std::uint8_t alaw_encode(std::int16_t pcm);
std::int16_t alaw_decode(std::uint8_t code);

/// Encodes every sample to G.711 mu-law and decodes it back, quantizing the
/// signal as a telephony codec would.  With `narrowband` set, the signal is
/// additionally band-limited to telephone bandwidth by a 16 kHz -> 8 kHz ->
/// 16 kHz resampling chain before companding.  ClippedInput if any |sample|
/// exceeds 1.
AudioSignal mulaw_roundtrip(const AudioSignal& signal, bool narrowband = false);

/// A-law counterpart of mulaw_roundtrip.
AudioSignal alaw_roundtrip(const AudioSignal& signal, bool narrowband = false);

/// Band-limits a 16 kHz signal to telephone bandwidth: low-pass at 3.4 kHz,
/// decimate to 8 kHz, interpolate back to 16 kHz (same length, linear
/// phase).  BadAudio if the rate is not 16 kHz.
AudioSignal narrowband_simulate(const AudioSignal& signal);

}  // namespace spoofeval

#endif  // SPOOFEVAL_COMPANDING_HPP_
