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

#ifndef SPOOFEVAL_AUDIO_HPP_
#define SPOOFEVAL_AUDIO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "spoofeval/error.hpp"

namespace spoofeval {

/// A mono audio signal.  Samples are doubles, nominally in [-1, 1] when
/// converted from 16-bit PCM (divide by 32768).
struct AudioSignal {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }
};

/// Converts a 16-bit PCM sample to a double in [-1, 1).
double pcm16_to_double(std::int16_t sample);

/// Converts a double to 16-bit PCM: scale by 32768, round to nearest, clamp
/// to [-32768, 32767].
std::int16_t double_to_pcm16(double sample);

/// Reads a RIFF/WAVE file containing 16-bit PCM mono audio.  Anything else
/// (stereo, float samples, compressed formats, truncated chunks) raises
/// BadAudio.
AudioSignal read_wav(const std::string& path);

/// Writes a 16-bit PCM mono RIFF/WAVE file.
void write_wav(const std::string& path, const AudioSignal& signal);

/// Reads a headerless file of little-endian 16-bit PCM samples at the given
/// rate.  An odd byte count raises BadAudio.
AudioSignal read_raw_pcm16(const std::string& path, int sample_rate);

}  // namespace spoofeval

#endif  // SPOOFEVAL_AUDIO_HPP_
