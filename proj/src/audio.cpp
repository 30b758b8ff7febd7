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

#include "spoofeval/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace spoofeval {

namespace {

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u16(std::ostream& out, std::uint16_t v) {
  char buf[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.write(buf, 2);
}

void write_u32(std::ostream& out, std::uint32_t v) {
  char buf[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff),
                 static_cast<char>(v >> 24)};
  out.write(buf, 4);
}

std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::bad_file, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace

double pcm16_to_double(std::int16_t sample) {
  return static_cast<double>(sample) / 32768.0;
}

std::int16_t double_to_pcm16(double sample) {
  double scaled = std::round(sample * 32768.0);
  scaled = std::clamp(scaled, -32768.0, 32767.0);
  return static_cast<std::int16_t>(scaled);
}

AudioSignal read_wav(const std::string& path) {
  std::vector<unsigned char> bytes = read_file_bytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail(ErrorKind::bad_audio, path + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint16_t format = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    std::uint32_t chunk_size = read_u32(chunk + 4);
    if (pos + 8 + chunk_size > bytes.size()) {
      fail(ErrorKind::bad_audio, path + ": truncated chunk");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16) fail(ErrorKind::bad_audio, path + ": short fmt chunk");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = chunk_size;
    }
    // Chunks are word-aligned: odd sizes carry one pad byte.
    pos += 8 + chunk_size + (chunk_size & 1);
  }

  if (!have_fmt || data == nullptr) {
    fail(ErrorKind::bad_audio, path + ": missing fmt or data chunk");
  }
  if (format != 1) fail(ErrorKind::bad_audio, path + ": not PCM");
  if (channels != 1) fail(ErrorKind::bad_audio, path + ": not mono");
  if (bits != 16) fail(ErrorKind::bad_audio, path + ": not 16-bit");
  if (data_size % 2 != 0) fail(ErrorKind::bad_audio, path + ": odd data size");

  AudioSignal signal;
  signal.sample_rate = static_cast<int>(rate);
  signal.samples.resize(data_size / 2);
  for (std::size_t i = 0; i < signal.samples.size(); ++i) {
    std::uint16_t raw = read_u16(data + 2 * i);
    signal.samples[i] = pcm16_to_double(static_cast<std::int16_t>(raw));
  }
  return signal;
}

void write_wav(const std::string& path, const AudioSignal& signal) {
  if (signal.sample_rate <= 0) {
    fail(ErrorKind::bad_audio, "sample rate must be positive");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::bad_file, "cannot open " + path + " for writing");

  std::uint32_t data_size =
      static_cast<std::uint32_t>(signal.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<std::uint32_t>(signal.sample_rate));
  write_u32(out, static_cast<std::uint32_t>(signal.sample_rate) * 2);
  write_u16(out, 2);   // block align
  write_u16(out, 16);  // bits per sample
  out.write("data", 4);
  write_u32(out, data_size);
  for (double sample : signal.samples) {
    write_u16(out, static_cast<std::uint16_t>(double_to_pcm16(sample)));
  }
  if (!out) fail(ErrorKind::bad_file, "failed writing " + path);
}

AudioSignal read_raw_pcm16(const std::string& path, int sample_rate) {
  if (sample_rate <= 0) fail(ErrorKind::bad_audio, "sample rate must be positive");
  std::vector<unsigned char> bytes = read_file_bytes(path);
  if (bytes.size() % 2 != 0) {
    fail(ErrorKind::bad_audio, path + ": odd byte count for 16-bit PCM");
  }
  AudioSignal signal;
  signal.sample_rate = sample_rate;
  signal.samples.resize(bytes.size() / 2);
  for (std::size_t i = 0; i < signal.samples.size(); ++i) {
    std::uint16_t raw = read_u16(bytes.data() + 2 * i);
    signal.samples[i] = pcm16_to_double(static_cast<std::int16_t>(raw));
  }
  return signal;
}

}  // namespace spoofeval
