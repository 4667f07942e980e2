// Copyright 2026  The spliceloc Authors
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

#include "spliceloc/audio.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

namespace spliceloc {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

void validate(const Waveform& w) {
  if (w.samples.empty()) throw DataError("waveform is empty");
  if (w.sample_rate <= 0) throw DataError("waveform sample rate must be positive");
  for (double s : w.samples) {
    if (!std::isfinite(s)) throw DataError("waveform contains non-finite samples");
  }
}

void validate(const FrameGridSpec& grid) {
  if (grid.hop_samples <= 0 || grid.window_samples <= 0 || grid.step_samples <= 0)
    throw std::invalid_argument("frame grid values must be positive");
  if (grid.window_samples % grid.hop_samples != 0)
    throw std::invalid_argument("hop must divide the window length");
  if (grid.step_samples % grid.hop_samples != 0)
    throw std::invalid_argument("hop must divide the inference step");
  if (grid.step_samples > grid.window_samples)
    throw std::invalid_argument("inference step must not exceed the window");
}

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw DataError(where + "not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    std::uint32_t size = get_u32(chunk + 4);
    std::size_t body = pos + 8;
    std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw DataError(where + "truncated fmt chunk");
      const unsigned char* f = bytes.data() + body;
      format = get_u16(f);
      channels = get_u16(f + 2);
      rate = get_u32(f + 4);
      bits = get_u16(f + 14);
      if (format == kFormatExtensible) {
        if (avail < 26) throw DataError(where + "truncated extensible fmt chunk");
        format = get_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = avail;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw DataError(where + "missing fmt chunk");
  if (data == nullptr) throw DataError(where + "missing data chunk");
  if (channels == 0) throw DataError(where + "zero channels");
  if (rate != static_cast<std::uint32_t>(kSampleRate))
    throw DataError(where + "unsupported sample rate " + std::to_string(rate) +
                    " (expected 16000)");

  std::size_t bytes_per_sample = 0;
  if (format == kFormatPcm && bits == 16) {
    bytes_per_sample = 2;
  } else if (format == kFormatFloat && bits == 32) {
    bytes_per_sample = 4;
  } else {
    throw DataError(where + "unsupported encoding (format " + std::to_string(format) +
                    ", " + std::to_string(bits) + " bits)");
  }

  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n = data_size / frame_bytes;
  if (n == 0) throw DataError(where + "zero-length audio");

  Waveform w;
  w.sample_rate = static_cast<int>(rate);
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const unsigned char* p = data + i * frame_bytes + c * bytes_per_sample;
      if (bytes_per_sample == 2) {
        acc += static_cast<std::int16_t>(get_u16(p)) / 32768.0;
      } else {
        acc += static_cast<double>(std::bit_cast<float>(get_u32(p)));
      }
    }
    w.samples[i] = acc / channels;
  }
  validate(w);
  return w;
}

void write_wav(const std::filesystem::path& path, const Waveform& w,
               SampleFormat format) {
  validate(w);
  const bool pcm = format == SampleFormat::kPcm16;
  const std::uint16_t bits = pcm ? 16 : 32;
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(w.samples.size() * (bits / 8));

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32(out, 36 + data_size);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, pcm ? kFormatPcm : kFormatFloat);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(w.sample_rate) * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_size);
  for (double s : w.samples) {
    if (pcm) {
      double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
      auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
      put_u16(out, static_cast<std::uint16_t>(v));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(s)));
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError("write failed for " + path.string());
}

int n_frames(std::size_t n_samples, const FrameGridSpec& grid) {
  return static_cast<int>(n_samples / static_cast<std::size_t>(grid.hop_samples));
}

Waveform extract_clip(const Waveform& w, std::size_t start_sample,
                      std::size_t length) {
  if (start_sample >= w.size())
    throw DataError("clip start " + std::to_string(start_sample) +
                    " outside waveform of " + std::to_string(w.size()) + " samples");
  Waveform clip;
  clip.sample_rate = w.sample_rate;
  clip.samples.resize(length);
  const std::size_t n = w.size();
  std::size_t src = start_sample;
  for (std::size_t i = 0; i < length; ++i) {
    clip.samples[i] = w.samples[src];
    if (++src == n) src = start_sample;
  }
  return clip;
}

}  // namespace spliceloc
