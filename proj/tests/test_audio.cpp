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


#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "spliceloc/audio.hpp"
#include "spliceloc/random.hpp"

using namespace spliceloc;

namespace {

void put16(std::ofstream& f, std::uint16_t v) { f.put(char(v & 0xff)).put(char(v >> 8)); }
void put32(std::ofstream& f, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) f.put(char((v >> (8 * i)) & 0xff));
}

// Minimal hand-assembled PCM16 WAV with interleaved channels.
void write_raw_pcm16(const std::filesystem::path& p, const std::vector<std::int16_t>& interleaved,
                     int channels, int rate) {
  std::ofstream f(p, std::ios::binary);
  const auto data_bytes = static_cast<std::uint32_t>(interleaved.size() * 2);
  f.write("RIFF", 4);
  put32(f, 36 + data_bytes);
  f.write("WAVEfmt ", 8);
  put32(f, 16);
  put16(f, 1);
  put16(f, static_cast<std::uint16_t>(channels));
  put32(f, static_cast<std::uint32_t>(rate));
  put32(f, static_cast<std::uint32_t>(rate * channels * 2));
  put16(f, static_cast<std::uint16_t>(channels * 2));
  put16(f, 16);
  f.write("data", 4);
  put32(f, data_bytes);
  for (auto s : interleaved) put16(f, static_cast<std::uint16_t>(s));
}

Waveform sine(double hz, int n, double amp = 0.5) {
  Waveform w;
  w.samples.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) w.samples[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / kSampleRate);
  return w;
}

}  // namespace

TEST_CASE("n_frames floors and is hop periodic") {
  const FrameGridSpec g;
  CHECK(n_frames(20480, g) == 64);
  CHECK(n_frames(20479, g) == 63);
  CHECK(n_frames(0, g) == 0);
  for (int k = 0; k < 200; ++k) {
    CHECK(n_frames(static_cast<std::size_t>(k) * 320, g) == k);
    CHECK(n_frames(static_cast<std::size_t>(k) * 320 + 319, g) == k);
  }
  CHECK(g.frames_per_window() == 64);
}

TEST_CASE("grid validation") {
  CHECK_NOTHROW(validate(FrameGridSpec{}));
  CHECK_THROWS_AS(validate(FrameGridSpec{300, 20480, 10240}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FrameGridSpec{320, 20480, 40960}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FrameGridSpec{320, 20480, 100}), std::invalid_argument);
}

TEST_CASE("extract_clip") {
  Rng rng(7);
  Waveform w;
  for (int i = 0; i < 48000; ++i) w.samples.push_back(uniform(rng, -1, 1));

  SUBCASE("prefix of a long clip is verbatim") {
    const Waveform c = extract_clip(w, 0, 20480);
    REQUIRE(c.size() == 20480);
    CHECK(std::equal(c.samples.begin(), c.samples.end(), w.samples.begin()));
  }
  SUBCASE("short source repeats cyclically") {
    Waveform s;
    s.samples.assign(w.samples.begin(), w.samples.begin() + 10240);
    const Waveform c = extract_clip(s, 0, 20480);
    REQUIRE(c.size() == 20480);
    for (std::size_t i = 0; i < 20480; ++i) CHECK(c.samples[i] == s.samples[i % 10240]);
  }
  SUBCASE("random starts match a slice oracle") {
    for (int t = 0; t < 200; ++t) {
      const auto start = static_cast<std::size_t>(uniform_int(rng, 0, 48000 - 20480));
      const Waveform c = extract_clip(w, start, 20480);
      CHECK(std::memcmp(c.samples.data(), w.samples.data() + start, 20480 * sizeof(double)) == 0);
    }
  }
  SUBCASE("output length always equals the request") {
    for (int t = 0; t < 200; ++t) {
      Waveform s;
      s.samples.assign(static_cast<std::size_t>(uniform_int(rng, 1, 3000)), 0.25);
      const auto start = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(s.size()) - 1));
      const auto len = static_cast<std::size_t>(uniform_int(rng, 1, 5000));
      CHECK(extract_clip(s, start, len).size() == len);
    }
  }
  SUBCASE("start out of range") { CHECK_THROWS_AS(extract_clip(w, 48000, 10), DataError); }
}

TEST_CASE("WAV round trip and normalization") {
  const auto dir = oracle::scratch_dir("wav");
  Rng rng(3);
  Waveform w;
  for (int i = 0; i < 16000; ++i) w.samples.push_back(uniform(rng, -1, 1));

  SUBCASE("pcm16 within one LSB") {
    write_wav(dir / "a.wav", w);
    const Waveform r = read_wav(dir / "a.wav");
    REQUIRE(r.size() == w.size());
    CHECK(r.sample_rate == 16000);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(r.samples[i] - w.samples[i]) <= 1.0 / 32768.0);
  }
  SUBCASE("float32 within float precision") {
    write_wav(dir / "b.wav", w, SampleFormat::kFloat32);
    const Waveform r = read_wav(dir / "b.wav");
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(r.samples[i] - w.samples[i]) < 1e-7);
  }
  SUBCASE("silence") {
    write_raw_pcm16(dir / "s.wav", std::vector<std::int16_t>(16000, 0), 1, 16000);
    const Waveform r = read_wav(dir / "s.wav");
    CHECK(r.size() == 16000);
    CHECK(std::all_of(r.samples.begin(), r.samples.end(), [](double s) { return s == 0.0; }));
  }
  SUBCASE("full-scale sample") {
    write_raw_pcm16(dir / "m.wav", {32767, -32768}, 1, 16000);
    const Waveform r = read_wav(dir / "m.wav");
    CHECK(r.samples[0] == doctest::Approx(32767.0 / 32768.0).epsilon(1e-12));
    CHECK(r.samples[1] == -1.0);
  }
  SUBCASE("stereo averages channels") {
    std::vector<std::int16_t> inter;
    std::vector<double> expect;
    for (int i = 0; i < 1000; ++i) {
      const auto l = static_cast<std::int16_t>(uniform_int(rng, -32768, 32767));
      const auto r = static_cast<std::int16_t>(uniform_int(rng, -32768, 32767));
      inter.push_back(l);
      inter.push_back(r);
      expect.push_back((l / 32768.0 + r / 32768.0) / 2.0);
    }
    write_raw_pcm16(dir / "st.wav", inter, 2, 16000);
    const Waveform r = read_wav(dir / "st.wav");
    REQUIRE(r.size() == 1000);
    for (std::size_t i = 0; i < 1000; ++i) CHECK(r.samples[i] == doctest::Approx(expect[i]).epsilon(1e-15));
  }
  SUBCASE("errors") {
    write_raw_pcm16(dir / "r.wav", std::vector<std::int16_t>(100, 0), 1, 8000);
    CHECK_THROWS_AS(read_wav(dir / "r.wav"), DataError);
    write_raw_pcm16(dir / "z.wav", {}, 1, 16000);
    CHECK_THROWS_AS(read_wav(dir / "z.wav"), DataError);
    CHECK_THROWS_AS(read_wav(dir / "missing.wav"), DataError);
    std::ofstream(dir / "junk.wav") << "not a wave file at all";
    CHECK_THROWS_AS(read_wav(dir / "junk.wav"), DataError);
  }
}

TEST_CASE("features") {
  const FrameGridSpec g;
  const FeatureConfig fc;
  CHECK(fc.dim() == 20);

  SUBCASE("silence hits the energy floor") {
    Waveform w;
    w.samples.assign(16000, 0.0);
    const auto f = compute_features(w, g).matrix;
    REQUIRE(f.rows() == 50);
    REQUIRE(f.cols() == 20);
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
      CHECK(f(i, 0) == doctest::Approx(std::log(1e-10)));
      CHECK(f(i, 1) == 0.0);
    }
    CHECK(f.allFinite());
  }
  SUBCASE("1 kHz sine centroid agrees with a direct DFT") {
    const Waveform w = sine(1000.0, 16000);
    const auto f = compute_features(w, g).matrix;
    for (int i = 5; i < 45; ++i) {
      const int start = i * 320 + 160 - 200;
      const double ref = oracle::dft_centroid(w.samples, start, 400, kSampleRate);
      CHECK(std::abs(f(i, 2) - 1000.0) < 50.0);
      CHECK(std::abs(f(i, 2) - ref) < 50.0);
      CHECK(std::abs(ref - 1000.0) < 50.0);
    }
  }
  SUBCASE("zero crossing rate of a sine") {
    const auto f = compute_features(sine(1000.0, 16000), g).matrix;
    // 2 crossings per period -> 2000 per second -> 0.125 per sample.
    CHECK(f(20, 1) == doctest::Approx(0.125).epsilon(0.05));
  }
  SUBCASE("stationary signal has near-zero flux, a switch spikes it") {
    Waveform w = sine(500.0, 16000);
    const Waveform hi = sine(3000.0, 16000);
    std::copy(hi.samples.begin() + 8000, hi.samples.end(), w.samples.begin() + 8000);
    const auto f = compute_features(w, g).matrix;
    CHECK(f(10, 3) < 0.05);
    CHECK(f(25, 3) > 0.5);
  }
  SUBCASE("deterministic and finite on random input") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
      Waveform w;
      const auto n = uniform_int(rng, 320, 40000);
      for (std::int64_t i = 0; i < n; ++i) w.samples.push_back(uniform(rng, -1, 1) * (t % 3 == 0 ? 1e-9 : 1.0));
      const auto a = compute_features(w, g).matrix;
      const auto b = compute_features(w, g).matrix;
      CHECK(a.rows() == n_frames(w.size(), g));
      CHECK(a.allFinite());
      CHECK(std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0);
    }
  }
  SUBCASE("too short") {
    Waveform w;
    w.samples.assign(100, 0.1);
    CHECK_THROWS_AS(compute_features(w, g), DataError);
  }
}

TEST_CASE("waveform validation") {
  Waveform w;
  CHECK_THROWS_AS(validate(w), DataError);
  w.samples = {0.0, std::nan("")};
  CHECK_THROWS_AS(validate(w), DataError);
  w.samples = {0.0, 0.5};
  CHECK_NOTHROW(validate(w));
}
