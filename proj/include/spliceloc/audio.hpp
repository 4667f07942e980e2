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

#ifndef SPLICELOC_AUDIO_HPP_
#define SPLICELOC_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spliceloc {

inline constexpr int kSampleRate = 16000;

/// Thrown for any malformed or out-of-contract input data (files, manifests,
/// score files, arguments). The CLI maps it to the data-error exit code.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mono PCM signal with amplitudes in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Checks the Waveform invariants; throws DataError if any is violated.
void validate(const Waveform& w);

/// The 20 ms label grid plus the fixed clip window and inference step.
/// Defaults: 320-sample hop, 20480-sample (1.28 s) window, 10240-sample step.
struct FrameGridSpec {
  int hop_samples = 320;
  int window_samples = 20480;
  int step_samples = 10240;

  int frames_per_window() const { return window_samples / hop_samples; }
  double frame_seconds(int sample_rate = kSampleRate) const {
    return static_cast<double>(hop_samples) / sample_rate;
  }
  friend bool operator==(const FrameGridSpec&, const FrameGridSpec&) = default;
};

/// Throws std::invalid_argument unless hop | window, hop | step and
/// step <= window.
void validate(const FrameGridSpec& grid);

/// Row-major frame-by-dimension feature matrix.
struct FrameFeatures {
  Eigen::MatrixXd matrix;  // n_frames x dim

  int n_frames() const { return static_cast<int>(matrix.rows()); }
  int dim() const { return static_cast<int>(matrix.cols()); }
};

enum class SampleFormat { kPcm16, kFloat32 };

Waveform read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const Waveform& w,
               SampleFormat format = SampleFormat::kPcm16);

/// floor(n_samples / hop).
int n_frames(std::size_t n_samples, const FrameGridSpec& grid);

/// Exactly `length` samples starting at `start_sample`. When the source runs
/// out, the available region [start_sample, size) is repeated cyclically.
Waveform extract_clip(const Waveform& w, std::size_t start_sample,
                      std::size_t length);

struct FeatureConfig {
  int analysis_window = 400;  // 25 ms
  int fft_size = 512;
  int n_mel_bands = 16;
  double energy_floor = 1e-10;

  int dim() const { return 4 + n_mel_bands; }
  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// Per-frame log energy, zero-crossing rate, spectral centroid (Hz),
/// spectral flux and log mel-band energies. The analysis window of frame i is
/// centered on the frame's hop interval and zero-padded at the signal edges.
FrameFeatures compute_features(const Waveform& w, const FrameGridSpec& grid,
                               const FeatureConfig& cfg = {});

}  // namespace spliceloc

#endif  // SPLICELOC_AUDIO_HPP_
