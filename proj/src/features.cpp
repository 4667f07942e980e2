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
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "spliceloc/audio.hpp"

namespace spliceloc {

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// Triangular filters spanning 0 .. Nyquist, equally spaced on the mel scale.
Eigen::MatrixXd mel_filterbank(int n_bands, int fft_size, int sample_rate) {
  const int n_bins = fft_size / 2 + 1;
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> edges(n_bands + 2);
  for (int i = 0; i < n_bands + 2; ++i)
    edges[i] = mel_to_hz(mel_max * i / (n_bands + 1));

  Eigen::MatrixXd fb = Eigen::MatrixXd::Zero(n_bands, n_bins);
  for (int b = 0; b < n_bands; ++b) {
    const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
    for (int k = 0; k < n_bins; ++k) {
      const double f = static_cast<double>(k) * sample_rate / fft_size;
      if (f > lo && f < hi)
        fb(b, k) = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
    }
  }
  return fb;
}

}  // namespace

FrameFeatures compute_features(const Waveform& w, const FrameGridSpec& grid,
                               const FeatureConfig& cfg) {
  if (w.size() < static_cast<std::size_t>(grid.hop_samples))
    throw DataError("waveform shorter than one frame (" + std::to_string(w.size()) +
                    " samples)");
  if (cfg.fft_size < cfg.analysis_window)
    throw std::invalid_argument("fft size must cover the analysis window");

  const int frames = n_frames(w.size(), grid);
  const int n_bins = cfg.fft_size / 2 + 1;
  const int win = cfg.analysis_window;
  const long long n = static_cast<long long>(w.size());
  const double eps = cfg.energy_floor;

  std::vector<double> hann(win);
  for (int i = 0; i < win; ++i)
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / win);
  const Eigen::MatrixXd fb = mel_filterbank(cfg.n_mel_bands, cfg.fft_size, w.sample_rate);

  FrameFeatures out;
  out.matrix.resize(frames, cfg.dim());

  Eigen::FFT<double> fft;
  std::vector<double> raw(win), buf(cfg.fft_size);
  std::vector<std::complex<double>> spec;
  Eigen::VectorXd power(n_bins), mag(n_bins), prev_norm_mag = Eigen::VectorXd::Zero(n_bins);

  for (int i = 0; i < frames; ++i) {
    const long long start =
        static_cast<long long>(i) * grid.hop_samples + grid.hop_samples / 2 - win / 2;
    for (int j = 0; j < win; ++j) {
      const long long s = start + j;
      raw[j] = (s >= 0 && s < n) ? w.samples[s] : 0.0;
    }

    double energy = 0.0;
    int crossings = 0;
    for (int j = 0; j < win; ++j) {
      energy += raw[j] * raw[j];
      if (j > 0 && raw[j] * raw[j - 1] < 0.0) ++crossings;
    }
    energy /= win;

    std::fill(buf.begin(), buf.end(), 0.0);
    for (int j = 0; j < win; ++j) buf[j] = raw[j] * hann[j];
    fft.fwd(spec, buf);
    for (int k = 0; k < n_bins; ++k) {
      power[k] = std::norm(spec[k]);
      mag[k] = std::sqrt(power[k]);
    }

    const double total_power = power.sum();
    double centroid = 0.0;
    if (total_power > eps) {
      double weighted = 0.0;
      for (int k = 0; k < n_bins; ++k)
        weighted += power[k] * k * static_cast<double>(w.sample_rate) / cfg.fft_size;
      centroid = weighted / total_power;
    }

    // Flux: L2 distance between consecutive L1-normalized magnitude spectra.
    const double mag_sum = mag.sum();
    Eigen::VectorXd norm_mag =
        mag_sum > eps ? Eigen::VectorXd(mag / mag_sum) : Eigen::VectorXd::Zero(n_bins);
    const double flux = i == 0 ? 0.0 : (norm_mag - prev_norm_mag).norm();
    prev_norm_mag = norm_mag;

    out.matrix(i, 0) = std::log(eps + energy);
    out.matrix(i, 1) = static_cast<double>(crossings) / (win - 1);
    out.matrix(i, 2) = centroid;
    out.matrix(i, 3) = flux;
    const Eigen::VectorXd bands = fb * power;
    for (int b = 0; b < cfg.n_mel_bands; ++b)
      out.matrix(i, 4 + b) = std::log(eps + bands[b] / cfg.fft_size);
  }
  return out;
}

}  // namespace spliceloc
