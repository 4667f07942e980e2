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

#include "spliceloc/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace spliceloc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Formant {
  double center;
  double bandwidth;
  double gain;
  double drift_depth;
  double drift_rate;
  double drift_phase;
};

}  // namespace

Waveform synth_voice(Rng& rng, const VoiceConfig& cfg) {
  const double sr = kSampleRate;
  const auto n = static_cast<std::size_t>(uniform(rng, cfg.min_seconds, cfg.max_seconds) * sr);
  const double f0_base = uniform(rng, cfg.min_f0, cfg.max_f0);
  const double f0_slow = uniform(rng, 0.05, 0.12), f0_slow_rate = uniform(rng, 0.3, 0.8);
  const double f0_fast = uniform(rng, 0.01, 0.04), f0_fast_rate = uniform(rng, 1.5, 3.0);
  const double ph1 = uniform(rng, 0, kTwoPi), ph2 = uniform(rng, 0, kTwoPi);
  const double syll_rate = uniform(rng, 3.0, 6.0), syll_phase = uniform(rng, 0, kTwoPi);
  const double tilt = uniform(rng, 0.6, 1.2);
  const double breath = uniform(rng, 0.005, 0.02);

  std::array<Formant, 3> formants{{
      {uniform(rng, 300, 900), uniform(rng, 60, 140), 1.0, uniform(rng, 0.05, 0.2),
       uniform(rng, 1.0, 3.0), uniform(rng, 0, kTwoPi)},
      {uniform(rng, 900, 2400), uniform(rng, 90, 200), uniform(rng, 0.4, 0.9),
       uniform(rng, 0.05, 0.2), uniform(rng, 1.0, 3.0), uniform(rng, 0, kTwoPi)},
      {uniform(rng, 2400, 3600), uniform(rng, 120, 260), uniform(rng, 0.2, 0.5),
       uniform(rng, 0.03, 0.1), uniform(rng, 1.0, 3.0), uniform(rng, 0, kTwoPi)},
  }};

  std::normal_distribution<double> gauss(0.0, 1.0);
  Waveform w;
  w.samples.resize(n);

  constexpr std::size_t kBlock = 64;
  std::vector<double> amps;
  double theta = 0.0;
  for (std::size_t b0 = 0; b0 < n; b0 += kBlock) {
    const double t = b0 / sr;
    const double f0 = f0_base * (1.0 + f0_slow * std::sin(kTwoPi * f0_slow_rate * t + ph1) +
                                 f0_fast * std::sin(kTwoPi * f0_fast_rate * t + ph2));
    const int harmonics = std::max(1, static_cast<int>(7500.0 / f0));
    amps.assign(harmonics, 0.0);
    for (int k = 1; k <= harmonics; ++k) {
      const double f = k * f0;
      double env = 0.02;
      for (const auto& fm : formants) {
        const double c = fm.center * (1.0 + fm.drift_depth *
                                                std::sin(kTwoPi * fm.drift_rate * t + fm.drift_phase));
        const double d = (f - c) / fm.bandwidth;
        env += fm.gain / (1.0 + d * d);
      }
      amps[k - 1] = env / std::pow(k, tilt);
    }
    const double env = 0.35 + 0.65 * (0.5 - 0.5 * std::cos(kTwoPi * syll_rate * t + syll_phase));
    const double dtheta = kTwoPi * f0 / sr;

    const std::size_t b1 = std::min(n, b0 + kBlock);
    for (std::size_t i = b0; i < b1; ++i) {
      theta += dtheta;
      if (theta > kTwoPi) theta -= kTwoPi;
      // sin(k*theta) by the Chebyshev recurrence.
      const double two_cos = 2.0 * std::cos(theta);
      double s_prev = 0.0, s_cur = std::sin(theta), acc = 0.0;
      for (int k = 0; k < harmonics; ++k) {
        acc += amps[k] * s_cur;
        const double s_next = two_cos * s_cur - s_prev;
        s_prev = s_cur;
        s_cur = s_next;
      }
      w.samples[i] = env * acc + breath * gauss(rng);
    }
  }

  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::abs(s));
  if (peak > 0.0) {
    for (double& s : w.samples) s *= cfg.peak / peak;
  }
  return w;
}

Waveform degrade(const Waveform& w, const DegradeConfig& cfg) {
  const int nfft = cfg.fft_size;
  const int hop = nfft / 2;
  const int n_bins = nfft / 2 + 1;
  const auto n = static_cast<long long>(w.size());
  const double step = cfg.level_step_db / 20.0 * std::log(10.0);

  std::vector<double> window(nfft);
  for (int i = 0; i < nfft; ++i)
    window[i] = std::sqrt(0.5 - 0.5 * std::cos(kTwoPi * i / nfft));  // periodic sqrt-Hann

  // Pad by one hop on each side so every output sample is covered by two
  // frames whose squared windows sum to one.
  std::vector<double> out(static_cast<std::size_t>(n + 2 * hop + nfft), 0.0);
  Eigen::FFT<double> fft;
  std::vector<double> frame(nfft), time;
  std::vector<std::complex<double>> spec;

  for (long long start = -hop; start < n; start += hop) {
    for (int j = 0; j < nfft; ++j) {
      const long long s = start + j;
      frame[j] = (s >= 0 && s < n ? w.samples[s] : 0.0) * window[j];
    }
    fft.fwd(spec, frame);
    for (int b = 0; b < cfg.n_bands; ++b) {
      const int lo = b * n_bins / cfg.n_bands;
      const int hi = (b + 1) * n_bins / cfg.n_bands;
      double mean = 0.0;
      for (int k = lo; k < hi; ++k) mean += std::abs(spec[k]);
      mean /= std::max(1, hi - lo);
      if (mean > 0.0 && step > 0.0) mean = std::exp(std::round(std::log(mean) / step) * step);
      for (int k = lo; k < hi; ++k) {
        const double mag = std::abs(spec[k]);
        spec[k] = mag > 0.0 ? spec[k] * (mean / mag) : std::complex<double>(mean, 0.0);
      }
    }
    for (int k = 1; k < nfft / 2; ++k) spec[nfft - k] = std::conj(spec[k]);
    spec[0] = spec[0].real();
    spec[nfft / 2] = spec[nfft / 2].real();
    fft.inv(time, spec);
    for (int j = 0; j < nfft; ++j) out[static_cast<std::size_t>(start + hop + j)] += time[j] * window[j];
  }

  Waveform result;
  result.sample_rate = w.sample_rate;
  result.samples.assign(out.begin() + hop, out.begin() + hop + n);
  if (cfg.match_loudness) {
    double e_in = 0.0, e_out = 0.0;
    for (double s : w.samples) e_in += s * s;
    for (double s : result.samples) e_out += s * s;
    if (e_out > 0.0) {
      const double gain = std::sqrt(e_in / e_out);
      for (double& s : result.samples) s *= gain;
    }
  }
  for (double& s : result.samples) s = std::clamp(s, -1.0, 1.0);
  return result;
}

}  // namespace spliceloc
