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

#include "spliceloc/augment.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace spliceloc {

namespace {

double mean_power(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

std::vector<double> convolve_truncated(std::span<const double> x, std::span<const double> h) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  if (h.size() <= 64) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < h.size() && k <= i; ++k) acc += h[k] * x[i - k];
      y[i] = acc;
    }
    return y;
  }
  std::size_t nfft = 1;
  while (nfft < n + h.size()) nfft <<= 1;
  std::vector<double> xa(nfft, 0.0), ha(nfft, 0.0), out;
  std::copy(x.begin(), x.end(), xa.begin());
  std::copy(h.begin(), h.end(), ha.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> fx, fh;
  fft.fwd(fx, xa);
  fft.fwd(fh, ha);
  for (std::size_t k = 0; k < fx.size(); ++k) fx[k] *= fh[k];
  fft.inv(out, fx);
  std::copy(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), y.begin());
  return y;
}

}  // namespace

Waveform add_noise(const Waveform& w, double snr_db, NoiseKind kind, Rng& rng) {
  const std::size_t n = w.size();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(n);
  if (kind == NoiseKind::kWhite) {
    for (auto& v : noise) v = gauss(rng);
  } else {
    const double rate = uniform(rng, 3.0, 5.0), phase = uniform(rng, 0.0, 2 * std::numbers::pi);
    double lp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lp = 0.9 * lp + 0.1 * gauss(rng);
      const double t = static_cast<double>(i) / w.sample_rate;
      noise[i] = lp * (0.6 + 0.4 * std::sin(2 * std::numbers::pi * rate * t + phase));
    }
  }
  const double ps = mean_power(w.samples), pn = mean_power(noise);
  Waveform out = w;
  if (ps <= 0.0 || pn <= 0.0) return out;
  const double scale = std::sqrt(ps / (pn * std::pow(10.0, snr_db / 10.0)));
  for (std::size_t i = 0; i < n; ++i) out.samples[i] += scale * noise[i];
  return out;
}

std::vector<double> make_reverb_impulse(double rt60_seconds, Rng& rng, int sample_rate) {
  const auto len = static_cast<std::size_t>(std::max(1.0, rt60_seconds * sample_rate));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> h(len);
  h[0] = 1.0;
  // 60 dB amplitude decay over rt60: exp(-6.9078 * t / rt60).
  const double decay = std::log(1000.0) / (rt60_seconds * sample_rate);
  for (std::size_t i = 1; i < len; ++i) h[i] = 0.3 * gauss(rng) * std::exp(-decay * i);
  return h;
}

Waveform apply_reverb(const Waveform& w, std::span<const double> impulse) {
  if (impulse.size() == 1 && impulse[0] == 1.0) return w;
  Waveform out = w;
  out.samples = convolve_truncated(w.samples, impulse);
  const double pin = mean_power(w.samples), pout = mean_power(out.samples);
  if (pout > 0.0) {
    const double g = std::sqrt(pin / pout);
    for (double& s : out.samples) s *= g;
  }
  return out;
}

Waveform augment(const Waveform& w, const AugmentConfig& cfg, Rng& rng) {
  Waveform out = w;
  if (cfg.reverb_prob > 0.0 && uniform(rng, 0.0, 1.0) < cfg.reverb_prob) {
    const auto h = make_reverb_impulse(uniform(rng, cfg.min_rt60, cfg.max_rt60), rng, w.sample_rate);
    out = apply_reverb(out, h);
  }
  if (cfg.noise_prob > 0.0 && uniform(rng, 0.0, 1.0) < cfg.noise_prob) {
    const auto kind = uniform(rng, 0.0, 1.0) < 0.5 ? NoiseKind::kWhite : NoiseKind::kBabble;
    out = add_noise(out, uniform(rng, cfg.min_snr_db, cfg.max_snr_db), kind, rng);
  }
  for (double& s : out.samples) s = std::clamp(s, -1.0, 1.0);
  return out;
}

}  // namespace spliceloc
