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

#ifndef SPLICELOC_AUGMENT_HPP_
#define SPLICELOC_AUGMENT_HPP_

#include <span>
#include <vector>

#include "spliceloc/audio.hpp"
#include "spliceloc/random.hpp"

namespace spliceloc {

enum class NoiseKind { kWhite, kBabble };

struct AugmentConfig {
  double noise_prob = 0.2;
  double reverb_prob = 0.1;
  double min_snr_db = 5.0;
  double max_snr_db = 20.0;
  double min_rt60 = 0.1;  // seconds
  double max_rt60 = 0.4;
};

/// Adds noise scaled so that signal power / noise power = 10^(snr_db/10).
/// Babble-like noise is low-passed white noise with a syllabic (4 Hz)
/// amplitude modulation.
Waveform add_noise(const Waveform& w, double snr_db, NoiseKind kind, Rng& rng);

/// Exponentially decaying Gaussian impulse with a unit direct path.
std::vector<double> make_reverb_impulse(double rt60_seconds, Rng& rng,
                                        int sample_rate = kSampleRate);

/// Causal convolution truncated to the input length, rescaled to the input
/// RMS. A unit delta impulse is the identity.
Waveform apply_reverb(const Waveform& w, std::span<const double> impulse);

/// Random noise and/or reverb per the configured probabilities. Length is
/// preserved, so frame labels computed for `w` stay valid.
Waveform augment(const Waveform& w, const AugmentConfig& cfg, Rng& rng);

}  // namespace spliceloc

#endif  // SPLICELOC_AUGMENT_HPP_
