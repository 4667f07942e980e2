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

// Desk-scale stand-ins for real corpora: a harmonic "voice" generator for the
// genuine class and a spectral degradation that plays the synthetic class.

#ifndef SPLICELOC_SYNTH_HPP_
#define SPLICELOC_SYNTH_HPP_

#include "spliceloc/audio.hpp"
#include "spliceloc/random.hpp"

namespace spliceloc {

struct VoiceConfig {
  double min_seconds = 2.0;
  double max_seconds = 4.0;
  double min_f0 = 90.0;
  double max_f0 = 240.0;
  double peak = 0.5;
  friend bool operator==(const VoiceConfig&, const VoiceConfig&) = default;
};

/// Voiced, slowly modulated harmonic signal with a random speaker-like
/// formant envelope. Continuous (no silent gaps) and free of abrupt changes.
Waveform synth_voice(Rng& rng, const VoiceConfig& cfg = {});

struct DegradeConfig {
  int fft_size = 512;
  int n_bands = 16;
  double level_step_db = 6.0;  // band level quantization step; 0 disables
  bool match_loudness = true;  // rescale the output to the input energy
};

/// Short-time amplitude quantization: in every 512-point sqrt-Hann frame
/// (50% overlap) each of 16 equal-width bands has its magnitudes replaced by
/// the band mean, rounded to a multiple of level_step_db, while phases are
/// kept. The result is rescaled to the input energy. Output length equals
/// input length.
Waveform degrade(const Waveform& w, const DegradeConfig& cfg = {});

}  // namespace spliceloc

#endif  // SPLICELOC_SYNTH_HPP_
