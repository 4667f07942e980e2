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

// Fixed-length training clip sampling.
//
// Three strategies feed both frame-level tasks:
//   1. a whole genuine or fake utterance, cut to the clip length;
//   2. two genuine segments concatenated to exactly the clip length;
//   3. a clip cut from a partially fake utterance.
// For the spoof task strategy 1 picks genuine with `genuine_pick_prob`;
// for the boundary task it draws from genuine and fake alike.

#ifndef SPLICELOC_SAMPLING_HPP_
#define SPLICELOC_SAMPLING_HPP_

#include <filesystem>
#include <vector>

#include "spliceloc/manifest.hpp"
#include "spliceloc/random.hpp"

namespace spliceloc {

struct StrategyMix {
  double p1 = 0.35;
  double p2 = 0.30;
  double p3 = 0.35;
  double genuine_pick_prob = 0.3;

  static StrategyMix spoof_default() { return {0.35, 0.30, 0.35, 0.3}; }
  static StrategyMix boundary_default() { return {0.20, 0.40, 0.40, 0.3}; }

  friend bool operator==(const StrategyMix&, const StrategyMix&) = default;
};

/// Throws std::invalid_argument unless all probabilities lie in [0, 1] and
/// p1 + p2 + p3 = 1 within 1e-9.
void validate(const StrategyMix& mix);

struct CorpusUtterance {
  ManifestEntry entry;
  Waveform wave;
};

/// In-memory corpus with per-class indices.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<CorpusUtterance> utterances);

  /// Reads every WAV listed in the manifest relative to `root`, checking
  /// that the file length matches the manifest regions.
  static Corpus load(const Manifest& manifest, const std::filesystem::path& root);

  const std::vector<CorpusUtterance>& utterances() const { return utterances_; }
  const std::vector<std::size_t>& indices(UtteranceClass klass) const {
    return by_class_[static_cast<int>(klass)];
  }

 private:
  std::vector<CorpusUtterance> utterances_;
  std::vector<std::size_t> by_class_[3];
};

struct TrainingClip {
  Waveform wave;
  FrameLabels labels;
  std::vector<Region> regions;           // clip-relative provenance
  std::vector<std::int64_t> boundaries;  // clip-relative concatenation points
  int strategy = 0;                      // 1, 2 or 3
};

struct ClipSamplerConfig {
  double min_part_seconds = 0.2;  // strategy 2 cut point lies in [min, l - min]
  friend bool operator==(const ClipSamplerConfig&, const ClipSamplerConfig&) = default;
};

/// Draws one clip of exactly grid.window_samples samples with
/// grid.frames_per_window() labels for `task`.
TrainingClip sample_training_clip(Task task, const Corpus& corpus, const StrategyMix& mix,
                                  const FrameGridSpec& grid, Rng& rng,
                                  const ClipSamplerConfig& cfg = {});

/// Provenance of extract_clip(w, start, length) given the source regions:
/// regions of the wrapped (cyclically padded) clip, adjacent equal labels merged.
std::vector<Region> clip_regions(std::span<const Region> regions, std::int64_t n_samples,
                                 std::int64_t start, std::int64_t length);

}  // namespace spliceloc

#endif  // SPLICELOC_SAMPLING_HPP_
