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

// Sliding-window inference: plan overlapping clips, average per-clip frame
// posteriors, pick boundaries from the merged boundary track, and cut the
// utterance into segments.

#ifndef SPLICELOC_INFERENCE_HPP_
#define SPLICELOC_INFERENCE_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spliceloc/audio.hpp"
#include "spliceloc/score_file.hpp"

namespace spliceloc {

struct WindowPlan {
  std::vector<std::int64_t> offsets;
  int window_samples = 20480;
  int step_samples = 10240;
  bool padded = false;  // single window over a signal shorter than the window
};

/// Offsets 0, step, 2*step, ... while the window fits. If frames remain
/// uncovered, one more window is aligned to end at the last complete frame
/// (n_frames * hop), which keeps every offset hop-aligned. Signals shorter
/// than a window get a single cyclically padded window at 0.
WindowPlan plan_windows(std::int64_t n_samples, const FrameGridSpec& grid);

struct ClipScores {
  std::int64_t offset = 0;
  FrameScores scores;
};

/// Arithmetic mean per utterance frame over every clip covering it. Clip
/// frame j of a clip at `offset` is utterance frame offset/hop + j; clip
/// frames past n_frames (padding) are ignored.
FrameScores merge_scores(std::span<const ClipScores> clips, int n_frames, int hop_samples);

struct Boundary {
  int frame_index = 0;
  double peak_prob = 0.0;

  friend bool operator==(const Boundary&, const Boundary&) = default;
};

struct BoundaryConfig {
  double threshold = 0.5;
  int min_gap_frames = 8;
  friend bool operator==(const BoundaryConfig&, const BoundaryConfig&) = default;
};

/// Local maxima (a plateau counts once, at its center) with prob >= threshold,
/// accepted greedily by descending prob while suppressing candidates closer
/// than min_gap_frames to an accepted one. Frame 0 is never a boundary.
/// Result sorted by frame index.
std::vector<Boundary> detect_boundaries(const FrameScores& scores, const BoundaryConfig& cfg = {});

/// Half-open segments [0, b1), [b1, b2), ..., [bk, n_frames). Boundaries must
/// be strictly increasing inside (0, n_frames).
std::vector<std::pair<int, int>> segment(std::span<const int> boundaries, int n_frames);
std::vector<std::pair<int, int>> segment(std::span<const Boundary> boundaries, int n_frames);

}  // namespace spliceloc

#endif  // SPLICELOC_INFERENCE_HPP_
