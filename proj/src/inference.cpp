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

#include "spliceloc/inference.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace spliceloc {

WindowPlan plan_windows(std::int64_t n_samples, const FrameGridSpec& grid) {
  validate(grid);
  if (n_samples < 1) throw std::invalid_argument("plan_windows needs at least one sample");
  WindowPlan plan;
  plan.window_samples = grid.window_samples;
  plan.step_samples = grid.step_samples;
  const std::int64_t window = grid.window_samples;
  if (n_samples < window) {
    plan.offsets = {0};
    plan.padded = true;
    return plan;
  }
  std::int64_t off = 0;
  for (; off + window <= n_samples; off += grid.step_samples) plan.offsets.push_back(off);
  const std::int64_t grid_end = static_cast<std::int64_t>(n_frames(n_samples, grid)) * grid.hop_samples;
  if (plan.offsets.back() + window < grid_end) plan.offsets.push_back(grid_end - window);
  return plan;
}

FrameScores merge_scores(std::span<const ClipScores> clips, int n_frames, int hop_samples) {
  if (clips.empty() && n_frames > 0) throw DataError("no clips to merge");
  // Running mean: constant inputs stay exact and results stay within the input range.
  std::vector<double> mean(static_cast<std::size_t>(std::max(0, n_frames)), 0.0);
  std::vector<int> count(mean.size(), 0);
  FrameScores out;
  out.hop_samples = hop_samples;
  if (!clips.empty()) {
    out.utterance_id = clips.front().scores.utterance_id;
    out.task = clips.front().scores.task;
  }
  for (const auto& c : clips) {
    if (c.offset < 0 || c.offset % hop_samples != 0)
      throw DataError("clip offset " + std::to_string(c.offset) + " is not hop-aligned");
    const auto first = static_cast<std::int64_t>(c.offset / hop_samples);
    for (std::size_t j = 0; j < c.scores.probs.size(); ++j) {
      const std::int64_t f = first + static_cast<std::int64_t>(j);
      if (f >= n_frames) break;
      const auto i = static_cast<std::size_t>(f);
      ++count[i];
      mean[i] += (c.scores.probs[j] - mean[i]) / count[i];
    }
  }
  for (std::size_t f = 0; f < mean.size(); ++f)
    if (count[f] == 0) throw DataError("frame " + std::to_string(f) + " is not covered by any clip");
  out.probs = std::move(mean);
  return out;
}

std::vector<Boundary> detect_boundaries(const FrameScores& scores, const BoundaryConfig& cfg) {
  const auto& p = scores.probs;
  const int n = static_cast<int>(p.size());
  std::vector<Boundary> cand;
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && p[j + 1] == p[i]) ++j;  // plateau [i, j]
    const bool left_ok = i == 0 || p[i - 1] < p[i];
    const bool right_ok = j == n - 1 || p[j + 1] < p[i];
    if (left_ok && right_ok && p[i] >= cfg.threshold) {
      int center = (i + j) / 2;
      if (center == 0 && j > 0) center = 1;
      if (center > 0) cand.push_back({center, p[i]});
    }
    i = j + 1;
  }
  std::stable_sort(cand.begin(), cand.end(), [](const Boundary& a, const Boundary& b) {
    return a.peak_prob > b.peak_prob;
  });
  std::vector<Boundary> accepted;
  for (const auto& c : cand) {
    const bool clear = std::none_of(accepted.begin(), accepted.end(), [&](const Boundary& a) {
      return std::abs(a.frame_index - c.frame_index) < cfg.min_gap_frames;
    });
    if (clear) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const Boundary& a, const Boundary& b) { return a.frame_index < b.frame_index; });
  return accepted;
}

std::vector<std::pair<int, int>> segment(std::span<const int> boundaries, int n_frames) {
  std::vector<std::pair<int, int>> out;
  int prev = 0;
  for (int b : boundaries) {
    if (b <= prev || b >= n_frames)
      throw DataError("boundary " + std::to_string(b) + " out of order or outside (0, " +
                      std::to_string(n_frames) + ")");
    out.emplace_back(prev, b);
    prev = b;
  }
  out.emplace_back(prev, n_frames);
  return out;
}

std::vector<std::pair<int, int>> segment(std::span<const Boundary> boundaries, int n_frames) {
  std::vector<int> idx;
  idx.reserve(boundaries.size());
  for (const auto& b : boundaries) idx.push_back(b.frame_index);
  return segment(idx, n_frames);
}

}  // namespace spliceloc
