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

#include "spliceloc/labels.hpp"

#include <algorithm>

namespace spliceloc {

std::string_view to_string(Label label) {
  return label == Label::kGenuine ? "genuine" : "fake";
}

std::string_view to_string(Task task) {
  return task == Task::kBoundary ? "boundary" : "spoof";
}

Label parse_label(std::string_view text) {
  if (text == "genuine") return Label::kGenuine;
  if (text == "fake") return Label::kFake;
  throw DataError("unknown label '" + std::string(text) + "'");
}

Task parse_task(std::string_view text) {
  if (text == "boundary") return Task::kBoundary;
  if (text == "spoof") return Task::kSpoof;
  throw DataError("unknown task '" + std::string(text) + "'");
}

std::vector<Region> SpliceRecipe::regions() const {
  std::vector<Region> out;
  out.reserve(sources.size());
  std::int64_t pos = 0;
  for (const auto& s : sources) {
    const std::int64_t len = s.end_sample - s.start_sample;
    out.push_back({pos, pos + len, s.label});
    pos += len;
  }
  return out;
}

std::pair<Waveform, SpliceRecipe> splice(std::span<const SplicePart> parts,
                                         int min_part_samples) {
  if (parts.size() < 2) throw DataError("splice needs at least two parts");
  Waveform out;
  out.sample_rate = parts.front().wave.sample_rate;
  SpliceRecipe recipe;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.wave.size();
  out.samples.reserve(total);

  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& p = parts[i];
    if (p.wave.size() < static_cast<std::size_t>(std::max(1, min_part_samples)))
      throw DataError("splice part " + std::to_string(i) + " is shorter than one frame");
    if (p.wave.sample_rate != out.sample_rate)
      throw DataError("splice parts disagree on sample rate");
    if (i > 0) recipe.boundaries.push_back(static_cast<std::int64_t>(out.samples.size()));
    out.samples.insert(out.samples.end(), p.wave.samples.begin(), p.wave.samples.end());
    recipe.sources.push_back({p.utterance_id, p.source_offset,
                              p.source_offset + static_cast<std::int64_t>(p.wave.size()),
                              p.label});
  }
  return {std::move(out), std::move(recipe)};
}

FrameLabels boundary_labels(std::span<const std::int64_t> boundaries, int n_frames,
                            const FrameGridSpec& grid) {
  FrameLabels out{Task::kBoundary, std::vector<std::uint8_t>(std::max(0, n_frames), 0)};
  const std::int64_t limit = static_cast<std::int64_t>(n_frames) * grid.hop_samples;
  for (std::int64_t b : boundaries) {
    if (b < 0 || b >= limit)
      throw DataError("boundary at sample " + std::to_string(b) + " outside [0, " +
                      std::to_string(limit) + ")");
    const std::int64_t center = b / grid.hop_samples;
    for (std::int64_t f = center - 1; f <= center + 2; ++f) {
      if (f >= 0 && f < n_frames) out.labels[f] = 1;
    }
  }
  return out;
}

FrameLabels spoof_labels(std::span<const Region> regions, int n_frames,
                         const FrameGridSpec& grid) {
  FrameLabels out{Task::kSpoof, std::vector<std::uint8_t>(std::max(0, n_frames), 0)};
  std::size_t r = 0;
  for (int i = 0; i < n_frames; ++i) {
    const std::int64_t center =
        static_cast<std::int64_t>(i) * grid.hop_samples + grid.hop_samples / 2;
    // Centers increase with i, so the matching region index never decreases
    // for sorted regions; fall back to a full scan otherwise.
    while (r < regions.size() && regions[r].end <= center) ++r;
    const Region* hit = nullptr;
    if (r < regions.size() && regions[r].start <= center && center < regions[r].end) {
      hit = &regions[r];
    } else {
      auto it = std::find_if(regions.begin(), regions.end(), [&](const Region& reg) {
        return reg.start <= center && center < reg.end;
      });
      if (it != regions.end()) hit = &*it;
    }
    if (hit == nullptr)
      throw DataError("frame " + std::to_string(i) + " center (sample " +
                      std::to_string(center) + ") is not covered by any region");
    out.labels[i] = hit->label == Label::kGenuine ? 1 : 0;
  }
  return out;
}

std::vector<Region> window_regions(std::span<const Region> regions, std::int64_t offset,
                                   std::int64_t length) {
  std::vector<Region> out;
  const std::int64_t lo = offset, hi = offset + length;
  for (const auto& r : regions) {
    const std::int64_t s = std::max(r.start, lo), e = std::min(r.end, hi);
    if (s < e) out.push_back({s - offset, e - offset, r.label});
  }
  return out;
}

std::vector<std::int64_t> region_boundaries(std::span<const Region> regions) {
  std::vector<std::int64_t> out;
  for (std::size_t i = 1; i < regions.size(); ++i) out.push_back(regions[i].start);
  return out;
}

}  // namespace spliceloc
