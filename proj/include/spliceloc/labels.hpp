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

// Region bookkeeping for spliced utterances and the two frame-labelling
// schemes: boundary (1 around concatenation points) and spoof (1 = genuine).

#ifndef SPLICELOC_LABELS_HPP_
#define SPLICELOC_LABELS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spliceloc/audio.hpp"

namespace spliceloc {

enum class Label : std::uint8_t { kGenuine, kFake };
enum class Task : std::uint8_t { kBoundary, kSpoof };

std::string_view to_string(Label label);
std::string_view to_string(Task task);
Label parse_label(std::string_view text);
Task parse_task(std::string_view text);

/// Half-open sample interval [start, end) with a provenance label.
struct Region {
  std::int64_t start = 0;
  std::int64_t end = 0;
  Label label = Label::kGenuine;

  friend bool operator==(const Region&, const Region&) = default;
};

struct FrameLabels {
  Task task = Task::kBoundary;
  std::vector<std::uint8_t> labels;

  int size() const { return static_cast<int>(labels.size()); }
};

struct SpliceRecipe {
  struct Source {
    std::string utterance_id;
    std::int64_t start_sample = 0;  // within the source utterance
    std::int64_t end_sample = 0;
    Label label = Label::kGenuine;
  };
  std::vector<Source> sources;
  std::vector<std::int64_t> boundaries;  // offsets in the output signal

  /// Output-signal regions, one per source, in order.
  std::vector<Region> regions() const;
};

struct SplicePart {
  Waveform wave;
  Label label = Label::kGenuine;
  std::string utterance_id;
  std::int64_t source_offset = 0;  // where `wave` starts inside its source
};

/// Sample-exact concatenation of `parts`. Requires at least two parts, each at
/// least one frame (`min_part_samples`) long.
std::pair<Waveform, SpliceRecipe> splice(std::span<const SplicePart> parts,
                                         int min_part_samples = 320);

/// Frames floor(b/hop)-1 .. floor(b/hop)+2 around each boundary are 1,
/// clipped to [0, n_frames).
FrameLabels boundary_labels(std::span<const std::int64_t> boundaries, int n_frames,
                            const FrameGridSpec& grid);

/// Frame i takes the label of the region holding sample i*hop + hop/2;
/// genuine -> 1, fake -> 0.
FrameLabels spoof_labels(std::span<const Region> regions, int n_frames,
                         const FrameGridSpec& grid);

/// Regions restricted to the window [offset, offset + length) and shifted to
/// start at zero. Regions are assumed sorted and contiguous.
std::vector<Region> window_regions(std::span<const Region> regions, std::int64_t offset,
                                   std::int64_t length);

/// Interior boundaries (region starts other than the first) of a region list.
std::vector<std::int64_t> region_boundaries(std::span<const Region> regions);

}  // namespace spliceloc

#endif  // SPLICELOC_LABELS_HPP_
