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

// Segment-level decisions from boundary segmentation and spoof frame scores.
//
// Frames with P(genuine) below the frame threshold are fake. Segment labels
// then depend on the number of segments:
//   1      genuine iff fake ratio < fake_proportion_ratio
//   2      a segment is fake iff its ratio exceeds both the ratio limit and
//          the other segment's ratio; otherwise the shorter one is fake
//          (the first on equal length)
//   3      the middle segment is fake
//   >3     each segment is fake iff its ratio >= fake_proportion_ratio
// Utterances with no detected boundary or more than max_boundaries are
// relabeled at utterance level by VAE deviation rank.

#ifndef SPLICELOC_FUSION_HPP_
#define SPLICELOC_FUSION_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spliceloc/labels.hpp"
#include "spliceloc/score_file.hpp"
#include "spliceloc/vae.hpp"

namespace spliceloc {

struct FusionConfig {
  double fake_proportion_ratio = 0.4;
  double frame_genuine_threshold = 0.95;
  int vae_min_boundaries = 0;   // pooled when boundary count <= this
  int vae_max_boundaries = 10;  // pooled when boundary count > this
  double vae_fake_fraction = 0.45;
  double weight_accuracy = 0.3;
  double weight_f1 = 0.7;
  friend bool operator==(const FusionConfig&, const FusionConfig&) = default;
};
void validate(const FusionConfig& cfg);

struct VerdictSegment {
  int start = 0;  // frames, half-open
  int end = 0;
  Label label = Label::kGenuine;
  friend bool operator==(const VerdictSegment&, const VerdictSegment&) = default;
};

struct UtteranceVerdict {
  std::string utterance_id;
  std::vector<VerdictSegment> segments;
  Label utterance_label = Label::kGenuine;
  int n_frames() const { return segments.empty() ? 0 : segments.back().end; }
  /// Per-frame labels, 1 = fake.
  std::vector<std::uint8_t> frame_flags() const;
  friend bool operator==(const UtteranceVerdict&, const UtteranceVerdict&) = default;
};

std::vector<std::uint8_t> classify_frames(const FrameScores& spoof_scores, const FusionConfig& cfg);
std::vector<std::uint8_t> classify_frames(std::span<const double> probs, const FusionConfig& cfg);

double fake_ratio(std::span<const std::uint8_t> flags, std::pair<int, int> segment);

/// `segments` must partition [0, flags.size()).
UtteranceVerdict fuse(std::span<const std::pair<int, int>> segments,
                      std::span<const std::uint8_t> flags, const FusionConfig& cfg,
                      const std::string& utterance_id = {});

bool in_vae_pool(int boundary_count, const FusionConfig& cfg);

/// `boundary_counts` and `deviation` are keyed by utterance id. Throws
/// DataError when a pooled utterance has no deviation score.
std::vector<UtteranceVerdict> apply_vae_override(std::vector<UtteranceVerdict> verdicts,
                                                 const std::map<std::string, int>& boundary_counts,
                                                 const std::map<std::string, double>& deviation,
                                                 const FusionConfig& cfg);

/// `id<TAB>label<TAB>start-end-label;...` with times frame * frame_seconds at
/// two decimals.
std::string format_submission_line(const UtteranceVerdict& v, double frame_seconds = 0.02);
UtteranceVerdict parse_submission_line(std::string_view line, double frame_seconds = 0.02);
void write_submission(std::ostream& out, const std::vector<UtteranceVerdict>& verdicts);
void write_submission(const std::filesystem::path& path,
                      const std::vector<UtteranceVerdict>& verdicts);
std::vector<UtteranceVerdict> read_submission(std::istream& in);
std::vector<UtteranceVerdict> read_submission(const std::filesystem::path& path);

}  // namespace spliceloc

#endif  // SPLICELOC_FUSION_HPP_
