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

#ifndef SPLICELOC_SCORE_FILE_HPP_
#define SPLICELOC_SCORE_FILE_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "spliceloc/labels.hpp"

namespace spliceloc {

/// Per-frame posteriors of one task for one utterance.
struct FrameScores {
  std::string utterance_id;
  Task task = Task::kBoundary;
  int hop_samples = 320;
  std::vector<double> probs;

  int n_frames() const { return static_cast<int>(probs.size()); }
};

/// Text interchange format, one file per (utterance, task):
///   #id=<utterance_id> task=<boundary|spoof> hop=<int> n=<int>
///   <frame_index>\t<prob with 6 decimals>      (n lines)
void write_scores(std::ostream& out, const FrameScores& scores);
void write_scores(const std::filesystem::path& path, const FrameScores& scores);
FrameScores read_scores(std::istream& in, const std::string& source = "<stream>");
FrameScores read_scores(const std::filesystem::path& path);

/// Conventional file name: <utterance_id>.<task>.scores
std::string score_file_name(const std::string& utterance_id, Task task);

}  // namespace spliceloc

#endif  // SPLICELOC_SCORE_FILE_HPP_
