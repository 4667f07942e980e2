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

#ifndef SPLICELOC_METRICS_HPP_
#define SPLICELOC_METRICS_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "spliceloc/fusion.hpp"
#include "spliceloc/manifest.hpp"

namespace spliceloc {

struct FrameConfusion {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  Label positive_class = Label::kFake;
  std::int64_t total() const { return tp + fp + fn + tn; }
};

/// Fraction of matching labels. Throws DataError on length mismatch or empty input.
double sentence_accuracy(std::span<const Label> predictions, std::span<const Label> truths);

/// Per-frame flags use 1 = fake.
FrameConfusion confusion(std::span<const std::uint8_t> predicted_fake,
                         std::span<const std::uint8_t> true_fake, Label positive_class);
void accumulate(FrameConfusion& into, const FrameConfusion& other);

/// 2tp / (2tp + fn + fp); 0 when tp + fp + fn == 0, with *degenerate set.
double f1(const FrameConfusion& c, bool* degenerate = nullptr);

double add_score(double accuracy, double f1_star, double w_accuracy = 0.3, double w_f1 = 0.7);

struct ScoredTrial {
  double score = 0.0;
  bool is_target = false;
};

/// Equal error rate with accept iff score >= t, thresholds at every distinct
/// score plus +inf, linearly interpolated where FAR - FRR changes sign.
double eer(std::span<const ScoredTrial> trials);

struct EvaluationReport {
  int n_utterances = 0;
  double accuracy = 0.0;
  double f1_genuine = 0.0;
  double f1_fake = 0.0;
  double add = 0.0;
  double eer_boundary = 0.0;  // NaN when no boundary scores were supplied
  FrameConfusion fake_confusion;
};

/// Compares verdicts to manifest ground truth. Every manifest utterance must
/// have exactly one verdict with the matching frame count. `boundary_scores`
/// may be empty; otherwise it must cover every manifest id.
EvaluationReport evaluate(const Manifest& truth, const std::vector<UtteranceVerdict>& verdicts,
                          const std::map<std::string, double>& boundary_scores,
                          const FusionConfig& cfg = {}, const FrameGridSpec& grid = {});

/// `A=.. F1=.. F1star=.. ADD=.. EER_boundary=..` on one line, then one
/// `key value` line per metric.
void write_report(std::ostream& out, const EvaluationReport& r);

}  // namespace spliceloc

#endif  // SPLICELOC_METRICS_HPP_
