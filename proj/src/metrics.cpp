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

#include "spliceloc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

namespace spliceloc {

double sentence_accuracy(std::span<const Label> predictions, std::span<const Label> truths) {
  if (predictions.size() != truths.size())
    throw DataError("prediction and truth counts differ");
  if (truths.empty()) throw DataError("no utterances to score");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) ok += predictions[i] == truths[i] ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(truths.size());
}

FrameConfusion confusion(std::span<const std::uint8_t> predicted_fake,
                         std::span<const std::uint8_t> true_fake, Label positive_class) {
  if (predicted_fake.size() != true_fake.size()) throw DataError("frame counts differ");
  const std::uint8_t pos = positive_class == Label::kFake ? 1 : 0;
  FrameConfusion c;
  c.positive_class = positive_class;
  for (std::size_t i = 0; i < true_fake.size(); ++i) {
    const bool p = (predicted_fake[i] != 0) == (pos == 1);
    const bool t = (true_fake[i] != 0) == (pos == 1);
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

void accumulate(FrameConfusion& into, const FrameConfusion& other) {
  if (into.positive_class != other.positive_class)
    throw std::invalid_argument("cannot add confusions with different positive classes");
  into.tp += other.tp;
  into.fp += other.fp;
  into.fn += other.fn;
  into.tn += other.tn;
}

double f1(const FrameConfusion& c, bool* degenerate) {
  const std::int64_t denom = 2 * c.tp + c.fn + c.fp;
  if (degenerate) *degenerate = denom == 0;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / static_cast<double>(denom);
}

double add_score(double accuracy, double f1_star, double w_accuracy, double w_f1) {
  if (!(accuracy >= 0.0 && accuracy <= 1.0) || !(f1_star >= 0.0 && f1_star <= 1.0))
    throw std::invalid_argument("add_score inputs must lie in [0, 1]");
  return w_accuracy * accuracy + w_f1 * f1_star;
}

double eer(std::span<const ScoredTrial> trials) {
  std::vector<double> scores;
  std::int64_t n_target = 0, n_non = 0;
  for (const auto& t : trials) {
    if (!std::isfinite(t.score)) throw std::invalid_argument("trial scores must be finite");
    (t.is_target ? n_target : n_non) += 1;
    scores.push_back(t.score);
  }
  if (n_target == 0 || n_non == 0) throw std::invalid_argument("EER needs both target and non-target trials");
  std::sort(scores.begin(), scores.end());
  scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
  scores.push_back(std::numeric_limits<double>::infinity());

  // Sweep thresholds upward: FRR rises from 0, FAR falls to 0.
  std::vector<ScoredTrial> sorted(trials.begin(), trials.end());
  std::sort(sorted.begin(), sorted.end(), [](const ScoredTrial& a, const ScoredTrial& b) { return a.score < b.score; });
  std::int64_t rejected_target = 0, rejected_non = 0;
  std::size_t k = 0;
  double prev_far = 1.0, prev_frr = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    while (k < sorted.size() && sorted[k].score < scores[i]) {
      (sorted[k].is_target ? rejected_target : rejected_non) += 1;
      ++k;
    }
    const double frr = static_cast<double>(rejected_target) / static_cast<double>(n_target);
    const double far = 1.0 - static_cast<double>(rejected_non) / static_cast<double>(n_non);
    const double d = far - frr;
    if (d == 0.0) return far;
    if (d < 0.0) {
      if (i == 0) return 0.5 * (far + frr);
      const double d_prev = prev_far - prev_frr;
      const double w = d_prev / (d_prev - d);
      return prev_far + w * (far - prev_far);
    }
    prev_far = far;
    prev_frr = frr;
  }
  return prev_far;  // unreachable: at +inf FAR = 0 <= FRR
}

EvaluationReport evaluate(const Manifest& truth, const std::vector<UtteranceVerdict>& verdicts,
                          const std::map<std::string, double>& boundary_scores,
                          const FusionConfig& cfg, const FrameGridSpec& grid) {
  std::map<std::string, const UtteranceVerdict*> by_id;
  for (const auto& v : verdicts)
    if (!by_id.emplace(v.utterance_id, &v).second) throw DataError("duplicate verdict for " + v.utterance_id);

  std::vector<Label> pred, gold;
  FrameConfusion fake_conf{0, 0, 0, 0, Label::kFake};
  FrameConfusion genuine_conf{0, 0, 0, 0, Label::kGenuine};
  std::vector<ScoredTrial> trials;
  for (const auto& e : truth) {
    const auto it = by_id.find(e.utterance_id);
    if (it == by_id.end()) throw DataError("missing verdict for " + e.utterance_id);
    const UtteranceVerdict& v = *it->second;
    const int n = n_frames(static_cast<std::size_t>(e.n_samples()), grid);
    if (v.n_frames() != n)
      throw DataError(e.utterance_id + ": verdict covers " + std::to_string(v.n_frames()) +
                      " frames, expected " + std::to_string(n));
    // spoof_labels uses 1 = genuine.
    const FrameLabels genuine = spoof_labels(e.regions, n, grid);
    std::vector<std::uint8_t> true_fake(genuine.labels.size());
    for (std::size_t i = 0; i < true_fake.size(); ++i) true_fake[i] = genuine.labels[i] ? 0 : 1;
    const auto predicted = v.frame_flags();
    accumulate(fake_conf, confusion(predicted, true_fake, Label::kFake));
    accumulate(genuine_conf, confusion(predicted, true_fake, Label::kGenuine));
    pred.push_back(v.utterance_label);
    gold.push_back(e.utterance_label());
    if (!boundary_scores.empty()) {
      const auto bs = boundary_scores.find(e.utterance_id);
      if (bs == boundary_scores.end()) throw DataError("missing boundary score for " + e.utterance_id);
      trials.push_back({bs->second, !region_boundaries(e.regions).empty()});
    }
  }
  if (by_id.size() != truth.size()) {
    std::map<std::string, bool> known;
    for (const auto& e : truth) known[e.utterance_id] = true;
    for (const auto& [id, v] : by_id)
      if (!known.count(id)) throw DataError("verdict for unknown utterance " + id);
  }

  EvaluationReport r;
  r.n_utterances = static_cast<int>(truth.size());
  r.accuracy = sentence_accuracy(pred, gold);
  r.f1_fake = f1(fake_conf);
  r.f1_genuine = f1(genuine_conf);
  r.add = add_score(r.accuracy, r.f1_fake, cfg.weight_accuracy, cfg.weight_f1);
  r.fake_confusion = fake_conf;
  r.eer_boundary = std::numeric_limits<double>::quiet_NaN();
  if (!trials.empty()) {
    const bool both = std::any_of(trials.begin(), trials.end(), [](auto& t) { return t.is_target; }) &&
                      std::any_of(trials.begin(), trials.end(), [](auto& t) { return !t.is_target; });
    if (both) r.eer_boundary = eer(trials);
  }
  return r;
}

void write_report(std::ostream& out, const EvaluationReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "A=%.4f F1=%.4f F1star=%.4f ADD=%.4f EER_boundary=%.4f\n", r.accuracy,
                r.f1_genuine, r.f1_fake, r.add, r.eer_boundary);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "utterances %d\nsentence_accuracy %.6f\nf1 %.6f\nf1_star %.6f\nadd_score %.6f\n"
                "eer_boundary %.6f\n",
                r.n_utterances, r.accuracy, r.f1_genuine, r.f1_fake, r.add, r.eer_boundary);
  out << buf;
}

}  // namespace spliceloc
