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

// Baseline frame scorer: a small MLP applied independently to every frame,
// trained with mean per-frame binary cross-entropy and SGD with momentum.
// For the spoof task the output is P(genuine); for the boundary task it is
// P(frame is next to a concatenation point).

#ifndef SPLICELOC_SCORER_HPP_
#define SPLICELOC_SCORER_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "spliceloc/audio.hpp"
#include "spliceloc/dense.hpp"
#include "spliceloc/labels.hpp"
#include "spliceloc/score_file.hpp"

namespace spliceloc {

struct ScorerModel {
  Task task = Task::kBoundary;
  DenseNet net;
  Eigen::VectorXd feature_mean;
  Eigen::VectorXd feature_std;
  double final_loss = 0.0;

  int input_dim() const { return net.input_dim(); }
};

struct ScorerTrainConfig {
  std::vector<int> hidden = {64, 64};
  double learning_rate = 1e-3;
  double momentum = 0.9;
  int epochs = 30;
  int batch_clips = 64;
  bool shuffle = true;
  friend bool operator==(const ScorerTrainConfig&, const ScorerTrainConfig&) = default;
};

struct LabeledClip {
  FrameFeatures features;
  FrameLabels labels;
};

struct TrainReport {
  std::vector<double> epoch_loss;  // mean BCE over the epoch's batches
};

/// Fresh model: Glorot init, feature statistics from `data` (std floored at
/// 1e-8).
ScorerModel init_scorer(Task task, const std::vector<LabeledClip>& data,
                        const ScorerTrainConfig& cfg, Rng& rng);

/// Mini-batch SGD with momentum on mean per-frame BCE. Deterministic given
/// `rng`. Throws std::runtime_error naming the batch on a non-finite loss.
ScorerModel train_scorer(Task task, const std::vector<LabeledClip>& data,
                         const ScorerTrainConfig& cfg, Rng& rng, TrainReport* report = nullptr);

/// Continues training an existing model in place.
void train_epochs(ScorerModel& model, const std::vector<LabeledClip>& data,
                  const ScorerTrainConfig& cfg, Rng& rng, TrainReport* report = nullptr);

/// Mean BCE of the model on `frames` (standardized inside) and, when `grad`
/// is non-null, its gradient w.r.t. the flat parameter vector.
double scorer_loss(const ScorerModel& model, const Eigen::MatrixXd& frames,
                   std::span<const std::uint8_t> labels, std::vector<double>* grad = nullptr);

/// Analytic vs central-difference gradient over `n_params` random
/// parameters (at least 200 by default).
GradCheckResult gradient_check(ScorerModel& model, const LabeledClip& batch, Rng& rng,
                               double h = 1e-5, int n_params = 200);

/// One probability per frame, each frame scored independently, clamped to
/// [1e-9, 1 - 1e-9].
FrameScores score_clip(const ScorerModel& model, const FrameFeatures& feats,
                       const std::string& utterance_id = {}, int hop_samples = 320);

/// Blob format: "SGMLP1", u32 task, u32 n_dims, u32 dims..., f64 params,
/// f64 mean[d], f64 std[d], f64 final_loss. Little-endian.
void save_scorer(const std::filesystem::path& path, const ScorerModel& model);
ScorerModel load_scorer(const std::filesystem::path& path);

}  // namespace spliceloc

#endif  // SPLICELOC_SCORER_HPP_
