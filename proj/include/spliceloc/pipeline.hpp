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

// End-to-end stages shared by the command-line tool and the tests. Every
// per-utterance stage runs on `jobs` threads and returns results in
// utterance-id order.

#ifndef SPLICELOC_PIPELINE_HPP_
#define SPLICELOC_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spliceloc/config.hpp"
#include "spliceloc/fusion.hpp"
#include "spliceloc/manifest.hpp"
#include "spliceloc/metrics.hpp"
#include "spliceloc/pca.hpp"
#include "spliceloc/sampling.hpp"
#include "spliceloc/scorer.hpp"
#include "spliceloc/vae.hpp"

namespace spliceloc {

/// Synthesizes source pools and forges the configured corpus into `dir`.
Manifest forge_to_directory(const std::filesystem::path& dir, const PipelineConfig& cfg,
                            std::uint64_t seed, int jobs);

/// `clips_per_task` labeled clips drawn with per-clip streams of `seed`.
std::vector<LabeledClip> build_training_clips(Task task, const Corpus& corpus,
                                              const PipelineConfig& cfg, std::uint64_t seed,
                                              int jobs);

ScorerModel train_task_scorer(Task task, const Corpus& corpus, const PipelineConfig& cfg,
                              std::uint64_t seed, int jobs, TrainReport* report = nullptr);

struct OutlierModel {
  PcaTransform pca;
  VaeModel vae;
};

/// PCA and VAE fitted on frames of the corpus's genuine utterances.
OutlierModel train_outlier(const Corpus& corpus, const PipelineConfig& cfg, std::uint64_t seed,
                           int jobs);

/// Windows -> per-clip scores -> merged per-frame scores.
FrameScores score_utterance(const ScorerModel& model, const Waveform& wave,
                            const std::string& utterance_id, const PipelineConfig& cfg);

double deviation_score(const OutlierModel& model, const Waveform& wave, const PipelineConfig& cfg);

struct ScoredUtterance {
  std::string utterance_id;
  Waveform wave;
  FrameScores boundary;
  FrameScores spoof;
};

struct LocateResult {
  std::vector<UtteranceVerdict> verdicts;
  std::map<std::string, int> boundary_counts;
  std::map<std::string, double> boundary_scores;  // max merged boundary posterior
  std::map<std::string, double> deviation;        // pooled utterances only
};

/// Boundary detection, segmentation, fusion and the VAE override. Throws
/// DataError when an utterance is pooled and `outlier` is empty.
LocateResult locate(const std::vector<ScoredUtterance>& utterances, const PipelineConfig& cfg,
                    const OutlierModel* outlier, int jobs);

/// Scores every corpus utterance in process with both scorers.
std::vector<ScoredUtterance> score_corpus(const Corpus& corpus, const ScorerModel& boundary,
                                          const ScorerModel& spoof, const PipelineConfig& cfg,
                                          int jobs);

/// Reads `<id>.<task>.scores` for both tasks from `dir`, checking frame counts.
std::vector<ScoredUtterance> load_scored_corpus(const Corpus& corpus,
                                                const std::filesystem::path& dir,
                                                const PipelineConfig& cfg);

/// Verdicts copied from manifest ground truth.
std::vector<UtteranceVerdict> oracle_verdicts(const Manifest& manifest, const FrameGridSpec& grid);

/// `id<TAB>score` lines with 6 decimals.
void write_score_map(const std::filesystem::path& path, const std::map<std::string, double>& scores);
std::map<std::string, double> read_score_map(const std::filesystem::path& path);

}  // namespace spliceloc

#endif  // SPLICELOC_PIPELINE_HPP_
