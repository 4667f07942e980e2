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

#include "spliceloc/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "spliceloc/forge.hpp"
#include "spliceloc/inference.hpp"
#include "spliceloc/parallel.hpp"
#include "spliceloc/score_file.hpp"

namespace spliceloc {

Manifest forge_to_directory(const std::filesystem::path& dir, const PipelineConfig& cfg,
                            std::uint64_t seed, int jobs) {
  const SyntheticPools pools = synth_pools(cfg.forge.pool_size, seed, cfg.forge.voice, jobs);
  const auto utts = forge_corpus(pools.genuine, pools.fake, cfg.forge.counts, seed, cfg.forge.forge, jobs);
  return write_corpus(dir, utts);
}

std::vector<LabeledClip> build_training_clips(Task task, const Corpus& corpus,
                                              const PipelineConfig& cfg, std::uint64_t seed,
                                              int jobs) {
  const StrategyMix& mix = task == Task::kBoundary ? cfg.train.boundary_mix : cfg.train.spoof_mix;
  const auto n = static_cast<std::size_t>(cfg.train.clips_per_task);
  std::vector<LabeledClip> clips(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    TrainingClip clip = sample_training_clip(task, corpus, mix, cfg.grid, rng, cfg.train.sampler);
    clips[i] = {compute_features(clip.wave, cfg.grid, cfg.features), std::move(clip.labels)};
  });
  return clips;
}

ScorerModel train_task_scorer(Task task, const Corpus& corpus, const PipelineConfig& cfg,
                              std::uint64_t seed, int jobs, TrainReport* report) {
  const auto clips = build_training_clips(task, corpus, cfg, seed, jobs);
  Rng rng = make_stream(seed, 0xfeedULL + static_cast<std::uint64_t>(task));
  return train_scorer(task, clips, cfg.train.scorer, rng, report);
}

OutlierModel train_outlier(const Corpus& corpus, const PipelineConfig& cfg, std::uint64_t seed,
                           int jobs) {
  const auto& idx = corpus.indices(UtteranceClass::kGenuine);
  if (idx.empty()) throw DataError("VAE training needs genuine utterances");
  std::vector<FrameFeatures> feats(idx.size());
  parallel_for(idx.size(), jobs, [&](std::size_t i) {
    feats[i] = compute_features(corpus.utterances()[idx[i]].wave, cfg.grid, cfg.features);
  });
  std::vector<std::pair<std::size_t, Eigen::Index>> rows;
  for (std::size_t u = 0; u < feats.size(); ++u)
    for (Eigen::Index r = 0; r < feats[u].matrix.rows(); ++r) rows.emplace_back(u, r);
  Rng rng = make_stream(seed, 0);
  if (rows.size() > static_cast<std::size_t>(cfg.vae.max_train_frames)) {
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(static_cast<std::size_t>(cfg.vae.max_train_frames));
    std::sort(rows.begin(), rows.end());
  }
  Eigen::MatrixXd frames(static_cast<Eigen::Index>(rows.size()), cfg.features.dim());
  for (std::size_t i = 0; i < rows.size(); ++i)
    frames.row(static_cast<Eigen::Index>(i)) = feats[rows[i].first].matrix.row(rows[i].second);

  OutlierModel m;
  m.pca = fit_pca(frames, cfg.vae.pca_energy, cfg.vae.pca_standardize);
  m.vae = train_vae(pca_project_rows(m.pca, frames), cfg.vae.vae, rng);
  return m;
}

FrameScores score_utterance(const ScorerModel& model, const Waveform& wave,
                            const std::string& utterance_id, const PipelineConfig& cfg) {
  const WindowPlan plan = plan_windows(static_cast<std::int64_t>(wave.size()), cfg.grid);
  std::vector<ClipScores> clips;
  clips.reserve(plan.offsets.size());
  for (const std::int64_t off : plan.offsets) {
    const Waveform clip = extract_clip(wave, static_cast<std::size_t>(off),
                                       static_cast<std::size_t>(plan.window_samples));
    clips.push_back({off, score_clip(model, compute_features(clip, cfg.grid, cfg.features), utterance_id,
                                     cfg.grid.hop_samples)});
  }
  FrameScores merged = merge_scores(clips, n_frames(wave.size(), cfg.grid), cfg.grid.hop_samples);
  merged.utterance_id = utterance_id;
  merged.task = model.task;
  return merged;
}

double deviation_score(const OutlierModel& model, const Waveform& wave, const PipelineConfig& cfg) {
  const FrameFeatures f = compute_features(wave, cfg.grid, cfg.features);
  return reconstruction_probability(model.vae, pca_project_rows(model.pca, f.matrix), cfg.vae.mc_samples,
                                    cfg.seeds.vae);
}

LocateResult locate(const std::vector<ScoredUtterance>& utterances, const PipelineConfig& cfg,
                    const OutlierModel* outlier, int jobs) {
  const std::size_t n = utterances.size();
  std::vector<UtteranceVerdict> verdicts(n);
  std::vector<int> counts(n);
  std::vector<double> peak(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    const auto& u = utterances[i];
    if (u.boundary.n_frames() != u.spoof.n_frames())
      throw DataError(u.utterance_id + ": boundary and spoof frame counts differ");
    if (u.spoof.n_frames() == 0) throw DataError(u.utterance_id + ": utterance has no frames");
    const auto bounds = detect_boundaries(u.boundary, cfg.boundary);
    const auto segs = segment(bounds, u.boundary.n_frames());
    const auto flags = classify_frames(u.spoof, cfg.fusion);
    verdicts[i] = fuse(segs, flags, cfg.fusion, u.utterance_id);
    counts[i] = static_cast<int>(bounds.size());
    peak[i] = *std::max_element(u.boundary.probs.begin(), u.boundary.probs.end());
  });

  LocateResult r;
  std::vector<std::size_t> pooled;
  for (std::size_t i = 0; i < n; ++i) {
    r.boundary_counts[utterances[i].utterance_id] = counts[i];
    r.boundary_scores[utterances[i].utterance_id] = peak[i];
    if (in_vae_pool(counts[i], cfg.fusion)) pooled.push_back(i);
  }
  if (!pooled.empty() && outlier == nullptr)
    throw DataError(std::to_string(pooled.size()) + " utterances need VAE rescoring but no VAE model is loaded");
  std::vector<double> dev(pooled.size());
  parallel_for(pooled.size(), jobs, [&](std::size_t j) {
    dev[j] = deviation_score(*outlier, utterances[pooled[j]].wave, cfg);
  });
  for (std::size_t j = 0; j < pooled.size(); ++j) r.deviation[utterances[pooled[j]].utterance_id] = dev[j];
  r.verdicts = apply_vae_override(std::move(verdicts), r.boundary_counts, r.deviation, cfg.fusion);
  std::sort(r.verdicts.begin(), r.verdicts.end(),
            [](const UtteranceVerdict& a, const UtteranceVerdict& b) { return a.utterance_id < b.utterance_id; });
  return r;
}

std::vector<ScoredUtterance> score_corpus(const Corpus& corpus, const ScorerModel& boundary,
                                          const ScorerModel& spoof, const PipelineConfig& cfg,
                                          int jobs) {
  if (boundary.task != Task::kBoundary || spoof.task != Task::kSpoof)
    throw DataError("scorer models are trained for the wrong tasks");
  const auto& utts = corpus.utterances();
  std::vector<ScoredUtterance> out(utts.size());
  parallel_for(utts.size(), jobs, [&](std::size_t i) {
    const auto& u = utts[i];
    out[i] = {u.entry.utterance_id, u.wave, score_utterance(boundary, u.wave, u.entry.utterance_id, cfg),
              score_utterance(spoof, u.wave, u.entry.utterance_id, cfg)};
  });
  std::sort(out.begin(), out.end(),
            [](const ScoredUtterance& a, const ScoredUtterance& b) { return a.utterance_id < b.utterance_id; });
  return out;
}

std::vector<ScoredUtterance> load_scored_corpus(const Corpus& corpus, const std::filesystem::path& dir,
                                                const PipelineConfig& cfg) {
  std::vector<ScoredUtterance> out;
  for (const auto& u : corpus.utterances()) {
    ScoredUtterance s{u.entry.utterance_id, u.wave, {}, {}};
    const int n = n_frames(u.wave.size(), cfg.grid);
    for (Task task : {Task::kBoundary, Task::kSpoof}) {
      FrameScores fs = read_scores(dir / score_file_name(u.entry.utterance_id, task));
      if (fs.utterance_id != u.entry.utterance_id || fs.task != task)
        throw DataError(score_file_name(u.entry.utterance_id, task) + ": header names another utterance or task");
      if (fs.n_frames() != n || fs.hop_samples != cfg.grid.hop_samples)
        throw DataError(score_file_name(u.entry.utterance_id, task) + ": has " + std::to_string(fs.n_frames()) +
                        " frames at hop " + std::to_string(fs.hop_samples) + ", expected " + std::to_string(n));
      (task == Task::kBoundary ? s.boundary : s.spoof) = std::move(fs);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const ScoredUtterance& a, const ScoredUtterance& b) { return a.utterance_id < b.utterance_id; });
  return out;
}

std::vector<UtteranceVerdict> oracle_verdicts(const Manifest& manifest, const FrameGridSpec& grid) {
  std::vector<UtteranceVerdict> out;
  for (const auto& e : manifest) {
    const int n = n_frames(static_cast<std::size_t>(e.n_samples()), grid);
    const FrameLabels genuine = spoof_labels(e.regions, n, grid);
    UtteranceVerdict v;
    v.utterance_id = e.utterance_id;
    for (int f = 0; f < n; ++f) {
      const Label l = genuine.labels[static_cast<std::size_t>(f)] ? Label::kGenuine : Label::kFake;
      if (v.segments.empty() || v.segments.back().label != l) v.segments.push_back({f, f, l});
      v.segments.back().end = f + 1;
    }
    v.utterance_label = e.utterance_label();
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end(),
            [](const UtteranceVerdict& a, const UtteranceVerdict& b) { return a.utterance_id < b.utterance_id; });
  return out;
}

void write_score_map(const std::filesystem::path& path, const std::map<std::string, double>& scores) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  char buf[64];
  for (const auto& [id, s] : scores) {
    std::snprintf(buf, sizeof buf, "%.6f", s);
    out << id << '\t' << buf << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::map<std::string, double> read_score_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::map<std::string, double> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError(path.string() + ":" + std::to_string(line_no) + ": missing tab");
    try {
      std::size_t used = 0;
      const std::string num = line.substr(tab + 1);
      const double v = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument("trailing characters");
      out[line.substr(0, tab)] = v;
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad score");
    }
  }
  return out;
}

}  // namespace spliceloc
