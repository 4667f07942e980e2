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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spliceloc/config.hpp"
#include "spliceloc/pipeline.hpp"
#include "spliceloc/score_file.hpp"

namespace fs = std::filesystem;
using namespace spliceloc;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitData = 4;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string corpus, models;
};

PipelineConfig load(const Common& c) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : load_config(c.config);
  if (!c.corpus.empty()) cfg.paths.corpus = c.corpus;
  if (!c.models.empty()) cfg.paths.models = c.models;
  if (c.jobs < 1) throw ConfigError("--jobs must be at least 1");
  return cfg;
}

fs::path scorer_path(const PipelineConfig& cfg, Task task) {
  return fs::path(cfg.paths.models) / (std::string(to_string(task)) + ".scorer");
}
fs::path pca_path(const PipelineConfig& cfg) { return fs::path(cfg.paths.models) / "pca.bin"; }
fs::path vae_path(const PipelineConfig& cfg) { return fs::path(cfg.paths.models) / "vae.bin"; }

Corpus load_corpus(const PipelineConfig& cfg) {
  const fs::path root = cfg.paths.corpus;
  return Corpus::load(read_manifest(root / "manifest.tsv"), root);
}

void add_common(CLI::App* cmd, Common& c, bool corpus, bool models) {
  cmd->add_option("--config", c.config, "INI configuration file");
  cmd->add_option("--seed", c.seed, "override the stage seed");
  cmd->add_option("--jobs", c.jobs, "worker threads")->default_val(1);
  if (corpus) cmd->add_option("--corpus", c.corpus, "corpus directory (manifest.tsv + wav/)");
  if (models) cmd->add_option("--models", c.models, "model directory");
}

int fail(int code, const std::string& what) {
  std::fprintf(stderr, "error: code=%d %s\n", code, what.c_str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spliceloc: partial-spoof corpus forging, localization and evaluation"};
  app.require_subcommand(1);

  Common c;
  std::string task_name, scores_dir, submission, boundary_scores, deviation_scores, report;
  bool oracle = false;

  auto* forge = app.add_subcommand("forge", "synthesize a corpus and its manifest");
  add_common(forge, c, true, false);

  auto* train = app.add_subcommand("train-scorer", "train a frame scorer");
  add_common(train, c, true, true);
  train->add_option("--task", task_name, "boundary or spoof")->required();

  auto* train_vae_cmd = app.add_subcommand("train-vae", "fit PCA and the outlier VAE on genuine frames");
  add_common(train_vae_cmd, c, true, true);

  auto* score = app.add_subcommand("score", "write per-frame score files for both tasks");
  add_common(score, c, true, true);
  score->add_option("--scores-dir", scores_dir, "output directory for score files");

  auto* locate_cmd = app.add_subcommand("locate", "detect and label manipulated regions");
  add_common(locate_cmd, c, true, true);
  locate_cmd->add_option("--scores-dir", scores_dir, "read score files instead of scoring in process");
  locate_cmd->add_option("--submission", submission, "submission output path");
  locate_cmd->add_option("--boundary-scores", boundary_scores, "per-utterance boundary score output path");
  locate_cmd->add_option("--deviation-scores", deviation_scores, "write VAE deviation of pooled utterances");
  locate_cmd->add_flag("--oracle", oracle, "emit ground-truth verdicts from the manifest");

  auto* eval = app.add_subcommand("evaluate", "score a submission against the manifest");
  add_common(eval, c, true, false);
  eval->add_option("--submission", submission, "submission to evaluate");
  eval->add_option("--boundary-scores", boundary_scores, "per-utterance boundary scores for EER");
  eval->add_option("--report", report, "also write the report to this path");

  auto* dump = app.add_subcommand("dump-config", "print the effective configuration");
  add_common(dump, c, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return fail(kExitUsage, e.what());
  }

  try {
    const PipelineConfig cfg = load(c);
    const fs::path out = cfg.paths.output;

    if (*forge) {
      const auto m = forge_to_directory(cfg.paths.corpus, cfg, c.seed.value_or(cfg.seeds.forge), c.jobs);
      std::printf("forged %zu utterances into %s\n", m.size(), cfg.paths.corpus.c_str());
    } else if (*train) {
      Task task;
      try {
        task = parse_task(task_name);
      } catch (const std::exception&) {
        throw ConfigError("--task must be boundary or spoof");
      }
      const Corpus corpus = load_corpus(cfg);
      TrainReport rep;
      const ScorerModel m = train_task_scorer(task, corpus, cfg, c.seed.value_or(cfg.seeds.train), c.jobs, &rep);
      fs::create_directories(cfg.paths.models);
      save_scorer(scorer_path(cfg, task), m);
      std::printf("trained %s scorer: final loss %.6f\n", task_name.c_str(), m.final_loss);
    } else if (*train_vae_cmd) {
      const Corpus corpus = load_corpus(cfg);
      const OutlierModel m = train_outlier(corpus, cfg, c.seed.value_or(cfg.seeds.vae), c.jobs);
      fs::create_directories(cfg.paths.models);
      save_pca(pca_path(cfg), m.pca);
      save_vae(vae_path(cfg), m.vae);
      std::printf("trained VAE: pca k=%d retained %.4f, final elbo %.4f\n", m.pca.output_dim(),
                  m.pca.retained_energy, m.vae.final_elbo);
    } else if (*score) {
      const Corpus corpus = load_corpus(cfg);
      const fs::path dir = scores_dir.empty() ? fs::path(cfg.paths.scores) : fs::path(scores_dir);
      const auto scored = score_corpus(corpus, load_scorer(scorer_path(cfg, Task::kBoundary)),
                                       load_scorer(scorer_path(cfg, Task::kSpoof)), cfg, c.jobs);
      fs::create_directories(dir);
      for (const auto& s : scored) {
        write_scores(dir / score_file_name(s.utterance_id, Task::kBoundary), s.boundary);
        write_scores(dir / score_file_name(s.utterance_id, Task::kSpoof), s.spoof);
      }
      std::printf("wrote %zu score files to %s\n", 2 * scored.size(), dir.c_str());
    } else if (*locate_cmd) {
      const fs::path sub = submission.empty() ? out / "submission.tsv" : fs::path(submission);
      const fs::path bsc = boundary_scores.empty() ? out / "boundary_scores.tsv" : fs::path(boundary_scores);
      if (sub.has_parent_path()) fs::create_directories(sub.parent_path());
      if (bsc.has_parent_path()) fs::create_directories(bsc.parent_path());
      if (oracle) {
        const Manifest m = read_manifest(fs::path(cfg.paths.corpus) / "manifest.tsv");
        write_submission(sub, oracle_verdicts(m, cfg.grid));
        std::printf("wrote oracle submission %s\n", sub.c_str());
        return 0;
      }
      const Corpus corpus = load_corpus(cfg);
      const auto scored = scores_dir.empty()
                              ? score_corpus(corpus, load_scorer(scorer_path(cfg, Task::kBoundary)),
                                             load_scorer(scorer_path(cfg, Task::kSpoof)), cfg, c.jobs)
                              : load_scored_corpus(corpus, scores_dir, cfg);
      std::optional<OutlierModel> outlier;
      if (fs::exists(vae_path(cfg))) outlier = OutlierModel{load_pca(pca_path(cfg)), load_vae(vae_path(cfg))};
      const LocateResult r = locate(scored, cfg, outlier ? &*outlier : nullptr, c.jobs);
      write_submission(sub, r.verdicts);
      write_score_map(bsc, r.boundary_scores);
      if (!deviation_scores.empty()) write_score_map(deviation_scores, r.deviation);
      std::printf("wrote %zu verdicts to %s (%zu VAE-rescored)\n", r.verdicts.size(), sub.c_str(),
                  r.deviation.size());
    } else if (*eval) {
      const fs::path sub = submission.empty() ? out / "submission.tsv" : fs::path(submission);
      const Manifest m = read_manifest(fs::path(cfg.paths.corpus) / "manifest.tsv");
      std::map<std::string, double> bs;
      if (!boundary_scores.empty()) bs = read_score_map(boundary_scores);
      const EvaluationReport r = evaluate(m, read_submission(sub), bs, cfg.fusion, cfg.grid);
      write_report(std::cout, r);
      if (!report.empty()) {
        std::ofstream f(report);
        if (!f) throw DataError("cannot write " + report);
        write_report(f, r);
      }
    } else if (*dump) {
      dump_config(std::cout, cfg);
    }
  } catch (const ConfigError& e) {
    return fail(kExitConfig, e.what());
  } catch (const DataError& e) {
    return fail(kExitData, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  return 0;
}
