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

// Pipeline configuration as an INI file with [section] headers and
// key = value lines. Every key has a default, so an empty file is a
// complete configuration.

#ifndef SPLICELOC_CONFIG_HPP_
#define SPLICELOC_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "spliceloc/audio.hpp"
#include "spliceloc/forge.hpp"
#include "spliceloc/fusion.hpp"
#include "spliceloc/inference.hpp"
#include "spliceloc/sampling.hpp"
#include "spliceloc/scorer.hpp"
#include "spliceloc/vae.hpp"

namespace spliceloc {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PathsConfig {
  std::string corpus = "corpus";  // holds manifest.tsv and wav/
  std::string scores = "scores";
  std::string models = "models";
  std::string output = "out";
  friend bool operator==(const PathsConfig&, const PathsConfig&) = default;
};

struct ForgeSection {
  int pool_size = 120;  // synthetic source voices per class
  ForgeCounts counts{86, 86, 128};
  ForgeConfig forge;
  VoiceConfig voice;
  friend bool operator==(const ForgeSection&, const ForgeSection&) = default;
};

struct TrainSection {
  int clips_per_task = 4000;
  ScorerTrainConfig scorer;
  StrategyMix boundary_mix = StrategyMix::boundary_default();
  StrategyMix spoof_mix = StrategyMix::spoof_default();
  ClipSamplerConfig sampler;
  friend bool operator==(const TrainSection&, const TrainSection&) = default;
};

struct VaeSection {
  VaeConfig vae;
  double pca_energy = 0.98;
  bool pca_standardize = true;
  int max_train_frames = 20000;
  int mc_samples = 16;
  friend bool operator==(const VaeSection&, const VaeSection&) = default;
};

struct SeedsConfig {
  std::uint64_t forge = 1;
  std::uint64_t train = 2;
  std::uint64_t vae = 3;
  friend bool operator==(const SeedsConfig&, const SeedsConfig&) = default;
};

struct PipelineConfig {
  PathsConfig paths;
  FrameGridSpec grid;
  FeatureConfig features;
  ForgeSection forge;
  TrainSection train;
  VaeSection vae;
  BoundaryConfig boundary;
  FusionConfig fusion;
  SeedsConfig seeds;
  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Throws ConfigError on syntax errors, unknown keys, bad values or failed
/// validation.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);
void dump_config(std::ostream& out, const PipelineConfig& cfg);
void validate(const PipelineConfig& cfg);

}  // namespace spliceloc

#endif  // SPLICELOC_CONFIG_HPP_
