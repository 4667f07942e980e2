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

#include "spliceloc/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace spliceloc {

namespace {

namespace pt = boost::property_tree;

// Calls fn(section, key, field) for every configurable field.
template <class Cfg, class Fn>
void visit(Cfg& c, Fn&& fn) {
  fn("paths", "corpus", c.paths.corpus);
  fn("paths", "scores", c.paths.scores);
  fn("paths", "models", c.paths.models);
  fn("paths", "output", c.paths.output);

  fn("grid", "hop_samples", c.grid.hop_samples);
  fn("grid", "window_samples", c.grid.window_samples);
  fn("grid", "step_samples", c.grid.step_samples);

  fn("features", "analysis_window", c.features.analysis_window);
  fn("features", "fft_size", c.features.fft_size);
  fn("features", "n_mel_bands", c.features.n_mel_bands);
  fn("features", "energy_floor", c.features.energy_floor);

  fn("forge", "pool_size", c.forge.pool_size);
  fn("forge", "genuine", c.forge.counts.genuine);
  fn("forge", "fake", c.forge.counts.fake);
  fn("forge", "partial_fake", c.forge.counts.partial_fake);
  fn("forge", "min_insertions", c.forge.forge.min_insertions);
  fn("forge", "max_insertions", c.forge.forge.max_insertions);
  fn("forge", "min_insert_seconds", c.forge.forge.min_insert_seconds);
  fn("forge", "max_insert_seconds", c.forge.forge.max_insert_seconds);
  fn("forge", "min_genuine_piece_seconds", c.forge.forge.min_genuine_piece_seconds);
  fn("forge", "voice_min_seconds", c.forge.voice.min_seconds);
  fn("forge", "voice_max_seconds", c.forge.voice.max_seconds);
  fn("forge", "voice_min_f0", c.forge.voice.min_f0);
  fn("forge", "voice_max_f0", c.forge.voice.max_f0);
  fn("forge", "voice_peak", c.forge.voice.peak);

  fn("train", "clips_per_task", c.train.clips_per_task);
  fn("train", "hidden", c.train.scorer.hidden);
  fn("train", "learning_rate", c.train.scorer.learning_rate);
  fn("train", "momentum", c.train.scorer.momentum);
  fn("train", "epochs", c.train.scorer.epochs);
  fn("train", "batch_clips", c.train.scorer.batch_clips);
  fn("train", "shuffle", c.train.scorer.shuffle);
  fn("train", "min_part_seconds", c.train.sampler.min_part_seconds);
  for (auto [name, mix] : {std::pair{"boundary_mix", &c.train.boundary_mix},
                           std::pair{"spoof_mix", &c.train.spoof_mix}}) {
    fn(name, "p1", mix->p1);
    fn(name, "p2", mix->p2);
    fn(name, "p3", mix->p3);
    fn(name, "genuine_pick_prob", mix->genuine_pick_prob);
  }

  fn("vae", "latent_dim", c.vae.vae.latent_dim);
  fn("vae", "hidden", c.vae.vae.hidden);
  fn("vae", "learning_rate", c.vae.vae.learning_rate);
  fn("vae", "epochs", c.vae.vae.epochs);
  fn("vae", "batch_size", c.vae.vae.batch_size);
  fn("vae", "shuffle", c.vae.vae.shuffle);
  fn("vae", "pca_energy", c.vae.pca_energy);
  fn("vae", "pca_standardize", c.vae.pca_standardize);
  fn("vae", "max_train_frames", c.vae.max_train_frames);
  fn("vae", "mc_samples", c.vae.mc_samples);

  fn("boundary", "threshold", c.boundary.threshold);
  fn("boundary", "min_gap_frames", c.boundary.min_gap_frames);

  fn("fusion", "fake_proportion_ratio", c.fusion.fake_proportion_ratio);
  fn("fusion", "frame_genuine_threshold", c.fusion.frame_genuine_threshold);
  fn("fusion", "vae_min_boundaries", c.fusion.vae_min_boundaries);
  fn("fusion", "vae_max_boundaries", c.fusion.vae_max_boundaries);
  fn("fusion", "vae_fake_fraction", c.fusion.vae_fake_fraction);
  fn("fusion", "weight_accuracy", c.fusion.weight_accuracy);
  fn("fusion", "weight_f1", c.fusion.weight_f1);

  fn("seeds", "forge", c.seeds.forge);
  fn("seeds", "train", c.seeds.train);
  fn("seeds", "vae", c.seeds.vae);
}

template <class T>
T parse_number(const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError("bad number '" + text + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

template <class T>
void parse_into(const std::string& text, T& field) {
  if constexpr (std::is_same_v<T, std::string>) {
    field = text;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (text == "true" || text == "1") field = true;
    else if (text == "false" || text == "0") field = false;
    else throw ConfigError("bad boolean '" + text + "'");
  } else if constexpr (std::is_same_v<T, std::vector<int>>) {
    field.clear();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) field.push_back(parse_number<int>(trim(item)));
  } else {
    field = parse_number<T>(text);
  }
}

template <class T>
std::string format_value(const T& field) {
  if constexpr (std::is_same_v<T, std::string>) {
    return field;
  } else if constexpr (std::is_same_v<T, bool>) {
    return field ? "true" : "false";
  } else if constexpr (std::is_same_v<T, std::vector<int>>) {
    std::string out;
    for (std::size_t i = 0; i < field.size(); ++i) out += (i ? "," : "") + std::to_string(field[i]);
    return out;
  } else {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, field);
    return std::string(buf, ptr);
  }
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  try {
    validate(cfg.grid);
    validate(cfg.train.boundary_mix);
    validate(cfg.train.spoof_mix);
    validate(cfg.fusion);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.features.analysis_window < 1 || cfg.features.fft_size < cfg.features.analysis_window ||
      cfg.features.n_mel_bands < 1 || !(cfg.features.energy_floor > 0.0))
    throw ConfigError("invalid feature settings");
  const auto& fc = cfg.forge;
  if (fc.pool_size < 1 || fc.counts.genuine < 0 || fc.counts.fake < 0 || fc.counts.partial_fake < 0)
    throw ConfigError("forge counts must be non-negative and pool_size positive");
  if (fc.forge.min_insertions < 1 || fc.forge.max_insertions < fc.forge.min_insertions ||
      !(fc.forge.min_insert_seconds > 0.0) || fc.forge.max_insert_seconds < fc.forge.min_insert_seconds ||
      !(fc.forge.min_genuine_piece_seconds > 0.0))
    throw ConfigError("invalid insertion settings");
  if (!(fc.voice.min_seconds > 0.0) || fc.voice.max_seconds < fc.voice.min_seconds ||
      !(fc.voice.min_f0 > 0.0) || fc.voice.max_f0 < fc.voice.min_f0 || !(fc.voice.peak > 0.0) ||
      fc.voice.peak > 1.0)
    throw ConfigError("invalid voice settings");
  const auto& t = cfg.train;
  if (t.clips_per_task < 1 || t.scorer.epochs < 0 || t.scorer.batch_clips < 1 ||
      !(t.scorer.learning_rate > 0.0) || t.scorer.momentum < 0.0 || t.scorer.momentum >= 1.0)
    throw ConfigError("invalid scorer training settings");
  for (int h : t.scorer.hidden)
    if (h < 1) throw ConfigError("hidden layer sizes must be positive");
  if (!(t.sampler.min_part_seconds > 0.0)) throw ConfigError("min_part_seconds must be positive");
  const auto& v = cfg.vae;
  if (v.vae.latent_dim < 1 || v.vae.epochs < 0 || v.vae.batch_size < 1 || !(v.vae.learning_rate > 0.0) ||
      v.max_train_frames < 2 || v.mc_samples < 1)
    throw ConfigError("invalid VAE settings");
  for (int h : v.vae.hidden)
    if (h < 1) throw ConfigError("hidden layer sizes must be positive");
  check_probability(v.pca_energy, "pca_energy");
  if (v.pca_energy == 0.0) throw ConfigError("pca_energy must be positive");
  check_probability(cfg.boundary.threshold, "boundary threshold");
  if (cfg.boundary.min_gap_frames < 1) throw ConfigError("min_gap_frames must be positive");
}

PipelineConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  PipelineConfig cfg;
  std::set<std::string> known;
  visit(cfg, [&](const std::string& section, const std::string& key, auto& field) {
    const std::string path = section + "." + key;
    known.insert(path);
    const auto value = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    if (!value) return;
    try {
      parse_into(trim(*value), field);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
  });
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside any section");
    for (const auto& [key, value] : body)
      if (!known.count(section + "." + key)) throw ConfigError("unknown key " + section + "." + key);
  }
  validate(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  return parse_config(in);
}

void dump_config(std::ostream& out, const PipelineConfig& cfg) {
  std::string current;
  visit(cfg, [&](const std::string& section, const std::string& key, const auto& field) {
    if (section != current) {
      out << (current.empty() ? "" : "\n") << '[' << section << "]\n";
      current = section;
    }
    out << key << " = " << format_value(field) << '\n';
  });
}

}  // namespace spliceloc
