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

#include "spliceloc/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace spliceloc {

void validate(const StrategyMix& mix) {
  for (double p : {mix.p1, mix.p2, mix.p3, mix.genuine_pick_prob}) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("strategy probabilities must lie in [0, 1]");
  }
  if (std::abs(mix.p1 + mix.p2 + mix.p3 - 1.0) > 1e-9)
    throw std::invalid_argument("strategy probabilities must sum to 1");
}

Corpus::Corpus(std::vector<CorpusUtterance> utterances) : utterances_(std::move(utterances)) {
  for (std::size_t i = 0; i < utterances_.size(); ++i)
    by_class_[static_cast<int>(utterances_[i].entry.klass)].push_back(i);
}

Corpus Corpus::load(const Manifest& manifest, const std::filesystem::path& root) {
  std::vector<CorpusUtterance> utts;
  utts.reserve(manifest.size());
  for (const auto& e : manifest) {
    Waveform w = read_wav(root / e.path);
    if (static_cast<std::int64_t>(w.size()) != e.n_samples())
      throw DataError("utterance " + e.utterance_id + ": wav has " + std::to_string(w.size()) +
                      " samples, manifest says " + std::to_string(e.n_samples()));
    utts.push_back({e, std::move(w)});
  }
  return Corpus(std::move(utts));
}

std::vector<Region> clip_regions(std::span<const Region> regions, std::int64_t n_samples,
                                 std::int64_t start, std::int64_t length) {
  std::vector<Region> out;
  auto append = [&](Region r) {
    if (!out.empty() && out.back().label == r.label && out.back().end == r.start) {
      out.back().end = r.end;
    } else {
      out.push_back(r);
    }
  };
  std::int64_t pos = 0;
  while (pos < length) {
    const std::int64_t take = std::min(n_samples - start, length - pos);
    for (const auto& r : window_regions(regions, start, take))
      append({r.start + pos, r.end + pos, r.label});
    pos += take;
  }
  return out;
}

namespace {

const CorpusUtterance& pick(const Corpus& corpus, UtteranceClass klass, Rng& rng,
                            std::size_t exclude = static_cast<std::size_t>(-1)) {
  const auto& pool = corpus.indices(klass);
  if (pool.empty())
    throw DataError("corpus has no " + std::string(to_string(klass)) + " utterances");
  std::size_t idx = pool[uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1)];
  if (idx == exclude && pool.size() > 1) {
    while (idx == exclude) idx = pool[uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1)];
  }
  return corpus.utterances()[idx];
}

std::size_t index_of(const Corpus& corpus, const CorpusUtterance& u) {
  return static_cast<std::size_t>(&u - corpus.utterances().data());
}

std::int64_t random_start(Rng& rng, std::int64_t n, std::int64_t length) {
  return n > length ? uniform_int(rng, 0, n - length) : 0;
}

TrainingClip cut(const CorpusUtterance& u, std::int64_t length, Rng& rng) {
  const std::int64_t n = static_cast<std::int64_t>(u.wave.size());
  const std::int64_t start = random_start(rng, n, length);
  TrainingClip clip;
  clip.wave = extract_clip(u.wave, static_cast<std::size_t>(start), static_cast<std::size_t>(length));
  clip.regions = clip_regions(u.entry.regions, n, start, length);
  clip.boundaries = region_boundaries(clip.regions);
  return clip;
}

}  // namespace

TrainingClip sample_training_clip(Task task, const Corpus& corpus, const StrategyMix& mix,
                                  const FrameGridSpec& grid, Rng& rng,
                                  const ClipSamplerConfig& cfg) {
  const std::int64_t length = grid.window_samples;
  const double u = uniform(rng, 0.0, 1.0);
  const int strategy = u < mix.p1 ? 1 : (u < mix.p1 + mix.p2 ? 2 : 3);

  TrainingClip clip;
  if (strategy == 1) {
    UtteranceClass klass;
    if (task == Task::kSpoof) {
      klass = uniform(rng, 0.0, 1.0) < mix.genuine_pick_prob ? UtteranceClass::kGenuine
                                                             : UtteranceClass::kFake;
    } else {
      const auto ng = corpus.indices(UtteranceClass::kGenuine).size();
      const auto nf = corpus.indices(UtteranceClass::kFake).size();
      if (ng + nf == 0) throw DataError("corpus has no genuine or fake utterances");
      klass = uniform_int(rng, 0, static_cast<std::int64_t>(ng + nf) - 1) <
                      static_cast<std::int64_t>(ng)
                  ? UtteranceClass::kGenuine
                  : UtteranceClass::kFake;
    }
    clip = cut(pick(corpus, klass, rng), length, rng);
  } else if (strategy == 2) {
    const auto min_part = static_cast<std::int64_t>(cfg.min_part_seconds * kSampleRate);
    const std::int64_t split = uniform_int(rng, min_part, length - min_part);
    const auto& a = pick(corpus, UtteranceClass::kGenuine, rng);
    const auto& b = pick(corpus, UtteranceClass::kGenuine, rng, index_of(corpus, a));
    const auto na = static_cast<std::int64_t>(a.wave.size());
    const auto nb = static_cast<std::int64_t>(b.wave.size());
    const std::int64_t sa = random_start(rng, na, split);
    const std::int64_t sb = random_start(rng, nb, length - split);
    std::vector<SplicePart> parts;
    parts.push_back({extract_clip(a.wave, sa, split), Label::kGenuine, a.entry.utterance_id, sa});
    parts.push_back({extract_clip(b.wave, sb, length - split), Label::kGenuine, b.entry.utterance_id, sb});
    auto [wave, recipe] = splice(parts, grid.hop_samples);
    clip.wave = std::move(wave);
    clip.regions = {{0, length, Label::kGenuine}};
    clip.boundaries = recipe.boundaries;
  } else {
    clip = cut(pick(corpus, UtteranceClass::kPartialFake, rng), length, rng);
  }
  clip.strategy = strategy;

  const int frames = n_frames(static_cast<std::size_t>(length), grid);
  clip.labels = task == Task::kBoundary ? boundary_labels(clip.boundaries, frames, grid)
                                        : spoof_labels(clip.regions, frames, grid);
  return clip;
}

}  // namespace spliceloc
