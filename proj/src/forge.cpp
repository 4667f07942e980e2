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

#include "spliceloc/forge.hpp"

#include <algorithm>
#include <cstdio>

#include "spliceloc/parallel.hpp"

namespace spliceloc {

namespace {

std::string make_id(char prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%05d", prefix, index);
  return buf;
}

const PoolItem& draw(const std::vector<PoolItem>& pool, Rng& rng) {
  return pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1))];
}

ForgedUtterance make_whole(const PoolItem& item, UtteranceClass klass, std::string id) {
  ForgedUtterance u;
  u.wave = item.wave;
  u.entry.utterance_id = id;
  u.entry.path = "wav/" + id + ".wav";
  u.entry.klass = klass;
  u.entry.regions = {{0, static_cast<std::int64_t>(item.wave.size()),
                      klass == UtteranceClass::kGenuine ? Label::kGenuine : Label::kFake}};
  return u;
}

ForgedUtterance make_partial(const std::vector<PoolItem>& genuine_pool,
                             const std::vector<PoolItem>& fake_pool, const ForgeConfig& cfg,
                             std::string id, Rng& rng) {
  const auto min_piece = static_cast<std::int64_t>(cfg.min_genuine_piece_seconds * kSampleRate);
  const auto min_ins = static_cast<std::int64_t>(cfg.min_insert_seconds * kSampleRate);
  const auto max_ins = static_cast<std::int64_t>(cfg.max_insert_seconds * kSampleRate);

  const PoolItem& base = draw(genuine_pool, rng);
  const auto nb = static_cast<std::int64_t>(base.wave.size());
  int k = static_cast<int>(uniform_int(rng, cfg.min_insertions, cfg.max_insertions));
  k = static_cast<int>(std::min<std::int64_t>(k, nb / min_piece - 1));
  if (k < 1)
    throw DataError("genuine source " + base.source_id + " too short for a fake insertion");

  // k cut points leaving every genuine piece at least min_piece long.
  std::vector<std::int64_t> cuts(k);
  const std::int64_t slack = nb - (k + 1) * min_piece;
  for (auto& c : cuts) c = uniform_int(rng, 0, slack);
  std::sort(cuts.begin(), cuts.end());
  for (int j = 0; j < k; ++j) cuts[j] += (j + 1) * min_piece;

  std::vector<SplicePart> parts;
  std::int64_t prev = 0;
  for (int j = 0; j <= k; ++j) {
    const std::int64_t end = j < k ? cuts[j] : nb;
    Waveform piece;
    piece.samples.assign(base.wave.samples.begin() + prev, base.wave.samples.begin() + end);
    parts.push_back({std::move(piece), Label::kGenuine, base.source_id, prev});
    prev = end;
    if (j == k) break;

    const std::int64_t len = uniform_int(rng, min_ins, max_ins);
    const PoolItem* donor = nullptr;
    for (int attempt = 0; attempt < 256 && donor == nullptr; ++attempt) {
      const PoolItem& cand = draw(fake_pool, rng);
      if (cand.source_id != base.source_id && static_cast<std::int64_t>(cand.wave.size()) >= len)
        donor = &cand;
    }
    if (donor == nullptr)
      throw DataError("fake pool has no segment of " + std::to_string(len) +
                      " samples from a source other than " + base.source_id);
    const std::int64_t start =
        uniform_int(rng, 0, static_cast<std::int64_t>(donor->wave.size()) - len);
    Waveform ins;
    ins.samples.assign(donor->wave.samples.begin() + start, donor->wave.samples.begin() + start + len);
    parts.push_back({std::move(ins), Label::kFake, donor->source_id, start});
  }

  auto [wave, recipe] = splice(parts);
  ForgedUtterance u;
  u.wave = std::move(wave);
  u.entry.utterance_id = id;
  u.entry.path = "wav/" + id + ".wav";
  u.entry.klass = UtteranceClass::kPartialFake;
  u.entry.regions = recipe.regions();
  return u;
}

}  // namespace

std::vector<ForgedUtterance> forge_corpus(const std::vector<PoolItem>& genuine_pool,
                                          const std::vector<PoolItem>& fake_pool,
                                          const ForgeCounts& counts, std::uint64_t seed,
                                          const ForgeConfig& cfg, int jobs) {
  if (counts.genuine < 0 || counts.fake < 0 || counts.partial_fake < 0)
    throw std::invalid_argument("utterance counts must be non-negative");
  if ((counts.genuine > 0 || counts.partial_fake > 0) && genuine_pool.empty())
    throw DataError("genuine pool is empty");
  if ((counts.fake > 0 || counts.partial_fake > 0) && fake_pool.empty())
    throw DataError("fake pool is empty");

  const auto total = static_cast<std::size_t>(counts.total());
  std::vector<ForgedUtterance> out(total);
  parallel_for(total, jobs, [&](std::size_t i) {
    Rng rng = make_stream(seed, i);
    const int idx = static_cast<int>(i);
    if (idx < counts.genuine) {
      out[i] = make_whole(draw(genuine_pool, rng), UtteranceClass::kGenuine, make_id('g', idx));
    } else if (idx < counts.genuine + counts.fake) {
      const int j = idx - counts.genuine;
      out[i] = make_whole(draw(fake_pool, rng), UtteranceClass::kFake, make_id('f', j));
    } else {
      const int j = idx - counts.genuine - counts.fake;
      out[i] = make_partial(genuine_pool, fake_pool, cfg, make_id('p', j), rng);
    }
  });
  std::sort(out.begin(), out.end(), [](const ForgedUtterance& a, const ForgedUtterance& b) {
    return a.entry.utterance_id < b.entry.utterance_id;
  });
  return out;
}

SyntheticPools synth_pools(int n, std::uint64_t seed, const VoiceConfig& voice, int jobs) {
  SyntheticPools pools;
  pools.genuine.resize(static_cast<std::size_t>(n));
  pools.fake.resize(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), jobs, [&](std::size_t i) {
    Rng rng = make_stream(seed ^ 0x9e3779b97f4a7c15ULL, i);
    const std::string id = "src" + std::to_string(seed) + "_" + std::to_string(i);
    pools.genuine[i] = {id, synth_voice(rng, voice)};
    pools.fake[i] = {id, degrade(pools.genuine[i].wave)};
  });
  return pools;
}

Manifest write_corpus(const std::filesystem::path& dir,
                      const std::vector<ForgedUtterance>& utterances) {
  std::filesystem::create_directories(dir / "wav");
  Manifest manifest;
  manifest.reserve(utterances.size());
  for (const auto& u : utterances) {
    write_wav(dir / u.entry.path, u.wave);
    manifest.push_back(u.entry);
  }
  write_manifest(dir / "manifest.tsv", manifest);
  return manifest;
}

}  // namespace spliceloc
