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

#ifndef SPLICELOC_FORGE_HPP_
#define SPLICELOC_FORGE_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "spliceloc/manifest.hpp"
#include "spliceloc/random.hpp"
#include "spliceloc/synth.hpp"

namespace spliceloc {

struct PoolItem {
  std::string source_id;
  Waveform wave;
};

struct ForgeCounts {
  int genuine = 0;
  int fake = 0;
  int partial_fake = 0;

  int total() const { return genuine + fake + partial_fake; }
  friend bool operator==(const ForgeCounts&, const ForgeCounts&) = default;
};

struct ForgeConfig {
  int min_insertions = 1;
  int max_insertions = 3;
  double min_insert_seconds = 0.3;
  double max_insert_seconds = 1.5;
  double min_genuine_piece_seconds = 0.3;
  friend bool operator==(const ForgeConfig&, const ForgeConfig&) = default;
};

struct ForgedUtterance {
  ManifestEntry entry;
  Waveform wave;
};

/// Builds `counts` utterances per class. Genuine and fake utterances are
/// whole pool items; partial fakes cut a genuine item at 1-3 points and
/// insert 0.3-1.5 s fake segments taken from a different source, so the
/// regions alternate genuine/fake and start and end genuine. Utterance i draws
/// from its own stream make_stream(seed, i); `jobs` workers give identical
/// output for any value.
std::vector<ForgedUtterance> forge_corpus(const std::vector<PoolItem>& genuine_pool,
                                          const std::vector<PoolItem>& fake_pool,
                                          const ForgeCounts& counts, std::uint64_t seed,
                                          const ForgeConfig& cfg = {}, int jobs = 1);

/// Synthetic pools: `n` voices plus their degraded counterparts, ids
/// "src<seed>_<i>".
struct SyntheticPools {
  std::vector<PoolItem> genuine;
  std::vector<PoolItem> fake;
};
SyntheticPools synth_pools(int n, std::uint64_t seed, const VoiceConfig& voice = {},
                           int jobs = 1);

/// Writes wav/<id>.wav for each utterance and manifest.tsv under `dir`.
Manifest write_corpus(const std::filesystem::path& dir,
                      const std::vector<ForgedUtterance>& utterances);

}  // namespace spliceloc

#endif  // SPLICELOC_FORGE_HPP_
