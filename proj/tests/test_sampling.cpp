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


#include <array>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "spliceloc/sampling.hpp"

using namespace spliceloc;

namespace {

// Samples carry their provenance in their sign: genuine > 0, fake < 0.
CorpusUtterance make_utt(const std::string& id, UtteranceClass klass, std::vector<Region> regions) {
  CorpusUtterance u;
  u.entry = {id, "wav/" + id + ".wav", klass, regions};
  u.wave.samples.resize(static_cast<std::size_t>(regions.back().end));
  for (const auto& r : regions)
    for (auto i = r.start; i < r.end; ++i)
      u.wave.samples[static_cast<std::size_t>(i)] = (r.label == Label::kGenuine ? 1.0 : -1.0) * (0.1 + 1e-6 * double(i % 1000));
  return u;
}

Corpus toy_corpus() {
  std::vector<CorpusUtterance> u;
  for (int i = 0; i < 4; ++i)
    u.push_back(make_utt("g" + std::to_string(i), UtteranceClass::kGenuine, {{0, 24000 + 4000 * i, Label::kGenuine}}));
  for (int i = 0; i < 3; ++i)
    u.push_back(make_utt("f" + std::to_string(i), UtteranceClass::kFake, {{0, 30000 + 1000 * i, Label::kFake}}));
  u.push_back(make_utt("p0", UtteranceClass::kPartialFake,
                       {{0, 10000, Label::kGenuine}, {10000, 20000, Label::kFake}, {20000, 40000, Label::kGenuine}}));
  u.push_back(make_utt("p1", UtteranceClass::kPartialFake,
                       {{0, 6000, Label::kGenuine}, {6000, 9000, Label::kFake}, {9000, 15000, Label::kGenuine}}));
  return Corpus(std::move(u));
}

}  // namespace

TEST_CASE("strategy mix validation") {
  CHECK_NOTHROW(validate(StrategyMix::spoof_default()));
  CHECK_NOTHROW(validate(StrategyMix::boundary_default()));
  CHECK_THROWS_AS(validate(StrategyMix{0.5, 0.5, 0.5, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(validate(StrategyMix{1.2, -0.2, 0.0, 0.3}), std::invalid_argument);
  CHECK_THROWS_AS(validate(StrategyMix{0.3, 0.3, 0.4, 1.5}), std::invalid_argument);
}

TEST_CASE("corpus indices by class") {
  const Corpus c = toy_corpus();
  CHECK(c.indices(UtteranceClass::kGenuine).size() == 4);
  CHECK(c.indices(UtteranceClass::kFake).size() == 3);
  CHECK(c.indices(UtteranceClass::kPartialFake).size() == 2);
}

TEST_CASE("clip regions of a wrapped clip") {
  const std::vector<Region> r{{0, 6000, Label::kGenuine}, {6000, 9000, Label::kFake}, {9000, 15000, Label::kGenuine}};
  // Start 7000 leaves an 8000-sample tail that repeats; equal neighbours merge.
  const auto got = clip_regions(r, 15000, 7000, 20480);
  const std::vector<Region> want{{0, 2000, Label::kFake},       {2000, 8000, Label::kGenuine},
                                 {8000, 10000, Label::kFake},   {10000, 16000, Label::kGenuine},
                                 {16000, 18000, Label::kFake},  {18000, 20480, Label::kGenuine}};
  CHECK(got == want);
}

TEST_CASE("sampled clips have the window shape and consistent labels") {
  const Corpus c = toy_corpus();
  const FrameGridSpec g;
  for (Task task : {Task::kBoundary, Task::kSpoof}) {
    Rng rng(21 + static_cast<int>(task));
    const StrategyMix mix = task == Task::kSpoof ? StrategyMix::spoof_default() : StrategyMix::boundary_default();
    for (int t = 0; t < 400; ++t) {
      const TrainingClip clip = sample_training_clip(task, c, mix, g, rng);
      REQUIRE(clip.wave.size() == 20480);
      REQUIRE(clip.labels.size() == 64);
      CHECK(clip.labels.task == task);
      CHECK(clip.regions.front().start == 0);
      CHECK(clip.regions.back().end == 20480);
      if (clip.strategy == 2) {
        CHECK(clip.boundaries.size() == 1);
        CHECK(clip.regions.size() == 1);
        CHECK(clip.boundaries[0] >= 3200);
        CHECK(clip.boundaries[0] <= 20480 - 3200);
      } else {
        // Provenance recovered from the sample signs.
        for (const auto& r : clip.regions)
          for (auto i = r.start; i < r.end; i += 97)
            CHECK((clip.wave.samples[static_cast<std::size_t>(i)] > 0) == (r.label == Label::kGenuine));
        CHECK(clip.boundaries == region_boundaries(clip.regions));
      }
      if (task == Task::kSpoof) {
        std::vector<oracle::LabeledSpan> spans;
        for (const auto& r : clip.regions) spans.push_back({r.start, r.end, r.label == Label::kGenuine});
        const auto want = oracle::center_labels(spans, 64, 320);
        for (int i = 0; i < 64; ++i) CHECK(int(clip.labels.labels[i]) == want[i]);
      } else {
        const auto want = oracle::boundary_frame_set(clip.boundaries, 64, 320);
        for (int i = 0; i < 64; ++i) CHECK(clip.labels.labels[i] == (want.count(i) ? 1 : 0));
      }
    }
  }
}

TEST_CASE("strategy frequencies follow the mix") {
  const Corpus c = toy_corpus();
  const FrameGridSpec g;
  for (Task task : {Task::kBoundary, Task::kSpoof}) {
    const StrategyMix mix = task == Task::kSpoof ? StrategyMix::spoof_default() : StrategyMix::boundary_default();
    Rng rng(100 + static_cast<int>(task));
    const int n = 30000;
    std::array<int, 3> count{};
    int s1 = 0, s1_genuine = 0;
    for (int t = 0; t < n; ++t) {
      const TrainingClip clip = sample_training_clip(task, c, mix, g, rng);
      ++count[static_cast<std::size_t>(clip.strategy - 1)];
      if (clip.strategy == 1) {
        ++s1;
        s1_genuine += clip.regions.front().label == Label::kGenuine;
      }
    }
    const std::array<double, 3> p{mix.p1, mix.p2, mix.p3};
    double chi2 = 0;
    for (int k = 0; k < 3; ++k) {
      const double e = n * p[static_cast<std::size_t>(k)];
      chi2 += (count[static_cast<std::size_t>(k)] - e) * (count[static_cast<std::size_t>(k)] - e) / e;
      CHECK(std::abs(count[static_cast<std::size_t>(k)] / double(n) - p[static_cast<std::size_t>(k)]) < 0.01);
    }
    CHECK(chi2 < 13.82);  // df 2, p = 0.001
    const double want = task == Task::kSpoof ? mix.genuine_pick_prob : 4.0 / 7.0;
    CHECK(std::abs(s1_genuine / double(s1) - want) < 0.02);
  }
}

TEST_CASE("sampling is reproducible from the seed") {
  const Corpus c = toy_corpus();
  Rng a(77), b(77);
  for (int t = 0; t < 50; ++t) {
    const auto x = sample_training_clip(Task::kSpoof, c, StrategyMix::spoof_default(), FrameGridSpec{}, a);
    const auto y = sample_training_clip(Task::kSpoof, c, StrategyMix::spoof_default(), FrameGridSpec{}, b);
    CHECK(x.wave.samples == y.wave.samples);
    CHECK(x.labels.labels == y.labels.labels);
  }
}

TEST_CASE("missing class is a data error") {
  std::vector<CorpusUtterance> u{make_utt("g", UtteranceClass::kGenuine, {{0, 30000, Label::kGenuine}})};
  const Corpus c(std::move(u));
  Rng rng(1);
  CHECK_THROWS_AS(
      [&] {
        for (int t = 0; t < 100; ++t)
          sample_training_clip(Task::kSpoof, c, StrategyMix{0, 0, 1, 0.3}, FrameGridSpec{}, rng);
      }(),
      DataError);
}
