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


#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "spliceloc/labels.hpp"
#include "spliceloc/random.hpp"

using namespace spliceloc;

namespace {

Waveform constant(std::size_t n, double v) {
  Waveform w;
  w.samples.assign(n, v);
  return w;
}

std::vector<oracle::LabeledSpan> spans_of(const std::vector<Region>& regions) {
  std::vector<oracle::LabeledSpan> out;
  for (const auto& r : regions) out.push_back({r.start, r.end, r.label == Label::kGenuine});
  return out;
}

}  // namespace

TEST_CASE("string conversions") {
  CHECK(parse_label(to_string(Label::kGenuine)) == Label::kGenuine);
  CHECK(parse_label(to_string(Label::kFake)) == Label::kFake);
  CHECK(parse_task("boundary") == Task::kBoundary);
  CHECK(parse_task("spoof") == Task::kSpoof);
  CHECK_THROWS_AS(parse_label("bonafide"), DataError);
  CHECK_THROWS_AS(parse_task("vae"), DataError);
}

TEST_CASE("boundary labels") {
  const FrameGridSpec g;
  SUBCASE("single boundary at 0.5 s") {
    const std::vector<std::int64_t> b{8000};
    const auto l = boundary_labels(b, 100, g);
    CHECK(l.task == Task::kBoundary);
    for (int i = 0; i < 100; ++i) CHECK(l.labels[i] == ((i >= 24 && i <= 27) ? 1 : 0));
  }
  SUBCASE("clipped at both ends") {
    const std::vector<std::int64_t> b{100, 63 * 320 + 5};
    const auto l = boundary_labels(b, 64, g);
    CHECK(l.labels[0] == 1);
    CHECK(l.labels[1] == 1);
    CHECK(l.labels[2] == 1);
    CHECK(l.labels[3] == 0);
    CHECK(l.labels[62] == 1);
    CHECK(l.labels[63] == 1);
    CHECK(std::count(l.labels.begin(), l.labels.end(), 1) == 5);
  }
  SUBCASE("random boundary sets match the union oracle") {
    Rng rng(5);
    for (int t = 0; t < 300; ++t) {
      const int n = static_cast<int>(uniform_int(rng, 1, 200));
      std::vector<std::int64_t> b;
      const auto k = uniform_int(rng, 0, 6);
      for (std::int64_t j = 0; j < k; ++j) b.push_back(uniform_int(rng, 0, static_cast<std::int64_t>(n) * 320 - 1));
      const auto l = boundary_labels(b, n, g);
      const auto want = oracle::boundary_frame_set(b, n, 320);
      REQUIRE(l.size() == n);
      for (int i = 0; i < n; ++i) CHECK(l.labels[i] == (want.count(i) ? 1 : 0));
    }
  }
  SUBCASE("out of range boundary") {
    const std::vector<std::int64_t> b{64 * 320 + 10};
    CHECK_THROWS_AS(boundary_labels(b, 64, g), DataError);
  }
}

TEST_CASE("spoof labels") {
  const FrameGridSpec g;
  SUBCASE("one second fake region inside genuine speech") {
    const std::vector<Region> r{{0, 16000, Label::kGenuine}, {16000, 24000, Label::kFake}, {24000, 48000, Label::kGenuine}};
    const auto l = spoof_labels(r, 150, g);
    CHECK(l.task == Task::kSpoof);
    for (int i = 0; i < 150; ++i) CHECK(l.labels[i] == ((i >= 50 && i < 75) ? 0 : 1));
  }
  SUBCASE("off-grid regions match the center oracle") {
    Rng rng(9);
    for (int t = 0; t < 300; ++t) {
      const int n = static_cast<int>(uniform_int(rng, 1, 150));
      const std::int64_t total = static_cast<std::int64_t>(n) * 320 + uniform_int(rng, 0, 319);
      std::vector<Region> r;
      std::int64_t pos = 0;
      Label lab = Label::kGenuine;
      while (pos < total) {
        const std::int64_t end = std::min(total, pos + uniform_int(rng, 1, 4000));
        r.push_back({pos, end, lab});
        lab = lab == Label::kGenuine ? Label::kFake : Label::kGenuine;
        pos = end;
      }
      const auto l = spoof_labels(r, n, g);
      const auto want = oracle::center_labels(spans_of(r), n, 320);
      for (int i = 0; i < n; ++i) CHECK(int(l.labels[i]) == want[i]);
    }
  }
  SUBCASE("uncovered center") {
    const std::vector<Region> r{{0, 1000, Label::kGenuine}};
    CHECK_THROWS_AS(spoof_labels(r, 10, g), DataError);
  }
}

TEST_CASE("splice") {
  SUBCASE("round trip of a 1 s + 0.5 s splice") {
    std::vector<SplicePart> parts{{constant(16000, 0.25), Label::kGenuine, "a", 100},
                                  {constant(8000, -0.5), Label::kFake, "b", 0}};
    const auto [w, recipe] = splice(parts);
    REQUIRE(w.size() == 24000);
    CHECK(w.samples[15999] == 0.25);
    CHECK(w.samples[16000] == -0.5);
    CHECK(recipe.boundaries == std::vector<std::int64_t>{16000});
    REQUIRE(recipe.sources.size() == 2);
    CHECK(recipe.sources[0].utterance_id == "a");
    CHECK(recipe.sources[0].start_sample == 100);
    CHECK(recipe.sources[0].end_sample == 16100);
    CHECK(recipe.sources[1].label == Label::kFake);
    const auto regions = recipe.regions();
    CHECK(regions == std::vector<Region>{{0, 16000, Label::kGenuine}, {16000, 24000, Label::kFake}});
    const auto bl = boundary_labels(recipe.boundaries, 75, FrameGridSpec{});
    for (int i = 0; i < 75; ++i) CHECK(bl.labels[i] == ((i >= 49 && i <= 52) ? 1 : 0));
  }
  SUBCASE("random splices keep every sample") {
    Rng rng(13);
    for (int t = 0; t < 50; ++t) {
      std::vector<SplicePart> parts;
      std::vector<double> expect;
      const auto k = uniform_int(rng, 2, 5);
      for (std::int64_t j = 0; j < k; ++j) {
        Waveform p;
        const auto n = uniform_int(rng, 320, 3000);
        for (std::int64_t s = 0; s < n; ++s) p.samples.push_back(uniform(rng, -1, 1));
        expect.insert(expect.end(), p.samples.begin(), p.samples.end());
        parts.push_back({p, j % 2 ? Label::kFake : Label::kGenuine, "u" + std::to_string(j), 0});
      }
      const auto [w, recipe] = splice(parts);
      CHECK(w.samples == expect);
      CHECK(recipe.boundaries.size() == static_cast<std::size_t>(k - 1));
      CHECK(region_boundaries(recipe.regions()) == recipe.boundaries);
    }
  }
  SUBCASE("errors") {
    std::vector<SplicePart> one{{constant(1000, 0.1), Label::kGenuine, "a", 0}};
    CHECK_THROWS_AS(splice(one), DataError);
    std::vector<SplicePart> tiny{{constant(1000, 0.1), Label::kGenuine, "a", 0},
                                 {constant(100, 0.1), Label::kFake, "b", 0}};
    CHECK_THROWS_AS(splice(tiny), DataError);
  }
}

TEST_CASE("window regions") {
  const std::vector<Region> r{{0, 100, Label::kGenuine}, {100, 300, Label::kFake}, {300, 400, Label::kGenuine}};
  CHECK(window_regions(r, 50, 100) == std::vector<Region>{{0, 50, Label::kGenuine}, {50, 100, Label::kFake}});
  CHECK(window_regions(r, 120, 100) == std::vector<Region>{{0, 100, Label::kFake}});
  CHECK(window_regions(r, 0, 400) == r);
  CHECK(region_boundaries(r) == std::vector<std::int64_t>{100, 300});
}
