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


#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "spliceloc/manifest.hpp"

using namespace spliceloc;

namespace {

Manifest sample_manifest() {
  return {
      {"u000", "wav/u000.wav", UtteranceClass::kGenuine, {{0, 32000, Label::kGenuine}}},
      {"u001", "wav/u001.wav", UtteranceClass::kFake, {{0, 40000, Label::kFake}}},
      {"u002", "wav/u002.wav", UtteranceClass::kPartialFake,
       {{0, 16000, Label::kGenuine}, {16000, 24000, Label::kFake}, {24000, 48000, Label::kGenuine}}},
  };
}

}  // namespace

TEST_CASE("manifest line format") {
  const auto m = sample_manifest();
  CHECK(format_manifest_line(m[2]) ==
        "u002\twav/u002.wav\tpartial_fake\t0:16000:genuine,16000:24000:fake,24000:48000:genuine");
  CHECK(parse_manifest_line(format_manifest_line(m[2])) == m[2]);
  CHECK(m[2].n_samples() == 48000);
  CHECK(m[2].utterance_label() == Label::kFake);
  CHECK(m[0].utterance_label() == Label::kGenuine);
}

TEST_CASE("manifest round trip through streams and files") {
  const auto m = sample_manifest();
  std::stringstream ss;
  write_manifest(ss, m);
  CHECK(read_manifest(ss) == m);

  const auto path = oracle::scratch_dir("manifest") / "manifest.tsv";
  write_manifest(path, m);
  CHECK(read_manifest(path) == m);
}

TEST_CASE("manifest validation") {
  auto m = sample_manifest();
  SUBCASE("gap") {
    m[2].regions[1].start = 16001;
    CHECK_THROWS_AS(validate(m[2]), DataError);
  }
  SUBCASE("overlap") {
    m[2].regions[1].start = 15000;
    CHECK_THROWS_AS(validate(m[2]), DataError);
  }
  SUBCASE("not starting at zero") {
    m[0].regions[0].start = 5;
    CHECK_THROWS_AS(validate(m[0]), DataError);
  }
  SUBCASE("class disagrees with label") {
    m[0].regions[0].label = Label::kFake;
    CHECK_THROWS_AS(validate(m[0]), DataError);
  }
  SUBCASE("empty id") {
    m[0].utterance_id.clear();
    CHECK_THROWS_AS(validate(m[0]), DataError);
  }
}

TEST_CASE("manifest parse errors name the line") {
  std::stringstream ss("u000\twav/u000.wav\tgenuine\t0:100:genuine\nu001\twav/u001.wav\tbogus\t0:100:fake\n");
  try {
    read_manifest(ss);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_manifest_line("u0\tpath\tgenuine"), DataError);
  CHECK_THROWS_AS(parse_manifest_line("u0\tpath\tgenuine\t0:x:genuine"), DataError);
  CHECK_THROWS_AS(parse_manifest_line("u0\tpath\tgenuine\t0:100"), DataError);
  CHECK_THROWS_AS(read_manifest(std::filesystem::path("/nonexistent/manifest.tsv")), DataError);
}
