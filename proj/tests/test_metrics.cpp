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


#include <cmath>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "spliceloc/metrics.hpp"
#include "spliceloc/random.hpp"

using namespace spliceloc;

namespace {

std::vector<ScoredTrial> trials(const std::vector<double>& target, const std::vector<double>& non) {
  std::vector<ScoredTrial> t;
  for (double s : target) t.push_back({s, true});
  for (double s : non) t.push_back({s, false});
  return t;
}

// 2 s utterances (100 frames); the partial fake holds a fake second half-second at frames 50..74.
Manifest toy_manifest() {
  return {
      {"f", "wav/f.wav", UtteranceClass::kFake, {{0, 32000, Label::kFake}}},
      {"g", "wav/g.wav", UtteranceClass::kGenuine, {{0, 32000, Label::kGenuine}}},
      {"p", "wav/p.wav", UtteranceClass::kPartialFake,
       {{0, 16000, Label::kGenuine}, {16000, 24000, Label::kFake}, {24000, 32000, Label::kGenuine}}},
  };
}

UtteranceVerdict verdict(const std::string& id, std::vector<VerdictSegment> segs) {
  UtteranceVerdict v{id, std::move(segs), Label::kGenuine};
  for (const auto& s : v.segments)
    if (s.label == Label::kFake) v.utterance_label = Label::kFake;
  return v;
}

}  // namespace

TEST_CASE("EER examples") {
  CHECK(eer(trials({0.9, 0.8}, {0.1, 0.2})) == 0.0);
  CHECK(eer(trials({0.1}, {0.9})) == 1.0);
  CHECK(eer(trials({0.5}, {0.5})) == doctest::Approx(0.5));
  CHECK(eer(trials({0.4, 0.6, 0.8}, {0.2, 0.5, 0.7})) == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(eer(trials({0.5}, {})), std::invalid_argument);
  CHECK_THROWS_AS(eer(trials({}, {0.5})), std::invalid_argument);
  CHECK_THROWS_AS(eer(trials({NAN}, {0.5})), std::invalid_argument);
}

TEST_CASE("EER agrees with direct counting") {
  Rng rng(1);
  for (int t = 0; t < 3000; ++t) {
    std::vector<double> a, b;
    const auto na = uniform_int(rng, 1, 30), nb = uniform_int(rng, 1, 30);
    const bool coarse = t % 2 == 0;  // many ties
    for (std::int64_t i = 0; i < na; ++i) a.push_back(coarse ? double(uniform_int(rng, 0, 5)) : uniform(rng, 0.2, 1.0));
    for (std::int64_t i = 0; i < nb; ++i) b.push_back(coarse ? double(uniform_int(rng, 0, 5)) : uniform(rng, 0.0, 0.8));
    const double got = eer(trials(a, b));
    CHECK(got == doctest::Approx(oracle::brute_force_eer(a, b)).epsilon(1e-12));
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("EER is invariant to monotone score transforms") {
  Rng rng(2);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a, b, ea, eb;
    for (int i = 0; i < 20; ++i) {
      a.push_back(uniform(rng, -1, 2));
      b.push_back(uniform(rng, -2, 1));
    }
    for (double s : a) ea.push_back(std::exp(s));
    for (double s : b) eb.push_back(std::exp(s));
    CHECK(eer(trials(a, b)) == doctest::Approx(eer(trials(ea, eb))).epsilon(1e-12));
  }
}

TEST_CASE("F1 and accuracy") {
  const std::vector<std::uint8_t> truth{1, 1, 0, 0, 0};
  const auto perfect = confusion(truth, truth, Label::kFake);
  CHECK(f1(perfect) == 1.0);
  CHECK(perfect.tp == 2);
  CHECK(perfect.tn == 3);

  const std::vector<std::uint8_t> pred{1, 0, 1, 0, 0};
  const auto fake = confusion(pred, truth, Label::kFake);
  CHECK(fake.tp == 1);
  CHECK(fake.fp == 1);
  CHECK(fake.fn == 1);
  CHECK(fake.tn == 2);
  CHECK(f1(fake) == doctest::Approx(0.5));
  const auto gen = confusion(pred, truth, Label::kGenuine);
  CHECK(gen.tp == 2);
  CHECK(gen.fp == 1);
  CHECK(gen.fn == 1);
  CHECK(f1(gen) == doctest::Approx(4.0 / 6.0));

  bool degenerate = false;
  const std::vector<std::uint8_t> zeros(4, 0);
  CHECK(f1(confusion(zeros, zeros, Label::kFake), &degenerate) == 0.0);
  CHECK(degenerate);
  CHECK(f1(confusion(zeros, zeros, Label::kGenuine), &degenerate) == 1.0);
  CHECK_FALSE(degenerate);

  FrameConfusion acc{0, 0, 0, 0, Label::kFake};
  accumulate(acc, fake);
  accumulate(acc, perfect);
  CHECK(acc.total() == 10);
  CHECK(acc.tp == 3);
  CHECK_THROWS_AS(accumulate(acc, gen), std::invalid_argument);
  CHECK_THROWS_AS(confusion(pred, zeros, Label::kFake), DataError);

  const std::vector<Label> p{Label::kFake, Label::kGenuine, Label::kFake, Label::kFake};
  const std::vector<Label> g{Label::kFake, Label::kFake, Label::kFake, Label::kGenuine};
  CHECK(sentence_accuracy(p, g) == 0.5);
  CHECK_THROWS_AS(sentence_accuracy(p, std::span<const Label>(g).first(3)), DataError);
  CHECK_THROWS_AS(sentence_accuracy({}, {}), DataError);
}

TEST_CASE("ADD score") {
  CHECK(std::abs(add_score(0.8223, 0.6066) - 0.6713) < 5e-5);
  CHECK(add_score(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(add_score(0.0, 0.0) == 0.0);
  CHECK(add_score(0.5, 0.5, 0.5, 0.5) == doctest::Approx(0.5));
  CHECK_THROWS_AS(add_score(1.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(add_score(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("evaluation against ground truth") {
  const Manifest m = toy_manifest();
  const std::vector<UtteranceVerdict> truth{
      verdict("g", {{0, 100, Label::kGenuine}}),
      verdict("f", {{0, 100, Label::kFake}}),
      verdict("p", {{0, 50, Label::kGenuine}, {50, 75, Label::kFake}, {75, 100, Label::kGenuine}}),
  };
  SUBCASE("perfect verdicts") {
    const auto r = evaluate(m, truth, {{"g", 0.1}, {"f", 0.2}, {"p", 0.9}});
    CHECK(r.n_utterances == 3);
    CHECK(r.accuracy == 1.0);
    CHECK(r.f1_fake == 1.0);
    CHECK(r.f1_genuine == 1.0);
    CHECK(r.add == doctest::Approx(1.0));
    CHECK(r.eer_boundary == 0.0);
  }
  SUBCASE("hand-computed mistakes") {
    const std::vector<UtteranceVerdict> v{
        verdict("g", {{0, 100, Label::kGenuine}}),
        verdict("f", {{0, 100, Label::kGenuine}}),
        verdict("p", {{0, 60, Label::kGenuine}, {60, 100, Label::kFake}}),
    };
    const auto r = evaluate(m, v, {});
    // Fake-positive frames: TP 15 (60..74), FP 25 (75..99), FN 110 (f + 50..59).
    CHECK(r.fake_confusion.tp == 15);
    CHECK(r.fake_confusion.fp == 25);
    CHECK(r.fake_confusion.fn == 110);
    CHECK(r.fake_confusion.tn == 150);
    CHECK(r.accuracy == doctest::Approx(2.0 / 3.0));
    CHECK(r.f1_fake == doctest::Approx(30.0 / 165.0));
    CHECK(r.f1_genuine == doctest::Approx(300.0 / 435.0));
    CHECK(r.add == doctest::Approx(0.3 * 2.0 / 3.0 + 0.7 * 30.0 / 165.0));
    CHECK(std::isnan(r.eer_boundary));
  }
  SUBCASE("boundary EER uses utterances with splice points as targets") {
    const auto r = evaluate(m, truth, {{"g", 0.1}, {"f", 0.8}, {"p", 0.7}});
    CHECK(r.eer_boundary == doctest::Approx(oracle::brute_force_eer({0.7}, {0.1, 0.8})));
  }
  SUBCASE("data errors") {
    auto missing = truth;
    missing.pop_back();
    try {
      evaluate(m, missing, {});
      FAIL("expected DataError");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("missing verdict for p") != std::string::npos);
    }
    auto extra = truth;
    extra.push_back(verdict("zz", {{0, 100, Label::kGenuine}}));
    CHECK_THROWS_AS(evaluate(m, extra, {}), DataError);
    auto dup = truth;
    dup.push_back(truth[0]);
    CHECK_THROWS_AS(evaluate(m, dup, {}), DataError);
    auto short_v = truth;
    short_v[0] = verdict("g", {{0, 99, Label::kGenuine}});
    CHECK_THROWS_AS(evaluate(m, short_v, {}), DataError);
    CHECK_THROWS_AS(evaluate(m, truth, {{"g", 0.1}}), DataError);
  }
}

TEST_CASE("report format") {
  EvaluationReport r;
  r.n_utterances = 3;
  r.accuracy = 2.0 / 3.0;
  r.f1_genuine = 0.5;
  r.f1_fake = 0.25;
  r.add = 0.375;
  r.eer_boundary = 0.125;
  std::ostringstream out;
  write_report(out, r);
  std::istringstream in(out.str());
  std::string first;
  std::getline(in, first);
  CHECK(first == "A=0.6667 F1=0.5000 F1star=0.2500 ADD=0.3750 EER_boundary=0.1250");
  std::map<std::string, std::string> kv;
  for (std::string k, v; in >> k >> v;) kv[k] = v;
  CHECK(kv.at("utterances") == "3");
  CHECK(kv.at("add_score") == "0.375000");
  CHECK(kv.size() == 6);
}
