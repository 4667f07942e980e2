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
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "spliceloc/score_file.hpp"
#include "spliceloc/scorer.hpp"

using namespace spliceloc;

namespace {

// Two Gaussian blobs in 20 dimensions; label 1 sits at +shift on every axis.
std::vector<LabeledClip> blobs(int n_clips, int frames, double shift, Rng& rng) {
  std::normal_distribution<double> nd;
  std::vector<LabeledClip> data;
  for (int c = 0; c < n_clips; ++c) {
    LabeledClip clip;
    clip.features.matrix.resize(frames, 20);
    clip.labels.task = Task::kSpoof;
    for (int i = 0; i < frames; ++i) {
      const std::uint8_t y = (i + c) % 2;
      clip.labels.labels.push_back(y);
      for (int d = 0; d < 20; ++d) clip.features.matrix(i, d) = nd(rng) + (y ? shift : -shift);
    }
    data.push_back(std::move(clip));
  }
  return data;
}

double accuracy(const ScorerModel& m, const std::vector<LabeledClip>& data) {
  int ok = 0, n = 0;
  for (const auto& c : data) {
    const auto s = score_clip(m, c.features);
    for (int i = 0; i < s.n_frames(); ++i, ++n) ok += (s.probs[i] >= 0.5) == (c.labels.labels[i] == 1);
  }
  return ok / double(n);
}

}  // namespace

TEST_CASE("default architecture") {
  Rng rng(1);
  const auto data = blobs(2, 10, 1.0, rng);
  const ScorerModel m = init_scorer(Task::kBoundary, data, ScorerTrainConfig{}, rng);
  CHECK(m.net.dims() == std::vector<int>{20, 64, 64, 1});
  CHECK(m.net.n_params() == 20 * 64 + 64 + 64 * 64 + 64 + 64 + 1);
  for (int l = 0; l < 3; ++l) CHECK(m.net.bias(l).isZero());
}

TEST_CASE("analytic gradient agrees with central differences") {
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const auto data = blobs(1, 40, 0.5, rng);
    ScorerModel m = init_scorer(Task::kSpoof, data, ScorerTrainConfig{}, rng);
    const auto r = gradient_check(m, data[0], rng, 1e-5, 300);
    CHECK(r.n_checked == 300);
    CHECK(r.max_relative_error < 1e-4);
  }
}

TEST_CASE("central difference error shrinks quadratically") {
  Rng rng(3);
  const auto data = blobs(1, 30, 0.5, rng);
  ScorerModel m = init_scorer(Task::kSpoof, data, ScorerTrainConfig{}, rng);
  std::vector<double> grad;
  scorer_loss(m, data[0].features.matrix, data[0].labels.labels, &grad);
  auto& p = m.net.params();
  int tested = 0;
  for (std::size_t idx = 0; idx < p.size() && tested < 5; idx += 977) {
    auto numeric = [&](double h) {
      const double keep = p[idx];
      p[idx] = keep + h;
      const double up = scorer_loss(m, data[0].features.matrix, data[0].labels.labels);
      p[idx] = keep - h;
      const double down = scorer_loss(m, data[0].features.matrix, data[0].labels.labels);
      p[idx] = keep;
      return (up - down) / (2 * h);
    };
    const double e1 = std::abs(numeric(0.1) - grad[idx]);
    const double e2 = std::abs(numeric(0.05) - grad[idx]);
    if (e2 < 1e-10) continue;
    ++tested;
    CHECK(e1 / e2 >= 2.0);
    CHECK(e1 / e2 <= 6.0);
  }
  CHECK(tested > 0);
}

TEST_CASE("zero weights reduce to logistic regression on the output bias") {
  Rng rng(4);
  const auto data = blobs(1, 50, 1.0, rng);
  ScorerModel m = init_scorer(Task::kSpoof, data, ScorerTrainConfig{}, rng);
  auto& p = m.net.params();
  std::fill(p.begin(), p.end(), 0.0);
  for (double b : {0.0, 0.7, -1.3}) {
    p.back() = b;
    std::vector<double> grad;
    const double loss = scorer_loss(m, data[0].features.matrix, data[0].labels.labels, &grad);
    const double sig = 1.0 / (1.0 + std::exp(-b));
    double want = 0, want_loss = 0;
    for (auto y : data[0].labels.labels) {
      want += sig - y;
      want_loss -= y ? std::log(sig) : std::log(1 - sig);
    }
    CHECK(grad.back() == doctest::Approx(want / 50.0).epsilon(1e-12));
    CHECK(loss == doctest::Approx(want_loss / 50.0).epsilon(1e-12));
    const auto s = score_clip(m, data[0].features);
    for (double q : s.probs) CHECK(q == doctest::Approx(sig).epsilon(1e-12));
  }
}

TEST_CASE("training separates blobs") {
  Rng rng(5);
  // Means 0.7 * 2 * sqrt(20) apart: Bayes error about 0.1%.
  const auto train = blobs(40, 64, 0.7, rng);
  const auto test = blobs(10, 64, 0.7, rng);
  ScorerTrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 20;
  cfg.batch_clips = 8;
  TrainReport rep;
  const ScorerModel m = train_scorer(Task::kSpoof, train, cfg, rng, &rep);
  CHECK(rep.epoch_loss.size() == 20);
  CHECK(rep.epoch_loss.back() < rep.epoch_loss.front());
  CHECK(m.final_loss == rep.epoch_loss.back());
  CHECK(accuracy(m, test) >= 0.99);
}

TEST_CASE("zero epochs leaves the initialization") {
  Rng a(6), b(6);
  const auto data = blobs(4, 20, 1.0, a);
  blobs(4, 20, 1.0, b);
  ScorerTrainConfig cfg;
  cfg.epochs = 0;
  TrainReport rep;
  const ScorerModel m = train_scorer(Task::kSpoof, data, cfg, a, &rep);
  const ScorerModel init = init_scorer(Task::kSpoof, data, cfg, b);
  CHECK(m.net.params() == init.net.params());
  CHECK(rep.epoch_loss.empty());
  CHECK(m.final_loss == 0.0);
}

TEST_CASE("constant labels drive scores to the label") {
  Rng rng(7);
  auto data = blobs(16, 64, 0.0, rng);
  for (auto& c : data) std::fill(c.labels.labels.begin(), c.labels.labels.end(), 1);
  ScorerTrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 40;
  cfg.batch_clips = 4;
  const ScorerModel m = train_scorer(Task::kSpoof, data, cfg, rng);
  for (const auto& c : data)
    for (double q : score_clip(m, c.features).probs) CHECK(q >= 0.95);
}

TEST_CASE("full-batch small-step training decreases the loss every epoch") {
  Rng rng(8);
  const auto data = blobs(6, 32, 0.3, rng);
  ScorerTrainConfig cfg;
  cfg.learning_rate = 1e-4;
  cfg.momentum = 0.0;
  cfg.epochs = 25;
  cfg.batch_clips = 6;
  cfg.shuffle = false;
  TrainReport rep;
  train_scorer(Task::kSpoof, data, cfg, rng, &rep);
  for (std::size_t e = 1; e < rep.epoch_loss.size(); ++e) CHECK(rep.epoch_loss[e] < rep.epoch_loss[e - 1]);
}

TEST_CASE("training is reproducible from the seed") {
  Rng d(9);
  const auto data = blobs(8, 32, 0.5, d);
  ScorerTrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_clips = 3;
  Rng a(10), b(10);
  CHECK(train_scorer(Task::kSpoof, data, cfg, a).net.params() == train_scorer(Task::kSpoof, data, cfg, b).net.params());
}

TEST_CASE("scores stay finite and clamped on extreme inputs") {
  Rng rng(11);
  const auto data = blobs(2, 16, 1.0, rng);
  const ScorerModel m = init_scorer(Task::kSpoof, data, ScorerTrainConfig{}, rng);
  FrameFeatures f;
  f.matrix.resize(10000, 20);
  std::uniform_real_distribution<double> u(-1, 1);
  for (Eigen::Index i = 0; i < f.matrix.rows(); ++i)
    for (int d = 0; d < 20; ++d) f.matrix(i, d) = u(rng) * std::pow(10.0, double(i % 13) - 2);
  const auto s = score_clip(m, f, "fuzz");
  REQUIRE(s.n_frames() == 10000);
  for (double q : s.probs) {
    CHECK(std::isfinite(q));
    CHECK(q >= 1e-9);
    CHECK(q <= 1 - 1e-9);
  }
  FrameFeatures wrong;
  wrong.matrix.resize(3, 19);
  CHECK_THROWS_AS(score_clip(m, wrong), DataError);
}

TEST_CASE("training data checks") {
  Rng rng(12);
  auto data = blobs(2, 16, 1.0, rng);
  CHECK_THROWS_AS(train_scorer(Task::kSpoof, {}, ScorerTrainConfig{}, rng), std::invalid_argument);
  data[1].labels.labels.pop_back();
  CHECK_THROWS_AS(train_scorer(Task::kSpoof, data, ScorerTrainConfig{}, rng), DataError);
  data[1].labels.labels.push_back(2);
  CHECK_THROWS_AS(train_scorer(Task::kSpoof, data, ScorerTrainConfig{}, rng), DataError);
}

TEST_CASE("model persistence") {
  Rng rng(13);
  const auto data = blobs(4, 16, 1.0, rng);
  ScorerTrainConfig cfg;
  cfg.epochs = 2;
  const ScorerModel m = train_scorer(Task::kBoundary, data, cfg, rng);
  const auto dir = oracle::scratch_dir("scorer");
  save_scorer(dir / "m.scorer", m);
  const ScorerModel r = load_scorer(dir / "m.scorer");
  CHECK(r.task == Task::kBoundary);
  CHECK(r.net.dims() == m.net.dims());
  CHECK(r.net.params() == m.net.params());
  CHECK(r.final_loss == m.final_loss);
  CHECK(score_clip(r, data[0].features).probs == score_clip(m, data[0].features).probs);

  std::ofstream(dir / "bad.scorer") << "SGVAE1 not a scorer";
  CHECK_THROWS_AS(load_scorer(dir / "bad.scorer"), DataError);
  std::ifstream in(dir / "m.scorer", std::ios::binary);
  std::string blob((std::istreambuf_iterator<char>(in)), {});
  std::ofstream(dir / "short.scorer", std::ios::binary) << blob.substr(0, blob.size() / 2);
  CHECK_THROWS_AS(load_scorer(dir / "short.scorer"), DataError);
  CHECK_THROWS_AS(load_scorer(dir / "missing.scorer"), DataError);
}

TEST_CASE("score file interchange") {
  FrameScores s{"p00003", Task::kSpoof, 320, {0.0, 0.25, 0.1234564, 1.0}};
  std::stringstream ss;
  write_scores(ss, s);
  CHECK(ss.str() == "#id=p00003 task=spoof hop=320 n=4\n0\t0.000000\n1\t0.250000\n2\t0.123456\n3\t1.000000\n");
  const FrameScores r = read_scores(ss);
  CHECK(r.utterance_id == "p00003");
  CHECK(r.task == Task::kSpoof);
  CHECK(r.hop_samples == 320);
  REQUIRE(r.n_frames() == 4);
  CHECK(r.probs[2] == doctest::Approx(0.123456).epsilon(1e-12));
  CHECK(score_file_name("p00003", Task::kBoundary) == "p00003.boundary.scores");

  const auto dir = oracle::scratch_dir("score_file");
  write_scores(dir / "x.scores", s);
  CHECK(read_scores(dir / "x.scores").n_frames() == 4);

  auto bad = [](const std::string& text) {
    std::stringstream in(text);
    CHECK_THROWS_AS(read_scores(in), DataError);
  };
  bad("");
  bad("id=a task=spoof hop=320 n=1\n0\t0.5\n");
  bad("#id=a task=vae hop=320 n=1\n0\t0.5\n");
  bad("#id=a task=spoof hop=320\n0\t0.5\n");
  bad("#id=a task=spoof hop=320 n=2\n0\t0.5\n");
  bad("#id=a task=spoof hop=320 n=1\n0\t1.5\n");
  bad("#id=a task=spoof hop=320 n=2\n0\t0.5\n2\t0.5\n");
  bad("#id=a task=spoof hop=320 n=1\n0 0.5\n");
  bad("#id=a task=spoof hop=320 n=1 color=red\n0\t0.5\n");
  CHECK_THROWS_AS(read_scores(dir / "missing.scores"), DataError);
}
