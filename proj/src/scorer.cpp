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

#include "spliceloc/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spliceloc/binio.hpp"

namespace spliceloc {

namespace {

constexpr char kMagic[] = "SGMLP1";

Eigen::MatrixXd standardize(const ScorerModel& m, const Eigen::MatrixXd& frames) {
  // frames: n x d (row per frame) -> d x n standardized
  Eigen::MatrixXd x = frames.transpose();
  x.colwise() -= m.feature_mean;
  x.array().colwise() /= m.feature_std.array();
  return x;
}

double sigmoid(double z) {
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// Mean BCE-with-logits over columns of `logits`; fills dL/dlogits if asked.
double bce(const Eigen::MatrixXd& logits, std::span<const std::uint8_t> labels,
           Eigen::MatrixXd* grad) {
  const auto n = logits.cols();
  double total = 0.0;
  if (grad) grad->resize(1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = logits(0, i);
    const double y = labels[static_cast<std::size_t>(i)];
    total += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
    if (grad) (*grad)(0, i) = (sigmoid(z) - y) / static_cast<double>(n);
  }
  return total / static_cast<double>(n);
}

void check_data(const std::vector<LabeledClip>& data) {
  if (data.empty()) throw std::invalid_argument("training set is empty");
  const int dim = data.front().features.dim();
  for (const auto& c : data) {
    if (c.features.dim() != dim) throw DataError("training clips disagree on feature dimension");
    if (c.features.n_frames() != c.labels.size())
      throw DataError("clip has " + std::to_string(c.features.n_frames()) + " frames but " +
                      std::to_string(c.labels.size()) + " labels");
    for (auto y : c.labels.labels)
      if (y > 1) throw DataError("labels must be binary");
  }
}

}  // namespace

ScorerModel init_scorer(Task task, const std::vector<LabeledClip>& data,
                        const ScorerTrainConfig& cfg, Rng& rng) {
  check_data(data);
  const int dim = data.front().features.dim();
  std::vector<int> dims{dim};
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
  dims.push_back(1);

  ScorerModel m;
  m.task = task;
  m.net = DenseNet(dims);
  m.net.init(rng);

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim), sq = Eigen::VectorXd::Zero(dim);
  double count = 0;
  for (const auto& c : data) {
    sum += c.features.matrix.colwise().sum().transpose();
    sq += c.features.matrix.array().square().colwise().sum().matrix().transpose();
    count += c.features.n_frames();
  }
  m.feature_mean = sum / count;
  m.feature_std = (sq / count - m.feature_mean.cwiseAbs2()).cwiseMax(0.0).cwiseSqrt().cwiseMax(1e-8);
  return m;
}

double scorer_loss(const ScorerModel& model, const Eigen::MatrixXd& frames,
                   std::span<const std::uint8_t> labels, std::vector<double>* grad) {
  const Eigen::MatrixXd x = standardize(model, frames);
  DenseNet::Cache cache;
  const Eigen::MatrixXd logits = model.net.forward(x, grad ? &cache : nullptr);
  Eigen::MatrixXd dlogits;
  const double loss = bce(logits, labels, grad ? &dlogits : nullptr);
  if (grad) {
    grad->assign(model.net.n_params(), 0.0);
    model.net.backward(cache, dlogits, *grad);
  }
  return loss;
}

void train_epochs(ScorerModel& model, const std::vector<LabeledClip>& data,
                  const ScorerTrainConfig& cfg, Rng& rng, TrainReport* report) {
  check_data(data);
  if (data.front().features.dim() != model.input_dim())
    throw DataError("feature dimension does not match the model");
  if (cfg.batch_clips <= 0) throw std::invalid_argument("batch size must be positive");

  std::vector<Eigen::MatrixXd> xs;
  xs.reserve(data.size());
  for (const auto& c : data) xs.push_back(standardize(model, c.features.matrix));

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> velocity(model.net.n_params(), 0.0), grad(model.net.n_params());
  auto& params = model.net.params();

  long long batch_index = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    int batches = 0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += cfg.batch_clips, ++batch_index) {
      const std::size_t b1 = std::min(order.size(), b0 + static_cast<std::size_t>(cfg.batch_clips));
      Eigen::Index cols = 0;
      for (std::size_t i = b0; i < b1; ++i) cols += xs[order[i]].cols();
      Eigen::MatrixXd x(model.input_dim(), cols);
      std::vector<std::uint8_t> y;
      y.reserve(static_cast<std::size_t>(cols));
      Eigen::Index at = 0;
      for (std::size_t i = b0; i < b1; ++i) {
        const auto& xi = xs[order[i]];
        x.middleCols(at, xi.cols()) = xi;
        at += xi.cols();
        const auto& li = data[order[i]].labels.labels;
        y.insert(y.end(), li.begin(), li.end());
      }

      DenseNet::Cache cache;
      const Eigen::MatrixXd logits = model.net.forward(x, &cache);
      Eigen::MatrixXd dlogits;
      const double loss = bce(logits, y, &dlogits);
      if (!std::isfinite(loss))
        throw std::runtime_error("non-finite training loss at batch " + std::to_string(batch_index) +
                                 " (epoch " + std::to_string(epoch) + ")");
      std::fill(grad.begin(), grad.end(), 0.0);
      model.net.backward(cache, dlogits, grad);
      for (std::size_t p = 0; p < params.size(); ++p) {
        velocity[p] = cfg.momentum * velocity[p] - cfg.learning_rate * grad[p];
        params[p] += velocity[p];
      }
      epoch_loss += loss;
      ++batches;
    }
    epoch_loss /= std::max(1, batches);
    model.final_loss = epoch_loss;
    if (report) report->epoch_loss.push_back(epoch_loss);
  }
}

ScorerModel train_scorer(Task task, const std::vector<LabeledClip>& data,
                         const ScorerTrainConfig& cfg, Rng& rng, TrainReport* report) {
  ScorerModel m = init_scorer(task, data, cfg, rng);
  train_epochs(m, data, cfg, rng, report);
  return m;
}

GradCheckResult gradient_check(ScorerModel& model, const LabeledClip& batch, Rng& rng, double h,
                               int n_params) {
  std::vector<double> grad;
  scorer_loss(model, batch.features.matrix, batch.labels.labels, &grad);
  auto& params = model.net.params();
  return check_gradient(
      params, grad,
      [&] { return scorer_loss(model, batch.features.matrix, batch.labels.labels); }, n_params, h,
      rng);
}

FrameScores score_clip(const ScorerModel& model, const FrameFeatures& feats,
                       const std::string& utterance_id, int hop_samples) {
  if (feats.dim() != model.input_dim())
    throw DataError("feature dimension " + std::to_string(feats.dim()) +
                    " does not match scorer input " + std::to_string(model.input_dim()));
  FrameScores out;
  out.utterance_id = utterance_id;
  out.task = model.task;
  out.hop_samples = hop_samples;
  out.probs.resize(static_cast<std::size_t>(feats.n_frames()));
  if (feats.n_frames() == 0) return out;
  const Eigen::MatrixXd logits = model.net.forward(standardize(model, feats.matrix));
  for (int i = 0; i < feats.n_frames(); ++i) {
    const double z = logits(0, i);
    const double p = std::isfinite(z) ? sigmoid(z) : (z > 0 ? 1.0 : 0.0);
    out.probs[static_cast<std::size_t>(i)] = std::clamp(p, 1e-9, 1.0 - 1e-9);
  }
  return out;
}

void save_scorer(const std::filesystem::path& path, const ScorerModel& m) {
  binio::Writer w;
  w.magic(kMagic);
  w.u32(static_cast<std::uint32_t>(m.task));
  w.u32(static_cast<std::uint32_t>(m.net.dims().size()));
  for (int d : m.net.dims()) w.u32(static_cast<std::uint32_t>(d));
  w.f64s(m.net.params());
  w.f64s({m.feature_mean.data(), static_cast<std::size_t>(m.feature_mean.size())});
  w.f64s({m.feature_std.data(), static_cast<std::size_t>(m.feature_std.size())});
  w.f64(m.final_loss);
  w.save(path);
}

ScorerModel load_scorer(const std::filesystem::path& path) {
  binio::Reader r(path);
  r.expect_magic(kMagic);
  ScorerModel m;
  const auto task = r.u32();
  if (task > 1) throw DataError(path.string() + ": bad task id");
  m.task = static_cast<Task>(task);
  const auto n_dims = r.u32();
  if (n_dims < 2 || n_dims > 64) throw DataError(path.string() + ": bad layer count");
  std::vector<int> dims(n_dims);
  for (auto& d : dims) {
    d = static_cast<int>(r.u32());
    if (d <= 0 || d > (1 << 20)) throw DataError(path.string() + ": bad layer size");
  }
  if (dims.back() != 1) throw DataError(path.string() + ": scorer output must be scalar");
  m.net = DenseNet(dims);
  r.f64s(m.net.params());
  m.feature_mean.resize(dims.front());
  m.feature_std.resize(dims.front());
  r.f64s({m.feature_mean.data(), static_cast<std::size_t>(dims.front())});
  r.f64s({m.feature_std.data(), static_cast<std::size_t>(dims.front())});
  m.final_loss = r.f64();
  r.expect_end();
  if (!m.net.all_finite()) throw DataError(path.string() + ": non-finite parameters");
  return m;
}

}  // namespace spliceloc
