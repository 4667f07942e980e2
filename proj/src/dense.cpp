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

#include "spliceloc/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spliceloc {

DenseNet::DenseNet(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.size() < 2) throw std::invalid_argument("network needs at least one layer");
  std::size_t total = 0;
  for (int l = 0; l < n_layers(); ++l) {
    if (dims_[l] <= 0 || dims_[l + 1] <= 0) throw std::invalid_argument("layer sizes must be positive");
    offsets_.push_back(total);
    total += static_cast<std::size_t>(dims_[l + 1]) * (dims_[l] + 1);
  }
  params_.assign(total, 0.0);
}

Eigen::Map<const Eigen::MatrixXd> DenseNet::weight(int l) const {
  return {params_.data() + weight_offset(l), dims_[l + 1], dims_[l]};
}
Eigen::Map<const Eigen::VectorXd> DenseNet::bias(int l) const {
  return {params_.data() + bias_offset(l), dims_[l + 1]};
}
Eigen::Map<Eigen::MatrixXd> DenseNet::weight(int l) {
  return {params_.data() + weight_offset(l), dims_[l + 1], dims_[l]};
}
Eigen::Map<Eigen::VectorXd> DenseNet::bias(int l) {
  return {params_.data() + bias_offset(l), dims_[l + 1]};
}

void DenseNet::init(Rng& rng) {
  std::fill(params_.begin(), params_.end(), 0.0);
  for (int l = 0; l < n_layers(); ++l) {
    const double limit = std::sqrt(6.0 / (dims_[l] + dims_[l + 1]));
    auto w = weight(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = uniform(rng, -limit, limit);
  }
}

Eigen::MatrixXd DenseNet::forward(const Eigen::MatrixXd& input, Cache* cache) const {
  if (input.rows() != input_dim())
    throw std::invalid_argument("input has " + std::to_string(input.rows()) + " rows, expected " +
                                std::to_string(input_dim()));
  if (cache) {
    cache->acts.resize(dims_.size());
    cache->acts[0] = input;
  }
  Eigen::MatrixXd a = input;
  for (int l = 0; l < n_layers(); ++l) {
    Eigen::MatrixXd z = weight(l) * a;
    z.colwise() += bias(l);
    if (l + 1 < n_layers()) z = z.array().tanh();
    a = std::move(z);
    if (cache) cache->acts[l + 1] = a;
  }
  return a;
}

Eigen::MatrixXd DenseNet::backward(const Cache& cache, const Eigen::MatrixXd& grad_output,
                                   std::span<double> grad) const {
  if (grad.size() != params_.size()) throw std::invalid_argument("gradient buffer size mismatch");
  Eigen::MatrixXd delta = grad_output;  // dL/dz for the current layer
  for (int l = n_layers() - 1; l >= 0; --l) {
    const Eigen::MatrixXd& a_in = cache.acts[l];
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + weight_offset(l), dims_[l + 1], dims_[l]);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + bias_offset(l), dims_[l + 1]);
    gw.noalias() += delta * a_in.transpose();
    gb += delta.rowwise().sum();
    Eigen::MatrixXd da = weight(l).transpose() * delta;
    if (l > 0) {
      // tanh'(z) = 1 - a^2 where a is this layer's input activation.
      da.array() *= 1.0 - a_in.array().square();
    }
    delta = std::move(da);
  }
  return delta;
}

bool DenseNet::all_finite() const {
  return std::all_of(params_.begin(), params_.end(), [](double v) { return std::isfinite(v); });
}

GradCheckResult check_gradient(std::span<double> params, std::span<const double> analytic,
                               const std::function<double()>& loss, int n_samples, double h,
                               Rng& rng, double denom_floor) {
  if (params.size() != analytic.size()) throw std::invalid_argument("gradient size mismatch");
  std::vector<std::size_t> idx(params.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n_samples < static_cast<int>(idx.size())) {
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(std::max(0, n_samples)));
  }
  GradCheckResult r;
  for (std::size_t i : idx) {
    const double saved = params[i];
    params[i] = saved + h;
    const double up = loss();
    params[i] = saved - h;
    const double down = loss();
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double diff = std::abs(numeric - analytic[i]);
    const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), denom_floor});
    r.max_abs_error = std::max(r.max_abs_error, diff);
    r.max_relative_error = std::max(r.max_relative_error, diff / denom);
    ++r.n_checked;
  }
  return r;
}

}  // namespace spliceloc
