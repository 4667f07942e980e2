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

// Fully connected stack (tanh hidden layers, linear output) with a flat
// parameter vector, hand-written backprop and a finite-difference checker.

#ifndef SPLICELOC_DENSE_HPP_
#define SPLICELOC_DENSE_HPP_

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spliceloc/random.hpp"

namespace spliceloc {

class DenseNet {
 public:
  /// Activations of one forward pass; acts[0] is the input, acts[l + 1] the
  /// output of layer l. Columns are samples.
  struct Cache {
    std::vector<Eigen::MatrixXd> acts;
  };

  DenseNet() = default;
  explicit DenseNet(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  int n_layers() const { return static_cast<int>(dims_.size()) - 1; }
  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  std::size_t n_params() const { return params_.size(); }

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
  Eigen::Map<Eigen::MatrixXd> weight(int layer);
  Eigen::Map<Eigen::VectorXd> bias(int layer);

  /// Glorot-uniform weights, zero biases.
  void init(Rng& rng);

  /// `input` is input_dim x batch. Fills `cache` when non-null.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Cache* cache = nullptr) const;

  /// Accumulates dLoss/dparams into `grad` (size n_params()) given
  /// dLoss/doutput, and returns dLoss/dinput.
  Eigen::MatrixXd backward(const Cache& cache, const Eigen::MatrixXd& grad_output,
                           std::span<double> grad) const;

  bool all_finite() const;

 private:
  std::size_t weight_offset(int layer) const { return offsets_[layer]; }
  std::size_t bias_offset(int layer) const {
    return offsets_[layer] + static_cast<std::size_t>(dims_[layer + 1]) * dims_[layer];
  }

  std::vector<int> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_abs_error = 0.0;
  int n_checked = 0;
};

/// Central differences (f(p+h) - f(p-h)) / 2h on `n_samples` randomly chosen
/// coordinates of `params` (all of them when n_samples >= size), compared to
/// `analytic`. `loss` must read the current contents of `params`. Relative
/// error is |a - n| / max(|a|, |n|, denom_floor).
GradCheckResult check_gradient(std::span<double> params, std::span<const double> analytic,
                               const std::function<double()>& loss, int n_samples, double h,
                               Rng& rng, double denom_floor = 1e-8);

}  // namespace spliceloc

#endif  // SPLICELOC_DENSE_HPP_
