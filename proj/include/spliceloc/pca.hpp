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

#ifndef SPLICELOC_PCA_HPP_
#define SPLICELOC_PCA_HPP_

#include <filesystem>

#include <Eigen/Dense>

#include "spliceloc/audio.hpp"

namespace spliceloc {

struct PcaTransform {
  Eigen::VectorXd mean;         // d
  Eigen::VectorXd scale;        // d, per-dimension divisor applied after centering
  Eigen::MatrixXd basis;        // k x d, orthonormal rows
  Eigen::VectorXd eigenvalues;  // k, descending
  double retained_energy = 0.0;
  double total_energy = 0.0;

  int input_dim() const { return static_cast<int>(mean.size()); }
  int output_dim() const { return static_cast<int>(basis.rows()); }
};

/// Sample-covariance PCA keeping the smallest k whose cumulative eigenvalue
/// fraction reaches `energy_target`. `frames` is n x d. With `standardize`
/// every dimension is first divided by its standard deviation (correlation
/// PCA); otherwise scale is all ones. Throws DataError when
/// n < 2 or the total variance is zero.
PcaTransform fit_pca(const Eigen::MatrixXd& frames, double energy_target = 0.98,
                     bool standardize = false);

/// basis * ((x - mean) / scale).
Eigen::VectorXd pca_project(const PcaTransform& t, const Eigen::VectorXd& x);
/// Row-wise projection of an n x d matrix to n x k.
Eigen::MatrixXd pca_project_rows(const PcaTransform& t, const Eigen::MatrixXd& frames);

/// "SGPCA1", u32 d, u32 k, f64 retained, f64 total, f64 mean[d],
/// f64 scale[d], f64 eigenvalues[k], f64 basis[k*d] row-major.
void save_pca(const std::filesystem::path& path, const PcaTransform& t);
PcaTransform load_pca(const std::filesystem::path& path);

}  // namespace spliceloc

#endif  // SPLICELOC_PCA_HPP_
