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

#include "spliceloc/pca.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "spliceloc/audio.hpp"
#include "spliceloc/binio.hpp"

namespace spliceloc {

namespace {
constexpr char kMagic[] = "SGPCA1";
}

PcaTransform fit_pca(const Eigen::MatrixXd& frames, double energy_target, bool standardize) {
  if (frames.rows() < 2) throw DataError("PCA needs at least two frames");
  if (!(energy_target > 0.0 && energy_target <= 1.0))
    throw std::invalid_argument("energy target must lie in (0, 1]");
  const auto n = static_cast<double>(frames.rows());
  PcaTransform t;
  t.mean = frames.colwise().mean().transpose();
  Eigen::MatrixXd centered = frames.rowwise() - t.mean.transpose();
  t.scale = Eigen::VectorXd::Ones(frames.cols());
  if (standardize) {
    const Eigen::VectorXd sd = (centered.colwise().squaredNorm().transpose() / (n - 1.0)).cwiseSqrt();
    for (Eigen::Index j = 0; j < sd.size(); ++j) t.scale[j] = sd[j] > 1e-12 ? sd[j] : 1.0;
    centered = centered.array().rowwise() / t.scale.transpose().array();
  }
  const Eigen::MatrixXd cov = centered.transpose() * centered / (n - 1.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw DataError("covariance eigendecomposition failed");
  // Eigen returns ascending eigenvalues; clamp tiny negative round-off.
  const Eigen::VectorXd values = eig.eigenvalues().reverse().cwiseMax(0.0);
  const Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
  t.total_energy = values.sum();
  if (!(t.total_energy > 0.0)) throw DataError("PCA input has zero total variance");

  const auto d = static_cast<int>(values.size());
  int k = 0;
  double cum = 0.0;
  while (k < d) {
    cum += values[k++];
    if (cum / t.total_energy >= energy_target) break;
  }
  t.eigenvalues = values.head(k);
  t.basis = vectors.leftCols(k).transpose();
  t.retained_energy = cum / t.total_energy;
  return t;
}

Eigen::VectorXd pca_project(const PcaTransform& t, const Eigen::VectorXd& x) {
  if (x.size() != t.mean.size())
    throw DataError("PCA input has dimension " + std::to_string(x.size()) + ", expected " +
                    std::to_string(t.mean.size()));
  return t.basis * (x - t.mean).cwiseQuotient(t.scale);
}

Eigen::MatrixXd pca_project_rows(const PcaTransform& t, const Eigen::MatrixXd& frames) {
  if (frames.cols() != t.mean.size())
    throw DataError("PCA input has dimension " + std::to_string(frames.cols()) + ", expected " +
                    std::to_string(t.mean.size()));
  Eigen::MatrixXd centered = frames.rowwise() - t.mean.transpose();
  centered = centered.array().rowwise() / t.scale.transpose().array();
  return centered * t.basis.transpose();
}

void save_pca(const std::filesystem::path& path, const PcaTransform& t) {
  binio::Writer w;
  w.magic(kMagic);
  w.u32(static_cast<std::uint32_t>(t.input_dim()));
  w.u32(static_cast<std::uint32_t>(t.output_dim()));
  w.f64(t.retained_energy);
  w.f64(t.total_energy);
  for (int i = 0; i < t.input_dim(); ++i) w.f64(t.mean[i]);
  for (int i = 0; i < t.input_dim(); ++i) w.f64(t.scale[i]);
  for (int i = 0; i < t.output_dim(); ++i) w.f64(t.eigenvalues[i]);
  for (int r = 0; r < t.output_dim(); ++r)
    for (int c = 0; c < t.input_dim(); ++c) w.f64(t.basis(r, c));
  w.save(path);
}

PcaTransform load_pca(const std::filesystem::path& path) {
  binio::Reader r(path);
  r.expect_magic(kMagic);
  const auto d = static_cast<int>(r.u32());
  const auto k = static_cast<int>(r.u32());
  if (d <= 0 || k <= 0 || k > d || d > (1 << 16)) throw DataError(path.string() + ": bad PCA dimensions");
  PcaTransform t;
  t.retained_energy = r.f64();
  t.total_energy = r.f64();
  t.mean.resize(d);
  t.scale.resize(d);
  t.eigenvalues.resize(k);
  t.basis.resize(k, d);
  for (int i = 0; i < d; ++i) t.mean[i] = r.f64();
  for (int i = 0; i < d; ++i) {
    t.scale[i] = r.f64();
    if (!(t.scale[i] > 0.0)) throw DataError(path.string() + ": non-positive PCA scale");
  }
  for (int i = 0; i < k; ++i) t.eigenvalues[i] = r.f64();
  for (int row = 0; row < k; ++row)
    for (int c = 0; c < d; ++c) t.basis(row, c) = r.f64();
  r.expect_end();
  return t;
}

}  // namespace spliceloc
