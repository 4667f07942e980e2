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

// Gaussian VAE over PCA-projected genuine frames, used as an outlier scorer.
//
// Encoder k -> 128 -> 64 -> 32 -> (mu, log var) of the latent, decoder
// latent -> 32 -> 64 -> 128 -> (mu_x, log var_x). The deviation score of an
// utterance is minus the mean over frames of the Monte Carlo estimate of
// E_q(z|x)[log N(x | mu_x(z), var_x(z))].

#ifndef SPLICELOC_VAE_HPP_
#define SPLICELOC_VAE_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "spliceloc/dense.hpp"
#include "spliceloc/labels.hpp"

namespace spliceloc {

struct VaeConfig {
  int latent_dim = 16;
  std::vector<int> hidden = {128, 64, 32};
  double learning_rate = 1e-3;
  int epochs = 50;
  int batch_size = 128;
  /// Reuse one noise draw per training frame across epochs, which makes the
  /// objective deterministic (used for monotonicity checks).
  bool freeze_noise = false;
  bool shuffle = true;
  friend bool operator==(const VaeConfig&, const VaeConfig&) = default;
};

struct VaeModel {
  int input_dim = 0;
  int latent_dim = 0;
  DenseNet encoder;  // -> 2 * latent_dim
  DenseNet decoder;  // -> 2 * input_dim
  double final_elbo = 0.0;
};

struct VaeTrainReport {
  std::vector<double> epoch_elbo;  // mean per-frame ELBO over the epoch
};

/// Latent size actually used for input dimension k: min(requested, k - 1),
/// at least 1.
int effective_latent_dim(int requested, int input_dim);

VaeModel init_vae(int input_dim, const VaeConfig& cfg, Rng& rng);

/// Adam on the negative ELBO with reparameterized sampling. `frames` is n x k.
/// Throws std::runtime_error on a non-finite ELBO.
VaeModel train_vae(const Eigen::MatrixXd& frames, const VaeConfig& cfg, Rng& rng,
                   VaeTrainReport* report = nullptr);
void train_vae_epochs(VaeModel& model, const Eigen::MatrixXd& frames, const VaeConfig& cfg,
                      Rng& rng, VaeTrainReport* report = nullptr);

struct ElboTerms {
  double elbo = 0.0;            // mean over frames
  double reconstruction = 0.0;  // mean log-likelihood term
  double kl = 0.0;              // mean KL term
};

/// ELBO of `frames` (n x k) for fixed standard-normal noise `noise`
/// (latent x n). When the gradient pointers are set they receive
/// d(-ELBO)/dparams for encoder and decoder.
ElboTerms vae_objective(const VaeModel& model, const Eigen::MatrixXd& frames,
                        const Eigen::MatrixXd& noise, std::vector<double>* grad_encoder = nullptr,
                        std::vector<double>* grad_decoder = nullptr);

/// Finite-difference check of vae_objective's gradient with frozen noise,
/// over `n_params` random parameters of each network.
GradCheckResult vae_gradient_check(VaeModel& model, const Eigen::MatrixXd& frames, Rng& rng,
                                   double h = 1e-5, int n_params = 200);

/// Mean decoder variance exp(log var_x) over frames and dims, at the latent
/// posterior means.
double mean_reconstruction_variance(const VaeModel& model, const Eigen::MatrixXd& frames);

/// Per-frame MC estimate of the reconstruction log-likelihood. Frame noise is
/// seeded from (seed, frame contents), so the value of a frame does not
/// depend on its position.
std::vector<double> frame_log_likelihood(const VaeModel& model, const Eigen::MatrixXd& frames,
                                         int mc_samples = 16, std::uint64_t seed = 0);

/// Utterance deviation: -mean(frame_log_likelihood). Higher = more anomalous.
double reconstruction_probability(const VaeModel& model, const Eigen::MatrixXd& frames,
                                  int mc_samples = 16, std::uint64_t seed = 0);

struct DeviationScore {
  std::string utterance_id;
  double score = 0.0;
};

/// Sorts by score descending (ties: smaller utterance_id first) and marks
/// the first floor(fake_fraction * n + 0.5) fake, the rest genuine.
std::map<std::string, Label> rescore(std::vector<DeviationScore> pool, double fake_fraction = 0.45);

/// round-half-up of fraction * n.
int rescore_fake_count(std::size_t n, double fake_fraction);

/// "SGVAE1", u32 input_dim, u32 latent_dim, u32 n_hidden, u32 hidden...,
/// f64 encoder params, f64 decoder params, f64 final_elbo.
void save_vae(const std::filesystem::path& path, const VaeModel& model);
VaeModel load_vae(const std::filesystem::path& path);

}  // namespace spliceloc

#endif  // SPLICELOC_VAE_HPP_
