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

#include "spliceloc/vae.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "spliceloc/audio.hpp"
#include "spliceloc/binio.hpp"

namespace spliceloc {

namespace {

constexpr char kMagic[] = "SGVAE1";
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

Eigen::MatrixXd standard_normal(int rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = g(rng);
  return m;
}

// Gaussian log-density per column, summed over rows.
Eigen::RowVectorXd gaussian_log_density(const Eigen::MatrixXd& x, const Eigen::MatrixXd& mu,
                                        const Eigen::MatrixXd& log_var) {
  const Eigen::ArrayXXd diff = (x - mu).array();
  return (-0.5 * (kLog2Pi + log_var.array() + diff.square() * (-log_var.array()).exp()))
      .colwise()
      .sum()
      .matrix();
}

struct Adam {
  std::vector<double> m, v;
  long long t = 0;
  explicit Adam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
  void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    ++t;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = b1 * m[i] + (1 - b1) * grad[i];
      v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
      params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
    }
  }
};

}  // namespace

int effective_latent_dim(int requested, int input_dim) {
  return std::max(1, std::min(requested, input_dim - 1));
}

VaeModel init_vae(int input_dim, const VaeConfig& cfg, Rng& rng) {
  if (input_dim < 1) throw std::invalid_argument("VAE input dimension must be positive");
  VaeModel m;
  m.input_dim = input_dim;
  m.latent_dim = effective_latent_dim(cfg.latent_dim, input_dim);
  std::vector<int> enc{input_dim};
  enc.insert(enc.end(), cfg.hidden.begin(), cfg.hidden.end());
  enc.push_back(2 * m.latent_dim);
  std::vector<int> dec{m.latent_dim};
  dec.insert(dec.end(), cfg.hidden.rbegin(), cfg.hidden.rend());
  dec.push_back(2 * input_dim);
  m.encoder = DenseNet(enc);
  m.decoder = DenseNet(dec);
  m.encoder.init(rng);
  m.decoder.init(rng);
  return m;
}

ElboTerms vae_objective(const VaeModel& model, const Eigen::MatrixXd& frames,
                        const Eigen::MatrixXd& noise, std::vector<double>* grad_encoder,
                        std::vector<double>* grad_decoder) {
  const int k = model.input_dim, L = model.latent_dim;
  const Eigen::Index n = frames.rows();
  if (frames.cols() != k) throw DataError("VAE input dimension mismatch");
  if (noise.rows() != L || noise.cols() != n) throw std::invalid_argument("noise shape mismatch");
  const bool want_grad = grad_encoder != nullptr || grad_decoder != nullptr;

  const Eigen::MatrixXd x = frames.transpose();
  DenseNet::Cache enc_cache, dec_cache;
  const Eigen::MatrixXd enc_out = model.encoder.forward(x, want_grad ? &enc_cache : nullptr);
  const Eigen::MatrixXd mu = enc_out.topRows(L), log_var = enc_out.bottomRows(L);
  const Eigen::MatrixXd sd = (0.5 * log_var.array()).exp().matrix();
  const Eigen::MatrixXd z = mu + sd.cwiseProduct(noise);
  const Eigen::MatrixXd dec_out = model.decoder.forward(z, want_grad ? &dec_cache : nullptr);
  const Eigen::MatrixXd mu_x = dec_out.topRows(k), log_var_x = dec_out.bottomRows(k);

  const Eigen::RowVectorXd rec = gaussian_log_density(x, mu_x, log_var_x);
  const Eigen::RowVectorXd kl =
      (0.5 * (log_var.array().exp() + mu.array().square() - 1.0 - log_var.array())).colwise().sum().matrix();

  const double dn = static_cast<double>(n);
  ElboTerms t;
  t.reconstruction = rec.sum() / dn;
  t.kl = kl.sum() / dn;
  t.elbo = t.reconstruction - t.kl;
  if (!want_grad) return t;

  const Eigen::ArrayXXd diff = (x - mu_x).array();
  const Eigen::ArrayXXd inv_var = (-log_var_x.array()).exp();
  Eigen::MatrixXd d_dec(2 * k, n);
  d_dec.topRows(k) = (-diff * inv_var / dn).matrix();
  d_dec.bottomRows(k) = ((0.5 - 0.5 * diff.square() * inv_var) / dn).matrix();

  std::vector<double> gd(model.decoder.n_params(), 0.0);
  const Eigen::MatrixXd dz = model.decoder.backward(dec_cache, d_dec, gd);

  Eigen::MatrixXd d_enc(2 * L, n);
  d_enc.topRows(L) = dz + mu / dn;
  d_enc.bottomRows(L) = (dz.array() * noise.array() * 0.5 * sd.array() +
                         0.5 * (log_var.array().exp() - 1.0) / dn)
                            .matrix();
  std::vector<double> ge(model.encoder.n_params(), 0.0);
  model.encoder.backward(enc_cache, d_enc, ge);
  if (grad_encoder) *grad_encoder = std::move(ge);
  if (grad_decoder) *grad_decoder = std::move(gd);
  return t;
}

void train_vae_epochs(VaeModel& model, const Eigen::MatrixXd& frames, const VaeConfig& cfg,
                      Rng& rng, VaeTrainReport* report) {
  const Eigen::Index n = frames.rows();
  if (n < 1) throw DataError("VAE training set is empty");
  if (frames.cols() != model.input_dim) throw DataError("VAE input dimension mismatch");
  if (cfg.batch_size <= 0) throw std::invalid_argument("batch size must be positive");

  Eigen::MatrixXd frozen;
  if (cfg.freeze_noise) frozen = standard_normal(model.latent_dim, n, rng);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Adam enc_opt(model.encoder.n_params()), dec_opt(model.decoder.n_params());
  std::vector<double> ge, gd;
  long long batch_index = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double elbo_sum = 0.0;
    for (std::size_t b0 = 0; b0 < order.size(); b0 += static_cast<std::size_t>(cfg.batch_size), ++batch_index) {
      const std::size_t b1 = std::min(order.size(), b0 + static_cast<std::size_t>(cfg.batch_size));
      const auto bn = static_cast<Eigen::Index>(b1 - b0);
      Eigen::MatrixXd xb(bn, model.input_dim), eb(model.latent_dim, bn);
      for (Eigen::Index i = 0; i < bn; ++i) xb.row(i) = frames.row(order[b0 + static_cast<std::size_t>(i)]);
      if (cfg.freeze_noise) {
        for (Eigen::Index i = 0; i < bn; ++i) eb.col(i) = frozen.col(order[b0 + static_cast<std::size_t>(i)]);
      } else {
        eb = standard_normal(model.latent_dim, bn, rng);
      }
      const ElboTerms t = vae_objective(model, xb, eb, &ge, &gd);
      if (!std::isfinite(t.elbo))
        throw std::runtime_error("non-finite ELBO at batch " + std::to_string(batch_index) +
                                 " (epoch " + std::to_string(epoch) + ")");
      enc_opt.step(model.encoder.params(), ge, cfg.learning_rate);
      dec_opt.step(model.decoder.params(), gd, cfg.learning_rate);
      elbo_sum += t.elbo * static_cast<double>(bn);
    }
    model.final_elbo = elbo_sum / static_cast<double>(n);
    if (report) report->epoch_elbo.push_back(model.final_elbo);
  }
}

VaeModel train_vae(const Eigen::MatrixXd& frames, const VaeConfig& cfg, Rng& rng,
                   VaeTrainReport* report) {
  VaeModel m = init_vae(static_cast<int>(frames.cols()), cfg, rng);
  train_vae_epochs(m, frames, cfg, rng, report);
  return m;
}

GradCheckResult vae_gradient_check(VaeModel& model, const Eigen::MatrixXd& frames, Rng& rng,
                                   double h, int n_params) {
  const Eigen::MatrixXd noise = standard_normal(model.latent_dim, frames.rows(), rng);
  std::vector<double> ge, gd;
  vae_objective(model, frames, noise, &ge, &gd);
  // check_gradient expects d(loss)/dparams; the objective's loss is -ELBO.
  auto loss = [&] { return -vae_objective(model, frames, noise).elbo; };
  const GradCheckResult a = check_gradient(model.encoder.params(), ge, loss, n_params, h, rng);
  const GradCheckResult b = check_gradient(model.decoder.params(), gd, loss, n_params, h, rng);
  return {std::max(a.max_relative_error, b.max_relative_error),
          std::max(a.max_abs_error, b.max_abs_error), a.n_checked + b.n_checked};
}

double mean_reconstruction_variance(const VaeModel& model, const Eigen::MatrixXd& frames) {
  const Eigen::MatrixXd enc = model.encoder.forward(frames.transpose());
  const Eigen::MatrixXd dec = model.decoder.forward(enc.topRows(model.latent_dim));
  return dec.bottomRows(model.input_dim).array().exp().mean();
}

std::vector<double> frame_log_likelihood(const VaeModel& model, const Eigen::MatrixXd& frames,
                                         int mc_samples, std::uint64_t seed) {
  if (mc_samples < 1) throw std::invalid_argument("mc_samples must be at least 1");
  if (frames.cols() != model.input_dim) throw DataError("VAE input dimension mismatch");
  const Eigen::Index n = frames.rows();
  const int L = model.latent_dim, k = model.input_dim;
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 0) return out;

  const Eigen::MatrixXd x = frames.transpose();
  const Eigen::MatrixXd enc = model.encoder.forward(x);
  Eigen::MatrixXd z(L, n * mc_samples), xr(k, n * mc_samples);
  std::vector<double> row(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) row[static_cast<std::size_t>(j)] = x(j, i);
    Rng rng(hash_values(row, seed));
    const Eigen::MatrixXd eps = standard_normal(L, mc_samples, rng);
    const Eigen::VectorXd mu = enc.col(i).head(L);
    const Eigen::VectorXd sd = (0.5 * enc.col(i).tail(L).array()).exp().matrix();
    for (int s = 0; s < mc_samples; ++s) {
      z.col(i * mc_samples + s) = mu + sd.cwiseProduct(eps.col(s));
      xr.col(i * mc_samples + s) = x.col(i);
    }
  }
  const Eigen::MatrixXd dec = model.decoder.forward(z);
  const Eigen::RowVectorXd lp = gaussian_log_density(xr, dec.topRows(k), dec.bottomRows(k));
  for (Eigen::Index i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = lp.segment(i * mc_samples, mc_samples).mean();
  return out;
}

double reconstruction_probability(const VaeModel& model, const Eigen::MatrixXd& frames,
                                  int mc_samples, std::uint64_t seed) {
  const auto lp = frame_log_likelihood(model, frames, mc_samples, seed);
  if (lp.empty()) throw DataError("cannot score an utterance with no frames");
  return -std::accumulate(lp.begin(), lp.end(), 0.0) / static_cast<double>(lp.size());
}

int rescore_fake_count(std::size_t n, double fake_fraction) {
  // The small epsilon keeps products such as 0.45 * 10 = 4.5 on the half-up side.
  return static_cast<int>(std::floor(fake_fraction * static_cast<double>(n) + 0.5 + 1e-9));
}

std::map<std::string, Label> rescore(std::vector<DeviationScore> pool, double fake_fraction) {
  std::sort(pool.begin(), pool.end(), [](const DeviationScore& a, const DeviationScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.utterance_id < b.utterance_id;
  });
  const int n_fake = rescore_fake_count(pool.size(), fake_fraction);
  std::map<std::string, Label> out;
  for (std::size_t i = 0; i < pool.size(); ++i)
    out[pool[i].utterance_id] = static_cast<int>(i) < n_fake ? Label::kFake : Label::kGenuine;
  return out;
}

void save_vae(const std::filesystem::path& path, const VaeModel& m) {
  binio::Writer w;
  w.magic(kMagic);
  w.u32(static_cast<std::uint32_t>(m.input_dim));
  w.u32(static_cast<std::uint32_t>(m.latent_dim));
  const auto& dims = m.encoder.dims();
  w.u32(static_cast<std::uint32_t>(dims.size() - 2));
  for (std::size_t i = 1; i + 1 < dims.size(); ++i) w.u32(static_cast<std::uint32_t>(dims[i]));
  w.f64s(m.encoder.params());
  w.f64s(m.decoder.params());
  w.f64(m.final_elbo);
  w.save(path);
}

VaeModel load_vae(const std::filesystem::path& path) {
  binio::Reader r(path);
  r.expect_magic(kMagic);
  VaeConfig cfg;
  const auto input_dim = static_cast<int>(r.u32());
  cfg.latent_dim = static_cast<int>(r.u32());
  const auto n_hidden = r.u32();
  if (input_dim <= 0 || cfg.latent_dim <= 0 || n_hidden > 64)
    throw DataError(path.string() + ": bad VAE header");
  cfg.hidden.resize(n_hidden);
  for (auto& h : cfg.hidden) {
    h = static_cast<int>(r.u32());
    if (h <= 0 || h > (1 << 20)) throw DataError(path.string() + ": bad hidden size");
  }
  Rng unused(0);
  VaeModel m = init_vae(input_dim, cfg, unused);
  if (m.latent_dim != cfg.latent_dim) throw DataError(path.string() + ": latent size exceeds input");
  r.f64s(m.encoder.params());
  r.f64s(m.decoder.params());
  m.final_elbo = r.f64();
  r.expect_end();
  if (!m.encoder.all_finite() || !m.decoder.all_finite())
    throw DataError(path.string() + ": non-finite parameters");
  return m;
}

}  // namespace spliceloc
