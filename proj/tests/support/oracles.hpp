#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "climact/elbo.hpp"
#include "climact/guide.hpp"
#include "climact/joint.hpp"
#include "climact/types.hpp"

namespace climact::testing {

// ---------------------------------------------------------------------
// Toy conjugate target: z ~ N(mu0, v0), x_j ~ N(z, v). Posterior and
// evidence have closed forms; used as the ELBO/gradient oracle.
class ConjugateGaussianModel final : public LogDensityModel {
 public:
  ConjugateGaussianModel(double mu0, double v0, double v,
                         std::vector<double> obs)
      : mu0_(mu0), v0_(v0), v_(v), obs_(std::move(obs)) {}

  std::size_t dim() const override { return 1; }

  double log_density(std::span<const double> z) const override {
    const double zz = z[0];
    double total = logpdf(zz, mu0_, v0_);
    for (double x : obs_) total += logpdf(x, zz, v_);
    return total;
  }

  double log_density_grad(std::span<const double> z,
                          std::span<double> grad) const override {
    const double zz = z[0];
    double g = -(zz - mu0_) / v0_;
    for (double x : obs_) g += (x - zz) / v_;
    grad[0] = g;
    return log_density(z);
  }

  double posterior_mean() const {
    const double tau = 1.0 / v0_ + static_cast<double>(obs_.size()) / v_;
    double sx = 0.0;
    for (double x : obs_) sx += x;
    return (mu0_ / v0_ + sx / v_) / tau;
  }
  double posterior_var() const {
    return 1.0 / (1.0 / v0_ + static_cast<double>(obs_.size()) / v_);
  }
  /// log p(x) = log p(z, x) - log p(z | x), evaluated at z = 0.
  double log_evidence() const {
    const double z0[1] = {0.0};
    return log_density(z0) - logpdf(0.0, posterior_mean(), posterior_var());
  }

  static double logpdf(double x, double mean, double var) {
    const double r = x - mean;
    return -0.5 * std::log(2.0 * 3.14159265358979323846 * var) -
           r * r / (2.0 * var);
  }

 private:
  double mu0_, v0_, v_;
  std::vector<double> obs_;
};

// Independent Gaussian prior with no observations: the ELBO must equal
// -KL(guide || prior).
class DiagonalGaussianModel final : public LogDensityModel {
 public:
  DiagonalGaussianModel(std::vector<double> mean, std::vector<double> var)
      : mean_(std::move(mean)), var_(std::move(var)) {}

  std::size_t dim() const override { return mean_.size(); }

  double log_density(std::span<const double> z) const override {
    double total = 0.0;
    for (std::size_t i = 0; i < mean_.size(); ++i)
      total += ConjugateGaussianModel::logpdf(z[i], mean_[i], var_[i]);
    return total;
  }

  double log_density_grad(std::span<const double> z,
                          std::span<double> grad) const override {
    for (std::size_t i = 0; i < mean_.size(); ++i)
      grad[i] = -(z[i] - mean_[i]) / var_[i];
    return log_density(z);
  }

  /// Closed-form KL(q || this) for a diagonal Gaussian guide.
  double kl_from_guide(const GuideState& guide) const {
    double kl = 0.0;
    for (std::size_t i = 0; i < mean_.size(); ++i) {
      const double vq = std::exp(2.0 * guide.log_scale[i]);
      const double dm = guide.mean[i] - mean_[i];
      kl += 0.5 * (std::log(var_[i] / vq) + (vq + dm * dm) / var_[i] - 1.0);
    }
    return kl;
  }

 private:
  std::vector<double> mean_;
  std::vector<double> var_;
};

// JointModel with the parameter block pinned to fixed values; the
// remaining coordinates are the per-user latents. log p(latents, obs |
// params), i.e. the parameter priors are subtracted off.
class FrozenParamsModel final : public LogDensityModel {
 public:
  FrozenParamsModel(const JointModel& model, const ModelParameters& params)
      : model_(&model) {
    packed_ = model.layout().pack(params);
    prior_ = model.layout().log_prior(packed_);
  }

  std::size_t dim() const override {
    return model_->dim() - model_->n_params();
  }

  double log_density(std::span<const double> z) const override {
    return model_->log_density(assemble(z)) - prior_;
  }

  double log_density_grad(std::span<const double> z,
                          std::span<double> grad) const override {
    const std::vector<double> full = assemble(z);
    std::vector<double> full_grad(full.size());
    const double val = model_->log_density_grad(full, full_grad);
    for (std::size_t i = 0; i < dim(); ++i)
      grad[i] = full_grad[model_->n_params() + i];
    return val - prior_;
  }

 private:
  std::vector<double> assemble(std::span<const double> z) const {
    std::vector<double> full = packed_;
    full.resize(model_->dim());
    for (std::size_t i = 0; i < z.size(); ++i)
      full[model_->n_params() + i] = z[i];
    return full;
  }

  const JointModel* model_;
  std::vector<double> packed_;
  double prior_ = 0.0;
};

// ---------------------------------------------------------------------
// 20-point Gauss-Hermite rule (weight e^{-t^2}); frozen constants.
inline constexpr std::array<double, 20> kGhNodes = {
    -5.387480890011233,   -4.603682449550744,  -3.944764040115625,
    -3.3478545673832163,  -2.7888060584281305, -2.2549740020892757,
    -1.7385377121165861,  -1.234076215395323,  -0.7374737285453944,
    -0.24534070830090124, 0.24534070830090124, 0.7374737285453944,
    1.234076215395323,    1.7385377121165861,  2.2549740020892757,
    2.7888060584281305,   3.3478545673832163,  3.944764040115625,
    4.603682449550744,    5.387480890011233};
inline constexpr std::array<double, 20> kGhWeights = {
    2.2293936455341447e-13, 4.3993409922731747e-10, 1.0860693707692782e-07,
    7.80255647853206e-06,   0.00022833863601635365, 0.0032437733422378567,
    0.024810520887463643,   0.1090172060200233,     0.28667550536283415,
    0.4622436696006101,     0.4622436696006101,     0.28667550536283415,
    0.1090172060200233,     0.024810520887463643,   0.0032437733422378567,
    0.00022833863601635365, 7.80255647853206e-06,   1.0860693707692782e-07,
    4.3993409922731747e-10, 2.2293936455341447e-13};

/// log evidence log p(obs | params) of one user by dense 5-dimensional
/// Gauss-Hermite quadrature over (D, S). `user_term` must return the
/// user block of the log joint, i.e. log p(obs_u | D, S, params) +
/// log N(S | mu_S(D), var_s) + log N(D); the quadrature re-weights it.
inline double quadrature_user_evidence(
    const std::function<double(const Vec4&, double)>& user_term,
    const std::function<double(const Vec4&)>& sympathy_mu, double var_s) {
  constexpr std::size_t n = kGhNodes.size();
  const double sqrt2 = std::sqrt(2.0);
  const double inv_pi_52 = std::pow(3.14159265358979323846, -2.5);
  long double total = 0.0L;
  for (std::size_t i0 = 0; i0 < n; ++i0)
    for (std::size_t i1 = 0; i1 < n; ++i1)
      for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i3 = 0; i3 < n; ++i3) {
          const Vec4 d = {sqrt2 * kGhNodes[i0], sqrt2 * kGhNodes[i1],
                          sqrt2 * kGhNodes[i2], sqrt2 * kGhNodes[i3]};
          const double wd =
              kGhWeights[i0] * kGhWeights[i1] * kGhWeights[i2] * kGhWeights[i3];
          const double mu = sympathy_mu(d);
          long double inner = 0.0L;
          for (std::size_t i4 = 0; i4 < n; ++i4) {
            const double s = mu + sqrt2 * std::sqrt(var_s) * kGhNodes[i4];
            // user_term carries the N(D) and N(S | mu, var_s) factors the
            // quadrature weight already accounts for; divide them out.
            double log_f = user_term(d, s);
            for (double dv : d)
              log_f -= ConjugateGaussianModel::logpdf(dv, 0.0, 1.0);
            log_f -= ConjugateGaussianModel::logpdf(s, mu, var_s);
            inner += kGhWeights[i4] * std::exp(static_cast<long double>(log_f));
          }
          total += wd * inner;
        }
  return static_cast<double>(std::log(total * inv_pi_52));
}

// Central finite differences of elbo_estimate over every guide
// coordinate, mean block then log-scale block, same seed as the
// analytic gradient.
struct FdCheck {
  double max_rel_err = 0.0;
  std::size_t worst_index = 0;
  bool worst_in_scale_block = false;
};

inline FdCheck fd_gradient_check(const GuideState& guide,
                                 const LogDensityModel& model,
                                 std::size_t n_samples, std::uint64_t seed,
                                 double h) {
  const ElboGradient g = elbo_gradient(guide, model, n_samples, seed);
  FdCheck out;
  auto consider = [&](double analytic, double fd, std::size_t idx, bool scale) {
    const double denom = std::max({std::abs(analytic), std::abs(fd), 1e-8});
    double rel = std::abs(analytic - fd) / denom;
    if (std::abs(analytic - fd) < 1e-7) rel = 0.0;  // below fd noise floor
    if (rel > out.max_rel_err) {
      out.max_rel_err = rel;
      out.worst_index = idx;
      out.worst_in_scale_block = scale;
    }
  };
  GuideState probe = guide;
  for (std::size_t i = 0; i < guide.dim(); ++i) {
    probe.mean[i] = guide.mean[i] + h;
    const double up = elbo_estimate(probe, model, n_samples, seed);
    probe.mean[i] = guide.mean[i] - h;
    const double dn = elbo_estimate(probe, model, n_samples, seed);
    probe.mean[i] = guide.mean[i];
    consider(g.grad_mean[i], (up - dn) / (2.0 * h), i, false);
  }
  for (std::size_t i = 0; i < guide.dim(); ++i) {
    probe.log_scale[i] = guide.log_scale[i] + h;
    const double up = elbo_estimate(probe, model, n_samples, seed);
    probe.log_scale[i] = guide.log_scale[i] - h;
    const double dn = elbo_estimate(probe, model, n_samples, seed);
    probe.log_scale[i] = guide.log_scale[i];
    consider(g.grad_log_scale[i], (up - dn) / (2.0 * h), i, true);
  }
  return out;
}

}  // namespace climact::testing
