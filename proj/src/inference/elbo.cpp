#include "climact/elbo.hpp"

#include <cmath>
#include <stdexcept>

namespace climact {

namespace {

void check_dims(const GuideState& guide, const LogDensityModel& model) {
  if (guide.dim() != model.dim() || guide.log_scale.size() != guide.dim())
    throw std::invalid_argument("elbo: guide dimension " +
                                std::to_string(guide.dim()) +
                                " != model dimension " +
                                std::to_string(model.dim()));
}

}  // namespace

double elbo_estimate(const GuideState& guide, const LogDensityModel& model,
                     std::size_t n_samples, std::uint64_t seed) {
  check_dims(guide, model);
  if (n_samples < 1)
    throw std::invalid_argument("elbo_estimate: n_samples must be >= 1");
  const std::size_t dim = model.dim();
  Rng rng(seed);
  std::vector<double> eps(dim), z(dim);
  double acc = 0.0;
  for (std::size_t j = 0; j < n_samples; ++j) {
    for (double& e : eps) e = rng.normal();
    guide.transform(eps, z);
    acc += model.log_density(z) - guide.log_q_from_eps(eps);
  }
  return acc / static_cast<double>(n_samples);
}

ElboGradient elbo_gradient(const GuideState& guide,
                           const LogDensityModel& model,
                           std::size_t n_samples, std::uint64_t seed) {
  check_dims(guide, model);
  if (n_samples < 1)
    throw std::invalid_argument("elbo_gradient: n_samples must be >= 1");
  const std::size_t dim = model.dim();
  Rng rng(seed);
  std::vector<double> eps(dim), z(dim), gz(dim);
  ElboGradient out;
  out.grad_mean.assign(dim, 0.0);
  out.grad_log_scale.assign(dim, 0.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < n_samples; ++j) {
    for (double& e : eps) e = rng.normal();
    guide.transform(eps, z);
    const double logp = model.log_density_grad(z, gz);
    acc += logp - guide.log_q_from_eps(eps);
    for (std::size_t i = 0; i < dim; ++i) {
      out.grad_mean[i] += gz[i];
      // d z_i / d log_scale_i = exp(log_scale_i) * eps_i; the entropy
      // path contributes +1 per coordinate.
      out.grad_log_scale[i] += gz[i] * std::exp(guide.log_scale[i]) * eps[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(n_samples);
  out.elbo = acc * inv;
  for (std::size_t i = 0; i < dim; ++i) {
    out.grad_mean[i] *= inv;
    out.grad_log_scale[i] = out.grad_log_scale[i] * inv + 1.0;
  }
  return out;
}

std::optional<std::size_t> first_nonfinite(const ElboGradient& g) {
  if (!std::isfinite(g.elbo)) return 0;
  for (std::size_t i = 0; i < g.grad_mean.size(); ++i)
    if (!std::isfinite(g.grad_mean[i])) return i;
  for (std::size_t i = 0; i < g.grad_log_scale.size(); ++i)
    if (!std::isfinite(g.grad_log_scale[i]))
      return g.grad_mean.size() + i;
  return std::nullopt;
}

}  // namespace climact
