#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "climact/guide.hpp"
#include "climact/joint.hpp"

namespace climact {

/// Reparameterized gradient of the ELBO estimate, paired with the
/// estimate itself. grad_mean[i] and grad_log_scale[i] are exact
/// pathwise derivatives of the Monte-Carlo objective under common
/// random numbers, so central finite differences of elbo_estimate with
/// the same seed reproduce them.
struct ElboGradient {
  double elbo = 0.0;
  std::vector<double> grad_mean;
  std::vector<double> grad_log_scale;
};

/// Monte-Carlo ELBO: mean over n_samples of log p(z) - log q(z) with
/// z = mean + exp(log_scale) * eps. A non-finite value signals a
/// diverged guide; callers restart.
double elbo_estimate(const GuideState& guide, const LogDensityModel& model,
                     std::size_t n_samples, std::uint64_t seed);

ElboGradient elbo_gradient(const GuideState& guide,
                           const LogDensityModel& model,
                           std::size_t n_samples, std::uint64_t seed);

/// Index of the first non-finite entry across (elbo, grad_mean,
/// grad_log_scale), or nullopt if everything is finite. Indices >= dim
/// refer to the log_scale block.
std::optional<std::size_t> first_nonfinite(const ElboGradient& g);

}  // namespace climact
