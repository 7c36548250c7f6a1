#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "climact/rng.hpp"

namespace climact {

/// Mean-field Gaussian variational distribution: one (mean, log_scale)
/// pair per latent coordinate (model parameters and per-user latents
/// alike).
struct GuideState {
  std::vector<double> mean;
  std::vector<double> log_scale;

  std::size_t dim() const { return mean.size(); }

  /// Fresh guide: means drawn from Normal(0, 0.1), scales sqrt(0.1).
  static GuideState init(std::size_t dim, std::uint64_t seed);

  /// z = mean + exp(log_scale) * eps, elementwise.
  void transform(std::span<const double> eps, std::span<double> z) const;

  /// log q(z) for z produced by transform() with these eps.
  double log_q_from_eps(std::span<const double> eps) const;
};

}  // namespace climact
