#include "climact/guide.hpp"

#include <cmath>

#include "climact/nodes.hpp"

namespace climact {

GuideState GuideState::init(std::size_t dim, std::uint64_t seed) {
  GuideState g;
  g.mean.resize(dim);
  g.log_scale.assign(dim, 0.5 * std::log(0.1));
  Rng rng(seed);
  const double sd = std::sqrt(0.1);
  for (double& m : g.mean) m = rng.normal(0.0, sd);
  return g;
}

void GuideState::transform(std::span<const double> eps,
                           std::span<double> z) const {
  for (std::size_t i = 0; i < mean.size(); ++i)
    z[i] = mean[i] + std::exp(log_scale[i]) * eps[i];
}

double GuideState::log_q_from_eps(std::span<const double> eps) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i)
    sum += -log_scale[i] - 0.5 * kLog2Pi - 0.5 * eps[i] * eps[i];
  return sum;
}

}  // namespace climact
