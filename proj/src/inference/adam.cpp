#include "climact/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace climact {

void AdamState::step(std::span<double> params, std::span<const double> grad,
                     double learning_rate) {
  if (params.size() != m_.size() || grad.size() != m_.size())
    throw std::invalid_argument("AdamState::step: dimension mismatch");
  constexpr double beta1 = 0.9;
  constexpr double beta2 = 0.999;
  constexpr double eps = 1e-8;
  ++t_;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < m_.size(); ++i) {
    m_[i] = beta1 * m_[i] + (1.0 - beta1) * grad[i];
    v_[i] = beta2 * v_[i] + (1.0 - beta2) * grad[i] * grad[i];
    const double mhat = m_[i] / c1;
    const double vhat = v_[i] / c2;
    params[i] += learning_rate * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace climact
