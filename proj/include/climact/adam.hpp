#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace climact {

/// Adam in ascent form (parameters move along +gradient).
/// beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
class AdamState {
 public:
  explicit AdamState(std::size_t dim) : m_(dim, 0.0), v_(dim, 0.0) {}

  /// One bias-corrected update of params in place; deterministic.
  void step(std::span<double> params, std::span<const double> grad,
            double learning_rate);

  std::size_t step_count() const { return t_; }

 private:
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

}  // namespace climact
