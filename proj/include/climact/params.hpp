#pragma once

#include <span>
#include <string>
#include <vector>

#include "climact/types.hpp"

namespace climact {

/// One scalar coordinate of the flattened parameter vector.
struct ParamCoord {
  std::string name;
  double prior_mean = 0.0;
  double prior_var = 1.0;
};

/// Flat indexing of the model parameters for a given structure.
///
/// Coordinates live in unconstrained space: every coefficient maps to
/// itself, theta_e maps to log(theta_e). Coordinates of removed groups
/// are absent entirely (structural deletion, not zeroing).
class ParamLayout {
 public:
  explicit ParamLayout(const ModelStructure& st = {},
                       const Hyperparameters& hyper = {});

  std::size_t size() const { return coords_.size(); }
  const std::vector<ParamCoord>& coords() const { return coords_; }
  const ModelStructure& structure() const { return st_; }

  /// Coordinate vector -> parameters. Absent coefficients are zero
  /// (their terms vanish); theta_e is exp(coordinate).
  ModelParameters unpack(std::span<const double> z) const;

  /// Parameters -> coordinate vector. Requires theta_e > 0 when the
  /// engagement group is present.
  void pack(const ModelParameters& params, std::span<double> z) const;
  std::vector<double> pack(const ModelParameters& params) const;

  /// Sum of Gaussian log-priors over the coordinates.
  double log_prior(std::span<const double> z) const;
  /// Adds the prior gradient into grad (same length as z).
  void add_log_prior_grad(std::span<const double> z,
                          std::span<double> grad) const;

  // Indices into the coordinate vector, -1 when the coordinate is
  // absent under the structure.
  int beta_e0 = -1, beta_e1 = -1, log_theta_e = -1;
  int beta_pl0 = -1, beta_pl1 = -1, beta_pl2 = -1, beta_pl3 = -1;
  int beta_s1 = -1;  // first of 4
  int beta_s2 = -1;
  int beta_s3 = -1;  // first of 3
  int beta_ps0 = -1;
  int beta_ps1 = -1;  // first of 4
  int beta_ps2 = -1, beta_ps3 = -1, beta_ps4 = -1;
  int beta_i0 = -1;
  int beta_i1 = -1;  // first of 4
  int beta_i2 = -1;
  int beta_a0 = -1, beta_a1 = -1, beta_a2 = -1;
  int beta_a3 = -1;  // first of 3
  int beta_a4 = -1;  // first of 3
  int beta_a5 = -1;

 private:
  ModelStructure st_;
  std::vector<ParamCoord> coords_;
};

}  // namespace climact
