#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "climact/params.hpp"
#include "climact/types.hpp"

namespace climact {

/// Differentiable unnormalized log density over a flat coordinate
/// vector. Implemented by the hard-coded DAG below and by the toy
/// targets used in inference tests.
class LogDensityModel {
 public:
  virtual ~LogDensityModel() = default;
  virtual std::size_t dim() const = 0;
  virtual double log_density(std::span<const double> z) const = 0;
  /// Writes d log p / d z into grad (overwriting) and returns log p.
  virtual double log_density_grad(std::span<const double> z,
                                  std::span<double> grad) const = 0;
};

/// Log joint density of the DAG over [parameters..., per-user
/// latents...]. Coordinates follow ParamLayout, then one latent block
/// per user in dataset order ([D0..D3, S], or [S] without the
/// demographics group).
///
/// The user loop is OpenMP-parallel with a fixed-chunk reduction, so
/// results are bit-identical for any thread count.
class JointModel final : public LogDensityModel {
 public:
  JointModel(const SubredditCatalog& catalog,
             std::span<const UserObservation> users,
             const Hyperparameters& hyper, const ModelStructure& structure);
  JointModel(const Dataset& data, const Hyperparameters& hyper,
             const ModelStructure& structure = {});

  std::size_t dim() const override;
  double log_density(std::span<const double> z) const override;
  double log_density_grad(std::span<const double> z,
                          std::span<double> grad) const override;

  /// Subset evaluation for minibatched steps: only the listed users
  /// contribute, with their blocks scaled by `scale` (parameter priors
  /// are never scaled). Empty subset means all users; empty grad skips
  /// gradient work, otherwise grad is overwritten.
  double eval(std::span<const double> z, std::span<double> grad,
              std::span<const std::uint32_t> subset, double scale) const;

  const ParamLayout& layout() const { return layout_; }
  const SubredditCatalog& catalog() const { return *catalog_; }
  std::span<const UserObservation> users() const { return users_; }
  const Hyperparameters& hyper() const { return hyper_; }
  const ModelStructure& structure() const { return structure_; }

  std::size_t n_params() const { return layout_.size(); }
  std::size_t latents_per_user() const {
    return structure_.latents_per_user();
  }
  std::size_t latent_offset(std::size_t user) const {
    return layout_.size() + user * latents_per_user();
  }
  /// Index of the sympathy coordinate of a user.
  std::size_t sympathy_index(std::size_t user) const {
    return latent_offset(user) + (structure_.demographics ? 4 : 0);
  }

  ModelParameters params_from(std::span<const double> z) const {
    return layout_.unpack(z);
  }
  /// Latent coordinates of one user -> (D, S); D stays zero without the
  /// demographics group.
  void latents_from(std::span<const double> z, std::size_t user, Vec4& d,
                    double& s) const;

 private:
  const SubredditCatalog* catalog_;
  std::span<const UserObservation> users_;
  Hyperparameters hyper_;
  ModelStructure structure_;
  ParamLayout layout_;
};

/// Log joint of the DAG in natural parameter space; the one-call public
/// form of the density. log(0) situations yield -inf rather than a
/// crash. Throws std::invalid_argument on dimension mismatches or
/// non-finite parameters.
double joint_log_density(const ModelParameters& params,
                         const LatentState& latents,
                         std::span<const UserObservation> users,
                         const SubredditCatalog& catalog,
                         const Hyperparameters& hyper,
                         const ModelStructure& structure = {});

}  // namespace climact
