#pragma once

#include <span>

#include "climact/types.hpp"

namespace climact::ref {

// Plain single-threaded evaluator of the factorized joint density,
// written directly from the distributional definitions. Kept separate
// from the production kernel on purpose: tests compare the two, and the
// benchmark uses it as the serial baseline. Do not "optimize" it into
// sharing code with src/model.

double naive_sigmoid(double x);
double naive_normal_logpdf(double x, double mean, double variance);

/// Log density of one user's block of factors given its latents.
double naive_user_log_density(const ModelParameters& params, const Vec4& d,
                              double s, const UserObservation& ob,
                              const SubredditCatalog& catalog,
                              const Hyperparameters& hyper,
                              const ModelStructure& structure = {});

/// Full log joint: user blocks plus the parameter log-priors.
double naive_joint_log_density(const ModelParameters& params,
                               const LatentState& latents,
                               std::span<const UserObservation> users,
                               const SubredditCatalog& catalog,
                               const Hyperparameters& hyper,
                               const ModelStructure& structure = {});

}  // namespace climact::ref
