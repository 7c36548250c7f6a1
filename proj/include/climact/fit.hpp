#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "climact/elbo.hpp"
#include "climact/guide.hpp"
#include "climact/joint.hpp"
#include "climact/types.hpp"

namespace climact {

/// SVI settings. Defaults encode the reference protocol: Adam at
/// learning rate 0.05, 10 random restarts scored by the accuracy of
/// 100 posterior predictive samples.
struct FitConfig {
  double learning_rate = 0.05;
  std::size_t n_restarts = 10;
  std::size_t n_steps = 5000;
  std::size_t mc_samples_per_step = 1;
  std::size_t n_predictive_samples = 100;
  std::uint64_t seed = 0;
  double var_s = 1.0;

  // Early stop: quit once the mean ELBO over the last window improves
  // on the previous window by less than rel_tol * |previous|.
  std::size_t early_stop_window = 100;
  double early_stop_rel_tol = 1e-3;

  // Fraction of users visited per step; 1.0 = full batch (default).
  double minibatch_fraction = 1.0;

  // Exponential averaging of guide iterates (effective window ~2/decay
  // steps) removes the optimizer's stationary jitter from the reported
  // posterior. 0 reports the final iterate instead.
  double polyak_decay = 0.02;

  void validate() const;
};

/// Default sympathy-variance sweep used by the experiment commands.
inline constexpr std::array<double, 3> kDefaultVarSSweep = {0.01, 1.0, 100.0};

struct RestartRecord {
  double final_elbo = 0.0;
  double accuracy = 0.0;
  std::size_t steps_run = 0;
  bool diverged = false;
};

struct ParamSummary {
  std::string name;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct FitResult {
  GuideState best_guide;
  std::size_t best_restart = 0;
  std::vector<RestartRecord> restarts;
  std::vector<ParamSummary> parameters;  // 95% credible intervals
  std::vector<double> elbo_trace;        // best restart, one entry per step
  std::vector<double> sympathy_mean;     // posterior mean of S per user
  double var_s = 1.0;
  ModelStructure structure;
};

/// Raised when every restart diverges; message carries the per-restart
/// diagnostics.
class InferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Full SVI fit: independent restarts (each on its own seed stream),
/// best restart selected by posterior predictive accuracy, ties broken
/// by final ELBO. hyper.var_s is overridden by config.var_s.
FitResult fit(const Dataset& data, const Hyperparameters& hyper,
              const FitConfig& config, const ModelStructure& structure = {});

/// Mean over n_samples posterior draws of the fraction of users whose
/// resampled activation bit equals the observed one.
double posterior_predictive_accuracy(const GuideState& guide,
                                     const JointModel& model,
                                     std::size_t n_samples,
                                     std::uint64_t seed);

/// Per-draw accuracies (used for mean +- sd reporting).
std::vector<double> posterior_predictive_accuracy_samples(
    const GuideState& guide, const JointModel& model, std::size_t n_samples,
    std::uint64_t seed);

}  // namespace climact
