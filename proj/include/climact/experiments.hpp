#pragma once

#include <span>
#include <string>
#include <vector>

#include "climact/fit.hpp"
#include "climact/types.hpp"

namespace climact {

/// Structure with one variable group removed. Group names: E, I, M, D.
/// Throws std::invalid_argument on anything else.
ModelStructure structure_without(const std::string& group);

struct AblationEntry {
  std::string variant;  // "full" or "no_<group>"
  double var_s = 1.0;
  double accuracy_mean = 0.0;
  double accuracy_sd = 0.0;
  FitResult fit;
};

/// Refits the full model and one structurally reduced model per group,
/// for each var_s value, with identical FitConfig. Accuracy is reported
/// as mean +- sd over config.n_predictive_samples posterior draws.
std::vector<AblationEntry> run_ablation(const Dataset& data,
                                        const Hyperparameters& hyper,
                                        const FitConfig& config,
                                        std::span<const std::string> groups,
                                        std::span<const double> var_s_sweep);

double pearson_correlation(std::span<const double> x,
                           std::span<const double> y);

struct RobustnessPair {
  std::string name;
  double mean_gap_on = 0.0;
  double mean_gap_off = 0.0;
};

struct RobustnessResult {
  double correlation = 0.0;
  std::vector<RobustnessPair> pairs;
  FitResult fit_gap_on;
  FitResult fit_gap_off;
};

/// Fits the same model on the two windowing regimes and correlates the
/// parameter posterior means (latents excluded). Throws
/// std::invalid_argument with fewer than 3 parameters to correlate.
RobustnessResult run_robustness(const Dataset& gap_on, const Dataset& gap_off,
                                const Hyperparameters& hyper,
                                const FitConfig& config);

}  // namespace climact
