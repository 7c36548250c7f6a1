#include "climact/experiments.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "climact/rng.hpp"

namespace climact {

ModelStructure structure_without(const std::string& group) {
  ModelStructure st;
  if (group == "E")
    st.engagement = false;
  else if (group == "I")
    st.interaction = false;
  else if (group == "M")
    st.media = false;
  else if (group == "D")
    st.demographics = false;
  else
    throw std::invalid_argument("ablation: unknown group '" + group +
                                "' (expected E, I, M or D)");
  return st;
}

namespace {

std::pair<double, double> mean_sd(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd =
      v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return {mean, sd};
}

AblationEntry fit_variant(const Dataset& data, const Hyperparameters& hyper,
                          const FitConfig& config, const std::string& variant,
                          const ModelStructure& st, double var_s) {
  FitConfig cfg = config;
  cfg.var_s = var_s;
  AblationEntry entry;
  entry.variant = variant;
  entry.var_s = var_s;
  entry.fit = fit(data, hyper, cfg, st);

  Hyperparameters h = hyper;
  h.var_s = var_s;
  const JointModel model(data, h, st);
  const std::vector<double> acc = posterior_predictive_accuracy_samples(
      entry.fit.best_guide, model, config.n_predictive_samples,
      derive_seed(config.seed, 0xab1a7e, fnv1a64(variant)));
  const auto [mean, sd] = mean_sd(acc);
  entry.accuracy_mean = mean;
  entry.accuracy_sd = sd;
  return entry;
}

}  // namespace

std::vector<AblationEntry> run_ablation(const Dataset& data,
                                        const Hyperparameters& hyper,
                                        const FitConfig& config,
                                        std::span<const std::string> groups,
                                        std::span<const double> var_s_sweep) {
  for (const std::string& g : groups) structure_without(g);  // validate early
  std::vector<AblationEntry> out;
  for (double var_s : var_s_sweep) {
    out.push_back(
        fit_variant(data, hyper, config, "full", ModelStructure{}, var_s));
    for (const std::string& g : groups)
      out.push_back(fit_variant(data, hyper, config, "no_" + g,
                                structure_without(g), var_s));
  }
  return out;
}

double pearson_correlation(std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3)
    throw std::invalid_argument(
        "pearson_correlation: need >= 3 paired values");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw std::invalid_argument(
        "pearson_correlation: zero variance in one input");
  return sxy / std::sqrt(sxx * syy);
}

RobustnessResult run_robustness(const Dataset& gap_on, const Dataset& gap_off,
                                const Hyperparameters& hyper,
                                const FitConfig& config) {
  RobustnessResult result;
  result.fit_gap_on = fit(gap_on, hyper, config);
  result.fit_gap_off = fit(gap_off, hyper, config);

  std::map<std::string, double> off_means;
  for (const ParamSummary& p : result.fit_gap_off.parameters)
    off_means[p.name] = p.mean;

  std::vector<double> x, y;
  for (const ParamSummary& p : result.fit_gap_on.parameters) {
    const auto it = off_means.find(p.name);
    if (it == off_means.end()) continue;
    result.pairs.push_back({p.name, p.mean, it->second});
    x.push_back(p.mean);
    y.push_back(it->second);
  }
  if (x.size() < 3)
    throw std::invalid_argument(
        "robustness: fewer than 3 parameters to correlate");
  result.correlation = pearson_correlation(x, y);
  return result;
}

}  // namespace climact
