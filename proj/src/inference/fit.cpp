#include "climact/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "climact/adam.hpp"
#include "climact/nodes.hpp"

namespace climact {

namespace {

constexpr double kZ975 = 1.959963984540054;

// Seed-stream tags (arbitrary fixed constants).
constexpr std::uint64_t kTagRestart = 0x72657374;
constexpr std::uint64_t kTagInit = 0x696e6974;
constexpr std::uint64_t kTagStep = 0x73746570;
constexpr std::uint64_t kTagEval = 0x6576616c;
constexpr std::uint64_t kTagAccuracy = 0x61636375;
constexpr std::uint64_t kTagBatch = 0x62617463;

// Subset view with the likelihood rescaled to keep the gradient
// unbiased; parameter priors are untouched by the scaling.
class MinibatchView final : public LogDensityModel {
 public:
  explicit MinibatchView(const JointModel& model) : model_(&model) {}

  void set(std::span<const std::uint32_t> subset, double scale) {
    subset_ = subset;
    scale_ = scale;
  }

  std::size_t dim() const override { return model_->dim(); }
  double log_density(std::span<const double> z) const override {
    return model_->eval(z, {}, subset_, scale_);
  }
  double log_density_grad(std::span<const double> z,
                          std::span<double> grad) const override {
    return model_->eval(z, grad, subset_, scale_);
  }

 private:
  const JointModel* model_;
  std::span<const std::uint32_t> subset_;
  double scale_ = 1.0;
};

bool early_stop(const std::vector<double>& trace, std::size_t window,
                double rel_tol) {
  if (window == 0 || trace.size() < 2 * window ||
      trace.size() % window != 0)
    return false;
  const auto mean_of = [&](std::size_t begin) {
    double s = 0.0;
    for (std::size_t i = begin; i < begin + window; ++i) s += trace[i];
    return s / static_cast<double>(window);
  };
  const double prev = mean_of(trace.size() - 2 * window);
  const double cur = mean_of(trace.size() - window);
  return cur - prev < rel_tol * std::max(1.0, std::abs(prev));
}

}  // namespace

void FitConfig::validate() const {
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("fit: learning_rate must be > 0");
  if (n_restarts < 1 || n_steps < 1 || mc_samples_per_step < 1 ||
      n_predictive_samples < 1)
    throw std::invalid_argument("fit: counts must be >= 1");
  if (!(var_s > 0.0))
    throw std::invalid_argument("fit: var_s must be > 0");
  if (!(minibatch_fraction > 0.0) || minibatch_fraction > 1.0)
    throw std::invalid_argument("fit: minibatch_fraction must be in (0, 1]");
  if (polyak_decay < 0.0 || polyak_decay > 1.0)
    throw std::invalid_argument("fit: polyak_decay must be in [0, 1]");
}

std::vector<double> posterior_predictive_accuracy_samples(
    const GuideState& guide, const JointModel& model, std::size_t n_samples,
    std::uint64_t seed) {
  if (guide.dim() != model.dim())
    throw std::invalid_argument("predictive accuracy: guide/model mismatch");
  const std::span<const UserObservation> users = model.users();
  const std::size_t n_params = model.n_params();
  std::vector<double> out(n_samples, 0.0);
  std::vector<double> zp(n_params);

  for (std::size_t j = 0; j < n_samples; ++j) {
    Rng prng(derive_seed(seed, 0x70617261, j));
    for (std::size_t i = 0; i < n_params; ++i)
      zp[i] = guide.mean[i] + std::exp(guide.log_scale[i]) * prng.normal();
    const ModelParameters params = model.layout().unpack(zp);

    std::size_t correct = 0;
    for (std::size_t u = 0; u < users.size(); ++u) {
      // Per-user stream keyed on the user id, so the draw (and hence
      // the realized accuracy) is invariant to user ordering.
      Rng rng(derive_seed(seed, fnv1a64(users[u].id), j));
      const std::size_t off = model.latent_offset(u);
      Vec4 d{};
      double s;
      if (model.structure().demographics) {
        for (std::size_t a = 0; a < 4; ++a)
          d[a] = guide.mean[off + a] +
                 std::exp(guide.log_scale[off + a]) * rng.normal();
        s = guide.mean[off + 4] +
            std::exp(guide.log_scale[off + 4]) * rng.normal();
      } else {
        s = guide.mean[off] + std::exp(guide.log_scale[off]) * rng.normal();
      }
      (void)d;  // A depends on D only through S
      const UserObservation& ob = users[u];
      const double p = activation_prob(s, ob.interacted != 0, ob.m_short,
                                       ob.m_long, ob.e_short, params);
      const bool sampled = rng.bernoulli(p);
      if (sampled == (ob.activated != 0)) ++correct;
    }
    out[j] = static_cast<double>(correct) / static_cast<double>(users.size());
  }
  return out;
}

double posterior_predictive_accuracy(const GuideState& guide,
                                     const JointModel& model,
                                     std::size_t n_samples,
                                     std::uint64_t seed) {
  const std::vector<double> acc =
      posterior_predictive_accuracy_samples(guide, model, n_samples, seed);
  return std::accumulate(acc.begin(), acc.end(), 0.0) /
         static_cast<double>(acc.size());
}

FitResult fit(const Dataset& data, const Hyperparameters& hyper,
              const FitConfig& config, const ModelStructure& structure) {
  config.validate();
  data.validate();
  if (data.n_users() < 2)
    throw std::invalid_argument("fit: need at least 2 users");
  bool any_on = false, any_off = false;
  for (const UserObservation& u : data.users) {
    if (u.activated != 0)
      any_on = true;
    else
      any_off = true;
  }
  if (!any_on || !any_off)
    throw std::invalid_argument(
        "fit: need at least one activated and one non-activated user");

  Hyperparameters h = hyper;
  h.var_s = config.var_s;
  const JointModel model(data, h, structure);
  const std::size_t dim = model.dim();
  const std::size_t n_users = data.n_users();

  const bool minibatch = config.minibatch_fraction < 1.0;
  const std::size_t batch_size =
      minibatch ? std::max<std::size_t>(
                      1, static_cast<std::size_t>(std::ceil(
                             config.minibatch_fraction *
                             static_cast<double>(n_users))))
                : n_users;

  FitResult result;
  result.var_s = config.var_s;
  result.structure = structure;
  result.restarts.resize(config.n_restarts);
  std::vector<std::vector<double>> traces(config.n_restarts);
  std::vector<GuideState> guides(config.n_restarts);

  for (std::size_t r = 0; r < config.n_restarts; ++r) {
    const std::uint64_t rseed = derive_seed(config.seed, kTagRestart, r);
    GuideState guide = GuideState::init(dim, derive_seed(rseed, kTagInit));
    AdamState opt_mean(dim), opt_scale(dim);
    RestartRecord& rec = result.restarts[r];
    std::vector<double>& trace = traces[r];
    trace.reserve(config.n_steps);

    MinibatchView view(model);
    std::vector<std::uint32_t> subset;
    Rng batch_rng(derive_seed(rseed, kTagBatch));

    const double decay = config.polyak_decay;
    std::vector<double> avg_mean, avg_scale;
    if (decay > 0.0) {
      avg_mean.assign(dim, 0.0);
      avg_scale.assign(dim, 0.0);
    }
    double avg_norm = 0.0;

    for (std::size_t step = 0; step < config.n_steps; ++step) {
      if (minibatch) {
        // Partial Fisher-Yates draw of batch_size distinct users.
        subset.resize(n_users);
        std::iota(subset.begin(), subset.end(), 0u);
        for (std::size_t i = 0; i < batch_size; ++i) {
          const std::size_t j =
              i + static_cast<std::size_t>(batch_rng.uniform01() *
                                           static_cast<double>(n_users - i));
          std::swap(subset[i], subset[std::min(j, n_users - 1)]);
        }
        subset.resize(batch_size);
        view.set(subset, static_cast<double>(n_users) /
                             static_cast<double>(batch_size));
      } else {
        view.set({}, 1.0);
      }

      ElboGradient g =
          elbo_gradient(guide, view, config.mc_samples_per_step,
                        derive_seed(rseed, kTagStep, step));
      if (minibatch) {
        // Latents of unsampled users carry no information this step;
        // freeze their guide coordinates.
        std::vector<std::uint8_t> active(n_users, 0);
        for (std::uint32_t u : subset) active[u] = 1;
        const std::size_t lpu = model.latents_per_user();
        for (std::size_t u = 0; u < n_users; ++u) {
          if (active[u]) continue;
          const std::size_t off = model.latent_offset(u);
          for (std::size_t i = 0; i < lpu; ++i) {
            g.grad_mean[off + i] = 0.0;
            g.grad_log_scale[off + i] = 0.0;
          }
        }
      }
      if (first_nonfinite(g)) {
        rec.diverged = true;
        rec.steps_run = step;
        break;
      }
      opt_mean.step(guide.mean, g.grad_mean, config.learning_rate);
      opt_scale.step(guide.log_scale, g.grad_log_scale, config.learning_rate);
      if (decay > 0.0) {
        for (std::size_t i = 0; i < dim; ++i) {
          avg_mean[i] = (1.0 - decay) * avg_mean[i] + decay * guide.mean[i];
          avg_scale[i] =
              (1.0 - decay) * avg_scale[i] + decay * guide.log_scale[i];
        }
        avg_norm = (1.0 - decay) * avg_norm + decay;
      }
      trace.push_back(g.elbo);
      rec.steps_run = step + 1;
      if (early_stop(trace, config.early_stop_window,
                     config.early_stop_rel_tol))
        break;
    }
    if (decay > 0.0 && avg_norm > 0.0 && !rec.diverged) {
      // bias-corrected exponential average of the iterates
      for (std::size_t i = 0; i < dim; ++i) {
        guide.mean[i] = avg_mean[i] / avg_norm;
        guide.log_scale[i] = avg_scale[i] / avg_norm;
      }
    }

    if (rec.diverged) {
      rec.final_elbo = -std::numeric_limits<double>::infinity();
      rec.accuracy = -1.0;
      continue;
    }
    rec.final_elbo =
        elbo_estimate(guide, model, 100, derive_seed(rseed, kTagEval));
    rec.accuracy = posterior_predictive_accuracy(
        guide, model, config.n_predictive_samples,
        derive_seed(rseed, kTagAccuracy));
    if (!std::isfinite(rec.final_elbo) || !std::isfinite(rec.accuracy)) {
      rec.diverged = true;
      rec.final_elbo = -std::numeric_limits<double>::infinity();
      rec.accuracy = -1.0;
      continue;
    }
    guides[r] = std::move(guide);
  }

  // Best restart: highest accuracy, ties broken by final ELBO.
  std::size_t best = config.n_restarts;
  for (std::size_t r = 0; r < config.n_restarts; ++r) {
    const RestartRecord& rec = result.restarts[r];
    if (rec.diverged) continue;
    if (best == config.n_restarts ||
        rec.accuracy > result.restarts[best].accuracy ||
        (rec.accuracy == result.restarts[best].accuracy &&
         rec.final_elbo > result.restarts[best].final_elbo))
      best = r;
  }
  if (best == config.n_restarts) {
    std::ostringstream msg;
    msg << "fit: all " << config.n_restarts << " restarts diverged;";
    for (std::size_t r = 0; r < config.n_restarts; ++r)
      msg << " restart " << r << ": non-finite after "
          << result.restarts[r].steps_run << " steps;";
    throw InferenceError(msg.str());
  }

  result.best_restart = best;
  result.best_guide = std::move(guides[best]);
  result.elbo_trace = std::move(traces[best]);

  const ParamLayout& layout = model.layout();
  result.parameters.reserve(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const double m = result.best_guide.mean[i];
    const double sd = std::exp(result.best_guide.log_scale[i]);
    result.parameters.push_back(
        {layout.coords()[i].name, m, m - kZ975 * sd, m + kZ975 * sd});
  }
  result.sympathy_mean.resize(n_users);
  for (std::size_t u = 0; u < n_users; ++u)
    result.sympathy_mean[u] = result.best_guide.mean[model.sympathy_index(u)];
  return result;
}

}  // namespace climact
