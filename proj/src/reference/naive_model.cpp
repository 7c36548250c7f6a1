#include "naive_model.hpp"

#include <cmath>

namespace climact::ref {

namespace {

const double kPi = 3.14159265358979323846;

double bern_log(bool y, double p) {
  return std::log(y ? p : 1.0 - p);
}

}  // namespace

double naive_sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double naive_normal_logpdf(double x, double mean, double variance) {
  const double coef = 1.0 / std::sqrt(2.0 * kPi * variance);
  const double diff = x - mean;
  return std::log(coef * std::exp(-diff * diff / (2.0 * variance)));
}

double naive_user_log_density(const ModelParameters& params, const Vec4& d,
                              double s, const UserObservation& ob,
                              const SubredditCatalog& catalog,
                              const Hyperparameters& hyper,
                              const ModelStructure& st) {
  const std::size_t K = catalog.size();
  double total = 0.0;

  if (st.demographics) {
    for (int a = 0; a < 4; ++a) total += naive_normal_logpdf(d[a], 0.0, 1.0);
  }

  if (st.engagement) {
    total += naive_normal_logpdf(
        ob.e_short, params.beta_e1 * ob.e_long + params.beta_e0,
        params.theta_e);
  }

  for (std::size_t k = 0; k < K; ++k) {
    double dot_sd = 0.0;
    for (int a = 0; a < 4; ++a) dot_sd += catalog.scores[k][a] * d[a];
    const double logit = params.beta_pl1 * dot_sd +
                         params.beta_pl2 * catalog.popularity[k] +
                         params.beta_pl3 * ob.e_long + params.beta_pl0;
    total += bern_log(ob.p_long[k] != 0, naive_sigmoid(logit));
  }

  double mu_s = params.beta_s2 * ob.e_long;
  for (int a = 0; a < 4; ++a) mu_s += params.beta_s1[a] * d[a];
  for (int t = 0; t < 3; ++t) mu_s += params.beta_s3[t] * ob.m_long[t];
  total += naive_normal_logpdf(s, mu_s, hyper.var_s);

  for (std::size_t k = 0; k < K; ++k) {
    double weight = 0.0;
    for (int a = 0; a < 4; ++a) weight += params.beta_ps1[a] * catalog.scores[k][a];
    const double logit = s * weight +
                         params.beta_ps2 * (ob.p_long[k] != 0 ? 1.0 : 0.0) +
                         params.beta_ps3 * catalog.popularity[k] +
                         params.beta_ps4 * ob.e_short + params.beta_ps0;
    total += bern_log(ob.p_short[k] != 0, naive_sigmoid(logit));
  }

  if (st.interaction) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < K; ++k)
      if (ob.p_short[k] != 0)
        for (int a = 0; a < 4; ++a) acc[a] += catalog.scores[k][a];
    double logit = params.beta_i2 * ob.e_short + params.beta_i0;
    for (int a = 0; a < 4; ++a) logit += params.beta_i1[a] * acc[a];
    total += bern_log(ob.interacted != 0, naive_sigmoid(logit));
  }

  {
    double logit = params.beta_a1 * s +
                   params.beta_a2 * (ob.interacted != 0 ? 1.0 : 0.0) +
                   params.beta_a5 * ob.e_short + params.beta_a0;
    for (int t = 0; t < 3; ++t) logit += params.beta_a3[t] * ob.m_short[t];
    for (int t = 0; t < 3; ++t) logit += params.beta_a4[t] * ob.m_long[t];
    total += bern_log(ob.activated != 0, naive_sigmoid(logit));
  }

  return total;
}

double naive_joint_log_density(const ModelParameters& params,
                               const LatentState& latents,
                               std::span<const UserObservation> users,
                               const SubredditCatalog& catalog,
                               const Hyperparameters& hyper,
                               const ModelStructure& st) {
  double total = 0.0;
  for (std::size_t u = 0; u < users.size(); ++u) {
    const Vec4 d = st.demographics ? latents.d[u] : Vec4{};
    total += naive_user_log_density(params, d, latents.s[u], users[u],
                                    catalog, hyper, st);
  }

  // Coefficient priors, enumerated by hand. Popularity coefficients use
  // the positive prior mean, log(theta_e) is the learned coordinate.
  const double pv = hyper.prior_var;
  const double m0 = hyper.prior_mean_default;
  const double mp = hyper.prior_mean_popularity;
  auto pr = [&](double value, double mean) {
    return naive_normal_logpdf(value, mean, pv);
  };

  if (st.engagement) {
    total += pr(params.beta_e0, m0) + pr(params.beta_e1, m0) +
             pr(std::log(params.theta_e), m0);
  }
  total += pr(params.beta_pl0, m0) + pr(params.beta_pl2, mp);
  if (st.demographics) total += pr(params.beta_pl1, m0);
  if (st.engagement) total += pr(params.beta_pl3, m0);

  if (st.demographics)
    for (int a = 0; a < 4; ++a) total += pr(params.beta_s1[a], m0);
  if (st.engagement) total += pr(params.beta_s2, m0);
  if (st.media)
    for (int t = 0; t < 3; ++t) total += pr(params.beta_s3[t], m0);

  total += pr(params.beta_ps0, m0) + pr(params.beta_ps2, m0) +
           pr(params.beta_ps3, mp);
  for (int a = 0; a < 4; ++a) total += pr(params.beta_ps1[a], m0);
  if (st.engagement) total += pr(params.beta_ps4, m0);

  if (st.interaction) {
    total += pr(params.beta_i0, m0);
    for (int a = 0; a < 4; ++a) total += pr(params.beta_i1[a], m0);
    if (st.engagement) total += pr(params.beta_i2, m0);
  }

  total += pr(params.beta_a0, m0) + pr(params.beta_a1, m0);
  if (st.interaction) total += pr(params.beta_a2, m0);
  if (st.media) {
    for (int t = 0; t < 3; ++t) total += pr(params.beta_a3[t], m0);
    for (int t = 0; t < 3; ++t) total += pr(params.beta_a4[t], m0);
  }
  if (st.engagement) total += pr(params.beta_a5, m0);

  return total;
}

}  // namespace climact::ref
