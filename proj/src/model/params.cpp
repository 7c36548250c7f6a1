#include "climact/params.hpp"

#include <cmath>
#include <stdexcept>

#include "climact/nodes.hpp"

namespace climact {

ParamLayout::ParamLayout(const ModelStructure& st, const Hyperparameters& hyper)
    : st_(st) {
  hyper.validate();
  const double pv = hyper.prior_var;
  const double m0 = hyper.prior_mean_default;
  const double mpop = hyper.prior_mean_popularity;

  auto add = [&](int& idx, std::string name, double mean) {
    idx = static_cast<int>(coords_.size());
    coords_.push_back({std::move(name), mean, pv});
  };
  auto add4 = [&](int& idx, const std::string& stem) {
    for (std::size_t a = 0; a < 4; ++a) {
      int slot = -1;
      add(slot, stem + "_" + kAxisNames[a], m0);
      if (a == 0) idx = slot;
    }
  };
  auto add3 = [&](int& idx, const std::string& stem) {
    for (std::size_t t = 0; t < 3; ++t) {
      int slot = -1;
      add(slot, stem + "_" + kThemeNames[t], m0);
      if (t == 0) idx = slot;
    }
  };

  if (st.engagement) {
    add(beta_e0, "beta_E0", m0);
    add(beta_e1, "beta_E1", m0);
    add(log_theta_e, "log_theta_E", m0);
  }
  add(beta_pl0, "beta_P0", m0);
  if (st.demographics) add(beta_pl1, "beta_P1", m0);
  add(beta_pl2, "beta_P2", mpop);
  if (st.engagement) add(beta_pl3, "beta_P3", m0);

  if (st.demographics) add4(beta_s1, "beta_S1");
  if (st.engagement) add(beta_s2, "beta_S2", m0);
  if (st.media) add3(beta_s3, "beta_S3");

  add(beta_ps0, "beta_p0", m0);
  add4(beta_ps1, "beta_p1");
  add(beta_ps2, "beta_p2", m0);
  add(beta_ps3, "beta_p3", mpop);
  if (st.engagement) add(beta_ps4, "beta_p4", m0);

  if (st.interaction) {
    add(beta_i0, "beta_I0", m0);
    add4(beta_i1, "beta_I1");
    if (st.engagement) add(beta_i2, "beta_I2", m0);
  }

  add(beta_a0, "beta_A0", m0);
  add(beta_a1, "beta_A1", m0);
  if (st.interaction) add(beta_a2, "beta_A2", m0);
  if (st.media) {
    add3(beta_a3, "beta_A3");
    add3(beta_a4, "beta_A4");
  }
  if (st.engagement) add(beta_a5, "beta_A5", m0);
}

ModelParameters ParamLayout::unpack(std::span<const double> z) const {
  if (z.size() < size())
    throw std::invalid_argument("ParamLayout::unpack: vector too short");
  ModelParameters p;
  auto get = [&](int i) { return i >= 0 ? z[static_cast<std::size_t>(i)] : 0.0; };
  p.beta_e0 = get(beta_e0);
  p.beta_e1 = get(beta_e1);
  p.theta_e = log_theta_e >= 0 ? std::exp(z[log_theta_e]) : 1.0;
  p.beta_pl0 = get(beta_pl0);
  p.beta_pl1 = get(beta_pl1);
  p.beta_pl2 = get(beta_pl2);
  p.beta_pl3 = get(beta_pl3);
  for (std::size_t a = 0; a < 4; ++a) {
    p.beta_s1[a] = beta_s1 >= 0 ? z[beta_s1 + a] : 0.0;
    p.beta_ps1[a] = beta_ps1 >= 0 ? z[beta_ps1 + a] : 0.0;
    p.beta_i1[a] = beta_i1 >= 0 ? z[beta_i1 + a] : 0.0;
  }
  p.beta_s2 = get(beta_s2);
  for (std::size_t t = 0; t < 3; ++t) {
    p.beta_s3[t] = beta_s3 >= 0 ? z[beta_s3 + t] : 0.0;
    p.beta_a3[t] = beta_a3 >= 0 ? z[beta_a3 + t] : 0.0;
    p.beta_a4[t] = beta_a4 >= 0 ? z[beta_a4 + t] : 0.0;
  }
  p.beta_ps0 = get(beta_ps0);
  p.beta_ps2 = get(beta_ps2);
  p.beta_ps3 = get(beta_ps3);
  p.beta_ps4 = get(beta_ps4);
  p.beta_i0 = get(beta_i0);
  p.beta_i2 = get(beta_i2);
  p.beta_a0 = get(beta_a0);
  p.beta_a1 = get(beta_a1);
  p.beta_a2 = get(beta_a2);
  p.beta_a5 = get(beta_a5);
  return p;
}

void ParamLayout::pack(const ModelParameters& p, std::span<double> z) const {
  if (z.size() < size())
    throw std::invalid_argument("ParamLayout::pack: vector too short");
  auto set = [&](int i, double v) {
    if (i >= 0) z[static_cast<std::size_t>(i)] = v;
  };
  if (log_theta_e >= 0) {
    if (!(p.theta_e > 0.0))
      throw std::invalid_argument("ParamLayout::pack: theta_e must be > 0");
    z[log_theta_e] = std::log(p.theta_e);
  }
  set(beta_e0, p.beta_e0);
  set(beta_e1, p.beta_e1);
  set(beta_pl0, p.beta_pl0);
  set(beta_pl1, p.beta_pl1);
  set(beta_pl2, p.beta_pl2);
  set(beta_pl3, p.beta_pl3);
  for (std::size_t a = 0; a < 4; ++a) {
    if (beta_s1 >= 0) z[beta_s1 + a] = p.beta_s1[a];
    if (beta_ps1 >= 0) z[beta_ps1 + a] = p.beta_ps1[a];
    if (beta_i1 >= 0) z[beta_i1 + a] = p.beta_i1[a];
  }
  set(beta_s2, p.beta_s2);
  for (std::size_t t = 0; t < 3; ++t) {
    if (beta_s3 >= 0) z[beta_s3 + t] = p.beta_s3[t];
    if (beta_a3 >= 0) z[beta_a3 + t] = p.beta_a3[t];
    if (beta_a4 >= 0) z[beta_a4 + t] = p.beta_a4[t];
  }
  set(beta_ps0, p.beta_ps0);
  set(beta_ps2, p.beta_ps2);
  set(beta_ps3, p.beta_ps3);
  set(beta_ps4, p.beta_ps4);
  set(beta_i0, p.beta_i0);
  set(beta_i2, p.beta_i2);
  set(beta_a0, p.beta_a0);
  set(beta_a1, p.beta_a1);
  set(beta_a2, p.beta_a2);
  set(beta_a5, p.beta_a5);
}

std::vector<double> ParamLayout::pack(const ModelParameters& params) const {
  std::vector<double> z(size());
  pack(params, z);
  return z;
}

double ParamLayout::log_prior(std::span<const double> z) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i)
    sum += normal_logpdf(z[i], coords_[i].prior_mean, coords_[i].prior_var);
  return sum;
}

void ParamLayout::add_log_prior_grad(std::span<const double> z,
                                     std::span<double> grad) const {
  for (std::size_t i = 0; i < coords_.size(); ++i)
    grad[i] += -(z[i] - coords_[i].prior_mean) / coords_[i].prior_var;
}

}  // namespace climact
