#include "climact/types.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace climact {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void SubredditCatalog::validate() const {
  const std::size_t k = names.size();
  require(k >= 1, "catalog: degenerate catalog (K = 0)");
  require(scores.size() == k && popularity.size() == k,
          "catalog: names, scores and popularity must have equal length");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < k; ++i) {
    require(!names[i].empty(), "catalog: empty subreddit name");
    require(seen.insert(names[i]).second,
            "catalog: duplicate subreddit name '" + names[i] + "'");
    for (double v : scores[i])
      require(std::isfinite(v),
              "catalog: non-finite score for '" + names[i] + "'");
    require(std::isfinite(popularity[i]),
            "catalog: non-finite popularity for '" + names[i] + "'");
  }
}

bool ModelParameters::all_finite() const {
  const double scalars[] = {beta_e0,  beta_e1,  theta_e,  beta_pl0, beta_pl1,
                            beta_pl2, beta_pl3, beta_s2,  beta_ps0, beta_ps2,
                            beta_ps3, beta_ps4, beta_i0,  beta_i2,  beta_a0,
                            beta_a1,  beta_a2,  beta_a5};
  for (double v : scalars)
    if (!std::isfinite(v)) return false;
  for (double v : beta_s1)
    if (!std::isfinite(v)) return false;
  for (double v : beta_s3)
    if (!std::isfinite(v)) return false;
  for (double v : beta_ps1)
    if (!std::isfinite(v)) return false;
  for (double v : beta_i1)
    if (!std::isfinite(v)) return false;
  for (double v : beta_a3)
    if (!std::isfinite(v)) return false;
  for (double v : beta_a4)
    if (!std::isfinite(v)) return false;
  return true;
}

void Hyperparameters::validate() const {
  require(std::isfinite(var_s) && var_s > 0.0, "hyper: var_s must be > 0");
  require(std::isfinite(prior_var) && prior_var > 0.0,
          "hyper: prior_var must be > 0");
  require(std::isfinite(prior_mean_popularity) &&
              prior_mean_popularity > 0.0,
          "hyper: prior_mean_popularity must be > 0");
  require(std::isfinite(prior_mean_default), "hyper: non-finite prior mean");
}

void Dataset::validate() const {
  catalog.validate();
  const std::size_t k = catalog.size();
  std::unordered_set<std::string> ids;
  for (const UserObservation& u : users) {
    const std::string who = "user '" + u.id + "'";
    require(!u.id.empty(), "dataset: empty user id");
    require(ids.insert(u.id).second, "dataset: duplicate " + who);
    require(u.p_long.size() == k,
            who + ": P_L length " + std::to_string(u.p_long.size()) +
                " != catalog K = " + std::to_string(k));
    require(u.p_short.size() == k,
            who + ": P_S length " + std::to_string(u.p_short.size()) +
                " != catalog K = " + std::to_string(k));
    for (std::uint8_t b : u.p_long)
      require(b <= 1, who + ": P_L entries must be 0/1");
    for (std::uint8_t b : u.p_short)
      require(b <= 1, who + ": P_S entries must be 0/1");
    require(u.interacted <= 1 && u.activated <= 1,
            who + ": I and A must be 0/1");
    require(std::isfinite(u.e_long) && std::isfinite(u.e_short),
            who + ": non-finite engagement");
    for (double v : u.m_long)
      require(std::isfinite(v), who + ": non-finite M_L");
    for (double v : u.m_short)
      require(std::isfinite(v), who + ": non-finite M_S");
  }
}

}  // namespace climact
