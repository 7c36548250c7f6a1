#pragma once

#include <cstdint>
#include <string>

#include "climact/rng.hpp"
#include "climact/types.hpp"

namespace climact::testing {

inline SubredditCatalog random_catalog(std::size_t k, std::uint64_t seed) {
  SubredditCatalog cat;
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    cat.names.push_back("sub" + std::to_string(i));
    Vec4 sc;
    for (double& v : sc) v = rng.normal();
    cat.scores.push_back(sc);
    cat.popularity.push_back(rng.normal());
  }
  return cat;
}

/// Three hand-set rows; used by the arithmetic-oracle tests.
inline SubredditCatalog toy_catalog3() {
  SubredditCatalog cat;
  cat.names = {"alpha", "beta", "gamma"};
  cat.scores = {Vec4{0.5, -1.0, 0.25, 2.0}, Vec4{-0.75, 0.5, 1.5, -0.5},
                Vec4{1.0, 1.0, -1.0, 0.0}};
  cat.popularity = {0.8, -0.3, 1.2};
  return cat;
}

inline ModelParameters random_params(std::uint64_t seed, double scale = 0.7) {
  Rng rng(seed);
  ModelParameters p;
  auto r = [&] { return scale * rng.normal(); };
  p.beta_e0 = r();
  p.beta_e1 = r();
  p.theta_e = 0.2 + 2.0 * rng.uniform01();
  p.beta_pl0 = r();
  p.beta_pl1 = r();
  p.beta_pl2 = r();
  p.beta_pl3 = r();
  for (double& v : p.beta_s1) v = r();
  p.beta_s2 = r();
  for (double& v : p.beta_s3) v = r();
  p.beta_ps0 = r();
  for (double& v : p.beta_ps1) v = r();
  p.beta_ps2 = r();
  p.beta_ps3 = r();
  p.beta_ps4 = r();
  p.beta_i0 = r();
  for (double& v : p.beta_i1) v = r();
  p.beta_i2 = r();
  p.beta_a0 = r();
  p.beta_a1 = r();
  p.beta_a2 = r();
  for (double& v : p.beta_a3) v = r();
  for (double& v : p.beta_a4) v = r();
  p.beta_a5 = r();
  return p;
}

inline UserObservation random_user(std::size_t k, std::uint64_t seed,
                                   const std::string& id) {
  Rng rng(seed);
  UserObservation u;
  u.id = id;
  u.e_long = rng.normal();
  u.e_short = rng.normal();
  for (double& v : u.m_long) v = rng.normal();
  for (double& v : u.m_short) v = rng.normal();
  u.p_long.resize(k);
  u.p_short.resize(k);
  for (auto& b : u.p_long) b = rng.bernoulli(0.4) ? 1 : 0;
  for (auto& b : u.p_short) b = rng.bernoulli(0.4) ? 1 : 0;
  u.interacted = rng.bernoulli(0.5) ? 1 : 0;
  u.activated = rng.bernoulli(0.5) ? 1 : 0;
  return u;
}

inline LatentState random_latents(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  LatentState l;
  l.d.resize(n);
  l.s.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (double& v : l.d[u]) v = rng.normal();
    l.s[u] = rng.normal();
  }
  return l;
}

}  // namespace climact::testing
