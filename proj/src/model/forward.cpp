#include "climact/forward.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "climact/nodes.hpp"
#include "climact/rng.hpp"

namespace climact {

namespace {

std::vector<double> split_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string tok =
        s.substr(pos, comma == std::string::npos ? std::string::npos
                                                 : comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("media generator: bad number '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Vec3 draw_media(const MediaGenerator& gen, Rng& rng) {
  Vec3 m{};
  switch (gen.kind) {
    case MediaGenerator::Kind::Normal:
      for (double& v : m) v = rng.normal(gen.mean, gen.sd);
      break;
    case MediaGenerator::Kind::Constant:
      m = gen.values;
      break;
  }
  return m;
}

}  // namespace

MediaGenerator MediaGenerator::parse(const std::string& spec) {
  MediaGenerator gen;
  const std::size_t colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (head == "normal") {
    gen.kind = Kind::Normal;
    if (!args.empty()) {
      const auto v = split_csv_doubles(args);
      if (v.size() != 2 || !(v[1] >= 0.0))
        throw std::invalid_argument("media generator: normal expects MEAN,SD");
      gen.mean = v[0];
      gen.sd = v[1];
    }
  } else if (head == "constant") {
    gen.kind = Kind::Constant;
    const auto v = args.empty() ? std::vector<double>{} : split_csv_doubles(args);
    if (v.size() == 1)
      gen.values = {v[0], v[0], v[0]};
    else if (v.size() == 3)
      gen.values = {v[0], v[1], v[2]};
    else
      throw std::invalid_argument("media generator: constant expects V or V1,V2,V3");
  } else {
    throw std::invalid_argument("media generator: unknown kind '" + head + "'");
  }
  return gen;
}

std::pair<std::vector<UserObservation>, LatentState> forward_sample(
    const ModelParameters& params, const SubredditCatalog& catalog,
    const Hyperparameters& hyper, std::size_t n_users,
    const MediaGenerator& media, std::uint64_t seed) {
  catalog.validate();
  hyper.validate();
  if (!params.all_finite())
    throw std::invalid_argument("forward_sample: non-finite parameters");
  if (!(params.theta_e > 0.0))
    throw std::invalid_argument("forward_sample: theta_e must be > 0");
  if (n_users < 1)
    throw std::invalid_argument("forward_sample: n_users must be >= 1");

  const std::size_t k_subs = catalog.size();
  std::vector<UserObservation> users(n_users);
  LatentState latents;
  latents.d.resize(n_users);
  latents.s.resize(n_users);

  const double sd_e = std::sqrt(params.theta_e);
  const double sd_s = std::sqrt(hyper.var_s);

  // One stream per user: sampling order inside a user is fixed, so the
  // dataset is reproducible regardless of scheduling.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ui = 0; ui < static_cast<std::ptrdiff_t>(n_users); ++ui) {
    const std::size_t u = static_cast<std::size_t>(ui);
    Rng rng(derive_seed(seed, u));
    UserObservation& ob = users[u];

    char idbuf[24];
    std::snprintf(idbuf, sizeof idbuf, "u%06zu", u);
    ob.id = idbuf;

    Vec4& d = latents.d[u];
    for (double& v : d) v = rng.normal();
    ob.e_long = rng.normal();
    ob.m_long = draw_media(media, rng);
    ob.m_short = draw_media(media, rng);
    ob.e_short = rng.normal(params.beta_e1 * ob.e_long + params.beta_e0, sd_e);

    ob.p_long.resize(k_subs);
    for (std::size_t k = 0; k < k_subs; ++k) {
      const double p = sigmoid(participation_long_logit(
          d, catalog.scores[k], catalog.popularity[k], ob.e_long, params));
      ob.p_long[k] = rng.bernoulli(p) ? 1 : 0;
    }

    const double s =
        rng.normal(sympathy_mean(d, ob.e_long, ob.m_long, params), sd_s);
    latents.s[u] = s;

    ob.p_short.resize(k_subs);
    for (std::size_t k = 0; k < k_subs; ++k) {
      const double p = sigmoid(participation_short_logit(
          s, ob.p_long[k] != 0, catalog.scores[k], catalog.popularity[k],
          ob.e_short, params));
      ob.p_short[k] = rng.bernoulli(p) ? 1 : 0;
    }

    ob.interacted =
        rng.bernoulli(interaction_prob(ob.p_short, catalog, ob.e_short, params))
            ? 1
            : 0;
    ob.activated =
        rng.bernoulli(activation_prob(s, ob.interacted != 0, ob.m_short,
                                      ob.m_long, ob.e_short, params))
            ? 1
            : 0;
  }

  return {std::move(users), std::move(latents)};
}

}  // namespace climact
