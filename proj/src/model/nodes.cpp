#include "climact/nodes.hpp"

#include <stdexcept>

namespace climact {

namespace {

void check_k(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw std::invalid_argument(std::string(what) + " length " +
                                std::to_string(got) + " != catalog K = " +
                                std::to_string(want));
}

}  // namespace

double engagement_logdensity(double e_short, double e_long,
                             const ModelParameters& params) {
  if (!(params.theta_e > 0.0))
    throw std::invalid_argument("engagement_logdensity: theta_e must be > 0");
  return normal_logpdf(e_short, params.beta_e1 * e_long + params.beta_e0,
                       params.theta_e);
}

double participation_long_logit(const Vec4& d, const Vec4& sub_scores,
                                double popularity, double e_long,
                                const ModelParameters& params) {
  return params.beta_pl1 * dot4(sub_scores, d) + params.beta_pl2 * popularity +
         params.beta_pl3 * e_long + params.beta_pl0;
}

std::vector<double> participation_long_prob(const Vec4& d,
                                            const SubredditCatalog& catalog,
                                            double e_long,
                                            const ModelParameters& params) {
  std::vector<double> out(catalog.size());
  for (std::size_t k = 0; k < catalog.size(); ++k)
    out[k] = sigmoid(participation_long_logit(d, catalog.scores[k],
                                              catalog.popularity[k], e_long,
                                              params));
  return out;
}

double sympathy_mean(const Vec4& d, double e_long, const Vec3& m_long,
                     const ModelParameters& params) {
  return dot4(params.beta_s1, d) + params.beta_s2 * e_long +
         dot3(params.beta_s3, m_long);
}

double participation_short_logit(double s, bool participated_long,
                                 const Vec4& sub_scores, double popularity,
                                 double e_short,
                                 const ModelParameters& params) {
  return s * dot4(params.beta_ps1, sub_scores) +
         params.beta_ps2 * (participated_long ? 1.0 : 0.0) +
         params.beta_ps3 * popularity + params.beta_ps4 * e_short +
         params.beta_ps0;
}

std::vector<double> participation_short_prob(
    double s, std::span<const std::uint8_t> p_long,
    const SubredditCatalog& catalog, double e_short,
    const ModelParameters& params) {
  check_k(p_long.size(), catalog.size(), "P_L");
  std::vector<double> out(catalog.size());
  for (std::size_t k = 0; k < catalog.size(); ++k)
    out[k] = sigmoid(participation_short_logit(
        s, p_long[k] != 0, catalog.scores[k], catalog.popularity[k], e_short,
        params));
  return out;
}

Vec4 participation_score_sum(std::span<const std::uint8_t> p_short,
                             const SubredditCatalog& catalog) {
  check_k(p_short.size(), catalog.size(), "P_S");
  Vec4 sum{};
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    if (!p_short[k]) continue;
    for (std::size_t a = 0; a < 4; ++a) sum[a] += catalog.scores[k][a];
  }
  return sum;
}

double interaction_prob(std::span<const std::uint8_t> p_short,
                        const SubredditCatalog& catalog, double e_short,
                        const ModelParameters& params) {
  const Vec4 g = participation_score_sum(p_short, catalog);
  return sigmoid(dot4(params.beta_i1, g) + params.beta_i2 * e_short +
                 params.beta_i0);
}

double activation_logit(double s, bool interacted, const Vec3& m_short,
                        const Vec3& m_long, double e_short,
                        const ModelParameters& params) {
  return params.beta_a1 * s + params.beta_a2 * (interacted ? 1.0 : 0.0) +
         dot3(params.beta_a3, m_short) + dot3(params.beta_a4, m_long) +
         params.beta_a5 * e_short + params.beta_a0;
}

double activation_prob(double s, bool interacted, const Vec3& m_short,
                       const Vec3& m_long, double e_short,
                       const ModelParameters& params) {
  return sigmoid(
      activation_logit(s, interacted, m_short, m_long, e_short, params));
}

}  // namespace climact
