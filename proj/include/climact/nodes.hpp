#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "climact/types.hpp"

namespace climact {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

/// Logistic function, overflow-safe for any finite input.
inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

/// log Bernoulli(y | sigmoid(logit)).
inline double bernoulli_logpmf(bool y, double logit) {
  return y ? -softplus(-logit) : -softplus(logit);
}

/// log Normal(x | mean, variance).
inline double normal_logpdf(double x, double mean, double variance) {
  const double r = x - mean;
  return -0.5 * (kLog2Pi + std::log(variance)) - r * r / (2.0 * variance);
}

inline double dot4(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double dot3(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Node-level conditionals of the structural equations. These are the
// reference entry points for single values; the fitting kernel inlines
// the same expressions.

/// log Normal(E_S | beta_e1 * E_L + beta_e0, theta_e).
/// Throws std::invalid_argument if theta_e <= 0.
double engagement_logdensity(double e_short, double e_long,
                             const ModelParameters& params);

double participation_long_logit(const Vec4& d, const Vec4& sub_scores,
                                double popularity, double e_long,
                                const ModelParameters& params);

/// Per-subreddit probability of long-term participation.
std::vector<double> participation_long_prob(const Vec4& d,
                                            const SubredditCatalog& catalog,
                                            double e_long,
                                            const ModelParameters& params);

/// Mean of the sympathy conditional (no intercept term).
double sympathy_mean(const Vec4& d, double e_long, const Vec3& m_long,
                     const ModelParameters& params);

double participation_short_logit(double s, bool participated_long,
                                 const Vec4& sub_scores, double popularity,
                                 double e_short, const ModelParameters& params);

/// Per-subreddit probability of short-term participation.
std::vector<double> participation_short_prob(
    double s, std::span<const std::uint8_t> p_long,
    const SubredditCatalog& catalog, double e_short,
    const ModelParameters& params);

/// Sum of the score rows of short-term participated subreddits.
Vec4 participation_score_sum(std::span<const std::uint8_t> p_short,
                             const SubredditCatalog& catalog);

/// Probability of interacting with an activist.
double interaction_prob(std::span<const std::uint8_t> p_short,
                        const SubredditCatalog& catalog, double e_short,
                        const ModelParameters& params);

double activation_logit(double s, bool interacted, const Vec3& m_short,
                        const Vec3& m_long, double e_short,
                        const ModelParameters& params);

/// Probability of activation.
double activation_prob(double s, bool interacted, const Vec3& m_short,
                       const Vec3& m_long, double e_short,
                       const ModelParameters& params);

}  // namespace climact
