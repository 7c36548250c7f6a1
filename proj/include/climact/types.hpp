#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace climact {

/// Sociodemographic axes of subreddit/user score vectors, in storage order.
inline constexpr std::array<const char*, 4> kAxisNames = {
    "affluence", "partisanship", "gender", "age"};

/// News themes of the media-coverage feature vectors, in storage order.
inline constexpr std::array<const char*, 3> kThemeNames = {
    "climate", "climate_action", "natural_disasters"};

using Vec4 = std::array<double, 4>;
using Vec3 = std::array<double, 3>;

/// Per-subreddit attributes: a score row on the four sociodemographic
/// axes and a popularity z-score.
struct SubredditCatalog {
  std::vector<std::string> names;
  std::vector<Vec4> scores;       // K x 4
  std::vector<double> popularity; // K

  std::size_t size() const { return names.size(); }

  /// Throws std::invalid_argument on duplicate names, K == 0,
  /// inconsistent lengths, or non-finite entries.
  void validate() const;
};

/// One user's observed variables. Engagement and media features are
/// expected on the z-score scale; participation vectors are aligned
/// with the catalog row order.
struct UserObservation {
  std::string id;
  std::vector<std::uint8_t> p_long;   // K bits
  std::vector<std::uint8_t> p_short;  // K bits
  double e_long = 0.0;
  double e_short = 0.0;
  Vec3 m_long{};
  Vec3 m_short{};
  std::uint8_t interacted = 0;  // I
  std::uint8_t activated = 0;   // A
  std::optional<std::string> location;
};

/// Coefficients of the six structural equations. theta_e is the
/// engagement noise variance (not a standard deviation).
struct ModelParameters {
  // E_S | E_L
  double beta_e0 = 0.0;
  double beta_e1 = 0.0;
  double theta_e = 1.0;
  // P_L | D, N_sub, E_L
  double beta_pl0 = 0.0;
  double beta_pl1 = 0.0;  // scalar weight on D_sub . D
  double beta_pl2 = 0.0;  // popularity
  double beta_pl3 = 0.0;  // engagement
  // S | D, E_L, M_L (no intercept)
  Vec4 beta_s1{};
  double beta_s2 = 0.0;
  Vec3 beta_s3{};
  // P_S | S, P_L, N_sub, E_S
  double beta_ps0 = 0.0;
  Vec4 beta_ps1{};  // per-axis weight on S * D_sub
  double beta_ps2 = 0.0;  // retention
  double beta_ps3 = 0.0;  // popularity
  double beta_ps4 = 0.0;  // engagement
  // I | P_S, E_S
  double beta_i0 = 0.0;
  Vec4 beta_i1{};  // per-axis weight on P_S . D_sub
  double beta_i2 = 0.0;
  // A | S, I, M_S, M_L, E_S
  double beta_a0 = 0.0;
  double beta_a1 = 0.0;
  double beta_a2 = 0.0;
  Vec3 beta_a3{};
  Vec3 beta_a4{};
  double beta_a5 = 0.0;

  bool all_finite() const;
};

/// Per-user latent variables: sociodemographics D and sympathy S.
struct LatentState {
  std::vector<Vec4> d;
  std::vector<double> s;

  std::size_t size() const { return s.size(); }
};

/// Fixed prior settings. var_s is the sympathy prior variance (a regime
/// knob, never learned); popularity coefficients get a positive prior
/// mean, everything else is centered at zero.
struct Hyperparameters {
  double var_s = 1.0;
  double prior_mean_popularity = 1.0;
  double prior_var = 1.0;
  double prior_mean_default = 0.0;

  void validate() const;
};

/// Which variable groups are present. Removing a group deletes its
/// nodes and every edge incident to them; used by the ablation runner.
struct ModelStructure {
  bool engagement = true;    // E_L, E_S
  bool interaction = true;   // I
  bool media = true;         // M_L, M_S
  bool demographics = true;  // latent D

  bool full() const {
    return engagement && interaction && media && demographics;
  }
  std::size_t latents_per_user() const { return demographics ? 5 : 1; }
};

struct Dataset {
  SubredditCatalog catalog;
  std::vector<UserObservation> users;

  std::size_t n_users() const { return users.size(); }
  /// Cross-checks users against the catalog (bit-vector lengths, binary
  /// fields, unique ids, finite values). Throws std::invalid_argument.
  void validate() const;
};

}  // namespace climact
