#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "climact/types.hpp"

namespace climact {

/// Distribution of the media features in synthetic data.
struct MediaGenerator {
  enum class Kind { Normal, Constant };
  Kind kind = Kind::Normal;
  double mean = 0.0;
  double sd = 1.0;
  Vec3 values{};  // Constant: per-theme values

  /// Parses "normal", "normal:MEAN,SD", "constant:V" or
  /// "constant:V1,V2,V3". Throws std::invalid_argument on anything else.
  static MediaGenerator parse(const std::string& spec);
};

/// Ancestral sampling of n_users users from known parameters. Each user
/// draws from its own seed-derived stream, so output is bit-identical
/// across runs and thread counts.
std::pair<std::vector<UserObservation>, LatentState> forward_sample(
    const ModelParameters& params, const SubredditCatalog& catalog,
    const Hyperparameters& hyper, std::size_t n_users,
    const MediaGenerator& media, std::uint64_t seed);

}  // namespace climact
