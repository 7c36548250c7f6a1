#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "climact/fit.hpp"
#include "climact/types.hpp"

namespace climact {

/// Sympathy posterior summary of one user, kept next to the observed
/// activation bit for the split histograms.
struct SympathyEntry {
  std::string user_id;
  double mean = 0.0;
  int activated = 0;
};

/// Everything a fit run writes to its JSON document; also what report
/// reads back.
struct FitDocument {
  double var_s = 1.0;
  std::string variant = "full";  // "full" or "no_<group>"
  std::size_t best_restart = 0;
  std::vector<RestartRecord> restarts;
  std::vector<ParamSummary> parameters;
  std::vector<double> elbo_trace;
  std::vector<SympathyEntry> sympathy;
  double accuracy_mean = 0.0;
  double accuracy_sd = 0.0;
};

FitDocument make_fit_document(const FitResult& result, const Dataset& data,
                              const std::string& variant,
                              double accuracy_mean, double accuracy_sd);

std::string fit_document_to_json(const FitDocument& doc);
FitDocument fit_document_from_json(const std::string& text,
                                   const std::string& context);

/// Model parameters as a named-field JSON object. Missing coefficients
/// default to 0 (theta_E to 1); unknown keys are rejected.
ModelParameters params_from_json(const std::string& text,
                                 const std::string& context);
std::string params_to_json(const ModelParameters& params);

/// FNV-1a digest of a file, as fixed-width hex. Used in run manifests.
std::string file_digest(const std::string& path);

}  // namespace climact
