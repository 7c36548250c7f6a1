#pragma once

#include <string>

namespace climact {

/// Renders coefficients.csv, errorbars.svg, sympathy_hist.csv/.svg and,
/// when the input directory carries an ablation.csv, ablation.csv/.svg
/// into out_dir. Reads every fit_*.json under in_dir. Throws
/// std::invalid_argument when there is nothing to report or output is
/// unwritable.
void write_report(const std::string& in_dir, const std::string& out_dir);

}  // namespace climact
