#pragma once

#include <iosfwd>
#include <string>

#include "config.hpp"

namespace ergomean::cli {

// Validates, runs, and writes the CSV/JSON artifacts into out_dir.
// Exit codes: 0 all configured assertions pass, 1 numeric/assertion failure,
// 2 config error. Deterministic given the config (the CSV bytes in
// particular; the metadata JSON carries wall-clock time).
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                   std::ostream& log, std::ostream& err);

}  // namespace ergomean::cli
