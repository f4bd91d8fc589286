#pragma once

#include <stdexcept>
#include <string>

#include "fluxsim/config.hpp"

namespace fluxsim {

struct RunOptions {
  std::string output_dir = ".";
  int threads = 0;  // 0: one worker per hardware thread, capped at 8
  // overrides (applied when >= 0 / non-zero)
  long long seed_override = -1;
  int chains_override = 0;
  std::vector<int> sweep_override;
};

// Numerical failure inside a pipeline (solver breakdown, mixing failure).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Executes the configured pipeline and writes results.json, results.csv and
// plot_data.csv into output_dir.  Throws std::invalid_argument for config
// problems and NumericalError for solver failures.
void run_experiment(const ExperimentSpec& spec, const RunOptions& options);

}  // namespace fluxsim
