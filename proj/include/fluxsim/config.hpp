#pragma once

#include <map>
#include <string>
#include <vector>

#include "fluxsim/circuit.hpp"
#include "fluxsim/pimc.hpp"
#include "fluxsim/qubit_model.hpp"

namespace fluxsim {

// Key/value experiment configuration with matrix blocks:
//   key = 3.5                 scalar
//   key = word                enumeration value
//   key = [1 2 3]             vector
//   key = [                   matrix, one row per line
//     1  0
//     0  1
//   ]
// '#' starts a comment.  Flux angles are given in units of pi
// (phi_cjj_x_over_pi, phi_q_x_over_pi).
struct RawConfig {
  std::map<std::string, std::vector<std::vector<double>>> numbers;
  std::map<std::string, std::string> words;

  bool has(const std::string& key) const;
};

RawConfig parse_raw_config(const std::string& text);
RawConfig load_raw_config(const std::string& path);

struct ExperimentSpec {
  std::string pipeline;
  double temperature_ghz = 0.0;
  double temperature2_ghz = 0.0;  // optional second temperature (figure4)
  CircuitSpec circuit;
  std::vector<int> sweep_m;       // flux-basis PIMC Trotter sweep
  std::vector<int> tim_sweep_m;   // TIM PIMC Trotter sweep
  std::vector<int> sweep2_m;      // sweep at the second temperature
  std::vector<double> sweep_cc_ff;  // coupling-capacitance sweep (project)
  PimcConfig pimc;                // beta_tilde/trotter_m filled per point
  int n_states = 40;
  int grid_points = 0;            // 0: per-dimension default
  double grid_half_width = 3.0;
  double ec0_ghz = 0.0;           // 0: mean of the E_C diagonal
  TimCosScaling tim_scaling = TimCosScaling::first_order;
  bool dump_samples = false;
};

// Builds the spec, accumulating every violation instead of stopping at the
// first; an empty result means the config is valid.
std::vector<std::string> validate_experiment(const RawConfig& raw,
                                             ExperimentSpec* out);

// Throws std::invalid_argument with all violations joined on failure.
ExperimentSpec parse_experiment(const RawConfig& raw);

}  // namespace fluxsim
