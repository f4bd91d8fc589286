#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fluxsim/circuit.hpp"
#include "fluxsim/qubit_model.hpp"
#include "fluxsim/stats.hpp"

namespace fluxsim {

struct PimcConfig {
  double beta_tilde_ns = 1.0;  // h*beta in ns
  int trotter_m = 2;
  long long total_iterations = 30'000'000;
  long long equilibration_iterations = 5'000'000;
  int sample_stride = 1000;
  double local_update_prob = 0.9;
  double shift_halfwidth = 0.75;
  std::uint64_t rng_seed = 1;
  int n_chains = 1;

  void validate() const;
};

// Imaginary-time path: trotter_m slices of N fluxes, periodic in the slice
// index (slice M wraps to slice 0).
struct PathConfiguration {
  Eigen::MatrixXd slices;  // M x N
};

// Dimensionless Euclidean action beta_tilde * H_c of a closed path:
//   (M / (16 beta_tilde)) sum_s (dphi_s)^T EC^{-1} (dphi_s)
//   + (beta_tilde / M) sum_s U(phi_s)/h
// with dphi_s = phi_{s+1} - phi_s and EC in GHz, beta_tilde in ns.
double classical_action(const HamiltonianParams& params,
                        const PathConfiguration& path,
                        const PimcConfig& config);

struct PathEnsembleStats {
  double mean_energy_ghz = 0.0;
  double std_error_ghz = 0.0;
  double autocorrelation_time = 1.0;  // in sample strides
  long long n_samples = 0;
  double acceptance_local = 0.0;
  double acceptance_global = 0.0;
  bool degenerate_series = false;
  std::vector<double> samples;  // per-chain concatenated raw energy samples
};

// Metropolis-Hastings sampling of the flux-basis path distribution with the
// virial energy estimator (potential referenced to the potential minimum).
// Statistics are averaged over n_chains independently seeded chains.
PathEnsembleStats run_pimc_flux(const HamiltonianParams& params,
                                const PimcConfig& config);

// Path-integral Monte Carlo for a transverse-field Ising model: M replicas
// of N classical spins with imaginary-time couplings
// J_k_perp = -(M / (2 beta_tilde)) ln tanh(beta_tilde delta_k / (2 M)).
// Requires a TIM (ZZ couplings only) with all delta_k > 0.
PathEnsembleStats run_pimc_tim(const QubitModel& model,
                               const PimcConfig& config);

double tim_j_perp(double delta_ghz, double beta_tilde_ns, int trotter_m);

}  // namespace fluxsim
