#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace fluxsim {

// One compound-junction SQUID: the external flux phi_cjj_x tunes the
// effective Josephson energy E_J^eff = E_J * cos(phi_cjj_x / 2), and phi_q_x
// biases the main loop (phi_q_x = pi gives a symmetric double well).
struct Junction {
  double ej_over_h_ghz = 0.0;
  double phi_cjj_x = 0.0;  // radians
  double phi_q_x = 0.0;    // radians
};

// Physical description of N coupled flux qubits.  Either the capacitance
// matrix (fF) or the charging-energy matrix E_C/h (GHz) may be given, and
// likewise for the inductance (nH) / inductive-energy (GHz) matrix.
struct CircuitSpec {
  int n_qubits = 0;
  Eigen::MatrixXd capacitance_ff;  // empty if ec_ghz is given
  Eigen::MatrixXd ec_ghz;          // empty if capacitance_ff is given
  Eigen::MatrixXd inductance_nh;   // empty if el_ghz is given
  Eigen::MatrixXd el_ghz;          // empty if inductance_nh is given
  std::vector<Junction> junctions;

  // Throws std::invalid_argument naming the offending field on violation.
  void validate() const;
};

// Dimensionless-Hamiltonian parameters, all energies as E/h in GHz:
//   H/h = 4 q^T ec q + 1/2 phi^T el phi - sum_k ej_eff[k] cos((S phi)_k + phi_q_x[k])
// s_scale is the symmetric matrix S of the canonical transformation
// (identity until canonical_transform has been applied).
struct HamiltonianParams {
  Eigen::MatrixXd ec_ghz;
  Eigen::MatrixXd el_ghz;
  Eigen::VectorXd ej_eff_ghz;
  Eigen::VectorXd phi_q_x;
  Eigen::MatrixXd s_scale;
  bool s_applied = false;

  int n() const { return static_cast<int>(ej_eff_ghz.size()); }
};

// Symmetric positive-definite matrix square root via eigendecomposition.
// Eigenvalues below 1e-12 * lambda_max are rejected.
Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m,
                               const std::string& name = "matrix");

HamiltonianParams build_params(const CircuitSpec& spec);

// Default E_C0: mean of the diagonal of E_C/h.
double default_ec0(const HamiltonianParams& params);

// Applies q -> S q, phi -> S^{-1} phi with S = (E_C/E_C0)^{1/2}; the kinetic
// term becomes 4 E_C0 q^T q and the inductive matrix E_L' = S^T E_L S.
HamiltonianParams canonical_transform(const HamiltonianParams& params,
                                      double ec0_ghz);

// U(phi)/h in GHz, exact (no small-S expansion).
double potential_energy(const HamiltonianParams& params,
                        const Eigen::VectorXd& phi);

// dU/dphi in GHz.
Eigen::VectorXd potential_gradient(const HamiltonianParams& params,
                                   const Eigen::VectorXd& phi);

struct PotentialMinimum {
  Eigen::VectorXd phi;
  double value_ghz = 0.0;
  bool converged = true;
  // All distinct local minima found by the multi-start search, by ascending
  // value; phi/value above correspond to local_minima.front().
  std::vector<Eigen::VectorXd> local_minima;
  std::vector<double> local_values_ghz;
};

// Global minimum of U over R^N by multi-start descent seeded from the lattice
// of per-qubit well locations.
PotentialMinimum potential_minimum(const HamiltonianParams& params);

}  // namespace fluxsim
