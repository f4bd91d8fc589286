#pragma once

#include "fluxsim/circuit.hpp"
#include "fluxsim/units.hpp"

namespace fluxsim::testing {

// Flux qubit with E_C/h = 0.124, E_L/h = 704, E_J/h = 1600 GHz and
// phi_cjj^x = 0.685550 pi (effective Josephson energy ~758.6 GHz).
inline CircuitSpec table_qubit(double phi_q_over_pi = 1.0) {
  CircuitSpec s;
  s.n_qubits = 1;
  s.ec_ghz = Eigen::MatrixXd::Constant(1, 1, 0.124);
  s.el_ghz = Eigen::MatrixXd::Constant(1, 1, 704.0);
  s.junctions = {{1600.0, 0.685550 * units::pi, phi_q_over_pi * units::pi}};
  return s;
}

// Two identical such qubits, capacitively coupled; the diagonal keeps
// E_C/h = 0.124 GHz.
inline CircuitSpec coupled_pair(double c_diag_ff, double cc_ff,
                                double tilt1 = 0.0, double tilt2 = 0.0) {
  CircuitSpec s;
  s.n_qubits = 2;
  s.capacitance_ff.resize(2, 2);
  s.capacitance_ff << c_diag_ff, -cc_ff, -cc_ff, c_diag_ff;
  s.el_ghz = 704.0 * Eigen::MatrixXd::Identity(2, 2);
  s.junctions = {{1600.0, 0.685550 * units::pi, units::pi + tilt1},
                 {1600.0, 0.685550 * units::pi, units::pi + tilt2}};
  return s;
}

inline CircuitSpec weak_pair() { return coupled_pair(156.849082343, 10.0); }

// tilts delta_q^x / 2pi = 1e-4 and 2e-4
inline CircuitSpec strong_pair(double tilt1 = 2.0e-4 * units::pi,
                               double tilt2 = 4.0e-4 * units::pi) {
  return coupled_pair(208.169248970, 104.0, tilt1, tilt2);
}

}  // namespace fluxsim::testing
