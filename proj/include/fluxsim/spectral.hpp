#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>

#include "fluxsim/circuit.hpp"

namespace fluxsim {

// Uniform grid [-half_width, half_width] per dimension, used to discretize
// the flux-basis Hamiltonian with central finite differences.
struct FluxGrid {
  double half_width = 3.0;
  int points_per_dim = 201;
  int dim = 1;

  double spacing() const {
    return 2.0 * half_width / (points_per_dim - 1);
  }
  double coord(int i) const { return -half_width + i * spacing(); }
  long total_points() const {
    long t = 1;
    for (int d = 0; d < dim; ++d) t *= points_per_dim;
    return t;
  }
  void validate() const;
};

FluxGrid default_grid(int dim);

struct SpectralResult {
  std::vector<double> energies_ghz;  // ascending, referenced to u_min
  Eigen::MatrixXd states;            // column per state, row-major grid order
  FluxGrid grid;
  int n_converged = 0;
  double u_min_ghz = 0.0;  // the subtracted zero of energy
  HamiltonianParams params;
};

// Real symmetric finite-difference Hamiltonian
//   H/h = 4 sum_kl ec_kl q_k q_l + U(phi),
// with q_k = -i d/dphi_k; diagonal kinetic terms use the second-order
// three-point stencil, cross terms the product of first-derivative stencils.
Eigen::SparseMatrix<double> build_hamiltonian_matrix(
    const HamiltonianParams& params, const FluxGrid& grid);

// Lowest n_states eigenpairs (dense solve for 1D, Lanczos with full
// reorthogonalization for 2D).  Energies are referenced to the potential
// minimum.  Throws if any potential minimum sits within margin 1.0 of the
// grid boundary.
SpectralResult solve_spectrum(const HamiltonianParams& params,
                              const FluxGrid& grid, int n_states);

// Thermal average sum E_n w_n / sum w_n over converged levels; rejects the
// call if the Boltzmann weight of the highest retained level exceeds 1e-10
// of the partition sum.
double thermal_average_energy(const SpectralResult& spec,
                              double beta_tilde_ns);

enum class FluxOperator { flux, charge, sin_scaled_flux };

// <i|O|j> on the grid for O acting on axis k: flux and sin_scaled_flux are
// diagonal, charge is -i times the central first-difference derivative.
// sin_scaled_flux applies sin(S_kk * phi_k) with S_kk from the stored params.
std::complex<double> matrix_element(const SpectralResult& spec,
                                    FluxOperator op, int axis, int i, int j);

// Same for arbitrary grid vectors (used internally and by tests).
std::complex<double> matrix_element(const SpectralResult& spec,
                                    FluxOperator op, int axis,
                                    const Eigen::VectorXd& bra,
                                    const Eigen::VectorXd& ket);

// Computational (well) basis |0> = (|g>+|e>)/sqrt(2), |1> = (|g>-|e>)/sqrt(2)
// with the sign fixed so |0> is localized in the left well (<0|phi|0> < 0).
// Requires a single-qubit symmetric double-well result.
struct ComputationalBasis {
  Eigen::VectorXd state0;
  Eigen::VectorXd state1;
};

ComputationalBasis computational_basis(const SpectralResult& spec);

}  // namespace fluxsim
