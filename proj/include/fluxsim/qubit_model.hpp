#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fluxsim/spectral.hpp"

namespace fluxsim {

// Pauli convention tag for an effective qubit model.  In the well basis the
// single-qubit part is -(delta/2) X - (epsilon/2) Z; in the energy basis
// (|g>, |e> of each qubit) it is -(delta/2) Z with epsilon = 0.
enum class BasisTag { well, energy };

struct PairCoupling {
  int k = 0;
  int l = 1;
  Eigen::Matrix3d beta_ghz = Eigen::Matrix3d::Zero();  // indexed X, Y, Z
};

struct QubitModel {
  int n_qubits = 0;
  Eigen::VectorXd delta_ghz;    // tunnel couplings, >= 0
  Eigen::VectorXd epsilon_ghz;  // local Z fields
  std::vector<PairCoupling> couplings;
  BasisTag basis = BasisTag::well;

  // Dense 2^N x 2^N matrix in GHz (complex; real for the models built here).
  Eigen::MatrixXcd dense() const;

  // True when every pair's beta matrix has only a ZZ entry.
  bool is_tim() const;

  void validate() const;
};

int beta_rank(const Eigen::Matrix3d& beta, double tol = 1e-12);

// Lowest-order projection of two coupled flux qubits onto the well basis
// {|0>,|1>} of each qubit.  q1/q2 must be single-qubit results solved at the
// symmetric point (phi_q_x = pi); delta_q1/2 are the flux-bias tilts
// delta_q^x = phi_q^x - pi used for the local fields.  The coupling operator
// 8*ec12 q1 q2 + el12 phi1 phi2 is projected at the Hamiltonian level, so the
// YY/ZZ coefficients carry their derived signs and prefactors.
QubitModel project_two_qubit(const SpectralResult& q1,
                             const SpectralResult& q2, double ec12_ghz,
                             double el12_ghz, double delta_q1_x = 0.0,
                             double delta_q2_x = 0.0);

// Same projection expressed in the energy basis; requires both qubits
// symmetric (no tilts).  Couplings become XX (inductive) and YY (capacitive).
QubitModel project_symmetric_energy_basis(const SpectralResult& q1,
                                          const SpectralResult& q2,
                                          double ec12_ghz, double el12_ghz);

// How the cosine argument of the per-qubit Hamiltonian H_k is scaled after
// the canonical transformation: `scaled` uses cos(S_kk phi + phi_q^x)
// literally; `first_order` drops the S_kk scaling (S_kk deviates from unity
// only at second order in the off-diagonal couplings, so this is the variant
// consistent with the first-order expansion; it is the pipeline default).
enum class TimCosScaling { scaled, first_order };

// Parameters of the k-th single-qubit Hamiltonian
//   H_k = 4 ec0 q_k^2 + (E_L')_kk/2 phi_k^2 - E_Jk^eff cos(S_kk phi_k + phi_q^x)
// extracted from canonically transformed N-qubit parameters.
HamiltonianParams tim_single_qubit_params(const HamiltonianParams& transformed,
                                          int k, TimCosScaling scaling);

// Effective transverse-field Ising model from per-qubit spectral results
// (solved from tim_single_qubit_params at the symmetric point) plus the
// transformed parameters carrying S and E_L'.  Tilts are read from
// transformed.phi_q_x.  Pair couplings include both the inductive term and
// both orderings of the junction-mediated term.
QubitModel build_tim(const std::vector<SpectralResult>& qubit_results,
                     const HamiltonianParams& transformed);

// Constant energy (GHz) to add to TIM expectation values so they compare
// directly with full-circuit energies referenced to the potential minimum:
// sum_k mean(E_g^k, E_e^k) in absolute terms minus the full potential minimum.
double tim_energy_offset(const std::vector<SpectralResult>& qubit_results,
                         const HamiltonianParams& transformed);

}  // namespace fluxsim
