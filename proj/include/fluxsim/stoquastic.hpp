#pragma once

#include <array>
#include <string>
#include <vector>

#include "fluxsim/qubit_model.hpp"

namespace fluxsim {

enum class StoqVerdict {
  stoquastic_as_given,
  curable_by_listed_transform,
  no_single_qubit_clifford_cure,
};

std::string to_string(StoqVerdict v);

// A single-qubit Clifford conjugation, represented by its action on the
// Pauli axes: P_i -> sign[i] * P_{image[i]}.  The 24 elements are the
// signed axis permutations with determinant +1.
struct CliffordRotation {
  std::array<int, 3> image{0, 1, 2};
  std::array<int, 3> sign{1, 1, 1};
  Eigen::Matrix3d rotation() const;
  std::string name() const;
};

const std::vector<CliffordRotation>& clifford_rotations();

struct StoqReport {
  StoqVerdict verdict = StoqVerdict::no_single_qubit_clifford_cure;
  // One entry per qubit describing the curing conjugation ("identity" when
  // none is needed); continuous rotations appear as "Ry(angle)" composed
  // with a Clifford name.
  std::vector<std::string> transform;
  // Model coefficients after the curing transform (valid unless the verdict
  // is no_single_qubit_clifford_cure).
  std::vector<Eigen::Vector3d> cured_fields_ghz;
  std::vector<PairCoupling> cured_couplings;
  double max_offdiag_violation_ghz = 0.0;  // for the model as given
};

// Tests the dense 2^N matrix for real entries with non-positive
// off-diagonals (within tol); if it fails, searches all per-qubit Clifford
// conjugations (24 per qubit), then the closed-form continuous cure for
// rank-1 YY couplings (Y-axis rotation plus Y->Z relabeling).
StoqReport check_stoquastic(const QubitModel& model, double tol_ghz = 1e-9);

// Dense matrix from explicit Pauli coefficients (fields f_k . (X,Y,Z) plus
// pair terms); used to verify transforms preserve the spectrum.
Eigen::MatrixXcd dense_from_coefficients(
    int n_qubits, const std::vector<Eigen::Vector3d>& fields,
    const std::vector<PairCoupling>& couplings);

}  // namespace fluxsim
