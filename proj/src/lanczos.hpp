#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace fluxsim {

struct LanczosResult {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column per eigenvalue
  int n_converged = 0;
};

// Lowest k eigenpairs of a real symmetric sparse matrix by Lanczos with full
// reorthogonalization.  Deterministic (fixed internal start vector seed).
LanczosResult lanczos_lowest(const Eigen::SparseMatrix<double>& a, int k,
                             int max_krylov = 0, double tol = 1e-7);

}  // namespace fluxsim
