#include "lanczos.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fluxsim/rng.hpp"

namespace fluxsim {

namespace {

Eigen::VectorXd random_unit_vector(long n, std::uint64_t stream) {
  Xoshiro256 rng(0x5ca1ab1e0ddba11ULL, stream);
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
  v.normalize();
  return v;
}

// Safe lower bound on the spectrum from Gershgorin discs.
double gershgorin_lower_bound(const Eigen::SparseMatrix<double>& a) {
  const long n = a.rows();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < a.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
      if (it.row() == it.col()) {
        diag[it.row()] = it.value();
      } else {
        radius[it.row()] += std::abs(it.value());
      }
    }
  }
  return (diag - radius).minCoeff();
}

}  // namespace

// Shift-invert Lanczos with full reorthogonalization: the lowest eigenvalues
// of A map to the largest of (A - sigma I)^{-1}, with sigma below the
// spectrum, which turns the tightly clustered bottom of the spectrum into
// well-separated extremal Ritz values.
LanczosResult lanczos_lowest(const Eigen::SparseMatrix<double>& a, int k,
                             int max_krylov, double tol) {
  const long n = a.rows();
  if (k >= n) {
    throw std::invalid_argument("lanczos_lowest: k must be < matrix dimension");
  }
  if (max_krylov <= 0) {
    max_krylov = static_cast<int>(std::min<long>(n, std::max(4 * k + 80, 120)));
  }
  max_krylov = static_cast<int>(std::min<long>(max_krylov, n));

  const double scale = a.coeffs().cwiseAbs().maxCoeff();
  const double sigma = gershgorin_lower_bound(a) - 1e-3 * scale - 1.0;

  Eigen::SparseMatrix<double> shifted = a;
  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();
  shifted -= sigma * identity;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(shifted);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("lanczos_lowest: factorization failed");
  }

  Eigen::MatrixXd basis(n, max_krylov);
  std::vector<double> alpha, beta;
  basis.col(0) = random_unit_vector(n, 0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  int m = 0;
  std::uint64_t restart_stream = 1;

  auto theta_converged = [&](int mm) -> int {
    // count Ritz pairs (from the top of the inverted spectrum) whose
    // tridiagonal residual estimate is tiny
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(mm, mm);
    for (int i = 0; i < mm; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < mm) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    tri.compute(t);
    if (mm < k) return 0;
    const double b_last = beta[mm - 1];
    const double theta_top = std::abs(tri.eigenvalues()[mm - 1]);
    int good = 0;
    for (int i = 0; i < k; ++i) {
      const int col = mm - 1 - i;  // largest theta first
      const double resid = std::abs(b_last * tri.eigenvectors()(mm - 1, col));
      if (resid < 1e-10 * theta_top) ++good;
      else break;
    }
    return good;
  };

  Eigen::VectorXd w(n);
  for (m = 0; m < max_krylov; ++m) {
    w = solver.solve(basis.col(m));
    const double al = basis.col(m).dot(w);
    alpha.push_back(al);
    w -= al * basis.col(m);
    if (m > 0) w -= beta[m - 1] * basis.col(m - 1);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j <= m; ++j) {
        w -= basis.col(j).dot(w) * basis.col(j);
      }
    }
    double bn = w.norm();
    if (m + 1 == max_krylov) {
      beta.push_back(bn);
      ++m;
      break;
    }
    if (bn < 1e-14) {
      Eigen::VectorXd r = random_unit_vector(n, restart_stream++);
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j <= m; ++j) {
          r -= basis.col(j).dot(r) * basis.col(j);
        }
      }
      const double rn = r.norm();
      if (rn < 1e-12) {
        beta.push_back(0.0);
        ++m;
        break;
      }
      w = r / rn;
      bn = 0.0;  // decoupled fresh direction
    } else {
      w /= bn;
    }
    beta.push_back(bn);
    basis.col(m + 1) = w;
    if (m + 1 >= k + 2 && (m + 1) % 10 == 0 && theta_converged(m + 1) >= k) {
      ++m;
      break;
    }
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  tri.compute(t);

  LanczosResult out;
  const int kk = std::min(k, m);
  out.eigenvalues.resize(kk);
  out.eigenvectors.resize(n, kk);
  // largest theta = lowest lambda = sigma + 1/theta
  std::vector<std::pair<double, int>> order;
  for (int i = 0; i < m; ++i) {
    const double theta = tri.eigenvalues()[i];
    if (theta <= 0.0) continue;  // artifacts below the inverted spectrum
    order.push_back({sigma + 1.0 / theta, i});
  }
  std::sort(order.begin(), order.end());
  if (static_cast<int>(order.size()) < kk) {
    throw std::runtime_error("lanczos_lowest: Krylov space too small");
  }
  for (int i = 0; i < kk; ++i) {
    out.eigenvalues[i] = order[i].first;
    out.eigenvectors.col(i).noalias() =
        basis.leftCols(m) * tri.eigenvectors().col(order[i].second);
    out.eigenvectors.col(i).normalize();
  }
  // converged count from true residuals of the original matrix
  out.n_converged = 0;
  for (int i = 0; i < kk; ++i) {
    const Eigen::VectorXd v = out.eigenvectors.col(i);
    const double resid = (a * v - out.eigenvalues[i] * v).norm();
    if (resid < tol * scale) ++out.n_converged;
    else break;
  }
  return out;
}

}  // namespace fluxsim
