#include "fluxsim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lanczos.hpp"

namespace fluxsim {

void FluxGrid::validate() const {
  if (points_per_dim < 16) {
    throw std::invalid_argument("FluxGrid: points_per_dim must be >= 16");
  }
  if (!(half_width > 0.0)) {
    throw std::invalid_argument("FluxGrid: half_width must be positive");
  }
  if (dim < 1 || dim > 2) {
    throw std::invalid_argument("FluxGrid: only 1 or 2 dimensions supported");
  }
}

FluxGrid default_grid(int dim) {
  FluxGrid g;
  g.dim = dim;
  g.half_width = 3.0;
  g.points_per_dim = 201;
  return g;
}

Eigen::SparseMatrix<double> build_hamiltonian_matrix(
    const HamiltonianParams& params, const FluxGrid& grid) {
  grid.validate();
  const int n = params.n();
  if (n != grid.dim) {
    throw std::invalid_argument("build_hamiltonian_matrix: dimension mismatch");
  }
  const int p = grid.points_per_dim;
  const double d = grid.spacing();
  const double inv_d2 = 1.0 / (d * d);
  const long total = grid.total_points();

  std::vector<Eigen::Triplet<double>> trip;
  if (n == 1) {
    trip.reserve(3 * total);
    const double ec = params.ec_ghz(0, 0);
    Eigen::VectorXd phi(1);
    for (int i = 0; i < p; ++i) {
      phi[0] = grid.coord(i);
      trip.emplace_back(i, i, 8.0 * ec * inv_d2 + potential_energy(params, phi));
      if (i + 1 < p) {
        trip.emplace_back(i, i + 1, -4.0 * ec * inv_d2);
        trip.emplace_back(i + 1, i, -4.0 * ec * inv_d2);
      }
    }
  } else {
    trip.reserve(9 * total);
    const double ec0 = params.ec_ghz(0, 0);
    const double ec1 = params.ec_ghz(1, 1);
    const double ec01 = params.ec_ghz(0, 1);
    Eigen::VectorXd phi(2);
    for (int i0 = 0; i0 < p; ++i0) {
      phi[0] = grid.coord(i0);
      for (int i1 = 0; i1 < p; ++i1) {
        phi[1] = grid.coord(i1);
        const long row = static_cast<long>(i0) * p + i1;
        trip.emplace_back(row, row,
                          8.0 * (ec0 + ec1) * inv_d2 +
                              potential_energy(params, phi));
        if (i0 + 1 < p) trip.emplace_back(row, row + p, -4.0 * ec0 * inv_d2);
        if (i0 > 0) trip.emplace_back(row, row - p, -4.0 * ec0 * inv_d2);
        if (i1 + 1 < p) trip.emplace_back(row, row + 1, -4.0 * ec1 * inv_d2);
        if (i1 > 0) trip.emplace_back(row, row - 1, -4.0 * ec1 * inv_d2);
        // cross term 8 ec01 q0 q1 = -8 ec01 D0 D1 (product of first-derivative
        // stencils, keeps the matrix real symmetric)
        for (int s0 : {-1, 1}) {
          for (int s1 : {-1, 1}) {
            const int j0 = i0 + s0;
            const int j1 = i1 + s1;
            if (j0 < 0 || j0 >= p || j1 < 0 || j1 >= p) continue;
            const long col = static_cast<long>(j0) * p + j1;
            trip.emplace_back(row, col,
                              -8.0 * ec01 * s0 * s1 * 0.25 * inv_d2);
          }
        }
      }
    }
  }
  Eigen::SparseMatrix<double> h(total, total);
  h.setFromTriplets(trip.begin(), trip.end());
  return h;
}

namespace {

// Deterministic sign convention: positive value at the first grid point
// (row-major order) where the state has dominant support.
void fix_sign(Eigen::VectorXd& v) {
  const double peak = v.cwiseAbs().maxCoeff();
  for (long i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) >= 0.5 * peak) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

}  // namespace

SpectralResult solve_spectrum(const HamiltonianParams& params,
                              const FluxGrid& grid, int n_states) {
  grid.validate();
  if (n_states < 1 || n_states > 64) {
    throw std::invalid_argument("solve_spectrum: n_states must be in [1, 64]");
  }
  const auto pm = potential_minimum(params);
  const double margin = 1.0;
  for (const auto& m : pm.local_minima) {
    for (int k = 0; k < params.n(); ++k) {
      if (std::abs(m[k]) > grid.half_width - margin) {
        throw std::invalid_argument(
            "solve_spectrum: potential minimum at phi_" + std::to_string(k) +
            " = " + std::to_string(m[k]) +
            " is within margin 1.0 of the grid boundary (half_width " +
            std::to_string(grid.half_width) + ")");
      }
    }
  }

  const auto h = build_hamiltonian_matrix(params, grid);
  SpectralResult out;
  out.grid = grid;
  out.params = params;
  out.u_min_ghz = pm.value_ghz;

  const double norm = std::pow(grid.spacing(), -0.5 * grid.dim);
  if (grid.dim == 1) {
    Eigen::MatrixXd dense(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    out.n_converged = n_states;
    out.energies_ghz.resize(n_states);
    out.states.resize(h.rows(), n_states);
    for (int i = 0; i < n_states; ++i) {
      out.energies_ghz[i] = es.eigenvalues()[i] - pm.value_ghz;
      out.states.col(i) = es.eigenvectors().col(i) * norm;
      Eigen::VectorXd c = out.states.col(i);
      fix_sign(c);
      out.states.col(i) = c;
    }
  } else {
    const auto lr = lanczos_lowest(h, n_states);
    if (lr.n_converged < n_states) {
      throw std::runtime_error(
          "solve_spectrum: eigensolver converged only " +
          std::to_string(lr.n_converged) + " of " + std::to_string(n_states) +
          " requested states");
    }
    out.n_converged = lr.n_converged;
    out.energies_ghz.resize(out.n_converged);
    out.states.resize(h.rows(), out.n_converged);
    for (int i = 0; i < out.n_converged; ++i) {
      out.energies_ghz[i] = lr.eigenvalues[i] - pm.value_ghz;
      Eigen::VectorXd c = lr.eigenvectors.col(i) * norm;
      fix_sign(c);
      out.states.col(i) = c;
    }
  }
  return out;
}

double thermal_average_energy(const SpectralResult& spec,
                              double beta_tilde_ns) {
  if (spec.n_converged < 1) {
    throw std::invalid_argument("thermal_average_energy: no converged levels");
  }
  const double e0 = spec.energies_ghz.front();
  double z = 0.0, ez = 0.0;
  for (int i = 0; i < spec.n_converged; ++i) {
    const double w = std::exp(-beta_tilde_ns * (spec.energies_ghz[i] - e0));
    z += w;
    ez += spec.energies_ghz[i] * w;
  }
  const double w_top = std::exp(
      -beta_tilde_ns * (spec.energies_ghz[spec.n_converged - 1] - e0));
  if (w_top >= 1e-10 * z) {
    const double e_top = spec.energies_ghz[spec.n_converged - 1];
    const double e_needed = e0 + std::log(1e10 * z) / beta_tilde_ns;
    const double per_level = (e_top - e0) / std::max(1, spec.n_converged - 1);
    const long n_needed = static_cast<long>(
        std::ceil((e_needed - e0) / std::max(per_level, 1e-12)));
    throw std::invalid_argument(
        "thermal_average_energy: truncation criterion unmet; highest retained "
        "level " + std::to_string(e_top) + " GHz carries weight " +
        std::to_string(w_top / z) + " of Z, need levels up to ~" +
        std::to_string(e_needed) + " GHz (roughly " +
        std::to_string(n_needed) + " levels)");
  }
  return ez / z;
}

std::complex<double> matrix_element(const SpectralResult& spec,
                                    FluxOperator op, int axis,
                                    const Eigen::VectorXd& bra,
                                    const Eigen::VectorXd& ket) {
  const FluxGrid& g = spec.grid;
  if (axis < 0 || axis >= g.dim) {
    throw std::invalid_argument("matrix_element: axis out of range");
  }
  const int p = g.points_per_dim;
  const double d = g.spacing();
  const double cell = std::pow(d, g.dim);

  auto coord_of = [&](long idx) -> double {
    if (g.dim == 1) return g.coord(static_cast<int>(idx));
    const int i0 = static_cast<int>(idx / p);
    const int i1 = static_cast<int>(idx % p);
    return g.coord(axis == 0 ? i0 : i1);
  };

  if (op == FluxOperator::flux || op == FluxOperator::sin_scaled_flux) {
    const double skk = spec.params.s_scale(axis, axis);
    double acc = 0.0;
    for (long i = 0; i < bra.size(); ++i) {
      const double x = coord_of(i);
      const double val = (op == FluxOperator::flux) ? x : std::sin(skk * x);
      acc += bra[i] * val * ket[i];
    }
    return {acc * cell, 0.0};
  }
  if (op == FluxOperator::charge) {
    // q = -i d/dphi, central differences, Dirichlet boundaries
    const long stride = (g.dim == 1) ? 1 : (axis == 0 ? p : 1);
    const long total = bra.size();
    double acc = 0.0;
    for (long i = 0; i < total; ++i) {
      // neighbor validity along the chosen axis
      long lo = i - stride, hi = i + stride;
      bool has_lo, has_hi;
      if (g.dim == 1) {
        has_lo = i > 0;
        has_hi = i + 1 < total;
      } else if (axis == 0) {
        has_lo = (i / p) > 0;
        has_hi = (i / p) + 1 < p;
      } else {
        has_lo = (i % p) > 0;
        has_hi = (i % p) + 1 < p;
      }
      const double dpsi = ((has_hi ? ket[hi] : 0.0) -
                           (has_lo ? ket[lo] : 0.0)) / (2.0 * d);
      acc += bra[i] * dpsi;
    }
    return {0.0, -acc * cell};  // -i * real derivative integral
  }
  throw std::invalid_argument("matrix_element: unknown operator kind");
}

std::complex<double> matrix_element(const SpectralResult& spec,
                                    FluxOperator op, int axis, int i, int j) {
  if (i < 0 || j < 0 || i >= spec.n_converged || j >= spec.n_converged) {
    throw std::invalid_argument("matrix_element: state index out of range");
  }
  return matrix_element(spec, op, axis, spec.states.col(i), spec.states.col(j));
}

namespace {

double parity_defect(const Eigen::VectorXd& v, int p, int sign, double d) {
  // || psi(phi) - sign*psi(-phi) ||_{L2}
  double acc = 0.0;
  for (int i = 0; i < p; ++i) {
    const double diff = v[i] - sign * v[p - 1 - i];
    acc += diff * diff;
  }
  return std::sqrt(acc * d);
}

}  // namespace

ComputationalBasis computational_basis(const SpectralResult& spec) {
  if (spec.grid.dim != 1) {
    throw std::invalid_argument(
        "computational_basis: requires a single-qubit result");
  }
  if (spec.n_converged < 2) {
    throw std::invalid_argument("computational_basis: need >= 2 states");
  }
  const int p = spec.grid.points_per_dim;
  const double d = spec.grid.spacing();
  const Eigen::VectorXd g = spec.states.col(0);
  const Eigen::VectorXd e = spec.states.col(1);
  // ground even, first excited odd, up to the solver tolerance
  if (parity_defect(g, p, +1, d) > 1e-6 || parity_defect(e, p, -1, d) > 1e-6) {
    throw std::invalid_argument(
        "computational_basis: states are not parity-paired "
        "(potential not symmetric?)");
  }
  ComputationalBasis cb;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  cb.state0 = (g + e) * inv_sqrt2;
  cb.state1 = (g - e) * inv_sqrt2;
  const double mean_phi =
      matrix_element(spec, FluxOperator::flux, 0, cb.state0, cb.state0).real();
  if (mean_phi > 0.0) std::swap(cb.state0, cb.state1);
  return cb;
}

}  // namespace fluxsim
