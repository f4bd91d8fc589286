#include "fluxsim/qubit_model.hpp"

#include <cmath>
#include <stdexcept>

#include "fluxsim/units.hpp"

namespace fluxsim {

namespace {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;

const std::complex<double> kI{0.0, 1.0};

Matrix2cd pauli(int axis) {
  Matrix2cd m = Matrix2cd::Zero();
  switch (axis) {
    case 0: m << 0, 1, 1, 0; break;
    case 1: m << 0, -kI, kI, 0; break;
    case 2: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: axis must be 0..2");
  }
  return m;
}

MatrixXcd kron_at(const Matrix2cd& op, int k, int n) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int j = 0; j < n; ++j) {
    const MatrixXcd& factor =
        (j == k) ? static_cast<MatrixXcd>(op)
                 : static_cast<MatrixXcd>(Matrix2cd::Identity());
    MatrixXcd next(out.rows() * factor.rows(), out.cols() * factor.cols());
    for (long r = 0; r < out.rows(); ++r) {
      for (long c = 0; c < out.cols(); ++c) {
        next.block(r * factor.rows(), c * factor.cols(), factor.rows(),
                   factor.cols()) = out(r, c) * factor;
      }
    }
    out = next;
  }
  return out;
}

// Projection of a single-qubit grid operator onto a two-state basis.
Eigen::Matrix2cd project_operator(const SpectralResult& spec, FluxOperator op,
                                  const Eigen::VectorXd& b0,
                                  const Eigen::VectorXd& b1) {
  Eigen::Matrix2cd m;
  m(0, 0) = matrix_element(spec, op, 0, b0, b0);
  m(0, 1) = matrix_element(spec, op, 0, b0, b1);
  m(1, 0) = matrix_element(spec, op, 0, b1, b0);
  m(1, 1) = matrix_element(spec, op, 0, b1, b1);
  return m;
}

// Pauli decomposition of a Hermitian 2x2 traceless-part matrix: returns the
// coefficients c such that M = (tr M/2) I + sum_i c_i P_i.
Eigen::Vector3d pauli_coefficients(const Eigen::Matrix2cd& m) {
  Eigen::Vector3d c;
  for (int i = 0; i < 3; ++i) {
    c[i] = 0.5 * (pauli(i).adjoint() * m).trace().real();
  }
  return c;
}

}  // namespace

Eigen::MatrixXcd QubitModel::dense() const {
  const int n = n_qubits;
  const long dim = 1L << n;
  MatrixXcd h = MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < n; ++k) {
    if (basis == BasisTag::well) {
      h -= 0.5 * delta_ghz[k] * kron_at(pauli(0), k, n);
      h -= 0.5 * epsilon_ghz[k] * kron_at(pauli(2), k, n);
    } else {
      h -= 0.5 * delta_ghz[k] * kron_at(pauli(2), k, n);
    }
  }
  for (const auto& pc : couplings) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (pc.beta_ghz(i, j) == 0.0) continue;
        h += pc.beta_ghz(i, j) *
             (kron_at(pauli(i), pc.k, n) * kron_at(pauli(j), pc.l, n));
      }
    }
  }
  return h;
}

bool QubitModel::is_tim() const {
  // tolerance well below any physical coupling in scope
  const double tol = 1e-12;
  for (const auto& pc : couplings) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if ((i != 2 || j != 2) && std::abs(pc.beta_ghz(i, j)) > tol) {
          return false;
        }
      }
    }
  }
  return true;
}

void QubitModel::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("QubitModel: empty model");
  if (delta_ghz.size() != n_qubits || epsilon_ghz.size() != n_qubits) {
    throw std::invalid_argument("QubitModel: field vector size mismatch");
  }
  for (int k = 0; k < n_qubits; ++k) {
    if (delta_ghz[k] < 0.0) {
      throw std::invalid_argument("QubitModel: tunnel couplings must be >= 0");
    }
  }
  if (basis == BasisTag::energy && epsilon_ghz.cwiseAbs().maxCoeff() > 0.0) {
    throw std::invalid_argument(
        "QubitModel: energy-basis models carry no epsilon fields");
  }
}

int beta_rank(const Eigen::Matrix3d& beta, double tol) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(beta);
  const double top = svd.singularValues().maxCoeff();
  if (top <= 0.0) return 0;
  int r = 0;
  for (int i = 0; i < 3; ++i) {
    if (svd.singularValues()[i] > tol * top) ++r;
  }
  return r;
}

namespace {

struct WellBasisData {
  Eigen::VectorXd b0, b1;
  double delta;        // E_e - E_g
  double mean_energy;  // (E_g + E_e)/2 relative to the qubit's u_min
};

WellBasisData well_data(const SpectralResult& q) {
  const auto cb = computational_basis(q);
  WellBasisData w;
  w.b0 = cb.state0;
  w.b1 = cb.state1;
  w.delta = q.energies_ghz[1] - q.energies_ghz[0];
  w.mean_energy = 0.5 * (q.energies_ghz[0] + q.energies_ghz[1]);
  return w;
}

}  // namespace

QubitModel project_two_qubit(const SpectralResult& q1,
                             const SpectralResult& q2, double ec12_ghz,
                             double el12_ghz, double delta_q1_x,
                             double delta_q2_x) {
  const WellBasisData w1 = well_data(q1);
  const WellBasisData w2 = well_data(q2);

  QubitModel m;
  m.n_qubits = 2;
  m.basis = BasisTag::well;
  m.delta_ghz.resize(2);
  m.epsilon_ghz.resize(2);
  m.delta_ghz << w1.delta, w2.delta;

  // Local fields from the first-order tilt expansion:
  // -E_J^eff delta_q^x sin(phi) projects to -(eps/2) Z with
  // eps = 2 E_J^eff delta_q^x <0|sin(phi)|0>.
  const double sin1 =
      matrix_element(q1, FluxOperator::sin_scaled_flux, 0, w1.b0, w1.b0).real();
  const double sin2 =
      matrix_element(q2, FluxOperator::sin_scaled_flux, 0, w2.b0, w2.b0).real();
  m.epsilon_ghz << 2.0 * q1.params.ej_eff_ghz[0] * delta_q1_x * sin1,
      2.0 * q2.params.ej_eff_ghz[0] * delta_q2_x * sin2;

  // Hamiltonian-level projection of V = 8 ec12 q1 q2 + el12 phi1 phi2.
  const Eigen::Matrix2cd pq1 =
      project_operator(q1, FluxOperator::charge, w1.b0, w1.b1);
  const Eigen::Matrix2cd pq2 =
      project_operator(q2, FluxOperator::charge, w2.b0, w2.b1);
  const Eigen::Matrix2cd pf1 =
      project_operator(q1, FluxOperator::flux, w1.b0, w1.b1);
  const Eigen::Matrix2cd pf2 =
      project_operator(q2, FluxOperator::flux, w2.b0, w2.b1);

  const Eigen::Vector3d cq1 = pauli_coefficients(pq1);
  const Eigen::Vector3d cq2 = pauli_coefficients(pq2);
  const Eigen::Vector3d cf1 = pauli_coefficients(pf1);
  const Eigen::Vector3d cf2 = pauli_coefficients(pf2);

  PairCoupling pc;
  pc.k = 0;
  pc.l = 1;
  pc.beta_ghz = 8.0 * ec12_ghz * cq1 * cq2.transpose() +
                el12_ghz * cf1 * cf2.transpose();
  m.couplings.push_back(pc);
  m.validate();
  return m;
}

QubitModel project_symmetric_energy_basis(const SpectralResult& q1,
                                          const SpectralResult& q2,
                                          double ec12_ghz, double el12_ghz) {
  for (const SpectralResult* q : {&q1, &q2}) {
    const double asym = std::abs(
        std::remainder(q->params.phi_q_x[0] - units::pi, 2.0 * units::pi));
    if (asym > 1e-12) {
      throw std::invalid_argument(
          "project_symmetric_energy_basis: requires symmetric qubits "
          "(phi_q_x = pi)");
    }
  }
  // computational_basis also enforces parity pairing
  (void)computational_basis(q1);
  (void)computational_basis(q2);

  QubitModel m;
  m.n_qubits = 2;
  m.basis = BasisTag::energy;
  m.delta_ghz.resize(2);
  m.epsilon_ghz = Eigen::VectorXd::Zero(2);
  m.delta_ghz << q1.energies_ghz[1] - q1.energies_ghz[0],
      q2.energies_ghz[1] - q2.energies_ghz[0];

  const Eigen::Matrix2cd pq1 =
      project_operator(q1, FluxOperator::charge, q1.states.col(0),
                       q1.states.col(1));
  const Eigen::Matrix2cd pq2 =
      project_operator(q2, FluxOperator::charge, q2.states.col(0),
                       q2.states.col(1));
  const Eigen::Matrix2cd pf1 = project_operator(
      q1, FluxOperator::flux, q1.states.col(0), q1.states.col(1));
  const Eigen::Matrix2cd pf2 = project_operator(
      q2, FluxOperator::flux, q2.states.col(0), q2.states.col(1));

  PairCoupling pc;
  pc.k = 0;
  pc.l = 1;
  pc.beta_ghz = 8.0 * ec12_ghz *
                    pauli_coefficients(pq1) * pauli_coefficients(pq2).transpose() +
                el12_ghz *
                    pauli_coefficients(pf1) * pauli_coefficients(pf2).transpose();
  m.couplings.push_back(pc);
  m.validate();
  return m;
}

HamiltonianParams tim_single_qubit_params(const HamiltonianParams& transformed,
                                          int k, TimCosScaling scaling) {
  if (!transformed.s_applied) {
    throw std::invalid_argument(
        "tim_single_qubit_params: canonical transformation required first");
  }
  if (k < 0 || k >= transformed.n()) {
    throw std::invalid_argument("tim_single_qubit_params: qubit index");
  }
  HamiltonianParams p;
  p.ec_ghz = transformed.ec_ghz.block(k, k, 1, 1);
  p.el_ghz = transformed.el_ghz.block(k, k, 1, 1);
  p.ej_eff_ghz = transformed.ej_eff_ghz.segment(k, 1);
  p.phi_q_x = transformed.phi_q_x.segment(k, 1);
  p.s_scale.resize(1, 1);
  p.s_scale(0, 0) = (scaling == TimCosScaling::scaled)
                        ? transformed.s_scale(k, k)
                        : 1.0;
  p.s_applied = true;
  return p;
}

QubitModel build_tim(const std::vector<SpectralResult>& qubit_results,
                     const HamiltonianParams& transformed) {
  if (!transformed.s_applied) {
    throw std::invalid_argument(
        "build_tim: parameters must be canonically transformed");
  }
  const int n = transformed.n();
  if (static_cast<int>(qubit_results.size()) != n) {
    throw std::invalid_argument("build_tim: need one spectral result per qubit");
  }

  QubitModel m;
  m.n_qubits = n;
  m.basis = BasisTag::well;
  m.delta_ghz.resize(n);
  m.epsilon_ghz.resize(n);

  std::vector<double> mval(n), sval(n);
  for (int k = 0; k < n; ++k) {
    const auto& q = qubit_results[k];
    const auto cb = computational_basis(q);
    m.delta_ghz[k] = q.energies_ghz[1] - q.energies_ghz[0];
    mval[k] =
        matrix_element(q, FluxOperator::flux, 0, cb.state0, cb.state0).real();
    sval[k] = matrix_element(q, FluxOperator::sin_scaled_flux, 0, cb.state0,
                             cb.state0)
                  .real();
    const double delta_qx = transformed.phi_q_x[k] - units::pi;
    m.epsilon_ghz[k] = 2.0 * transformed.ej_eff_ghz[k] * delta_qx * sval[k];
  }

  // J_kl Z_k Z_l: inductive term (E_L')_kl m_k m_l plus the junction-mediated
  // term from both orderings, -E_Jk S_kl s_k m_l - E_Jl S_lk s_l m_k.
  for (int k = 0; k < n; ++k) {
    for (int l = k + 1; l < n; ++l) {
      const double j_ind = transformed.el_ghz(k, l) * mval[k] * mval[l];
      const double j_jj =
          -transformed.ej_eff_ghz[k] * transformed.s_scale(k, l) * sval[k] *
              mval[l] -
          transformed.ej_eff_ghz[l] * transformed.s_scale(l, k) * sval[l] *
              mval[k];
      const double j = j_ind + j_jj;
      if (j == 0.0) continue;
      PairCoupling pc;
      pc.k = k;
      pc.l = l;
      pc.beta_ghz(2, 2) = j;
      m.couplings.push_back(pc);
    }
  }
  m.validate();
  return m;
}

double tim_energy_offset(const std::vector<SpectralResult>& qubit_results,
                         const HamiltonianParams& transformed) {
  double acc = 0.0;
  for (const auto& q : qubit_results) {
    acc += 0.5 * (q.energies_ghz[0] + q.energies_ghz[1]) + q.u_min_ghz;
  }
  return acc - potential_minimum(transformed).value_ghz;
}

}  // namespace fluxsim
