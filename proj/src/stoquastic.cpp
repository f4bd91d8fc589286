#include "fluxsim/stoquastic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fluxsim/units.hpp"

namespace fluxsim {

namespace {

using Eigen::Matrix3d;
using Eigen::MatrixXcd;
using Eigen::Vector3d;

const std::complex<double> kI{0.0, 1.0};

Eigen::Matrix2cd pauli(int axis) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (axis) {
    case 0: m << 0, 1, 1, 0; break;
    case 1: m << 0, -kI, kI, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

MatrixXcd kron_at(const Eigen::Matrix2cd& op, int k, int n) {
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int j = 0; j < n; ++j) {
    const MatrixXcd factor =
        (j == k) ? MatrixXcd(op) : MatrixXcd(Eigen::Matrix2cd::Identity());
    MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (long r = 0; r < out.rows(); ++r) {
      for (long c = 0; c < out.cols(); ++c) {
        next.block(r * 2, c * 2, 2, 2) = out(r, c) * factor;
      }
    }
    out = next;
  }
  return out;
}

// max(0, largest positive real off-diagonal) + largest |imaginary part|
double stoquastic_violation(const MatrixXcd& h, double tol) {
  double worst = 0.0;
  for (long r = 0; r < h.rows(); ++r) {
    for (long c = 0; c < h.cols(); ++c) {
      const double im = std::abs(h(r, c).imag());
      if (im > tol) worst = std::max(worst, im);
      if (r != c && h(r, c).real() > tol) {
        worst = std::max(worst, h(r, c).real());
      }
    }
  }
  return worst;
}

struct Coefficients {
  int n = 0;
  std::vector<Vector3d> fields;
  std::vector<PairCoupling> couplings;
};

Coefficients from_model(const QubitModel& m) {
  Coefficients c;
  c.n = m.n_qubits;
  c.fields.resize(m.n_qubits, Vector3d::Zero());
  for (int k = 0; k < m.n_qubits; ++k) {
    if (m.basis == BasisTag::well) {
      c.fields[k][0] = -0.5 * m.delta_ghz[k];
      c.fields[k][2] = -0.5 * m.epsilon_ghz[k];
    } else {
      c.fields[k][2] = -0.5 * m.delta_ghz[k];
    }
  }
  c.couplings = m.couplings;
  return c;
}

Coefficients apply_rotations(const Coefficients& c,
                             const std::vector<Matrix3d>& rot) {
  Coefficients out = c;
  for (int k = 0; k < c.n; ++k) out.fields[k] = rot[k] * c.fields[k];
  for (auto& pc : out.couplings) {
    pc.beta_ghz = rot[pc.k] * pc.beta_ghz * rot[pc.l].transpose();
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd dense_from_coefficients(
    int n_qubits, const std::vector<Vector3d>& fields,
    const std::vector<PairCoupling>& couplings) {
  const long dim = 1L << n_qubits;
  MatrixXcd h = MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < n_qubits; ++k) {
    for (int i = 0; i < 3; ++i) {
      if (fields[k][i] != 0.0) {
        h += fields[k][i] * kron_at(pauli(i), k, n_qubits);
      }
    }
  }
  for (const auto& pc : couplings) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (pc.beta_ghz(i, j) == 0.0) continue;
        h += pc.beta_ghz(i, j) * (kron_at(pauli(i), pc.k, n_qubits) *
                                  kron_at(pauli(j), pc.l, n_qubits));
      }
    }
  }
  return h;
}

std::string to_string(StoqVerdict v) {
  switch (v) {
    case StoqVerdict::stoquastic_as_given: return "stoquastic_as_given";
    case StoqVerdict::curable_by_listed_transform:
      return "curable_by_listed_transform";
    default: return "no_single_qubit_clifford_cure";
  }
}

Eigen::Matrix3d CliffordRotation::rotation() const {
  Matrix3d r = Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) r(image[i], i) = sign[i];
  return r;
}

std::string CliffordRotation::name() const {
  static const char axes[] = "XYZ";
  std::ostringstream os;
  for (int i = 0; i < 3; ++i) {
    if (i) os << ",";
    os << axes[i] << "->" << (sign[i] > 0 ? "+" : "-") << axes[image[i]];
  }
  return os.str();
}

const std::vector<CliffordRotation>& clifford_rotations() {
  static const std::vector<CliffordRotation> table = [] {
    std::vector<CliffordRotation> out;
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) {
      for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
          for (int sz : {1, -1}) {
            CliffordRotation cr;
            cr.image = {p[0], p[1], p[2]};
            cr.sign = {sx, sy, sz};
            if (cr.rotation().determinant() > 0.5) out.push_back(cr);
          }
        }
      }
    }
    return out;
  }();
  return table;
}

StoqReport check_stoquastic(const QubitModel& model, double tol_ghz) {
  model.validate();
  const int n = model.n_qubits;
  if (n > 3) {
    throw std::invalid_argument(
        "check_stoquastic: dense construction limited to n_qubits <= 3");
  }
  const Coefficients base = from_model(model);
  StoqReport report;
  report.max_offdiag_violation_ghz =
      stoquastic_violation(dense_from_coefficients(n, base.fields,
                                                   base.couplings),
                           tol_ghz);

  auto finish = [&](StoqVerdict v, const std::vector<std::string>& names,
                    const Coefficients& cured) {
    report.verdict = v;
    report.transform = names;
    report.cured_fields_ghz = cured.fields;
    report.cured_couplings = cured.couplings;
    return report;
  };

  if (report.max_offdiag_violation_ghz <= tol_ghz) {
    return finish(StoqVerdict::stoquastic_as_given,
                  std::vector<std::string>(n, "identity"), base);
  }

  // Exhaustive search over per-qubit Clifford conjugations.
  const auto& cliffords = clifford_rotations();
  std::vector<int> pick(n, 0);
  for (;;) {
    std::vector<Matrix3d> rot(n);
    for (int k = 0; k < n; ++k) rot[k] = cliffords[pick[k]].rotation();
    const Coefficients cand = apply_rotations(base, rot);
    if (stoquastic_violation(
            dense_from_coefficients(n, cand.fields, cand.couplings),
            tol_ghz) <= tol_ghz) {
      std::vector<std::string> names;
      for (int k = 0; k < n; ++k) names.push_back(cliffords[pick[k]].name());
      return finish(StoqVerdict::curable_by_listed_transform, names, cand);
    }
    int k = 0;
    while (k < n && ++pick[k] == static_cast<int>(cliffords.size())) {
      pick[k] = 0;
      ++k;
    }
    if (k == n) break;
  }

  // Closed-form continuous cure for a pure YY coupling between two qubits:
  // rotate each field about Y into -|f| X, then relabel Y -> Z on both.
  if (n == 2 && model.couplings.size() == 1) {
    const Matrix3d& beta = model.couplings.front().beta_ghz;
    bool yy_only = beta(1, 1) != 0.0;
    for (int i = 0; i < 3 && yy_only; ++i) {
      for (int j = 0; j < 3; ++j) {
        if ((i != 1 || j != 1) && beta(i, j) != 0.0) yy_only = false;
      }
    }
    if (yy_only) {
      std::vector<Matrix3d> rot(2);
      std::vector<double> angles(2);
      for (int k = 0; k < 2; ++k) {
        const Vector3d f = base.fields[k];
        // angle mapping (f_x, 0, f_z) to (-|f|, 0, 0)
        const double theta = units::pi - std::atan2(f[2], f[0]);
        angles[k] = theta;
        Matrix3d ry = Matrix3d::Identity();
        ry(0, 0) = std::cos(theta);
        ry(0, 2) = -std::sin(theta);
        ry(2, 0) = std::sin(theta);
        ry(2, 2) = std::cos(theta);
        // follow with Y -> Z relabeling (X->X, Y->Z, Z->-Y)
        Matrix3d swap = Matrix3d::Zero();
        swap(0, 0) = 1.0;
        swap(2, 1) = 1.0;
        swap(1, 2) = -1.0;
        rot[k] = swap * ry;
      }
      Coefficients cand = apply_rotations(base, rot);
      if (stoquastic_violation(
              dense_from_coefficients(2, cand.fields, cand.couplings),
              tol_ghz) <= tol_ghz) {
        std::vector<std::string> names;
        for (int k = 0; k < 2; ++k) {
          std::ostringstream os;
          os << "Ry(" << angles[k] << ");X->+X,Y->+Z,Z->-Y";
          names.push_back(os.str());
        }
        return finish(StoqVerdict::curable_by_listed_transform, names, cand);
      }
    }
  }

  report.verdict = StoqVerdict::no_single_qubit_clifford_cure;
  report.transform.assign(n, "none");
  report.cured_fields_ghz = base.fields;
  report.cured_couplings = base.couplings;
  return report;
}

}  // namespace fluxsim
