#include "fluxsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluxsim/units.hpp"

namespace fluxsim {

namespace {

void require_square(const Eigen::MatrixXd& m, int n, const std::string& name) {
  if (m.rows() != n || m.cols() != n) {
    throw std::invalid_argument(name + ": expected " + std::to_string(n) + "x" +
                                std::to_string(n) + " matrix, got " +
                                std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()));
  }
}

void require_symmetric(const Eigen::MatrixXd& m, const std::string& name) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument(name + ": matrix is not symmetric");
  }
}

void require_spd(const Eigen::MatrixXd& m, const std::string& name) {
  require_symmetric(m, name);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m,
                                                    Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmin <= 0.0 || lmin < 1e-12 * lmax) {
    throw std::invalid_argument(
        name + ": matrix is singular or not positive-definite (min eigenvalue " +
        std::to_string(lmin) + ")");
  }
}

}  // namespace

void CircuitSpec::validate() const {
  if (n_qubits < 1) {
    throw std::invalid_argument("CircuitSpec: n_qubits must be positive");
  }
  const int n = n_qubits;
  const bool has_c = capacitance_ff.size() > 0;
  const bool has_ec = ec_ghz.size() > 0;
  if (has_c == has_ec) {
    throw std::invalid_argument(
        "CircuitSpec: exactly one of capacitance_ff / ec_ghz must be given");
  }
  if (has_c) {
    require_square(capacitance_ff, n, "capacitance_ff");
    require_spd(capacitance_ff, "capacitance_ff");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && capacitance_ff(i, j) > 0.0) {
          throw std::invalid_argument(
              "capacitance_ff: off-diagonal entries must be <= 0");
        }
      }
    }
  } else {
    require_square(ec_ghz, n, "ec_ghz");
    require_spd(ec_ghz, "ec_ghz");
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && ec_ghz(i, j) < 0.0) {
          throw std::invalid_argument(
              "ec_ghz: off-diagonal entries must be >= 0");
        }
      }
    }
  }
  const bool has_l = inductance_nh.size() > 0;
  const bool has_el = el_ghz.size() > 0;
  if (has_l == has_el) {
    throw std::invalid_argument(
        "CircuitSpec: exactly one of inductance_nh / el_ghz must be given");
  }
  if (has_l) {
    require_square(inductance_nh, n, "inductance_nh");
    require_spd(inductance_nh, "inductance_nh");
  } else {
    require_square(el_ghz, n, "el_ghz");
    require_spd(el_ghz, "el_ghz");
  }
  if (static_cast<int>(junctions.size()) != n) {
    throw std::invalid_argument(
        "junctions: expected " + std::to_string(n) + " records, got " +
        std::to_string(junctions.size()));
  }
  for (const auto& j : junctions) {
    if (j.ej_over_h_ghz < 0.0) {
      throw std::invalid_argument("junctions: E_J/h must be >= 0");
    }
  }
}

Eigen::MatrixXd symmetric_sqrt(const Eigen::MatrixXd& m,
                               const std::string& name) {
  require_symmetric(m, name);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double lmax = es.eigenvalues().maxCoeff();
  if (es.eigenvalues().minCoeff() < 1e-12 * lmax) {
    throw std::invalid_argument(
        name + ": not positive-definite, symmetric square root undefined");
  }
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

HamiltonianParams build_params(const CircuitSpec& spec) {
  spec.validate();
  const int n = spec.n_qubits;
  HamiltonianParams p;
  if (spec.capacitance_ff.size() > 0) {
    p.ec_ghz = units::charging_prefactor_ghz_ff *
               spec.capacitance_ff.inverse();
  } else {
    p.ec_ghz = spec.ec_ghz;
  }
  require_spd(p.ec_ghz, "ec_ghz");
  if (spec.inductance_nh.size() > 0) {
    p.el_ghz = units::inductive_prefactor_ghz_nh *
               spec.inductance_nh.inverse();
  } else {
    p.el_ghz = spec.el_ghz;
  }
  require_spd(p.el_ghz, "el_ghz");
  p.ej_eff_ghz.resize(n);
  p.phi_q_x.resize(n);
  for (int k = 0; k < n; ++k) {
    p.ej_eff_ghz[k] =
        spec.junctions[k].ej_over_h_ghz *
        std::cos(spec.junctions[k].phi_cjj_x / 2.0);
    p.phi_q_x[k] = spec.junctions[k].phi_q_x;
  }
  p.s_scale = Eigen::MatrixXd::Identity(n, n);
  p.s_applied = false;
  return p;
}

double default_ec0(const HamiltonianParams& params) {
  return params.ec_ghz.diagonal().mean();
}

HamiltonianParams canonical_transform(const HamiltonianParams& params,
                                      double ec0_ghz) {
  if (params.s_applied) {
    throw std::invalid_argument(
        "canonical_transform: transformation already applied");
  }
  if (!(ec0_ghz > 0.0)) {
    throw std::invalid_argument("canonical_transform: ec0 must be positive");
  }
  const int n = params.n();
  const Eigen::MatrixXd s = symmetric_sqrt(params.ec_ghz / ec0_ghz, "ec_ghz");
  HamiltonianParams out = params;
  out.ec_ghz = ec0_ghz * Eigen::MatrixXd::Identity(n, n);
  out.el_ghz = s.transpose() * params.el_ghz * s;
  out.s_scale = s;
  out.s_applied = true;
  return out;
}

double potential_energy(const HamiltonianParams& params,
                        const Eigen::VectorXd& phi) {
  const Eigen::VectorXd scaled =
      params.s_applied ? Eigen::VectorXd(params.s_scale * phi) : phi;
  double u = 0.5 * phi.dot(params.el_ghz * phi);
  for (int k = 0; k < params.n(); ++k) {
    u -= params.ej_eff_ghz[k] * std::cos(scaled[k] + params.phi_q_x[k]);
  }
  return u;
}

Eigen::VectorXd potential_gradient(const HamiltonianParams& params,
                                   const Eigen::VectorXd& phi) {
  const Eigen::VectorXd scaled =
      params.s_applied ? Eigen::VectorXd(params.s_scale * phi) : phi;
  Eigen::VectorXd sines(params.n());
  for (int k = 0; k < params.n(); ++k) {
    sines[k] = params.ej_eff_ghz[k] * std::sin(scaled[k] + params.phi_q_x[k]);
  }
  if (params.s_applied) {
    return params.el_ghz * phi + params.s_scale.transpose() * sines;
  }
  return params.el_ghz * phi + sines;
}

namespace {

// Local minima of the decoupled 1D potential for qubit k, used as seeds.
std::vector<double> per_qubit_well_candidates(const HamiltonianParams& p,
                                              int k) {
  const double el = p.el_ghz(k, k);
  const double ej = p.ej_eff_ghz[k];
  const double skk = p.s_applied ? p.s_scale(k, k) : 1.0;
  const double phiq = p.phi_q_x[k];
  auto u = [&](double x) { return 0.5 * el * x * x - ej * std::cos(skk * x + phiq); };
  std::vector<double> mins;
  const int scan = 2001;
  const double w = 3.0;
  double prev2 = u(-w), prev1 = u(-w + 2 * w / (scan - 1));
  for (int i = 2; i < scan; ++i) {
    const double x = -w + 2.0 * w * i / (scan - 1);
    const double cur = u(x);
    if (prev1 < prev2 && prev1 <= cur) {
      mins.push_back(-w + 2.0 * w * (i - 1) / (scan - 1));
    }
    prev2 = prev1;
    prev1 = cur;
  }
  if (mins.empty()) mins.push_back(0.0);
  return mins;
}

}  // namespace

PotentialMinimum potential_minimum(const HamiltonianParams& params) {
  const int n = params.n();
  // Seed lattice: Cartesian product of per-qubit well candidates plus origin.
  std::vector<std::vector<double>> cands(n);
  for (int k = 0; k < n; ++k) cands[k] = per_qubit_well_candidates(params, k);
  std::vector<Eigen::VectorXd> seeds;
  std::vector<int> idx(n, 0);
  for (;;) {
    Eigen::VectorXd s(n);
    for (int k = 0; k < n; ++k) s[k] = cands[k][idx[k]];
    seeds.push_back(s);
    int k = 0;
    while (k < n && ++idx[k] == static_cast<int>(cands[k].size())) {
      idx[k] = 0;
      ++k;
    }
    if (k == n) break;
  }
  seeds.push_back(Eigen::VectorXd::Zero(n));
  // Deterministic jitter up to 32 starts.
  const std::size_t base = seeds.size();
  for (std::size_t i = 0; seeds.size() < 32; ++i) {
    Eigen::VectorXd s = seeds[i % base];
    for (int k = 0; k < n; ++k) {
      s[k] += 0.37 * std::sin(1.7 * static_cast<double>(i + 1) * (k + 1));
    }
    seeds.push_back(s);
  }

  const double tol = 1e-10;
  const int max_iter = 20000;
  PotentialMinimum out;
  out.converged = true;
  std::vector<Eigen::VectorXd> minima;
  std::vector<double> values;
  for (const auto& seed : seeds) {
    Eigen::VectorXd x = seed;
    double fx = potential_energy(params, x);
    bool ok = false;
    for (int it = 0; it < max_iter; ++it) {
      const Eigen::VectorXd g = potential_gradient(params, x);
      const double gn = g.norm();
      if (gn < 1e-8) {
        ok = true;
        break;
      }
      // Backtracking line search along -g.
      double step = 1.0 / std::max(1.0, params.el_ghz.norm());
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt) {
        const Eigen::VectorXd xn = x - step * g;
        const double fn = potential_energy(params, xn);
        if (fn < fx - 0.5 * step * gn * gn) {
          const double improvement = fx - fn;
          x = xn;
          fx = fn;
          moved = true;
          if (improvement < tol) ok = true;
          break;
        }
        step *= 0.5;
      }
      if (ok) break;
      if (!moved) {
        ok = gn < 1e-6;
        break;
      }
    }
    if (!ok) out.converged = false;
    // Deduplicate.
    bool dup = false;
    for (std::size_t i = 0; i < minima.size(); ++i) {
      if ((minima[i] - x).norm() < 1e-5) {
        dup = true;
        if (fx < values[i]) {
          minima[i] = x;
          values[i] = fx;
        }
        break;
      }
    }
    if (!dup) {
      minima.push_back(x);
      values.push_back(fx);
    }
  }
  std::vector<std::size_t> order(minima.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  for (std::size_t i : order) {
    out.local_minima.push_back(minima[i]);
    out.local_values_ghz.push_back(values[i]);
  }
  out.phi = out.local_minima.front();
  out.value_ghz = out.local_values_ghz.front();
  return out;
}

}  // namespace fluxsim
