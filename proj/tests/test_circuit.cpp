#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fluxsim/circuit.hpp"
#include "fluxsim/rng.hpp"
#include "fluxsim/units.hpp"

using namespace fluxsim;
using Catch::Approx;

namespace {

// Table-style single flux qubit: E_C/h = 0.124 GHz, E_J/h = 1600 GHz,
// phi_cjj^x = 0.685550 pi, E_L/h = 704 GHz.
CircuitSpec single_qubit_spec(double phi_q_over_pi = 1.0) {
  CircuitSpec s;
  s.n_qubits = 1;
  s.ec_ghz = Eigen::MatrixXd::Constant(1, 1, 0.124);
  s.el_ghz = Eigen::MatrixXd::Constant(1, 1, 704.0);
  s.junctions = {{1600.0, 0.685550 * units::pi, phi_q_over_pi * units::pi}};
  return s;
}

CircuitSpec two_qubit_spec(double c_diag_ff, double cc_ff) {
  CircuitSpec s;
  s.n_qubits = 2;
  s.capacitance_ff.resize(2, 2);
  s.capacitance_ff << c_diag_ff, -cc_ff, -cc_ff, c_diag_ff;
  s.el_ghz = 704.0 * Eigen::MatrixXd::Identity(2, 2);
  s.junctions = {{1600.0, 0.685550 * units::pi, units::pi},
                 {1600.0, 0.685550 * units::pi, units::pi}};
  return s;
}

}  // namespace

TEST_CASE("build_params converts capacitance to charging energy", "[circuit]") {
  CircuitSpec s;
  s.n_qubits = 1;
  s.capacitance_ff = Eigen::MatrixXd::Constant(1, 1, 156.21152681176714);
  s.el_ghz = Eigen::MatrixXd::Constant(1, 1, 704.0);
  s.junctions = {{1600.0, 0.685550 * units::pi, units::pi}};
  const auto p = build_params(s);
  CHECK(p.ec_ghz(0, 0) == Approx(0.124).epsilon(1e-9));
}

TEST_CASE("effective Josephson energy from the CJJ flux", "[circuit]") {
  const auto p = build_params(single_qubit_spec());
  // 1600 cos(0.685550 pi / 2); the commonly quoted rounded value is 760
  CHECK(p.ej_eff_ghz[0] ==
        Approx(1600.0 * std::cos(0.685550 * units::pi / 2.0)).epsilon(1e-12));
  CHECK(p.ej_eff_ghz[0] == Approx(760.0).epsilon(0.003));

  auto s = single_qubit_spec();
  s.junctions[0].phi_cjj_x = units::pi;
  CHECK(build_params(s).ej_eff_ghz[0] == Approx(0.0).margin(1e-10));
}

TEST_CASE("two-qubit coupling capacitances give the published E_C12",
          "[circuit]") {
  // weak coupling: C_c = 10 fF with the diagonal tuned to E_C/h = 0.124
  const auto p3 = build_params(two_qubit_spec(156.849082343, 10.0));
  CHECK(p3.ec_ghz(0, 0) == Approx(0.124).epsilon(1e-8));
  CHECK(p3.ec_ghz(0, 1) == Approx(0.007905689).epsilon(1e-6));
  CHECK(p3.ec_ghz(0, 1) == Approx(0.008).margin(1.2e-4));

  // strong coupling: C_c = 104 fF
  const auto p4 = build_params(two_qubit_spec(208.169248970, 104.0));
  CHECK(p4.ec_ghz(0, 0) == Approx(0.124).epsilon(1e-8));
  CHECK(p4.ec_ghz(0, 1) == Approx(0.061949592).epsilon(1e-6));
  CHECK(p4.ec_ghz(0, 1) == Approx(0.062).margin(1e-4));
}

TEST_CASE("invalid matrices are rejected with a named diagnostic",
          "[circuit]") {
  auto s = two_qubit_spec(156.849, 10.0);
  s.capacitance_ff(0, 0) = -5.0;
  CHECK_THROWS_WITH(build_params(s),
                    Catch::Matchers::ContainsSubstring("capacitance_ff"));

  auto s2 = single_qubit_spec();
  s2.el_ghz(0, 0) = 0.0;
  CHECK_THROWS_WITH(build_params(s2),
                    Catch::Matchers::ContainsSubstring("el_ghz"));

  auto s3 = two_qubit_spec(156.849, 10.0);
  s3.junctions.pop_back();
  CHECK_THROWS_WITH(build_params(s3),
                    Catch::Matchers::ContainsSubstring("junctions"));
}

TEST_CASE("canonical transform is identity for uniform diagonal E_C",
          "[circuit]") {
  auto p = build_params(single_qubit_spec());
  const auto t = canonical_transform(p, 0.124);
  CHECK(t.s_applied);
  CHECK(t.s_scale(0, 0) == Approx(1.0).epsilon(1e-12));
  CHECK(t.ec_ghz(0, 0) == Approx(p.ec_ghz(0, 0)).epsilon(1e-12));
  CHECK(t.el_ghz(0, 0) == Approx(p.el_ghz(0, 0)).epsilon(1e-12));
  CHECK_THROWS_AS(canonical_transform(t, 0.124), std::invalid_argument);
}

TEST_CASE("canonical transform square root and congruence", "[circuit]") {
  const auto p = build_params(two_qubit_spec(156.849082343, 10.0));
  const double ec0 = default_ec0(p);
  CHECK(ec0 == Approx(0.124).epsilon(1e-8));
  const auto t = canonical_transform(p, ec0);

  // S symmetric, S^2 = E_C / ec0 to 1e-12 relative
  CHECK((t.s_scale - t.s_scale.transpose()).cwiseAbs().maxCoeff() < 1e-13);
  const Eigen::MatrixXd s2 = t.s_scale * t.s_scale;
  CHECK((s2 - p.ec_ghz / ec0).cwiseAbs().maxCoeff() < 1e-12);

  // small off-diagonal: S_01 ~ delta/(2 ec0) at first order
  const double delta = p.ec_ghz(0, 1);
  CHECK(t.s_scale(0, 1) == Approx(delta / (2.0 * ec0)).epsilon(2e-3));

  // E_C' = ec0 I, E_L' = S E_L S, both SPD
  CHECK((t.ec_ghz - ec0 * Eigen::MatrixXd::Identity(2, 2))
            .cwiseAbs().maxCoeff() < 1e-14);
  const Eigen::MatrixXd elp = t.s_scale.transpose() * p.el_ghz * t.s_scale;
  CHECK((t.el_ghz - elp).cwiseAbs().maxCoeff() < 1e-12 * 704.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.el_ghz);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("potential energy and gradient", "[circuit]") {
  const auto p = build_params(two_qubit_spec(156.849082343, 10.0));

  SECTION("zero Josephson energy at the origin") {
    auto s = two_qubit_spec(156.849082343, 10.0);
    s.junctions[0].ej_over_h_ghz = 0.0;
    s.junctions[1].ej_over_h_ghz = 0.0;
    const auto ph = build_params(s);
    CHECK(potential_energy(ph, Eigen::VectorXd::Zero(2)) ==
          Approx(0.0).margin(1e-14));
  }

  SECTION("gradient matches central finite differences") {
    Xoshiro256 rng(11);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd phi(2);
      phi << rng.uniform_symmetric(2.0), rng.uniform_symmetric(2.0);
      const Eigen::VectorXd g = potential_gradient(p, phi);
      for (int k = 0; k < 2; ++k) {
        Eigen::VectorXd up = phi, dn = phi;
        up[k] += h;
        dn[k] -= h;
        const double fd =
            (potential_energy(p, up) - potential_energy(p, dn)) / (2.0 * h);
        REQUIRE(g[k] == Approx(fd).epsilon(1e-6).margin(1e-6));
      }
    }
  }

  SECTION("parity symmetry at phi_q = pi") {
    Xoshiro256 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd phi(2);
      phi << rng.uniform_symmetric(2.0), rng.uniform_symmetric(2.0);
      REQUIRE(potential_energy(p, phi) ==
              Approx(potential_energy(p, -phi)).epsilon(1e-12));
    }
  }

  SECTION("invariance under the transformation pair") {
    const auto t = canonical_transform(p, default_ec0(p));
    const Eigen::MatrixXd s_inv = t.s_scale.inverse();
    Xoshiro256 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd phi(2);
      phi << rng.uniform_symmetric(2.0), rng.uniform_symmetric(2.0);
      const double u = potential_energy(p, phi);
      const double ut = potential_energy(t, s_inv * phi);
      REQUIRE(ut == Approx(u).epsilon(1e-10));
    }
  }
}

TEST_CASE("potential minimum", "[circuit]") {
  SECTION("pure harmonic lands at the origin") {
    auto s = single_qubit_spec();
    s.junctions[0].ej_over_h_ghz = 0.0;
    const auto pm = potential_minimum(build_params(s));
    CHECK(pm.converged);
    CHECK(pm.phi.cwiseAbs().maxCoeff() < 1e-7);
    CHECK(pm.value_ghz == Approx(0.0).margin(1e-12));
  }

  SECTION("symmetric double well has two degenerate minima") {
    const auto p = build_params(single_qubit_spec());
    const auto pm = potential_minimum(p);
    REQUIRE(pm.local_minima.size() >= 2);
    CHECK(pm.local_values_ghz[0] == Approx(pm.local_values_ghz[1]).epsilon(1e-10));
    CHECK(pm.local_minima[0][0] == Approx(-pm.local_minima[1][0]).margin(1e-6));

    // dense grid scan oracle over [-3, 3]
    double best = 1e300;
    for (int i = 0; i <= 600000; ++i) {
      Eigen::VectorXd phi(1);
      phi << -3.0 + i * 1e-5;
      best = std::min(best, potential_energy(p, phi));
    }
    CHECK(pm.value_ghz == Approx(best).margin(1e-6));
  }

  SECTION("tilted well selects the deeper minimum") {
    auto s = single_qubit_spec();
    s.junctions[0].phi_q_x = units::pi + 0.01;
    const auto p = build_params(s);
    const auto pm = potential_minimum(p);
    double best = 1e300, best_phi = 0.0;
    for (int i = 0; i <= 600000; ++i) {
      Eigen::VectorXd phi(1);
      phi << -3.0 + i * 1e-5;
      const double u = potential_energy(p, phi);
      if (u < best) {
        best = u;
        best_phi = phi[0];
      }
    }
    CHECK(pm.value_ghz == Approx(best).margin(1e-6));
    CHECK(pm.phi[0] == Approx(best_phi).margin(1e-4));
    // a positive tilt deepens the positive-phi well
    CHECK(pm.phi[0] > 0.0);
  }
}
