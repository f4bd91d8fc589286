#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fluxsim/qubit_model.hpp"
#include "test_helpers.hpp"

using namespace fluxsim;
using namespace fluxsim::testing;
using Catch::Approx;

namespace {

SpectralResult symmetric_qubit(int n_states = 8) {
  return solve_spectrum(build_params(table_qubit()), default_grid(1),
                        n_states);
}

double dense_thermal(const Eigen::MatrixXcd& h, double beta_tilde) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const auto& ev = es.eigenvalues();
  double z = 0.0, ez = 0.0;
  for (long i = 0; i < ev.size(); ++i) {
    const double w = std::exp(-beta_tilde * (ev[i] - ev[0]));
    z += w;
    ez += ev[i] * w;
  }
  return ez / z;
}

}  // namespace

TEST_CASE("two-qubit projection rank structure", "[projection]") {
  const auto q = symmetric_qubit();
  const double ec12 = 0.007905689;

  SECTION("capacitive coupling only: rank-1 YY") {
    const auto m = project_two_qubit(q, q, ec12, 0.0);
    REQUIRE(m.couplings.size() == 1);
    const auto& beta = m.couplings.front().beta_ghz;
    CHECK(beta_rank(beta) == 1);
    CHECK(beta(1, 1) == Approx(8.0 * ec12 * 0.714524 * 0.714524).epsilon(5e-3));
    CHECK(beta(1, 1) == Approx(0.0322898).epsilon(5e-3));
    // everything except YY vanishes
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        if (i != 1 || j != 1) CHECK(std::abs(beta(i, j)) < 1e-12);
      }
    }
  }

  SECTION("inductive coupling only: rank-1 ZZ, a TIM") {
    const auto m = project_two_qubit(q, q, 0.0, 0.4);
    const auto& beta = m.couplings.front().beta_ghz;
    CHECK(beta_rank(beta) == 1);
    CHECK(m.is_tim());
    CHECK(beta(2, 2) == Approx(0.4 * 0.521255 * 0.521255).epsilon(5e-3));
  }

  SECTION("both couplings: rank 2") {
    const auto m = project_two_qubit(q, q, ec12, 0.4);
    CHECK(beta_rank(m.couplings.front().beta_ghz) == 2);
    CHECK_FALSE(m.is_tim());
  }

  SECTION("tunnel couplings and tilt fields") {
    const double tilt = 2.0e-4 * units::pi;
    const auto m = project_two_qubit(q, q, ec12, 0.0, tilt, 2.0 * tilt);
    CHECK(m.delta_ghz[0] == Approx(1.3598).epsilon(2e-3));
    CHECK(m.delta_ghz[0] >= 0.0);
    // eps = 2 E_J^eff delta_q <0|sin phi|0>; <0|sin phi|0> ~ -0.48248
    const double ej = q.params.ej_eff_ghz[0];
    CHECK(m.epsilon_ghz[0] ==
          Approx(2.0 * ej * tilt * -0.48248).epsilon(5e-3));
    CHECK(m.epsilon_ghz[1] == Approx(2.0 * m.epsilon_ghz[0]).epsilon(1e-9));
  }
}

TEST_CASE("energy-basis projection of the symmetric pair", "[projection]") {
  const auto q = symmetric_qubit();
  const double ec12 = 0.007905689, el12 = 0.4;

  SECTION("uncoupled limit: pure fields") {
    const auto m = project_symmetric_energy_basis(q, q, 0.0, 0.0);
    CHECK(m.basis == BasisTag::energy);
    CHECK(m.delta_ghz[0] == Approx(1.3598).epsilon(2e-3));
    for (const auto& pc : m.couplings) {
      CHECK(pc.beta_ghz.cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  SECTION("couplings land on XX and YY only") {
    const auto m = project_symmetric_energy_basis(q, q, ec12, el12);
    const auto& beta = m.couplings.front().beta_ghz;
    CHECK(beta(0, 0) == Approx(el12 * 0.521255 * 0.521255).epsilon(5e-3));
    CHECK(beta(1, 1) == Approx(8.0 * ec12 * 0.714524 * 0.714524).epsilon(5e-3));
    CHECK(std::abs(beta(2, 2)) < 1e-12);
    CHECK(std::abs(beta(0, 1)) < 1e-12);
    CHECK(std::abs(beta(1, 0)) < 1e-12);
    // J_YY is real by construction and the model carries no epsilon
    CHECK(m.epsilon_ghz.cwiseAbs().maxCoeff() == 0.0);
  }

  SECTION("tilted input rejected") {
    const auto tilted = solve_spectrum(build_params(table_qubit(1.001)),
                                       default_grid(1), 4);
    CHECK_THROWS_AS(project_symmetric_energy_basis(tilted, q, ec12, el12),
                    std::invalid_argument);
  }
}

TEST_CASE("well and energy basis projections agree as operators",
          "[projection]") {
  const auto q = symmetric_qubit();
  const double ec12 = 0.007905689, el12 = 0.4;
  const auto well = project_two_qubit(q, q, ec12, el12);
  const auto energy = project_symmetric_energy_basis(q, q, ec12, el12);

  // |0> = (|g>+|e>)/sqrt2 maps the conventions onto each other with a
  // Hadamard on each qubit.
  Eigen::Matrix2cd h2;
  h2 << 1, 1, 1, -1;
  h2 /= std::sqrt(2.0);
  Eigen::MatrixXcd hh = Eigen::MatrixXcd::Zero(4, 4);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        for (int d = 0; d < 2; ++d) {
          hh(2 * a + c, 2 * b + d) = h2(a, b) * h2(c, d);
        }
      }
    }
  }
  const Eigen::MatrixXcd lhs = well.dense();
  const Eigen::MatrixXcd rhs = hh * energy.dense() * hh;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("effective TIM construction", "[projection][tim]") {
  const auto params = build_params(weak_pair());
  const double ec0 = default_ec0(params);
  const auto transformed = canonical_transform(params, ec0);

  SECTION("identity transform with no couplings gives no J") {
    const auto p1 = build_params(table_qubit());
    const auto t1 = canonical_transform(p1, 0.124);
    const auto q1 = solve_spectrum(tim_single_qubit_params(t1, 0,
                                                           TimCosScaling::scaled),
                                   default_grid(1), 4);
    const auto tim = build_tim({q1}, t1);
    CHECK(tim.couplings.empty());
    CHECK(tim.is_tim());
  }

  SECTION("first-order variant reproduces the bare qubit splitting") {
    std::vector<SpectralResult> qubits;
    for (int k = 0; k < 2; ++k) {
      auto hk = tim_single_qubit_params(transformed, k,
                                        TimCosScaling::first_order);
      qubits.push_back(solve_spectrum(hk, default_grid(1), 4));
    }
    const auto tim = build_tim(qubits, transformed);
    CHECK(tim.delta_ghz[0] == Approx(1.3598).epsilon(2e-3));
    REQUIRE(tim.couplings.size() == 1);
    const double j = tim.couplings.front().beta_ghz(2, 2);
    CHECK(j != 0.0);
    CHECK(std::abs(j) < 0.4);  // near-cancellation of the two contributions
    CHECK(tim.is_tim());

    // thermal energy against full two-qubit diagonalization
    const auto full = solve_spectrum(params, default_grid(2), 40);
    const double exact = thermal_average_energy(full, 1.0 / 0.93);
    const double offset = tim_energy_offset(qubits, transformed);
    const double tim_thermal =
        dense_thermal(tim.dense(), 1.0 / 0.93) + offset;
    CHECK(tim_thermal == Approx(exact).epsilon(0.01));
  }

  SECTION("scaled variant shifts the splitting noticeably") {
    std::vector<SpectralResult> qubits;
    for (int k = 0; k < 2; ++k) {
      auto hk = tim_single_qubit_params(transformed, k, TimCosScaling::scaled);
      qubits.push_back(solve_spectrum(hk, default_grid(1), 4));
    }
    const auto tim = build_tim(qubits, transformed);
    CHECK(tim.delta_ghz[0] == Approx(1.4049).epsilon(3e-3));
    const auto full = solve_spectrum(params, default_grid(2), 40);
    const double exact = thermal_average_energy(full, 1.0 / 0.93);
    const double offset = tim_energy_offset(qubits, transformed);
    const double tim_thermal =
        dense_thermal(tim.dense(), 1.0 / 0.93) + offset;
    CHECK(tim_thermal == Approx(exact).epsilon(0.04));
  }

  SECTION("untransformed parameters rejected") {
    CHECK_THROWS_AS(tim_single_qubit_params(params, 0, TimCosScaling::scaled),
                    std::invalid_argument);
    const auto q = symmetric_qubit(4);
    CHECK_THROWS_AS(build_tim({q, q}, params), std::invalid_argument);
  }
}

TEST_CASE("coupling strength vanishes linearly with the coupling capacitance",
          "[projection]") {
  const auto q = symmetric_qubit();
  double ratio0 = 0.0;
  for (const double cc : {1.0, 2.0, 5.0, 10.0}) {
    CircuitSpec s = coupled_pair(156.849082343, cc);
    const auto p = build_params(s);
    const auto m = project_two_qubit(q, q, p.ec_ghz(0, 1), 0.0);
    const double jyy = m.couplings.front().beta_ghz(1, 1);
    const double ratio = jyy / cc;
    if (ratio0 == 0.0) ratio0 = ratio;
    CHECK(ratio == Approx(ratio0).epsilon(0.10));
  }
}
