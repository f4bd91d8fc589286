#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fluxsim/rng.hpp"
#include "fluxsim/stoquastic.hpp"

using namespace fluxsim;
using Catch::Approx;

namespace {

QubitModel well_model(double d1, double d2, double e1, double e2, double jyy,
                      double jzz) {
  QubitModel m;
  m.n_qubits = 2;
  m.basis = BasisTag::well;
  m.delta_ghz.resize(2);
  m.delta_ghz << d1, d2;
  m.epsilon_ghz.resize(2);
  m.epsilon_ghz << e1, e2;
  PairCoupling pc;
  pc.k = 0;
  pc.l = 1;
  pc.beta_ghz(1, 1) = jyy;
  pc.beta_ghz(2, 2) = jzz;
  m.couplings.push_back(pc);
  return m;
}

QubitModel energy_model(double d1, double d2, double jxx, double jyy) {
  QubitModel m;
  m.n_qubits = 2;
  m.basis = BasisTag::energy;
  m.delta_ghz.resize(2);
  m.delta_ghz << d1, d2;
  m.epsilon_ghz = Eigen::VectorXd::Zero(2);
  PairCoupling pc;
  pc.k = 0;
  pc.l = 1;
  pc.beta_ghz(0, 0) = jxx;
  pc.beta_ghz(1, 1) = jyy;
  m.couplings.push_back(pc);
  return m;
}

double max_positive_offdiag(const Eigen::MatrixXcd& h) {
  double worst = 0.0;
  for (long r = 0; r < h.rows(); ++r) {
    for (long c = 0; c < h.cols(); ++c) {
      worst = std::max(worst, std::abs(h(r, c).imag()));
      if (r != c) worst = std::max(worst, h(r, c).real());
    }
  }
  return worst;
}

std::vector<double> sorted_eigs(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  std::vector<double> out(es.eigenvalues().data(),
                          es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

}  // namespace

TEST_CASE("there are exactly 24 Clifford rotations", "[stoquastic]") {
  const auto& cl = clifford_rotations();
  REQUIRE(cl.size() == 24);
  for (const auto& c : cl) {
    CHECK(c.rotation().determinant() == Approx(1.0));
  }
}

TEST_CASE("TIMs are stoquastic or curable for any coefficient signs",
          "[stoquastic]") {
  Xoshiro256 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m =
        well_model(2.0 * rng.uniform(), 2.0 * rng.uniform(),
                   rng.uniform_symmetric(2.0), rng.uniform_symmetric(2.0),
                   0.0, rng.uniform_symmetric(2.0));
    const auto rep = check_stoquastic(m);
    REQUIRE(rep.verdict != StoqVerdict::no_single_qubit_clifford_cure);
    const auto cured =
        dense_from_coefficients(2, rep.cured_fields_ghz, rep.cured_couplings);
    REQUIRE(max_positive_offdiag(cured) <= 1e-9);
  }
}

TEST_CASE("published example verdicts", "[stoquastic]") {
  SECTION("J_XX <= -|J_YY| is stoquastic as given") {
    const auto m = energy_model(1.0, 1.0, -1.0, 0.5);
    CHECK(check_stoquastic(m).verdict == StoqVerdict::stoquastic_as_given);
  }

  SECTION("nonzero tilts with |J_YY| > |J_ZZ| > 0 cannot be Clifford-cured") {
    const auto m = well_model(1.0, 1.0, 0.5, 0.5, 0.3, 0.1);
    CHECK(check_stoquastic(m).verdict ==
          StoqVerdict::no_single_qubit_clifford_cure);
  }

  SECTION("pure capacitive coupling with tilts: continuous rotation cures") {
    const auto m = well_model(1.0, 1.2, 0.5, -0.4, 0.3, 0.0);
    const auto rep = check_stoquastic(m);
    REQUIRE(rep.verdict == StoqVerdict::curable_by_listed_transform);
    CHECK(rep.transform[0].find("Ry(") != std::string::npos);
    const auto cured =
        dense_from_coefficients(2, rep.cured_fields_ghz, rep.cured_couplings);
    CHECK(max_positive_offdiag(cured) <= 1e-9);
  }
}

TEST_CASE("symmetric two-qubit models are always Clifford-curable",
          "[stoquastic]") {
  Xoshiro256 rng(37);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = energy_model(2.0 * rng.uniform(), 2.0 * rng.uniform(),
                                rng.uniform_symmetric(1.5),
                                rng.uniform_symmetric(1.5));
    const auto rep = check_stoquastic(m);
    REQUIRE(rep.verdict != StoqVerdict::no_single_qubit_clifford_cure);
    // after curing, the couplings obey J_XX <= -|J_YY|
    const auto& beta = rep.cured_couplings.front().beta_ghz;
    REQUIRE(beta(0, 0) <= -std::abs(beta(1, 1)) + 1e-9);
  }
}

TEST_CASE("curing transforms preserve the spectrum", "[stoquastic]") {
  Xoshiro256 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const bool energy = rng.uniform() < 0.5;
    QubitModel m =
        energy ? energy_model(2.0 * rng.uniform(), 2.0 * rng.uniform(),
                              rng.uniform_symmetric(1.5),
                              rng.uniform_symmetric(1.5))
               : well_model(2.0 * rng.uniform(), 2.0 * rng.uniform(),
                            rng.uniform_symmetric(1.0),
                            rng.uniform_symmetric(1.0),
                            rng.uniform_symmetric(1.0),
                            rng.uniform_symmetric(1.0));
    const auto rep = check_stoquastic(m);
    if (rep.verdict == StoqVerdict::no_single_qubit_clifford_cure) continue;
    const auto before = sorted_eigs(m.dense());
    const auto after = sorted_eigs(
        dense_from_coefficients(2, rep.cured_fields_ghz, rep.cured_couplings));
    for (std::size_t i = 0; i < before.size(); ++i) {
      REQUIRE(before[i] == Approx(after[i]).margin(1e-10));
    }
  }
}

TEST_CASE("three-qubit TIM chains are curable", "[stoquastic]") {
  QubitModel m;
  m.n_qubits = 3;
  m.basis = BasisTag::well;
  m.delta_ghz.resize(3);
  m.delta_ghz << 1.0, 0.7, 1.3;
  m.epsilon_ghz.resize(3);
  m.epsilon_ghz << 0.2, -0.4, 0.9;
  for (int k = 0; k + 1 < 3; ++k) {
    PairCoupling pc;
    pc.k = k;
    pc.l = k + 1;
    pc.beta_ghz(2, 2) = (k == 0) ? 0.5 : -0.8;
    m.couplings.push_back(pc);
  }
  const auto rep = check_stoquastic(m);
  CHECK(rep.verdict != StoqVerdict::no_single_qubit_clifford_cure);
}

TEST_CASE("verdict reporting includes the violation magnitude",
          "[stoquastic]") {
  const auto m = well_model(1.0, 1.0, 0.0, 0.0, 0.25, 0.0);
  const auto rep = check_stoquastic(m);
  CHECK(rep.max_offdiag_violation_ghz == Approx(0.25).epsilon(1e-6));
  CHECK(rep.verdict == StoqVerdict::curable_by_listed_transform);
}
