#include "fluxsim/pimc.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "fluxsim/rng.hpp"

namespace fluxsim {

void PimcConfig::validate() const {
  if (!(beta_tilde_ns > 0.0)) {
    throw std::invalid_argument("PimcConfig: beta_tilde must be positive");
  }
  if (trotter_m < 2) {
    throw std::invalid_argument("PimcConfig: trotter_m must be >= 2");
  }
  if (equilibration_iterations >= total_iterations) {
    throw std::invalid_argument(
        "PimcConfig: equilibration_iterations must be < total_iterations");
  }
  if (sample_stride < 1) {
    throw std::invalid_argument("PimcConfig: sample_stride must be >= 1");
  }
  if (local_update_prob < 0.0 || local_update_prob > 1.0) {
    throw std::invalid_argument(
        "PimcConfig: local_update_prob must be in [0, 1]");
  }
  if (!(shift_halfwidth > 0.0)) {
    throw std::invalid_argument("PimcConfig: shift_halfwidth must be positive");
  }
  if (n_chains < 1) {
    throw std::invalid_argument("PimcConfig: n_chains must be >= 1");
  }
}

double classical_action(const HamiltonianParams& params,
                        const PathConfiguration& path,
                        const PimcConfig& config) {
  config.validate();
  const int m = static_cast<int>(path.slices.rows());
  const int n = static_cast<int>(path.slices.cols());
  if (m != config.trotter_m || n != params.n()) {
    throw std::invalid_argument("classical_action: path shape mismatch");
  }
  const Eigen::MatrixXd ec_inv = [&] {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(params.ec_ghz);
    if (es.eigenvalues().minCoeff() <=
        1e-12 * es.eigenvalues().maxCoeff()) {
      throw std::invalid_argument("classical_action: singular E_C matrix");
    }
    return params.ec_ghz.inverse().eval();
  }();
  const double kin_coeff =
      static_cast<double>(m) / (16.0 * config.beta_tilde_ns);
  const double pot_coeff = config.beta_tilde_ns / static_cast<double>(m);
  double action = 0.0;
  for (int s = 0; s < m; ++s) {
    const int sp = (s + 1) % m;
    const Eigen::VectorXd d =
        (path.slices.row(sp) - path.slices.row(s)).transpose();
    action += kin_coeff * d.dot(ec_inv * d);
    action += pot_coeff *
              potential_energy(params, path.slices.row(s).transpose());
  }
  return action;
}

namespace {

struct ChainResult {
  SeriesStats stats;
  double acceptance_local = 0.0;
  double acceptance_global = 0.0;
  std::vector<double> samples;
  bool mixing_failure = false;
};

// One Markov chain of the flux-basis PIMC.  Incremental action updates: a
// local move touches two kinetic links and one potential term; a global move
// leaves the kinetic part invariant.
ChainResult run_flux_chain(const HamiltonianParams& params,
                           const PimcConfig& config, double u_min,
                           std::uint64_t stream) {
  const int m = config.trotter_m;
  const int n = params.n();
  const Eigen::MatrixXd ec_inv = params.ec_ghz.inverse();
  const double kin_coeff =
      static_cast<double>(m) / (16.0 * config.beta_tilde_ns);
  const double pot_coeff = config.beta_tilde_ns / static_cast<double>(m);

  Xoshiro256 rng(config.rng_seed, stream);

  // Random initial configuration around the potential landscape.
  const auto pm = potential_minimum(params);
  const double init_span =
      pm.phi.cwiseAbs().maxCoeff() + 1.0;
  Eigen::MatrixXd path(m, n);
  for (int s = 0; s < m; ++s) {
    for (int k = 0; k < n; ++k) {
      path(s, k) = rng.uniform_symmetric(init_span);
    }
  }

  std::vector<double> potentials(m);
  for (int s = 0; s < m; ++s) {
    potentials[s] = potential_energy(params, path.row(s).transpose());
  }

  auto kinetic_link = [&](int s) {
    const int sp = (s + 1) % m;
    const Eigen::VectorXd d = (path.row(sp) - path.row(s)).transpose();
    return kin_coeff * d.dot(ec_inv * d);
  };

  long long accepted_local = 0, proposed_local = 0;
  long long accepted_global = 0, proposed_global = 0;
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(
      (config.total_iterations - config.equilibration_iterations) /
      config.sample_stride + 1));

  Eigen::VectorXd new_slice(n), delta(n);
  for (long long it = 0; it < config.total_iterations; ++it) {
    if (rng.uniform() < config.local_update_prob) {
      // local move: shift one slice
      ++proposed_local;
      const int s = static_cast<int>(rng.uniform_index(m));
      for (int k = 0; k < n; ++k) {
        new_slice[k] = path(s, k) +
                       rng.uniform_symmetric(config.shift_halfwidth);
      }
      const int sm = (s + m - 1) % m;
      const double old_kin = kinetic_link(s) + kinetic_link(sm);
      const double old_pot = potentials[s];
      const Eigen::RowVectorXd backup = path.row(s);
      path.row(s) = new_slice.transpose();
      const double new_pot = potential_energy(params, new_slice);
      const double new_kin = kinetic_link(s) + kinetic_link(sm);
      const double d_action =
          (new_kin - old_kin) + pot_coeff * (new_pot - old_pot);
      if (d_action <= 0.0 || rng.uniform() < std::exp(-d_action)) {
        potentials[s] = new_pot;
        ++accepted_local;
      } else {
        path.row(s) = backup;
      }
    } else {
      // global move: common shift of all slices; kinetic part is invariant
      ++proposed_global;
      for (int k = 0; k < n; ++k) {
        delta[k] = rng.uniform_symmetric(config.shift_halfwidth);
      }
      double d_action = 0.0;
      std::vector<double> new_pots(m);
      for (int s = 0; s < m; ++s) {
        new_pots[s] =
            potential_energy(params, path.row(s).transpose() + delta);
        d_action += pot_coeff * (new_pots[s] - potentials[s]);
      }
      if (d_action <= 0.0 || rng.uniform() < std::exp(-d_action)) {
        path.rowwise() += delta.transpose();
        potentials = new_pots;
        ++accepted_global;
      }
    }

    if (it == config.equilibration_iterations - 1 &&
        accepted_local + accepted_global == 0) {
      ChainResult fail;
      fail.mixing_failure = true;
      return fail;
    }
    if (it >= config.equilibration_iterations &&
        (it - config.equilibration_iterations) % config.sample_stride == 0) {
      // virial estimator: (1/M) sum_s [U - u_min + phi . grad U / 2]
      double acc = 0.0;
      for (int s = 0; s < m; ++s) {
        const Eigen::VectorXd g =
            potential_gradient(params, path.row(s).transpose());
        acc += potentials[s] - u_min + 0.5 * path.row(s).dot(g);
      }
      samples.push_back(acc / m);
    }
  }

  ChainResult out;
  out.samples = std::move(samples);
  out.stats = compute_series_stats(out.samples);
  out.acceptance_local =
      proposed_local ? static_cast<double>(accepted_local) / proposed_local
                     : 0.0;
  out.acceptance_global =
      proposed_global ? static_cast<double>(accepted_global) / proposed_global
                      : 0.0;
  return out;
}

PathEnsembleStats combine_chains(const std::vector<ChainResult>& chains) {
  for (const auto& c : chains) {
    if (c.mixing_failure) {
      throw std::runtime_error(
          "pimc: zero accepted moves during equilibration (mixing failure)");
    }
  }
  PathEnsembleStats out;
  const double nc = static_cast<double>(chains.size());
  double var_acc = 0.0;
  for (const auto& c : chains) {
    out.mean_energy_ghz += c.stats.mean / nc;
    var_acc += c.stats.std_error * c.stats.std_error;
    out.autocorrelation_time += c.stats.tau / nc;
    out.n_samples += static_cast<long long>(c.stats.n_samples);
    out.acceptance_local += c.acceptance_local / nc;
    out.acceptance_global += c.acceptance_global / nc;
    out.degenerate_series = out.degenerate_series || c.stats.degenerate;
    out.samples.insert(out.samples.end(), c.samples.begin(), c.samples.end());
  }
  out.std_error_ghz = std::sqrt(var_acc) / nc;
  return out;
}

}  // namespace

PathEnsembleStats run_pimc_flux(const HamiltonianParams& params,
                                const PimcConfig& config) {
  config.validate();
  const double u_min = potential_minimum(params).value_ghz;
  std::vector<ChainResult> chains(config.n_chains);
  if (config.n_chains == 1) {
    chains[0] = run_flux_chain(params, config, u_min, 0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(config.n_chains);
    for (int c = 0; c < config.n_chains; ++c) {
      pool.emplace_back([&, c] {
        chains[c] = run_flux_chain(params, config, u_min,
                                   static_cast<std::uint64_t>(c));
      });
    }
    for (auto& t : pool) t.join();
  }
  return combine_chains(chains);
}

double tim_j_perp(double delta_ghz, double beta_tilde_ns, int trotter_m) {
  if (!(delta_ghz > 0.0)) {
    throw std::invalid_argument(
        "tim_j_perp: delta must be positive (J_perp diverges at delta = 0)");
  }
  const double a = beta_tilde_ns * delta_ghz / (2.0 * trotter_m);
  return -trotter_m / (2.0 * beta_tilde_ns) * std::log(std::tanh(a));
}

namespace {

// One Markov chain of the TIM PIMC on M x N classical spins.
ChainResult run_tim_chain(const QubitModel& model, const PimcConfig& config,
                          std::uint64_t stream) {
  const int m = config.trotter_m;
  const int n = model.n_qubits;
  const double bt = config.beta_tilde_ns;
  const double slice_coeff = bt / static_cast<double>(m);

  std::vector<double> j_perp(n);
  for (int k = 0; k < n; ++k) {
    j_perp[k] = tim_j_perp(model.delta_ghz[k], bt, m);
  }
  // Same-slice coupling table.
  std::vector<std::array<double, 3>> pair_terms;  // (k, l, J_kl) flattened
  std::vector<std::vector<std::pair<int, double>>> neighbors(n);
  for (const auto& pc : model.couplings) {
    const double j = pc.beta_ghz(2, 2);
    if (j == 0.0) continue;
    neighbors[pc.k].push_back({pc.l, j});
    neighbors[pc.l].push_back({pc.k, j});
    pair_terms.push_back({static_cast<double>(pc.k),
                          static_cast<double>(pc.l), j});
  }

  Xoshiro256 rng(config.rng_seed, stream);
  Eigen::MatrixXi spins(m, n);
  for (int s = 0; s < m; ++s) {
    for (int k = 0; k < n; ++k) {
      spins(s, k) = (rng.uniform() < 0.5) ? 1 : -1;
    }
  }

  // Energy change of the classical action beta_tilde/M * H_eff,c for a
  // single spin flip at (s, k):
  //   kinetic: -J_perp_k sigma(s,k) [sigma(s-1,k) + sigma(s+1,k)] flips sign
  //   field:   -(eps_k/2) sigma(s,k) flips sign
  //   pairs:   +J_kl sigma(s,k) sigma(s,l) flips sign
  auto local_daction = [&](int s, int k) {
    const int sp = (s + 1) % m;
    const int sm = (s + m - 1) % m;
    const double sk = spins(s, k);
    double h_local = -j_perp[k] * sk * (spins(sp, k) + spins(sm, k)) -
                     0.5 * model.epsilon_ghz[k] * sk;
    for (const auto& [l, j] : neighbors[k]) {
      h_local += j * sk * spins(s, l);
    }
    return slice_coeff * (-2.0 * h_local);
  };

  long long accepted_local = 0, proposed_local = 0;
  long long accepted_global = 0, proposed_global = 0;
  std::vector<double> samples;

  std::vector<double> coth2a(n), inv_sinh2a(n);
  for (int k = 0; k < n; ++k) {
    const double a = bt * model.delta_ghz[k] / (2.0 * m);
    coth2a[k] = 1.0 / std::tanh(2.0 * a);
    inv_sinh2a[k] = 1.0 / std::sinh(2.0 * a);
  }

  for (long long it = 0; it < config.total_iterations; ++it) {
    if (rng.uniform() < config.local_update_prob) {
      ++proposed_local;
      const int s = static_cast<int>(rng.uniform_index(m));
      const int k = static_cast<int>(rng.uniform_index(n));
      const double da = local_daction(s, k);
      if (da <= 0.0 || rng.uniform() < std::exp(-da)) {
        spins(s, k) = -spins(s, k);
        ++accepted_local;
      }
    } else {
      // flip the full imaginary-time column of one qubit; kinetic invariant
      ++proposed_global;
      const int k = static_cast<int>(rng.uniform_index(n));
      double dh = 0.0;
      for (int s = 0; s < m; ++s) {
        const double sk = spins(s, k);
        dh += model.epsilon_ghz[k] * sk;  // -eps/2 * (-2 sk) per slice
        for (const auto& [l, j] : neighbors[k]) {
          dh += -2.0 * j * sk * spins(s, l);
        }
      }
      const double da = slice_coeff * dh;
      if (da <= 0.0 || rng.uniform() < std::exp(-da)) {
        for (int s = 0; s < m; ++s) spins(s, k) = -spins(s, k);
        ++accepted_global;
      }
    }

    if (it == config.equilibration_iterations - 1 &&
        accepted_local + accepted_global == 0) {
      ChainResult fail;
      fail.mixing_failure = true;
      return fail;
    }
    if (it >= config.equilibration_iterations &&
        (it - config.equilibration_iterations) % config.sample_stride == 0) {
      // <H> estimator: X via the link estimator
      // <X_k> = coth(2a_k) - <sigma_k^s sigma_k^{s+1}> / sinh(2a_k),
      // Z and ZZ as same-slice averages.
      double e = 0.0;
      for (int k = 0; k < n; ++k) {
        double link = 0.0, zbar = 0.0;
        for (int s = 0; s < m; ++s) {
          link += spins(s, k) * spins((s + 1) % m, k);
          zbar += spins(s, k);
        }
        link /= m;
        zbar /= m;
        const double x_est = coth2a[k] - link * inv_sinh2a[k];
        e += -0.5 * model.delta_ghz[k] * x_est -
             0.5 * model.epsilon_ghz[k] * zbar;
      }
      for (const auto& pt : pair_terms) {
        const int k = static_cast<int>(pt[0]);
        const int l = static_cast<int>(pt[1]);
        double zz = 0.0;
        for (int s = 0; s < m; ++s) zz += spins(s, k) * spins(s, l);
        e += pt[2] * zz / m;
      }
      samples.push_back(e);
    }
  }

  ChainResult out;
  out.samples = std::move(samples);
  out.stats = compute_series_stats(out.samples);
  out.acceptance_local =
      proposed_local ? static_cast<double>(accepted_local) / proposed_local
                     : 0.0;
  out.acceptance_global =
      proposed_global ? static_cast<double>(accepted_global) / proposed_global
                      : 0.0;
  return out;
}

}  // namespace

PathEnsembleStats run_pimc_tim(const QubitModel& model,
                               const PimcConfig& config) {
  config.validate();
  model.validate();
  if (!model.is_tim()) {
    throw std::invalid_argument(
        "run_pimc_tim: model must be a TIM (ZZ couplings only)");
  }
  for (int k = 0; k < model.n_qubits; ++k) {
    if (!(model.delta_ghz[k] > 0.0)) {
      throw std::invalid_argument(
          "run_pimc_tim: delta_k = 0 makes J_perp divergent");
    }
  }
  if (model.basis != BasisTag::well) {
    throw std::invalid_argument(
        "run_pimc_tim: expected a well-basis TIM (X tunneling, Z fields)");
  }
  std::vector<ChainResult> chains(config.n_chains);
  if (config.n_chains == 1) {
    chains[0] = run_tim_chain(model, config, 0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(config.n_chains);
    for (int c = 0; c < config.n_chains; ++c) {
      pool.emplace_back([&, c] {
        chains[c] = run_tim_chain(model, config,
                                  static_cast<std::uint64_t>(c));
      });
    }
    for (auto& t : pool) t.join();
  }
  return combine_chains(chains);
}

}  // namespace fluxsim
