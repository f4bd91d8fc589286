#include "fluxsim/experiment.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "fluxsim/rng.hpp"
#include "fluxsim/spectral.hpp"
#include "fluxsim/stoquastic.hpp"
#include "fluxsim/units.hpp"

namespace fluxsim {

namespace {

using nlohmann::json;

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (long i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json stats_json(const PathEnsembleStats& st) {
  return json{{"mean_energy_ghz", st.mean_energy_ghz},
              {"std_error_ghz", st.std_error_ghz},
              {"autocorrelation_time", st.autocorrelation_time},
              {"n_samples", st.n_samples},
              {"acceptance_local", st.acceptance_local},
              {"acceptance_global", st.acceptance_global}};
}

json model_json(const QubitModel& m) {
  json couplings = json::array();
  for (const auto& pc : m.couplings) {
    json beta = json::array();
    for (int i = 0; i < 3; ++i) {
      json row = json::array();
      for (int j = 0; j < 3; ++j) row.push_back(pc.beta_ghz(i, j));
      beta.push_back(row);
    }
    couplings.push_back(json{{"pair", {pc.k, pc.l}},
                             {"beta_ghz", beta},
                             {"beta_rank", beta_rank(pc.beta_ghz)}});
  }
  return json{{"n_qubits", m.n_qubits},
              {"delta_ghz", to_json(m.delta_ghz)},
              {"epsilon_ghz", to_json(m.epsilon_ghz)},
              {"couplings", couplings},
              {"basis", m.basis == BasisTag::well ? "well" : "energy"}};
}

json spec_provenance(const ExperimentSpec& spec) {
  json c;
  c["n_qubits"] = spec.circuit.n_qubits;
  if (spec.circuit.capacitance_ff.size() > 0) {
    c["capacitance_ff"] = to_json(spec.circuit.capacitance_ff);
  }
  if (spec.circuit.ec_ghz.size() > 0) c["ec_ghz"] = to_json(spec.circuit.ec_ghz);
  if (spec.circuit.inductance_nh.size() > 0) {
    c["inductance_nh"] = to_json(spec.circuit.inductance_nh);
  }
  if (spec.circuit.el_ghz.size() > 0) c["el_ghz"] = to_json(spec.circuit.el_ghz);
  json junctions = json::array();
  for (const auto& j : spec.circuit.junctions) {
    junctions.push_back(json{{"ej_over_h_ghz", j.ej_over_h_ghz},
                             {"phi_cjj_x_rad", j.phi_cjj_x},
                             {"phi_q_x_rad", j.phi_q_x}});
  }
  c["junctions"] = junctions;
  return json{
      {"pipeline", spec.pipeline},
      {"temperature_ghz", spec.temperature_ghz},
      {"temperature2_ghz", spec.temperature2_ghz},
      {"circuit", c},
      {"sweep_m", spec.sweep_m},
      {"tim_sweep_m", spec.tim_sweep_m},
      {"sweep2_m", spec.sweep2_m},
      {"sweep_cc_ff", spec.sweep_cc_ff},
      {"n_states", spec.n_states},
      {"grid_points", spec.grid_points},
      {"grid_half_width", spec.grid_half_width},
      {"ec0_ghz", spec.ec0_ghz},
      {"tim_skk", spec.tim_scaling == TimCosScaling::first_order
                      ? "first_order"
                      : "scaled"},
      {"pimc",
       json{{"total_iterations", spec.pimc.total_iterations},
            {"equilibration_iterations", spec.pimc.equilibration_iterations},
            {"sample_stride", spec.pimc.sample_stride},
            {"local_update_prob", spec.pimc.local_update_prob},
            {"shift_halfwidth", spec.pimc.shift_halfwidth},
            {"seed", spec.pimc.rng_seed},
            {"n_chains", spec.pimc.n_chains},
            {"trotter_m", spec.pimc.trotter_m}}},
  };
}

FluxGrid make_grid(const ExperimentSpec& spec, int dim) {
  FluxGrid g = default_grid(dim);
  g.half_width = spec.grid_half_width;
  if (spec.grid_points > 0) g.points_per_dim = spec.grid_points;
  return g;
}

struct CsvRow {
  std::string series;
  int m = 0;
  double temperature_ghz = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double tau = 0.0;
  double acc_local = 0.0;
  double acc_global = 0.0;
  double exact_ref = 0.0;
};

void write_outputs(const ExperimentSpec& spec, const RunOptions& opt,
                   json results, const std::vector<CsvRow>& rows) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.output_dir);
  results["config"] = spec_provenance(spec);

  std::ofstream jf(fs::path(opt.output_dir) / "results.json");
  jf << results.dump(2) << "\n";

  std::ofstream cf(fs::path(opt.output_dir) / "results.csv");
  cf.precision(12);
  cf << "series,M,temperature_ghz,estimate_ghz,std_error_ghz,"
        "autocorrelation_time,acceptance_local,acceptance_global,"
        "exact_reference_ghz\n";
  for (const auto& r : rows) {
    cf << r.series << "," << r.m << "," << r.temperature_ghz << ","
       << r.estimate << "," << r.std_error << "," << r.tau << ","
       << r.acc_local << "," << r.acc_global << "," << r.exact_ref << "\n";
  }

  std::ofstream pf(fs::path(opt.output_dir) / "plot_data.csv");
  pf.precision(12);
  pf << "series,M,estimate_ghz,std_error_ghz,reference_ghz\n";
  for (const auto& r : rows) {
    pf << r.series << "," << r.m << "," << r.estimate << "," << r.std_error
       << "," << r.exact_ref << "\n";
  }
}

void dump_samples(const RunOptions& opt, const std::string& tag,
                  const PathEnsembleStats& st) {
  namespace fs = std::filesystem;
  std::ofstream f(fs::path(opt.output_dir) / ("samples_" + tag + ".csv"));
  f.precision(12);
  f << "sample,energy_ghz\n";
  for (std::size_t i = 0; i < st.samples.size(); ++i) {
    f << i << "," << st.samples[i] << "\n";
  }
}

// Bounded worker pool over sweep points; results land in caller-indexed
// slots so aggregation order is deterministic.
void parallel_for(int n_jobs, int threads, const std::function<void(int)>& fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (threads > 8) threads = 8;
  }
  threads = std::min(threads, n_jobs);
  if (threads <= 1) {
    for (int i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i >= n_jobs) break;
          fn(i);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

PimcConfig point_config(const ExperimentSpec& spec, double temperature_ghz,
                        int trotter_m, int point_index) {
  PimcConfig c = spec.pimc;
  c.beta_tilde_ns = 1.0 / temperature_ghz;
  c.trotter_m = trotter_m;
  // decorrelated deterministic seed per sweep point
  std::uint64_t mix = c.rng_seed;
  for (int i = 0; i <= point_index; ++i) splitmix64_next(mix);
  c.rng_seed = mix;
  return c;
}

struct TimPipeline {
  QubitModel model;
  double offset_ghz = 0.0;
  HamiltonianParams transformed;
};

TimPipeline build_tim_pipeline(const ExperimentSpec& spec,
                               const HamiltonianParams& params) {
  TimPipeline out;
  const double ec0 = spec.ec0_ghz > 0.0 ? spec.ec0_ghz : default_ec0(params);
  out.transformed = canonical_transform(params, ec0);
  std::vector<SpectralResult> qubits;
  for (int k = 0; k < params.n(); ++k) {
    HamiltonianParams hk =
        tim_single_qubit_params(out.transformed, k, spec.tim_scaling);
    hk.phi_q_x[0] = units::pi;  // solve at the symmetric point
    qubits.push_back(solve_spectrum(hk, make_grid(spec, 1),
                                    std::min(spec.n_states, 16)));
  }
  out.model = build_tim(qubits, out.transformed);
  out.offset_ghz = tim_energy_offset(qubits, out.transformed);
  return out;
}

// Exact-diagonalization thermal reference for N <= 2.
struct EdReference {
  SpectralResult spectrum;
  double ground_ghz = 0.0;
};

EdReference ed_reference(const ExperimentSpec& spec,
                         const HamiltonianParams& params) {
  EdReference out{solve_spectrum(params, make_grid(spec, params.n()),
                                 spec.n_states),
                  0.0};
  out.ground_ghz = out.spectrum.energies_ghz.front();
  return out;
}

json ed_json(const EdReference& ed, double temperature_ghz) {
  json out{{"ground_energy_ghz", ed.ground_ghz},
           {"energies_ghz", ed.spectrum.energies_ghz},
           {"u_min_ghz", ed.spectrum.u_min_ghz}};
  if (temperature_ghz > 0.0) {
    out["thermal_energy_ghz"] =
        thermal_average_energy(ed.spectrum, 1.0 / temperature_ghz);
  }
  return out;
}

std::string format_m_tag(const std::string& series, double temp, int m) {
  std::ostringstream os;
  os << series << "_T" << temp << "_M" << m;
  std::string s = os.str();
  for (auto& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

void run_flux_sweep(const ExperimentSpec& spec, const RunOptions& opt,
                    const HamiltonianParams& params, double temperature,
                    const std::vector<int>& m_values, double exact_ref,
                    int seed_salt, std::vector<CsvRow>* rows, json* points) {
  std::vector<PathEnsembleStats> stats(m_values.size());
  parallel_for(static_cast<int>(m_values.size()), opt.threads, [&](int i) {
    const PimcConfig cfg =
        point_config(spec, temperature, m_values[i], seed_salt + i);
    stats[i] = run_pimc_flux(params, cfg);
  });
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    const auto& st = stats[i];
    CsvRow row{"pimc_flux", m_values[i], temperature, st.mean_energy_ghz,
               st.std_error_ghz, st.autocorrelation_time,
               st.acceptance_local, st.acceptance_global, exact_ref};
    rows->push_back(row);
    json p = stats_json(st);
    p["M"] = m_values[i];
    p["temperature_ghz"] = temperature;
    p["exact_reference_ghz"] = exact_ref;
    points->push_back(p);
    if (spec.dump_samples) {
      dump_samples(opt, format_m_tag("flux", temperature, m_values[i]), st);
    }
  }
}

void run_tim_sweep(const ExperimentSpec& spec, const RunOptions& opt,
                   const TimPipeline& tim, double temperature,
                   const std::vector<int>& m_values, double exact_ref,
                   int seed_salt, std::vector<CsvRow>* rows, json* points) {
  std::vector<PathEnsembleStats> stats(m_values.size());
  parallel_for(static_cast<int>(m_values.size()), opt.threads, [&](int i) {
    const PimcConfig cfg =
        point_config(spec, temperature, m_values[i], seed_salt + i);
    stats[i] = run_pimc_tim(tim.model, cfg);
  });
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    PathEnsembleStats st = stats[i];
    st.mean_energy_ghz += tim.offset_ghz;  // absolute-energy convention
    CsvRow row{"pimc_tim", m_values[i], temperature, st.mean_energy_ghz,
               st.std_error_ghz, st.autocorrelation_time,
               st.acceptance_local, st.acceptance_global, exact_ref};
    rows->push_back(row);
    json p = stats_json(st);
    p["M"] = m_values[i];
    p["temperature_ghz"] = temperature;
    p["exact_reference_ghz"] = exact_ref;
    p["offset_ghz"] = tim.offset_ghz;
    points->push_back(p);
    if (spec.dump_samples) {
      dump_samples(opt, format_m_tag("tim", temperature, m_values[i]), st);
    }
  }
}

std::vector<int> default_m_sweep() {
  return {2, 3, 5, 8, 12, 20, 30, 50, 100, 150};
}

}  // namespace

void run_experiment(const ExperimentSpec& spec_in, const RunOptions& opt) {
  ExperimentSpec spec = spec_in;
  if (opt.seed_override >= 0) {
    spec.pimc.rng_seed = static_cast<std::uint64_t>(opt.seed_override);
  }
  if (opt.chains_override > 0) spec.pimc.n_chains = opt.chains_override;
  if (!opt.sweep_override.empty()) {
    spec.sweep_m = opt.sweep_override;
    spec.tim_sweep_m = opt.sweep_override;
    spec.sweep2_m = opt.sweep_override;
  }

  HamiltonianParams params;
  try {
    params = build_params(spec.circuit);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("circuit: ") + e.what());
  }

  json results;
  std::vector<CsvRow> rows;
  const double t1 = spec.temperature_ghz;

  try {
    if (spec.pipeline == "ed_only") {
      const auto ed = ed_reference(spec, params);
      results["ed"] = ed_json(ed, t1);
      for (std::size_t i = 0; i < ed.spectrum.energies_ghz.size(); ++i) {
        rows.push_back(CsvRow{"ed_level", static_cast<int>(i), t1,
                              ed.spectrum.energies_ghz[i], 0.0, 0.0, 0.0, 0.0,
                              ed.spectrum.energies_ghz[i]});
      }
    } else if (spec.pipeline == "pimc_flux" ||
               spec.pipeline == "convergence_sweep") {
      const auto ed = ed_reference(spec, params);
      const double exact = thermal_average_energy(ed.spectrum, 1.0 / t1);
      results["ed"] = ed_json(ed, t1);
      auto ms = spec.sweep_m;
      if (ms.empty()) {
        ms = (spec.pipeline == "convergence_sweep")
                 ? default_m_sweep()
                 : std::vector<int>{spec.pimc.trotter_m};
      }
      json points = json::array();
      run_flux_sweep(spec, opt, params, t1, ms, exact, 0, &rows, &points);
      results["pimc_flux"] = points;
    } else if (spec.pipeline == "pimc_tim") {
      const auto ed = ed_reference(spec, params);
      const double exact = thermal_average_energy(ed.spectrum, 1.0 / t1);
      results["ed"] = ed_json(ed, t1);
      const auto tim = build_tim_pipeline(spec, params);
      results["tim_model"] = model_json(tim.model);
      results["tim_offset_ghz"] = tim.offset_ghz;
      auto ms = spec.tim_sweep_m;
      if (ms.empty()) ms = {spec.pimc.trotter_m};
      json points = json::array();
      run_tim_sweep(spec, opt, tim, t1, ms, exact, 1000, &rows, &points);
      results["pimc_tim"] = points;
    } else if (spec.pipeline == "figure3") {
      const auto ed = ed_reference(spec, params);
      const double exact = thermal_average_energy(ed.spectrum, 1.0 / t1);
      results["ed"] = ed_json(ed, t1);
      auto ms = spec.sweep_m;
      if (ms.empty()) ms = {3, 5, 8, 12, 20, 30, 50};
      json flux_points = json::array();
      run_flux_sweep(spec, opt, params, t1, ms, exact, 0, &rows, &flux_points);
      results["pimc_flux"] = flux_points;
      const auto tim = build_tim_pipeline(spec, params);
      results["tim_model"] = model_json(tim.model);
      results["tim_offset_ghz"] = tim.offset_ghz;
      auto tms = spec.tim_sweep_m;
      if (tms.empty()) tms = {2, 4, 8, 16, 20};
      json tim_points = json::array();
      run_tim_sweep(spec, opt, tim, t1, tms, exact, 1000, &rows, &tim_points);
      results["pimc_tim"] = tim_points;
    } else if (spec.pipeline == "figure4") {
      if (!(spec.temperature2_ghz > 0.0)) {
        throw std::invalid_argument(
            "figure4 pipeline requires temperature2_ghz");
      }
      const auto ed = ed_reference(spec, params);
      const double exact1 = thermal_average_energy(ed.spectrum, 1.0 / t1);
      const double t2 = spec.temperature2_ghz;
      const double exact2 = thermal_average_energy(ed.spectrum, 1.0 / t2);
      results["ed"] = ed_json(ed, t1);
      results["ed"]["thermal_energy2_ghz"] = exact2;
      auto ms = spec.sweep_m;
      if (ms.empty()) ms = {3, 5, 8, 12, 20, 30, 50};
      json p1 = json::array();
      run_flux_sweep(spec, opt, params, t1, ms, exact1, 0, &rows, &p1);
      results["pimc_flux"] = p1;
      auto ms2 = spec.sweep2_m;
      if (ms2.empty()) {
        ms2.reserve(ms.size());
        for (int m : ms) ms2.push_back(3 * m);
      }
      json p2 = json::array();
      run_flux_sweep(spec, opt, params, t2, ms2, exact2, 5000, &rows, &p2);
      results["pimc_flux_low_temperature"] = p2;
    } else if (spec.pipeline == "project" || spec.pipeline == "stoqcheck") {
      if (params.n() != 2) {
        throw std::invalid_argument(spec.pipeline +
                                    " pipeline requires n_qubits = 2");
      }
      // Solve each qubit at its symmetric point; tilts enter the fields.
      std::vector<SpectralResult> qubits;
      std::vector<double> tilts;
      for (int k = 0; k < 2; ++k) {
        HamiltonianParams q;
        q.ec_ghz = params.ec_ghz.block(k, k, 1, 1);
        q.el_ghz = params.el_ghz.block(k, k, 1, 1);
        q.ej_eff_ghz = params.ej_eff_ghz.segment(k, 1);
        q.phi_q_x = Eigen::VectorXd::Constant(1, units::pi);
        q.s_scale = Eigen::MatrixXd::Identity(1, 1);
        tilts.push_back(params.phi_q_x[k] - units::pi);
        qubits.push_back(solve_spectrum(q, make_grid(spec, 1),
                                        std::min(spec.n_states, 16)));
      }
      const double ec12 = params.ec_ghz(0, 1);
      const double el12 = params.el_ghz(0, 1);
      const QubitModel well = project_two_qubit(qubits[0], qubits[1], ec12,
                                                el12, tilts[0], tilts[1]);
      results["projected_model"] = model_json(well);
      if (std::abs(tilts[0]) < 1e-12 && std::abs(tilts[1]) < 1e-12) {
        results["projected_model_energy_basis"] = model_json(
            project_symmetric_energy_basis(qubits[0], qubits[1], ec12, el12));
      }
      if (!spec.sweep_cc_ff.empty()) {
        json sweep = json::array();
        for (std::size_t i = 0; i < spec.sweep_cc_ff.size(); ++i) {
          const double cc = spec.sweep_cc_ff[i];
          CircuitSpec cs = spec.circuit;
          if (cs.capacitance_ff.size() == 0) {
            throw std::invalid_argument(
                "sweep_cc_ff requires capacitance_ff input");
          }
          cs.capacitance_ff(0, 1) = cs.capacitance_ff(1, 0) = -cc;
          const HamiltonianParams pp = build_params(cs);
          const QubitModel mm = project_two_qubit(
              qubits[0], qubits[1], pp.ec_ghz(0, 1), pp.el_ghz(0, 1),
              tilts[0], tilts[1]);
          const double jyy = mm.couplings.front().beta_ghz(1, 1);
          sweep.push_back(json{{"cc_ff", cc},
                               {"ec12_ghz", pp.ec_ghz(0, 1)},
                               {"j_yy_ghz", jyy}});
          rows.push_back(CsvRow{"j_yy_vs_cc", static_cast<int>(i), t1, jyy,
                                0.0, 0.0, 0.0, 0.0, pp.ec_ghz(0, 1)});
        }
        results["coupling_sweep"] = sweep;
      }
      if (spec.pipeline == "stoqcheck") {
        const StoqReport rep = check_stoquastic(well);
        json jr{{"verdict", to_string(rep.verdict)},
                {"transform", rep.transform},
                {"max_offdiag_violation_ghz", rep.max_offdiag_violation_ghz}};
        results["stoqcheck"] = jr;
      }
    } else {
      throw std::invalid_argument("unknown pipeline: " + spec.pipeline);
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalError(e.what());
  }

  write_outputs(spec, opt, std::move(results), rows);
}

}  // namespace fluxsim
