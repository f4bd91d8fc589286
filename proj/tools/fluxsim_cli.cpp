// Command-line front end: validates experiment configs and runs the
// ED / projection / PIMC pipelines, writing JSON/CSV artifacts.
//
// Exit codes: 0 success, 1 config error, 2 numerical failure.

#include <CLI11.hpp>
#include <iostream>

#include "fluxsim/config.hpp"
#include "fluxsim/experiment.hpp"

namespace {

int run_command(const std::string& config_path, const fluxsim::RunOptions& opt) {
  fluxsim::ExperimentSpec spec;
  try {
    const auto raw = fluxsim::load_raw_config(config_path);
    spec = fluxsim::parse_experiment(raw);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  try {
    fluxsim::run_experiment(spec, opt);
  } catch (const fluxsim::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "wrote " << opt.output_dir << "/results.json\n";
  return 0;
}

int validate_command(const std::string& config_path) {
  fluxsim::RawConfig raw;
  try {
    raw = fluxsim::load_raw_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  const auto errors = fluxsim::validate_experiment(raw, nullptr);
  if (errors.empty()) {
    std::cout << "ok: " << config_path << " is valid\n";
    return 0;
  }
  std::cerr << config_path << ": " << errors.size() << " violation(s)\n";
  for (const auto& e : errors) std::cerr << "  - " << e << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fluxsim: coupled flux-qubit spectra, effective qubit models, "
               "and sign-problem-free path-integral Monte Carlo"};
  app.require_subcommand(1);

  std::string config_path;
  fluxsim::RunOptions opt;
  long long seed = -1;
  std::string m_list;

  auto* run = app.add_subcommand("run", "run the configured pipeline");
  run->add_option("--config", config_path, "experiment config file")
      ->required();
  run->add_option("--out", opt.output_dir, "output directory");
  run->add_option("--seed", seed, "override the RNG seed");
  run->add_option("--chains", opt.chains_override,
                  "override the number of Monte Carlo chains");
  run->add_option("--threads", opt.threads, "worker threads for sweeps");

  auto* validate = app.add_subcommand("validate",
                                      "validate a config without running");
  validate->add_option("--config", config_path, "experiment config file")
      ->required();

  auto* sweep = app.add_subcommand(
      "sweep", "run the pipeline with an explicit Trotter sweep");
  sweep->add_option("--config", config_path, "experiment config file")
      ->required();
  sweep->add_option("--m", m_list, "comma-separated Trotter slice counts")
      ->required();
  sweep->add_option("--out", opt.output_dir, "output directory");
  sweep->add_option("--seed", seed, "override the RNG seed");
  sweep->add_option("--chains", opt.chains_override,
                    "override the number of Monte Carlo chains");
  sweep->add_option("--threads", opt.threads, "worker threads for sweeps");

  CLI11_PARSE(app, argc, argv);
  opt.seed_override = seed;

  if (validate->parsed()) return validate_command(config_path);
  if (sweep->parsed()) {
    std::stringstream ss(m_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        opt.sweep_override.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        std::cerr << "config error: bad --m entry '" << tok << "'\n";
        return 1;
      }
    }
    if (opt.sweep_override.empty()) {
      std::cerr << "config error: --m list is empty\n";
      return 1;
    }
  }
  return run_command(config_path, opt);
}
