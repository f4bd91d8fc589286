#include "fluxsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fluxsim/units.hpp"

namespace fluxsim {

namespace {

std::string strip(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string without_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool tokenize_numbers(const std::string& s, std::vector<double>* out) {
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) return false;
      out->push_back(v);
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool RawConfig::has(const std::string& key) const {
  return numbers.count(key) > 0 || words.count(key) > 0;
}

RawConfig parse_raw_config(const std::string& text) {
  RawConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip(without_comment(line));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    const std::string key = strip(line.substr(0, eq));
    std::string value = strip(line.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    }
    if (cfg.has(key)) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": duplicate key '" + key + "'");
    }
    if (!value.empty() && value.front() == '[') {
      // bracketed block: gather rows until the closing bracket
      std::vector<std::vector<double>> rows;
      std::string body = value.substr(1);
      bool closed = false;
      for (;;) {
        const auto close = body.find(']');
        std::string row_text = body;
        if (close != std::string::npos) {
          row_text = body.substr(0, close);
          closed = true;
        }
        row_text = strip(row_text);
        if (!row_text.empty()) {
          std::vector<double> row;
          if (!tokenize_numbers(row_text, &row)) {
            throw std::invalid_argument("config line " +
                                        std::to_string(lineno) + ": key '" +
                                        key + "': non-numeric matrix entry");
          }
          rows.push_back(std::move(row));
        }
        if (closed) break;
        if (!std::getline(in, body)) {
          throw std::invalid_argument("config: key '" + key +
                                      "': unterminated '['");
        }
        ++lineno;
        body = strip(without_comment(body));
      }
      if (rows.empty()) {
        throw std::invalid_argument("config: key '" + key + "': empty block");
      }
      cfg.numbers[key] = std::move(rows);
    } else {
      std::vector<double> row;
      if (!value.empty() && tokenize_numbers(value, &row) && row.size() == 1) {
        cfg.numbers[key] = {row};
      } else {
        cfg.words[key] = value;
      }
    }
  }
  return cfg;
}

RawConfig load_raw_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_raw_config(ss.str());
}

namespace {

class SpecBuilder {
 public:
  explicit SpecBuilder(const RawConfig& raw) : raw_(raw) {}

  std::vector<std::string> errors;

  bool has(const std::string& key) const { return raw_.has(key); }

  double scalar(const std::string& key, double fallback, bool required = false) {
    const auto it = raw_.numbers.find(key);
    if (it == raw_.numbers.end()) {
      if (required) errors.push_back("missing required key '" + key + "'");
      return fallback;
    }
    if (it->second.size() != 1 || it->second[0].size() != 1) {
      errors.push_back("key '" + key + "' must be a scalar");
      return fallback;
    }
    used_.insert(key);
    return it->second[0][0];
  }

  std::string word(const std::string& key, const std::string& fallback,
                   bool required = false) {
    const auto it = raw_.words.find(key);
    if (it == raw_.words.end()) {
      if (required) errors.push_back("missing required key '" + key + "'");
      return fallback;
    }
    used_.insert(key);
    return it->second;
  }

  // Length-n vector; scalars broadcast.
  bool vector(const std::string& key, int n, Eigen::VectorXd* out) {
    const auto it = raw_.numbers.find(key);
    if (it == raw_.numbers.end()) return false;
    std::vector<double> flat;
    for (const auto& row : it->second) {
      flat.insert(flat.end(), row.begin(), row.end());
    }
    if (flat.size() == 1) {
      *out = Eigen::VectorXd::Constant(n, flat[0]);
    } else if (static_cast<int>(flat.size()) == n) {
      *out = Eigen::Map<Eigen::VectorXd>(flat.data(), n);
    } else {
      errors.push_back("key '" + key + "' must have " + std::to_string(n) +
                       " entries (or a single broadcast value)");
      return false;
    }
    used_.insert(key);
    return true;
  }

  // n x n matrix; scalars broadcast to scalar * identity.
  bool matrix(const std::string& key, int n, Eigen::MatrixXd* out) {
    const auto it = raw_.numbers.find(key);
    if (it == raw_.numbers.end()) return false;
    const auto& rows = it->second;
    if (rows.size() == 1 && rows[0].size() == 1) {
      *out = rows[0][0] * Eigen::MatrixXd::Identity(n, n);
    } else {
      if (static_cast<int>(rows.size()) != n) {
        errors.push_back("key '" + key + "' must be a " + std::to_string(n) +
                         "x" + std::to_string(n) + " matrix");
        return false;
      }
      out->resize(n, n);
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n) {
          errors.push_back("key '" + key + "' row " + std::to_string(i + 1) +
                           " must have " + std::to_string(n) + " entries");
          return false;
        }
        for (int j = 0; j < n; ++j) (*out)(i, j) = rows[i][j];
      }
    }
    used_.insert(key);
    return true;
  }

  std::vector<int> int_list(const std::string& key) {
    std::vector<int> out;
    const auto it = raw_.numbers.find(key);
    if (it == raw_.numbers.end()) return out;
    for (const auto& row : it->second) {
      for (double v : row) {
        if (v < 1 || v != std::floor(v)) {
          errors.push_back("key '" + key + "' must list positive integers");
          return {};
        }
        out.push_back(static_cast<int>(v));
      }
    }
    used_.insert(key);
    return out;
  }

  std::vector<double> double_list(const std::string& key) {
    std::vector<double> out;
    const auto it = raw_.numbers.find(key);
    if (it == raw_.numbers.end()) return out;
    for (const auto& row : it->second) {
      out.insert(out.end(), row.begin(), row.end());
    }
    used_.insert(key);
    return out;
  }

  void check_unknown() {
    for (const auto& [k, v] : raw_.numbers) {
      if (!used_.count(k)) errors.push_back("unknown key '" + k + "'");
    }
    for (const auto& [k, v] : raw_.words) {
      if (!used_.count(k)) errors.push_back("unknown key '" + k + "'");
    }
  }

 private:
  const RawConfig& raw_;
  std::set<std::string> used_;
};

const std::vector<std::string> kPipelines = {
    "ed_only",  "pimc_flux", "pimc_tim",        "project",
    "stoqcheck", "figure3",  "figure4",         "convergence_sweep"};

}  // namespace

std::vector<std::string> validate_experiment(const RawConfig& raw,
                                             ExperimentSpec* out) {
  SpecBuilder b(raw);
  ExperimentSpec spec;

  spec.pipeline = b.word("pipeline", "", true);
  if (!spec.pipeline.empty() &&
      std::find(kPipelines.begin(), kPipelines.end(), spec.pipeline) ==
          kPipelines.end()) {
    b.errors.push_back("unrecognized pipeline '" + spec.pipeline + "'");
  }
  spec.temperature_ghz = b.scalar("temperature_ghz", 0.0, true);
  if (b.has("temperature_ghz") && !(spec.temperature_ghz > 0.0)) {
    b.errors.push_back("temperature_ghz must be > 0");
  }
  spec.temperature2_ghz = b.scalar("temperature2_ghz", 0.0);

  const int n = static_cast<int>(b.scalar("n_qubits", 0.0, true));
  if (b.has("n_qubits") && n < 1) {
    b.errors.push_back("n_qubits must be a positive integer");
  }

  if (n >= 1) {
    CircuitSpec& c = spec.circuit;
    c.n_qubits = n;
    const bool has_c = b.matrix("capacitance_ff", n, &c.capacitance_ff);
    const bool has_ec = b.matrix("ec_ghz", n, &c.ec_ghz);
    if (has_c == has_ec) {
      b.errors.push_back(
          "exactly one of capacitance_ff / ec_ghz must be given");
    }
    const bool has_l = b.matrix("inductance_nh", n, &c.inductance_nh);
    const bool has_el = b.matrix("el_ghz", n, &c.el_ghz);
    if (has_l == has_el) {
      b.errors.push_back("exactly one of inductance_nh / el_ghz must be given");
    }
    Eigen::VectorXd ej, cjj, pq;
    const bool has_ej = b.vector("ej_over_h_ghz", n, &ej);
    const bool has_cjj = b.vector("phi_cjj_x_over_pi", n, &cjj);
    const bool has_pq = b.vector("phi_q_x_over_pi", n, &pq);
    if (!has_ej) b.errors.push_back("missing required key 'ej_over_h_ghz'");
    if (!has_cjj) b.errors.push_back("missing required key 'phi_cjj_x_over_pi'");
    if (!has_pq) b.errors.push_back("missing required key 'phi_q_x_over_pi'");
    if (has_ej && has_cjj && has_pq) {
      for (int k = 0; k < n; ++k) {
        Junction j;
        j.ej_over_h_ghz = ej[k];
        j.phi_cjj_x = cjj[k] * units::pi;
        j.phi_q_x = pq[k] * units::pi;
        c.junctions.push_back(j);
      }
      try {
        c.validate();
      } catch (const std::exception& e) {
        b.errors.push_back(e.what());
      }
    }
  }

  spec.sweep_m = b.int_list("sweep_m");
  spec.tim_sweep_m = b.int_list("tim_sweep_m");
  spec.sweep2_m = b.int_list("sweep2_m");
  spec.sweep_cc_ff = b.double_list("sweep_cc_ff");

  spec.pimc.beta_tilde_ns = 1.0;  // set per point from the temperature
  spec.pimc.trotter_m = static_cast<int>(b.scalar("trotter_m", 50.0));
  spec.pimc.total_iterations =
      static_cast<long long>(b.scalar("total_iterations", 30e6));
  spec.pimc.equilibration_iterations =
      static_cast<long long>(b.scalar("equilibration_iterations", 5e6));
  spec.pimc.sample_stride = static_cast<int>(b.scalar("sample_stride", 1000.0));
  spec.pimc.local_update_prob = b.scalar("local_update_prob", 0.9);
  spec.pimc.shift_halfwidth = b.scalar("shift_halfwidth", 0.75);
  spec.pimc.rng_seed = static_cast<std::uint64_t>(b.scalar("seed", 1.0));
  spec.pimc.n_chains = static_cast<int>(b.scalar("n_chains", 1.0));
  try {
    spec.pimc.validate();
  } catch (const std::exception& e) {
    b.errors.push_back(e.what());
  }

  spec.n_states = static_cast<int>(b.scalar("n_states", 40.0));
  if (spec.n_states < 1 || spec.n_states > 64) {
    b.errors.push_back("n_states must be in [1, 64]");
  }
  spec.grid_points = static_cast<int>(b.scalar("grid_points", 0.0));
  spec.grid_half_width = b.scalar("grid_half_width", 3.0);
  spec.ec0_ghz = b.scalar("ec0_ghz", 0.0);
  spec.dump_samples = b.scalar("dump_samples", 0.0) != 0.0;

  const std::string skk = b.word("tim_skk", "first_order");
  if (skk == "first_order") {
    spec.tim_scaling = TimCosScaling::first_order;
  } else if (skk == "scaled") {
    spec.tim_scaling = TimCosScaling::scaled;
  } else {
    b.errors.push_back("tim_skk must be 'first_order' or 'scaled'");
  }

  b.check_unknown();
  if (out && b.errors.empty()) *out = spec;
  return b.errors;
}

ExperimentSpec parse_experiment(const RawConfig& raw) {
  ExperimentSpec spec;
  const auto errs = validate_experiment(raw, &spec);
  if (!errs.empty()) {
    std::string msg = "invalid experiment config:";
    for (const auto& e : errs) msg += "\n  - " + e;
    throw std::invalid_argument(msg);
  }
  return spec;
}

}  // namespace fluxsim
