#include "nmrctx/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "default_config.hpp"

namespace nmrctx {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  return j.at(key);
}

// Numbers or angle strings such as "pi/2".
double angle_value(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    try {
      return GridSpec::parse_angle(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": expected a number or angle string");
}

SpinSystemConfig parse_spin_system(const json& j, const std::string& where) {
  SpinSystemConfig s;
  s.shifts_hz = require(j, "shifts_hz", where).get<std::vector<double>>();
  s.j_hz = require(j, "j_hz", where).get<std::vector<std::vector<double>>>();
  s.n_spins = static_cast<int>(s.shifts_hz.size());
  s.t1 = j.value("t1_s", 6.3);
  s.t2_star = j.value("t2_star_s", 0.8);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

std::vector<int> spin_list(const json& j, const std::string& where, int n_spins) {
  if (!j.is_array()) throw ConfigError(where + ": 'spins' must be an array");
  const auto spins = j.get<std::vector<int>>();
  if (spins.empty()) throw ConfigError(where + ": 'spins' is empty");
  for (int s : spins) {
    if (s < 1 || s > n_spins) throw ConfigError(where + ": spin index out of range");
  }
  return spins;
}

PulseSequence parse_sequence(const json& arr, const SpinSystemConfig& mol) {
  if (!arr.is_array()) throw ConfigError("pseudopure_sequence must be an array");
  PulseSequence seq;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const json& ev = arr[k];
    const std::string where = "pseudopure_sequence[" + std::to_string(k) + "]";
    const std::string type = require(ev, "type", where).get<std::string>();
    if (type == "rotation") {
      Rotation r;
      r.spins = spin_list(require(ev, "spins", where), where, mol.n_spins);
      r.angle = angle_value(require(ev, "angle", where), where);
      r.phase = ev.contains("phase") ? angle_value(ev.at("phase"), where) : 0.0;
      seq.push_back(r);
    } else if (type == "j_evolution") {
      const std::vector<int> pair = spin_list(require(ev, "spins", where), where, mol.n_spins);
      if (pair.size() != 2 || pair[0] == pair[1]) {
        throw ConfigError(where + ": j_evolution needs two distinct spins");
      }
      JEvolution je;
      je.spin_a = pair[0];
      je.spin_b = pair[1];
      je.refocused = ev.value("refocused", true);
      const json& d = require(ev, "duration", where);
      if (d.is_string() && d.get<std::string>() == "1/(2J)") {
        const double jc = mol.coupling(pair[0], pair[1]);
        if (jc == 0.0) throw ConfigError(where + ": 1/(2J) delay for an uncoupled pair");
        je.duration = 1.0 / (2.0 * std::abs(jc));
      } else if (d.is_number()) {
        je.duration = d.get<double>();
      } else {
        throw ConfigError(where + ": duration must be seconds or \"1/(2J)\"");
      }
      if (je.duration < 0.0) throw ConfigError(where + ": negative duration");
      seq.push_back(je);
    } else if (type == "pfg") {
      seq.push_back(GradientCrush{});
    } else {
      throw ConfigError(where + ": unknown event type '" + type + "'");
    }
  }
  return seq;
}

RunConfig parse_merged(const json& j) {
  RunConfig rc;
  const json& mol = require(j, "molecule", "config");
  rc.molecule = parse_spin_system(mol, "molecule");
  rc.molecule_name = mol.value("name", std::string{});
  rc.molecule_authoritative = mol.value("authoritative", false);

  rc.epsilon = j.value("epsilon", 1e-5);
  try {
    PurityFactor{rc.epsilon};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("epsilon: ") + e.what());
  }

  try {
    rc.grid = GridSpec::parse(j.value("grid", std::string("-pi:pi:pi/4")));
    rc.via = parse_eval_path(j.value("via", std::string("moussa")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const json& nz = require(j, "noise", "config");
  rc.noise_enabled = nz.value("enabled", false);
  rc.noise.t2_star = nz.value("t2_star_s", rc.molecule.t2_star);
  if (nz.contains("t1_s") && !nz.at("t1_s").is_null()) rc.noise.t1 = nz.at("t1_s").get<double>();
  rc.noise.gate_duration_pair = nz.value("gate_duration_pair_s", 0.023);
  rc.noise.gate_duration_triple = nz.value("gate_duration_triple_s", 0.040);
  rc.noise.rf_scale_samples =
      nz.value("rf_scale_samples", std::vector<double>{0.9, 1.0, 1.1});
  rc.noise.ground_population =
      equilibrium_ground_population(PurityFactor(rc.epsilon), rc.molecule.n_spins);
  try {
    rc.noise.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("noise: ") + e.what());
  }

  rc.out_dir = j.value("out", std::string("out"));
  rc.seed = j.value("seed", std::uint64_t{7});
  rc.pseudopure_sequence = parse_sequence(require(j, "pseudopure_sequence", "config"), rc.molecule);

  const json& g = require(j, "grape", "config");
  GrapeSettings& gs = rc.grape;
  gs.segments = g.value("segments", gs.segments);
  gs.segment_duration = g.value("segment_duration_s", gs.segment_duration);
  gs.max_iterations = g.value("max_iterations", gs.max_iterations);
  gs.step_size = g.value("step_size", gs.step_size);
  gs.fidelity_goal = g.value("fidelity_goal", gs.fidelity_goal);
  gs.robustness_samples = g.value("robustness_samples", gs.robustness_samples);
  gs.max_amplitude_hz = g.value("max_amplitude_hz", gs.max_amplitude_hz);
  gs.init_scale = g.value("init_scale", gs.init_scale);
  if (g.contains("spin_system") && !g.at("spin_system").is_null()) {
    gs.spin_system = parse_spin_system(g.at("spin_system"), "grape.spin_system");
  }
  if (gs.segments < 1 || !(gs.segment_duration > 0.0) || gs.max_iterations < 0 ||
      !(gs.max_amplitude_hz > 0.0) || !(gs.step_size > 0.0)) {
    throw ConfigError("grape: invalid optimizer settings");
  }
  return rc;
}

Matrix read_complex_matrix(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
    const auto re = j.at("re").get<std::vector<std::vector<double>>>();
    const auto im = j.contains("im") ? j.at("im").get<std::vector<std::vector<double>>>()
                                     : std::vector<std::vector<double>>{};
    const auto n = static_cast<Eigen::Index>(re.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto ru = static_cast<std::size_t>(r);
      if (static_cast<Eigen::Index>(re[ru].size()) != n) throw ConfigError(path + ": matrix not square");
      for (Eigen::Index c = 0; c < n; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        const double imag = im.empty() ? 0.0 : im.at(ru).at(cu);
        m(r, c) = Complex(re[ru][cu], imag);
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

const std::string& default_config_text() {
  static const std::string text = detail::kDefaultConfigJson;
  return text;
}

RunConfig default_run_config() { return parse_run_config("{}"); }

RunConfig parse_run_config(const std::string& json_text) {
  try {
    json merged = json::parse(default_config_text());
    merged.merge_patch(json::parse(json_text));
    return parse_merged(merged);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_file(path)); }

DensityMatrix load_density_matrix(const std::string& path) {
  try {
    return DensityMatrix(Operator(read_complex_matrix(path)), "file:" + path);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Operator load_operator(const std::string& path) {
  try {
    return Operator(read_complex_matrix(path));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace nmrctx
