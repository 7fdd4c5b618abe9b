#include "nmrctx/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmrctx/moussa.hpp"
#include "nmrctx/pseudospin.hpp"
#include "nmrctx/report.hpp"

namespace nmrctx {

namespace fs = std::filesystem;

namespace {

std::vector<int> parse_levels(const std::string& levels) {
  if (levels == "all") return {0, 1, 2, 3};
  if (levels.size() == 1 && levels[0] >= '0' && levels[0] <= '3') return {levels[0] - '0'};
  throw ConfigError("--l must be 0, 1, 2, 3 or all (got '" + levels + "')");
}

std::optional<NoiseParams> active_noise(const RunConfig& rc) {
  if (!rc.noise_enabled) return std::nullopt;
  if (rc.via != EvalPath::moussa) throw ConfigError("noise is only modeled on the moussa path");
  return rc.noise;
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

DensityMatrix resolve_state(const RunConfig& rc, const std::string& name) {
  if (name == "thermal") return thermal_state(rc.molecule, PurityFactor(rc.epsilon));
  if (name == "mixed") return maximally_mixed(2);
  if (starts_with(name, "ket:")) {
    const std::string idx = name.substr(4);
    if (idx.size() != 1 || idx[0] < '0' || idx[0] > '3') {
      throw ConfigError("ket index must be 0..3 (got '" + idx + "')");
    }
    return basis_state(idx[0] - '0', 2);
  }
  if (starts_with(name, "file:")) {
    DensityMatrix rho = load_density_matrix(name.substr(5));
    if (rho.dim() != 4 && rho.dim() != 8) throw ConfigError(name + ": expected a 4x4 or 8x8 state");
    return rho;
  }
  throw ConfigError("unknown state '" + name + "' (thermal | mixed | ket:N | file:PATH)");
}

double target_angle(const std::string& target, std::size_t prefix) {
  if (target.size() <= prefix || target[prefix - 1] != ':') {
    throw ConfigError("target '" + target.substr(0, 2) + "' needs an angle, e.g. " +
                      target.substr(0, 2) + ":pi/4");
  }
  try {
    return GridSpec::parse_angle(target.substr(prefix));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

int cmd_sweep(const RunConfig& rc, const std::string& l_spec, std::ostream& out) {
  const std::vector<int> levels = parse_levels(l_spec);
  const std::optional<NoiseParams> noise = active_noise(rc);
  try {
    rc.grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  // Compute everything first so a failure leaves no partial output.
  std::vector<SweepResult> results;
  for (int l : levels) results.push_back(chsh_sweep(l, rc.grid, rc.via, noise));

  const fs::path dir(rc.out_dir);
  for (const SweepResult& r : results) {
    const std::string stem = "sweep_l" + std::to_string(r.l);
    write_file_atomic(dir / (stem + ".csv"), sweep_csv(r));
    write_file_atomic(dir / (stem + ".json"), sweep_summary_json(r));
    write_file_atomic(dir / (stem + ".svg"), sweep_svg(r));
    out << "l=" << r.l << "  max " << format_number(r.max_value, 12) << " at (beta, eta) = ("
        << format_number(r.argmax_beta, 12) << ", " << format_number(r.argmax_eta, 12) << ")"
        << (r.max_value > kChshClassicalBound ? "  violates 2" : "") << "\n";
  }
  return kExitOk;
}

int cmd_state_independent(const RunConfig& rc, const std::string& state_spec, std::ostream& out) {
  const std::optional<NoiseParams> noise = active_noise(rc);
  const DensityMatrix rho = resolve_state(rc, state_spec);
  const StateIndependentTerms t = state_independent_terms(rho, rc.via, noise);
  write_file_atomic(fs::path(rc.out_dir) / "state_independent.json",
                    state_independent_json(t, state_spec, rc.via, noise));
  for (std::size_t k = 0; k < t.expectations.size(); ++k) {
    out << (t.signs[k] > 0 ? "+" : "-") << "<" << (k < 3 ? "row " : "col ") << (k % 3 + 1)
        << "> = " << format_number(t.expectations[k], 12) << "\n";
  }
  out << "total " << format_number(t.total, 12) << " (classical <= 4, quantum 6)\n";
  return kExitOk;
}

int cmd_bounds(std::ostream& out) {
  out << bounds_report(nchv_bound_chsh(), nchv_bound_state_independent());
  return kExitOk;
}

Operator resolve_grape_target(const std::string& target, std::string& name) {
  if (target == "identity") {
    name = "identity";
    return Operator::identity(8);
  }
  if (starts_with(target, "file:")) {
    name = fs::path(target.substr(5)).stem().string();
    Operator u = load_operator(target.substr(5));
    if (u.dim() != 8) throw ConfigError(target + ": expected an 8x8 register unitary");
    if (!u.is_unitary()) throw ConfigError(target + ": matrix is not unitary");
    return u;
  }
  const GammaSet g = make_gamma_set();
  if (target == "cA") {
    name = "cA";
    return controlled_gate(g.gx);
  }
  if (target == "cC") {
    name = "cC";
    return controlled_gate(g.gz);
  }
  if (starts_with(target, "cB")) {
    name = "cB";
    return controlled_gate(make_observables(target_angle(target, 3), 0.0).b);
  }
  if (starts_with(target, "cD")) {
    name = "cD";
    return controlled_gate(make_observables(0.0, target_angle(target, 3)).d);
  }
  if (target.size() == 4 && starts_with(target, "cP") && target[2] >= '1' && target[2] <= '3' &&
      target[3] >= '1' && target[3] <= '3') {
    name = target;
    return controlled_gate(make_peres_mermin().at(target[2] - '0', target[3] - '0'));
  }
  throw ConfigError("unknown GRAPE target '" + target +
                    "' (identity | cA | cB:<beta> | cC | cD:<eta> | cPij | file:PATH)");
}

const SpinSystemConfig& grape_spin_system(const RunConfig& rc) {
  return rc.grape.spin_system ? *rc.grape.spin_system : rc.molecule;
}

GrapeConfig make_grape_config(const RunConfig& rc, const Operator& target) {
  GrapeConfig c;
  c.target = target;
  c.n_segments = rc.grape.segments;
  c.segment_duration = rc.grape.segment_duration;
  c.max_iterations = rc.grape.max_iterations;
  c.step_size = rc.grape.step_size;
  c.fidelity_goal = rc.grape.fidelity_goal;
  c.robustness_samples = rc.grape.robustness_samples;
  c.max_amplitude = 2.0 * std::numbers::pi * rc.grape.max_amplitude_hz;
  c.init_scale = rc.grape.init_scale;
  c.seed = rc.seed;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

int cmd_grape(const RunConfig& rc, const std::string& target, std::ostream& out) {
  std::string name;
  const Operator u = resolve_grape_target(target, name);
  const GrapeConfig config = make_grape_config(rc, u);
  const SpinSystemConfig& sys = grape_spin_system(rc);

  const GrapeResult result = grape_optimize(config, sys);
  const RobustnessReport rob = robustness_report(result.controls, config, sys);
  const fs::path dir(rc.out_dir);
  write_file_atomic(dir / ("grape_" + name + ".csv"), controls_csv(result.controls));
  write_file_atomic(dir / ("grape_" + name + ".json"), grape_json(target, config, result, rob));

  out << "target " << target << ": " << to_string(result.status) << " after " << result.iterations
      << " iterations, mean fidelity " << format_number(result.fidelity, 8) << " (goal "
      << format_number(config.fidelity_goal, 4) << ")\n";
  for (std::size_t k = 0; k < rob.kappas.size(); ++k) {
    out << "  kappa " << format_number(rob.kappas[k], 4) << "  F " << format_number(rob.fidelities[k], 8)
        << "\n";
  }
  if (result.fidelity < config.fidelity_goal) {
    out << "fidelity goal not met; best controls written\n";
    return kExitGoalNotMet;
  }
  return kExitOk;
}

int cmd_prepare(const RunConfig& rc, std::ostream& out) {
  const DensityMatrix thermal = thermal_state(rc.molecule, PurityFactor(rc.epsilon));
  const DensityMatrix prepared = run_sequence(thermal, rc.pseudopure_sequence, rc.molecule);
  const DeviationMatch m = match_pseudopure(prepared, 0);
  nlohmann::ordered_json j;
  j["molecule"] = rc.molecule_name;
  j["molecule_authoritative"] = rc.molecule_authoritative;
  j["epsilon"] = rc.epsilon;
  j["events"] = rc.pseudopure_sequence.size();
  j["cosine"] = m.cosine;
  j["scale"] = m.scale;
  j["diagonal"] = nlohmann::ordered_json::array();
  for (int k = 0; k < prepared.dim(); ++k) j["diagonal"].push_back(prepared.op()(k, k).real());
  write_file_atomic(fs::path(rc.out_dir) / "prepare.json", j.dump(2) + "\n");
  out << "pseudopure |000>: cosine " << format_number(m.cosine, 15) << ", scale "
      << format_number(m.scale, 8) << "\n";
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NMR contextuality simulator", "nmrctx"};
  app.require_subcommand(1);

  struct Common {
    std::string config, grid, noise, via, out;
    std::optional<std::uint64_t> seed;
  };
  Common common;
  std::string l_spec = "all";
  std::string state_spec = "thermal";
  std::string target = "cC";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON config file (defaults are built in)");
    sub->add_option("--grid", common.grid, "angle grid start:stop:step, e.g. -pi:pi:pi/4");
    sub->add_option("--noise", common.noise, "decoherence model")->check(CLI::IsMember({"on", "off"}));
    sub->add_option("--via", common.via, "evaluation path")->check(CLI::IsMember({"direct", "moussa"}));
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--seed", common.seed, "RNG seed");
  };

  CLI::App* sweep = app.add_subcommand("sweep", "I_l(beta, eta) surfaces");
  add_common(sweep);
  sweep->add_option("--l", l_spec, "oscillator level 0..3 or all");
  CLI::App* si = app.add_subcommand("state-independent", "six-context inequality");
  add_common(si);
  si->add_option("--state", state_spec, "thermal | mixed | ket:N | file:PATH");
  CLI::App* bounds = app.add_subcommand("bounds", "classical bounds by enumeration");
  CLI::App* grape = app.add_subcommand("grape", "optimize a controlled-gate pulse");
  add_common(grape);
  grape->add_option("--target", target, "identity | cA | cB:<beta> | cC | cD:<eta> | cPij | file:PATH");
  CLI::App* prepare = app.add_subcommand("prepare", "check the pseudopure preparation");
  add_common(prepare);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(out);

    RunConfig rc = common.config.empty() ? default_run_config() : load_run_config(common.config);
    try {
      if (!common.grid.empty()) rc.grid = GridSpec::parse(common.grid);
      if (!common.via.empty()) rc.via = parse_eval_path(common.via);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (!common.noise.empty()) rc.noise_enabled = common.noise == "on";
    if (!common.out.empty()) rc.out_dir = common.out;
    if (common.seed) rc.seed = *common.seed;

    if (sweep->parsed()) return cmd_sweep(rc, l_spec, out);
    if (si->parsed()) return cmd_state_independent(rc, state_spec, out);
    if (grape->parsed()) return cmd_grape(rc, target, out);
    if (prepare->parsed()) return cmd_prepare(rc, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace nmrctx
