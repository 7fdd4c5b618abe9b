#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nmrctx/config.hpp"
#include "nmrctx/grape.hpp"

namespace nmrctx {

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitConfig = 2, kExitGoalNotMet = 3 };

// Writes sweep_l<l>.{csv,json,svg} into rc.out_dir for l in 0..3 or "all".
int cmd_sweep(const RunConfig& rc, const std::string& l_spec, std::ostream& out);

// state: thermal | mixed | ket:N | file:PATH. Writes state_independent.json.
int cmd_state_independent(const RunConfig& rc, const std::string& state_spec, std::ostream& out);

// Prints both classical-bound enumerations.
int cmd_bounds(std::ostream& out);

// target: identity | cA | cB:<beta> | cC | cD:<eta> | cP<ij> | file:PATH.
// Writes grape_<name>.{csv,json}; returns kExitGoalNotMet below the fidelity goal.
int cmd_grape(const RunConfig& rc, const std::string& target, std::ostream& out);

// Runs the configured pseudopure preparation on the thermal state and reports
// how closely the result matches |000>.
int cmd_prepare(const RunConfig& rc, std::ostream& out);

// Resolves a target name to a register unitary; the display name is written to `name`.
Operator resolve_grape_target(const std::string& target, std::string& name);
GrapeConfig make_grape_config(const RunConfig& rc, const Operator& target);
const SpinSystemConfig& grape_spin_system(const RunConfig& rc);

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nmrctx
