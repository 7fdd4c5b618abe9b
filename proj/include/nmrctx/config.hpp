#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "nmrctx/inequality.hpp"
#include "nmrctx/noise.hpp"
#include "nmrctx/state.hpp"

namespace nmrctx {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GrapeSettings {
  int segments = 1600;
  double segment_duration = 5e-6;
  int max_iterations = 300;
  double step_size = 0.5;
  double fidelity_goal = 0.99;
  std::vector<double> robustness_samples{0.9, 1.0, 1.1};
  double max_amplitude_hz = 10e3;
  double init_scale = 0.1;
  std::optional<SpinSystemConfig> spin_system;  // falls back to the molecule
};

struct RunConfig {
  std::string molecule_name;
  bool molecule_authoritative = false;
  SpinSystemConfig molecule;
  double epsilon = 1e-5;
  GridSpec grid = GridSpec::standard();
  bool noise_enabled = false;
  NoiseParams noise;
  EvalPath via = EvalPath::moussa;
  std::string out_dir = "out";
  std::uint64_t seed = 7;
  PulseSequence pseudopure_sequence;
  GrapeSettings grape;
};

// The shipped defaults (identical to config/default.json).
const std::string& default_config_text();
RunConfig default_run_config();

// Parses a JSON document, layered over the defaults (missing keys keep their
// default value). Throws ConfigError on malformed input.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Reads a two-qubit density matrix from JSON {"re": [[...]], "im": [[...]]}.
DensityMatrix load_density_matrix(const std::string& path);
// Reads a unitary from the same JSON layout.
Operator load_operator(const std::string& path);

}  // namespace nmrctx
