#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nmrctx/noise.hpp"
#include "nmrctx/state.hpp"

namespace nmrctx {

enum class EvalPath { direct, moussa };

std::string to_string(EvalPath via);
EvalPath parse_eval_path(const std::string& s);

// Inclusive 1-D grid start, start + step, ..., stop.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  // [-pi, pi] in pi/4 steps (9 points).
  static GridSpec standard();
  // "start:stop:step"; each field a number optionally scaled by pi, e.g. "-pi", "3pi/4", "0.25".
  static GridSpec parse(const std::string& text);
  static double parse_angle(const std::string& text);

  void validate() const;  // throws std::invalid_argument if empty or < 2 points
  std::vector<double> points() const;
};

struct SweepPoint {
  double beta;
  double eta;
  double value;
};

struct SweepResult {
  int l = 0;
  GridSpec grid;
  EvalPath via = EvalPath::direct;
  std::optional<NoiseParams> noise;
  std::vector<SweepPoint> points;  // beta-major, eta-minor
  double max_value = 0.0;
  double argmax_beta = 0.0;
  double argmax_eta = 0.0;
  double min_value = 0.0;
};

struct NCHVBoundReport {
  std::string expression;
  int n_variables = 0;
  long enumerated = 0;
  int classical_max = 0;
  std::vector<std::vector<int>> maximizers;  // +-1 assignments reaching the max
  std::vector<int> attained_values;           // distinct values, ascending
};

// <AB> + <BC> + <CD> - <AD> on a two-qubit state.
double chsh_value(const DensityMatrix& rho, double beta, double eta, EvalPath via,
                  const GateNoise& noise = {});

// Analytic value on the Zeeman product state encoding oscillator level l.
double chsh_closed_form(int l, double beta, double eta);

// Sweeps I_l over grid x grid. With noise, each point is the average over the
// RF scale samples of the Moussa-path value.
SweepResult chsh_sweep(int l, const GridSpec& grid, EvalPath via,
                       const std::optional<NoiseParams>& noise = std::nullopt);

NCHVBoundReport nchv_bound_chsh();
NCHVBoundReport nchv_bound_state_independent();

struct StateIndependentTerms {
  std::array<double, 6> expectations{};  // <row1>, <row2>, <row3>, <col1>, <col2>, <col3>
  std::array<int, 6> signs{1, 1, 1, 1, 1, -1};
  double total = 0.0;
};

StateIndependentTerms state_independent_terms(const DensityMatrix& rho, EvalPath via,
                                              const std::optional<NoiseParams>& noise = std::nullopt);

// 4-dim states are measured directly; 8-dim register states go through the
// ancilla pipeline (spin 1 is rotated into the transverse plane first).
double state_independent_value(const DensityMatrix& rho, EvalPath via);

inline constexpr double kChshClassicalBound = 2.0;
inline constexpr double kStateIndependentClassicalBound = 4.0;
inline constexpr double kStateIndependentQuantumValue = 6.0;
double chsh_quantum_bound();  // 2 sqrt 2

}  // namespace nmrctx
