#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nmrctx/operator.hpp"
#include "nmrctx/state.hpp"

namespace nmrctx {

// Piecewise-constant RF controls, one (x, y) channel pair per spin. Stored in
// Cartesian form (rad/s); amplitude/phase are derived.
class ControlSequence {
 public:
  ControlSequence(int n_segments, int n_channels, double segment_duration);

  int segments() const { return static_cast<int>(ux_.rows()); }
  int channels() const { return static_cast<int>(ux_.cols()); }
  double segment_duration() const { return dt_; }
  double total_duration() const { return dt_ * segments(); }

  double ux(int seg, int ch) const { return ux_(seg, ch); }
  double uy(int seg, int ch) const { return uy_(seg, ch); }
  double amplitude(int seg, int ch) const;
  double phase(int seg, int ch) const;

  void set(int seg, int ch, double ux, double uy);
  void set_polar(int seg, int ch, double amplitude, double phase);

  const Eigen::MatrixXd& ux() const { return ux_; }
  const Eigen::MatrixXd& uy() const { return uy_; }

  double peak_amplitude() const;
  // Shrinks any (ux, uy) pair whose magnitude exceeds `limit`.
  void clip(double limit);

 private:
  Eigen::MatrixXd ux_;
  Eigen::MatrixXd uy_;
  double dt_;
};

struct GrapeConfig {
  Operator target;                 // register unitary
  int n_segments = 400;
  double segment_duration = 5e-6;  // s
  int max_iterations = 400;
  double step_size = 0.5;          // initial line-search step, in units of max_amplitude
  double fidelity_goal = 0.99;
  std::vector<double> robustness_samples{0.9, 1.0, 1.1};
  double max_amplitude = 2.0 * 3.14159265358979323846 * 10e3;  // rad/s
  double init_scale = 0.1;         // initial controls ~ U(-s, s) * max_amplitude
  std::uint64_t seed = 1;

  void validate() const;
};

// exp(-i (H_drift + kappa H_ctrl(k)) dt), multiplied in time order.
Operator propagate(const ControlSequence& controls, const SpinSystemConfig& cfg,
                   double kappa = 1.0);

// Mean over robustness samples of hs_fidelity(target, propagate(kappa)).
double robust_fidelity(const ControlSequence& controls, const GrapeConfig& config,
                       const SpinSystemConfig& cfg);

struct FidelityGradient {
  double fidelity = 0.0;
  Eigen::MatrixXd d_ux;  // dF / d ux(seg, ch), per rad/s
  Eigen::MatrixXd d_uy;
};

// Exact gradient of the robust fidelity (segment propagator derivatives taken in
// the eigenbasis of each segment Hamiltonian).
FidelityGradient robust_fidelity_gradient(const ControlSequence& controls,
                                          const GrapeConfig& config, const SpinSystemConfig& cfg);

enum class GrapeStatus { converged, budget_exhausted, stalled, diverged };
std::string to_string(GrapeStatus s);

struct GrapeResult {
  ControlSequence controls;
  std::vector<double> history;  // best robust fidelity after each iteration (index 0 = start)
  GrapeStatus status = GrapeStatus::budget_exhausted;
  int iterations = 0;
  std::uint64_t seed = 0;
  double fidelity = 0.0;
  std::string message;
};

GrapeResult grape_optimize(const GrapeConfig& config, const SpinSystemConfig& cfg,
                           std::optional<ControlSequence> initial = std::nullopt);

struct RobustnessReport {
  std::vector<double> kappas;
  std::vector<double> fidelities;
  double mean = 0.0;
};

RobustnessReport robustness_report(const ControlSequence& controls, const GrapeConfig& config,
                                   const SpinSystemConfig& cfg);

}  // namespace nmrctx
