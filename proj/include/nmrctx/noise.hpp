#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "nmrctx/operator.hpp"
#include "nmrctx/state.hpp"

namespace nmrctx {

struct GridSpec;

// Imperfection knobs for the ancilla-assisted measurements. Setting t2_star to
// infinity and rf_scale_samples to {1} gives the ideal experiment.
struct NoiseParams {
  double t2_star = 0.8;                 // s
  std::optional<double> t1;             // s; off unless set
  double ground_population = 0.5;       // single-spin equilibrium for T1 relaxation
  double gate_duration_pair = 0.023;    // s, one block of two controlled gates
  double gate_duration_triple = 0.040;  // s, one block of three controlled gates
  std::vector<double> rf_scale_samples{0.9, 1.0, 1.1};

  static NoiseParams noiseless();
  void validate() const;
};

// Noise seen by one run of the protocol: a single RF scale and one block length.
struct GateNoise {
  double t2_star = std::numeric_limits<double>::infinity();
  std::optional<double> t1;
  double ground_population = 0.5;
  double block_duration = 0.0;
  double kappa = 1.0;

  static GateNoise from(const NoiseParams& p, double block_duration, double kappa);
};

// Equilibrium ground-state population of one spin of an eps-polarized register.
double equilibrium_ground_population(PurityFactor eps, int n_spins);

DensityMatrix phase_damp(const DensityMatrix& rho, double t, double t2, int spin);
DensityMatrix t1_relax(const DensityMatrix& rho, double t, double t1, int spin,
                       double ground_population = 0.5);
DensityMatrix miscalibrated_rotation(const DensityMatrix& rho, int spin, double angle,
                                     double phase, double kappa);

// Operator-level forms used inside the simulation loops (no validation).
Operator dephase_all(const Operator& rho, double t, double t2);
Operator relax_all(const Operator& rho, double t, double t1, double ground_population);

// Idle period of length t acting on every spin.
Operator idle(const Operator& rho, double t, const GateNoise& noise);

// Maximum of the kappa-averaged I_l over the grid (default: [-pi, pi] in pi/4 steps).
double noisy_chsh_max(int l, const NoiseParams& noise);
double noisy_chsh_max(int l, const NoiseParams& noise, const GridSpec& grid);

// kappa-averaged state-independent expression measured on a two-qubit state.
double noisy_state_independent_value(const DensityMatrix& rho, const NoiseParams& noise);

}  // namespace nmrctx
