#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "nmrctx/noise.hpp"
#include "nmrctx/operator.hpp"
#include "nmrctx/state.hpp"

namespace nmrctx {

// Ancilla-interferometric joint-expectation measurement. The ancilla is register
// spin 1 (leftmost factor), the two system spins follow.

class NonCommutingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateReferenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |0><0| (x) 1 + |1><1| (x) u
Operator controlled_gate(const Operator& u);

// Controlled gate whose generator is scaled by kappa: exp(-i kappa |1><1| (x) H_u)
// with exp(-i H_u) = u and H_u's spectrum in (-pi, pi]. kappa = 1 returns controlled_gate(u).
Operator controlled_gate_scaled(const Operator& u, double kappa);

// Throws NonCommutingError / std::invalid_argument if ops are not unitary or do not commute.
void check_compatible(std::span<const Operator> ops, double tol = kDefaultTol);

// Signal Tr(rho_f (sigma_x + i sigma_y)_ancilla) for a two-qubit system state.
Complex run_moussa(const DensityMatrix& sys, std::span<const Operator> ops,
                   const GateNoise& noise = {});

// Same, starting from a full register state before the ancilla (pi/2)_y pulse
// (e.g. thermal equilibrium or a pseudopure state).
Complex run_moussa_register(const DensityMatrix& reg, std::span<const Operator> ops,
                            const GateNoise& noise = {});

// Re(signal) / Re(reference signal without controlled gates).
double normalized_expectation(const DensityMatrix& sys, std::span<const Operator> ops,
                              const GateNoise& noise = {});
double normalized_expectation_register(const DensityMatrix& reg, std::span<const Operator> ops,
                                       const GateNoise& noise = {});

double run_moussa_triple(const DensityMatrix& sys, const std::array<Operator, 3>& ops,
                         const GateNoise& noise = {});

class MoussaExperiment {
 public:
  // system: 4-dim system state or 8-dim register state (before the ancilla pulse).
  MoussaExperiment(DensityMatrix system, std::vector<Operator> controlled_ops);

  const DensityMatrix& system_state() const { return system_; }
  const std::vector<Operator>& controlled_ops() const { return ops_; }

  Complex readout(const GateNoise& noise = {}) const;
  Complex reference(const GateNoise& noise = {}) const;
  double normalized(const GateNoise& noise = {}) const;

 private:
  DensityMatrix system_;
  std::vector<Operator> ops_;
};

}  // namespace nmrctx
