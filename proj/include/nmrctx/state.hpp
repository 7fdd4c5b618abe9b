#pragma once

#include <string>
#include <variant>
#include <vector>

#include "nmrctx/operator.hpp"

namespace nmrctx {

// Trace-one, Hermitian, positive semidefinite register state.
class DensityMatrix {
 public:
  // Validates trace (1e-12), hermiticity and eigenvalues >= -1e-10.
  DensityMatrix(Operator rho, std::string label = {});

  // Skips validation. For maps that preserve validity by construction (unitary
  // conjugation, CPTP channels).
  static DensityMatrix trusted(Operator rho, std::string label = {});

  const Operator& op() const { return rho_; }
  const Matrix& matrix() const { return rho_.matrix(); }
  int dim() const { return rho_.dim(); }
  int qubits() const { return rho_.qubits(); }
  const std::string& label() const { return label_; }

  // rho - 1/dim: the traceless part carrying all observable signal.
  Operator deviation() const;

 private:
  struct Unchecked {};
  DensityMatrix(Operator rho, std::string label, Unchecked)
      : rho_(std::move(rho)), label_(std::move(label)) {}

  Operator rho_;
  std::string label_;
};

// Tr(rho * op); real within 1e-12 for Hermitian op.
Complex expectation(const DensityMatrix& rho, const Operator& op);

DensityMatrix maximally_mixed(int qubits);
DensityMatrix basis_state(int index, int qubits);

// Partial trace over one spin (1-based).
Operator partial_trace(const Operator& rho, int spin);

// Small positive polarization of a spin ensemble. Zero is accepted as the
// fully mixed limit.
class PurityFactor {
 public:
  explicit PurityFactor(double epsilon);
  // epsilon = hbar * omega0 / (8 k T)
  static PurityFactor from_larmor(double omega0_rad_per_s, double kelvin);

  double value() const { return epsilon_; }

 private:
  double epsilon_;
};

struct SpinSystemConfig {
  int n_spins = 3;
  std::vector<double> shifts_hz;               // chemical shifts in the rotating frame
  std::vector<std::vector<double>> j_hz;       // symmetric coupling table
  double t1 = 6.3;                             // s
  double t2_star = 0.8;                        // s

  double coupling(int i, int j) const;  // 1-based
  void validate() const;
};

struct Rotation {
  std::vector<int> spins;  // 1-based
  double angle = 0.0;      // rad
  double phase = 0.0;      // rad, 0 = x, pi/2 = y
};

struct JEvolution {
  int spin_a = 1;
  int spin_b = 2;
  double duration = 0.0;   // s
  bool refocused = true;   // keep only the (spin_a, spin_b) coupling
};

struct GradientCrush {};

using PulseEvent = std::variant<Rotation, JEvolution, GradientCrush>;
using PulseSequence = std::vector<PulseEvent>;

// Oscillator level l (0..3) -> two-qubit Zeeman product index (binary of l).
int qho_to_zeeman(int level);
std::string zeeman_label(int index, int qubits);

DensityMatrix thermal_state(const SpinSystemConfig& cfg, PurityFactor eps);

// (1 - eps) 1/8 + eps |k><k| for a 3-spin basis ket k.
DensityMatrix pseudopure_state(int ket, PurityFactor eps, int qubits = 3);

// Product-operator expansion of |000><000| - 1/8.
Operator deviation_000();

// Removes every off-diagonal element in the computational basis.
DensityMatrix pfg_crush(const DensityMatrix& rho);

// exp(-i angle (Ix cos phase + Iy sin phase)) on one spin.
Operator rotation_operator(int spin, int n, double angle, double phase);

// 2 pi J_ab I_az I_bz, weak-coupling form.
Operator coupling_hamiltonian(const SpinSystemConfig& cfg, int a, int b);

// Secular rotating-frame Hamiltonian (rad/s):
// 2 pi sum_i nu_i I_iz + 2 pi sum_{i<j} J_ij I_iz I_jz.
Operator drift_hamiltonian(const SpinSystemConfig& cfg);

DensityMatrix run_sequence(const DensityMatrix& rho, const PulseSequence& seq,
                           const SpinSystemConfig& cfg);

// Thermal state after a (pi/2)_y pulse on spin 1.
DensityMatrix ancilla_superposition_thermal(const SpinSystemConfig& cfg, PurityFactor eps);

// Overlap of a state's deviation with the |ket><ket| - 1/dim direction; returns
// (cosine similarity, scale).
struct DeviationMatch {
  double cosine = 0.0;
  double scale = 0.0;
};
DeviationMatch match_pseudopure(const DensityMatrix& rho, int ket);

}  // namespace nmrctx
