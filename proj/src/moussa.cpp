#include "nmrctx/moussa.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nmrctx {

namespace {

constexpr int kRegisterSpins = 3;
constexpr int kSystemDim = 4;
constexpr double kReferenceFloor = 1e-12;

Operator ancilla_projector(int bit) {
  Matrix m = Matrix::Zero(2, 2);
  m(bit, bit) = 1.0;
  return Operator(std::move(m));
}

// u^kappa on the principal branch, via the Schur form of the (normal) matrix u.
Operator fractional_power(const Operator& u, double kappa) {
  Eigen::ComplexSchur<Matrix> schur(u.matrix());
  const Matrix& z = schur.matrixU();
  const Matrix& t = schur.matrixT();
  Eigen::VectorXcd phases(t.rows());
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    double theta = -std::arg(t(k, k));
    if (theta <= -std::numbers::pi + 1e-12) theta += 2.0 * std::numbers::pi;
    phases(k) = std::exp(-kI * (kappa * theta)) * std::abs(t(k, k));
  }
  return Operator(Matrix(z * phases.asDiagonal() * z.adjoint()));
}

Operator with_ancilla_zero(const DensityMatrix& sys) {
  return kron(ancilla_projector(0), sys.op());
}

Complex ancilla_quadrature(const Operator& rho) {
  // Tr(rho (sigma_x + i sigma_y) (x) 1) = 2 sum_k <1 k| rho |0 k>
  Complex s = 0.0;
  for (int k = 0; k < kSystemDim; ++k) s += rho(kSystemDim + k, k);
  return 2.0 * s;
}

Complex run_pipeline(const Operator& reg, std::span<const Operator> ops, const GateNoise& noise) {
  if (reg.dim() != 1 << kRegisterSpins) {
    throw std::invalid_argument("Moussa protocol: register state must be 8-dimensional");
  }
  if (!(noise.kappa > 0.0)) throw std::invalid_argument("Moussa protocol: kappa must be > 0");
  check_compatible(ops);

  const Operator prep =
      rotation_operator(1, kRegisterSpins, noise.kappa * std::numbers::pi / 2, std::numbers::pi / 2);
  Operator rho = prep * reg * prep.adjoint();
  if (!ops.empty()) {
    const double half = 0.5 * noise.block_duration / static_cast<double>(ops.size());
    for (const Operator& op : ops) {
      const Operator g = controlled_gate_scaled(op, noise.kappa);
      rho = idle(rho, half, noise);
      rho = g * rho * g.adjoint();
      rho = idle(rho, half, noise);
    }
  }
  return ancilla_quadrature(rho);
}

double normalize(const Operator& reg, std::span<const Operator> ops, const GateNoise& noise) {
  const double signal = run_pipeline(reg, ops, noise).real();
  const double ref = run_pipeline(reg, {}, noise).real();
  if (std::abs(ref) < kReferenceFloor * reg.matrix().norm()) {
    throw DegenerateReferenceError("Moussa protocol: reference signal " + std::to_string(ref) +
                                   " is too small to normalize against");
  }
  return signal / ref;
}

}  // namespace

Operator controlled_gate(const Operator& u) {
  if (u.dim() != kSystemDim) throw std::invalid_argument("controlled_gate: expected 4x4 operator");
  if (!u.is_unitary()) throw std::invalid_argument("controlled_gate: operator is not unitary");
  return kron(ancilla_projector(0), Operator::identity(kSystemDim)) + kron(ancilla_projector(1), u);
}

Operator controlled_gate_scaled(const Operator& u, double kappa) {
  if (kappa == 1.0) return controlled_gate(u);
  if (!u.is_unitary()) throw std::invalid_argument("controlled_gate: operator is not unitary");
  return controlled_gate(fractional_power(u, kappa));
}

void check_compatible(std::span<const Operator> ops, double tol) {
  for (const Operator& op : ops) {
    if (op.dim() != kSystemDim) {
      throw std::invalid_argument("Moussa protocol: controlled operators must be 4x4");
    }
    if (!op.is_unitary(tol)) {
      throw std::invalid_argument("Moussa protocol: controlled operator is not unitary");
    }
  }
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      if (!commute(ops[i], ops[j], tol)) {
        throw NonCommutingError("Moussa protocol: operators " + std::to_string(i) + " and " +
                                std::to_string(j) + " do not commute");
      }
    }
  }
}

Complex run_moussa(const DensityMatrix& sys, std::span<const Operator> ops,
                   const GateNoise& noise) {
  if (sys.dim() != kSystemDim) throw std::invalid_argument("run_moussa: expected 4-dim state");
  return run_pipeline(with_ancilla_zero(sys), ops, noise);
}

Complex run_moussa_register(const DensityMatrix& reg, std::span<const Operator> ops,
                            const GateNoise& noise) {
  return run_pipeline(reg.op(), ops, noise);
}

double normalized_expectation(const DensityMatrix& sys, std::span<const Operator> ops,
                              const GateNoise& noise) {
  if (sys.dim() != kSystemDim) {
    throw std::invalid_argument("normalized_expectation: expected 4-dim state");
  }
  return normalize(with_ancilla_zero(sys), ops, noise);
}

double normalized_expectation_register(const DensityMatrix& reg, std::span<const Operator> ops,
                                       const GateNoise& noise) {
  return normalize(reg.op(), ops, noise);
}

double run_moussa_triple(const DensityMatrix& sys, const std::array<Operator, 3>& ops,
                         const GateNoise& noise) {
  if (sys.dim() == kSystemDim) return normalized_expectation(sys, ops, noise);
  return normalized_expectation_register(sys, ops, noise);
}

MoussaExperiment::MoussaExperiment(DensityMatrix system, std::vector<Operator> controlled_ops)
    : system_(std::move(system)), ops_(std::move(controlled_ops)) {
  if (system_.dim() != kSystemDim && system_.dim() != 1 << kRegisterSpins) {
    throw std::invalid_argument("MoussaExperiment: state must be 4- or 8-dimensional");
  }
  check_compatible(ops_);
}

Complex MoussaExperiment::readout(const GateNoise& noise) const {
  return system_.dim() == kSystemDim ? run_moussa(system_, ops_, noise)
                                     : run_moussa_register(system_, ops_, noise);
}

Complex MoussaExperiment::reference(const GateNoise& noise) const {
  return system_.dim() == kSystemDim ? run_moussa(system_, {}, noise)
                                     : run_moussa_register(system_, {}, noise);
}

double MoussaExperiment::normalized(const GateNoise& noise) const {
  return system_.dim() == kSystemDim ? normalized_expectation(system_, ops_, noise)
                                     : normalized_expectation_register(system_, ops_, noise);
}

}  // namespace nmrctx
