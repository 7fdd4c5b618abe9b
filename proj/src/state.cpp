#include "nmrctx/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nmrctx {

namespace {

constexpr double kTraceTol = 1e-12;
constexpr double kEigenFloor = -1e-10;

Operator projector(int index, int dim) {
  Matrix m = Matrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return Operator(std::move(m));
}

Operator conjugate(const Operator& u, const Operator& rho) { return u * rho * u.adjoint(); }

}  // namespace

DensityMatrix::DensityMatrix(Operator rho, std::string label)
    : rho_(std::move(rho)), label_(std::move(label)) {
  if (std::abs(rho_.trace() - Complex(1.0)) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  }
  if (!rho_.is_hermitian()) throw std::invalid_argument("DensityMatrix: not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenFloor) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityMatrix DensityMatrix::trusted(Operator rho, std::string label) {
  return DensityMatrix(std::move(rho), std::move(label), Unchecked{});
}

Operator DensityMatrix::deviation() const {
  return rho_ - Operator::identity(dim()) * (1.0 / dim());
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
  return trace_product(rho.op(), op);
}

DensityMatrix maximally_mixed(int qubits) {
  const int d = 1 << qubits;
  return DensityMatrix(Operator::identity(d) * (1.0 / d), "mixed");
}

DensityMatrix basis_state(int index, int qubits) {
  const int d = 1 << qubits;
  if (index < 0 || index >= d) throw std::out_of_range("basis_state: index out of range");
  return DensityMatrix(projector(index, d), "|" + zeeman_label(index, qubits) + ">");
}

Operator partial_trace(const Operator& rho, int spin) {
  const int n = rho.qubits();
  if (n < 2) throw std::invalid_argument("partial_trace: need at least two spins");
  if (spin < 1 || spin > n) throw std::out_of_range("partial_trace: spin out of range");
  const int bit = n - spin;  // spin 1 is the most significant bit
  const int d_out = rho.dim() / 2;
  const auto expand = [&](int idx, int b) {
    const int low = idx & ((1 << bit) - 1);
    const int high = idx >> bit;
    return (high << (bit + 1)) | (b << bit) | low;
  };
  Matrix out = Matrix::Zero(d_out, d_out);
  for (int r = 0; r < d_out; ++r) {
    for (int c = 0; c < d_out; ++c) {
      out(r, c) = rho(expand(r, 0), expand(c, 0)) + rho(expand(r, 1), expand(c, 1));
    }
  }
  return Operator(std::move(out));
}

PurityFactor::PurityFactor(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 0.25)) {
    throw std::invalid_argument("PurityFactor: epsilon must lie in [0, 1/4], got " +
                                std::to_string(epsilon));
  }
}

PurityFactor PurityFactor::from_larmor(double omega0_rad_per_s, double kelvin) {
  constexpr double hbar = 1.054571817e-34;
  constexpr double boltzmann = 1.380649e-23;
  if (!(kelvin > 0.0)) throw std::invalid_argument("PurityFactor: temperature must be > 0");
  return PurityFactor(hbar * omega0_rad_per_s / (8.0 * boltzmann * kelvin));
}

double SpinSystemConfig::coupling(int i, int j) const {
  return j_hz.at(static_cast<std::size_t>(i - 1)).at(static_cast<std::size_t>(j - 1));
}

void SpinSystemConfig::validate() const {
  if (n_spins < 1 || n_spins > kMaxQubits) {
    throw std::invalid_argument("SpinSystemConfig: n_spins out of range");
  }
  const auto n = static_cast<std::size_t>(n_spins);
  if (shifts_hz.size() != n) {
    throw std::invalid_argument("SpinSystemConfig: expected " + std::to_string(n) +
                                " chemical shifts");
  }
  if (j_hz.size() != n) throw std::invalid_argument("SpinSystemConfig: J table has wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    if (j_hz[i].size() != n) throw std::invalid_argument("SpinSystemConfig: J table not square");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(j_hz[i][j] - j_hz[j][i]) > 1e-12) {
        throw std::invalid_argument("SpinSystemConfig: J table not symmetric");
      }
    }
  }
  if (!(t1 > 0.0) || !(t2_star > 0.0)) {
    throw std::invalid_argument("SpinSystemConfig: relaxation times must be positive");
  }
}

int qho_to_zeeman(int level) {
  if (level < 0 || level > 3) {
    throw std::out_of_range("qho_to_zeeman: oscillator level must be 0..3");
  }
  return level;
}

std::string zeeman_label(int index, int qubits) {
  std::string s(static_cast<std::size_t>(qubits), '0');
  for (int q = 0; q < qubits; ++q) {
    if (index & (1 << (qubits - 1 - q))) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

DensityMatrix thermal_state(const SpinSystemConfig& cfg, PurityFactor eps) {
  cfg.validate();
  const int n = cfg.n_spins;
  const int d = 1 << n;
  // Smallest population is 1/d - n*eps/2.
  if (1.0 / d - 0.5 * n * eps.value() < 0.0) {
    throw std::invalid_argument("thermal_state: epsilon too large for a positive state");
  }
  Operator rho = Operator::identity(d) * (1.0 / d);
  for (int i = 1; i <= n; ++i) rho += eps.value() * spin_operator({Axis::z, i}, n);
  return DensityMatrix(std::move(rho), "thermal");
}

DensityMatrix pseudopure_state(int ket, PurityFactor eps, int qubits) {
  const int d = 1 << qubits;
  if (ket < 0 || ket >= d) throw std::out_of_range("pseudopure_state: ket out of range");
  const double e = eps.value();
  Operator rho = Operator::identity(d) * ((1.0 - e) / d) + e * projector(ket, d);
  return DensityMatrix(std::move(rho), "pps|" + zeeman_label(ket, qubits) + ">");
}

Operator deviation_000() {
  const auto iz = [](int i) { return spin_operator({Axis::z, i}, 3); };
  const Operator i1 = iz(1), i2 = iz(2), i3 = iz(3);
  return 0.25 * (i1 + i2 + i3 + 2.0 * (i1 * i2) + 2.0 * (i2 * i3) + 2.0 * (i1 * i3) +
                 4.0 * (i1 * i2 * i3));
}

DensityMatrix pfg_crush(const DensityMatrix& rho) {
  Matrix m = rho.matrix().diagonal().asDiagonal();
  return DensityMatrix::trusted(Operator(std::move(m)), rho.label());
}

Operator rotation_operator(int spin, int n, double angle, double phase) {
  const Operator gen = std::cos(phase) * spin_operator({Axis::x, spin}, n) +
                       std::sin(phase) * spin_operator({Axis::y, spin}, n);
  return expm(gen, angle);
}

Operator coupling_hamiltonian(const SpinSystemConfig& cfg, int a, int b) {
  const int n = cfg.n_spins;
  if (a == b) throw std::invalid_argument("coupling_hamiltonian: spins must differ");
  return (2.0 * std::numbers::pi * cfg.coupling(a, b)) *
         (spin_operator({Axis::z, a}, n) * spin_operator({Axis::z, b}, n));
}

Operator drift_hamiltonian(const SpinSystemConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_spins;
  Operator h = Operator::zero(1 << n);
  for (int i = 1; i <= n; ++i) {
    h += (2.0 * std::numbers::pi * cfg.shifts_hz[static_cast<std::size_t>(i - 1)]) *
         spin_operator({Axis::z, i}, n);
  }
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) h += coupling_hamiltonian(cfg, i, j);
  }
  return h;
}

DensityMatrix run_sequence(const DensityMatrix& rho, const PulseSequence& seq,
                           const SpinSystemConfig& cfg) {
  const int n = rho.qubits();
  if (n != cfg.n_spins) throw std::invalid_argument("run_sequence: register size mismatch");
  const auto check_spin = [n](int s) {
    if (s < 1 || s > n) throw std::out_of_range("run_sequence: spin index out of range");
  };
  Operator state = rho.op();
  for (const PulseEvent& ev : seq) {
    if (const auto* r = std::get_if<Rotation>(&ev)) {
      for (int s : r->spins) {
        check_spin(s);
        state = conjugate(rotation_operator(s, n, r->angle, r->phase), state);
      }
    } else if (const auto* j = std::get_if<JEvolution>(&ev)) {
      check_spin(j->spin_a);
      check_spin(j->spin_b);
      if (j->duration < 0.0) throw std::invalid_argument("run_sequence: negative delay");
      const Operator h =
          j->refocused ? coupling_hamiltonian(cfg, j->spin_a, j->spin_b) : drift_hamiltonian(cfg);
      state = conjugate(expm(h, j->duration), state);
    } else {
      state = Operator(Matrix(state.matrix().diagonal().asDiagonal()));
    }
  }
  return DensityMatrix::trusted(std::move(state), rho.label());
}

DensityMatrix ancilla_superposition_thermal(const SpinSystemConfig& cfg, PurityFactor eps) {
  const DensityMatrix eq = thermal_state(cfg, eps);
  const PulseSequence seq{Rotation{{1}, std::numbers::pi / 2, std::numbers::pi / 2}};
  DensityMatrix out = run_sequence(eq, seq, cfg);
  return DensityMatrix::trusted(out.op(), "thermal+ancilla(pi/2)_y");
}

DeviationMatch match_pseudopure(const DensityMatrix& rho, int ket) {
  const int d = rho.dim();
  const Operator target = projector(ket, d) - Operator::identity(d) * (1.0 / d);
  const Operator dev = rho.deviation();
  const double overlap = trace_product(dev, target).real();
  const double dn = dev.matrix().norm();
  const double tn = target.matrix().norm();
  DeviationMatch m;
  m.scale = overlap / (tn * tn);
  m.cosine = dn > 0.0 ? overlap / (dn * tn) : 0.0;
  return m;
}

}  // namespace nmrctx
