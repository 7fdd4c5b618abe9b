#include "nmrctx/noise.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "nmrctx/inequality.hpp"
#include "nmrctx/moussa.hpp"
#include "nmrctx/pseudospin.hpp"

namespace nmrctx {

namespace {

void require_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("noise channel: negative time");
}

int spin_bit(int spin, int n) {
  if (spin < 1 || spin > n) throw std::out_of_range("noise channel: spin index out of range");
  return n - spin;
}

Operator amplitude_damp_spin(const Operator& rho, double t, double t1, int spin, double p) {
  const int n = rho.qubits();
  const double gamma = -std::expm1(-t / t1);
  const double keep = std::sqrt(1.0 - gamma);
  const double lift = std::sqrt(gamma);
  Matrix k0(2, 2), k1(2, 2), k2(2, 2), k3(2, 2);
  k0 << std::sqrt(p), 0, 0, std::sqrt(p) * keep;
  k1 << 0, std::sqrt(p) * lift, 0, 0;
  k2 << std::sqrt(1 - p) * keep, 0, 0, std::sqrt(1 - p);
  k3 << 0, 0, std::sqrt(1 - p) * lift, 0;
  Operator out = Operator::zero(rho.dim());
  for (const Matrix* k : {&k0, &k1, &k2, &k3}) {
    const Operator e = embed(Operator(*k), spin, n);
    out += e * rho * e.adjoint();
  }
  return out;
}

}  // namespace

NoiseParams NoiseParams::noiseless() {
  NoiseParams p;
  p.t2_star = std::numeric_limits<double>::infinity();
  p.rf_scale_samples = {1.0};
  return p;
}

void NoiseParams::validate() const {
  if (!(t2_star > 0.0)) throw std::invalid_argument("NoiseParams: t2_star must be > 0");
  if (t1 && !(*t1 > 0.0)) throw std::invalid_argument("NoiseParams: t1 must be > 0");
  if (!(gate_duration_pair > 0.0) || !(gate_duration_triple > 0.0)) {
    throw std::invalid_argument("NoiseParams: gate durations must be > 0");
  }
  if (rf_scale_samples.empty()) throw std::invalid_argument("NoiseParams: no RF scale samples");
  for (double k : rf_scale_samples) {
    if (!(k > 0.0)) throw std::invalid_argument("NoiseParams: RF scale factors must be > 0");
  }
  if (!(ground_population >= 0.0 && ground_population <= 1.0)) {
    throw std::invalid_argument("NoiseParams: ground_population must lie in [0, 1]");
  }
}

GateNoise GateNoise::from(const NoiseParams& p, double block_duration, double kappa) {
  GateNoise g;
  g.t2_star = p.t2_star;
  g.t1 = p.t1;
  g.ground_population = p.ground_population;
  g.block_duration = block_duration;
  g.kappa = kappa;
  return g;
}

double equilibrium_ground_population(PurityFactor eps, int n_spins) {
  return 0.5 + eps.value() * (1 << n_spins) / 4.0;
}

Operator dephase_all(const Operator& rho, double t, double t2) {
  require_time(t);
  if (t == 0.0 || std::isinf(t2)) return rho;
  const double f = std::exp(-t / t2);
  Matrix m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const int flips = std::popcount(static_cast<unsigned>(r ^ c));
      if (flips) m(r, c) *= std::pow(f, flips);
    }
  }
  return Operator(std::move(m));
}

Operator relax_all(const Operator& rho, double t, double t1, double ground_population) {
  require_time(t);
  if (t == 0.0) return rho;
  Operator out = rho;
  for (int s = 1; s <= rho.qubits(); ++s) {
    out = amplitude_damp_spin(out, t, t1, s, ground_population);
  }
  return out;
}

Operator idle(const Operator& rho, double t, const GateNoise& noise) {
  Operator out = dephase_all(rho, t, noise.t2_star);
  if (noise.t1) out = relax_all(out, t, *noise.t1, noise.ground_population);
  return out;
}

DensityMatrix phase_damp(const DensityMatrix& rho, double t, double t2, int spin) {
  require_time(t);
  if (!(t2 > 0.0)) throw std::invalid_argument("phase_damp: t2 must be > 0");
  const int bit = spin_bit(spin, rho.qubits());
  const double f = std::exp(-t / t2);
  Matrix m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (((r ^ c) >> bit) & 1) m(r, c) *= f;
    }
  }
  return DensityMatrix::trusted(Operator(std::move(m)), rho.label());
}

DensityMatrix t1_relax(const DensityMatrix& rho, double t, double t1, int spin,
                       double ground_population) {
  require_time(t);
  if (!(t1 > 0.0)) throw std::invalid_argument("t1_relax: t1 must be > 0");
  spin_bit(spin, rho.qubits());
  return DensityMatrix::trusted(amplitude_damp_spin(rho.op(), t, t1, spin, ground_population),
                                rho.label());
}

DensityMatrix miscalibrated_rotation(const DensityMatrix& rho, int spin, double angle,
                                     double phase, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("miscalibrated_rotation: kappa must be > 0");
  const Operator u = rotation_operator(spin, rho.qubits(), kappa * angle, phase);
  return DensityMatrix::trusted(u * rho.op() * u.adjoint(), rho.label());
}

double noisy_chsh_max(int l, const NoiseParams& noise) {
  return noisy_chsh_max(l, noise, GridSpec::standard());
}

double noisy_chsh_max(int l, const NoiseParams& noise, const GridSpec& grid) {
  return chsh_sweep(l, grid, EvalPath::moussa, noise).max_value;
}

double noisy_state_independent_value(const DensityMatrix& rho, const NoiseParams& noise) {
  return state_independent_terms(rho, EvalPath::moussa, noise).total;
}

}  // namespace nmrctx
