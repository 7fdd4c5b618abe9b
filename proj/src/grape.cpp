#include "nmrctx/grape.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace nmrctx {

namespace {

struct ControlOps {
  Matrix drift;
  std::vector<Matrix> x;  // I_cx per channel
  std::vector<Matrix> y;  // I_cy per channel
};

ControlOps control_ops(const SpinSystemConfig& cfg) {
  ControlOps ops;
  ops.drift = drift_hamiltonian(cfg).matrix();
  for (int c = 1; c <= cfg.n_spins; ++c) {
    ops.x.push_back(spin_operator({Axis::x, c}, cfg.n_spins).matrix());
    ops.y.push_back(spin_operator({Axis::y, c}, cfg.n_spins).matrix());
  }
  return ops;
}

Matrix segment_hamiltonian(const ControlOps& ops, const ControlSequence& u, int seg,
                           double kappa) {
  Matrix h = ops.drift;
  for (int c = 0; c < u.channels(); ++c) {
    h += (kappa * u.ux(seg, c)) * ops.x[static_cast<std::size_t>(c)];
    h += (kappa * u.uy(seg, c)) * ops.y[static_cast<std::size_t>(c)];
  }
  return h;
}

struct SegmentPropagator {
  Matrix v;                 // eigenvectors
  Eigen::VectorXd lambda;   // eigenvalues
  Eigen::VectorXcd phase;   // exp(-i lambda dt)
  Matrix u;
};

SegmentPropagator segment_propagator(const Matrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("GRAPE: eigensolver failed");
  SegmentPropagator s;
  s.v = es.eigenvectors();
  s.lambda = es.eigenvalues();
  s.phase.resize(s.lambda.size());
  for (Eigen::Index k = 0; k < s.lambda.size(); ++k) s.phase(k) = std::exp(-kI * (s.lambda(k) * dt));
  s.u = s.v * s.phase.asDiagonal() * s.v.adjoint();
  return s;
}

void check_channels(const ControlSequence& u, const SpinSystemConfig& cfg) {
  if (u.channels() != cfg.n_spins) {
    throw std::invalid_argument("GRAPE: control channel count must equal the number of spins");
  }
}

// d/dx exp(-i H dt) contracted with M: Tr(M dU) = sum_ab W_ba G_ab Q_ab with
// W = V^dagger M V, Q = V^dagger dH V and G the divided differences of exp(-i lambda dt).
Matrix divided_differences(const SegmentPropagator& s, double dt) {
  const Eigen::Index n = s.lambda.size();
  Matrix g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const double mean = 0.5 * (s.lambda(a) + s.lambda(b));
      const double x = 0.5 * (s.lambda(a) - s.lambda(b)) * dt;
      const double sinc = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      g(a, b) = -kI * dt * std::exp(-kI * (mean * dt)) * sinc;
    }
  }
  return g;
}

Eigen::VectorXd pack(const ControlSequence& u, double scale) {
  const Eigen::Index n = u.ux().size();
  Eigen::VectorXd x(2 * n);
  x.head(n) = Eigen::Map<const Eigen::VectorXd>(u.ux().data(), n) / scale;
  x.tail(n) = Eigen::Map<const Eigen::VectorXd>(u.uy().data(), n) / scale;
  return x;
}

ControlSequence unpack(const Eigen::VectorXd& x, const ControlSequence& shape, double scale) {
  ControlSequence out(shape.segments(), shape.channels(), shape.segment_duration());
  const int ns = shape.segments();
  const Eigen::Index n = static_cast<Eigen::Index>(ns) * shape.channels();
  for (int c = 0; c < shape.channels(); ++c) {
    for (int k = 0; k < ns; ++k) {
      const Eigen::Index i = static_cast<Eigen::Index>(c) * ns + k;  // column-major
      out.set(k, c, x(i) * scale, x(n + i) * scale);
    }
  }
  return out;
}

Eigen::VectorXd pack_gradient(const FidelityGradient& g, double scale) {
  const Eigen::Index n = g.d_ux.size();
  Eigen::VectorXd x(2 * n);
  x.head(n) = Eigen::Map<const Eigen::VectorXd>(g.d_ux.data(), n) * scale;
  x.tail(n) = Eigen::Map<const Eigen::VectorXd>(g.d_uy.data(), n) * scale;
  return x;
}

}  // namespace

ControlSequence::ControlSequence(int n_segments, int n_channels, double segment_duration)
    : ux_(Eigen::MatrixXd::Zero(n_segments, n_channels)),
      uy_(Eigen::MatrixXd::Zero(n_segments, n_channels)),
      dt_(segment_duration) {
  if (n_segments < 1 || n_channels < 1) {
    throw std::invalid_argument("ControlSequence: need at least one segment and channel");
  }
  if (!(segment_duration > 0.0)) {
    throw std::invalid_argument("ControlSequence: segment duration must be > 0");
  }
}

double ControlSequence::amplitude(int seg, int ch) const { return std::hypot(ux_(seg, ch), uy_(seg, ch)); }

double ControlSequence::phase(int seg, int ch) const {
  const double a = amplitude(seg, ch);
  return a == 0.0 ? 0.0 : std::atan2(uy_(seg, ch), ux_(seg, ch));
}

void ControlSequence::set(int seg, int ch, double ux, double uy) {
  ux_(seg, ch) = ux;
  uy_(seg, ch) = uy;
}

void ControlSequence::set_polar(int seg, int ch, double amplitude, double phase) {
  set(seg, ch, amplitude * std::cos(phase), amplitude * std::sin(phase));
}

double ControlSequence::peak_amplitude() const {
  return (ux_.array().square() + uy_.array().square()).sqrt().maxCoeff();
}

void ControlSequence::clip(double limit) {
  for (int k = 0; k < segments(); ++k) {
    for (int c = 0; c < channels(); ++c) {
      const double a = amplitude(k, c);
      if (a > limit) {
        ux_(k, c) *= limit / a;
        uy_(k, c) *= limit / a;
      }
    }
  }
}

void GrapeConfig::validate() const {
  if (!target.is_unitary()) throw std::invalid_argument("GrapeConfig: target is not unitary");
  if (n_segments < 1) throw std::invalid_argument("GrapeConfig: n_segments must be >= 1");
  if (!(segment_duration > 0.0)) throw std::invalid_argument("GrapeConfig: segment duration must be > 0");
  if (max_iterations < 0) throw std::invalid_argument("GrapeConfig: max_iterations must be >= 0");
  if (!(step_size > 0.0)) throw std::invalid_argument("GrapeConfig: step_size must be > 0");
  if (!(fidelity_goal > 0.0 && fidelity_goal <= 1.0)) {
    throw std::invalid_argument("GrapeConfig: fidelity_goal must lie in (0, 1]");
  }
  if (robustness_samples.empty()) throw std::invalid_argument("GrapeConfig: no robustness samples");
  for (double k : robustness_samples) {
    if (!(k > 0.0)) throw std::invalid_argument("GrapeConfig: RF scale factors must be > 0");
  }
  if (!(max_amplitude > 0.0)) throw std::invalid_argument("GrapeConfig: max_amplitude must be > 0");
}

Operator propagate(const ControlSequence& controls, const SpinSystemConfig& cfg, double kappa) {
  check_channels(controls, cfg);
  const ControlOps ops = control_ops(cfg);
  const double dt = controls.segment_duration();
  Matrix total = Matrix::Identity(ops.drift.rows(), ops.drift.cols());
  for (int k = 0; k < controls.segments(); ++k) {
    total = segment_propagator(segment_hamiltonian(ops, controls, k, kappa), dt).u * total;
  }
  return Operator(std::move(total));
}

double robust_fidelity(const ControlSequence& controls, const GrapeConfig& config,
                       const SpinSystemConfig& cfg) {
  double sum = 0.0;
  for (double kappa : config.robustness_samples) {
    sum += hs_fidelity(config.target, propagate(controls, cfg, kappa));
  }
  return sum / static_cast<double>(config.robustness_samples.size());
}

FidelityGradient robust_fidelity_gradient(const ControlSequence& controls,
                                          const GrapeConfig& config, const SpinSystemConfig& cfg) {
  check_channels(controls, cfg);
  const ControlOps ops = control_ops(cfg);
  const int ns = controls.segments();
  const int nc = controls.channels();
  const double dt = controls.segment_duration();
  const Eigen::Index dim = ops.drift.rows();
  const Matrix target_dag = config.target.matrix().adjoint();
  const double n_samples = static_cast<double>(config.robustness_samples.size());

  FidelityGradient out;
  out.d_ux = Eigen::MatrixXd::Zero(ns, nc);
  out.d_uy = Eigen::MatrixXd::Zero(ns, nc);

  std::vector<SegmentPropagator> segs(static_cast<std::size_t>(ns));
  std::vector<Matrix> forward(static_cast<std::size_t>(ns) + 1);
  for (double kappa : config.robustness_samples) {
    forward[0] = Matrix::Identity(dim, dim);
    for (int k = 0; k < ns; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      segs[ku] = segment_propagator(segment_hamiltonian(ops, controls, k, kappa), dt);
      forward[ku + 1] = segs[ku].u * forward[ku];
    }
    const Complex z = (target_dag * forward.back()).trace();
    const double mag = std::abs(z);
    out.fidelity += mag / static_cast<double>(dim) / n_samples;
    if (mag == 0.0) continue;
    const Complex weight = std::conj(z) / (mag * static_cast<double>(dim) * n_samples);

    // back = T^dagger U_N ... U_{k+1}
    Matrix back = target_dag;
    for (int k = ns - 1; k >= 0; --k) {
      const auto ku = static_cast<std::size_t>(k);
      const SegmentPropagator& s = segs[ku];
      const Matrix w = s.v.adjoint() * (forward[ku] * back) * s.v;
      const Matrix wg = w.transpose().cwiseProduct(divided_differences(s, dt));
      for (int c = 0; c < nc; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        const Matrix qx = s.v.adjoint() * ops.x[cu] * s.v;
        const Matrix qy = s.v.adjoint() * ops.y[cu] * s.v;
        out.d_ux(k, c) += kappa * (weight * wg.cwiseProduct(qx).sum()).real();
        out.d_uy(k, c) += kappa * (weight * wg.cwiseProduct(qy).sum()).real();
      }
      back = back * s.u;
    }
  }
  return out;
}

std::string to_string(GrapeStatus s) {
  switch (s) {
    case GrapeStatus::converged: return "converged";
    case GrapeStatus::budget_exhausted: return "budget_exhausted";
    case GrapeStatus::stalled: return "stalled";
    case GrapeStatus::diverged: return "diverged";
  }
  return "unknown";
}

GrapeResult grape_optimize(const GrapeConfig& config, const SpinSystemConfig& cfg,
                           std::optional<ControlSequence> initial) {
  config.validate();
  cfg.validate();
  if (config.target.dim() != 1 << cfg.n_spins) {
    throw std::invalid_argument("grape_optimize: target dimension does not match the spin system");
  }
  const double scale = config.max_amplitude;

  ControlSequence start(config.n_segments, cfg.n_spins, config.segment_duration);
  if (initial) {
    start = *initial;
    check_channels(start, cfg);
  } else {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> dist(-config.init_scale, config.init_scale);
    for (int c = 0; c < cfg.n_spins; ++c) {
      for (int k = 0; k < config.n_segments; ++k) {
        const double ux = dist(rng) * scale;
        const double uy = dist(rng) * scale;
        start.set(k, c, ux, uy);
      }
    }
  }
  start.clip(scale);

  GrapeResult res{start, {}, GrapeStatus::budget_exhausted, 0, config.seed, 0.0, {}};
  Eigen::VectorXd x = pack(start, scale);
  FidelityGradient fg = robust_fidelity_gradient(start, config, cfg);
  double f = fg.fidelity;
  res.history.push_back(f);
  if (!std::isfinite(f)) {
    res.status = GrapeStatus::diverged;
    res.message = "initial fidelity is not finite";
    return res;
  }

  // Polak-Ribiere conjugate-gradient ascent; a step is kept only if it raises F,
  // so the history never decreases.
  Eigen::VectorXd g = pack_gradient(fg, scale);
  Eigen::VectorXd dir = g;
  Eigen::VectorXd g_prev = g;
  double alpha = config.step_size / std::max(g.norm(), 1e-300);
  res.status = GrapeStatus::budget_exhausted;
  for (int it = 1; it <= config.max_iterations; ++it) {
    if (f >= config.fidelity_goal) break;
    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 1) dir = g;  // restart along the gradient
      double a = alpha;
      for (int tries = 0; tries < 40; ++tries, a *= 0.5) {
        ControlSequence trial = unpack(x + a * dir, start, scale);
        trial.clip(scale);
        const double ft = robust_fidelity(trial, config, cfg);
        if (!std::isfinite(ft)) {
          res.status = GrapeStatus::diverged;
          res.message = "non-finite fidelity during line search";
          res.fidelity = f;
          return res;
        }
        if (ft > f) {
          x = pack(trial, scale);
          f = ft;
          alpha = 2.0 * a;
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      res.status = GrapeStatus::stalled;
      res.message = "line search found no ascent direction";
      break;
    }
    res.iterations = it;
    res.history.push_back(f);
    res.controls = unpack(x, start, scale);
    fg = robust_fidelity_gradient(res.controls, config, cfg);
    g_prev = g;
    g = pack_gradient(fg, scale);
    const double beta = std::max(0.0, g.dot(g - g_prev) / std::max(g_prev.squaredNorm(), 1e-300));
    dir = g + beta * dir;
    if (dir.dot(g) <= 0.0) dir = g;
  }
  res.controls = unpack(x, start, scale);
  res.fidelity = f;
  if (f >= config.fidelity_goal) {
    res.status = GrapeStatus::converged;
    res.message.clear();
  } else if (res.status == GrapeStatus::budget_exhausted) {
    res.message = "iteration budget exhausted below the fidelity goal";
  }
  return res;
}

RobustnessReport robustness_report(const ControlSequence& controls, const GrapeConfig& config,
                                   const SpinSystemConfig& cfg) {
  RobustnessReport r;
  for (double kappa : config.robustness_samples) {
    r.kappas.push_back(kappa);
    r.fidelities.push_back(hs_fidelity(config.target, propagate(controls, cfg, kappa)));
    r.mean += r.fidelities.back();
  }
  r.mean /= static_cast<double>(r.kappas.size());
  return r;
}

}  // namespace nmrctx
