#pragma once

// Hand-rolled generators and independent reference implementations shared by the
// test binaries. Nothing here calls into the library's numerics, so it can serve as an
// oracle for them.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nmrctx/operator.hpp"
#include "nmrctx/state.hpp"

namespace testkit {

using nmrctx::Complex;
using nmrctx::Matrix;
using nmrctx::Operator;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 eng_;
};

inline Matrix ginibre(Rng& rng, int n) {
  Matrix g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
  return g;
}

// Haar-like unitary: QR of a Ginibre matrix with the diagonal phases of R removed.
inline Matrix random_unitary_matrix(Rng& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(rng, n));
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix rr = qr.matrixQR();
  for (int k = 0; k < n; ++k) {
    const Complex d = rr(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

inline Operator random_unitary(Rng& rng, int n) { return Operator(random_unitary_matrix(rng, n)); }

inline Operator random_hermitian(Rng& rng, int n, double scale = 1.0) {
  const Matrix g = ginibre(rng, n);
  return Operator(Matrix(0.5 * scale * (g + g.adjoint())));
}

inline Operator random_operator(Rng& rng, int n) { return Operator(ginibre(rng, n)); }

// Mixed state G G^dagger / Tr.
inline nmrctx::DensityMatrix random_density(Rng& rng, int n) {
  const Matrix g = ginibre(rng, n);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return nmrctx::DensityMatrix(Operator(rho), "random");
}

inline nmrctx::DensityMatrix random_pure(Rng& rng, int n) {
  Eigen::VectorXcd v(n);
  for (int k = 0; k < n; ++k) v(k) = Complex(rng.normal(), rng.normal());
  v.normalize();
  Matrix rho = v * v.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return nmrctx::DensityMatrix(Operator(rho), "pure");
}

// Commuting Hermitian unitaries V diag(+-1) V^dagger sharing one random eigenbasis.
inline std::vector<Operator> random_commuting_involutions(Rng& rng, int n, int count) {
  const Matrix v = random_unitary_matrix(rng, n);
  std::vector<Operator> out;
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXcd d(n);
    for (int j = 0; j < n; ++j) d(j) = rng.coin() ? 1.0 : -1.0;
    out.emplace_back(Matrix(v * d.asDiagonal() * v.adjoint()));
  }
  return out;
}

// ---- reference implementations -------------------------------------------------------

inline Matrix naive_kron(const Matrix& a, const Matrix& b) {
  const auto ra = a.rows(), rb = b.rows();
  Matrix out(ra * rb, ra * rb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ra; ++j)
      for (Eigen::Index k = 0; k < rb; ++k)
        for (Eigen::Index l = 0; l < rb; ++l) out(i * rb + k, j * rb + l) = a(i, j) * b(k, l);
  return out;
}

// exp(-i h t) by scaling and squaring of a truncated Taylor series.
inline Matrix taylor_expm(const Matrix& h, double t) {
  Matrix x = Complex(0.0, -t) * h;
  const double norm = x.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  x /= std::pow(2.0, squarings);
  const auto n = h.rows();
  Matrix term = Matrix::Identity(n, n);
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = (term * x / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = (sum * sum).eval();
  return sum;
}

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Trace over qubit `spin` (1-based, spin 1 most significant) by explicit index loops.
inline Matrix naive_partial_trace(const Matrix& rho, int spin) {
  const int dim = static_cast<int>(rho.rows());
  int n = 0;
  while ((1 << n) < dim) ++n;
  const int bit = n - spin;
  Matrix out = Matrix::Zero(dim / 2, dim / 2);
  const auto squeeze = [&](int idx) {
    const int low = idx & ((1 << bit) - 1);
    const int high = idx >> (bit + 1);
    return (high << bit) | low;
  };
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      if (((r >> bit) & 1) != ((c >> bit) & 1)) continue;
      out(squeeze(r), squeeze(c)) += rho(r, c);
    }
  return out;
}

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline Matrix id2() { return Matrix::Identity(2, 2); }

}  // namespace testkit
