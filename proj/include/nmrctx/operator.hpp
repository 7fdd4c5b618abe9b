#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <Eigen/Dense>

namespace nmrctx {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

// Structural predicates (hermiticity, unitarity, commutation) use this unless told otherwise.
inline constexpr double kDefaultTol = 1e-10;

// Largest register the dense representation accepts.
inline constexpr int kMaxQubits = 4;

enum class Axis { x, y, z };

struct SpinAxisLabel {
  Axis axis;
  int spin;  // 1-based, spin 1 is the leftmost tensor factor
};

// Dense complex square matrix on an n-qubit space (dim = 2^n, 1 <= n <= 4).
// Values are immutable once built; arithmetic returns new operators.
class Operator {
 public:
  Operator() = default;
  explicit Operator(Matrix m);

  static Operator identity(int dim);
  static Operator zero(int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  int qubits() const;
  const Matrix& matrix() const { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  Operator adjoint() const;
  Complex trace() const { return m_.trace(); }

  bool is_hermitian(double tol = kDefaultTol) const;
  bool is_unitary(double tol = kDefaultTol) const;

  Operator& operator+=(const Operator& o);
  Operator& operator-=(const Operator& o);
  Operator& operator*=(Complex s);

  friend Operator operator+(Operator a, const Operator& b) { return a += b; }
  friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
  friend Operator operator-(const Operator& a) { return Operator(Matrix(-a.m_)); }
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(Operator a, Complex s) { return a *= s; }
  friend Operator operator*(Complex s, Operator a) { return a *= s; }
  friend Operator operator*(Operator a, double s) { return a *= Complex(s); }
  friend Operator operator*(double s, Operator a) { return a *= Complex(s); }

 private:
  Matrix m_;
};

// Entrywise max |a - b|; throws on dimension mismatch.
double max_abs_diff(const Operator& a, const Operator& b);

Operator pauli(Axis axis);

// Spin-1/2 angular momentum operator (Pauli / 2) for a single spin.
Operator spin_operator(Axis axis);

Operator kron(const Operator& a, const Operator& b);
Operator kron(std::initializer_list<Operator> factors);

// Places a single-spin operator at position `spin` (1-based) of an n-spin register.
Operator embed(const Operator& op, int spin, int n);

// I_{spin,axis} in an n-spin register.
Operator spin_operator(SpinAxisLabel label, int n);

Operator commutator(const Operator& a, const Operator& b);

// Tr(rho * op) for any square operator pair of equal dimension.
Complex trace_product(const Operator& rho, const Operator& op);

// exp(-i h t) via the Hermitian eigendecomposition of h.
Operator expm(const Operator& h, double t);

// |Tr(u^dagger v)| / dim, insensitive to global phase.
double hs_fidelity(const Operator& u, const Operator& v);

// Product ops[n-1] * ... * ops[0] (the order in which gates act).
Operator ordered_product(std::span<const Operator> ops);

bool commute(const Operator& a, const Operator& b, double tol = kDefaultTol);

}  // namespace nmrctx
