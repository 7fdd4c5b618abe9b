#include "nmrctx/operator.hpp"

#include <stdexcept>
#include <string>

namespace nmrctx {

namespace {

bool is_power_of_two(Eigen::Index n) { return n >= 2 && (n & (n - 1)) == 0; }

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                                ")");
  }
}

}  // namespace

Operator::Operator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("Operator: matrix is not square");
  if (!is_power_of_two(m_.rows()) || m_.rows() > (Eigen::Index{1} << kMaxQubits)) {
    throw std::invalid_argument("Operator: dimension " + std::to_string(m_.rows()) +
                                " is not 2^n with 1 <= n <= 4");
  }
}

Operator Operator::identity(int dim) { return Operator(Matrix::Identity(dim, dim)); }

Operator Operator::zero(int dim) { return Operator(Matrix::Zero(dim, dim)); }

int Operator::qubits() const {
  int n = 0;
  for (int d = dim(); d > 1; d >>= 1) ++n;
  return n;
}

Operator Operator::adjoint() const { return Operator(Matrix(m_.adjoint())); }

bool Operator::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_unitary(double tol) const {
  const Matrix g = m_.adjoint() * m_;
  return (g - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff() <= tol;
}

Operator& Operator::operator+=(const Operator& o) {
  require_same_dim(*this, o, "operator+");
  m_ += o.m_;
  return *this;
}

Operator& Operator::operator-=(const Operator& o) {
  require_same_dim(*this, o, "operator-");
  m_ -= o.m_;
  return *this;
}

Operator& Operator::operator*=(Complex s) {
  m_ *= s;
  return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator*");
  return Operator(Matrix(a.m_ * b.m_));
}

double max_abs_diff(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "max_abs_diff");
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

Operator pauli(Axis axis) {
  Matrix m(2, 2);
  switch (axis) {
    case Axis::x: m << 0, 1, 1, 0; break;
    case Axis::y: m << 0, -kI, kI, 0; break;
    case Axis::z: m << 1, 0, 0, -1; break;
  }
  return Operator(std::move(m));
}

Operator spin_operator(Axis axis) { return 0.5 * pauli(axis); }

Operator kron(const Operator& a, const Operator& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  return Operator(std::move(out));
}

Operator kron(std::initializer_list<Operator> factors) {
  if (factors.size() == 0) throw std::invalid_argument("kron: no factors");
  auto it = factors.begin();
  Operator out = *it++;
  for (; it != factors.end(); ++it) out = kron(out, *it);
  return out;
}

Operator embed(const Operator& op, int spin, int n) {
  if (op.dim() != 2) throw std::invalid_argument("embed: operator must be single-spin (dim 2)");
  if (n < 1 || n > kMaxQubits) throw std::invalid_argument("embed: register size out of range");
  if (spin < 1 || spin > n) {
    throw std::out_of_range("embed: spin index " + std::to_string(spin) +
                            " outside register of " + std::to_string(n));
  }
  const int left = 1 << (spin - 1);
  const int right = 1 << (n - spin);
  Operator out = op;
  if (left > 1) out = kron(Operator::identity(left), out);
  if (right > 1) out = kron(out, Operator::identity(right));
  return out;
}

Operator spin_operator(SpinAxisLabel label, int n) {
  return embed(spin_operator(label.axis), label.spin, n);
}

Operator commutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

Complex trace_product(const Operator& rho, const Operator& op) {
  require_same_dim(rho, op, "trace_product");
  // Tr(AB) = sum_ij A_ij B_ji
  return rho.matrix().cwiseProduct(op.matrix().transpose()).sum();
}

Operator expm(const Operator& h, double t) {
  if (!h.is_hermitian()) throw std::invalid_argument("expm: generator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
  if (es.info() != Eigen::Success) throw std::runtime_error("expm: eigensolver failed");
  const Eigen::VectorXd& w = es.eigenvalues();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(-kI * (w(k) * t));
  const Matrix& v = es.eigenvectors();
  return Operator(Matrix(v * phases.asDiagonal() * v.adjoint()));
}

double hs_fidelity(const Operator& u, const Operator& v) {
  require_same_dim(u, v, "hs_fidelity");
  return std::abs(trace_product(u.adjoint(), v)) / u.dim();
}

Operator ordered_product(std::span<const Operator> ops) {
  if (ops.empty()) throw std::invalid_argument("ordered_product: empty list");
  Operator out = ops.front();
  for (std::size_t k = 1; k < ops.size(); ++k) out = ops[k] * out;
  return out;
}

bool commute(const Operator& a, const Operator& b, double tol) {
  return commutator(a, b).matrix().cwiseAbs().maxCoeff() <= tol;
}

}  // namespace nmrctx
