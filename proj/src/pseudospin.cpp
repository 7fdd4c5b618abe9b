#include "nmrctx/pseudospin.hpp"

#include <cmath>

namespace nmrctx {

GammaSet make_gamma_set() {
  const Operator sx = pauli(Axis::x);
  const Operator sy = pauli(Axis::y);
  const Operator sz = pauli(Axis::z);
  const Operator id = Operator::identity(2);
  return GammaSet{
      .gx = kron(sx, id),
      .gy = kron(sz, sy),
      .gz = -kron(sy, sy),
      .gx_p = kron(sx, sz),
      .gy_p = kron(id, sy),
      .gz_p = -kron(sx, sx),
  };
}

ObservableSet make_observables(double beta, double eta) {
  const GammaSet g = make_gamma_set();
  return ObservableSet{
      .beta = beta,
      .eta = eta,
      .a = g.gx,
      .b = std::cos(beta) * g.gx_p + std::sin(beta) * g.gz_p,
      .c = g.gz,
      .d = std::cos(eta) * g.gx_p + std::sin(eta) * g.gz_p,
  };
}

ProductOperators product_operators(const ObservableSet& obs) {
  return ProductOperators{
      .ab = obs.a * obs.b,
      .bc = obs.b * obs.c,
      .cd = obs.c * obs.d,
      .da = obs.d * obs.a,
  };
}

std::array<Operator, 3> PeresMerminMatrix::row(int r) const {
  return {at(r, 1), at(r, 2), at(r, 3)};
}

std::array<Operator, 3> PeresMerminMatrix::column(int c) const {
  return {at(1, c), at(2, c), at(3, c)};
}

PeresMerminMatrix make_peres_mermin() {
  const GammaSet g = make_gamma_set();
  return PeresMerminMatrix({{
      {g.gz, g.gz_p, g.gz * g.gz_p},
      {g.gx_p, g.gx, g.gx * g.gx_p},
      {g.gz * g.gx_p, g.gx * g.gz_p, g.gy * g.gy_p},
  }});
}

}  // namespace nmrctx
