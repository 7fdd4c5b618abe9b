#pragma once

#include <array>

#include "nmrctx/operator.hpp"

namespace nmrctx {

// Two commuting su(2)-like pseudospin sets on the 4-dim (two-qubit) encoding of the
// four lowest oscillator levels. Left tensor factor is the first system spin.
struct GammaSet {
  Operator gx, gy, gz;
  Operator gx_p, gy_p, gz_p;  // primed set
};

GammaSet make_gamma_set();

// Dichotomic observables A, B(beta), C, D(eta).
struct ObservableSet {
  double beta = 0.0;
  double eta = 0.0;
  Operator a, b, c, d;
};

ObservableSet make_observables(double beta, double eta);

struct ProductOperators {
  Operator ab, bc, cd, da;
};

ProductOperators product_operators(const ObservableSet& obs);

// 3x3 array of mutually compatible (row- and column-wise) observables.
class PeresMerminMatrix {
 public:
  explicit PeresMerminMatrix(std::array<std::array<Operator, 3>, 3> entries)
      : p_(std::move(entries)) {}

  // 1-based indices.
  const Operator& at(int row, int col) const { return p_.at(row - 1).at(col - 1); }
  std::array<Operator, 3> row(int row) const;
  std::array<Operator, 3> column(int col) const;

 private:
  std::array<std::array<Operator, 3>, 3> p_;
};

PeresMerminMatrix make_peres_mermin();

}  // namespace nmrctx
