#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nmrctx/moussa.hpp"
#include "nmrctx/pseudospin.hpp"
#include "support.hpp"

using namespace nmrctx;
using namespace testkit;

namespace {

Complex direct(const DensityMatrix& sys, const std::vector<Operator>& ops) {
  Matrix prod = Matrix::Identity(4, 4);
  for (const Operator& o : ops) prod = o.matrix() * prod;
  return (sys.matrix() * prod).trace();
}

}  // namespace

TEST_SUITE("moussa") {

TEST_CASE("controlled gate") {
  CHECK(max_abs_diff(controlled_gate(Operator::identity(4)), Operator::identity(8)) == 0.0);
  Rng rng(1);
  const Operator g = controlled_gate(random_unitary(rng, 4));
  CHECK(max_abs_diff(g.adjoint() * g, Operator::identity(8)) <= 1e-12);

  const Operator cx = controlled_gate(kron(pauli(Axis::x), Operator::identity(2)));
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(8);
  ket(0b100) = 1.0;
  const Eigen::VectorXcd out = cx.matrix() * ket;
  CHECK(std::abs(out(0b110) - 1.0) < 1e-15);
  CHECK(std::abs(out.norm() - 1.0) < 1e-15);

  CHECK_THROWS_AS(controlled_gate(2.0 * Operator::identity(4)), std::invalid_argument);
  CHECK_THROWS_AS(controlled_gate(Operator::identity(8)), std::invalid_argument);
}

TEST_CASE("scaled controlled gate is a fractional power") {
  Rng rng(6);
  const Operator u = random_unitary(rng, 4);
  CHECK(max_abs_diff(controlled_gate_scaled(u, 1.0), controlled_gate(u)) == 0.0);
  const Operator half = controlled_gate_scaled(u, 0.5);
  CHECK(max_abs_diff(half * half, controlled_gate(u)) < 1e-12);
  CHECK(controlled_gate_scaled(u, 0.9).is_unitary());
  // For an involution, kappa = 1 +- delta rotates only partially.
  const Operator a = make_gamma_set().gx;
  CHECK(hs_fidelity(controlled_gate_scaled(a, 0.9), controlled_gate(a)) < 1.0 - 1e-3);
}

TEST_CASE("run_moussa examples") {
  const ObservableSet o = make_observables(0.0, 0.0);
  const std::vector<Operator> ab{o.a, o.b};
  CHECK(std::abs(run_moussa(basis_state(0, 2), ab) - 1.0) < 1e-12);

  const DensityMatrix mixed = maximally_mixed(2);
  for (double eta : {-3.0, -1.0, 0.0, 0.4, 2.5}) {
    const ObservableSet od = make_observables(0.0, eta);
    const std::vector<Operator> cd{od.c, od.d};
    CHECK(std::abs(run_moussa(mixed, cd).real()) < 1e-12);
  }
  CHECK(std::abs(run_moussa(basis_state(2, 2), std::vector<Operator>{}) - 1.0) < 1e-12);
}

TEST_CASE("normalized expectation examples") {
  const ObservableSet o = make_observables(3 * std::numbers::pi / 4, 0.0);
  const std::vector<Operator> bc{o.b, o.c};
  CHECK(normalized_expectation(basis_state(1, 2), bc) ==
        doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-12));

  // Dephasing strictly shrinks the result.
  const ObservableSet o2 = make_observables(0.0, 0.0);
  const std::vector<Operator> ab{o2.a, o2.b};
  GateNoise noisy;
  noisy.t2_star = 0.8;
  noisy.block_duration = 0.023;
  const double clean = normalized_expectation(basis_state(0, 2), ab);
  // Reference sees the same ancilla decay, so compare the raw signals.
  const double raw_clean = run_moussa(basis_state(0, 2), ab).real();
  const double raw_noisy = run_moussa(basis_state(0, 2), ab, noisy).real();
  CHECK(std::abs(raw_noisy) < std::abs(raw_clean));
  CHECK(std::abs(normalized_expectation(basis_state(0, 2), ab, noisy)) <= std::abs(clean));
}

TEST_CASE("errors") {
  const GammaSet g = make_gamma_set();
  const std::vector<Operator> noncommuting{g.gx, g.gz};
  CHECK_THROWS_AS(run_moussa(basis_state(0, 2), noncommuting), NonCommutingError);
  CHECK_THROWS_AS(MoussaExperiment(basis_state(0, 2), noncommuting), NonCommutingError);
  const std::vector<Operator> notunitary{2.0 * Operator::identity(4)};
  CHECK_THROWS_AS(run_moussa(basis_state(0, 2), notunitary), std::invalid_argument);
  CHECK_THROWS_AS(run_moussa(basis_state(0, 3), std::vector<Operator>{}), std::invalid_argument);
  CHECK_THROWS_AS(MoussaExperiment(basis_state(0, 1), {}), std::invalid_argument);

  // A register state with no ancilla polarization has no reference signal.
  const std::vector<Operator> ops{g.gx};
  CHECK_THROWS_AS(normalized_expectation_register(maximally_mixed(3), ops), DegenerateReferenceError);
}

TEST_CASE("triples of the Peres-Mermin matrix") {
  const PeresMerminMatrix p = make_peres_mermin();
  Rng rng(44);
  const DensityMatrix states[3] = {maximally_mixed(2), random_density(rng, 2 * 2), random_pure(rng, 4)};
  for (const DensityMatrix& s : states) {
    for (int k = 1; k <= 3; ++k) {
      CHECK(run_moussa_triple(s, p.row(k)) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(run_moussa_triple(s, p.column(k)) == doctest::Approx(k == 3 ? -1.0 : 1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("oracle equivalence on 100 random commuting instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityMatrix sys = rng.coin() ? random_density(rng, 4) : random_pure(rng, 4);
    std::vector<Operator> ops = random_commuting_involutions(rng, 4, rng.integer(1, 3));
    const double oracle = direct(sys, ops).real();
    CHECK(std::abs(normalized_expectation(sys, ops) - oracle) <= 1e-10);

    // Order independence and |signal| <= |reference|.
    const Complex s1 = run_moussa(sys, ops);
    std::reverse(ops.begin(), ops.end());
    CHECK(std::abs(run_moussa(sys, ops) - s1) <= 1e-12);
    CHECK(std::abs(s1) <= std::abs(run_moussa(sys, std::vector<Operator>{})) + 1e-12);
  }
}

TEST_CASE("register input: thermal-like and pseudopure register states") {
  Rng rng(8);
  const double eps = 1e-4;
  const std::vector<Operator> ops = random_commuting_involutions(rng, 4, 2);
  // (1-eps) 1/8 + eps |0><0| (x) rho_sys: the ancilla pulse turns it into the signal state.
  const DensityMatrix sys = random_density(rng, 4);
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = 1;
  const Matrix reg = (1 - eps) * Matrix::Identity(8, 8) / 8.0 + eps * naive_kron(zero, sys.matrix());
  const DensityMatrix r(Operator(reg), "register");
  CHECK(std::abs(normalized_expectation_register(r, ops) - direct(sys, ops).real()) < 1e-10);
  const MoussaExperiment ex(r, ops);
  CHECK(ex.normalized() == doctest::Approx(normalized_expectation_register(r, ops)));
  CHECK(std::abs(ex.readout() - run_moussa_register(r, ops)) < 1e-15);
  CHECK(std::abs(ex.reference() - run_moussa_register(r, std::vector<Operator>{})) < 1e-15);
}

}  // TEST_SUITE
