#include "nmrctx/inequality.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "nmrctx/moussa.hpp"
#include "nmrctx/pseudospin.hpp"
#include "parallel.hpp"

namespace nmrctx {

namespace {

constexpr double kTieTol = 1e-12;

std::string trim(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("cannot parse number '" + s + "'");
  return v;
}

double expect(const DensityMatrix& rho, const Operator& product) {
  return expectation(rho, product).real();
}

double term(const DensityMatrix& rho, std::span<const Operator> ops, EvalPath via,
            const GateNoise& noise) {
  if (via == EvalPath::direct) return expect(rho, ordered_product(ops));
  return rho.dim() == 4 ? normalized_expectation(rho, ops, noise)
                        : normalized_expectation_register(rho, ops, noise);
}

}  // namespace

std::string to_string(EvalPath via) { return via == EvalPath::direct ? "direct" : "moussa"; }

EvalPath parse_eval_path(const std::string& s) {
  if (s == "direct") return EvalPath::direct;
  if (s == "moussa") return EvalPath::moussa;
  throw std::invalid_argument("evaluation path must be 'direct' or 'moussa', got '" + s + "'");
}

GridSpec GridSpec::standard() {
  return GridSpec{-std::numbers::pi, std::numbers::pi, std::numbers::pi / 4};
}

double GridSpec::parse_angle(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty angle");
  double sign = 1.0;
  if (s[0] == '-' || s[0] == '+') {
    if (s[0] == '-') sign = -1.0;
    s.erase(0, 1);
  }
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return sign * parse_number(s);
  std::string coef = s.substr(0, pos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double value = (coef.empty() ? 1.0 : parse_number(coef)) * std::numbers::pi;
  const std::string rest = s.substr(pos + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') throw std::invalid_argument("cannot parse angle '" + text + "'");
    const double den = parse_number(rest.substr(1));
    if (den == 0.0) throw std::invalid_argument("division by zero in angle '" + text + "'");
    value /= den;
  }
  return sign * value;
}

GridSpec GridSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) throw std::invalid_argument("grid must be 'start:stop:step'");
  GridSpec g{parse_angle(parts[0]), parse_angle(parts[1]), parse_angle(parts[2])};
  g.validate();
  return g;
}

void GridSpec::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !std::isfinite(step)) {
    throw std::invalid_argument("grid: non-finite bound");
  }
  if (!(step > 0.0)) throw std::invalid_argument("grid: step must be > 0");
  if (stop < start) throw std::invalid_argument("grid: empty range (stop < start)");
  if (points().size() < 2) throw std::invalid_argument("grid: fewer than 2 points");
}

std::vector<double> GridSpec::points() const {
  if (!(step > 0.0) || stop < start) return {};
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = start + static_cast<double>(k) * step;
  if (std::abs(out.back() - stop) <= 1e-9 * step) out.back() = stop;
  return out;
}

double chsh_quantum_bound() { return 2.0 * std::numbers::sqrt2; }

double chsh_value(const DensityMatrix& rho, double beta, double eta, EvalPath via,
                  const GateNoise& noise) {
  if (rho.dim() != 4) throw std::invalid_argument("chsh_value: expected a two-qubit state");
  const ObservableSet o = make_observables(beta, eta);
  const std::array<Operator, 2> ab{o.a, o.b}, bc{o.b, o.c}, cd{o.c, o.d}, ad{o.a, o.d};
  return term(rho, ab, via, noise) + term(rho, bc, via, noise) + term(rho, cd, via, noise) -
         term(rho, ad, via, noise);
}

double chsh_closed_form(int l, double beta, double eta) {
  const int idx = qho_to_zeeman(l);
  const int m = (idx >> 1) & 1;
  const int n = idx & 1;
  const double sn = n ? -1.0 : 1.0;
  const double smn = (m + n) % 2 ? -1.0 : 1.0;
  return sn * (std::cos(beta) - std::cos(eta)) - smn * (std::sin(beta) + std::sin(eta));
}

SweepResult chsh_sweep(int l, const GridSpec& grid, EvalPath via,
                       const std::optional<NoiseParams>& noise) {
  grid.validate();
  if (noise) {
    noise->validate();
    if (via != EvalPath::moussa) {
      throw std::invalid_argument("chsh_sweep: noise is only modeled on the moussa path");
    }
  }
  const DensityMatrix rho = basis_state(qho_to_zeeman(l), 2);
  const std::vector<double> axis = grid.points();
  const std::size_t n = axis.size();

  SweepResult res;
  res.l = l;
  res.grid = grid;
  res.via = via;
  res.noise = noise;
  res.points.resize(n * n);
  detail::parallel_for(n * n, [&](std::size_t k) {
    const double beta = axis[k / n];
    const double eta = axis[k % n];
    double value = 0.0;
    if (noise) {
      for (double kappa : noise->rf_scale_samples) {
        value += chsh_value(rho, beta, eta, via,
                            GateNoise::from(*noise, noise->gate_duration_pair, kappa));
      }
      value /= static_cast<double>(noise->rf_scale_samples.size());
    } else {
      value = chsh_value(rho, beta, eta, via);
    }
    res.points[k] = SweepPoint{beta, eta, value};
  });

  res.max_value = res.points.front().value;
  res.argmax_beta = res.points.front().beta;
  res.argmax_eta = res.points.front().eta;
  res.min_value = res.max_value;
  for (const SweepPoint& p : res.points) {
    if (p.value > res.max_value + kTieTol) {
      res.max_value = p.value;
      res.argmax_beta = p.beta;
      res.argmax_eta = p.eta;
    }
    res.min_value = std::min(res.min_value, p.value);
  }
  return res;
}

NCHVBoundReport nchv_bound_chsh() {
  NCHVBoundReport r;
  r.expression = "AB + BC + CD - AD";
  r.n_variables = 4;
  r.classical_max = -100;
  std::set<int> values;
  std::vector<std::pair<int, std::vector<int>>> all;
  for (int mask = 0; mask < 16; ++mask) {
    const auto v = [mask](int bit) { return (mask >> bit) & 1 ? -1 : 1; };
    const int a = v(3), b = v(2), c = v(1), d = v(0);
    const int value = a * b + b * c + c * d - a * d;
    values.insert(value);
    all.push_back({value, {a, b, c, d}});
    r.classical_max = std::max(r.classical_max, value);
    ++r.enumerated;
  }
  for (auto& [value, assignment] : all) {
    if (value == r.classical_max) r.maximizers.push_back(assignment);
  }
  r.attained_values.assign(values.begin(), values.end());
  return r;
}

NCHVBoundReport nchv_bound_state_independent() {
  NCHVBoundReport r;
  r.expression = "R1 + R2 + R3 + C1 + C2 - C3";
  r.n_variables = 9;
  r.classical_max = -100;
  std::set<int> values;
  std::vector<std::pair<int, std::vector<int>>> all;
  for (int mask = 0; mask < 512; ++mask) {
    std::array<int, 9> p{};
    for (int k = 0; k < 9; ++k) p[static_cast<std::size_t>(k)] = (mask >> (8 - k)) & 1 ? -1 : 1;
    const auto at = [&p](int i, int j) { return p[static_cast<std::size_t>(3 * i + j)]; };
    int value = 0;
    for (int i = 0; i < 3; ++i) value += at(i, 0) * at(i, 1) * at(i, 2);
    value += at(0, 0) * at(1, 0) * at(2, 0);
    value += at(0, 1) * at(1, 1) * at(2, 1);
    value -= at(0, 2) * at(1, 2) * at(2, 2);
    values.insert(value);
    all.push_back({value, std::vector<int>(p.begin(), p.end())});
    r.classical_max = std::max(r.classical_max, value);
    ++r.enumerated;
  }
  for (auto& [value, assignment] : all) {
    if (value == r.classical_max) r.maximizers.push_back(assignment);
  }
  r.attained_values.assign(values.begin(), values.end());
  return r;
}

StateIndependentTerms state_independent_terms(const DensityMatrix& rho, EvalPath via,
                                              const std::optional<NoiseParams>& noise) {
  if (rho.dim() != 4 && rho.dim() != 8) {
    throw std::invalid_argument("state_independent_terms: expected a 4- or 8-dim state");
  }
  if (noise) {
    noise->validate();
    if (via != EvalPath::moussa) {
      throw std::invalid_argument("state_independent_terms: noise needs the moussa path");
    }
  }
  // The direct route reads the system marginal of a register state.
  const DensityMatrix target =
      (via == EvalPath::direct && rho.dim() == 8)
          ? DensityMatrix::trusted(partial_trace(rho.op(), 1), rho.label())
          : rho;

  const PeresMerminMatrix pm = make_peres_mermin();
  const std::array<std::array<Operator, 3>, 6> contexts{pm.row(1),    pm.row(2),    pm.row(3),
                                                        pm.column(1), pm.column(2), pm.column(3)};
  StateIndependentTerms out;
  for (std::size_t t = 0; t < contexts.size(); ++t) {
    double value = 0.0;
    if (noise) {
      for (double kappa : noise->rf_scale_samples) {
        value += term(target, contexts[t], via,
                      GateNoise::from(*noise, noise->gate_duration_triple, kappa));
      }
      value /= static_cast<double>(noise->rf_scale_samples.size());
    } else {
      value = term(target, contexts[t], via, GateNoise{});
    }
    out.expectations[t] = value;
    out.total += out.signs[t] * value;
  }
  return out;
}

double state_independent_value(const DensityMatrix& rho, EvalPath via) {
  return state_independent_terms(rho, via).total;
}

}  // namespace nmrctx
