#include "nmrctx/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nmrctx {

namespace {

using nlohmann::ordered_json;

ordered_json noise_json(const std::optional<NoiseParams>& noise) {
  if (!noise) return nullptr;
  ordered_json j;
  j["t2_star_s"] = std::isinf(noise->t2_star) ? ordered_json(nullptr) : ordered_json(noise->t2_star);
  j["t1_s"] = noise->t1 ? ordered_json(*noise->t1) : ordered_json(nullptr);
  j["gate_duration_pair_s"] = noise->gate_duration_pair;
  j["gate_duration_triple_s"] = noise->gate_duration_triple;
  j["rf_scale_samples"] = noise->rf_scale_samples;
  return j;
}

// Multiples of pi/4 print symbolically, anything else as a decimal.
std::string angle_label(double a) {
  const double q = a / (std::numbers::pi / 4);
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9) return format_number(a, 3);
  const int k = static_cast<int>(r);
  if (k == 0) return "0";
  int num = k, den = 4;
  while (num % 2 == 0 && den > 1) {
    num /= 2;
    den /= 2;
  }
  std::string s = num < 0 ? "-" : "";
  if (std::abs(num) != 1) s += std::to_string(std::abs(num));
  s += "\xCF\x80";  // pi
  if (den != 1) s += "/" + std::to_string(den);
  return s;
}

// Diverging blue-white-red.
std::string color_for(double v, double lim) {
  const double t = std::clamp(v / lim, -1.0, 1.0);
  int r, g, b;
  if (t >= 0) {
    r = 255;
    g = static_cast<int>(std::lround(255 * (1 - t)));
    b = g;
  } else {
    b = 255;
    r = static_cast<int>(std::lround(255 * (1 + t)));
    g = r;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

struct Pt {
  double x, y;
};

// Marching squares over cell-centred samples; returns line segments in pixel space.
std::vector<std::array<Pt, 2>> contour(const std::vector<double>& v, std::size_t n, double level,
                                       double x0, double y0, double cell) {
  std::vector<std::array<Pt, 2>> segs;
  const auto at = [&](std::size_t i, std::size_t j) { return v[i * n + j]; };  // i: beta, j: eta
  const auto px = [&](double i) { return x0 + (i + 0.5) * cell; };
  const auto py = [&](double j) { return y0 + (static_cast<double>(n) - 1 - j + 0.5) * cell; };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const std::array<double, 4> c{at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)};
      const std::array<std::array<double, 2>, 4> pos{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
      std::vector<Pt> hits;
      for (int e = 0; e < 4; ++e) {
        const int f = (e + 1) % 4;
        const double a = c[static_cast<std::size_t>(e)] - level;
        const double b = c[static_cast<std::size_t>(f)] - level;
        if ((a < 0) != (b < 0)) {
          const double t = a / (a - b);
          const auto& pe = pos[static_cast<std::size_t>(e)];
          const auto& pf = pos[static_cast<std::size_t>(f)];
          const double di = pe[0] + t * (pf[0] - pe[0]);
          const double dj = pe[1] + t * (pf[1] - pe[1]);
          hits.push_back({px(static_cast<double>(i) + di), py(static_cast<double>(j) + dj)});
        }
      }
      if (hits.size() == 2) {
        segs.push_back({hits[0], hits[1]});
      } else if (hits.size() == 4) {
        const double centre = (c[0] + c[1] + c[2] + c[3]) / 4 - level;
        const bool first_above = c[0] - level >= 0;
        if ((centre >= 0) == first_above) {
          segs.push_back({hits[0], hits[1]});
          segs.push_back({hits[2], hits[3]});
        } else {
          segs.push_back({hits[3], hits[0]});
          segs.push_back({hits[1], hits[2]});
        }
      }
    }
  }
  return segs;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string format_number(double v, int digits) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string sweep_csv(const SweepResult& r) {
  std::string s = "beta,eta,value\n";
  for (const SweepPoint& p : r.points) {
    s += format_number(p.beta, 12) + "," + format_number(p.eta, 12) + "," +
         format_number(p.value, 15) + "\n";
  }
  return s;
}

std::string sweep_summary_json(const SweepResult& r) {
  ordered_json j;
  j["l"] = r.l;
  j["state"] = "|" + zeeman_label(qho_to_zeeman(r.l), 2) + ">";
  j["max"] = r.max_value;
  j["argmax"] = {{"beta", r.argmax_beta}, {"eta", r.argmax_eta}};
  j["min"] = r.min_value;
  j["bound_classical"] = kChshClassicalBound;
  j["bound_quantum"] = chsh_quantum_bound();
  j["violates_classical"] = r.max_value > kChshClassicalBound;
  j["via"] = to_string(r.via);
  j["grid"] = {{"start", r.grid.start},
               {"stop", r.grid.stop},
               {"step", r.grid.step},
               {"points", r.grid.points().size()}};
  j["noise"] = noise_json(r.noise);
  return j.dump(2) + "\n";
}

std::string sweep_svg(const SweepResult& r) {
  const std::vector<double> axis = r.grid.points();
  const std::size_t n = axis.size();
  const double lim = chsh_quantum_bound();
  const double plot = 420.0;
  const double cell = plot / static_cast<double>(n);
  const double x0 = 70.0, y0 = 40.0;
  const double width = x0 + plot + 110.0, height = y0 + plot + 60.0;

  std::vector<double> values(n * n);
  for (std::size_t k = 0; k < r.points.size(); ++k) values[k] = r.points[k].value;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width, 6)
    << "\" height=\"" << format_number(height, 6) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << format_number(x0 + plot / 2, 6) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">I_"
    << r.l << "(\xCE\xB2, \xCE\xB7), state |" << zeeman_label(qho_to_zeeman(r.l), 2)
    << "&#x27E9;, max " << format_number(r.max_value, 6) << "</text>\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = x0 + static_cast<double>(i) * cell;
      const double y = y0 + static_cast<double>(n - 1 - j) * cell;
      s << "<rect x=\"" << format_number(x, 8) << "\" y=\"" << format_number(y, 8) << "\" width=\""
        << format_number(cell, 8) << "\" height=\"" << format_number(cell, 8) << "\" fill=\""
        << color_for(values[i * n + j], lim) << "\"><title>" << format_number(values[i * n + j], 6)
        << "</title></rect>\n";
    }
  }
  for (double level : {kChshClassicalBound, -kChshClassicalBound}) {
    for (const auto& seg : contour(values, n, level, x0, y0, cell)) {
      s << "<line x1=\"" << format_number(seg[0].x, 8) << "\" y1=\"" << format_number(seg[0].y, 8)
        << "\" x2=\"" << format_number(seg[1].x, 8) << "\" y2=\"" << format_number(seg[1].y, 8)
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
  }
  s << "<rect x=\"" << format_number(x0, 6) << "\" y=\"" << format_number(y0, 6) << "\" width=\""
    << format_number(plot, 6) << "\" height=\"" << format_number(plot, 6)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  // Prefer ticks on multiples of pi/4 when the grid hits enough of them.
  std::vector<std::size_t> ticks;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = axis[i] / (std::numbers::pi / 4);
    if (std::abs(q - std::round(q)) < 1e-9) ticks.push_back(i);
  }
  if (ticks.size() < 3 || ticks.size() > 17) {
    ticks.clear();
    const std::size_t stride = std::max<std::size_t>(1, n / 9);
    for (std::size_t i = 0; i < n; i += stride) ticks.push_back(i);
  }
  for (std::size_t i : ticks) {
    const double c = (static_cast<double>(i) + 0.5) * cell;
    s << "<text x=\"" << format_number(x0 + c, 8) << "\" y=\"" << format_number(y0 + plot + 16, 6)
      << "\" text-anchor=\"middle\">" << angle_label(axis[i]) << "</text>\n";
    s << "<text x=\"" << format_number(x0 - 6, 6) << "\" y=\""
      << format_number(y0 + plot - c + 4, 8) << "\" text-anchor=\"end\">" << angle_label(axis[i])
      << "</text>\n";
  }
  s << "<text x=\"" << format_number(x0 + plot / 2, 6) << "\" y=\"" << format_number(y0 + plot + 40, 6)
    << "\" text-anchor=\"middle\">\xCE\xB2</text>\n";
  s << "<text x=\"20\" y=\"" << format_number(y0 + plot / 2, 6) << "\" text-anchor=\"middle\">\xCE\xB7</text>\n";

  // Colour bar
  const double bx = x0 + plot + 30, bw = 18;
  const int steps = 40;
  for (int k = 0; k < steps; ++k) {
    const double v = lim - (2 * lim) * (k + 0.5) / steps;
    s << "<rect x=\"" << format_number(bx, 6) << "\" y=\"" << format_number(y0 + plot * k / steps, 8)
      << "\" width=\"" << format_number(bw, 6) << "\" height=\"" << format_number(plot / steps + 0.5, 6)
      << "\" fill=\"" << color_for(v, lim) << "\"/>\n";
  }
  for (double v : {lim, 2.0, 0.0, -2.0, -lim}) {
    const double y = y0 + plot * (lim - v) / (2 * lim);
    s << "<text x=\"" << format_number(bx + bw + 4, 6) << "\" y=\"" << format_number(y + 4, 8) << "\">"
      << (std::abs(std::abs(v) - lim) < 1e-12 ? (v > 0 ? "2\xE2\x88\x9A" "2" : "-2\xE2\x88\x9A" "2")
                                               : format_number(v, 3))
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string state_independent_json(const StateIndependentTerms& t, const std::string& state_label,
                                   EvalPath via, const std::optional<NoiseParams>& noise) {
  static const std::array<const char*, 6> names{"P11 P12 P13", "P21 P22 P23", "P31 P32 P33",
                                                "P11 P21 P31", "P12 P22 P32", "P13 P23 P33"};
  ordered_json j;
  j["state"] = state_label;
  j["via"] = to_string(via);
  ordered_json terms = ordered_json::array();
  for (std::size_t k = 0; k < 6; ++k) {
    terms.push_back({{"context", names[k]},
                     {"expectation", t.expectations[k]},
                     {"sign", t.signs[k]},
                     {"contribution", t.signs[k] * t.expectations[k]}});
  }
  j["terms"] = terms;
  j["total"] = t.total;
  j["classical_bound"] = kStateIndependentClassicalBound;
  j["quantum_bound"] = kStateIndependentQuantumValue;
  j["violates_classical"] = t.total > kStateIndependentClassicalBound;
  j["noise"] = noise_json(noise);
  return j.dump(2) + "\n";
}

std::string bounds_report(const NCHVBoundReport& chsh, const NCHVBoundReport& si) {
  std::ostringstream s;
  for (const NCHVBoundReport* r : {&chsh, &si}) {
    s << "expression: " << r->expression << "\n";
    s << "  variables:        " << r->n_variables << "\n";
    s << "  assignments:      " << r->enumerated << "\n";
    s << "  classical max:    " << r->classical_max << "\n";
    s << "  attained values: ";
    for (int v : r->attained_values) s << " " << v;
    s << "\n";
    s << "  maximizers:       " << r->maximizers.size() << "\n";
  }
  s << "quantum values: CHSH 2*sqrt(2) = " << format_number(chsh_quantum_bound(), 12)
    << ", state-independent = " << format_number(kStateIndependentQuantumValue, 12) << "\n";
  return s.str();
}

std::string controls_csv(const ControlSequence& c) {
  std::string s = "segment,channel,amplitude,phase\n";
  for (int k = 0; k < c.segments(); ++k) {
    for (int ch = 0; ch < c.channels(); ++ch) {
      s += std::to_string(k + 1) + "," + std::to_string(ch + 1) + "," +
           format_number(c.amplitude(k, ch), 12) + "," + format_number(c.phase(k, ch), 12) + "\n";
    }
  }
  return s;
}

std::string grape_json(const std::string& target_name, const GrapeConfig& config,
                       const GrapeResult& result, const RobustnessReport& robustness) {
  ordered_json j;
  j["target"] = target_name;
  j["status"] = to_string(result.status);
  if (!result.message.empty()) j["message"] = result.message;
  j["seed"] = result.seed;
  j["segments"] = result.controls.segments();
  j["segment_duration_s"] = result.controls.segment_duration();
  j["total_duration_s"] = result.controls.total_duration();
  j["max_amplitude_rad_s"] = config.max_amplitude;
  j["fidelity_goal"] = config.fidelity_goal;
  j["fidelity"] = result.fidelity;
  j["iterations"] = result.iterations;
  j["history"] = result.history;
  j["robustness"] = {{"kappas", robustness.kappas},
                     {"fidelities", robustness.fidelities},
                     {"mean", robustness.mean}};
  return j.dump(2) + "\n";
}

}  // namespace nmrctx
