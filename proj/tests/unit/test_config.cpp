#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "nmrctx/config.hpp"
#include "support.hpp"

using namespace nmrctx;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto dir = std::filesystem::temp_directory_path() / "nmrctx_config_test";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults") {
  const RunConfig rc = default_run_config();
  CHECK(rc.molecule.n_spins == 3);
  CHECK_FALSE(rc.molecule_authoritative);
  CHECK(rc.epsilon == 1e-5);
  CHECK(rc.grid.points().size() == 9);
  CHECK_FALSE(rc.noise_enabled);
  CHECK(rc.noise.t2_star == 0.8);
  CHECK_FALSE(rc.noise.t1.has_value());
  CHECK(rc.noise.gate_duration_pair == 0.023);
  CHECK(rc.noise.gate_duration_triple == 0.04);
  CHECK(rc.via == EvalPath::moussa);
  CHECK(rc.seed == 7);
  CHECK(rc.grape.segments == 1600);
  CHECK(rc.grape.spin_system.has_value());
  CHECK(rc.molecule.coupling(2, 3) == 128.3);
  CHECK(rc.pseudopure_sequence.size() == 16);
}

TEST_CASE("overrides merge over the defaults") {
  const RunConfig rc = parse_run_config(
      R"({"grid": "0:pi:pi/2", "noise": {"enabled": true, "t1_s": 6.3}, "via": "direct", "seed": 11,
          "grape": {"segments": 10}})");
  CHECK(rc.grid.points().size() == 3);
  CHECK(rc.noise_enabled);
  REQUIRE(rc.noise.t1.has_value());
  CHECK(*rc.noise.t1 == 6.3);
  CHECK(rc.noise.t2_star == 0.8);
  CHECK(rc.via == EvalPath::direct);
  CHECK(rc.seed == 11);
  CHECK(rc.grape.segments == 10);
  CHECK(rc.grape.max_iterations == 300);
  CHECK(rc.noise.ground_population > 0.5);
}

TEST_CASE("1/(2J) delays resolve against the molecule") {
  const RunConfig rc = default_run_config();
  bool found = false;
  for (const PulseEvent& e : rc.pseudopure_sequence) {
    if (const auto* je = std::get_if<JEvolution>(&e)) {
      CHECK(je->duration == doctest::Approx(1.0 / (2.0 * rc.molecule.coupling(je->spin_a, je->spin_b))));
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("malformed input raises ConfigError") {
  CHECK_THROWS_AS(parse_run_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"grid": "1:0:0.1"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"via": "sideways"})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"epsilon": -1})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"noise": {"t2_star_s": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"noise": {"rf_scale_samples": []}})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"pseudopure_sequence": [{"type": "echo"}]})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"pseudopure_sequence": [{"type": "rotation", "spins": [4],
                                       "angle": 1, "phase": 0}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"pseudopure_sequence": [{"type": "j_evolution",
                                       "spins": [1], "duration": 0.1}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"grape": {"segments": 0}})"), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/nmrctx.json"), ConfigError);
}

TEST_CASE("angle strings in rotations") {
  const RunConfig rc = parse_run_config(
      R"({"pseudopure_sequence": [{"type": "rotation", "spins": [1], "angle": "pi/2", "phase": "pi/2"}]})");
  REQUIRE(rc.pseudopure_sequence.size() == 1);
  const auto& r = std::get<Rotation>(rc.pseudopure_sequence[0]);
  CHECK(r.angle == doctest::Approx(std::numbers::pi / 2));
  CHECK(r.phase == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("matrix files") {
  const auto rho = temp_file("rho.json", R"({"re": [[0.5,0,0,0],[0,0.5,0,0],[0,0,0,0],[0,0,0,0]]})");
  const DensityMatrix d = load_density_matrix(rho.string());
  CHECK(d.dim() == 4);
  CHECK(d.matrix()(1, 1).real() == 0.5);

  const auto y = temp_file("y.json", R"({"re": [[0,0],[0,0]], "im": [[0,-1],[1,0]]})");
  const Operator u = load_operator(y.string());
  CHECK(max_abs_diff(u, pauli(Axis::y)) == 0.0);

  const auto bad_trace = temp_file("bad.json", R"({"re": [[1,0],[0,1]]})");
  CHECK_THROWS_AS(load_density_matrix(bad_trace.string()), ConfigError);
  const auto ragged = temp_file("ragged.json", R"({"re": [[1,0],[0]]})");
  CHECK_THROWS_AS(load_operator(ragged.string()), ConfigError);
  CHECK_THROWS_AS(load_operator("/nonexistent.json"), ConfigError);
}

}  // TEST_SUITE
