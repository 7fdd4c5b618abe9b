#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nmrctx/commands.hpp"

using namespace nmrctx;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "nmrctx_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p.parent_path());
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

// Small GRAPE problem so a full optimize runs in well under a second.
fs::path small_grape_config(const std::string& name, int max_iterations) {
  const fs::path p = fs::temp_directory_path() / "nmrctx_cli_test" / (name + ".json");
  fs::create_directories(p.parent_path());
  std::ofstream(p) << R"({"grape": {"segments": 40, "segment_duration_s": 2e-5, "max_iterations": )"
                   << max_iterations << "}}";
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sweep writes three files per level") {
  const fs::path dir = scratch("sweep");
  const Run r = cli({"sweep", "--l", "all", "--out", dir.string()});
  CHECK(r.code == kExitOk);
  for (int l = 0; l < 4; ++l)
    for (const char* ext : {".csv", ".json", ".svg"})
      CHECK(fs::exists(dir / ("sweep_l" + std::to_string(l) + ext)));
  CHECK(r.out.find("violates 2") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir / "sweep_l2.json"));
  CHECK(j.at("max").get<double>() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("invalid grid is a configuration error and writes nothing") {
  const fs::path dir = scratch("empty_grid");
  CHECK(cli({"sweep", "--l", "0", "--grid", "1:0:0.1", "--out", dir.string()}).code == kExitConfig);
  CHECK_FALSE(fs::exists(dir));
  CHECK(cli({"sweep", "--l", "5", "--out", dir.string()}).code == kExitConfig);
  CHECK(cli({"sweep", "--noise", "on", "--via", "direct", "--out", dir.string()}).code == kExitConfig);
  CHECK_FALSE(fs::exists(dir));
  CHECK(cli({"sweep", "--config", "/nonexistent.json"}).code == kExitConfig);
  CHECK(cli({"state-independent", "--state", "ket:9", "--out", dir.string()}).code == kExitConfig);
  CHECK(cli({"grape", "--target", "cQ", "--out", dir.string()}).code == kExitConfig);
  CHECK(cli({"frobnicate"}).code == kExitConfig);
  CHECK(cli({}).code == kExitConfig);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("outputs are byte-identical across runs") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const fs::path cfg = small_grape_config("det", 4);
  for (const fs::path& d : {a, b}) {
    CHECK(cli({"sweep", "--l", "all", "--noise", "on", "--out", d.string()}).code == kExitOk);
    CHECK(cli({"state-independent", "--state", "thermal", "--out", d.string()}).code == kExitOk);
    const int code = cli({"grape", "--target", "cC", "--config", cfg.string(), "--out", d.string()}).code;
    CHECK((code == kExitOk || code == kExitGoalNotMet));
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    REQUIRE(fs::exists(b / e.path().filename()));
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    ++compared;
  }
  CHECK(compared == 15);
  CHECK(cli({"bounds"}).out == cli({"bounds"}).out);
}

TEST_CASE("noise settings are echoed in the summaries") {
  const fs::path dir = scratch("noise");
  CHECK(cli({"sweep", "--l", "0", "--noise", "on", "--out", dir.string()}).code == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "sweep_l0.json"));
  CHECK(j.at("noise").at("t2_star_s") == 0.8);
  CHECK(j.at("max").get<double>() > 2.0);
  CHECK(j.at("max").get<double>() < 2.0 * std::sqrt(2.0));

  CHECK(cli({"state-independent", "--state", "mixed", "--noise", "on", "--out", dir.string()}).code == kExitOk);
  const auto s = nlohmann::json::parse(slurp(dir / "state_independent.json"));
  CHECK(s.at("noise").at("gate_duration_triple_s") == 0.04);
  CHECK(s.at("total").get<double>() > 4.0);
  CHECK(s.at("total").get<double>() < 6.0);
}

TEST_CASE("state-independent on every built-in state") {
  const fs::path dir = scratch("si");
  for (const char* st : {"thermal", "mixed", "ket:0", "ket:1", "ket:2", "ket:3"}) {
    CHECK(cli({"state-independent", "--state", st, "--via", "direct", "--out", dir.string()}).code == kExitOk);
    const auto j = nlohmann::json::parse(slurp(dir / "state_independent.json"));
    CHECK(j.at("total").get<double>() == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(j.at("state") == st);
  }
}

TEST_CASE("grape below goal still writes results and exits 3") {
  const fs::path dir = scratch("grape_budget");
  const fs::path cfg = small_grape_config("budget", 1);
  const Run r = cli({"grape", "--target", "cC", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == kExitGoalNotMet);
  CHECK(fs::exists(dir / "grape_cC.csv"));
  const auto j = nlohmann::json::parse(slurp(dir / "grape_cC.json"));
  CHECK(j.at("status") == "budget_exhausted");
  CHECK(j.at("iterations") == 1);
  CHECK(j.at("seed") == 7);
}

TEST_CASE("grape identity target on a drift-free system converges immediately") {
  const fs::path dir = scratch("grape_identity");
  const fs::path cfg = fs::temp_directory_path() / "nmrctx_cli_test" / "identity.json";
  std::ofstream(cfg) << R"({"grape": {"segments": 20, "init_scale": 0,
      "spin_system": {"shifts_hz": [0, 0, 0], "j_hz": [[0, 0, 0], [0, 0, 0], [0, 0, 0]]}}})";
  const Run r = cli({"grape", "--target", "identity", "--config", cfg.string(), "--out", dir.string()});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "grape_identity.json"));
  CHECK(j.at("status") == "converged");
  CHECK(j.at("iterations") == 0);
  CHECK(j.at("fidelity").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("prepare reports the pseudopure match") {
  const fs::path dir = scratch("prepare");
  CHECK(cli({"prepare", "--out", dir.string()}).code == kExitOk);
  const auto j = nlohmann::json::parse(slurp(dir / "prepare.json"));
  CHECK(j.at("cosine").get<double>() > 1.0 - 1e-9);
  CHECK(j.at("diagonal").size() == 8);
}

TEST_CASE("bounds") {
  const Run r = cli({"bounds"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("classical max:    2") != std::string::npos);
  CHECK(r.out.find("classical max:    4") != std::string::npos);
}

}  // TEST_SUITE
