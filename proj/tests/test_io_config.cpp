#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "doctest.h"
#include "pairsim/experiments.hpp"
#include "pairsim/io.hpp"

using namespace pairsim;
using experiments::RunConfig;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pairsim_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("defaults") {
    const auto c = RunConfig::from_json(json::object());
    CHECK(c.workers == 1);
    CHECK_FALSE(c.grid.has_value());
  }
  SUBCASE("unknown keys are rejected at every level") {
    CHECK_THROWS_AS(RunConfig::from_json(json{{"gama", 1.0}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"params", {{"gama", 1.0}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"grid", {{"M", 64}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"sweep", {{"k", 1}}}}), ConfigError);
  }
  SUBCASE("bad values") {
    CHECK_THROWS_AS(RunConfig::from_json(json{{"workers", 0}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"params", {{"beta", -1.0}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"params", {{"beta", "wide"}}}}), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"grid", {{"regularization", "box"}}}}),
                    ConfigError);
    CHECK_THROWS_AS(RunConfig::from_json(json{{"kind", "third"}}), ConfigError);
  }
  SUBCASE("round trip") {
    const json in = {{"experiment", "fig1"},
                     {"params", {{"gamma", 3.0}, {"beta", 0.7}, {"k0", 6.0}, {"r0", 12.0}}},
                     {"kind", "node_excited"},
                     {"grid", {{"L", 20.0}, {"N", 512}, {"regularization", "gaussian"}, {"a", 0.3}}},
                     {"workers", 2},
                     {"sweep", {{"k0", {4.0, 6.0}}, {"gamma", {0.0, 2.0}}}}};
    const auto c = RunConfig::from_json(in);
    CHECK(c.params.gamma == 3.0);
    CHECK(c.kind == EnvelopeKind::node_excited);
    REQUIRE(c.grid.has_value());
    CHECK(c.grid->N == 512);
    const json echo = c.to_json();
    CHECK(RunConfig::from_json(echo).to_json() == echo);
  }
  SUBCASE("from file") {
    const auto dir = scratch("cfg");
    std::ofstream(dir / "c.json") << R"({"experiment": "sweep", "seed": 7})";
    CHECK(RunConfig::from_file(dir / "c.json").seed == 7);
    std::ofstream(dir / "broken.json") << "{";
    CHECK_THROWS_AS(RunConfig::from_file(dir / "broken.json"), ConfigError);
    CHECK_THROWS(RunConfig::from_file(dir / "missing.json"));
  }
}

TEST_CASE("csv writer") {
  const auto dir = scratch("csv");
  io::CsvWriter w(dir / "t.csv", {"a", "b"}, {{"note", "x"}});
  w.row({1.0, -0.1});
  w.row({std::string("e"), std::string("f")});
  CHECK_THROWS(w.row({1.0}));
  w.close();
  const std::string text = slurp(dir / "t.csv");
  CHECK(text == "# note: x\na,b\n1.0000000000000000e+00,-1.0000000000000001e-01\ne,f\n");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(io::format_number(0.0) == "0.0000000000000000e+00");
}

TEST_CASE("sha256 and manifest") {
  const auto dir = scratch("manifest");
  std::ofstream(dir / "abc.txt", std::ios::binary) << "abc";
  CHECK(io::sha256_file(dir / "abc.txt") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  io::write_manifest(dir, json{{"seed", 1}}, json{{"extra", true}});
  const json m = json::parse(slurp(dir / "manifest.json"));
  CHECK(m.dump().find("ba7816bf8f01cfea") != std::string::npos);
  CHECK(m.dump().find("\"seed\":1") != std::string::npos);
}

TEST_CASE("experiments rerun byte-identically") {
  auto run_scan = [](const fs::path& dir) {
    RunConfig c;
    c.output_dir = dir;
    c.scan.points = 201;
    c.scan.K_points = 5;
    return experiments::cmd_singularity_scan(c);
  };
  const auto a = scratch("scan_a"), b = scratch("scan_b");
  const auto ra = run_scan(a);
  run_scan(b);
  CHECK(ra.minimum < 1e-12);
  for (const char* f : {"singularity_scan.csv", "singularity_energy.csv"}) {
    CHECK(slurp(a / f) == slurp(b / f));
    CHECK_FALSE(slurp(a / f).empty());
  }

  auto run_fig = [](const fs::path& dir) {
    RunConfig c;
    c.output_dir = dir;
    c.frames = 5;
    c.r_points = 21;
    return experiments::cmd_fig1(c);
  };
  const auto fa = scratch("fig_a"), fb = scratch("fig_b");
  const auto sa = run_fig(fa);
  run_fig(fb);
  REQUIRE(sa.size() == 3);
  for (const auto& e : fs::directory_iterator(fa)) {
    if (e.path().extension() != ".csv") continue;
    CAPTURE(e.path().filename().string());
    CHECK(slurp(e.path()) == slurp(fb / e.path().filename()));
  }
  CHECK(fs::exists(fa / "manifest.json"));
}
