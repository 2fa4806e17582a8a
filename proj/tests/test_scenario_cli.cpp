#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lde/cli.hpp"
#include "lde/scenario.hpp"
#include "test_support.hpp"

using namespace lde;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("lde_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }

  fs::path write(const std::string& file, const json& doc) const {
    const fs::path p = dir / file;
    std::ofstream(p) << doc.dump(2);
    return p;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json fibonacci() {
  return json::parse(R"({
    "name": "fib", "order": 2, "horizon": 20,
    "coefficients": [-1, -1], "initial": [0, 1],
    "methods": ["direct", "companion"]
  })");
}

json cubic_sweep() {
  return json::parse(R"({
    "name": "cubic", "order": 3, "horizon": 200, "epsilon": 0.01,
    "coefficients": [-6, {"type": "sinusoidal", "offset": 11, "amplitude": -0.1, "frequency": 1, "phase": 0}, -6],
    "initial": [1, 0.5, 0.25],
    "methods": ["wkb-general"],
    "epsilon_sweep": [0.02, 0.01, 0.005]
  })");
}

std::vector<Diagnostic> diagnose(const json& doc) {
  Scenario s;
  auto d = parse_scenario(doc, s);
  if (d.empty()) d = check_scenario(s);
  return d;
}

bool mentions(const std::vector<Diagnostic>& d, const std::string& text) {
  for (const auto& x : d) {
    if (to_string(x).find(text) != std::string::npos) return true;
  }
  return false;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("parse_complex") {
  CHECK(parse_complex("3") == Complex(3.0, 0.0));
  CHECK(parse_complex("-2.5e-1") == Complex(-0.25, 0.0));
  CHECK(parse_complex("1-2i") == Complex(1.0, -2.0));
  CHECK(parse_complex("1.5 + 0.5i") == Complex(1.5, 0.5));
  CHECK(parse_complex("i") == Complex(0.0, 1.0));
  CHECK(parse_complex("-j") == Complex(0.0, -1.0));
  CHECK(parse_complex("2e-3i") == Complex(0.0, 2e-3));
  CHECK(parse_complex("1e+2-1e-2i") == Complex(100.0, -0.01));
  CHECK_FALSE(parse_complex("").has_value());
  CHECK_FALSE(parse_complex("abc").has_value());
  CHECK_FALSE(parse_complex("1+2").has_value());
  CHECK_FALSE(parse_complex("1++2i").has_value());
}

TEST_CASE("parse_scenario builds the spec") {
  Scenario s;
  const json doc = json::parse(R"({
    "order": 3, "k_start": 2, "horizon": 10, "epsilon": 0.5,
    "coefficients": [
      {"type": "polynomial", "coefficients": [1, "2i"]},
      [0.5, -0.5],
      {"type": "tabulated", "k_start": 2, "values": [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15]}
    ],
    "forcing": "1+i",
    "initial": [1, 2, 3],
    "methods": ["direct", "gauge-exact"],
    "tolerance": 1e-9,
    "output": {"path": "x", "format": "json"}
  })");
  REQUIRE(parse_scenario(doc, s, {"scenario_file", std::nullopt}).empty());
  CHECK(s.name == "scenario_file");
  CHECK(s.spec.order == 3);
  CHECK(s.spec.k_start == 2);
  CHECK(s.spec.coeffs[0].at(4) == Complex(1.0, 4.0));
  CHECK(s.spec.coeffs[1].at(100) == Complex(0.5, -0.5));
  CHECK(s.spec.coeffs[2].at(3) == Complex(2.0, 0.0));
  CHECK(s.spec.forcing.at(0) == Complex(1.0, 1.0));
  CHECK(s.methods == std::vector<Method>{Method::Direct, Method::GaugeExact});
  CHECK(s.tolerance == 1e-9);
  CHECK(s.output.format == "json");
  CHECK(check_scenario(s).empty());
}

TEST_CASE("diagnostics") {
  CHECK(diagnose(fibonacci()).empty());

  json zero_f0 = fibonacci();
  zero_f0["coefficients"] = {0, -1};
  CHECK(mentions(diagnose(zero_f0), "zero characteristic root"));

  json wkb3 = json::parse(R"({"order": 4, "horizon": 5, "coefficients": [1, 0, 0, 0],
                              "initial": [1, 0, 0, 0], "methods": ["wkb3"]})");
  CHECK(mentions(diagnose(wkb3), "method/order mismatch"));

  json big = fibonacci();
  big["order"] = 9;
  CHECK_FALSE(diagnose(big).empty());

  json counts = fibonacci();
  counts["initial"] = {1};
  CHECK(mentions(diagnose(counts), "initial"));

  json unknown = fibonacci();
  unknown["methods"] = {"wkb"};
  CHECK(mentions(diagnose(unknown), "unknown method 'wkb'"));

  json forced = fibonacci();
  forced["forcing"] = 1;
  forced["methods"] = {"wkb-general"};
  CHECK(mentions(diagnose(forced), "homogeneous"));

  json short_table = fibonacci();
  short_table["coefficients"][0] = json::parse(R"({"type": "tabulated", "values": [1, 2]})");
  CHECK_FALSE(diagnose(short_table).empty());

  json bad_complex = fibonacci();
  bad_complex["initial"] = {"1+", 0};
  CHECK(mentions(diagnose(bad_complex), "initial"));

  json bad_type = fibonacci();
  bad_type["coefficients"][1] = json::parse(R"({"type": "spline"})");
  CHECK(mentions(diagnose(bad_type), "unknown model type"));

  json bad_format = fibonacci();
  bad_format["output"] = {{"format", "xml"}};
  CHECK(mentions(diagnose(bad_format), "output.format"));

  CHECK_FALSE(diagnose(json::array()).empty());
}

TEST_CASE("random models follow the seed") {
  const json doc = json::parse(R"({"order": 2, "horizon": 10, "initial": [1, 0], "methods": ["direct"],
                                   "coefficients": [{"type": "random", "magnitude": 2}, {"type": "random"}]})");
  Scenario a, b, c;
  REQUIRE(parse_scenario(doc, a, {"a", 3}).empty());
  REQUIRE(parse_scenario(doc, b, {"b", 3}).empty());
  REQUIRE(parse_scenario(doc, c, {"c", 4}).empty());
  for (long k = 0; k <= a.spec.window_end(); ++k) {
    CHECK(a.spec.coeffs[0].at(k) == b.spec.coeffs[0].at(k));
    CHECK(std::abs(a.spec.coeffs[0].at(k)) <= 2.0);
    CHECK(std::abs(a.spec.coeffs[1].at(k)) <= 1.0);
  }
  CHECK(a.spec.coeffs[0].at(0) != c.spec.coeffs[0].at(0));
  CHECK(a.spec.coeffs[0].at(0) != a.spec.coeffs[1].at(0));
}

TEST_CASE("format_real round-trips") {
  CHECK(cli::format_real(0.1) == "0.10000000000000001");
  CHECK(cli::format_real(-0.0) == "0");
  CHECK(cli::format_real(2.0) == "2");
  lde::testing::Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.integer(-20, 20));
    CHECK(std::stod(cli::format_real(x)) == x);
  }
}

TEST_CASE("run writes trajectory and error tables") {
  Scratch scratch("run");
  const fs::path file = scratch.write("fib.json", fibonacci());
  cli::Options options;
  options.output_dir = (scratch.dir / "out").string();
  std::ostringstream out, err;
  REQUIRE(cli::run(file, options, out, err) == cli::ExitCode::Ok);
  CHECK(err.str().empty());

  const auto traj = read_csv(scratch.dir / "out" / "fib.trajectory.csv");
  REQUIRE(traj.size() == 23);
  CHECK(traj[0] == std::vector<std::string>{"k", "direct_re", "direct_im", "companion_re", "companion_im"});
  CHECK(traj[11][0] == "10");
  CHECK(traj[11][1] == "55");
  for (std::size_t r = 1; r < traj.size(); ++r) {
    CHECK(traj[r][1] == traj[r][3]);
    CHECK(traj[r][2] == traj[r][4]);
  }
  const auto errors = read_csv(scratch.dir / "out" / "fib.errors.csv");
  REQUIRE(errors.size() == 23);
  for (std::size_t r = 1; r < errors.size(); ++r) {
    CHECK(errors[r][1] == "0");
    CHECK(errors[r][2] == "0");
  }
  CHECK(fs::exists(scratch.dir / "out" / "fib.tabulated.json"));
  CHECK_FALSE(fs::exists(scratch.dir / "out" / "fib.trajectory.csv.tmp"));
}

TEST_CASE("constant roots 1, 2, 3 with exact and WKB methods") {
  Scratch scratch("roots");
  const fs::path file = scratch.write("r.json", json::parse(R"({
    "name": "r", "order": 3, "horizon": 40, "coefficients": [-6, 11, -6],
    "initial": [1, 0.5, 0.25], "methods": ["gauge-exact", "wkb3"]})"));
  cli::Options options;
  options.output_dir = scratch.dir.string();
  std::ostringstream out, err;
  REQUIRE(cli::run(file, options, out, err) == cli::ExitCode::Ok);
  const auto errors = read_csv(scratch.dir / "r.errors.csv");
  for (std::size_t r = 1; r < errors.size(); ++r) {
    CHECK(std::stod(errors[r][1]) <= 1e-10);
    CHECK(std::stod(errors[r][2]) <= 1e-10);
  }
}

TEST_CASE("sweep summary decreases with epsilon") {
  Scratch scratch("sweep");
  const fs::path file = scratch.write("cubic.json", cubic_sweep());
  cli::Options options;
  options.output_dir = scratch.dir.string();
  std::ostringstream out, err;
  REQUIRE(cli::run(file, options, out, err) == cli::ExitCode::Ok);
  const auto rows = read_csv(scratch.dir / "cubic.sweep.csv");
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"epsilon", "wkb-general_terminal", "wkb-general_max"});
  CHECK(std::stod(rows[2][1]) < std::stod(rows[1][1]));
  CHECK(std::stod(rows[3][1]) < std::stod(rows[2][1]));

  options.epsilons = {0.04, 0.0};
  options.format = "json";
  REQUIRE(cli::sweep(file, options, out, err) == cli::ExitCode::Ok);
  const json doc = json::parse(slurp(scratch.dir / "cubic.sweep.json"));
  REQUIRE(doc["points"].size() == 2);
  CHECK(doc["points"][0]["epsilon"] == 0.04);
  CHECK(doc["points"][1]["wkb-general"]["terminal"].get<double>() <= 1e-10);
}

TEST_CASE("output is byte-identical across runs") {
  Scratch scratch("determinism");
  json doc = cubic_sweep();
  doc["methods"] = {"gauge-exact", "wkb3", "wkb-general", "companion"};
  const fs::path file = scratch.write("cubic.json", doc);
  for (const std::string format : {"csv", "json"}) {
    cli::Options a, b;
    a.output_dir = (scratch.dir / "a").string();
    b.output_dir = (scratch.dir / "b").string();
    a.format = b.format = format;
    std::ostringstream out, err;
    REQUIRE(cli::run(file, a, out, err) == cli::ExitCode::Ok);
    REQUIRE(cli::run(file, b, out, err) == cli::ExitCode::Ok);
    for (const std::string table : {"trajectory", "errors", "sweep"}) {
      const std::string name = "cubic." + table + "." + format;
      CHECK(slurp(scratch.dir / "a" / name) == slurp(scratch.dir / "b" / name));
    }
  }
}

TEST_CASE("tabulated export reproduces the run") {
  Scratch scratch("tabulated");
  json doc = json::parse(R"({
    "name": "mix", "order": 3, "horizon": 50, "epsilon": 0.02,
    "coefficients": [{"type": "sinusoidal", "offset": -6, "amplitude": 0.3, "frequency": 1, "phase": 0.2},
                     {"type": "polynomial", "coefficients": [11, "0.1-0.2i"]},
                     {"type": "random", "magnitude": 0.5}],
    "forcing": {"type": "sinusoidal", "offset": 0, "amplitude": 1, "frequency": 2, "phase": 0},
    "initial": [1, "i", -1], "methods": ["direct", "gauge-exact"], "seed": 11})");
  const fs::path file = scratch.write("mix.json", doc);
  cli::Options first;
  first.output_dir = (scratch.dir / "first").string();
  std::ostringstream out, err;
  REQUIRE(cli::run(file, first, out, err) == cli::ExitCode::Ok);

  json exported = json::parse(slurp(scratch.dir / "first" / "mix.tabulated.json"));
  for (const auto& c : exported["coefficients"]) CHECK(c["type"] == "tabulated");
  exported["name"] = "mix";
  const fs::path again = scratch.write("again.json", exported);
  cli::Options second;
  second.output_dir = (scratch.dir / "second").string();
  REQUIRE(cli::run(again, second, out, err) == cli::ExitCode::Ok);
  CHECK(slurp(scratch.dir / "first" / "mix.trajectory.csv") == slurp(scratch.dir / "second" / "mix.trajectory.csv"));
}

TEST_CASE("exit codes") {
  Scratch scratch("exit");
  std::ostringstream out, err;
  cli::Options options;
  options.output_dir = scratch.dir.string();

  json zero_f0 = fibonacci();
  zero_f0["coefficients"] = {0, -1};
  const fs::path invalid = scratch.write("bad.json", zero_f0);
  CHECK(cli::run(invalid, options, out, err) == cli::ExitCode::Schema);
  CHECK(cli::validate(invalid, options, out, err) == cli::ExitCode::Schema);
  CHECK(out.str().find("zero characteristic root") != std::string::npos);

  std::ofstream(scratch.dir / "broken.json") << "{ \"order\": ";
  CHECK(cli::run(scratch.dir / "broken.json", options, out, err) == cli::ExitCode::Schema);

  const fs::path good = scratch.write("good.json", fibonacci());
  out.str("");
  CHECK(cli::validate(good, options, out, err) == cli::ExitCode::Ok);
  CHECK(out.str().find(": ok") != std::string::npos);

  const fs::path collision = scratch.write("collide.json", json::parse(R"({
    "order": 2, "horizon": 200, "epsilon": 0.01,
    "coefficients": [{"type": "polynomial", "coefficients": [0.75, 0.25]}, -2],
    "initial": [1, 1], "methods": ["gauge-exact"]})"));
  err.str("");
  CHECK(cli::run(collision, options, out, err) == cli::ExitCode::Numerical);
  CHECK(err.str().find("step k=") != std::string::npos);

  CHECK(cli::run(scratch.dir / "missing.json", options, out, err) == cli::ExitCode::Io);
  std::ofstream(scratch.dir / "blocker") << "x";
  cli::Options blocked;
  blocked.output_dir = (scratch.dir / "blocker" / "sub").string();
  CHECK(cli::run(good, blocked, out, err) == cli::ExitCode::Io);

  cli::Options no_eps;
  no_eps.output_dir = scratch.dir.string();
  CHECK(cli::sweep(good, no_eps, out, err) == cli::ExitCode::Schema);
}

TEST_CASE("tolerance override reaches the root finder") {
  Scratch scratch("tolerance");
  json doc = fibonacci();
  doc["methods"] = {"gauge-exact"};
  const fs::path file = scratch.write("fib.json", doc);
  cli::Options options;
  options.output_dir = scratch.dir.string();
  options.tolerance = 1e-30;
  std::ostringstream out, err;
  CHECK(cli::run(file, options, out, err) == cli::ExitCode::Numerical);
  CHECK(err.str().find("NoConvergence") != std::string::npos);
}
