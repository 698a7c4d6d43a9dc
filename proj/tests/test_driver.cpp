#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nhslice/io.hpp"
#include "support.hpp"

using namespace nhs;
using namespace nhs::test;
using doctest::Approx;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("nhslice_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config text round trip") {
  RunConfig c;
  c.ne = 7;
  c.mode = VerticalMode::lagrangian;
  c.tableau = "ars222";
  c.nu = 1.5e9;
  std::stringstream ss;
  print_config(ss, c);
  const RunConfig back = parse_config(ss);
  for (const auto& k : config_keys()) CHECK(get_config_value(back, k.key) == get_config_value(c, k.key));
}

TEST_CASE("config parsing") {
  std::istringstream in("# comment\n ne = 8 \n\nmode = lagrangian  # trailing\ndt=2.5\n");
  const RunConfig c = parse_config(in);
  CHECK(c.ne == 8);
  CHECK(c.mode == VerticalMode::lagrangian);
  CHECK(c.dt == 2.5);

  std::istringstream unknown("nee = 3\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream bad_number("dt = fast\n");
  CHECK_THROWS_AS(parse_config(bad_number), ConfigError);
  std::istringstream no_equals("dt 3\n");
  CHECK_THROWS_AS(parse_config(no_equals), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("config validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig{};
  c.test_case = "baroclinic";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig{};
  c.length = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig{};
  c.p_top = 2e5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("output directory from the environment") {
  RunConfig c;
  ::setenv("NHSLICE_OUTPUT_DIR", "/tmp/somewhere", 1);
  apply_environment(c);
  ::unsetenv("NHSLICE_OUTPUT_DIR");
  CHECK(c.output_dir == "/tmp/somewhere");
}

TEST_CASE("snapshot round trip is exact") {
  const Model m = small_model();
  std::mt19937_64 rng(6);
  const auto s = random_state(m, rng);
  std::stringstream ss;
  write_snapshot(ss, m, s, 1234.5);
  double t = 0.0;
  const auto back = read_snapshot(ss, m, &t);
  CHECK(t == 1234.5);
  CHECK(back == s);

  const Model other = small_model(VerticalMode::eulerian, 5, 10);
  std::stringstream s2;
  write_snapshot(s2, m, s, 0.0);
  CHECK_THROWS_AS(read_snapshot(s2, other), ConfigError);
  CHECK(grid_hash(m) != grid_hash(other));
  CHECK(grid_hash(m) == grid_hash(small_model()));
}

TEST_CASE("budget file schema") {
  std::stringstream ss;
  write_budget_header(ss);
  CHECK(ss.str() == "time,K,I,P,E,T1,T2,T3,S1,S2,S3,R_P,R_I,R_K,dE_remap\n");
}

TEST_CASE("fit_order recovers a power law and skips zeros") {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 12, 48, 192};
  CHECK(fit_order(x, y) == Approx(2.0));
  const std::vector<double> y0{0.0, 12, 48, 192};
  CHECK(fit_order(x, y0) == Approx(2.0));
}

TEST_CASE("rest-state run keeps energy and transfers at roundoff") {
  RunConfig c = small_config(4, 10);
  c.test_case = "rest";
  c.dt = 20.0;
  c.run_length = 2000.0;
  c.diag_interval = 10;
  const auto r = run(c);
  CHECK_FALSE(r.audit.failed);
  CHECK(std::abs(r.audit.last.E() - r.audit.first.E()) <= 1e-14 * r.audit.first.E());
  // roundoff scale of an energy rate
  const double floor = 1e-13 * r.audit.first.E() / c.dt;
  for (const auto& row : r.audit.budget) {
    CHECK(std::abs(row.transfers.T1) < floor);
    CHECK(std::abs(row.transfers.T2) < floor);
    CHECK(std::abs(row.transfers.T3) < floor);
  }
}

TEST_CASE("runs write their files and are bit-reproducible") {
  const auto dir = scratch_dir("determinism");
  RunConfig c = small_config(4, 10);
  c.dt = 10.0;
  c.spinup = 200.0;
  c.nu = 1e8;
  c.run_length = 300.0;
  c.mean_wind = 10.0;
  c.half_width = 3e4;
  c.output_dir = (dir / "a").string();
  run(c);
  c.output_dir = (dir / "b").string();
  run(c);
  for (const char* f : {"budget.csv", "final.snapshot"}) {
    INFO(f);
    CHECK(std::filesystem::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
  }
  const auto man = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  CHECK(man["config"]["ne"] == "4");
  CHECK(man["grid_hash"].get<std::string>().size() == 16);
  CHECK(man["tableau"]["name"] == "ars232");
  CHECK(man["audit"]["failed"] == false);
  // the manifest fully determines the run
  RunConfig again;
  for (const auto& k : config_keys()) set_config_value(again, k.key, man["config"][k.key]);
  c.output_dir = (dir / "a").string();
  for (const auto& k : config_keys()) CHECK(get_config_value(again, k.key) == get_config_value(c, k.key));
  std::filesystem::remove_all(dir);
}

TEST_CASE("Lagrangian run: remap energy error shrinks with vertical resolution") {
  double prev = 0.0;
  for (int n : {12, 24}) {
    const Model m = small_model(VerticalMode::lagrangian, 6, n);
    const auto s = init_gravity_wave(m, 250.0, 1e5, 3.0, 3e4, 10.0);
    IntegrationOptions opt;
    opt.dt = 5.0;
    opt.steps = 60;
    opt.remap_interval = 3;
    const auto r = integrate(m, s, ars232_tableau(), opt);
    REQUIRE_FALSE(r.failed);
    int remap_rows = 0;
    for (const auto& row : r.budget)
      if (row.dE_remap != 0.0) ++remap_rows;
    CHECK(remap_rows > 0);
    CHECK(remap_rows <= opt.steps / opt.remap_interval);
    CHECK(r.max_mass_change <= 1e-13);
    CHECK(r.max_theta_change <= 1e-13);
    // truncation error of the reconstruction: about 2.5 orders in n
    if (prev > 0.0) CHECK(std::abs(r.total_dE_remap) < prev / 3.0);
    prev = std::abs(r.total_dE_remap);
  }
}

TEST_CASE("convergence sweep flags unstable members") {
  RunConfig c = small_config(4, 10);
  c.dt = 10.0;
  c.spinup = 1000.0;
  c.nu = 1e8;
  c.run_length = 1000.0;
  c.half_width = 3e4;
  const auto r = convergence_sweep(c, {500.0, 20.0, 10.0});
  REQUIRE(r.rows.size() == 3);
  CHECK_FALSE(r.rows[0].stable);
  CHECK(r.rows[1].stable);
  CHECK(r.rows[2].stable);
  std::stringstream ss;
  write_sweep(ss, r);
  CHECK(ss.str().find("order R_K") != std::string::npos);
}
