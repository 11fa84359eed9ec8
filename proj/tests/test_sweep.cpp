#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "signjump/errors.hpp"
#include "signjump/sweep.hpp"

using namespace signjump;

namespace {

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig small_grid() {
  return parse_config_text("omega0: 1, 5\ndelta0: 2:6:2\n");
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = parse_config_text("");
  CHECK(c.system == SystemKind::TwoLevel);
  CHECK(c.shape == ShapeKind::Gaussian);
  CHECK(c.window_start == -20.0);
  CHECK(c.window_end == 20.0);
  CHECK(c.tolerance == 1e-10);
  CHECK(c.tau_jump == 0.0);
  CHECK(c.omega0_grid.size() == 100);
  CHECK(c.delta0_grid.back() == doctest::Approx(10.0));
}

TEST_CASE("grid parsing") {
  const auto grid = parse_grid("0.1:10:0.1");
  CHECK(grid.size() == 100);
  CHECK(grid.front() == 0.1);
  CHECK(grid.back() == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(parse_grid("5") == std::vector<double>{5.0});
  CHECK(parse_grid(" 1, 2.5 ,4") == std::vector<double>{1.0, 2.5, 4.0});
  CHECK_THROWS_AS(parse_grid("1:2"), ConfigError);
  CHECK_THROWS_AS(parse_grid("1:2:0"), ConfigError);
  CHECK_THROWS_AS(parse_grid("one"), ConfigError);
}

TEST_CASE("config validation errors") {
  CHECK_THROWS_WITH_AS(parse_config_text("delta0: -3"), doctest::Contains("delta0"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("speed: 3"), doctest::Contains("valid keys"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("window: 1, 20"), doctest::Contains("window"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("initial_state: 3"), doctest::Contains("initial_state"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("tolerance: 0"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("shape: square"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("outputs: movie"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("system two_level"), ConfigError);
  CHECK_NOTHROW(parse_config_text("system: three_level\ninitial_state: 3  # comment\n"));
}

TEST_CASE("config text round trip") {
  RunConfig c;
  c.system = SystemKind::ThreeLevel;
  c.shape = ShapeKind::Lorentzian;
  c.width = 0.3;
  c.omega0_grid = parse_grid("0.1:3:0.7");
  c.delta0_grid = {1.0 / 3.0};
  c.window_start = -15.5;
  c.tolerance = 3e-11;
  c.tau_jump = 0.01;
  c.initial_state = 2;
  c.outputs = {OutputKind::Trajectory};
  CHECK(parse_config_text(to_config_text(c)) == c);
  CHECK(parse_config_text(to_config_text(RunConfig{})) == RunConfig{});
}

TEST_CASE("node results") {
  RunConfig c = parse_config_text("omega0: 10\ndelta0: 5\n");
  const SweepRow row = run_two_level_node(c, 10.0, 5.0);
  REQUIRE(row.ok);
  CHECK(row.p_analytic[1] == doctest::Approx(0.8));
  CHECK(std::abs(row.p_numeric[1] - 0.8) <= 0.01);
  CHECK(row.residual == doctest::Approx(row.p_numeric[1] - row.p_analytic[1]));
  CHECK(row.p_numeric[0] + row.p_numeric[1] == doctest::Approx(1.0).epsilon(1e-9));

  // A hopeless tolerance fails the node instead of the sweep.
  c.tolerance = 1e-300;
  const SweepRow failed = run_two_level_node(c, 10.0, 5.0);
  CHECK_FALSE(failed.ok);
  CHECK(std::isnan(failed.residual));
  CHECK_FALSE(failed.error.empty());
}

TEST_CASE("Omega0 cut") {
  RunConfig c = parse_config_text("omega0: 0.001, 10\ndelta0: 5\n");
  const SweepResult r = run_fig1_cut(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].p_numeric[1] < 1e-6);
  CHECK(std::abs(r.rows[1].p_numeric[1] - 0.8) <= 0.01);
  CHECK_THROWS_AS(run_fig1_cut(small_grid()), ConfigError);
}

TEST_CASE("grid ordering, formats and determinism") {
  const RunConfig c = small_grid();
  const SweepResult serial = run_grid(c, 1);
  const SweepResult parallel = run_grid(c, 3);
  REQUIRE(serial.rows.size() == 6);
  CHECK(serial.rows[0].omega0T == 1.0);
  CHECK(serial.rows[1].delta0T == 4.0);
  CHECK(serial.rows[3].omega0T == 5.0);
  CHECK(to_csv(serial) == to_csv(parallel));
  CHECK(serial.failures() == 0);

  const std::string csv = to_csv(serial);
  CHECK(csv.rfind("omega0T,delta0T,p2_num,p2_ana,residual\n", 0) == 0);
  CHECK(count_lines(csv) == 7);
  CHECK(csv.find('\r') == std::string::npos);

  const std::string block = to_matrix_block(serial, false);
  CHECK(count_lines(block) == 6 + 1);
  CHECK(block.find("\n\n") != std::string::npos);
  CHECK(count_lines(residual_matrix_block(serial)) == 7);
  CHECK(count_lines(to_json_lines(serial)) == 6);
  CHECK(to_json_lines(serial).find("\"wall_time\"") != std::string::npos);

  SweepResult empty;
  CHECK(to_csv(empty) == "omega0T,delta0T,p2_num,p2_ana,residual\n");

  SweepResult three;
  three.system = SystemKind::TwoLevel;
  three.rows = {serial.rows[0], serial.rows[1], serial.rows[2]};
  CHECK(count_lines(to_csv(three)) == 4);
}

TEST_CASE("numbers carry at least 12 significant digits") {
  CHECK(format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("three-level table") {
  RunConfig c = parse_config_text("system: three_level\nomega0: 2\ndelta0: 2\n");
  const SweepResult r = run_three_level_table(c);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[1].p_analytic[0] == doctest::Approx(0.5));
  CHECK(r.rows[1].p_analytic[1] == doctest::Approx(0.0));
  CHECK(r.rows[1].p_analytic[2] == doctest::Approx(0.5));
  for (const auto& row : r.rows) CHECK(row.majorana_residual <= 1e-6);
  CHECK(count_lines(to_csv(r)) == 4);

  const SweepResult strong = run_three_level_table(parse_config_text("system: three_level\nomega0: 10\ndelta0: 1\n"));
  CHECK(strong.rows[0].p_analytic[2] == doctest::Approx(0.9803).epsilon(1e-4));
  CHECK_THROWS_AS(run_three_level_table(small_grid()), ConfigError);
}

TEST_CASE("trajectory") {
  const RunConfig c = parse_config_text("omega0: 3\ndelta0: 2\noutputs: trajectory\n");
  const Trajectory tr = run_trajectory(c, 3.0, 2.0);
  REQUIRE(tr.t.size() > 10);
  CHECK(tr.t.front() == -20.0);
  CHECK(tr.t.back() == 20.0);
  const std::string csv = trajectory_csv(tr);
  CHECK(csv.rfind("t,p1,p2\n", 0) == 0);
  CHECK(count_lines(csv) == tr.t.size() + 1);
}

TEST_CASE("emit outputs to disk") {
  const auto dir = std::filesystem::temp_directory_path() / "signjump_emit_test";
  std::filesystem::remove_all(dir);
  const SweepResult r = run_grid(small_grid());
  const auto files = emit_outputs(r, {Format::Csv, Format::JsonLines, Format::Matrix, Format::GnuplotScript}, dir, "grid");
  CHECK(files.size() == 6);
  CHECK(slurp(dir / "grid.csv") == to_csv(r));
  const std::string gp = slurp(dir / "grid.gp");
  CHECK(gp.find("grid_numeric.dat") != std::string::npos);
  CHECK(gp.find("0.1, 0.3, 0.5, 0.7, 0.9") != std::string::npos);

  const auto blocked = dir / "grid.csv" / "nested";
  CHECK_THROWS_AS(emit_outputs(r, {Format::Csv}, blocked, "x"), IoError);
  std::filesystem::remove_all(dir);
}
