// Command-line front end for the detuning-sign-jump sweeps.
//
//   signjump single  --omega0 5 --delta0 5
//   signjump fig1    [--delta0 5]
//   signjump grid    --workers 4 --out results/
//   signjump table3  --omega0 8 --delta0 2
//
// Exit codes: 0 success, 1 config error, 2 some nodes failed (NaN), 3 I/O error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "signjump/errors.hpp"
#include "signjump/sweep.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kPartialFailure = 2, kIoError = 3 };

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  unsigned workers = 1;
  std::optional<std::string> shape;
  std::optional<double> tau_jump;
  std::optional<double> tolerance;
  std::optional<std::string> omega0;
  std::optional<std::string> delta0;
};

signjump::RunConfig load_config(const Options& opt, signjump::RunConfig base) {
  using namespace signjump;
  RunConfig config = opt.config_path.empty() ? base : parse_config_file(opt.config_path, base);
  // Command-line flags override the file.
  std::string overrides;
  if (opt.shape) overrides += "shape: " + *opt.shape + "\n";
  if (opt.tau_jump) overrides += "tau_jump: " + format_number(*opt.tau_jump) + "\n";
  if (opt.tolerance) overrides += "tolerance: " + format_number(*opt.tolerance) + "\n";
  if (opt.omega0) overrides += "omega0: " + *opt.omega0 + "\n";
  if (opt.delta0) overrides += "delta0: " + *opt.delta0 + "\n";
  return parse_config_text(overrides, config);
}

int finish(const signjump::SweepResult& result, const Options& opt, const std::string& stem,
           const std::set<signjump::OutputKind>& kinds) {
  using namespace signjump;
  std::set<Format> formats = {Format::Csv, Format::JsonLines};
  if (stem == "grid") formats.insert({Format::Matrix, Format::GnuplotScript});
  for (const auto& path : emit_outputs(result, formats, opt.out_dir, stem, kinds)) std::cout << path.string() << '\n';
  if (const auto failed = result.failures()) {
    std::cerr << failed << " node(s) failed; marked NaN\n";
    return kPartialFailure;
  }
  return kOk;
}

void print_rows(const signjump::SweepResult& result) {
  for (const auto& r : result.rows) {
    std::cout << "Omega0T=" << signjump::format_number(r.omega0T) << " Delta0T=" << signjump::format_number(r.delta0T)
              << " initial=" << r.initial_state << " numeric=";
    for (double p : r.p_numeric) std::cout << ' ' << signjump::format_number(p);
    std::cout << " analytic=";
    for (double p : r.p_analytic) std::cout << ' ' << signjump::format_number(p);
    if (!r.ok) std::cout << " error=" << r.error;
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace signjump;
  CLI::App app{"Population transfer by a detuning sign jump: numeric vs adiabatic-sudden model"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Run configuration file (key: value lines)");
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--workers", opt.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--shape", opt.shape, "gaussian | sech | lorentzian");
    sub->add_option("--tau-jump", opt.tau_jump, "Jump smoothing time in units of T (0 = ideal step)");
    sub->add_option("--tolerance", opt.tolerance, "Integrator tolerance");
    sub->add_option("--omega0", opt.omega0, "Omega0 T grid: value, list, or start:stop:step");
    sub->add_option("--delta0", opt.delta0, "Delta0 T grid: value, list, or start:stop:step");
  };
  auto* single = app.add_subcommand("single", "One drive: final populations (and trajectory if configured)");
  auto* fig1 = app.add_subcommand("fig1", "Omega0 sweep at fixed Delta0 (default Delta0 T = 5)");
  auto* grid = app.add_subcommand("grid", "Omega0 x Delta0 grid with residual map");
  auto* table3 = app.add_subcommand("table3", "Three-level transition tables and Majorana residual");
  for (auto* sub : {single, fig1, grid, table3}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (fig1->parsed()) {
      RunConfig base;
      base.delta0_grid = {5.0};
      const RunConfig config = load_config(opt, base);
      return finish(run_fig1_cut(config, opt.workers), opt, "fig1", config.outputs);
    }
    if (grid->parsed()) {
      const RunConfig config = load_config(opt, RunConfig{});
      return finish(run_grid(config, opt.workers), opt, "grid", config.outputs);
    }
    if (table3->parsed()) {
      RunConfig base;
      base.system = SystemKind::ThreeLevel;
      base.omega0_grid = {8.0};
      base.delta0_grid = {2.0};
      const RunConfig config = load_config(opt, base);
      const SweepResult result = run_three_level_table(config, opt.workers);
      print_rows(result);
      return finish(result, opt, "table3", config.outputs);
    }
    RunConfig base;
    base.omega0_grid = {5.0};
    base.delta0_grid = {5.0};
    const RunConfig config = load_config(opt, base);
    if (config.omega0_grid.size() != 1 || config.delta0_grid.size() != 1)
      throw ConfigError("single: omega0 and delta0 must each be one value");
    const double omega0T = config.omega0_grid.front();
    const double delta0T = config.delta0_grid.front();
    SweepResult result;
    result.system = config.system;
    result.omega0_grid = config.omega0_grid;
    result.delta0_grid = config.delta0_grid;
    if (config.system == SystemKind::TwoLevel)
      result.rows = {run_two_level_node(config, omega0T, delta0T)};
    else
      result.rows = run_three_level_node(config, omega0T, delta0T);
    print_rows(result);
    if (config.outputs.contains(OutputKind::Trajectory)) {
      const auto path = std::filesystem::path(opt.out_dir) / "trajectory.csv";
      std::filesystem::create_directories(opt.out_dir);
      write_text_file(path, trajectory_csv(run_trajectory(config, omega0T, delta0T)));
      std::cout << path.string() << '\n';
    }
    return finish(result, opt, "single", config.outputs);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}
