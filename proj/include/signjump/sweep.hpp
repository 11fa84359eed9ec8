#pragma once

// Parameter sweeps over (Omega0 T, Delta0 T): configuration parsing, parallel
// execution with ordered collection, and CSV / JSON-lines / gnuplot output.
//
// Config grammar (one entry per line, '#' starts a comment):
//
//   system:        two_level | three_level
//   shape:         gaussian | sech | lorentzian
//   width:         <T>                      pulse width, default 1
//   omega0:        <grid>                   Omega0 T values
//   delta0:        <grid>                   Delta0 T values
//   window:        <start>, <end>           in units of T, default -20, 20
//   tolerance:     <x>                      integrator tolerance, default 1e-10
//   tau_jump:      <x>                      jump smoothing time in units of T, default 0
//   initial_state: 1 | 2 | 3
//   outputs:       comma list of final_populations, trajectory, residual_map, analytic_overlay
//
// A <grid> is a single value, a comma list, or an inclusive range
// "start:stop:step" (e.g. 0.1:10:0.1 gives 100 values).

#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "signjump/pulse.hpp"
#include "signjump/su2_chain.hpp"

namespace signjump {

enum class SystemKind { TwoLevel, ThreeLevel };
enum class OutputKind { FinalPopulations, Trajectory, ResidualMap, AnalyticOverlay };

struct RunConfig {
  SystemKind system = SystemKind::TwoLevel;
  ShapeKind shape = ShapeKind::Gaussian;
  double width = 1.0;
  std::vector<double> omega0_grid = default_grid();
  std::vector<double> delta0_grid = default_grid();
  double window_start = -20.0;
  double window_end = 20.0;
  double tolerance = 1e-10;
  double tau_jump = 0.0;
  int initial_state = 1;
  std::set<OutputKind> outputs = {OutputKind::FinalPopulations, OutputKind::ResidualMap,
                                  OutputKind::AnalyticOverlay};

  /// 0.1, 0.2, ..., 10.
  static std::vector<double> default_grid();

  int dimension() const { return system == SystemKind::TwoLevel ? 2 : 3; }
  /// Throws ConfigError naming the offending field.
  void validate() const;
  DriveProfile drive(double omega0T, double delta0T) const;
  IntegrationSpec<double> integration_spec() const;

  bool operator==(const RunConfig&) const = default;
};

std::vector<std::string_view> valid_config_keys();

/// Expands "a", "a, b, c" or "start:stop:step".
std::vector<double> parse_grid(std::string_view text);

/// Parses config text on top of `base` (keys absent from the text keep the
/// base value) and validates the result.
RunConfig parse_config_text(std::string_view text, RunConfig base = {});
RunConfig parse_config_file(const std::filesystem::path& path, RunConfig base = {});
/// Inverse of parse_config_text; emits every key with round-trip precision.
std::string to_config_text(const RunConfig& config);

struct SweepRow {
  double omega0T = 0.0;
  double delta0T = 0.0;
  int initial_state = 1;
  std::vector<double> p_numeric;
  std::vector<double> p_analytic;
  /// Two-level: numeric minus analytic transfer probability. Three-level:
  /// largest absolute population difference.
  double residual = 0.0;
  /// Three-level only: max |U3 - majorana_u3(a, b)|.
  double majorana_residual = 0.0;
  double wall_time = 0.0;
  bool ok = true;
  std::string error;
};

struct SweepResult {
  SystemKind system = SystemKind::TwoLevel;
  std::vector<double> omega0_grid;
  std::vector<double> delta0_grid;
  /// Omega0-major order (Delta0 varies fastest).
  std::vector<SweepRow> rows;

  std::size_t failures() const;
};

SweepRow run_two_level_node(const RunConfig& config, double omega0T, double delta0T);
std::vector<SweepRow> run_three_level_node(const RunConfig& config, double omega0T, double delta0T);

/// Omega0 sweep at a single Delta0 value.
SweepResult run_fig1_cut(const RunConfig& config, unsigned workers = 1);
/// Full Omega0 x Delta0 grid.
SweepResult run_grid(const RunConfig& config, unsigned workers = 1);
/// Numeric and analytic three-level tables for every node and initial state.
SweepResult run_three_level_table(const RunConfig& config, unsigned workers = 1);

struct Trajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> populations;
};

/// One drive, one initial state, every accepted step recorded.
Trajectory run_trajectory(const RunConfig& config, double omega0T, double delta0T);

enum class Format { Csv, JsonLines, Matrix, GnuplotScript };

std::string format_number(double value);
std::string to_csv(const SweepResult& result);
std::string to_json_lines(const SweepResult& result);
/// gnuplot splot block: "omega0T delta0T value", blank line between Omega0 blocks.
std::string to_matrix_block(const SweepResult& result, bool analytic);
std::string residual_matrix_block(const SweepResult& result);
std::string trajectory_csv(const Trajectory& trajectory);

/// Writes <stem>.csv, <stem>.jsonl, <stem>_{numeric,analytic,residual}.dat and
/// <stem>.gp as selected; returns the paths written. Throws IoError.
std::vector<std::filesystem::path> emit_outputs(const SweepResult& result, const std::set<Format>& formats,
                                                const std::filesystem::path& out_dir, std::string_view stem,
                                                const std::set<OutputKind>& kinds = {
                                                    OutputKind::FinalPopulations, OutputKind::ResidualMap,
                                                    OutputKind::AnalyticOverlay});

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace signjump
