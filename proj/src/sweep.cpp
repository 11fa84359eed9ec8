#include "signjump/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "signjump/errors.hpp"

namespace signjump {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(std::string_view text, std::string_view field) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    throw ConfigError("field '" + std::string(field) + "': '" + std::string(text) + "' is not a number");
  return value;
}

// Shortest representation that reads back to the same double.
std::string exact_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string_view system_name(SystemKind s) { return s == SystemKind::TwoLevel ? "two_level" : "three_level"; }

std::string_view output_name(OutputKind k) {
  switch (k) {
    case OutputKind::FinalPopulations:
      return "final_populations";
    case OutputKind::Trajectory:
      return "trajectory";
    case OutputKind::ResidualMap:
      return "residual_map";
    case OutputKind::AnalyticOverlay:
      return "analytic_overlay";
  }
  return "";
}

OutputKind parse_output(std::string_view name) {
  for (auto k : {OutputKind::FinalPopulations, OutputKind::Trajectory, OutputKind::ResidualMap,
                 OutputKind::AnalyticOverlay})
    if (output_name(k) == name) return k;
  throw ConfigError("field 'outputs': unknown output kind '" + std::string(name) + "'");
}

std::string join_grid(const std::vector<double>& grid) {
  std::string out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i) out += ", ";
    out += exact_number(grid[i]);
  }
  return out;
}

// Evaluates node(i) for i in [0, count) on `workers` threads; results land in
// index order so the output does not depend on scheduling.
template <typename Result, typename NodeFn>
std::vector<Result> parallel_map(std::size_t count, unsigned workers, NodeFn node) {
  std::vector<Result> results(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) results[i] = node(i);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (n == 1) {
    worker();
    return results;
  }
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  pool.clear();
  return results;
}

SweepRow failed_row(double omega0T, double delta0T, int initial, int dim, const std::exception& e) {
  SweepRow row;
  row.omega0T = omega0T;
  row.delta0T = delta0T;
  row.initial_state = initial;
  row.p_numeric.assign(dim, kNaN);
  row.p_analytic.assign(dim, kNaN);
  row.residual = kNaN;
  row.majorana_residual = kNaN;
  row.ok = false;
  row.error = e.what();
  return row;
}

}  // namespace

std::vector<double> RunConfig::default_grid() { return parse_grid("0.1:10:0.1"); }

std::vector<std::string_view> valid_config_keys() {
  return {"system", "shape", "width", "omega0", "delta0", "window", "tolerance", "tau_jump", "initial_state",
          "outputs"};
}

void RunConfig::validate() const {
  auto check_grid = [](const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw ConfigError(std::string("field '") + name + "': grid is empty");
    for (double v : grid)
      if (!(v > 0.0) || !std::isfinite(v))
        throw ConfigError(std::string("field '") + name + "': values must be positive, got " + exact_number(v));
  };
  check_grid(omega0_grid, "omega0");
  check_grid(delta0_grid, "delta0");
  if (!(width > 0.0)) throw ConfigError("field 'width': must be positive");
  if (!(window_start < 0.0 && 0.0 < window_end)) throw ConfigError("field 'window': must contain t = 0");
  if (!(tolerance > 0.0)) throw ConfigError("field 'tolerance': must be positive");
  if (!(tau_jump >= 0.0)) throw ConfigError("field 'tau_jump': must be non-negative");
  if (initial_state < 1 || initial_state > dimension())
    throw ConfigError("field 'initial_state': must be between 1 and " + std::to_string(dimension()));
}

DriveProfile RunConfig::drive(double omega0T, double delta0T) const {
  return DriveProfile(PulseShape(shape, width), omega0T / width, DetuningProfile(delta0T / width, tau_jump * width));
}

IntegrationSpec<double> RunConfig::integration_spec() const {
  IntegrationSpec<double> spec;
  spec.t_start = window_start * width;
  spec.t_end = window_end * width;
  spec.step = 1e-2 * width;
  spec.tolerance = tolerance;
  return spec;
}

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty grid");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range grid must be start:stop:step, got '" + std::string(text) + "'");
    const double start = parse_number(parts[0], "grid start");
    const double stop = parse_number(parts[1], "grid stop");
    const double step = parse_number(parts[2], "grid step");
    if (!(step > 0.0) || stop < start) throw ConfigError("range grid needs step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = start + static_cast<double>(i) * step;
    return values;
  }
  std::vector<double> values;
  for (auto part : split(text, ',')) values.push_back(parse_number(part, "grid"));
  return values;
}

RunConfig parse_config_text(std::string_view text, RunConfig config) {
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    auto line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key: value'");
    const auto key = trim(line.substr(0, colon));
    const auto value = trim(line.substr(colon + 1));

    if (key == "system") {
      if (value == "two_level")
        config.system = SystemKind::TwoLevel;
      else if (value == "three_level")
        config.system = SystemKind::ThreeLevel;
      else
        throw ConfigError("field 'system': expected two_level or three_level");
    } else if (key == "shape") {
      try {
        config.shape = parse_shape_kind(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field 'shape': ") + e.what());
      }
    } else if (key == "width") {
      config.width = parse_number(value, key);
    } else if (key == "omega0") {
      config.omega0_grid = parse_grid(value);
    } else if (key == "delta0") {
      config.delta0_grid = parse_grid(value);
    } else if (key == "window") {
      const auto parts = split(value, ',');
      if (parts.size() != 2) throw ConfigError("field 'window': expected '<start>, <end>'");
      config.window_start = parse_number(parts[0], key);
      config.window_end = parse_number(parts[1], key);
    } else if (key == "tolerance") {
      config.tolerance = parse_number(value, key);
    } else if (key == "tau_jump") {
      config.tau_jump = parse_number(value, key);
    } else if (key == "initial_state") {
      const double v = parse_number(value, key);
      if (v != std::floor(v)) throw ConfigError("field 'initial_state': must be an integer");
      config.initial_state = static_cast<int>(v);
    } else if (key == "outputs") {
      config.outputs.clear();
      for (auto part : split(value, ','))
        if (!part.empty()) config.outputs.insert(parse_output(part));
    } else {
      std::string valid;
      for (auto k : valid_config_keys()) valid += (valid.empty() ? "" : ", ") + std::string(k);
      throw ConfigError("unknown key '" + std::string(key) + "' (valid keys: " + valid + ")");
    }
  }
  config.validate();
  return config;
}

RunConfig parse_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), std::move(base));
}

std::string to_config_text(const RunConfig& c) {
  std::string out;
  out += "system: " + std::string(system_name(c.system)) + "\n";
  out += "shape: " + std::string(to_string(c.shape)) + "\n";
  out += "width: " + exact_number(c.width) + "\n";
  out += "omega0: " + join_grid(c.omega0_grid) + "\n";
  out += "delta0: " + join_grid(c.delta0_grid) + "\n";
  out += "window: " + exact_number(c.window_start) + ", " + exact_number(c.window_end) + "\n";
  out += "tolerance: " + exact_number(c.tolerance) + "\n";
  out += "tau_jump: " + exact_number(c.tau_jump) + "\n";
  out += "initial_state: " + std::to_string(c.initial_state) + "\n";
  std::string kinds;
  for (auto k : c.outputs) kinds += (kinds.empty() ? "" : ", ") + std::string(output_name(k));
  out += "outputs: " + kinds + "\n";
  return out;
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.ok; }));
}

SweepRow run_two_level_node(const RunConfig& config, double omega0T, double delta0T) {
  const auto started = std::chrono::steady_clock::now();
  try {
    const int initial = config.initial_state;
    const int other = 3 - initial;
    const TwoLevelOutcome outcome =
        simulate_final_populations(config.drive(omega0T, delta0T), config.integration_spec(), basis_state<2>(initial));
    const double transfer = analytic_p2(omega0T, delta0T);

    SweepRow row;
    row.omega0T = omega0T;
    row.delta0T = delta0T;
    row.initial_state = initial;
    row.p_numeric = {outcome.p1, outcome.p2};
    row.p_analytic.assign(2, 1.0 - transfer);
    row.p_analytic[other - 1] = transfer;
    row.residual = row.p_numeric[other - 1] - row.p_analytic[other - 1];
    row.majorana_residual = kNaN;
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return row;
  } catch (const std::exception& e) {
    return failed_row(omega0T, delta0T, config.initial_state, 2, e);
  }
}

std::vector<SweepRow> run_three_level_node(const RunConfig& config, double omega0T, double delta0T) {
  const auto started = std::chrono::steady_clock::now();
  try {
    const DriveProfile drive = config.drive(omega0T, delta0T);
    const auto spec = config.integration_spec();
    const Matrix3c u3 = build_propagator<double, 3>([&drive](double t) { return hamiltonian_3(drive, t); }, spec);
    const Matrix2c u2 = build_propagator<double, 2>([&drive](double t) { return hamiltonian_2(drive, t); }, spec);
    const double lift_residual = (u3 - majorana_u3(extract_cayley_klein(u2))).cwiseAbs().maxCoeff();
    const TransitionTable numeric = transition_table(u3);
    const TransitionTable analytic = analytic_transition_table(omega0T, delta0T);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::vector<SweepRow> rows;
    for (int from = 1; from <= 3; ++from) {
      SweepRow row;
      row.omega0T = omega0T;
      row.delta0T = delta0T;
      row.initial_state = from;
      for (int to = 1; to <= 3; ++to) {
        row.p_numeric.push_back(numeric(from, to));
        row.p_analytic.push_back(analytic(from, to));
      }
      row.residual = (numeric.probabilities.row(from - 1) - analytic.probabilities.row(from - 1)).cwiseAbs().maxCoeff();
      row.majorana_residual = lift_residual;
      row.wall_time = elapsed;
      rows.push_back(std::move(row));
    }
    return rows;
  } catch (const std::exception& e) {
    std::vector<SweepRow> rows;
    for (int from = 1; from <= 3; ++from) rows.push_back(failed_row(omega0T, delta0T, from, 3, e));
    return rows;
  }
}

SweepResult run_fig1_cut(const RunConfig& config, unsigned workers) {
  config.validate();
  if (config.delta0_grid.size() != 1) throw ConfigError("field 'delta0': the Omega0 cut needs a single Delta0 value");
  if (config.system != SystemKind::TwoLevel) throw ConfigError("field 'system': the Omega0 cut is two_level only");
  return run_grid(config, workers);
}

SweepResult run_grid(const RunConfig& config, unsigned workers) {
  config.validate();
  if (config.system != SystemKind::TwoLevel) throw ConfigError("field 'system': grid sweeps are two_level only");
  SweepResult result;
  result.system = SystemKind::TwoLevel;
  result.omega0_grid = config.omega0_grid;
  result.delta0_grid = config.delta0_grid;
  const std::size_t nd = config.delta0_grid.size();
  result.rows = parallel_map<SweepRow>(config.omega0_grid.size() * nd, workers, [&](std::size_t i) {
    return run_two_level_node(config, config.omega0_grid[i / nd], config.delta0_grid[i % nd]);
  });
  return result;
}

SweepResult run_three_level_table(const RunConfig& config, unsigned workers) {
  config.validate();
  if (config.system != SystemKind::ThreeLevel) throw ConfigError("field 'system': the table needs three_level");
  SweepResult result;
  result.system = SystemKind::ThreeLevel;
  result.omega0_grid = config.omega0_grid;
  result.delta0_grid = config.delta0_grid;
  const std::size_t nd = config.delta0_grid.size();
  const auto nodes = parallel_map<std::vector<SweepRow>>(config.omega0_grid.size() * nd, workers, [&](std::size_t i) {
    return run_three_level_node(config, config.omega0_grid[i / nd], config.delta0_grid[i % nd]);
  });
  for (const auto& node : nodes) result.rows.insert(result.rows.end(), node.begin(), node.end());
  return result;
}

Trajectory run_trajectory(const RunConfig& config, double omega0T, double delta0T) {
  config.validate();
  const DriveProfile drive = config.drive(omega0T, delta0T);
  const auto spec = config.integration_spec();
  Trajectory out;
  auto collect = [&out](const auto& points) {
    for (const auto& p : points) {
      out.t.push_back(p.t);
      out.populations.emplace_back(p.populations.data(), p.populations.data() + p.populations.size());
    }
  };
  if (config.system == SystemKind::TwoLevel) {
    collect(propagate([&drive](double t) { return hamiltonian_2(drive, t); }, basis_state<2>(config.initial_state),
                      spec, true)
                .trajectory);
  } else {
    collect(propagate([&drive](double t) { return hamiltonian_3(drive, t); }, basis_state<3>(config.initial_state),
                      spec, true)
                .trajectory);
  }
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 15);
  return std::string(buf, ptr);
}

std::string to_csv(const SweepResult& result) {
  std::string out;
  if (result.system == SystemKind::TwoLevel) {
    out = "omega0T,delta0T,p2_num,p2_ana,residual\n";
    for (const auto& r : result.rows) {
      const int other = 3 - r.initial_state;
      out += format_number(r.omega0T) + ',' + format_number(r.delta0T) + ',' + format_number(r.p_numeric[other - 1]) +
             ',' + format_number(r.p_analytic[other - 1]) + ',' + format_number(r.residual) + '\n';
    }
    return out;
  }
  out = "omega0T,delta0T,initial,p1_num,p2_num,p3_num,p1_ana,p2_ana,p3_ana,residual,majorana_residual\n";
  for (const auto& r : result.rows) {
    out += format_number(r.omega0T) + ',' + format_number(r.delta0T) + ',' + std::to_string(r.initial_state);
    for (double p : r.p_numeric) out += ',' + format_number(p);
    for (double p : r.p_analytic) out += ',' + format_number(p);
    out += ',' + format_number(r.residual) + ',' + format_number(r.majorana_residual) + '\n';
  }
  return out;
}

std::string to_json_lines(const SweepResult& result) {
  auto json_number = [](double v) { return std::isfinite(v) ? format_number(v) : std::string("null"); };
  auto json_array = [&](const std::vector<double>& values) {
    std::string s = "[";
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + json_number(values[i]);
    return s + "]";
  };
  auto escape = [](const std::string& s) {
    std::string e;
    for (char c : s) {
      if (c == '"' || c == '\\') e += '\\';
      e += c;
    }
    return e;
  };
  std::string out;
  for (const auto& r : result.rows) {
    out += "{\"omega0T\":" + json_number(r.omega0T) + ",\"delta0T\":" + json_number(r.delta0T) +
           ",\"initial_state\":" + std::to_string(r.initial_state) + ",\"p_numeric\":" + json_array(r.p_numeric) +
           ",\"p_analytic\":" + json_array(r.p_analytic) + ",\"residual\":" + json_number(r.residual);
    if (result.system == SystemKind::ThreeLevel) out += ",\"majorana_residual\":" + json_number(r.majorana_residual);
    out += ",\"wall_time\":" + json_number(r.wall_time) + ",\"ok\":" + (r.ok ? "true" : "false");
    if (!r.ok) out += ",\"error\":\"" + escape(r.error) + "\"";
    out += "}\n";
  }
  return out;
}

namespace {

template <typename ValueFn>
std::string matrix_block(const SweepResult& result, ValueFn value) {
  std::string out;
  const std::size_t nd = result.delta0_grid.size();
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    if (i > 0 && i % nd == 0) out += '\n';
    out += format_number(r.omega0T) + ' ' + format_number(r.delta0T) + ' ' + format_number(value(r)) + '\n';
  }
  return out;
}

}  // namespace

std::string to_matrix_block(const SweepResult& result, bool analytic) {
  if (result.system != SystemKind::TwoLevel) throw std::invalid_argument("matrix export is for two-level sweeps");
  return matrix_block(result, [analytic](const SweepRow& r) {
    const auto& p = analytic ? r.p_analytic : r.p_numeric;
    return p[2 - r.initial_state];
  });
}

std::string residual_matrix_block(const SweepResult& result) {
  if (result.system != SystemKind::TwoLevel) throw std::invalid_argument("matrix export is for two-level sweeps");
  return matrix_block(result, [](const SweepRow& r) { return r.residual; });
}

std::string trajectory_csv(const Trajectory& trajectory) {
  const std::size_t dim = trajectory.populations.empty() ? 2 : trajectory.populations.front().size();
  std::string out = "t";
  for (std::size_t k = 1; k <= dim; ++k) out += ",p" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < trajectory.t.size(); ++i) {
    out += format_number(trajectory.t[i]);
    for (double p : trajectory.populations[i]) out += ',' + format_number(p);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<std::filesystem::path> emit_outputs(const SweepResult& result, const std::set<Format>& formats,
                                                const std::filesystem::path& out_dir, std::string_view stem,
                                                const std::set<OutputKind>& kinds) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& contents) {
    const auto path = out_dir / name;
    write_text_file(path, contents);
    written.push_back(path);
  };
  const std::string base(stem);
  if (formats.contains(Format::Csv)) emit(base + ".csv", to_csv(result));
  if (formats.contains(Format::JsonLines)) emit(base + ".jsonl", to_json_lines(result));

  const bool surfaces = result.system == SystemKind::TwoLevel;
  std::vector<std::pair<std::string, std::string>> plotted;
  if (surfaces && formats.contains(Format::Matrix)) {
    emit(base + "_numeric.dat", to_matrix_block(result, false));
    plotted.emplace_back(base + "_numeric.dat", "numeric P2");
    if (kinds.contains(OutputKind::AnalyticOverlay)) {
      emit(base + "_analytic.dat", to_matrix_block(result, true));
      plotted.emplace_back(base + "_analytic.dat", "analytic P2");
    }
    if (kinds.contains(OutputKind::ResidualMap)) {
      emit(base + "_residual.dat", residual_matrix_block(result));
      plotted.emplace_back(base + "_residual.dat", "numeric - analytic");
    }
  }
  if (surfaces && formats.contains(Format::GnuplotScript) && !plotted.empty()) {
    std::string gp =
        "# Contour plots of the final transfer probability over (Omega0 T, Delta0 T).\n"
        "set xlabel 'Omega0 T'\nset ylabel 'Delta0 T'\n"
        "set view map\nset contour base\nunset surface\n"
        "set cntrparam levels discrete 0.1, 0.3, 0.5, 0.7, 0.9\n"
        "set terminal pngcairo size 800,700\n";
    for (const auto& [file, title] : plotted) {
      const std::string png = file.substr(0, file.size() - 4) + ".png";
      gp += "set output '" + png + "'\nset title '" + title + "'\nsplot '" + file + "' using 1:2:3 with lines notitle\n";
    }
    emit(base + ".gp", gp);
  }
  return written;
}

}  // namespace signjump
