// Copyright 2026 The rydeit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rydeit/analysis.hpp"
#include "rydeit/constants.hpp"
#include "rydeit/doppler_spectra.hpp"
#include "rydeit/error.hpp"
#include "rydeit/grid_io.hpp"
#include "rydeit/scheme_config.hpp"
#include "rydeit/version.hpp"

namespace rydeit::cli {

namespace fs = std::filesystem;

namespace {

// Configuration problems found before any computation starts.
struct ConfigError : Error {
  using Error::Error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Writes through a temporary file in the same directory so a failed run
// leaves no partial output behind.
void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << content;
    out.close();
    if (!out) throw ConfigError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot move output into place at '" + path.string() + "'");
  }
}

void check_output_dir(const fs::path& out) {
  const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ConfigError("output directory '" + dir.string() + "' does not exist");
  const fs::path probe = dir / ".rydeit-write-test";
  {
    std::ofstream t(probe);
    if (!t) throw ConfigError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
}

fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".meta.json");
  return p;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct SpectrumRequest {
  std::string manifest_path;
  std::string preset;
  std::string scheme_path;
  std::string output;
  std::optional<double> rf2_power_dbm;
  std::optional<unsigned> workers;
  std::optional<int> doppler_points;
  std::vector<std::string> overrides;
  bool im_chi = false;
};

struct ResolvedRun {
  LevelScheme scheme;
  ScanSpec scan;
  VaporConditions vapor;
  config::DopplerSettings doppler_settings;
  DopplerSpec doppler;
  fs::path output;
  unsigned workers = 1;
  GridQuantity quantity = GridQuantity::transmission;
  std::string manifest_text;
  std::string scheme_source;
};

config::SchemeDocument load_scheme_source(const std::string& source, const fs::path& base) {
  constexpr std::string_view kPreset = "preset:";
  if (source.rfind(kPreset, 0) == 0) {
    config::SchemeDocument doc;
    doc.scheme = config::builtin_preset(source.substr(kPreset.size()));
    return doc;
  }
  fs::path p(source);
  if (p.is_relative()) p = base / p;
  if (!fs::exists(p)) throw ConfigError("scheme file '" + p.string() + "' not found");
  return config::parse_document(read_file(p));
}

ResolvedRun resolve(const SpectrumRequest& req) {
  ResolvedRun run;
  std::vector<config::Section> manifest;
  fs::path base = fs::current_path();
  std::string scheme_source;
  std::optional<std::string> output;

  if (!req.manifest_path.empty()) {
    const fs::path mp(req.manifest_path);
    if (!fs::exists(mp)) throw ConfigError("manifest '" + mp.string() + "' not found");
    run.manifest_text = read_file(mp);
    manifest = config::tokenize(run.manifest_text);
    base = mp.has_parent_path() ? mp.parent_path() : fs::path(".");
    for (const auto& sec : manifest) {
      if (sec.name != "run") continue;
      for (const auto& r : sec.records) {
        for (const auto& f : r.fields) {
          if (f.key == "scheme") {
            scheme_source = f.value;
          } else if (f.key == "output") {
            output = (fs::path(f.value).is_relative() ? base / f.value : fs::path(f.value)).string();
          } else if (f.key == "workers") {
            const long w = config::parse_integer(f);
            if (w < 1) throw ParseError(static_cast<int>(f.line), static_cast<int>(f.value_column), "workers must be >= 1");
            run.workers = static_cast<unsigned>(w);
          } else if (f.key == "quantity") {
            if (f.value == "transmission") {
              run.quantity = GridQuantity::transmission;
            } else if (f.value == "im_chi") {
              run.quantity = GridQuantity::im_chi;
            } else {
              throw ParseError(static_cast<int>(f.line), static_cast<int>(f.value_column),
                               "quantity must be transmission or im_chi");
            }
          } else {
            throw ParseError(static_cast<int>(f.line), static_cast<int>(f.column), "unknown key '" + f.key + "' in [run]");
          }
        }
      }
    }
  }
  if (!req.preset.empty() && !req.scheme_path.empty()) throw ConfigError("give either --preset or --scheme, not both");
  if (!req.preset.empty()) scheme_source = "preset:" + req.preset;
  if (!req.scheme_path.empty()) {
    scheme_source = req.scheme_path;
    base = fs::current_path();
  }
  if (scheme_source.empty()) throw ConfigError("no scheme given (use --preset, --scheme or [run] scheme=)");
  run.scheme_source = scheme_source;

  config::SchemeDocument doc = load_scheme_source(scheme_source, base);
  run.scheme = doc.scheme;
  std::optional<ScanSpec> scan = doc.scan;
  run.vapor = doc.vapor.value_or(VaporConditions{});
  run.doppler_settings = doc.doppler.value_or(config::DopplerSettings{});

  if (!manifest.empty()) {
    if (auto s = config::parse_scan_section(manifest)) scan = s;
    if (auto v = config::parse_vapor_section(manifest)) run.vapor = *v;
    if (auto d = config::parse_doppler_section(manifest)) run.doppler_settings = *d;
    for (const auto& sec : manifest) {
      if (sec.name != "set") continue;
      for (const auto& r : sec.records) config::apply_drive_override(run.scheme, r);
    }
  }
  for (const auto& text : req.overrides) {
    const auto secs = config::tokenize("[set]\n" + text + "\n");
    for (const auto& r : secs.front().records) config::apply_drive_override(run.scheme, r);
  }
  if (req.rf2_power_dbm) {
    const auto& rf2 = run.scheme.drive("RF2");
    run.scheme = with_drive_rabi(run.scheme, "RF2", horn_drive_rabi(run.scheme, rf2, dbm_to_watts(*req.rf2_power_dbm)));
  }
  if (req.doppler_points) run.doppler_settings.points = *req.doppler_points;
  if (req.workers) run.workers = *req.workers;
  if (run.workers < 1) throw ConfigError("workers must be >= 1");
  if (req.im_chi) run.quantity = GridQuantity::im_chi;

  if (!scan) throw ConfigError("no [scan] section in the scheme or manifest");
  run.scan = *scan;
  validate(run.scheme);
  validate(run.scan, run.scheme);
  validate(run.vapor);
  run.doppler = run.doppler_settings.resolve(run.vapor);
  validate(run.doppler);

  if (!req.output.empty()) output = req.output;
  if (!output) throw ConfigError("no output path (use --output or [run] output=)");
  run.output = *output;
  check_output_dir(run.output);
  return run;
}

int cmd_spectrum(const SpectrumRequest& req, const std::vector<std::string>& argv, std::ostream& out,
                 std::ostream& err) {
  ResolvedRun run;
  try {
    run = resolve(req);
  } catch (const Error& e) {
    err << "rydeit spectrum: configuration error: " << e.what() << '\n';
    return kConfigError;
  }

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  SpectrumGrid grid;
  try {
    grid = run_scan(run.scheme, run.scan, run.vapor, run.doppler, {run.workers, run.quantity});
  } catch (const NumericalError& e) {
    err << "rydeit spectrum: numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "rydeit spectrum: configuration error: " << e.what() << '\n';
    return kConfigError;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::size_t cells = grid.values.size();
  if (grid.near_degenerate_cells * 100 > cells) {
    err << "rydeit spectrum: numerical failure: " << grid.near_degenerate_cells << " of " << cells
        << " grid cells have a near-degenerate steady state\n";
    return kNumericalFailure;
  }

  nlohmann::ordered_json meta;
  meta["tool"] = "rydeit";
  meta["version"] = kVersion;
  meta["command_line"] = argv;
  meta["manifest"] = run.manifest_text;
  meta["scheme_source"] = run.scheme_source;
  meta["scheme"] = config::serialize_scheme(run.scheme);
  meta["scan"] = config::serialize_scan(run.scan);
  meta["vapor"] = config::serialize_vapor(run.vapor);
  meta["doppler"] = config::serialize_doppler(run.doppler_settings);
  meta["doppler_u_m_per_s"] = run.doppler.u;
  meta["quantity"] = run.quantity == GridQuantity::im_chi ? "im_chi" : "transmission";
  meta["rows"] = grid.rows();
  meta["columns"] = grid.cols();
  meta["near_degenerate_cells"] = grid.near_degenerate_cells;
  meta["workers"] = run.workers;
  meta["started_utc"] = started;
  meta["runtime_seconds"] = seconds;

  try {
    write_atomically(run.output, grid_to_csv(grid));
    write_atomically(sidecar_path(run.output), meta.dump(2) + "\n");
  } catch (const Error& e) {
    err << "rydeit spectrum: " << e.what() << '\n';
    return kConfigError;
  }
  out << "wrote " << run.output.string() << " (" << grid.rows() << " x " << grid.cols() << " cells, " << std::fixed
      << std::setprecision(1) << seconds << " s)\n";
  return kOk;
}

struct AnalyzeRequest {
  std::string grid_path;
  std::string mode = "bell";
  std::optional<double> window_lo_mhz;
  std::optional<double> window_hi_mhz;
  double prominence = 0.05;
  std::optional<double> omega_rf1_mhz;
  double a = 1.0;
  std::string measure = "apex";
  std::string output;
  bool track = false;
  double max_step_mhz = 6.0;
};

int cmd_analyze(const AnalyzeRequest& req, std::ostream& out, std::ostream& err) {
  SpectrumGrid grid;
  try {
    grid = parse_grid_csv(read_file(req.grid_path));
  } catch (const Error& e) {
    err << "rydeit analyze: cannot read grid: " << e.what() << '\n';
    return kConfigError;
  }
  if (req.mode == "infer" && !req.omega_rf1_mhz) {
    err << "rydeit analyze: infer mode needs --omega-rf1-mhz\n";
    return kConfigError;
  }
  if (req.measure != "apex" && req.measure != "slope") {
    err << "rydeit analyze: --measure must be apex or slope\n";
    return kConfigError;
  }
  const bool y_mhz = grid.y_label.size() >= 4 && grid.y_label.substr(grid.y_label.size() - 4) == "_mhz";
  auto y_out = [&](double y) { return y_mhz ? rad_to_mhz(y) : y; };

  std::ostringstream record;
  try {
    const auto [xmin, xmax] = std::minmax_element(grid.x_values.begin(), grid.x_values.end());
    DetuningWindow window{req.window_lo_mhz ? mhz_to_rad(*req.window_lo_mhz) : *xmin,
                          req.window_hi_mhz ? mhz_to_rad(*req.window_hi_mhz) : *xmax};
    // MHz round trips can land a hair outside the grid.
    window.lo = std::max(window.lo, *xmin);
    window.hi = std::min(window.hi, *xmax);
    const PeakTrace trace = req.track ? track_peak_trace(grid, window, {req.prominence, mhz_to_rad(req.max_step_mhz)})
                                      : extract_peak_trace(grid, window, {req.prominence});
    if (req.mode == "trace") {
      write_trace_csv(record, trace, grid.y_label, y_mhz);
    } else {
      const BellFeatures f = bell_features(trace);
      KeyValues kv{
          {"apex_mhz", format_double(rad_to_mhz(f.apex))},
          {"crossing_lo_" + std::string(y_mhz ? "mhz" : "value"), format_double(y_out(f.zero_crossings[0]))},
          {"crossing_hi_" + std::string(y_mhz ? "mhz" : "value"), format_double(y_out(f.zero_crossings[1]))},
          {"crossing_separation_" + std::string(y_mhz ? "mhz" : "value"),
           format_double(y_out(f.zero_crossings[1] - f.zero_crossings[0]))},
          {"slope_lo", format_double(f.slopes[0])},
          {"slope_hi", format_double(f.slopes[1])},
          {"slope", format_double(0.5 * (std::abs(f.slopes[0]) + std::abs(f.slopes[1])))},
      };
      if (req.mode == "infer") {
        const double o1 = mhz_to_rad(*req.omega_rf1_mhz);
        const double inferred =
            req.measure == "apex"
                ? infer_rf2_field(BellMeasurement::apex, f.apex, o1, req.a)
                : infer_rf2_field(BellMeasurement::slope, 0.5 * (std::abs(f.slopes[0]) + std::abs(f.slopes[1])), o1,
                                  req.a);
        kv.emplace_back("inferred_omega_rf2_mhz", format_double(rad_to_mhz(inferred)));
      }
      write_key_values(record, kv);
    }
  } catch (const AnalysisError& e) {
    err << "rydeit analyze: " << e.what() << '\n';
    return kAnalysisFailure;
  } catch (const Error& e) {
    err << "rydeit analyze: " << e.what() << '\n';
    return kConfigError;
  }

  if (req.output.empty()) {
    out << record.str();
    return kOk;
  }
  try {
    check_output_dir(req.output);
    write_atomically(req.output, record.str());
  } catch (const Error& e) {
    err << "rydeit analyze: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

struct CalibrateRequest {
  std::string points_path;
  double gain = 0.0;
  double distance = 0.0;
  double dipole = 0.0;
  std::string output;
};

std::vector<SplittingPoint> parse_splittings(const std::string& text) {
  std::vector<SplittingPoint> pts;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      if (line != "power_mw,splitting_mhz") throw ParseError(line_no, 1, "header must be power_mw,splitting_mhz");
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(line_no, 1, "expected two columns");
    try {
      std::size_t used = 0;
      const double p = std::stod(line.substr(0, comma), &used);
      const double s = std::stod(line.substr(comma + 1));
      pts.push_back({p, s});
    } catch (const std::logic_error&) {
      throw ParseError(line_no, 1, "expected numbers");
    }
  }
  if (header) throw ParseError(0, 0, "empty calibration file");
  return pts;
}

int cmd_calibrate(const CalibrateRequest& req, std::ostream& out, std::ostream& err) {
  try {
    const auto pts = parse_splittings(read_file(req.points_path));
    const auto fit = calibrate_cell_factor(pts, {0.0, req.gain, req.distance, 1.0}, {req.dipole});
    std::ostringstream record;
    write_key_values(record, {{"cell_factor", format_double(fit.cell_factor)},
                              {"rms_residual_mhz", format_double(fit.rms_residual_mhz)},
                              {"points", std::to_string(pts.size())}});
    if (req.output.empty()) {
      out << record.str();
    } else {
      check_output_dir(req.output);
      write_atomically(req.output, record.str());
    }
  } catch (const Error& e) {
    err << "rydeit calibrate: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-level Rydberg EIT spectra with several RF fields"};
  app.name("rydeit");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SpectrumRequest sreq;
  auto* spectrum = app.add_subcommand("spectrum", "Compute a 2-D transmission grid and write CSV + metadata");
  spectrum->add_option("--manifest,-m", sreq.manifest_path, "Run manifest");
  spectrum->add_option("--preset", sreq.preset, "Built-in scheme preset");
  spectrum->add_option("--scheme", sreq.scheme_path, "Scheme file");
  spectrum->add_option("--output,-o", sreq.output, "Output CSV path");
  spectrum->add_option("--rf2-power-dbm", sreq.rf2_power_dbm, "RF2 horn input power in dBm");
  spectrum->add_option("--workers,-j", sreq.workers, "Worker threads");
  spectrum->add_option("--doppler-points", sreq.doppler_points, "Velocity quadrature nodes");
  spectrum->add_option("--set", sreq.overrides, "Drive override, e.g. \"drive=RF1 rabi=40MHz\"");
  spectrum->add_flag("--im-chi", sreq.im_chi, "Write Im(chi) instead of transmission");

  AnalyzeRequest areq;
  auto* analyze = app.add_subcommand("analyze", "Extract peak traces and bell-curve features from a grid CSV");
  analyze->add_option("grid", areq.grid_path, "Grid CSV written by 'spectrum'")->required();
  analyze->add_option("--mode", areq.mode, "trace, bell or infer")
      ->check(CLI::IsMember({"trace", "bell", "infer"}));
  analyze->add_option("--window-lo-mhz", areq.window_lo_mhz, "Lower edge of the detuning window");
  analyze->add_option("--window-hi-mhz", areq.window_hi_mhz, "Upper edge of the detuning window");
  analyze->add_option("--prominence", areq.prominence, "Minimum peak prominence as a fraction of the row range");
  analyze->add_option("--omega-rf1-mhz", areq.omega_rf1_mhz, "RF1 Rabi frequency / 2 pi (infer mode)");
  analyze->add_option("--a", areq.a, "Slope prefactor A (infer mode)");
  analyze->add_option("--measure", areq.measure, "apex or slope (infer mode)");
  analyze->add_option("--output,-o", areq.output, "Output file (default stdout)");
  analyze->add_flag("--track", areq.track, "Follow one line from the row nearest y = 0 instead of each row's maximum");
  analyze->add_option("--max-step-mhz", areq.max_step_mhz, "Largest jump between rows when tracking");

  CalibrateRequest creq;
  auto* calibrate = app.add_subcommand("calibrate", "Fit the cell factor F to measured AT splittings");
  calibrate->add_option("points", creq.points_path, "CSV with power_mw,splitting_mhz")->required();
  calibrate->add_option("--gain", creq.gain, "Horn gain (linear)")->required();
  calibrate->add_option("--distance", creq.distance, "Horn distance in m")->required();
  calibrate->add_option("--dipole", creq.dipole, "Transition dipole in e a0")->required();
  calibrate->add_option("--output,-o", creq.output, "Output file (default stdout)");

  std::vector<std::string> rev;
  for (auto it = args.rbegin(); it != args.rend() && std::next(it) != args.rend(); ++it) rev.push_back(*it);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  if (spectrum->parsed()) return cmd_spectrum(sreq, args, out, err);
  if (analyze->parsed()) return cmd_analyze(areq, out, err);
  return cmd_calibrate(creq, out, err);
}

}  // namespace rydeit::cli
