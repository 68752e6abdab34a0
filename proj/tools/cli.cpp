// Copyright 2026 The rvf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rvf/io.hpp"
#include "rvf/robot_library.hpp"
#include "rvf/sim_harness.hpp"
#include "rvf/spline_path.hpp"
#include "rvf/workspace_opt.hpp"

namespace rvf::cli {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::string output = ".";
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("-o,--output", c.output, "Output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_flag("-v,--verbose", c.verbose, "Progress messages");
}

/// Looks for a relative input in the working directory first, then in the
/// directory named by RVF_CONFIG_DIR.
fs::path resolve_input(const std::string& name) {
  fs::path p(name);
  if (p.is_absolute() || fs::exists(p)) return p;
  if (const char* dir = std::getenv(kConfigDirEnv); dir && *dir) {
    fs::path alt = fs::path(dir) / p;
    if (fs::exists(alt)) return alt;
  }
  return p;
}

class Outputs {
 public:
  Outputs(const std::string& dir, std::string command, std::uint64_t seed, std::string hash)
      : dir_(dir) {
    manifest_.command = std::move(command);
    manifest_.seed = seed;
    manifest_.config_hash = std::move(hash);
    manifest_.tool_version = io::tool_version();
    manifest_.started_utc = io::utc_timestamp();
  }

  void write(const std::string& name, const std::string& content) {
    io::write_file(dir_ / name, content);
    manifest_.outputs.push_back(name);
  }

  fs::path finish() {
    manifest_.finished_utc = io::utc_timestamp();
    const fs::path p = dir_ / "manifest.json";
    io::write_file(p, io::manifest_to_json(manifest_));
    return p;
  }

 private:
  fs::path dir_;
  io::RunManifest manifest_;
};

std::string join_argv(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

SearchAxis axis_from(const std::vector<double>& v, const char* name) {
  if (v.size() == 1) return {v[0], v[0], 1.0};
  if (v.size() != 3) throw InvalidArgument(std::string("--") + name + " expects VALUE or MIN MAX STEP");
  return {v[0], v[1], v[2]};
}

// ----------------------------------------------------------------- fit-path

struct FitArgs {
  Common common;
  std::string demo;
  double lambda = 1e-6;
  std::optional<int> control_points;
  int samples_per_span = 32;
  int plot_samples = 400;
};

int fit_path(const FitArgs& a, const std::string& command, std::ostream& out) {
  const fs::path demo = resolve_input(a.demo);
  const std::string text = io::read_file(demo);
  std::istringstream in(text);
  const auto samples = io::parse_demo_csv(in, demo.string());
  SmoothingFitOptions fit;
  fit.lambda = a.lambda;
  fit.control_points = a.control_points;
  const PathCurve path = PathCurve::from_curve(fit_smoothing_spline(samples, fit), a.samples_per_span);

  std::ostringstream key;
  key << text << "|lambda=" << io::format_double(a.lambda)
      << "|cp=" << (a.control_points ? *a.control_points : -1) << "|sps=" << a.samples_per_span;
  Outputs outputs(a.common.output, command, a.common.seed.value_or(0), io::hex64(io::fnv1a64(key.str())));
  outputs.write("path.json", io::path_to_json(path));

  std::ostringstream plot;
  plot << "s,x,y,z,tx,ty,tz\n";
  for (int i = 0; i < a.plot_samples; ++i) {
    const double s = path.length() * i / (a.plot_samples - 1);
    const PathPoint p = path.eval(s);
    plot << io::format_double(s);
    for (int k = 0; k < 3; ++k) plot << ',' << io::format_double(p.position[k]);
    for (int k = 0; k < 3; ++k) plot << ',' << io::format_double(p.tangent[k]);
    plot << '\n';
  }
  outputs.write("path_samples.csv", plot.str());
  outputs.finish();
  if (a.common.verbose) {
    out << "fitted " << samples.size() << " samples, " << path.curve().control_points.size()
        << " control points, length " << io::format_double(path.length()) << " m\n";
  }
  return kOk;
}

// ------------------------------------------------------------ map-workspace

struct MapArgs {
  Common common;
  std::string robot;
  std::vector<double> lower, upper;
  double resolution = 0.05;
  std::string orientation = "down";
  bool position_only = false;
};

int map_workspace_cmd(const MapArgs& a, const std::string& command, std::ostream& out) {
  const KinematicChain chain = io::load_robot(resolve_input(a.robot).string());
  WorkspaceGrid grid;
  grid.lower = Vec3(a.lower[0], a.lower[1], a.lower[2]);
  grid.upper = Vec3(a.upper[0], a.upper[1], a.upper[2]);
  grid.resolution = a.resolution;
  grid.validate();
  const FlangeOrientation o = parse_flange_orientation(a.orientation);
  MapOptions options;
  options.ik.position_only = a.position_only || chain.dof() < 6;
  if (chain.name == "panda7") options.seeds.push_back(robots::panda7_ready());
  const PayloadMap map = map_workspace(chain, grid, o, options);

  std::ostringstream csv;
  io::write_map_csv(csv, map);
  const std::string key = io::robot_to_json(chain) + "|" + command;
  Outputs outputs(a.common.output, command, a.common.seed.value_or(0), io::hex64(io::fnv1a64(key)));
  outputs.write("map.csv", csv.str());
  outputs.finish();
  if (a.common.verbose) {
    std::size_t reachable = 0;
    for (const auto& p : map) reachable += p.value.has_value();
    out << "mapped " << map.size() << " points, " << reachable << " reachable\n";
  }
  return kOk;
}

// ------------------------------------------------------- optimize-placement

struct PlaceArgs {
  Common common;
  std::string robot;
  std::string path;
  std::string demo;
  int samples = 50;
  std::vector<double> tx{0.0}, ty{0.0}, theta{0.0};
  std::vector<std::string> orientations{"down"};
  bool position_only = false;
};

int optimize_placement_cmd(const PlaceArgs& a, const std::string& command, std::ostream& out) {
  const KinematicChain chain = io::load_robot(resolve_input(a.robot).string());
  std::vector<Vec3> trajectory;
  std::string key = io::robot_to_json(chain);
  if (!a.path.empty()) {
    const fs::path p = resolve_input(a.path);
    const std::string text = io::read_file(p);
    trajectory = io::sample_path_points(io::path_from_json(text, p.string()), a.samples);
    key += text;
  } else {
    const fs::path p = resolve_input(a.demo);
    for (const auto& s : io::read_demo_csv(p)) trajectory.push_back(s.position);
    key += io::read_file(p);
  }
  PlacementSearch search;
  search.tx = axis_from(a.tx, "tx");
  search.ty = axis_from(a.ty, "ty");
  search.theta = axis_from(a.theta, "theta");
  search.orientations.clear();
  for (const auto& o : a.orientations) search.orientations.push_back(parse_flange_orientation(o));
  MapOptions options;
  options.ik.position_only = a.position_only || chain.dof() < 6;
  if (chain.name == "panda7") options.seeds.push_back(robots::panda7_ready());
  const PlacementResult result = optimize_placement(chain, trajectory, search, options);

  Outputs outputs(a.common.output, command, a.common.seed.value_or(0),
                  io::hex64(io::fnv1a64(key + "|" + command)));
  outputs.write("placement.json", io::placement_to_json(result));
  outputs.finish();
  if (!result.pi_opt) {
    out << "no feasible placement among " << result.evaluated << " candidates\n";
    return kNoResult;
  }
  if (a.common.verbose) {
    out << "pi_opt " << io::format_double(*result.pi_opt) << " N at tx "
        << io::format_double(result.placement.tx) << " ty " << io::format_double(result.placement.ty)
        << " theta " << io::format_double(result.placement.theta) << " ("
        << to_string(result.orientation) << "), " << result.evaluated << " evaluated\n";
  }
  return kOk;
}

// ------------------------------------------------------------ simulate/sweep

struct SimArgs {
  Common common;
  std::string config;
  std::optional<double> dt, duration;
  std::optional<int> repetitions, threads;
};

io::LoadedConfig load_config(const SimArgs& a) {
  io::LoadedConfig cfg = io::read_sim_config(resolve_input(a.config));
  if (a.dt) cfg.sim.dt = *a.dt;
  if (a.duration) cfg.sim.duration = *a.duration;
  if (a.common.seed) cfg.sim.seed = *a.common.seed;
  cfg.sim.validate();
  return cfg;
}

int simulate_cmd(const SimArgs& a, const std::string& command, std::ostream& out) {
  const io::LoadedConfig cfg = load_config(a);
  Outputs outputs(a.common.output, command, cfg.sim.seed, io::hex64(cfg.hash));
  if (a.common.verbose) out << "simulating " << cfg.sim.duration << " s at dt " << cfg.sim.dt << " s\n";
  const SimTrace trace = simulate_session(cfg.sim);

  std::ostringstream csv;
  io::write_trace_csv(csv, trace);
  outputs.write("trace.csv", csv.str());
  io::MetricsRecord rec;
  if (!trace.rows.empty()) {
    rec.metrics = compute_metrics(trace);
    rec.energy = passivity_report(trace);
  }
  rec.fault = trace.fault;
  rec.events = trace.events;
  outputs.write("metrics.json", io::metrics_to_json(rec));
  outputs.finish();

  if (a.common.verbose && !trace.rows.empty()) {
    out << "ticks " << trace.rows.size() << ", max deviation "
        << io::format_double(rec.metrics.deviation_perp.max) << " m, energy residual "
        << io::format_double(rec.energy.max_residual) << " J\n";
  }
  if (trace.fault) {
    out << "fault: " << *trace.fault << '\n';
    return kFault;
  }
  return kOk;
}

int sweep_cmd(const SimArgs& a, const std::string& command, std::ostream& out) {
  const io::LoadedConfig cfg = load_config(a);
  SweepSpec spec = cfg.sweep.value_or(SweepSpec{});
  if (!cfg.sweep) spec.seed = cfg.sim.seed;
  if (a.common.seed) spec.seed = *a.common.seed;
  if (a.repetitions) spec.repetitions = *a.repetitions;
  if (a.threads) spec.threads = *a.threads;
  if (spec.repetitions < 1) throw InvalidArgument("--repetitions must be >= 1");

  Outputs outputs(a.common.output, command, spec.seed, io::hex64(cfg.hash));
  if (a.common.verbose) {
    out << "sweeping " << spec.chi.size() << " x " << spec.delta.size() << " cells, "
        << spec.repetitions << " repetitions\n";
  }
  const SweepResult result = sweep(cfg.sim, spec);
  std::ostringstream csv;
  io::write_sweep_csv(csv, result);
  outputs.write("sweep.csv", csv.str());
  outputs.finish();

  int faults = 0;
  for (const auto& c : result.cells) faults += c.faults;
  if (a.common.verbose) {
    for (const auto& c : result.cells) {
      out << "chi " << io::format_double(c.chi) << " delta " << io::format_double(c.delta)
          << ": mean deviation " << io::format_double(c.mean_deviation) << " m, peak force "
          << io::format_double(c.mean_peak_force) << " N, faults " << c.faults << '\n';
    }
  }
  if (faults > 0) {
    out << faults << " faulted run(s)\n";
    return kFault;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Guiding virtual fixtures: path fitting, workspace maps and simulation", "rvf"};
  app.set_version_flag("--version", io::tool_version());
  app.require_subcommand(1);

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit-path", "Fit a smoothing spline to a demonstration CSV");
  fit_cmd->add_option("demo", fit.demo, "Demonstration CSV (t,x,y,z)")->required();
  fit_cmd->add_option("--lambda", fit.lambda, "Smoothing weight")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  fit_cmd->add_option("--control-points", fit.control_points, "Number of control points");
  fit_cmd->add_option("--samples-per-span", fit.samples_per_span, "Arc-length table density")
      ->capture_default_str()->check(CLI::Range(2, 100000));
  fit_cmd->add_option("--plot-samples", fit.plot_samples, "Rows in path_samples.csv")
      ->capture_default_str()->check(CLI::Range(2, 10000000));
  add_common(fit_cmd, fit.common);

  MapArgs map;
  auto* map_cmd = app.add_subcommand("map-workspace", "Payload index over a grid of positions");
  map_cmd->add_option("--robot", map.robot, "Builtin robot name or robot JSON")->required();
  map_cmd->add_option("--lower", map.lower, "Grid corner x y z")->expected(3)->required();
  map_cmd->add_option("--upper", map.upper, "Grid corner x y z")->expected(3)->required();
  map_cmd->add_option("--resolution", map.resolution, "Grid step (m)")->capture_default_str();
  map_cmd->add_option("--orientation", map.orientation, "Flange orientation")
      ->check(CLI::IsMember({"down", "horizontal", "up"}))->capture_default_str();
  map_cmd->add_flag("--position-only", map.position_only,
                    "Ignore the flange orientation (implied for chains with fewer than 6 joints)");
  add_common(map_cmd, map.common);

  PlaceArgs place;
  auto* place_cmd = app.add_subcommand("optimize-placement", "Best planar placement of a path");
  place_cmd->add_option("--robot", place.robot, "Builtin robot name or robot JSON")->required();
  auto* path_opt = place_cmd->add_option("--path", place.path, "Path JSON from fit-path");
  auto* demo_opt = place_cmd->add_option("--demo", place.demo, "Demonstration CSV (raw points)");
  path_opt->excludes(demo_opt);
  place_cmd->add_option("--samples", place.samples, "Points sampled along --path")
      ->capture_default_str()->check(CLI::Range(1, 100000));
  place_cmd->add_option("--tx", place.tx, "VALUE or MIN MAX STEP (m)")->expected(1, 3);
  place_cmd->add_option("--ty", place.ty, "VALUE or MIN MAX STEP (m)")->expected(1, 3);
  place_cmd->add_option("--theta", place.theta, "VALUE or MIN MAX STEP (rad)")->expected(1, 3);
  place_cmd->add_option("--orientation", place.orientations, "Flange orientations")
      ->check(CLI::IsMember({"down", "horizontal", "up"}));
  place_cmd->add_flag("--position-only", place.position_only,
                      "Ignore the flange orientation (implied for chains with fewer than 6 joints)");
  add_common(place_cmd, place.common);

  SimArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Closed-loop session from a JSON config");
  sim_cmd->add_option("config", sim.config, "Config JSON")->required();
  sim_cmd->add_option("--dt", sim.dt, "Override the time step (s)");
  sim_cmd->add_option("--duration", sim.duration, "Override the duration (s)");
  add_common(sim_cmd, sim.common);

  SimArgs sw;
  auto* sweep_sub = app.add_subcommand("sweep", "Chi-delta sweep from a JSON config");
  sweep_sub->add_option("config", sw.config, "Config JSON")->required();
  sweep_sub->add_option("--dt", sw.dt, "Override the time step (s)");
  sweep_sub->add_option("--duration", sw.duration, "Override the duration (s)");
  sweep_sub->add_option("--repetitions", sw.repetitions, "Override repetitions per cell");
  sweep_sub->add_option("--threads", sw.threads, "Worker threads (0: hardware)");
  add_common(sweep_sub, sw.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  const std::string command = join_argv(argc, argv);
  try {
    if (fit_cmd->parsed()) return fit_path(fit, command, out);
    if (map_cmd->parsed()) return map_workspace_cmd(map, command, out);
    if (place_cmd->parsed()) {
      if (place.path.empty() && place.demo.empty()) {
        throw InvalidArgument("optimize-placement needs --path or --demo");
      }
      return optimize_placement_cmd(place, command, out);
    }
    if (sim_cmd->parsed()) return simulate_cmd(sim, command, out);
    if (sweep_sub->parsed()) return sweep_cmd(sw, command, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace rvf::cli
