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

// File formats: demonstration CSV, path / robot / config JSON, trace and
// sweep CSV, payload map CSV, placement and metrics JSON, run manifests.
//
// Parse failures throw ParseError with the source name and either a line
// number (CSV) or a dotted field path (JSON).

#ifndef RVF_IO_HPP_
#define RVF_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rvf/common.hpp"
#include "rvf/robot_model.hpp"
#include "rvf/sim_harness.hpp"
#include "rvf/spline_path.hpp"
#include "rvf/workspace_opt.hpp"

namespace rvf::io {

inline constexpr int kSchemaVersion = 1;

std::string tool_version();

std::string read_file(const std::filesystem::path& file);
void write_file(const std::filesystem::path& file, const std::string& content);

/// Shortest text that parses back to the same double; "nan" / "inf" for
/// non-finite values.
std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Demonstrations: header "t,x,y,z", strictly increasing t.
std::vector<DemoSample> parse_demo_csv(std::istream& in,
                                       const std::string& source = "<input>");
std::vector<DemoSample> read_demo_csv(const std::filesystem::path& file);
void write_demo_csv(std::ostream& out, std::span<const DemoSample> samples);

// Fitted path with its arc-length table.
std::string path_to_json(const PathCurve& path);
PathCurve path_from_json(const std::string& text, const std::string& source = "<input>");
PathCurve read_path_json(const std::filesystem::path& file);

// Serial chains.
std::string robot_to_json(const KinematicChain& chain);
KinematicChain robot_from_json(const std::string& text,
                               const std::string& source = "<input>");
/// A builtin name (panda7, planar2, single_link) or a robot JSON file,
/// relative paths resolved against base_dir.
KinematicChain load_robot(const std::string& spec,
                          const std::filesystem::path& base_dir = {});

struct LoadedConfig {
  SimConfig sim;
  std::optional<SweepSpec> sweep;
  std::uint64_t hash = 0;  // of the config text
};

LoadedConfig parse_sim_config(const std::string& text,
                              const std::filesystem::path& base_dir,
                              const std::string& source = "<input>");
LoadedConfig read_sim_config(const std::filesystem::path& file);

// Trace CSV with a fixed column order.
std::vector<std::string> trace_columns(int dof);
void write_trace_csv(std::ostream& out, const SimTrace& trace);
SimTrace parse_trace_csv(std::istream& in, const std::string& source = "<input>");

struct MetricsRecord {
  SimMetrics metrics;
  EnergyReport energy;
  std::optional<std::string> fault;
  std::vector<SimEvent> events;
};

std::string metrics_to_json(const MetricsRecord& record);
MetricsRecord metrics_from_json(const std::string& text,
                                const std::string& source = "<input>");

// Sweep results: one row per (cell, repetition), then one aggregate row per
// cell.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
SweepResult parse_sweep_csv(std::istream& in, const std::string& source = "<input>");

// Payload map: x, y, z, payload_N (empty when unreachable).
void write_map_csv(std::ostream& out, const PayloadMap& map);
PayloadMap parse_map_csv(std::istream& in, const std::string& source = "<input>");

std::string placement_to_json(const PlacementResult& result);
PlacementResult placement_from_json(const std::string& text,
                                    const std::string& source = "<input>");

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string started_utc;
  std::string finished_utc;
  std::vector<std::string> outputs;
};

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& text,
                               const std::string& source = "<input>");
std::string utc_timestamp();

/// n points equally spaced in arc length, both ends included.
std::vector<Vec3> sample_path_points(const PathCurve& path, int n);

}  // namespace rvf::io

#endif  // RVF_IO_HPP_
