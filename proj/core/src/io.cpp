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

#include "rvf/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rvf/robot_library.hpp"

#ifndef RVF_VERSION
#define RVF_VERSION "0.0.0"
#endif

namespace rvf::io {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string tool_version() { return RVF_VERSION; }

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ParseError(file.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& file, const std::string& content) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(file.string() + ": cannot open for writing");
  out << content;
  if (!out) throw Error(file.string() + ": write failed");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------- CSV helpers

namespace {

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void csv_fail(const std::string& source, long line, const std::string& msg) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& cell, const std::string& source, long line,
                    const std::string& column) {
  if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (!cell.empty() && *first == '+') ++first;
  const auto r = std::from_chars(first, last, v);
  if (cell.empty() || r.ec != std::errc() || r.ptr != last) {
    csv_fail(source, line, "column '" + column + "': not a number: '" + cell + "'");
  }
  return v;
}

/// Reads lines, skipping blank ones; returns false at end of input.
bool next_line(std::istream& in, std::string& line, long& number) {
  while (std::getline(in, line)) {
    ++number;
    if (!trim(line).empty()) return true;
  }
  return false;
}

std::string join(const std::vector<std::string>& cells) {
  std::string s;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------- demonstrations

std::vector<DemoSample> parse_demo_csv(std::istream& in, const std::string& source) {
  std::string line;
  long number = 0;
  if (!next_line(in, line, number)) csv_fail(source, number, "empty file, expected header t,x,y,z");
  const auto header = split_csv(line);
  if (header != std::vector<std::string>{"t", "x", "y", "z"}) {
    csv_fail(source, number, "expected header 't,x,y,z', got '" + trim(line) + "'");
  }
  std::vector<DemoSample> out;
  const char* names[4] = {"t", "x", "y", "z"};
  while (next_line(in, line, number)) {
    const auto cells = split_csv(line);
    if (cells.size() != 4) {
      csv_fail(source, number, "expected 4 columns, got " + std::to_string(cells.size()));
    }
    double v[4];
    for (int i = 0; i < 4; ++i) {
      v[i] = parse_number(cells[static_cast<size_t>(i)], source, number, names[i]);
      if (!std::isfinite(v[i])) csv_fail(source, number, std::string("column '") + names[i] + "': not finite");
    }
    if (!out.empty() && !(v[0] > out.back().t)) {
      csv_fail(source, number, "timestamp " + cells[0] + " does not increase (row " +
                                   std::to_string(out.size() + 1) + ")");
    }
    out.push_back({v[0], Vec3(v[1], v[2], v[3])});
  }
  if (out.empty()) csv_fail(source, number, "no samples");
  return out;
}

std::vector<DemoSample> read_demo_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file.string() + ": cannot open for reading");
  return parse_demo_csv(in, file.string());
}

void write_demo_csv(std::ostream& out, std::span<const DemoSample> samples) {
  out << "t,x,y,z\n";
  for (const auto& s : samples) {
    out << format_double(s.t) << ',' << format_double(s.position.x()) << ','
        << format_double(s.position.y()) << ',' << format_double(s.position.z()) << '\n';
  }
}

// ------------------------------------------------------------ JSON helpers

namespace {

struct Ctx {
  std::string source;
};

[[noreturn]] void json_fail(const Ctx& c, const std::string& path, const std::string& msg) {
  throw ParseError(c.source + ": " + (path.empty() ? std::string("<root>") : path) + ": " + msg);
}

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index_path(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

json parse_json(const std::string& text, const Ctx& c) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(c.source + ": invalid JSON: " + e.what());
  }
}

const json& require(const Ctx& c, const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) json_fail(c, path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) json_fail(c, child(path, key), "missing field");
  return *it;
}

const json* optional_field(const Ctx& c, const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) json_fail(c, path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

double as_number(const Ctx& c, const json& v, const std::string& path) {
  if (!v.is_number()) json_fail(c, path, "expected a number");
  return v.get<double>();
}

double number(const Ctx& c, const json& obj, const std::string& path, const char* key) {
  return as_number(c, require(c, obj, path, key), child(path, key));
}

double number_or(const Ctx& c, const json& obj, const std::string& path, const char* key,
                 double def) {
  const json* v = optional_field(c, obj, path, key);
  return v ? as_number(c, *v, child(path, key)) : def;
}

bool bool_or(const Ctx& c, const json& obj, const std::string& path, const char* key, bool def) {
  const json* v = optional_field(c, obj, path, key);
  if (!v) return def;
  if (!v->is_boolean()) json_fail(c, child(path, key), "expected true or false");
  return v->get<bool>();
}

std::string string_or(const Ctx& c, const json& obj, const std::string& path, const char* key,
                      const std::string& def) {
  const json* v = optional_field(c, obj, path, key);
  if (!v) return def;
  if (!v->is_string()) json_fail(c, child(path, key), "expected a string");
  return v->get<std::string>();
}

std::vector<double> number_array(const Ctx& c, const json& v, const std::string& path,
                                 std::optional<size_t> size = std::nullopt) {
  if (!v.is_array()) json_fail(c, path, "expected an array of numbers");
  if (size && v.size() != *size) {
    json_fail(c, path, "expected " + std::to_string(*size) + " entries, got " + std::to_string(v.size()));
  }
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(as_number(c, v[i], index_path(path, i)));
  return out;
}

Vec3 vec3(const Ctx& c, const json& v, const std::string& path) {
  const auto a = number_array(c, v, path, 3);
  return Vec3(a[0], a[1], a[2]);
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

VecX vecx(const Ctx& c, const json& v, const std::string& path) {
  const auto a = number_array(c, v, path);
  return Eigen::Map<const VecX>(a.data(), static_cast<Eigen::Index>(a.size()));
}

void require_positive(const Ctx& c, double v, const std::string& path) {
  if (!(v > 0.0) || !std::isfinite(v)) json_fail(c, path, "must be a finite number > 0");
}

void require_nonnegative(const Ctx& c, double v, const std::string& path) {
  if (!(v >= 0.0) || !std::isfinite(v)) json_fail(c, path, "must be a finite number >= 0");
}

void check_schema(const Ctx& c, const json& root) {
  if (!root.is_object()) json_fail(c, "", "expected an object");
  const json* v = optional_field(c, root, "", "schema_version");
  if (!v) json_fail(c, "schema_version", "missing field");
  if (!v->is_number_integer() || v->get<int>() != kSchemaVersion) {
    json_fail(c, "schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
  }
}

// Double output in JSON: nlohmann prints the shortest round-trip form.
// NaN and infinities become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_or_nan(const json& v) {
  return v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

// ------------------------------------------------------------------ paths

std::string path_to_json(const PathCurve& path) {
  const auto& c = path.curve();
  json j;
  j["schema_version"] = kSchemaVersion;
  j["degree"] = c.degree;
  j["knots"] = c.knots;
  json cps = json::array();
  for (const auto& p : c.control_points) cps.push_back(to_json(p));
  j["control_points"] = cps;
  j["length"] = path.length();
  j["arclength_table"] = {{"u", path.table().u}, {"s", path.table().s}};
  return j.dump(1) + "\n";
}

PathCurve path_from_json(const std::string& text, const std::string& source) {
  const Ctx c{source};
  const json root = parse_json(text, c);
  check_schema(c, root);
  BSplineCurve curve;
  const json& deg = require(c, root, "", "degree");
  if (!deg.is_number_integer()) json_fail(c, "degree", "expected an integer");
  curve.degree = deg.get<int>();
  curve.knots = number_array(c, require(c, root, "", "knots"), "knots");
  const json& cps = require(c, root, "", "control_points");
  if (!cps.is_array()) json_fail(c, "control_points", "expected an array");
  for (size_t i = 0; i < cps.size(); ++i) {
    curve.control_points.push_back(vec3(c, cps[i], index_path("control_points", i)));
  }
  try {
    curve.validate();
  } catch (const InvalidArgument& e) {
    json_fail(c, "knots", e.what());
  }
  const json* table = optional_field(c, root, "", "arclength_table");
  if (!table) return PathCurve::from_curve(std::move(curve));
  ArcLengthTable t;
  t.u = number_array(c, require(c, *table, "arclength_table", "u"), "arclength_table.u");
  t.s = number_array(c, require(c, *table, "arclength_table", "s"), "arclength_table.s");
  if (t.u.size() != t.s.size() || t.u.size() < 2) {
    json_fail(c, "arclength_table", "u and s must have the same length >= 2");
  }
  for (size_t i = 1; i < t.s.size(); ++i) {
    if (!(t.s[i] > t.s[i - 1]) || !(t.u[i] > t.u[i - 1])) {
      json_fail(c, index_path("arclength_table.s", i), "table must be strictly increasing");
    }
  }
  t.total_length = t.s.back();
  return PathCurve(std::move(curve), std::move(t));
}

PathCurve read_path_json(const fs::path& file) {
  return path_from_json(read_file(file), file.string());
}

// ----------------------------------------------------------------- robots

namespace {

json transform_to_json(const Iso3& T) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r) rot.push_back(to_json(Vec3(T.linear().row(r).transpose())));
  return {{"xyz", to_json(Vec3(T.translation()))}, {"rotation", rot}};
}

/// {"xyz": [..], "rotation": 3x3 rows} or {"xyz": [..], "rpy": [roll, pitch, yaw]}.
Iso3 transform_from_json(const Ctx& c, const json& v, const std::string& path) {
  Iso3 T = Iso3::Identity();
  if (const json* xyz = optional_field(c, v, path, "xyz")) T.translation() = vec3(c, *xyz, child(path, "xyz"));
  const json* rot = optional_field(c, v, path, "rotation");
  const json* rpy = optional_field(c, v, path, "rpy");
  if (rot && rpy) json_fail(c, path, "give either rotation or rpy, not both");
  if (rot) {
    const std::string rp = child(path, "rotation");
    if (!rot->is_array() || rot->size() != 3) json_fail(c, rp, "expected a 3x3 array");
    Mat3 R;
    for (size_t r = 0; r < 3; ++r) R.row(static_cast<int>(r)) = vec3(c, (*rot)[r], index_path(rp, r)).transpose();
    if (!(R * R.transpose()).isApprox(Mat3::Identity(), 1e-9) || R.determinant() < 0.0) {
      json_fail(c, rp, "not a rotation matrix");
    }
    T.linear() = R;
  } else if (rpy) {
    const Vec3 a = vec3(c, *rpy, child(path, "rpy"));
    T.linear() = (Eigen::AngleAxisd(a[2], Vec3::UnitZ()) * Eigen::AngleAxisd(a[1], Vec3::UnitY()) *
                  Eigen::AngleAxisd(a[0], Vec3::UnitX())).toRotationMatrix();
  }
  return T;
}

}  // namespace

std::string robot_to_json(const KinematicChain& chain) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = chain.name;
  json joints = json::array();
  for (const auto& jt : chain.joints) {
    joints.push_back({{"axis", to_json(jt.axis)},
                      {"origin_transform", transform_to_json(jt.origin)},
                      {"q_min", jt.q_min},
                      {"q_max", jt.q_max},
                      {"tau_lim", jt.tau_lim}});
  }
  j["joints"] = joints;
  json links = json::array();
  for (const auto& l : chain.links) {
    json inertia = json::array();
    for (int r = 0; r < 3; ++r) inertia.push_back(to_json(Vec3(l.inertia.row(r).transpose())));
    links.push_back({{"mass", l.mass}, {"com", to_json(l.com)}, {"inertia", inertia}});
  }
  j["links"] = links;
  j["tool"] = transform_to_json(chain.tool);
  j["gravity"] = to_json(chain.gravity);
  return j.dump(1) + "\n";
}

KinematicChain robot_from_json(const std::string& text, const std::string& source) {
  const Ctx c{source};
  const json root = parse_json(text, c);
  check_schema(c, root);
  KinematicChain chain;
  chain.name = string_or(c, root, "", "name", "robot");
  const json& joints = require(c, root, "", "joints");
  if (!joints.is_array() || joints.empty()) json_fail(c, "joints", "expected a non-empty array");
  for (size_t i = 0; i < joints.size(); ++i) {
    const std::string p = index_path("joints", i);
    JointSpec jt;
    jt.axis = vec3(c, require(c, joints[i], p, "axis"), child(p, "axis"));
    if (!(jt.axis.norm() > 0.0)) json_fail(c, child(p, "axis"), "must be non-zero");
    jt.axis.normalize();
    if (const json* o = optional_field(c, joints[i], p, "origin_transform")) {
      jt.origin = transform_from_json(c, *o, child(p, "origin_transform"));
    }
    jt.q_min = number(c, joints[i], p, "q_min");
    jt.q_max = number(c, joints[i], p, "q_max");
    if (!(jt.q_max > jt.q_min)) json_fail(c, child(p, "q_max"), "must exceed q_min");
    jt.tau_lim = number(c, joints[i], p, "tau_lim");
    require_positive(c, jt.tau_lim, child(p, "tau_lim"));
    chain.joints.push_back(jt);
  }
  const json& links = require(c, root, "", "links");
  if (!links.is_array() || links.size() != joints.size()) {
    json_fail(c, "links", "expected one link per joint");
  }
  for (size_t i = 0; i < links.size(); ++i) {
    const std::string p = index_path("links", i);
    LinkSpec l;
    l.mass = number(c, links[i], p, "mass");
    require_nonnegative(c, l.mass, child(p, "mass"));
    if (const json* com = optional_field(c, links[i], p, "com")) l.com = vec3(c, *com, child(p, "com"));
    if (const json* in = optional_field(c, links[i], p, "inertia")) {
      const std::string ip = child(p, "inertia");
      if (!in->is_array() || in->size() != 3) json_fail(c, ip, "expected a 3x3 array");
      for (size_t r = 0; r < 3; ++r) l.inertia.row(static_cast<int>(r)) = vec3(c, (*in)[r], index_path(ip, r)).transpose();
    }
    chain.links.push_back(l);
  }
  if (const json* tool = optional_field(c, root, "", "tool")) chain.tool = transform_from_json(c, *tool, "tool");
  if (const json* g = optional_field(c, root, "", "gravity")) chain.gravity = vec3(c, *g, "gravity");
  try {
    chain.validate();
  } catch (const InvalidArgument& e) {
    json_fail(c, "", e.what());
  }
  return chain;
}

KinematicChain load_robot(const std::string& spec, const fs::path& base_dir) {
  fs::path p(spec);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  if (p.extension() == ".json" || fs::exists(p)) {
    return robot_from_json(read_file(p), p.string());
  }
  return robots::by_name(spec);
}

// ---------------------------------------------------------------- configs

namespace {

PathCurve load_config_path(const Ctx& c, const json& v, const fs::path& base_dir) {
  const std::string path = "path";
  if (v.is_string()) {
    const fs::path file = base_dir / v.get<std::string>();
    if (file.extension() == ".csv") {
      SmoothingFitOptions fit;
      fit.lambda = 1e-6;
      return PathCurve::from_curve(fit_smoothing_spline(read_demo_csv(file), fit));
    }
    return read_path_json(file);
  }
  if (!v.is_object()) json_fail(c, path, "expected a file name or an object");
  SmoothingFitOptions fit;
  fit.lambda = number_or(c, v, path, "lambda", 1e-6);
  require_nonnegative(c, fit.lambda, "path.lambda");
  if (const json* f = optional_field(c, v, path, "file")) {
    if (!f->is_string()) json_fail(c, "path.file", "expected a string");
    return read_path_json(base_dir / f->get<std::string>());
  }
  if (const json* d = optional_field(c, v, path, "demo")) {
    if (!d->is_string()) json_fail(c, "path.demo", "expected a string");
    return PathCurve::from_curve(fit_smoothing_spline(read_demo_csv(base_dir / d->get<std::string>()), fit));
  }
  if (const json* b = optional_field(c, v, path, "builtin")) {
    if (!b->is_string()) json_fail(c, "path.builtin", "expected a string");
    const std::string name = b->get<std::string>();
    if (name == "crossing") {
      return PathCurve::from_curve(fit_smoothing_spline(crossing_figure_demo(), fit));
    }
    if (name == "line") {
      const Vec3 a = vec3(c, require(c, v, path, "from"), "path.from");
      const Vec3 e = vec3(c, require(c, v, path, "to"), "path.to");
      return PathCurve::from_curve(fit_smoothing_spline(line_demo(a, e), fit));
    }
    json_fail(c, "path.builtin", "unknown builtin path '" + name + "' (expected crossing or line)");
  }
  json_fail(c, path, "expected one of file, demo or builtin");
}

Mat3 damping_from_json(const Ctx& c, const json& v, const std::string& path) {
  if (v.is_number()) return Mat3::Identity() * v.get<double>();
  if (v.is_array() && v.size() == 3 && v[0].is_number()) return vec3(c, v, path).asDiagonal();
  if (v.is_array() && v.size() == 3) {
    Mat3 m;
    for (size_t r = 0; r < 3; ++r) m.row(static_cast<int>(r)) = vec3(c, v[r], index_path(path, r)).transpose();
    return m;
  }
  json_fail(c, path, "expected a number, a 3-vector diagonal or a 3x3 array");
}

std::vector<double> positive_list(const Ctx& c, const json& obj, const std::string& path,
                                  const char* key) {
  const std::string p = child(path, key);
  const auto v = number_array(c, require(c, obj, path, key), p);
  if (v.empty()) json_fail(c, p, "must not be empty");
  for (size_t i = 0; i < v.size(); ++i) require_positive(c, v[i], index_path(p, i));
  return v;
}

}  // namespace

LoadedConfig parse_sim_config(const std::string& text, const fs::path& base_dir,
                              const std::string& source) {
  const Ctx c{source};
  const json root = parse_json(text, c);
  check_schema(c, root);
  LoadedConfig out;
  out.hash = fnv1a64(text);
  SimConfig& cfg = out.sim;

  const json& robot = require(c, root, "", "robot");
  if (robot.is_string()) {
    cfg.chain = load_robot(robot.get<std::string>(), base_dir);
  } else if (const json* f = optional_field(c, robot, "robot", "file")) {
    if (!f->is_string()) json_fail(c, "robot.file", "expected a string");
    const fs::path file = base_dir / f->get<std::string>();
    cfg.chain = robot_from_json(read_file(file), file.string());
  } else {
    json_fail(c, "robot", "expected a builtin name or {\"file\": ...}");
  }

  if (const json* fx = optional_field(c, root, "", "fixture")) {
    const std::string p = "fixture";
    cfg.proxy.m = number_or(c, *fx, p, "m", cfg.proxy.m);
    require_positive(c, cfg.proxy.m, "fixture.m");
    cfg.proxy.b = number_or(c, *fx, p, "b", cfg.proxy.b);
    require_positive(c, cfg.proxy.b, "fixture.b");
    cfg.proxy.f_virtual = number_or(c, *fx, p, "F_virtual", cfg.proxy.f_virtual);
    cfg.proxy.path_coupling = bool_or(c, *fx, p, "path_coupling", cfg.proxy.path_coupling);
    auto& el = cfg.gains.elastic;
    el.kappa = number_or(c, *fx, p, "kappa", el.kappa);
    require_positive(c, el.kappa, "fixture.kappa");
    el.chi = number_or(c, *fx, p, "chi", el.chi);
    require_positive(c, el.chi, "fixture.chi");
    el.delta = number_or(c, *fx, p, "delta", el.delta);
    require_positive(c, el.delta, "fixture.delta");
    cfg.nominal_mass = number_or(c, *fx, p, "nominal_mass", cfg.nominal_mass);
    require_positive(c, cfg.nominal_mass, "fixture.nominal_mass");
    if (const json* kd = optional_field(c, *fx, p, "K_D")) {
      el.K_D = damping_from_json(c, *kd, "fixture.K_D");
      cfg.auto_task_damping = false;
      try {
        el.validate();
      } catch (const InvalidArgument& e) {
        json_fail(c, "fixture.K_D", e.what());
      }
    }
  }

  if (const json* g = optional_field(c, root, "", "gains")) {
    const std::string p = "gains";
    auto& gains = cfg.gains;
    gains.k0 = number_or(c, *g, p, "k0", gains.k0);
    require_nonnegative(c, gains.k0, "gains.k0");
    gains.nullspace_damping = number_or(c, *g, p, "nullspace_damping", gains.nullspace_damping);
    require_nonnegative(c, gains.nullspace_damping, "gains.nullspace_damping");
    gains.orientation_stiffness = number_or(c, *g, p, "orientation_stiffness", gains.orientation_stiffness);
    require_positive(c, gains.orientation_stiffness, "gains.orientation_stiffness");
    gains.orientation_damping = number_or(c, *g, p, "orientation_damping", gains.orientation_damping);
    require_positive(c, gains.orientation_damping, "gains.orientation_damping");
    const std::string form = string_or(c, *g, p, "w_form", "squared");
    if (form == "squared") {
      gains.centering = CenteringForm::kSquared;
    } else if (form == "linear") {
      gains.centering = CenteringForm::kLinear;
    } else {
      json_fail(c, "gains.w_form", "expected squared or linear");
    }
    gains.saturate = bool_or(c, *g, p, "saturate", gains.saturate);
    gains.guard_fraction = number_or(c, *g, p, "guard_fraction", gains.guard_fraction);
    if (!(gains.guard_fraction > 0.0 && gains.guard_fraction <= 1.0)) {
      json_fail(c, "gains.guard_fraction", "must lie in (0, 1]");
    }
  }

  if (const json* h = optional_field(c, root, "", "human")) {
    const std::string p = "human";
    auto& hm = cfg.human;
    hm.k_h = number_or(c, *h, p, "k_h", hm.k_h);
    require_nonnegative(c, hm.k_h, "human.k_h");
    hm.d_h = number_or(c, *h, p, "d_h", hm.d_h);
    require_nonnegative(c, hm.d_h, "human.d_h");
    hm.lead = number_or(c, *h, p, "lead", hm.lead);
    require_nonnegative(c, hm.lead, "human.lead");
    hm.speed = number_or(c, *h, p, "speed", hm.speed);
    hm.start_time = number_or(c, *h, p, "start_time", hm.start_time);
    if (const json* b = optional_field(c, *h, p, "bias")) hm.bias = vec3(c, *b, "human.bias");
    hm.noise_amplitude = number_or(c, *h, p, "noise_amplitude", hm.noise_amplitude);
    require_nonnegative(c, hm.noise_amplitude, "human.noise_amplitude");
    hm.tangential_noise_amplitude =
        number_or(c, *h, p, "tangential_noise_amplitude", hm.tangential_noise_amplitude);
    require_nonnegative(c, hm.tangential_noise_amplitude, "human.tangential_noise_amplitude");
    hm.noise_min_hz = number_or(c, *h, p, "noise_min_hz", hm.noise_min_hz);
    require_positive(c, hm.noise_min_hz, "human.noise_min_hz");
    hm.noise_max_hz = number_or(c, *h, p, "noise_max_hz", hm.noise_max_hz);
    if (!(hm.noise_max_hz >= hm.noise_min_hz)) json_fail(c, "human.noise_max_hz", "must be >= noise_min_hz");
    const double comps = number_or(c, *h, p, "noise_components", hm.noise_components);
    if (!(comps >= 1.0) || comps != std::floor(comps)) json_fail(c, "human.noise_components", "must be an integer >= 1");
    hm.noise_components = static_cast<int>(comps);
  }

  cfg.path = load_config_path(c, require(c, root, "", "path"), base_dir);

  if (const json* o = optional_field(c, root, "", "orientation")) {
    const auto q = number_array(c, *o, "orientation", 4);
    Quat quat(q[0], q[1], q[2], q[3]);
    if (!(quat.norm() > 0.0)) json_fail(c, "orientation", "quaternion must be non-zero");
    cfg.orientation = quat.normalized();
  }
  if (const json* q0 = optional_field(c, root, "", "q0")) {
    cfg.q0 = vecx(c, *q0, "q0");
    if (cfg.q0->size() != cfg.chain.dof()) json_fail(c, "q0", "size does not match the robot");
  }
  if (const json* seeds = optional_field(c, root, "", "ik_seeds")) {
    if (!seeds->is_array()) json_fail(c, "ik_seeds", "expected an array of joint vectors");
    for (size_t i = 0; i < seeds->size(); ++i) {
      VecX s = vecx(c, (*seeds)[i], index_path("ik_seeds", i));
      if (s.size() != cfg.chain.dof()) json_fail(c, index_path("ik_seeds", i), "size does not match the robot");
      cfg.ik_seeds.push_back(std::move(s));
    }
  }
  cfg.initial_s = number_or(c, root, "", "initial_s", cfg.initial_s);
  if (!(cfg.initial_s >= 0.0 && cfg.initial_s <= cfg.path.length())) {
    json_fail(c, "initial_s", "must lie in [0, path length]");
  }
  cfg.measurement_noise = number_or(c, root, "", "measurement_noise", cfg.measurement_noise);
  require_nonnegative(c, cfg.measurement_noise, "measurement_noise");
  cfg.dt = number_or(c, root, "", "dt", cfg.dt);
  require_positive(c, cfg.dt, "dt");
  cfg.duration = number_or(c, root, "", "duration", cfg.duration);
  require_positive(c, cfg.duration, "duration");
  if (const json* s = optional_field(c, root, "", "seed")) {
    if (!s->is_number_unsigned()) json_fail(c, "seed", "expected a non-negative integer");
    cfg.seed = s->get<std::uint64_t>();
  }
  cfg.stop_on_completion = bool_or(c, root, "", "stop_on_completion", cfg.stop_on_completion);

  if (const json* sw = optional_field(c, root, "", "sweep")) {
    SweepSpec spec;
    spec.chi = positive_list(c, *sw, "sweep", "chi");
    spec.delta = positive_list(c, *sw, "sweep", "delta");
    const double reps = number_or(c, *sw, "sweep", "repetitions", spec.repetitions);
    if (!(reps >= 1.0) || reps != std::floor(reps)) json_fail(c, "sweep.repetitions", "must be an integer >= 1");
    spec.repetitions = static_cast<int>(reps);
    spec.seed = cfg.seed;
    if (const json* s = optional_field(c, *sw, "sweep", "seed")) {
      if (!s->is_number_unsigned()) json_fail(c, "sweep.seed", "expected a non-negative integer");
      spec.seed = s->get<std::uint64_t>();
    }
    const double th = number_or(c, *sw, "sweep", "threads", spec.threads);
    if (!(th >= 0.0) || th != std::floor(th)) json_fail(c, "sweep.threads", "must be an integer >= 0");
    spec.threads = static_cast<int>(th);
    out.sweep = spec;
  }

  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    json_fail(c, "", e.what());
  }
  return out;
}

LoadedConfig read_sim_config(const fs::path& file) {
  const fs::path base = file.has_parent_path() ? file.parent_path() : fs::path(".");
  return parse_sim_config(read_file(file), base, file.string());
}

// ------------------------------------------------------------------ traces

std::vector<std::string> trace_columns(int dof) {
  std::vector<std::string> cols{"t"};
  auto joints = [&](const std::string& name) {
    for (int i = 0; i < dof; ++i) cols.push_back(name + "_" + std::to_string(i));
  };
  auto vec = [&](const std::string& name) {
    for (const char* a : {"x", "y", "z"}) cols.push_back(name + "_" + a);
  };
  joints("q");
  joints("qdot");
  vec("x");
  vec("xdot");
  vec("xd");
  cols.push_back("s");
  cols.push_back("sdot");
  vec("Fh");
  cols.push_back("F_par");
  vec("xpar");
  vec("xperp");
  vec("Fel");
  joints("tau");
  cols.push_back("S_r");
  vec("tangent");
  cols.push_back("U_el");
  cols.push_back("dissipation");
  return cols;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  const int dof = trace.rows.empty() ? 0 : static_cast<int>(trace.rows.front().q.size());
  out << join(trace_columns(dof)) << '\n';
  std::string line;
  for (const auto& r : trace.rows) {
    line.clear();
    auto put = [&](double v) {
      if (!line.empty()) line += ',';
      line += format_double(v);
    };
    auto put_vec = [&](const auto& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) put(v[i]);
    };
    put(r.t);
    put_vec(r.q);
    put_vec(r.qdot);
    put_vec(r.x);
    put_vec(r.xdot);
    put_vec(r.x_d);
    put(r.s);
    put(r.sdot);
    put_vec(r.f_h);
    put(r.f_par);
    put_vec(r.x_par);
    put_vec(r.x_perp);
    put_vec(r.f_el);
    put_vec(r.tau);
    put(r.storage);
    put_vec(r.tangent);
    put(r.u_el);
    put(r.dissipation);
    out << line << '\n';
  }
}

SimTrace parse_trace_csv(std::istream& in, const std::string& source) {
  std::string line;
  long number = 0;
  if (!next_line(in, line, number)) csv_fail(source, number, "empty trace");
  const auto header = split_csv(line);
  int dof = 0;
  while (std::find(header.begin(), header.end(), "q_" + std::to_string(dof)) != header.end()) ++dof;
  const auto expected = trace_columns(dof);
  if (header != expected) csv_fail(source, number, "unexpected trace header");
  SimTrace trace;
  while (next_line(in, line, number)) {
    const auto cells = split_csv(line);
    if (cells.size() != expected.size()) {
      csv_fail(source, number, "expected " + std::to_string(expected.size()) + " columns, got " +
                                   std::to_string(cells.size()));
    }
    size_t k = 0;
    auto get = [&]() {
      const double v = parse_number(cells[k], source, number, expected[k]);
      ++k;
      return v;
    };
    auto get_vec = [&](auto& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = get();
    };
    TraceRow r;
    r.q.resize(dof);
    r.qdot.resize(dof);
    r.tau.resize(dof);
    r.t = get();
    get_vec(r.q);
    get_vec(r.qdot);
    get_vec(r.x);
    get_vec(r.xdot);
    get_vec(r.x_d);
    r.s = get();
    r.sdot = get();
    get_vec(r.f_h);
    r.f_par = get();
    get_vec(r.x_par);
    get_vec(r.x_perp);
    get_vec(r.f_el);
    get_vec(r.tau);
    r.storage = get();
    get_vec(r.tangent);
    r.u_el = get();
    r.dissipation = get();
    trace.rows.push_back(std::move(r));
  }
  if (trace.rows.size() >= 2) trace.dt = trace.rows[1].t - trace.rows[0].t;
  return trace;
}

// ----------------------------------------------------------------- metrics

namespace {

json dist_to_json(const Distribution& d) {
  return {{"min", num(d.min)},       {"q1", num(d.q1)},   {"median", num(d.median)},
          {"q3", num(d.q3)},         {"max", num(d.max)}, {"mean", num(d.mean)},
          {"count", d.count}};
}

Distribution dist_from_json(const Ctx& c, const json& v, const std::string& path) {
  if (!v.is_object()) json_fail(c, path, "expected an object");
  Distribution d;
  d.min = num_or_nan(require(c, v, path, "min"));
  d.q1 = num_or_nan(require(c, v, path, "q1"));
  d.median = num_or_nan(require(c, v, path, "median"));
  d.q3 = num_or_nan(require(c, v, path, "q3"));
  d.max = num_or_nan(require(c, v, path, "max"));
  d.mean = num_or_nan(require(c, v, path, "mean"));
  d.count = require(c, v, path, "count").get<std::size_t>();
  return d;
}

std::optional<EventKind> event_kind(std::string_view name) {
  for (auto k : {EventKind::kProxyClamp, EventKind::kTorqueSaturation, EventKind::kJointLimit,
                 EventKind::kDegradedInverse, EventKind::kCompleted, EventKind::kChannelViolation,
                 EventKind::kNumericalFault}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

}  // namespace

std::string metrics_to_json(const MetricsRecord& rec) {
  const auto& m = rec.metrics;
  const auto& e = rec.energy;
  json j;
  j["schema_version"] = kSchemaVersion;
  j["deviation_perp_m"] = dist_to_json(m.deviation_perp);
  j["force_perp_N"] = dist_to_json(m.force_perp);
  j["human_force_perp_N"] = dist_to_json(m.human_force_perp);
  j["f_par_N"] = dist_to_json(m.f_par);
  j["abs_f_par_N"] = dist_to_json(m.abs_f_par);
  j["peak_force_perp_N"] = num(m.peak_force_perp);
  j["mean_f_par_N"] = num(m.mean_f_par);
  j["mean_abs_f_par_N"] = num(m.mean_abs_f_par);
  j["completion_time_s"] = m.completion_time ? num(*m.completion_time) : json(nullptr);
  j["simulated_time_s"] = num(m.simulated_time);
  j["faulted"] = m.faulted;
  j["energy"] = {{"max_residual_J", num(e.max_residual)}, {"storage_change_J", num(e.storage_change)},
                 {"supplied_J", num(e.supplied)},         {"dissipated_J", num(e.dissipated)},
                 {"duration_s", num(e.duration)},         {"tolerance_J", num(e.tolerance)},
                 {"passive", e.passive}};
  j["fault"] = rec.fault ? json(*rec.fault) : json(nullptr);
  json events = json::array();
  for (const auto& ev : rec.events) {
    events.push_back({{"t", ev.t}, {"tick", ev.tick}, {"kind", std::string(to_string(ev.kind))},
                      {"detail", ev.detail}});
  }
  j["events"] = events;
  return j.dump(1) + "\n";
}

MetricsRecord metrics_from_json(const std::string& text, const std::string& source) {
  const Ctx c{source};
  const json root = parse_json(text, c);
  check_schema(c, root);
  MetricsRecord rec;
  auto& m = rec.metrics;
  m.deviation_perp = dist_from_json(c, require(c, root, "", "deviation_perp_m"), "deviation_perp_m");
  m.force_perp = dist_from_json(c, require(c, root, "", "force_perp_N"), "force_perp_N");
  m.human_force_perp = dist_from_json(c, require(c, root, "", "human_force_perp_N"), "human_force_perp_N");
  m.f_par = dist_from_json(c, require(c, root, "", "f_par_N"), "f_par_N");
  m.abs_f_par = dist_from_json(c, require(c, root, "", "abs_f_par_N"), "abs_f_par_N");
  m.peak_force_perp = num_or_nan(require(c, root, "", "peak_force_perp_N"));
  m.mean_f_par = num_or_nan(require(c, root, "", "mean_f_par_N"));
  m.mean_abs_f_par = num_or_nan(require(c, root, "", "mean_abs_f_par_N"));
  const json& ct = require(c, root, "", "completion_time_s");
  if (ct.is_number()) m.completion_time = ct.get<double>();
  m.simulated_time = num_or_nan(require(c, root, "", "simulated_time_s"));
  m.faulted = require(c, root, "", "faulted").get<bool>();
  const json& e = require(c, root, "", "energy");
  rec.energy.max_residual = num_or_nan(require(c, e, "energy", "max_residual_J"));
  rec.energy.storage_change = num_or_nan(require(c, e, "energy", "storage_change_J"));
  rec.energy.supplied = num_or_nan(require(c, e, "energy", "supplied_J"));
  rec.energy.dissipated = num_or_nan(require(c, e, "energy", "dissipated_J"));
  rec.energy.duration = num_or_nan(require(c, e, "energy", "duration_s"));
  rec.energy.tolerance = num_or_nan(require(c, e, "energy", "tolerance_J"));
  rec.energy.passive = require(c, e, "energy", "passive").get<bool>();
  const json& f = require(c, root, "", "fault");
  if (f.is_string()) rec.fault = f.get<std::string>();
  const json& events = require(c, root, "", "events");
  for (size_t i = 0; i < events.size(); ++i) {
    const std::string p = index_path("events", i);
    SimEvent ev;
    ev.t = number(c, events[i], p, "t");
    ev.tick = require(c, events[i], p, "tick").get<long>();
    const auto kind = event_kind(require(c, events[i], p, "kind").get<std::string>());
    if (!kind) json_fail(c, child(p, "kind"), "unknown event kind");
    ev.kind = *kind;
    ev.detail = string_or(c, events[i], p, "detail", "");
    rec.events.push_back(std::move(ev));
  }
  return rec;
}

// ------------------------------------------------------------------- sweeps

namespace {

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{
      "row",          "chi",          "delta",         "repetition",     "seed",
      "runs",         "faults",       "mean_dev_m",    "max_dev_m",      "peak_force_N",
      "max_peak_force_N", "mean_f_par_N", "mean_abs_f_par_N", "completion_s", "energy_residual_J"};
  return cols;
}

std::string opt_double(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << join(sweep_columns()) << '\n';
  for (const auto& run : result.runs) {
    const auto& m = run.metrics;
    const double completion = m.completion_time ? *m.completion_time : std::nan("");
    out << join({"run", format_double(run.chi), format_double(run.delta),
                 std::to_string(run.repetition), std::to_string(run.seed), "1",
                 run.fault ? "1" : "0", opt_double(m.deviation_perp.mean),
                 opt_double(m.deviation_perp.max), opt_double(m.peak_force_perp),
                 opt_double(m.peak_force_perp), opt_double(m.mean_f_par),
                 opt_double(m.mean_abs_f_par), opt_double(completion),
                 opt_double(run.energy.max_residual)})
        << '\n';
  }
  for (const auto& cell : result.cells) {
    out << join({"cell", format_double(cell.chi), format_double(cell.delta), "", "",
                 std::to_string(cell.runs), std::to_string(cell.faults),
                 opt_double(cell.mean_deviation), opt_double(cell.max_deviation),
                 opt_double(cell.mean_peak_force), opt_double(cell.max_peak_force),
                 opt_double(cell.mean_f_par), opt_double(cell.mean_abs_f_par),
                 opt_double(cell.mean_completion_time), opt_double(cell.max_energy_residual)})
        << '\n';
  }
}

SweepResult parse_sweep_csv(std::istream& in, const std::string& source) {
  std::string line;
  long number = 0;
  if (!next_line(in, line, number)) csv_fail(source, number, "empty sweep file");
  const auto& cols = sweep_columns();
  if (split_csv(line) != cols) csv_fail(source, number, "unexpected sweep header");
  SweepResult result;
  while (next_line(in, line, number)) {
    const auto cells = split_csv(line);
    if (cells.size() != cols.size()) csv_fail(source, number, "expected " + std::to_string(cols.size()) + " columns");
    auto val = [&](size_t i) {
      return cells[i].empty() ? std::nan("") : parse_number(cells[i], source, number, cols[i]);
    };
    if (cells[0] == "run") {
      SweepRun run;
      run.chi = val(1);
      run.delta = val(2);
      run.repetition = static_cast<int>(val(3));
      run.seed = std::stoull(cells[4]);
      if (cells[6] == "1") run.fault = "fault";
      run.metrics.deviation_perp.mean = val(7);
      run.metrics.deviation_perp.max = val(8);
      run.metrics.peak_force_perp = val(9);
      run.metrics.mean_f_par = val(11);
      run.metrics.mean_abs_f_par = val(12);
      if (!cells[13].empty()) run.metrics.completion_time = val(13);
      run.metrics.faulted = run.fault.has_value();
      run.energy.max_residual = val(14);
      result.runs.push_back(std::move(run));
    } else if (cells[0] == "cell") {
      SweepCell cell;
      cell.chi = val(1);
      cell.delta = val(2);
      cell.runs = static_cast<int>(val(5));
      cell.faults = static_cast<int>(val(6));
      cell.mean_deviation = val(7);
      cell.max_deviation = val(8);
      cell.mean_peak_force = val(9);
      cell.max_peak_force = val(10);
      cell.mean_f_par = val(11);
      cell.mean_abs_f_par = val(12);
      cell.mean_completion_time = val(13);
      cell.max_energy_residual = val(14);
      result.cells.push_back(cell);
    } else {
      csv_fail(source, number, "row kind must be run or cell, got '" + cells[0] + "'");
    }
  }
  return result;
}

// ---------------------------------------------------------------- payload maps

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  // avoid "-0.000000"
  if (std::string(buf) == "-0.000000") return "0.000000";
  return buf;
}

}  // namespace

void write_map_csv(std::ostream& out, const PayloadMap& map) {
  out << "x,y,z,payload_N\n";
  for (const auto& p : map) {
    out << fixed6(p.position.x()) << ',' << fixed6(p.position.y()) << ',' << fixed6(p.position.z())
        << ',';
    if (p.value) out << (std::isinf(*p.value) ? std::string("inf") : fixed6(*p.value));
    out << '\n';
  }
}

PayloadMap parse_map_csv(std::istream& in, const std::string& source) {
  std::string line;
  long number = 0;
  if (!next_line(in, line, number)) csv_fail(source, number, "empty map file");
  if (split_csv(line) != std::vector<std::string>{"x", "y", "z", "payload_N"}) {
    csv_fail(source, number, "expected header 'x,y,z,payload_N'");
  }
  PayloadMap map;
  while (next_line(in, line, number)) {
    const auto cells = split_csv(line);
    if (cells.size() != 4) csv_fail(source, number, "expected 4 columns");
    PayloadSample s;
    s.position = Vec3(parse_number(cells[0], source, number, "x"),
                      parse_number(cells[1], source, number, "y"),
                      parse_number(cells[2], source, number, "z"));
    if (!cells[3].empty()) s.value = parse_number(cells[3], source, number, "payload_N");
    map.push_back(s);
  }
  return map;
}

// ---------------------------------------------------------------- placement

std::string placement_to_json(const PlacementResult& r) {
  json j;
  j["tx"] = r.placement.tx;
  j["ty"] = r.placement.ty;
  j["theta"] = r.placement.theta;
  j["orientation"] = std::string(to_string(r.orientation));
  j["pi_opt"] = r.pi_opt ? num(*r.pi_opt) : json(nullptr);
  j["feasible"] = r.pi_opt.has_value();
  j["evaluated"] = r.evaluated;
  return j.dump(1) + "\n";
}

PlacementResult placement_from_json(const std::string& text, const std::string& source) {
  const Ctx c{source};
  const json root = parse_json(text, c);
  PlacementResult r;
  r.placement.tx = number(c, root, "", "tx");
  r.placement.ty = number(c, root, "", "ty");
  r.placement.theta = number(c, root, "", "theta");
  const json& o = require(c, root, "", "orientation");
  if (!o.is_string()) json_fail(c, "orientation", "expected a string");
  try {
    r.orientation = parse_flange_orientation(o.get<std::string>());
  } catch (const InvalidArgument& e) {
    json_fail(c, "orientation", e.what());
  }
  const json& pi = require(c, root, "", "pi_opt");
  if (pi.is_number()) r.pi_opt = pi.get<double>();
  r.evaluated = static_cast<int>(number_or(c, root, "", "evaluated", 0));
  return r;
}

// ---------------------------------------------------------------- manifests

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = m.command;
  j["config_hash"] = m.config_hash;
  j["tool_version"] = m.tool_version;
  j["seed"] = m.seed;
  j["started_utc"] = m.started_utc;
  j["finished_utc"] = m.finished_utc;
  j["outputs"] = m.outputs;
  return j.dump(1) + "\n";
}

RunManifest manifest_from_json(const std::string& text, const std::string& source) {
  const Ctx c{source};
  const json root = parse_json(text, c);
  check_schema(c, root);
  RunManifest m;
  m.command = string_or(c, root, "", "command", "");
  m.config_hash = string_or(c, root, "", "config_hash", "");
  m.tool_version = string_or(c, root, "", "tool_version", "");
  const json& seed = require(c, root, "", "seed");
  if (!seed.is_number_unsigned()) json_fail(c, "seed", "expected a non-negative integer");
  m.seed = seed.get<std::uint64_t>();
  m.started_utc = string_or(c, root, "", "started_utc", "");
  m.finished_utc = string_or(c, root, "", "finished_utc", "");
  const json& outs = require(c, root, "", "outputs");
  if (!outs.is_array()) json_fail(c, "outputs", "expected an array");
  for (size_t i = 0; i < outs.size(); ++i) {
    if (!outs[i].is_string()) json_fail(c, index_path("outputs", i), "expected a string");
    m.outputs.push_back(outs[i].get<std::string>());
  }
  return m;
}

std::vector<Vec3> sample_path_points(const PathCurve& path, int n) {
  if (n < 1) throw InvalidArgument("sample_path_points: n must be >= 1");
  std::vector<Vec3> pts;
  const double l = path.length();
  if (n == 1) return {path.eval(0.0).position};
  for (int i = 0; i < n; ++i) pts.push_back(path.eval(l * i / (n - 1)).position);
  return pts;
}

}  // namespace rvf::io
