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

// Closed-loop simulation: scripted human, guiding fixture, impedance
// controller and rigid-body arm, with an energy monitor and run metrics.

#ifndef RVF_SIM_HARNESS_HPP_
#define RVF_SIM_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rvf/common.hpp"
#include "rvf/impedance_control.hpp"
#include "rvf/robot_model.hpp"
#include "rvf/spline_path.hpp"
#include "rvf/virtual_fixture.hpp"

namespace rvf {

/// Spring-damper hand pulling the end effector toward a goal point on the
/// path. The goal sits `lead` ahead of the proxy but never ahead of the
/// schedule speed * (t - start_time); past the end of the path it continues
/// along the end tangent. Noise is a seeded sum of sinusoids: a lateral part
/// orthogonal to the path tangent at the proxy and a smaller tangential part.
struct HumanModel {
  double k_h = 50.0;        // N/m
  double d_h = 5.0;         // N s/m
  double lead = 0.1;        // m
  double speed = 0.05;      // m/s; <= 0 disables the schedule
  double start_time = 0.0;  // s
  Vec3 bias = Vec3::Zero(); // N, world frame
  double noise_amplitude = 1.5;             // N rms per axis, orthogonal
  double tangential_noise_amplitude = 0.3;  // N rms along the tangent
  double noise_min_hz = 0.2;
  double noise_max_hz = 2.0;
  int noise_components = 8;
  void validate() const;
};

/// A HumanModel bound to a noise realization.
class ScriptedHuman {
 public:
  ScriptedHuman(HumanModel model, std::uint64_t seed);

  /// Arc length of the goal point.
  double goal_arclength(double s, double t) const;
  /// Goal position, extended linearly beyond the end of the path.
  Vec3 goal_position(const PathCurve& path, double s, double t) const;
  /// Raw noise channels: 3 lateral axes and the tangential scalar.
  Eigen::Vector4d noise(double t) const;
  /// Noise force given the path tangent at the proxy.
  Vec3 noise_force(const Vec3& tangent, double t) const;
  Vec3 force(const Vec3& x, const Vec3& xdot, const PathCurve& path, double s,
             double t) const;

  const HumanModel& model() const { return model_; }

 private:
  struct Component {
    double omega;
    double phase;
  };
  HumanModel model_;
  double scale_ = 0.0;  // 1 / rms of a unit sum of components
  std::vector<Component> components_[4];
};

/// F_h = k_h (x_goal - x) - d_h xd + bias + noise.
Vec3 human_force(const HumanModel& model, const Vec3& x, const Vec3& xdot,
                 const PathCurve& path, double s, double t,
                 std::uint64_t seed = 0);

struct SimConfig {
  KinematicChain chain;
  PathCurve path;
  VirtualMassParams proxy;
  ControlGains gains;
  /// Replace K_D by default_task_damping(chi, nominal_mass).
  bool auto_task_damping = true;
  double nominal_mass = 3.0;  // kg
  HumanModel human;
  /// Constant end-effector orientation to hold.
  Quat orientation = Quat(Eigen::AngleAxisd(M_PI, Vec3::UnitX()));
  /// Start posture. Solved by IK at the path start when empty.
  std::optional<VecX> q0;
  std::vector<VecX> ik_seeds;
  double initial_s = 0.0;        // m
  /// Zero-mean gaussian noise on the measured force (N, per axis).
  double measurement_noise = 0.0;
  double dt = 1e-3;              // s
  double duration = 30.0;        // s
  std::uint64_t seed = 1;
  bool stop_on_completion = true;

  void validate() const;
  /// Gains with the automatic task damping applied.
  ControlGains effective_gains() const;
};

enum class EventKind {
  kProxyClamp,
  kTorqueSaturation,
  kJointLimit,
  kDegradedInverse,
  kCompleted,
  kChannelViolation,
  kNumericalFault,
};

std::string_view to_string(EventKind kind);

struct SimEvent {
  double t = 0.0;
  long tick = 0;
  EventKind kind = EventKind::kCompleted;
  std::string detail;
};

struct TraceRow {
  double t = 0.0;
  VecX q;
  VecX qdot;
  Vec3 x = Vec3::Zero();
  Vec3 xdot = Vec3::Zero();
  Vec3 x_d = Vec3::Zero();
  double s = 0.0;
  double sdot = 0.0;
  Vec3 f_h = Vec3::Zero();
  double f_par = 0.0;
  Vec3 x_par = Vec3::Zero();
  Vec3 x_perp = Vec3::Zero();
  Vec3 f_el = Vec3::Zero();
  VecX tau;
  double storage = 0.0;      // S_r
  Vec3 tangent = Vec3::UnitX();
  double u_el = 0.0;
  double dissipation = 0.0;  // b sd^2 + e_dot^T D e_dot, W
};

struct SimTrace {
  double dt = 0.0;
  std::vector<TraceRow> rows;
  std::vector<SimEvent> events;
  std::optional<std::string> fault;
  std::optional<double> completion_time;
  double path_length = 0.0;
};

SimTrace simulate_session(const SimConfig& config);

struct EnergyReport {
  /// max over prefixes of S(T) - S(0) - supply(0, T), J.
  double max_residual = 0.0;
  double storage_change = 0.0;  // S(end) - S(0), J
  double supplied = 0.0;        // sum F_h^T dx, J
  double dissipated = 0.0;      // integral of the dissipation column, J
  double duration = 0.0;        // s
  /// 1e-3 J per simulated second.
  double tolerance = 0.0;
  bool passive = true;
};

inline constexpr double kEnergyTolerancePerSecond = 1e-3;

EnergyReport passivity_report(const SimTrace& trace);

struct Distribution {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  double mean = 0.0;
  std::size_t count = 0;
};

Distribution summarize(std::vector<double> values);

struct SimMetrics {
  Distribution deviation_perp;     // |x_perp|, m
  Distribution force_perp;         // |F_el,perp|, N
  Distribution human_force_perp;   // |F_h,perp|, N
  Distribution f_par;              // signed F_par, N
  Distribution abs_f_par;          // |F_par|, N
  double peak_force_perp = 0.0;
  double mean_f_par = 0.0;
  double mean_abs_f_par = 0.0;
  std::optional<double> completion_time;
  double simulated_time = 0.0;
  bool faulted = false;
};

/// Metrics over the rows up to completion (all rows when not completed).
SimMetrics compute_metrics(const SimTrace& trace);

struct SweepSpec {
  std::vector<double> chi{100.0, 500.0, 2500.0};
  std::vector<double> delta{0.01, 0.02, 0.03};
  int repetitions = 10;
  std::uint64_t seed = 1;
  /// Worker threads; 0 picks the hardware concurrency.
  int threads = 1;
};

/// Seed of repetition r; identical across cells.
std::uint64_t repetition_seed(std::uint64_t base, int repetition);

struct SweepRun {
  double chi = 0.0;
  double delta = 0.0;
  int repetition = 0;
  std::uint64_t seed = 0;
  SimMetrics metrics;
  EnergyReport energy;
  std::optional<std::string> fault;
};

struct SweepCell {
  double chi = 0.0;
  double delta = 0.0;
  int runs = 0;
  int faults = 0;
  double mean_deviation = 0.0;      // mean over runs of the run means
  double max_deviation = 0.0;
  double mean_peak_force = 0.0;
  double max_peak_force = 0.0;
  double mean_f_par = 0.0;
  double mean_abs_f_par = 0.0;
  double mean_completion_time = 0.0;  // over completed runs
  double max_energy_residual = 0.0;
};

struct SweepResult {
  std::vector<SweepRun> runs;    // cell-major, repetition-minor
  std::vector<SweepCell> cells;  // chi-major, delta-minor
};

/// Runs every (chi, delta) cell `repetitions` times. Faults are recorded
/// and the sweep continues. Output order does not depend on threading.
SweepResult sweep(const SimConfig& base, const SweepSpec& spec);

/// Demonstration of a self-crossing figure in the x-z plane (nodal cubic),
/// n samples with timestamps, centred at `center`.
std::vector<DemoSample> crossing_figure_demo(int n = 200,
                                             const Vec3& center = Vec3(0.45, 0.0, 0.45));

/// Straight demonstration from a to b.
std::vector<DemoSample> line_demo(const Vec3& a, const Vec3& b, int n = 50);

}  // namespace rvf

#endif  // RVF_SIM_HARNESS_HPP_
