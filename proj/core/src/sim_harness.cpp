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

#include "rvf/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "rvf/robot_library.hpp"

namespace rvf {

void HumanModel::validate() const {
  if (!(k_h >= 0.0)) throw InvalidArgument("human k_h must be >= 0");
  if (!(d_h >= 0.0)) throw InvalidArgument("human d_h must be >= 0");
  if (!(lead >= 0.0)) throw InvalidArgument("human lead must be >= 0");
  if (!std::isfinite(speed) || !std::isfinite(start_time)) {
    throw InvalidArgument("human schedule must be finite");
  }
  if (!bias.allFinite()) throw InvalidArgument("human bias must be finite");
  if (!(noise_amplitude >= 0.0) || !(tangential_noise_amplitude >= 0.0)) {
    throw InvalidArgument("noise amplitudes must be >= 0");
  }
  if (noise_amplitude > 0.0 || tangential_noise_amplitude > 0.0) {
    if (!(noise_min_hz > 0.0) || !(noise_max_hz >= noise_min_hz)) {
      throw InvalidArgument("noise band must satisfy 0 < min_hz <= max_hz");
    }
    if (noise_components < 1) throw InvalidArgument("noise needs >= 1 component");
  }
}

ScriptedHuman::ScriptedHuman(HumanModel model, std::uint64_t seed)
    : model_(std::move(model)) {
  model_.validate();
  if (model_.noise_amplitude <= 0.0 && model_.tangential_noise_amplitude <= 0.0) return;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(model_.noise_min_hz, model_.noise_max_hz);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  for (auto& channel : components_) {
    for (int i = 0; i < model_.noise_components; ++i) {
      const double f = freq(rng);
      channel.push_back({2.0 * M_PI * f, phase(rng)});
    }
  }
  // rms of a sum of K unit sinusoids is sqrt(K / 2)
  scale_ = 1.0 / std::sqrt(0.5 * model_.noise_components);
}

double ScriptedHuman::goal_arclength(double s, double t) const {
  double goal = s + model_.lead;
  if (model_.speed > 0.0) {
    goal = std::min(goal, model_.speed * std::max(0.0, t - model_.start_time));
  }
  return goal;
}

Vec3 ScriptedHuman::goal_position(const PathCurve& path, double s, double t) const {
  const double l = path.length();
  const double g = goal_arclength(s, t);
  if (g <= l) return path.eval(std::max(0.0, g)).position;
  const PathPoint end = path.eval(l);
  return end.position + end.tangent * (g - l);
}

Eigen::Vector4d ScriptedHuman::noise(double t) const {
  Eigen::Vector4d n = Eigen::Vector4d::Zero();
  if (scale_ == 0.0) return n;
  for (int a = 0; a < 4; ++a) {
    double sum = 0.0;
    for (const auto& c : components_[a]) sum += std::sin(c.omega * t + c.phase);
    n[a] = scale_ * sum;
  }
  return n;
}

Vec3 ScriptedHuman::noise_force(const Vec3& tangent, double t) const {
  if (scale_ == 0.0) return Vec3::Zero();
  const Eigen::Vector4d n = noise(t);
  const Vec3 lateral = model_.noise_amplitude * n.head<3>();
  return lateral - tangent * tangent.dot(lateral) +
         tangent * (model_.tangential_noise_amplitude * n[3]);
}

Vec3 ScriptedHuman::force(const Vec3& x, const Vec3& xdot, const PathCurve& path,
                          double s, double t) const {
  Vec3 f = model_.bias - model_.d_h * xdot;
  if (scale_ != 0.0) f += noise_force(path.eval(s).tangent, t);
  if (model_.k_h > 0.0) f += model_.k_h * (goal_position(path, s, t) - x);
  return f;
}

Vec3 human_force(const HumanModel& model, const Vec3& x, const Vec3& xdot,
                 const PathCurve& path, double s, double t, std::uint64_t seed) {
  return ScriptedHuman(model, seed).force(x, xdot, path, s, t);
}

void SimConfig::validate() const {
  chain.validate();
  if (path.length() <= 0.0) throw InvalidArgument("simulation path is empty");
  proxy.validate();
  effective_gains().validate();
  human.validate();
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  if (!(duration > 0.0)) throw InvalidArgument("duration must be > 0");
  if (!(nominal_mass > 0.0)) throw InvalidArgument("nominal_mass must be > 0");
  if (!(initial_s >= 0.0 && initial_s <= path.length())) {
    throw InvalidArgument("initial_s must lie on the path");
  }
  if (!(measurement_noise >= 0.0)) throw InvalidArgument("measurement_noise must be >= 0");
  if (q0 && q0->size() != chain.dof()) throw InvalidArgument("q0 has wrong size");
}

ControlGains SimConfig::effective_gains() const {
  ControlGains g = gains;
  if (auto_task_damping) {
    g.elastic.K_D = default_task_damping(g.elastic.chi, nominal_mass);
  }
  return g;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kProxyClamp: return "proxy_clamp";
    case EventKind::kTorqueSaturation: return "torque_saturation";
    case EventKind::kJointLimit: return "joint_limit";
    case EventKind::kDegradedInverse: return "degraded_inverse";
    case EventKind::kCompleted: return "completed";
    case EventKind::kChannelViolation: return "channel_violation";
    case EventKind::kNumericalFault: return "numerical_fault";
  }
  return "unknown";
}

namespace {

VecX initial_posture(const SimConfig& cfg) {
  if (cfg.q0) return *cfg.q0;
  std::vector<VecX> seeds = cfg.ik_seeds;
  if (seeds.empty() && cfg.chain.name == "panda7") seeds.push_back(robots::panda7_ready());
  TaskPose target;
  target.position = cfg.path.eval(cfg.initial_s).position;
  target.orientation = cfg.orientation;
  IkOptions opt;
  opt.position_tolerance = 1e-9;
  opt.orientation_tolerance = 1e-8;
  opt.max_iterations = 500;
  auto q = inverse_kinematics_multi(cfg.chain, target, seeds, opt);
  if (!q) throw InvalidArgument("path start is unreachable at the requested orientation");
  return *q;
}

std::string joint_list(const std::vector<int>& joints) {
  std::string s;
  for (int j : joints) {
    if (!s.empty()) s += ",";
    s += std::to_string(j);
  }
  return s;
}

}  // namespace

SimTrace simulate_session(const SimConfig& cfg) {
  cfg.validate();
  const KinematicChain& chain = cfg.chain;
  const PathCurve& path = cfg.path;
  const ControlGains gains = cfg.effective_gains();
  ImpedanceController controller(chain, gains, cfg.dt);
  const ScriptedHuman human(cfg.human, cfg.seed);
  std::mt19937_64 meas_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Mat6 D = Mat6::Zero();
  D.topLeftCorner<3, 3>() = gains.elastic.K_D;
  D.bottomRightCorner<3, 3>() = Mat3::Identity() * gains.orientation_damping;

  const double l = path.length();
  RobotState state;
  state.q = initial_posture(cfg);
  state.qdot = VecX::Zero(chain.dof());
  ProxyState proxy{cfg.initial_s, 0.0};

  SimTrace trace;
  trace.dt = cfg.dt;
  trace.path_length = l;
  const long ticks = std::lround(cfg.duration / cfg.dt);
  trace.rows.reserve(static_cast<size_t>(ticks + 1));
  std::vector<int> prev_saturated;
  bool prev_degraded = false;

  auto add_event = [&](long k, EventKind kind, std::string detail) {
    trace.events.push_back({k * cfg.dt, k, kind, std::move(detail)});
  };

  for (long k = 0; k <= ticks; ++k) {
    const double t = k * cfg.dt;
    try {
      const ChainFrames frames = chain_frames(chain, state.q);
      const Vec3 x = frames.end_effector.translation();
      const Mat6X J = geometric_jacobian(chain, state.q);
      const Vec3 xdot = J.topRows<3>() * state.qdot;

      const Vec3 f_h = human.force(x, xdot, path, proxy.s, t);
      Vec3 f_meas = f_h;
      if (cfg.measurement_noise > 0.0) {
        for (int a = 0; a < 3; ++a) f_meas[a] += cfg.measurement_noise * gauss(meas_rng);
      }

      const PathPoint pp = path.eval(proxy.s);
      const double f_par = tangential_force(pp.tangent, f_meas);
      double f_proxy = f_par;
      if (cfg.proxy.path_coupling) {
        const Vec3 x_tilde = x - pp.position;
        const double z = (x_tilde - pp.tangent * pp.tangent.dot(x_tilde)).norm();
        if (z < gains.guard_fraction * gains.elastic.delta) {
          f_proxy += path_coupling_force(gains.elastic, pp, x_tilde);
        }
      }
      // The reference follows the proxy as actually stepped, including a
      // stop at either end of the path.
      const ProxyStep step = step_proxy(proxy, cfg.proxy, f_proxy, cfg.dt, l);
      const double sddot = (step.state.sdot - proxy.sdot) / cfg.dt;
      const ReferenceKinematics ref = reference_kinematics(path, proxy, sddot);
      const ControlOutput out =
          controller.compute(state, to_task_reference(ref, cfg.orientation));

      if (out.saturated != prev_saturated) {
        if (!out.saturated.empty()) {
          add_event(k, EventKind::kTorqueSaturation, "joints " + joint_list(out.saturated));
        }
        prev_saturated = out.saturated;
      }
      if (out.degraded && !prev_degraded) add_event(k, EventKind::kDegradedInverse, "");
      prev_degraded = out.degraded;

      TraceRow row;
      row.t = t;
      row.q = state.q;
      row.qdot = state.qdot;
      row.x = x;
      row.xdot = xdot;
      row.x_d = ref.position;
      row.s = proxy.s;
      row.sdot = proxy.sdot;
      row.f_h = f_h;
      row.f_par = f_par;
      row.x_par = out.deviation.parallel;
      row.x_perp = out.deviation.orthogonal;
      row.f_el = out.f_el;
      row.tau = out.tau;
      row.tangent = pp.tangent;
      row.u_el = out.u_el;
      row.storage = 0.5 * cfg.proxy.m * proxy.sdot * proxy.sdot +
                    0.5 * out.e_dot.dot(out.lambda * out.e_dot) + out.u_el + out.u_rot -
                    cfg.proxy.f_virtual * proxy.s;
      row.dissipation = cfg.proxy.b * proxy.sdot * proxy.sdot + out.e_dot.dot(D * out.e_dot);
      trace.rows.push_back(std::move(row));

      if (!trace.completion_time && proxy.s >= l - 1e-4) {
        trace.completion_time = t;
        add_event(k, EventKind::kCompleted, "");
        if (cfg.stop_on_completion) break;
      }
      if (k == ticks) break;

      // Robot: M qdd = tau + J^T F_h - C qd - g, semi-implicit Euler.
      const VecX rhs = out.tau + J.topRows<3>().transpose() * f_h -
                       out.dynamics.c_qdot - out.dynamics.g;
      const VecX qdd = out.dynamics.M.llt().solve(rhs);
      if (!qdd.allFinite()) throw NumericalFault("non-finite joint acceleration");
      state.qdot += qdd * cfg.dt;
      state.q += state.qdot * cfg.dt;
      const std::vector<int> clamped = clamp_to_limits(chain, state);
      if (!clamped.empty()) add_event(k + 1, EventKind::kJointLimit, "joints " + joint_list(clamped));

      if (step.clamped) {
        add_event(k + 1, EventKind::kProxyClamp,
                  step.state.s <= 0.0 ? "start" : "end");
      }
      proxy = step.state;
      if (!state.q.allFinite() || !state.qdot.allFinite() || !std::isfinite(proxy.s)) {
        throw NumericalFault("non-finite state");
      }
    } catch (const ChannelViolation& e) {
      trace.fault = e.what();
      add_event(k, EventKind::kChannelViolation, e.what());
      break;
    } catch (const NumericalFault& e) {
      trace.fault = e.what();
      add_event(k, EventKind::kNumericalFault, e.what());
      break;
    }
  }
  return trace;
}

EnergyReport passivity_report(const SimTrace& trace) {
  EnergyReport r;
  const auto& rows = trace.rows;
  if (rows.empty()) return r;
  const double s0 = rows.front().storage;
  double supplied = 0.0;
  double dissipated = 0.0;
  for (size_t k = 1; k < rows.size(); ++k) {
    supplied += rows[k - 1].f_h.dot(rows[k].x - rows[k - 1].x);
    dissipated += rows[k - 1].dissipation * (rows[k].t - rows[k - 1].t);
    r.max_residual = std::max(r.max_residual, rows[k].storage - s0 - supplied);
  }
  r.storage_change = rows.back().storage - s0;
  r.supplied = supplied;
  r.dissipated = dissipated;
  r.duration = rows.back().t - rows.front().t;
  r.tolerance = kEnergyTolerancePerSecond * r.duration;
  r.passive = r.max_residual <= r.tolerance;
  return r;
}

Distribution summarize(std::vector<double> v) {
  Distribution d;
  d.count = v.size();
  if (v.empty()) return d;
  std::sort(v.begin(), v.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    const size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  d.min = v.front();
  d.max = v.back();
  d.q1 = quantile(0.25);
  d.median = quantile(0.5);
  d.q3 = quantile(0.75);
  double sum = 0.0;
  for (double x : v) sum += x;
  d.mean = sum / static_cast<double>(v.size());
  return d;
}

SimMetrics compute_metrics(const SimTrace& trace) {
  if (trace.rows.empty()) throw InvalidArgument("compute_metrics: empty trace");
  std::vector<double> dev, fperp, hperp, fpar, afpar;
  for (const auto& r : trace.rows) {
    if (trace.completion_time && r.t > *trace.completion_time) break;
    dev.push_back(r.x_perp.norm());
    fperp.push_back((r.f_el - r.tangent * r.tangent.dot(r.f_el)).norm());
    hperp.push_back((r.f_h - r.tangent * r.tangent.dot(r.f_h)).norm());
    fpar.push_back(r.f_par);
    afpar.push_back(std::abs(r.f_par));
  }
  SimMetrics m;
  m.deviation_perp = summarize(std::move(dev));
  m.force_perp = summarize(std::move(fperp));
  m.human_force_perp = summarize(std::move(hperp));
  m.f_par = summarize(std::move(fpar));
  m.abs_f_par = summarize(std::move(afpar));
  m.peak_force_perp = m.force_perp.max;
  m.mean_f_par = m.f_par.mean;
  m.mean_abs_f_par = m.abs_f_par.mean;
  m.completion_time = trace.completion_time;
  m.simulated_time = trace.rows.back().t;
  m.faulted = trace.fault.has_value();
  return m;
}

std::uint64_t repetition_seed(std::uint64_t base, int repetition) {
  // splitmix64
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(repetition + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SweepResult sweep(const SimConfig& base, const SweepSpec& spec) {
  if (spec.chi.empty() || spec.delta.empty() || spec.repetitions < 1) {
    throw InvalidArgument("sweep needs at least one chi, one delta and one repetition");
  }
  SweepResult result;
  for (double chi : spec.chi) {
    for (double delta : spec.delta) {
      for (int r = 0; r < spec.repetitions; ++r) {
        SweepRun run;
        run.chi = chi;
        run.delta = delta;
        run.repetition = r;
        run.seed = repetition_seed(spec.seed, r);
        result.runs.push_back(run);
      }
    }
  }
  // Validate every cell before simulating anything.
  for (const auto& run : result.runs) {
    SimConfig cfg = base;
    cfg.gains.elastic.chi = run.chi;
    cfg.gains.elastic.delta = run.delta;
    cfg.effective_gains().validate();
  }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < result.runs.size(); i = next++) {
      SweepRun& run = result.runs[i];
      SimConfig cfg = base;
      cfg.gains.elastic.chi = run.chi;
      cfg.gains.elastic.delta = run.delta;
      cfg.seed = run.seed;
      const SimTrace trace = simulate_session(cfg);
      run.fault = trace.fault;
      run.metrics = compute_metrics(trace);
      run.energy = passivity_report(trace);
    }
  };
  int threads = spec.threads > 0 ? spec.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(result.runs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const size_t reps = static_cast<size_t>(spec.repetitions);
  for (size_t c = 0; c * reps < result.runs.size(); ++c) {
    SweepCell cell;
    cell.chi = result.runs[c * reps].chi;
    cell.delta = result.runs[c * reps].delta;
    int completed = 0;
    double completion = 0.0;
    for (size_t r = 0; r < reps; ++r) {
      const SweepRun& run = result.runs[c * reps + r];
      ++cell.runs;
      if (run.fault) {
        ++cell.faults;
        continue;
      }
      const auto& m = run.metrics;
      cell.mean_deviation += m.deviation_perp.mean;
      cell.max_deviation = std::max(cell.max_deviation, m.deviation_perp.max);
      cell.mean_peak_force += m.peak_force_perp;
      cell.max_peak_force = std::max(cell.max_peak_force, m.peak_force_perp);
      cell.mean_f_par += m.mean_f_par;
      cell.mean_abs_f_par += m.mean_abs_f_par;
      cell.max_energy_residual = std::max(cell.max_energy_residual, run.energy.max_residual);
      if (m.completion_time) {
        ++completed;
        completion += *m.completion_time;
      }
    }
    const int ok = cell.runs - cell.faults;
    if (ok > 0) {
      cell.mean_deviation /= ok;
      cell.mean_peak_force /= ok;
      cell.mean_f_par /= ok;
      cell.mean_abs_f_par /= ok;
    } else {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      cell.mean_deviation = cell.mean_peak_force = cell.mean_f_par = cell.mean_abs_f_par = nan;
    }
    cell.mean_completion_time =
        completed > 0 ? completion / completed : std::numeric_limits<double>::quiet_NaN();
    result.cells.push_back(cell);
  }
  return result;
}

std::vector<DemoSample> crossing_figure_demo(int n, const Vec3& center) {
  if (n < 4) throw InvalidArgument("crossing_figure_demo needs n >= 4");
  std::vector<DemoSample> out;
  out.reserve(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double u = -1.4 + 2.8 * k / (n - 1);
    DemoSample d;
    d.t = 0.05 * k;
    d.position = center + Vec3(0.12 * (u * u - 1.0), 0.0, 0.15 * u * (u * u - 1.0));
    out.push_back(d);
  }
  return out;
}

std::vector<DemoSample> line_demo(const Vec3& a, const Vec3& b, int n) {
  if (n < 2) throw InvalidArgument("line_demo needs n >= 2");
  std::vector<DemoSample> out;
  for (int k = 0; k < n; ++k) {
    const double u = static_cast<double>(k) / (n - 1);
    out.push_back({0.05 * k, a + u * (b - a)});
  }
  return out;
}

}  // namespace rvf
