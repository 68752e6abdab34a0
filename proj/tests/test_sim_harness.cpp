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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rvf/robot_library.hpp"

namespace rvf {
namespace {

PathCurve fit(const std::vector<DemoSample>& demo) {
  SmoothingFitOptions o;
  o.lambda = 1e-6;
  return PathCurve::from_curve(fit_smoothing_spline(demo, o));
}

const PathCurve& crossing_path() {
  static const PathCurve p = fit(crossing_figure_demo());
  return p;
}

const PathCurve& line_path() {
  static const PathCurve p = fit(line_demo(Vec3(0.45, -0.15, 0.4), Vec3(0.45, 0.15, 0.4)));
  return p;
}

SimConfig crossing_config() {
  SimConfig c;
  c.chain = robots::panda7();
  c.path = crossing_path();
  return c;
}

SimConfig passive_human_config() {
  SimConfig c = crossing_config();
  c.human.k_h = 0.0;
  c.human.d_h = 0.0;
  c.human.noise_amplitude = 0.0;
  c.human.tangential_noise_amplitude = 0.0;
  return c;
}

TEST(HumanForce, AtTheGoalAndAtRestIsZero) {
  HumanModel m;
  m.noise_amplitude = m.tangential_noise_amplitude = 0.0;
  m.speed = 0.0;
  const PathCurve& p = line_path();
  const Vec3 goal = p.eval(0.1 + m.lead).position;
  EXPECT_LT(human_force(m, goal, Vec3::Zero(), p, 0.1, 3.0).norm(), 1e-12);
}

TEST(HumanForce, SpringTowardsTheLeadPoint) {
  HumanModel m;
  m.noise_amplitude = m.tangential_noise_amplitude = 0.0;
  m.speed = 0.0;
  const PathCurve& p = line_path();
  const PathPoint at = p.eval(0.05);
  const Vec3 f = human_force(m, at.position, Vec3::Zero(), p, 0.05, 1.0);
  EXPECT_LT((f - 5.0 * at.tangent).norm(), 1e-9);
}

TEST(HumanForce, BiasOnly) {
  HumanModel m;
  m.k_h = m.d_h = 0.0;
  m.noise_amplitude = m.tangential_noise_amplitude = 0.0;
  m.bias = Vec3(0, 3, 0);
  EXPECT_LT((human_force(m, Vec3(1, 2, 3), Vec3(4, 5, 6), line_path(), 0.1, 2.0) - m.bias).norm(), 1e-15);
}

TEST(HumanForce, ScheduleAndExtensionPastTheEnd) {
  HumanModel m;
  m.start_time = 1.0;
  m.speed = 0.05;
  ScriptedHuman h(m, 3);
  EXPECT_EQ(h.goal_arclength(0.0, 0.5), 0.0);
  EXPECT_NEAR(h.goal_arclength(0.0, 2.0), 0.05, 1e-15);
  EXPECT_NEAR(h.goal_arclength(0.02, 10.0), 0.12, 1e-15);
  const PathCurve& p = line_path();
  const PathPoint end = p.eval(p.length());
  const Vec3 g = h.goal_position(p, p.length(), 1e6);
  EXPECT_LT((g - (end.position + m.lead * end.tangent)).norm(), 1e-9);
}

TEST(HumanForce, NoiseIsSeededLateralAndScaled) {
  HumanModel m;
  ScriptedHuman a(m, 11), b(m, 11), c(m, 12);
  const Vec3 t = Vec3(1, 1, 0).normalized();
  double lateral = 0.0, tangential = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double time = 0.01 * k;
    EXPECT_EQ(a.noise_force(t, time), b.noise_force(t, time));
    const Vec3 f = a.noise_force(t, time);
    const double along = f.dot(t);
    lateral += (f - along * t).squaredNorm() / 2.0;  // two orthogonal axes
    tangential += along * along;
  }
  EXPECT_NE(a.noise_force(t, 1.234), c.noise_force(t, 1.234));
  EXPECT_NEAR(std::sqrt(lateral / n), m.noise_amplitude, 0.15 * m.noise_amplitude);
  EXPECT_NEAR(std::sqrt(tangential / n), m.tangential_noise_amplitude, 0.2 * m.tangential_noise_amplitude);
  HumanModel lateral_only = m;
  lateral_only.tangential_noise_amplitude = 0.0;
  ScriptedHuman d(lateral_only, 5);
  for (int k = 0; k < 100; ++k) EXPECT_NEAR(d.noise_force(t, 0.37 * k).dot(t), 0.0, 1e-12);
}

TEST(HumanModel, Validation) {
  HumanModel m;
  EXPECT_NO_THROW(m.validate());
  m.k_h = -1;
  EXPECT_THROW(m.validate(), InvalidArgument);
  m = HumanModel{};
  m.noise_max_hz = 0.1;
  EXPECT_THROW(m.validate(), InvalidArgument);
}

TEST(SimulateSession, GlobalEquilibriumIsStationary) {
  SimConfig c = passive_human_config();
  c.duration = 2.0;
  const SimTrace tr = simulate_session(c);
  ASSERT_FALSE(tr.fault.has_value());
  ASSERT_EQ(tr.rows.size(), 2001u);  // initial row plus one per tick
  for (const auto& r : tr.rows) {
    EXPECT_LT((r.x - tr.rows.front().x).norm(), 1e-6);
    EXPECT_NEAR(r.s, 0.0, 1e-12);
  }
  const EnergyReport e = passivity_report(tr);
  EXPECT_LT(std::abs(e.max_residual), 1e-9);
  const SimMetrics m = compute_metrics(tr);
  EXPECT_LT(m.deviation_perp.max, 1e-6);
  EXPECT_FALSE(m.completion_time.has_value());
}

TEST(SimulateSession, OrthogonalBiasSettlesAtTheForceBalanceRoot) {
  SimConfig c;
  c.chain = robots::panda7();
  c.path = line_path();
  c.human.k_h = c.human.d_h = 0.0;
  c.human.noise_amplitude = c.human.tangential_noise_amplitude = 0.0;
  c.human.bias = Vec3(0, 0, 5.0);
  c.initial_s = 0.5 * c.path.length();
  c.gains.elastic.chi = 500;
  c.gains.elastic.delta = 0.02;
  c.duration = 5.0;
  c.stop_on_completion = false;
  const SimTrace tr = simulate_session(c);
  ASSERT_FALSE(tr.fault.has_value());
  const TraceRow& r = tr.rows.back();
  // 5 = chi delta^2 z / (delta^2 - z^2)
  const double d2 = 0.02 * 0.02, k = 500 * d2;
  const double root = (-k + std::sqrt(k * k + 4 * 25 * d2)) / 10.0;
  EXPECT_NEAR(root, 0.008284, 1e-6);
  EXPECT_NEAR(r.x_perp.norm(), root, 0.05 * root);
  EXPECT_LT(std::abs(r.f_par), 0.05);
  EXPECT_LT(std::abs(r.tangent.dot(r.f_h)), 0.01 * r.f_h.norm());
  EXPECT_LT((r.f_el - r.f_h).norm(), 0.02 * r.f_h.norm());
}

TEST(SimulateSession, SelfCrossingPathCompletesWithMonotoneArcLength) {
  const SimConfig c = crossing_config();
  const SimTrace tr = simulate_session(c);
  ASSERT_FALSE(tr.fault.has_value());
  ASSERT_TRUE(tr.completion_time.has_value());
  EXPECT_GT(*tr.completion_time, 10.0);
  EXPECT_LT(*tr.completion_time, 30.0);
  for (size_t k = 1; k < tr.rows.size(); ++k) {
    EXPECT_GE(tr.rows[k].s, tr.rows[k - 1].s);
    EXPECT_GE(tr.rows[k].s, 0.0);
    EXPECT_LE(tr.rows[k].s, tr.path_length);
  }
  EXPECT_GE(tr.rows.back().s, tr.path_length - 1e-4);
  EXPECT_TRUE(passivity_report(tr).passive);
  bool completed = false;
  for (const auto& e : tr.events) completed |= e.kind == EventKind::kCompleted;
  EXPECT_TRUE(completed);
}

TEST(SimulateSession, BitIdenticalForTheSameSeed) {
  SimConfig c = crossing_config();
  c.duration = 1.5;
  c.measurement_noise = 0.2;
  const SimTrace a = simulate_session(c), b = simulate_session(c);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].q, b.rows[k].q);
    EXPECT_EQ(a.rows[k].tau, b.rows[k].tau);
    EXPECT_EQ(a.rows[k].storage, b.rows[k].storage);
  }
  c.seed = 2;
  const SimTrace d = simulate_session(c);
  EXPECT_NE(a.rows.back().q, d.rows.back().q);
}

TEST(SimulateSession, TimeStepSensitivity) {
  std::vector<double> completion;
  for (double dt : {0.5e-3, 1e-3, 2e-3}) {
    SimConfig c = crossing_config();
    c.dt = dt;
    const SimTrace tr = simulate_session(c);
    ASSERT_FALSE(tr.fault.has_value()) << dt;
    ASSERT_TRUE(tr.completion_time.has_value()) << dt;
    const EnergyReport e = passivity_report(tr);
    EXPECT_TRUE(e.passive) << dt << " residual " << e.max_residual;
    EXPECT_LE(compute_metrics(tr).deviation_perp.max, 1.02 * c.gains.elastic.delta) << dt;
    completion.push_back(*tr.completion_time);
  }
  EXPECT_NEAR(completion[0], completion[1], 0.05 * completion[1]);
  EXPECT_NEAR(completion[2], completion[1], 0.05 * completion[1]);
}

TEST(SimulateSession, OverwhelmingPushFaultsAndTruncates) {
  SimConfig c = passive_human_config();
  c.human.bias = Vec3(0, 1000.0, 0);
  c.gains.elastic.chi = 100;
  c.gains.elastic.delta = 0.01;
  c.duration = 3.0;
  const SimTrace tr = simulate_session(c);
  ASSERT_TRUE(tr.fault.has_value());
  EXPECT_LT(tr.rows.size(), 3000u);
  EXPECT_EQ(tr.events.back().kind, EventKind::kChannelViolation);
  for (const auto& r : tr.rows) EXPECT_TRUE(r.q.allFinite());
  EXPECT_TRUE(compute_metrics(tr).faulted);
}

TEST(SimulateSession, InvalidConfigIsRejected) {
  SimConfig c = crossing_config();
  c.dt = 0.0;
  EXPECT_THROW(simulate_session(c), InvalidArgument);
  c = crossing_config();
  c.gains.elastic.delta = -0.01;
  EXPECT_THROW(simulate_session(c), InvalidArgument);
  c = crossing_config();
  c.initial_s = -1.0;
  EXPECT_THROW(simulate_session(c), InvalidArgument);
}

// Turning the proxy damping into generation must trip the monitor.
TEST(PassivityReport, DetectsNegativeDamping) {
  SimConfig c = crossing_config();
  c.duration = 8.0;
  const SimTrace tr = simulate_session(c);
  ASSERT_FALSE(tr.fault.has_value());
  EXPECT_TRUE(passivity_report(tr).passive);
  SimTrace rigged = tr;
  double generated = 0.0;
  for (auto& r : rigged.rows) {
    r.storage += 2.0 * generated;
    generated += c.proxy.b * r.sdot * r.sdot * tr.dt;
  }
  const EnergyReport e = passivity_report(rigged);
  EXPECT_FALSE(e.passive);
  EXPECT_GT(e.max_residual, e.tolerance);
}

TEST(ComputeMetrics, EmptyTraceThrows) {
  EXPECT_THROW(compute_metrics(SimTrace{}), InvalidArgument);
}

TEST(ComputeMetrics, AssistShiftsTheTangentialForce) {
  SimConfig base = crossing_config();
  SimConfig assist = base, resist = base;
  assist.proxy.f_virtual = 1.0;
  resist.proxy.f_virtual = -1.0;
  const double m0 = compute_metrics(simulate_session(base)).mean_f_par;
  const double mp = compute_metrics(simulate_session(assist)).mean_f_par;
  const double mm = compute_metrics(simulate_session(resist)).mean_f_par;
  EXPECT_NEAR(m0 - mp, 1.0, 0.1);
  EXPECT_NEAR(mm - m0, 1.0, 0.1);
}

TEST(Summarize, Type7Quartiles) {
  const Distribution d = summarize({4, 1, 3, 2});
  EXPECT_EQ(d.min, 1);
  EXPECT_EQ(d.max, 4);
  EXPECT_DOUBLE_EQ(d.q1, 1.75);
  EXPECT_DOUBLE_EQ(d.median, 2.5);
  EXPECT_DOUBLE_EQ(d.q3, 3.25);
  EXPECT_DOUBLE_EQ(d.mean, 2.5);
  EXPECT_EQ(d.count, 4u);
}

TEST(Sweep, SingleCellEqualsOneSession) {
  SimConfig c = crossing_config();
  c.duration = 3.0;
  SweepSpec spec;
  spec.chi = {500};
  spec.delta = {0.02};
  spec.repetitions = 1;
  spec.seed = 9;
  const SweepResult r = sweep(c, spec);
  ASSERT_EQ(r.runs.size(), 1u);
  ASSERT_EQ(r.cells.size(), 1u);
  c.seed = repetition_seed(9, 0);
  const SimMetrics m = compute_metrics(simulate_session(c));
  EXPECT_EQ(r.runs[0].metrics.deviation_perp.mean, m.deviation_perp.mean);
  EXPECT_EQ(r.runs[0].metrics.peak_force_perp, m.peak_force_perp);
  EXPECT_EQ(r.cells[0].mean_deviation, m.deviation_perp.mean);
}

TEST(Sweep, OrderAndValuesIndependentOfThreads) {
  SimConfig c = crossing_config();
  c.duration = 1.0;
  SweepSpec spec;
  spec.chi = {100, 2500};
  spec.delta = {0.01, 0.03};
  spec.repetitions = 2;
  const SweepResult a = sweep(c, spec);
  spec.threads = 3;
  const SweepResult b = sweep(c, spec);
  ASSERT_EQ(a.runs.size(), 8u);
  ASSERT_EQ(b.runs.size(), 8u);
  for (size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].chi, b.runs[i].chi);
    EXPECT_EQ(a.runs[i].delta, b.runs[i].delta);
    EXPECT_EQ(a.runs[i].seed, b.runs[i].seed);
    EXPECT_EQ(a.runs[i].metrics.deviation_perp.mean, b.runs[i].metrics.deviation_perp.mean);
  }
  EXPECT_EQ(a.cells[1].chi, 100);
  EXPECT_EQ(a.cells[1].delta, 0.03);
  EXPECT_NE(repetition_seed(1, 0), repetition_seed(1, 1));
  EXPECT_EQ(repetition_seed(1, 4), repetition_seed(1, 4));
}

TEST(Sweep, InvalidCellRejectedBeforeRunning) {
  SweepSpec spec;
  spec.delta = {0.02, 0.0};
  EXPECT_THROW(sweep(crossing_config(), spec), InvalidArgument);
}

}  // namespace
}  // namespace rvf
