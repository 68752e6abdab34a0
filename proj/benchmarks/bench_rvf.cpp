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

#include <benchmark/benchmark.h>

#include "rvf/impedance_control.hpp"
#include "rvf/robot_library.hpp"
#include "rvf/sim_harness.hpp"
#include "rvf/spline_path.hpp"
#include "rvf/workspace_opt.hpp"

namespace {

const rvf::PathCurve& crossing() {
  static const rvf::PathCurve path = [] {
    rvf::SmoothingFitOptions fit;
    fit.lambda = 1e-6;
    return rvf::PathCurve::from_curve(rvf::fit_smoothing_spline(rvf::crossing_figure_demo(), fit));
  }();
  return path;
}

void BM_FitCrossing(benchmark::State& state) {
  const auto demo = rvf::crossing_figure_demo();
  rvf::SmoothingFitOptions fit;
  fit.lambda = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvf::PathCurve::from_curve(rvf::fit_smoothing_spline(demo, fit)));
  }
}
BENCHMARK(BM_FitCrossing)->Unit(benchmark::kMillisecond);

void BM_EvalByArclength(benchmark::State& state) {
  const auto& path = crossing();
  double s = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(path.eval(s));
    s += 1e-3;
    if (s > path.length()) s = 0.0;
  }
}
BENCHMARK(BM_EvalByArclength);

void BM_JointDynamicsPanda(benchmark::State& state) {
  const auto chain = rvf::robots::panda7();
  rvf::RobotState st{rvf::robots::panda7_ready(), rvf::VecX::Constant(7, 0.1)};
  for (auto _ : state) benchmark::DoNotOptimize(rvf::joint_space_dynamics(chain, st));
}
BENCHMARK(BM_JointDynamicsPanda);

void BM_ImpedanceTorque(benchmark::State& state) {
  const auto chain = rvf::robots::panda7();
  rvf::RobotState st{rvf::robots::panda7_ready(), rvf::VecX::Zero(7)};
  rvf::TaskReference ref;
  const auto pose = rvf::forward_kinematics(chain, st.q);
  ref.position = pose.position + rvf::Vec3(0, 0.005, 0);
  ref.orientation = pose.orientation;
  rvf::ControlGains gains;
  for (auto _ : state) benchmark::DoNotOptimize(rvf::impedance_torque(chain, st, ref, gains));
}
BENCHMARK(BM_ImpedanceTorque);

// One simulated second at 1 kHz; divide by 1000 for the cost of a tick.
void BM_SimulateOneSecond(benchmark::State& state) {
  rvf::SimConfig cfg;
  cfg.chain = rvf::robots::panda7();
  cfg.path = crossing();
  cfg.ik_seeds.push_back(rvf::robots::panda7_ready());
  cfg.duration = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(rvf::simulate_session(cfg));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SimulateOneSecond)->Unit(benchmark::kMillisecond);

void BM_PayloadIndex(benchmark::State& state) {
  const auto chain = rvf::robots::panda7();
  const auto q = rvf::robots::panda7_ready();
  for (auto _ : state) benchmark::DoNotOptimize(rvf::payload_index(chain, q));
}
BENCHMARK(BM_PayloadIndex);

void BM_RankPlacement(benchmark::State& state) {
  const auto chain = rvf::robots::panda7();
  std::vector<rvf::Vec3> pts;
  const auto& path = crossing();
  for (int i = 0; i < 50; ++i) pts.push_back(path.eval(path.length() * i / 49).position);
  rvf::MapOptions opts;
  opts.seeds.push_back(rvf::robots::panda7_ready());
  for (auto _ : state) {
    benchmark::DoNotOptimize(rvf::rank_placement(chain, pts, {}, rvf::FlangeOrientation::kDown, opts));
  }
}
BENCHMARK(BM_RankPlacement)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
