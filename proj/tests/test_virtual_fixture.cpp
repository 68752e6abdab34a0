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

#include "rvf/virtual_fixture.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace rvf {
namespace {

PathCurve straight_path(const Vec3& a, const Vec3& b) {
  std::vector<DemoSample> s;
  for (int i = 0; i < 10; ++i) s.push_back({0.1 * i, a + (b - a) * (i / 9.0)});
  return PathCurve::from_curve(fit_smoothing_spline(s));
}

PathCurve circle_path(double radius) {
  std::vector<DemoSample> s;
  for (int i = 0; i < 120; ++i) {
    const double a = 1.5 * M_PI * i / 119.0;
    s.push_back({0.01 * i, Vec3(radius * std::cos(a), radius * std::sin(a), 0.0)});
  }
  return PathCurve::from_curve(fit_smoothing_spline(s));
}

Vec3 random_unit(std::mt19937& rng) {
  std::normal_distribution<double> N;
  return Vec3(N(rng), N(rng), N(rng)).normalized();
}

ElasticParams narrow_channel_params() {
  ElasticParams p;
  p.chi = 1000.0;   // 1 N/mm
  p.delta = 0.005;  // 5 mm
  return p;
}

TEST(TangentialForce, Projection) {
  EXPECT_DOUBLE_EQ(tangential_force(Vec3::UnitX(), Vec3(3, 4, 0)), 3.0);
  EXPECT_DOUBLE_EQ(tangential_force(Vec3::UnitX(), Vec3(0, 4, -2)), 0.0);
  const Vec3 t(std::sqrt(0.5), 0.0, std::sqrt(0.5));
  EXPECT_NEAR(tangential_force(t, Vec3(0, 0, -1)), -std::sqrt(0.5), 1e-15);
  const PathCurve p = straight_path(Vec3::Zero(), Vec3(0, 2, 0));
  EXPECT_NEAR(tangential_force(p, 0.7, Vec3(1, 2, 3)), 2.0, 1e-9);
}

TEST(StepProxy, RestStaysAtRest) {
  VirtualMassParams p;
  const ProxyStep r = step_proxy({0.3, 0.0}, p, 0.0, 1e-3, 1.0);
  EXPECT_EQ(r.state.s, 0.3);
  EXPECT_EQ(r.state.sdot, 0.0);
  p.f_virtual = 1.0;
  const ProxyStep r2 = step_proxy({0.3, 0.0}, p, -1.0, 1e-3, 1.0);
  EXPECT_EQ(r2.state.s, 0.3);
  EXPECT_EQ(r2.state.sdot, 0.0);
}

TEST(StepProxy, ConstantForceReachesTerminalVelocity) {
  VirtualMassParams p;  // m = 5, b = 15
  ProxyState s;
  const double dt = 1e-4;
  const double tau = p.m / p.b;
  for (int k = 0; k < static_cast<int>(std::round(tau / dt)); ++k) s = step_proxy(s, p, 1.0, dt, 100.0).state;
  EXPECT_NEAR(s.sdot, (1.0 / 15.0) * (1.0 - std::exp(-1.0)), 1e-4);
  for (int k = 0; k < 200000; ++k) s = step_proxy(s, p, 1.0, dt, 100.0).state;
  EXPECT_NEAR(s.sdot, 1.0 / 15.0, 1e-9);
}

TEST(StepProxy, ClampsAtTheEnds) {
  VirtualMassParams p;
  ProxyStep r = step_proxy({1.0, 0.0}, p, 5.0, 1e-3, 1.0);
  EXPECT_EQ(r.state.s, 1.0);
  EXPECT_EQ(r.state.sdot, 0.0);
  r = step_proxy({0.9999, 0.5}, p, 5.0, 1e-3, 1.0);
  EXPECT_TRUE(r.clamped);
  EXPECT_EQ(r.state.s, 1.0);
  EXPECT_EQ(r.state.sdot, 0.0);
  r = step_proxy({0.0001, -0.5}, p, -5.0, 1e-3, 1.0);
  EXPECT_TRUE(r.clamped);
  EXPECT_EQ(r.state.s, 0.0);
  EXPECT_EQ(r.state.sdot, 0.0);
  EXPECT_EQ(proxy_acceleration({0.0, 0.0}, p, -3.0, 1.0), 0.0);
  EXPECT_GT(proxy_acceleration({0.0, 0.0}, p, 3.0, 1.0), 0.0);
  EXPECT_THROW(step_proxy({0.0, 0.0}, p, 0.0, 0.0, 1.0), InvalidArgument);
}

TEST(StepProxy, KineticEnergyBoundedBySuppliedWork) {
  VirtualMassParams p;
  p.m = 1.0;
  p.b = 3.0;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> F(-4.0, 4.0);
  const double dt = 1e-3;
  for (int trial = 0; trial < 20; ++trial) {
    ProxyState s{0.5, 0.0};
    double work = 0.0;
    double f = F(rng);
    for (int k = 0; k < 5000; ++k) {
      if (k % 200 == 0) f = F(rng);
      const ProxyStep r = step_proxy(s, p, f, dt, 1.0);
      work += f * (r.state.s - s.s);
      s = r.state;
      EXPECT_LE(0.5 * p.m * s.sdot * s.sdot, work + 1e-3);
    }
  }
}

TEST(ReferenceKinematics, RestGivesZeroDerivatives) {
  const PathCurve p = circle_path(0.5);
  const VirtualMassParams vm;
  const ReferenceKinematics r = reference_kinematics(p, {0.4, 0.0}, vm, 0.0);
  EXPECT_EQ(r.velocity.norm(), 0.0);
  EXPECT_EQ(r.acceleration.norm(), 0.0);
  EXPECT_LT((r.position - p.eval(0.4).position).norm(), 1e-15);
}

TEST(ReferenceKinematics, StraightPath) {
  const PathCurve p = straight_path(Vec3::Zero(), Vec3(0.6, 0.8, 0));
  const Vec3 t(0.6, 0.8, 0);
  const ReferenceKinematics r = reference_kinematics(p, {0.3, 0.2}, 0.7);
  EXPECT_LT((r.velocity - 0.2 * t).norm(), 1e-9);
  EXPECT_LT((r.acceleration - 0.7 * t).norm(), 1e-8);
}

TEST(ReferenceKinematics, SteadyCircularMotionIsCentripetal) {
  const PathCurve p = circle_path(1.0);
  VirtualMassParams vm;
  const double v = 0.2;
  const ReferenceKinematics r = reference_kinematics(p, {1.0, v}, vm, vm.b * v);
  EXPECT_NEAR(r.acceleration.norm(), v * v, 5e-3 * v * v);
  EXPECT_NEAR(r.acceleration.dot(r.tangent), 0.0, 1e-12);
}

TEST(DecomposeDeviation, ProjectorArithmetic) {
  const Deviation d = decompose_deviation(Vec3::UnitX(), Vec3(1, 2, 3));
  EXPECT_EQ(d.parallel, Vec3(1, 0, 0));
  EXPECT_EQ(d.orthogonal, Vec3(0, 2, 3));
  EXPECT_EQ(decompose_deviation(Vec3::UnitX(), Vec3(2, 0, 0)).orthogonal.norm(), 0.0);
  EXPECT_EQ(decompose_deviation(Vec3::UnitX(), Vec3(0, 1, 1)).parallel.norm(), 0.0);
}

TEST(DecomposeDeviation, ComplementaryAndIdempotent) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 t = random_unit(rng);
    const Vec3 x(U(rng), U(rng), U(rng));
    const Deviation d = decompose_deviation(t, x);
    EXPECT_LT((d.parallel + d.orthogonal - x).norm(), 1e-14);
    EXPECT_LT(std::abs(d.parallel.dot(d.orthogonal)), 1e-14);
    const Deviation dd = decompose_deviation(t, d.parallel);
    EXPECT_LT((dd.parallel - d.parallel).norm(), 1e-14);
    EXPECT_LT(dd.orthogonal.norm(), 1e-14);
  }
}

TEST(ElasticForce, ZeroAtZero) {
  const ElasticParams p;
  EXPECT_EQ(elastic_force(p, {}).norm(), 0.0);
  EXPECT_EQ(elastic_potential(p, {}), 0.0);
}

TEST(ElasticForce, BarrierValueAtHalfRadius) {
  const ElasticParams p = narrow_channel_params();
  Deviation d;
  d.orthogonal = Vec3(0, 0.0025, 0);
  EXPECT_NEAR(elastic_force(p, d).norm(), 10.0 / 3.0, 1e-12);
  EXPECT_NEAR(barrier_force(p.chi, p.delta, 0.0025), 10.0 / 3.0, 1e-12);
  // 3.596 N mm
  EXPECT_NEAR(elastic_potential(p, d), 12.5 * std::log(4.0 / 3.0) * 1e-3, 1e-15);
}

TEST(ElasticForce, LinearTangentSpring) {
  ElasticParams p;
  Deviation d;
  d.parallel = Vec3(0.001, 0, 0);
  EXPECT_NEAR(elastic_force(p, d).x(), 2.5, 1e-12);
  EXPECT_NEAR(elastic_potential(p, d), 0.5 * 2500 * 1e-6, 1e-15);
}

TEST(ElasticForce, ChannelViolationAtTheRadius) {
  const ElasticParams p;
  Deviation d;
  d.orthogonal = Vec3(0, 0, p.delta);
  EXPECT_THROW(elastic_force(p, d), ChannelViolation);
  EXPECT_THROW(elastic_potential(p, d), ChannelViolation);
  d.orthogonal = Vec3(0, 0, 1.5 * p.delta);
  EXPECT_THROW(elastic_force(p, d), ChannelViolation);
}

TEST(ElasticForce, BarrierMonotoneAndUnbounded) {
  const double chi = 500, delta = 0.02;
  double prev = -1.0;
  for (double z = 0.0; z < delta; z += delta / 1000) {
    const double f = barrier_force(chi, delta, z);
    EXPECT_GT(f, prev);
    prev = f;
  }
  EXPECT_GT(barrier_force(chi, delta, delta * (1 - 1e-9)), 1e9);
}

TEST(ElasticForce, GradientOfPotential) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    ElasticParams p;
    p.chi = 100 + 2400 * U(rng);
    p.delta = 0.01 + 0.02 * U(rng);
    const Vec3 t = random_unit(rng);
    const Vec3 n = t.unitOrthogonal();
    const Vec3 x = (0.02 * U(rng) - 0.01) * t + 0.95 * p.delta * U(rng) *
                   Eigen::AngleAxisd(2 * M_PI * U(rng), t).toRotationMatrix() * n;
    const Vec3 f = elastic_force(p, decompose_deviation(t, x));
    const double h = 1e-7 * p.delta;
    Vec3 fd;
    for (int i = 0; i < 3; ++i) {
      Vec3 e = Vec3::Zero();
      e[i] = h;
      fd[i] = (elastic_potential(p, decompose_deviation(t, x + e)) -
               elastic_potential(p, decompose_deviation(t, x - e))) / (2 * h);
    }
    EXPECT_LT((fd - f).norm(), 1e-6 * std::max(f.norm(), 1e-3)) << k;
  }
}

TEST(ElasticForce, PotentialNonNegativeAndZeroOnlyAtOrigin) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(-0.01, 0.01);
  const ElasticParams p;
  for (int k = 0; k < 1000; ++k) {
    const Vec3 x(U(rng), U(rng), U(rng));
    EXPECT_GT(elastic_potential(p, decompose_deviation(Vec3::UnitZ(), x)), 0.0);
  }
}

TEST(PathCoupling, MatchesDerivativeOfPotentialAlongThePath) {
  const PathCurve path = circle_path(0.3);
  ElasticParams p;
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> S(0.05, path.length() - 0.05), U(-1, 1);
  for (int k = 0; k < 100; ++k) {
    const double s = S(rng);
    const PathPoint pt = path.eval(s);
    const Vec3 x_tilde = 0.01 * pt.tangent * U(rng) + 0.012 * (pt.tangent.cross(Vec3(U(rng), U(rng), U(rng))));
    if (decompose_deviation(pt.tangent, x_tilde).orthogonal.norm() > 0.9 * p.delta) continue;
    const double h = 1e-6;
    auto U_at = [&](double ss) { return elastic_potential(p, decompose_deviation(path.eval(ss).tangent, x_tilde)); };
    const double fd = -(U_at(s + h) - U_at(s - h)) / (2 * h);
    EXPECT_NEAR(path_coupling_force(p, pt, x_tilde), fd, 1e-5 * std::max(1.0, std::abs(fd)));
  }
  const PathCurve line = straight_path(Vec3::Zero(), Vec3::UnitX());
  EXPECT_NEAR(path_coupling_force(p, line.eval(0.5), Vec3(0.01, 0.01, 0)), 0.0, 1e-9);
}

TEST(Params, Validation) {
  VirtualMassParams vm;
  vm.b = 0.0;
  EXPECT_THROW(vm.validate(), InvalidArgument);
  vm.b = 1.0;
  vm.m = -1.0;
  EXPECT_THROW(vm.validate(), InvalidArgument);
  ElasticParams el;
  el.delta = 0.0;
  EXPECT_THROW(el.validate(), InvalidArgument);
  el = ElasticParams{};
  el.K_D(0, 1) = 5.0;
  EXPECT_THROW(el.validate(), InvalidArgument);
  el = ElasticParams{};
  el.K_D(2, 2) = -1.0;
  EXPECT_THROW(el.validate(), InvalidArgument);
}

}  // namespace
}  // namespace rvf
