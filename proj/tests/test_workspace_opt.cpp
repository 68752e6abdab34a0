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

#include "rvf/workspace_opt.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "rvf/robot_library.hpp"

namespace rvf {
namespace {

// Brute-force oracle: raise |F_z| in 0.01 N steps while every joint torque
// g_i -/+ J_3i F_z stays within its limit for both signs of the force.
double torque_scan(const KinematicChain& c, const VecX& q, double step = 0.01, double cap = 1e4) {
  const VecX g = gravity_torque(c, q);
  const Mat6X J = geometric_jacobian(c, q);
  auto ok = [&](double f) {
    for (int i = 0; i < c.dof(); ++i) {
      const double lim = c.joints[static_cast<size_t>(i)].tau_lim;
      if (std::abs(g[i] - J(2, i) * f) > lim || std::abs(g[i] + J(2, i) * f) > lim) return false;
    }
    return true;
  };
  if (!ok(0.0)) return 0.0;
  double f = 0.0;
  while (f < cap && ok(f + step)) f += step;
  return f;
}

struct Planar2 {
  double l1 = 0.5, l2 = 0.4, m1 = 2.0, m2 = 1.5, t1 = 40.0, t2 = 20.0;

  KinematicChain chain(double q2_min = -M_PI, double q2_max = M_PI) const {
    KinematicChain c = robots::planar_two_link(l1, l2, m1, m2, t1, t2);
    c.joints[1].q_min = q2_min;
    c.joints[1].q_max = q2_max;
    return c;
  }

  // Closed-form payload index for uniform rods.
  double index(double q1, double q2) const {
    const double c1 = std::cos(q1), c12 = std::cos(q1 + q2);
    const double g1 = 9.81 * (m1 * l1 / 2 * c1 + m2 * (l1 * c1 + l2 / 2 * c12));
    const double g2 = 9.81 * m2 * l2 / 2 * c12;
    const double j1 = l1 * c1 + l2 * c12, j2 = l2 * c12;
    double best = std::numeric_limits<double>::infinity();
    const double g[2] = {g1, g2}, j[2] = {j1, j2}, t[2] = {t1, t2};
    for (int i = 0; i < 2; ++i) {
      if (std::abs(j[i]) <= kPayloadJacobianEpsilon) continue;
      if (t[i] <= std::abs(g[i])) return 0.0;
      best = std::min(best, (t[i] - std::abs(g[i])) / std::abs(j[i]));
    }
    return best;
  }

  // Both inverse-kinematics branches of a point in the x-z plane.
  std::vector<std::pair<double, double>> ik(const Vec3& p) const {
    if (std::abs(p.y()) > 1e-9) return {};
    const double r2 = p.x() * p.x() + p.z() * p.z();
    const double c2 = (r2 - l1 * l1 - l2 * l2) / (2 * l1 * l2);
    if (std::abs(c2) > 1.0) return {};
    std::vector<std::pair<double, double>> out;
    for (double sign : {1.0, -1.0}) {
      const double q2 = sign * std::acos(c2);
      const double q1 = std::atan2(p.z(), p.x()) - std::atan2(l2 * std::sin(q2), l1 + l2 * std::cos(q2));
      out.emplace_back(std::remainder(q1, 2 * M_PI), q2);
    }
    return out;
  }
};

MapOptions position_only() {
  MapOptions o;
  o.ik.position_only = true;
  return o;
}

TEST(PayloadIndex, SingleLinkClosedForm) {
  KinematicChain c = robots::single_link(1.0, 0.5, 1.0, -Vec3::UnitY(), 10.0);
  c.gravity = Vec3(0, 0, -9.8);  // 4.9 N m of gravity torque
  EXPECT_NEAR(payload_index(c, VecX::Zero(1)), 5.1, 1e-12);
  EXPECT_NEAR(torque_scan(c, VecX::Zero(1)), 5.1, 0.01 + 1e-9);
}

TEST(PayloadIndex, SymmetricZeroGravityChain) {
  KinematicChain c = robots::single_link(1.0, 1.0, 0.5, -Vec3::UnitY(), 7.0);
  c.joints.push_back(c.joints[0]);
  c.links.push_back(c.links[0]);
  c.gravity.setZero();
  EXPECT_NEAR(payload_index(c, VecX::Zero(2)), 7.0, 1e-12);
}

TEST(PayloadIndex, JointsWithoutLeverImposeNoBound) {
  KinematicChain c = robots::single_link(1.0, 1.0, 0.5, Vec3::UnitZ(), 3.0);
  EXPECT_TRUE(std::isinf(payload_index(c, VecX::Zero(1))));
}

TEST(PayloadIndex, GravitySaturationGivesZero) {
  KinematicChain c = robots::single_link(1.0, 5.0, 1.0, -Vec3::UnitY(), 10.0);
  EXPECT_EQ(payload_index(c, VecX::Zero(1)), 0.0);
}

TEST(PayloadIndex, RandomThreeLinkArmsMatchTorqueScan) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> L(0.2, 0.6), M(0.5, 3.0), T(20.0, 80.0), Q(-M_PI, M_PI);
  for (int k = 0; k < 100; ++k) {
    const KinematicChain c = robots::planar_three_link(L(rng), L(rng), L(rng), M(rng), M(rng), M(rng),
                                                       T(rng), T(rng), T(rng));
    const VecX q = (VecX(3) << Q(rng), Q(rng), Q(rng)).finished();
    const double pz = payload_index(c, q);
    ASSERT_TRUE(std::isfinite(pz));
    EXPECT_NEAR(pz, torque_scan(c, q), 0.01 + 1e-9) << k;
  }
}

TEST(PayloadIndex, MonotoneInTorqueLimits) {
  std::mt19937 rng(9);
  const KinematicChain base = robots::panda7();
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    VecX q(7);
    for (int i = 0; i < 7; ++i) {
      const auto& j = base.joints[static_cast<size_t>(i)];
      q[i] = j.q_min + 0.05 + (j.q_max - j.q_min - 0.1) * U(rng);
    }
    KinematicChain stronger = base;
    for (auto& j : stronger.joints) j.tau_lim *= 1.0 + U(rng);
    EXPECT_GE(payload_index(stronger, q), payload_index(base, q));
  }
}

TEST(PayloadIndex, AddedToolLoadDoesNotIncreaseTheIndex) {
  const Planar2 arm;
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> Q(-1.2, 1.2);
  for (int k = 0; k < 100; ++k) {
    const double q1 = Q(rng);
    const double q2 = std::uniform_real_distribution<double>(-1.2 - q1, 1.2 - q1)(rng);
    const VecX q = (VecX(2) << q1, q2).finished();
    KinematicChain c = arm.chain();
    const double before = payload_index(c, q);
    c.links[1].mass += 0.5;
    c.links[1].com = (c.links[1].com * (c.links[1].mass - 0.5) + Vec3(arm.l2, 0, 0) * 0.5) / c.links[1].mass;
    EXPECT_LE(payload_index(c, q), before + 1e-12);
  }
}

TEST(MapWorkspace, GridOutsideReachIsInfeasible) {
  const KinematicChain c = Planar2{}.chain();
  WorkspaceGrid g;
  g.lower = Vec3(1.0, 0.0, -0.2);
  g.upper = Vec3(1.4, 0.0, 0.2);
  g.resolution = 0.1;
  const PayloadMap m = map_workspace(c, g, FlangeOrientation::kDown, position_only());
  ASSERT_EQ(m.size(), 25u);
  for (const auto& p : m) EXPECT_FALSE(p.value.has_value());
}

TEST(MapWorkspace, PlanarGridMatchesClosedFormPerPoint) {
  const Planar2 arm;
  const KinematicChain c = arm.chain();
  WorkspaceGrid g;
  g.lower = Vec3(-0.8, 0.0, -0.8);
  g.upper = Vec3(0.8, 0.0, 0.8);
  g.resolution = 0.2;
  const PayloadMap m = map_workspace(c, g, FlangeOrientation::kDown, position_only());
  ASSERT_EQ(m.size(), 81u);
  int reachable = 0;
  for (const auto& p : m) {
    const auto branches = arm.ik(p.position);
    const double r = std::hypot(p.position.x(), p.position.z());
    if (r < 0.11 || r > 0.89) {
      EXPECT_EQ(p.value.has_value(), !branches.empty()) << p.position.transpose();
    }
    if (!p.value) continue;
    ++reachable;
    ASSERT_FALSE(branches.empty());
    double best_err = std::numeric_limits<double>::infinity();
    for (const auto& [q1, q2] : branches) best_err = std::min(best_err, std::abs(arm.index(q1, q2) - *p.value));
    EXPECT_LT(best_err, 1e-6) << p.position.transpose();
  }
  EXPECT_GT(reachable, 30);
}

TEST(MapWorkspace, OrientationChangesTheMap) {
  const KinematicChain c = robots::panda7();
  WorkspaceGrid g;
  g.lower = Vec3(0.3, -0.2, 0.3);
  g.upper = Vec3(0.6, 0.2, 0.6);
  g.resolution = 0.15;
  MapOptions o;
  o.seeds.push_back(robots::panda7_ready());
  const PayloadMap down = map_workspace(c, g, FlangeOrientation::kDown, o);
  const PayloadMap side = map_workspace(c, g, FlangeOrientation::kHorizontal, o);
  ASSERT_EQ(down.size(), side.size());
  int differing = 0, reachable = 0;
  for (size_t i = 0; i < down.size(); ++i) {
    reachable += down[i].value.has_value();
    if (down[i].value.has_value() != side[i].value.has_value() ||
        (down[i].value && std::abs(*down[i].value - *side[i].value) > 1e-6)) {
      ++differing;
    }
  }
  EXPECT_GT(reachable, 0);
  EXPECT_GT(differing, 0);
}

TEST(WorkspaceGrid, OrderingAndValidation) {
  WorkspaceGrid g;
  g.lower = Vec3(0, 0, 0);
  g.upper = Vec3(0.1, 0.2, 0.1);
  g.resolution = 0.1;
  EXPECT_EQ(g.counts(), Eigen::Vector3i(2, 3, 2));
  const auto pts = g.points();
  ASSERT_EQ(pts.size(), 12u);
  EXPECT_TRUE(pts[1].isApprox(Vec3(0, 0, 0.1)));
  EXPECT_TRUE(pts[2].isApprox(Vec3(0, 0.1, 0)));
  EXPECT_TRUE(pts[6].isApprox(Vec3(0.1, 0, 0)));
  g.resolution = 0.0;
  EXPECT_THROW(g.validate(), InvalidArgument);
  g.resolution = 0.1;
  g.upper = Vec3(-1, 0, 0);
  EXPECT_THROW(g.validate(), InvalidArgument);
}

TEST(FlangeOrientation, NamesRoundTrip) {
  for (auto o : {FlangeOrientation::kDown, FlangeOrientation::kHorizontal, FlangeOrientation::kUp}) {
    EXPECT_EQ(parse_flange_orientation(to_string(o)), o);
  }
  EXPECT_THROW(parse_flange_orientation("sideways"), InvalidArgument);
  EXPECT_LT((flange_quaternion(FlangeOrientation::kDown) * Vec3::UnitZ() + Vec3::UnitZ()).norm(), 1e-12);
  EXPECT_LT((flange_quaternion(FlangeOrientation::kUp) * Vec3::UnitZ() - Vec3::UnitZ()).norm(), 1e-12);
}

TEST(RankPlacement, SinglePointAndUnreachablePoint) {
  const Planar2 arm;
  const KinematicChain c = arm.chain(0.05, M_PI - 0.05);
  const Vec3 p(0.5, 0.0, 0.2);
  const auto pi = rank_placement(c, {p}, {}, FlangeOrientation::kDown, position_only());
  ASSERT_TRUE(pi.has_value());
  const auto b = arm.ik(p);
  EXPECT_NEAR(*pi, arm.index(b[0].first, b[0].second), 1e-6);
  EXPECT_FALSE(rank_placement(c, {p, Vec3(2, 0, 0)}, {}, FlangeOrientation::kDown, position_only()).has_value());
}

TEST(RankPlacement, FivePointsGiveTheMinimum) {
  const Planar2 arm;
  const KinematicChain c = arm.chain(0.05, M_PI - 0.05);
  const std::vector<Vec3> traj{{0.5, 0, 0.2}, {0.55, 0, 0.1}, {0.6, 0, 0.0}, {0.55, 0, -0.1}, {0.4, 0, -0.3}};
  double expected = std::numeric_limits<double>::infinity();
  for (const auto& p : traj) {
    const auto b = arm.ik(p);
    expected = std::min(expected, arm.index(b[0].first, b[0].second));
  }
  const auto pi = rank_placement(c, traj, {}, FlangeOrientation::kDown, position_only());
  ASSERT_TRUE(pi.has_value());
  EXPECT_NEAR(*pi, expected, 1e-6);
}

TEST(OptimizePlacement, MatchesIndependentExhaustiveSearch) {
  const Planar2 arm;
  const KinematicChain c = arm.chain(0.05, M_PI - 0.05);
  const std::vector<Vec3> traj{{0.35, 0, 0.25}, {0.45, 0, 0.2}, {0.55, 0, 0.1}, {0.6, 0, -0.05}};
  PlacementSearch search;
  search.tx = {-0.1, 0.1, 0.1};
  search.ty = {-0.1, 0.1, 0.1};
  search.theta = {0.0, M_PI, M_PI};
  const PlacementResult r = optimize_placement(c, traj, search, position_only());
  EXPECT_EQ(r.evaluated, 18);

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : traj) centroid += p;
  centroid /= 4.0;
  std::optional<double> best;
  double best_tx = 0, best_ty = 0, best_th = 0;
  for (double tx : {-0.1, 0.0, 0.1}) {
    for (double ty : {-0.1, 0.0, 0.1}) {
      for (double th : {0.0, M_PI}) {
        std::optional<double> pi = std::numeric_limits<double>::infinity();
        for (const auto& p : traj) {
          Vec3 d = p - centroid;
          if (th != 0.0) d = Vec3(-d.x(), -d.y(), d.z());
          const Vec3 placed = centroid + d + Vec3(tx, ty, 0);
          const auto b = arm.ik(Vec3(placed.x(), std::abs(placed.y()) < 1e-12 ? 0.0 : placed.y(), placed.z()));
          if (b.empty() || b[0].second < 0.05 || b[0].second > M_PI - 0.05) {
            pi.reset();
            break;
          }
          pi = std::min(*pi, arm.index(b[0].first, b[0].second));
        }
        if (pi && (!best || *pi > *best + 1e-9)) {
          best = pi;
          best_tx = tx;
          best_ty = ty;
          best_th = th;
        }
      }
    }
  }
  ASSERT_TRUE(best.has_value());
  ASSERT_TRUE(r.pi_opt.has_value());
  EXPECT_NEAR(*r.pi_opt, *best, 1e-6);
  EXPECT_NEAR(r.placement.tx, best_tx, 1e-12);
  EXPECT_NEAR(r.placement.ty, best_ty, 1e-12);
  EXPECT_NEAR(r.placement.theta, best_th, 1e-12);
}

TEST(OptimizePlacement, SymmetricCandidatesTieToTheCanonicalOne) {
  const Planar2 arm;
  const KinematicChain c = arm.chain(0.05, M_PI - 0.05);
  const std::vector<Vec3> traj{{0.4, 0, 0.1}, {0.5, 0, 0.1}, {0.6, 0, 0.1}};
  const auto a = rank_placement(c, traj, {0, 0, 0}, FlangeOrientation::kDown, position_only());
  const auto b = rank_placement(c, traj, {0, 0, M_PI}, FlangeOrientation::kDown, position_only());
  ASSERT_TRUE(a && b);
  EXPECT_NEAR(*a, *b, 1e-9);
  PlacementSearch search;
  search.theta = {0.0, M_PI, M_PI};
  const PlacementResult r = optimize_placement(c, traj, search, position_only());
  EXPECT_EQ(r.placement.theta, 0.0);
}

TEST(OptimizePlacement, SingleCandidateAndInfeasibleSpace) {
  const Planar2 arm;
  const KinematicChain c = arm.chain(0.05, M_PI - 0.05);
  const std::vector<Vec3> traj{{0.5, 0, 0.2}, {0.6, 0, 0.1}};
  PlacementSearch one;
  one.tx = {0.05, 0.05, 1.0};
  const PlacementResult r = optimize_placement(c, traj, one, position_only());
  EXPECT_EQ(r.evaluated, 1);
  const auto pi = rank_placement(c, traj, {0.05, 0, 0}, FlangeOrientation::kDown, position_only());
  ASSERT_TRUE(pi && r.pi_opt);
  EXPECT_EQ(*r.pi_opt, *pi);
  PlacementSearch far;
  far.tx = {2.0, 3.0, 1.0};
  EXPECT_FALSE(optimize_placement(c, traj, far, position_only()).pi_opt.has_value());
  PlacementSearch empty;
  empty.tx = {1.0, 0.0, 0.1};
  EXPECT_THROW(optimize_placement(c, traj, empty, position_only()), InvalidArgument);
}

}  // namespace
}  // namespace rvf
