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

#include <algorithm>
#include <cmath>
#include <limits>

namespace rvf {

double payload_index(const KinematicChain& chain, const VecX& q) {
  const Mat6X J = geometric_jacobian(chain, q);
  const VecX g = gravity_torque(chain, q);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < chain.dof(); ++i) {
    const double margin = chain.joints[static_cast<size_t>(i)].tau_lim - std::abs(g[i]);
    if (margin <= 0.0) return 0.0;
    const double lever = std::abs(J(2, i));
    if (lever <= kPayloadJacobianEpsilon) continue;
    best = std::min(best, margin / lever);
  }
  return best;
}

Quat flange_quaternion(FlangeOrientation o) {
  switch (o) {
    case FlangeOrientation::kDown:
      return Quat(Eigen::AngleAxisd(M_PI, Vec3::UnitX()));
    case FlangeOrientation::kHorizontal:
      return Quat(Eigen::AngleAxisd(M_PI / 2.0, Vec3::UnitY()));
    case FlangeOrientation::kUp:
      return Quat::Identity();
  }
  return Quat::Identity();
}

std::string_view to_string(FlangeOrientation o) {
  switch (o) {
    case FlangeOrientation::kDown: return "down";
    case FlangeOrientation::kHorizontal: return "horizontal";
    case FlangeOrientation::kUp: return "up";
  }
  return "down";
}

FlangeOrientation parse_flange_orientation(std::string_view name) {
  if (name == "down") return FlangeOrientation::kDown;
  if (name == "horizontal") return FlangeOrientation::kHorizontal;
  if (name == "up") return FlangeOrientation::kUp;
  throw InvalidArgument("unknown orientation '" + std::string(name) +
                        "' (expected down, horizontal or up)");
}

void WorkspaceGrid::validate() const {
  if (!(resolution > 0.0)) throw InvalidArgument("grid resolution must be > 0");
  if (!lower.allFinite() || !upper.allFinite()) {
    throw InvalidArgument("grid bounds must be finite");
  }
  if ((upper - lower).minCoeff() < 0.0) {
    throw InvalidArgument("grid upper bound must not be below the lower bound");
  }
}

Eigen::Vector3i WorkspaceGrid::counts() const {
  validate();
  Eigen::Vector3i c;
  for (int a = 0; a < 3; ++a) {
    c[a] = static_cast<int>(std::floor((upper[a] - lower[a]) / resolution + 1e-9)) + 1;
  }
  return c;
}

std::vector<Vec3> WorkspaceGrid::points() const {
  const Eigen::Vector3i c = counts();
  std::vector<Vec3> pts;
  pts.reserve(static_cast<size_t>(c.prod()));
  for (int i = 0; i < c[0]; ++i) {
    for (int j = 0; j < c[1]; ++j) {
      for (int k = 0; k < c[2]; ++k) {
        pts.push_back(lower + resolution * Vec3(i, j, k));
      }
    }
  }
  return pts;
}

namespace {

std::optional<VecX> solve_point(const KinematicChain& chain, const Vec3& p,
                                const Quat& orientation,
                                const std::optional<VecX>& neighbor,
                                const MapOptions& options) {
  std::vector<VecX> seeds;
  if (neighbor) seeds.push_back(*neighbor);
  for (const auto& s : options.seeds) seeds.push_back(s);
  TaskPose target;
  target.position = p;
  target.orientation = orientation;
  return inverse_kinematics_multi(chain, target, seeds, options.ik);
}

}  // namespace

PayloadMap map_workspace(const KinematicChain& chain, const WorkspaceGrid& grid,
                         FlangeOrientation orientation, const MapOptions& options) {
  chain.validate();
  const Eigen::Vector3i c = grid.counts();
  const std::vector<Vec3> pts = grid.points();
  const Quat quat = flange_quaternion(orientation);
  std::vector<std::optional<VecX>> solutions(pts.size());
  PayloadMap map(pts.size());
  auto index = [&](int i, int j, int k) {
    return static_cast<size_t>((i * c[1] + j) * c[2] + k);
  };
  for (int i = 0; i < c[0]; ++i) {
    for (int j = 0; j < c[1]; ++j) {
      for (int k = 0; k < c[2]; ++k) {
        const size_t idx = index(i, j, k);
        std::optional<VecX> neighbor;
        if (k > 0 && solutions[index(i, j, k - 1)]) {
          neighbor = solutions[index(i, j, k - 1)];
        } else if (j > 0 && solutions[index(i, j - 1, k)]) {
          neighbor = solutions[index(i, j - 1, k)];
        } else if (i > 0 && solutions[index(i - 1, j, k)]) {
          neighbor = solutions[index(i - 1, j, k)];
        }
        solutions[idx] = solve_point(chain, pts[idx], quat, neighbor, options);
        map[idx].position = pts[idx];
        if (solutions[idx]) map[idx].value = payload_index(chain, *solutions[idx]);
      }
    }
  }
  return map;
}

std::vector<Vec3> apply_placement(const std::vector<Vec3>& points,
                                  const Placement& placement) {
  if (points.empty()) return {};
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  const Mat3 R = Eigen::AngleAxisd(placement.theta, Vec3::UnitZ()).toRotationMatrix();
  const Vec3 shift(placement.tx, placement.ty, 0.0);
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(R * (p - centroid) + centroid + shift);
  return out;
}

std::optional<double> rank_placement(const KinematicChain& chain,
                                     const std::vector<Vec3>& trajectory,
                                     const Placement& placement,
                                     FlangeOrientation orientation,
                                     const MapOptions& options) {
  if (trajectory.empty()) throw InvalidArgument("rank_placement: empty trajectory");
  const Quat quat = flange_quaternion(orientation);
  std::optional<VecX> previous;
  double pi = std::numeric_limits<double>::infinity();
  for (const auto& p : apply_placement(trajectory, placement)) {
    previous = solve_point(chain, p, quat, previous, options);
    if (!previous) return std::nullopt;
    pi = std::min(pi, payload_index(chain, *previous));
  }
  return pi;
}

std::vector<double> SearchAxis::values() const {
  if (!std::isfinite(min) || !std::isfinite(max) || max < min) {
    throw InvalidArgument("search axis needs finite min <= max");
  }
  if (max == min) return {min};
  if (!(step > 0.0)) throw InvalidArgument("search axis step must be > 0");
  std::vector<double> v;
  const int n = static_cast<int>(std::floor((max - min) / step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(min + step * i);
  return v;
}

PlacementResult optimize_placement(const KinematicChain& chain,
                                   const std::vector<Vec3>& trajectory,
                                   const PlacementSearch& search,
                                   const MapOptions& options) {
  if (search.orientations.empty()) throw InvalidArgument("no orientations to search");
  const auto xs = search.tx.values();
  const auto ys = search.ty.values();
  const auto ts = search.theta.values();
  PlacementResult best;
  for (double x : xs) {
    for (double y : ys) {
      for (double t : ts) {
        for (auto o : search.orientations) {
          const Placement p{x, y, t};
          const auto pi = rank_placement(chain, trajectory, p, o, options);
          ++best.evaluated;
          if (pi && (!best.pi_opt || *pi > *best.pi_opt + kPlacementTieTolerance * std::max(1.0, *best.pi_opt))) {
            best.pi_opt = pi;
            best.placement = p;
            best.orientation = o;
          }
        }
      }
    }
  }
  return best;
}

}  // namespace rvf
