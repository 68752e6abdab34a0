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

// Payload capability of a serial arm over its workspace.
//
// The payload index at a posture is the largest vertical end-effector force
// (either sign) that keeps every joint torque within its limit on top of
// gravity:
//
//   P_z(q) = min_i (tau_lim_i - |g_i(q)|) / |J_3i(q)|
//
// Maps evaluate P_z on a grid of positions at a fixed flange orientation,
// and placement search picks the rigid planar move of a trajectory that
// maximizes its worst-case index.

#ifndef RVF_WORKSPACE_OPT_HPP_
#define RVF_WORKSPACE_OPT_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvf/common.hpp"
#include "rvf/robot_model.hpp"

namespace rvf {

/// Jacobian entries at or below this magnitude impose no bound.
inline constexpr double kPayloadJacobianEpsilon = 1e-6;

/// P_z(q) in N. +infinity when no joint can be loaded by a vertical force,
/// 0 when gravity alone saturates a joint.
double payload_index(const KinematicChain& chain, const VecX& q);

enum class FlangeOrientation { kDown, kHorizontal, kUp };

Quat flange_quaternion(FlangeOrientation o);
std::string_view to_string(FlangeOrientation o);
/// Accepts "down", "horizontal", "up".
FlangeOrientation parse_flange_orientation(std::string_view name);

struct WorkspaceGrid {
  Vec3 lower = Vec3::Zero();
  Vec3 upper = Vec3::Zero();
  double resolution = 0.05;   // m
  void validate() const;
  /// Points per axis.
  Eigen::Vector3i counts() const;
  /// Grid points, x slowest and z fastest.
  std::vector<Vec3> points() const;
};

struct PayloadSample {
  Vec3 position = Vec3::Zero();
  std::optional<double> value;  // empty: unreachable
};

using PayloadMap = std::vector<PayloadSample>;

struct MapOptions {
  IkOptions ik;
  /// Tried after the neighbor seed and before the mid-range posture.
  std::vector<VecX> seeds;
};

PayloadMap map_workspace(const KinematicChain& chain, const WorkspaceGrid& grid,
                         FlangeOrientation orientation,
                         const MapOptions& options = {});

struct Placement {
  double tx = 0.0;     // m
  double ty = 0.0;     // m
  double theta = 0.0;  // rad, about the vertical through the centroid
};

/// Rotates the points about the vertical through their centroid, then
/// translates them in x and y.
std::vector<Vec3> apply_placement(const std::vector<Vec3>& points,
                                  const Placement& placement);

/// pi = min_k P_z over the placed trajectory; empty if any point is
/// unreachable.
std::optional<double> rank_placement(const KinematicChain& chain,
                                     const std::vector<Vec3>& trajectory,
                                     const Placement& placement,
                                     FlangeOrientation orientation,
                                     const MapOptions& options = {});

struct SearchAxis {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;
  std::vector<double> values() const;
};

struct PlacementSearch {
  SearchAxis tx;
  SearchAxis ty;
  SearchAxis theta;
  std::vector<FlangeOrientation> orientations{FlangeOrientation::kDown};
};

struct PlacementResult {
  Placement placement;
  FlangeOrientation orientation = FlangeOrientation::kDown;
  std::optional<double> pi_opt;  // empty: every placement infeasible
  int evaluated = 0;
};

/// Relative margin below which two placement scores count as equal.
inline constexpr double kPlacementTieTolerance = 1e-9;

/// Exhaustive scan. Ties keep the lowest tx, then ty, then theta, then the
/// earliest orientation.
PlacementResult optimize_placement(const KinematicChain& chain,
                                   const std::vector<Vec3>& trajectory,
                                   const PlacementSearch& search,
                                   const MapOptions& options = {});

}  // namespace rvf

#endif  // RVF_WORKSPACE_OPT_HPP_
