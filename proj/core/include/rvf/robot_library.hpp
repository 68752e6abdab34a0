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

#ifndef RVF_ROBOT_LIBRARY_HPP_
#define RVF_ROBOT_LIBRARY_HPP_

#include <string_view>

#include "rvf/robot_model.hpp"

namespace rvf::robots {

/// 7-DOF arm with the publicly documented kinematic offsets, joint ranges
/// and torque limits of a Franka Emika Panda. Link masses, centers of mass
/// and inertias are plausible placeholders, not identified values.
KinematicChain panda7();

/// "Ready" posture of panda7() with the flange pointing down.
VecX panda7_ready();

/// Two-link arm in the vertical x-z plane. Both joints rotate about -y, so
/// q = (0, 0) stretches the arm along +x and positive angles lift it.
/// Links are uniform rods of the given masses.
KinematicChain planar_two_link(double l1 = 0.5, double l2 = 0.4,
                               double m1 = 2.0, double m2 = 1.5,
                               double tau1 = 40.0, double tau2 = 20.0);

/// Three-link variant of planar_two_link().
KinematicChain planar_three_link(double l1, double l2, double l3, double m1,
                                 double m2, double m3, double tau1,
                                 double tau2, double tau3);

/// Single link of length `length` along +x rotating about `axis`, with a
/// point-like mass at `com_distance` along the link.
KinematicChain single_link(double length, double mass, double com_distance,
                           const Vec3& axis, double tau_lim);

/// Looks up a builtin model by name: "panda7", "planar2", "single_link".
/// Throws InvalidArgument for unknown names.
KinematicChain by_name(std::string_view name);

}  // namespace rvf::robots

#endif  // RVF_ROBOT_LIBRARY_HPP_
