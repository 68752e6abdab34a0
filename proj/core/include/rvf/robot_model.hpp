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

// Serial revolute-chain kinematics and rigid-body dynamics.
//
// Conventions: every joint frame is obtained from its parent by a fixed
// origin transform followed by a rotation q_i about the joint axis
// (URDF style). Link i is rigidly attached to joint frame i. Jacobians are
// geometric, expressed in the base frame, with linear rows first.
// Dynamics follow M(q) qdd + C(q, qd) qd + g(q) = tau + J^T F.

#ifndef RVF_ROBOT_MODEL_HPP_
#define RVF_ROBOT_MODEL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "rvf/common.hpp"

namespace rvf {

struct JointSpec {
  Vec3 axis = Vec3::UnitZ();             // unit, in the joint frame
  Iso3 origin = Iso3::Identity();        // parent frame -> joint frame at q = 0
  double q_min = -M_PI;                  // rad
  double q_max = M_PI;                   // rad
  double tau_lim = 1.0;                  // N m
};

struct LinkSpec {
  double mass = 0.0;                     // kg
  Vec3 com = Vec3::Zero();               // m, in the joint frame
  Mat3 inertia = Mat3::Zero();           // kg m^2, about the COM, joint frame
};

struct KinematicChain {
  std::string name;
  std::vector<JointSpec> joints;
  std::vector<LinkSpec> links;           // one per joint
  Iso3 tool = Iso3::Identity();          // last joint frame -> end effector
  Vec3 gravity{0.0, 0.0, -9.81};         // m/s^2, base frame

  int dof() const { return static_cast<int>(joints.size()); }

  /// Throws InvalidArgument when any structural invariant is broken.
  void validate() const;

  VecX q_min() const;
  VecX q_max() const;
  VecX tau_limits() const;
  /// Middle of every joint range.
  VecX q_center() const;
  bool within_limits(const VecX& q, double tol = 0.0) const;
};

struct RobotState {
  VecX q;
  VecX qdot;
};

struct TaskPose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
};

/// World transforms of every joint frame (after its rotation) and of the
/// end effector.
struct ChainFrames {
  std::vector<Iso3> joints;
  Iso3 end_effector = Iso3::Identity();
};

ChainFrames chain_frames(const KinematicChain& chain, const VecX& q);

TaskPose forward_kinematics(const KinematicChain& chain, const VecX& q);

/// 6 x n geometric Jacobian of the end-effector point.
Mat6X geometric_jacobian(const KinematicChain& chain, const VecX& q);

/// Jdot(q, qd) * qd, the velocity-product term of the end-effector twist
/// derivative (linear rows first).
Vec6 jacobian_dot_qdot(const KinematicChain& chain, const RobotState& state);

struct JointDynamics {
  MatX M;        // n x n, symmetric positive definite
  VecX c_qdot;   // C(q, qd) qd
  VecX g;        // gradient of the gravitational potential
};

/// Mass matrix by the composite-rigid-body algorithm, velocity and gravity
/// terms by recursive Newton-Euler.
JointDynamics joint_space_dynamics(const KinematicChain& chain,
                                   const RobotState& state);

MatX mass_matrix(const KinematicChain& chain, const VecX& q);

/// Recursive Newton-Euler inverse dynamics M qdd + C qd + g (gravity
/// included only when `with_gravity`).
VecX inverse_dynamics(const KinematicChain& chain, const VecX& q,
                      const VecX& qdot, const VecX& qddot,
                      bool with_gravity = true);

VecX gravity_torque(const KinematicChain& chain, const VecX& q);

/// Coriolis matrix from the Christoffel symbols of M, so that Mdot - 2C is
/// skew-symmetric. dM/dq is taken by central differences of the CRBA.
MatX coriolis_matrix(const KinematicChain& chain, const RobotState& state);

double potential_energy(const KinematicChain& chain, const VecX& q);
double kinetic_energy(const KinematicChain& chain, const RobotState& state);

struct IkOptions {
  double damping = 1e-3;
  int max_iterations = 200;
  double position_tolerance = 1e-5;     // m
  double orientation_tolerance = 1e-4;  // rad
  /// Ignore orientation (planar or position-only chains).
  bool position_only = false;
};

/// Damped least-squares IK from one seed; std::nullopt means Unreachable.
/// The returned q lies within the joint limits.
std::optional<VecX> inverse_kinematics(const KinematicChain& chain,
                                       const TaskPose& target,
                                       const VecX& seed,
                                       const IkOptions& options = {});

/// Tries each seed in order, then the mid-range posture.
std::optional<VecX> inverse_kinematics_multi(const KinematicChain& chain,
                                             const TaskPose& target,
                                             const std::vector<VecX>& seeds,
                                             const IkOptions& options = {});

/// Orientation error as a rotation vector taking `current` to `target`.
Vec3 orientation_error(const Quat& target, const Quat& current);

struct DynConsistentInverse {
  MatX pinv;      // n x m, M^-1 J^T (J M^-1 J^T)^-1
  MatX lambda;    // m x m task-space inertia (J M^-1 J^T)^-1
  bool degraded = false;  // damped inverse used
};

/// Dynamically consistent generalized inverse of an m x n Jacobian. Falls
/// back to a damped inverse of the task inertia when J M^-1 J^T is near
/// singular and flags the result as degraded.
DynConsistentInverse dyn_consistent_pinv(const MatX& J, const MatX& M,
                                         double singular_threshold = 1e-9,
                                         double damping = 1e-4);

/// Joint accelerations M^-1 (tau + J^T F - C qd - g).
VecX forward_dynamics(const KinematicChain& chain, const RobotState& state,
                      const VecX& tau, const Vec6& wrench);

/// One semi-implicit Euler step (qd += qdd dt, then q += qd dt).
/// Throws NumericalFault on non-finite accelerations.
RobotState integrate_dynamics(const KinematicChain& chain,
                              const RobotState& state, const VecX& tau,
                              const Vec6& wrench, double dt);

/// Clamps q to the joint limits and zeroes the velocity of every clamped
/// joint. Returns the indices of the clamped joints.
std::vector<int> clamp_to_limits(const KinematicChain& chain, RobotState& state);

}  // namespace rvf

#endif  // RVF_ROBOT_MODEL_HPP_
