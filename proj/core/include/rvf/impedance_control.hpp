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

// Torque-level Cartesian impedance control.
//
// The end-effector task is 6D (position, then orientation). With the
// dynamically consistent inverse Jb = M^-1 J^T Lambda the law
//
//   tau = M Jb (a - Jdot qd) + C qd + g + tau_r
//   a   = xdd_d - Lambda^-1 ((D + Lambda_dot / 2) e_dot + F_el)
//
// gives Lambda e_dd + (D + Lambda_dot / 2) e_dot + F_el = [F_h; 0] in the
// task space. The translational rows carry the fixture elastic force; the
// rotational rows a quaternion PD toward a constant orientation. tau_r is
// a joint-centering torque projected into the null space of the task.

#ifndef RVF_IMPEDANCE_CONTROL_HPP_
#define RVF_IMPEDANCE_CONTROL_HPP_

#include <optional>
#include <vector>

#include "rvf/common.hpp"
#include "rvf/robot_model.hpp"
#include "rvf/virtual_fixture.hpp"

namespace rvf {

enum class CenteringForm {
  kSquared,  // w = 1/(2n) sum ((q_i - qc_i) / (q_max_i - q_min_i))^2
  kLinear,   // w = 1/(2n) sum (q_i - qc_i) / (q_max_i - q_min_i)
};

struct ControlGains {
  ElasticParams elastic;
  double k0 = 1.0;                     // null-space centering gain
  double nullspace_damping = 0.5;      // N m s/rad on the self-motion
  double orientation_stiffness = 50.0; // N m/rad
  double orientation_damping = 1.0;    // N m s/rad
  CenteringForm centering = CenteringForm::kSquared;
  /// Clip tau to the joint torque limits.
  bool saturate = true;
  /// Orthogonal deviation at which a ChannelViolation is raised, as a
  /// fraction of delta.
  double guard_fraction = 0.999;
  void validate() const;
};

/// Critical-damping heuristic 2 sqrt(chi m) on every axis.
Mat3 default_task_damping(double chi, double nominal_mass = 3.0);

/// Gradient of the joint-centering objective w(q).
VecX joint_centering_gradient(const KinematicChain& chain, const VecX& q,
                              CenteringForm form = CenteringForm::kSquared);

/// (I - J^T Jb^T) tau0. Returns zeros when J has at least as many rows as
/// columns.
VecX nullspace_projection(const MatX& J, const MatX& M, const VecX& tau0);

/// tau0 = -k0 grad w(q), projected into the null space of J.
VecX nullspace_torque(const KinematicChain& chain, const VecX& q, const MatX& M,
                      const MatX& J, double k0,
                      CenteringForm form = CenteringForm::kSquared);

struct TaskReference {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  Vec3 tangent = Vec3::UnitX();            // path tangent at the proxy
  Quat orientation = Quat::Identity();     // constant target orientation
};

TaskReference to_task_reference(const ReferenceKinematics& ref,
                                const Quat& orientation);

/// Quaternion orientation error q q_d^-1 with non-negative scalar part.
Quat orientation_deviation(const Quat& current, const Quat& target);

/// 4 k (1 - |w|) for the error quaternion; its gradient is the PD torque.
double orientation_potential(double stiffness, const Quat& error);

struct ControlOutput {
  VecX tau;                   // commanded, after saturation
  VecX tau_null;              // null-space part before saturation
  JointDynamics dynamics;     // M, C qd, g at the state
  Mat6X J;
  MatX lambda;                // 6 x 6 task inertia
  Vec3 x = Vec3::Zero();
  Vec3 xdot = Vec3::Zero();
  Vec3 omega = Vec3::Zero();
  Quat orientation = Quat::Identity();
  Deviation deviation;        // of x - x_d
  Vec3 f_el = Vec3::Zero();
  Vec3 m_rot = Vec3::Zero();  // orientation restoring moment
  double u_el = 0.0;
  double u_rot = 0.0;
  Vec6 e_dot = Vec6::Zero();  // [xd - xd_d; omega]
  bool degraded = false;
  std::vector<int> saturated;
};

/// Stateless evaluation of the control law (Lambda_dot taken as zero).
/// Throws ChannelViolation at the guard radius.
ControlOutput impedance_torque(const KinematicChain& chain,
                               const RobotState& state,
                               const TaskReference& ref,
                               const ControlGains& gains);

/// Control law with the one-tick memory needed for Lambda_dot.
class ImpedanceController {
 public:
  ImpedanceController(const KinematicChain& chain, ControlGains gains,
                      double dt);

  ControlOutput compute(const RobotState& state, const TaskReference& ref);
  void reset() { previous_lambda_.reset(); }

  const ControlGains& gains() const { return gains_; }

 private:
  const KinematicChain* chain_;
  ControlGains gains_;
  double dt_;
  std::optional<MatX> previous_lambda_;
};

}  // namespace rvf

#endif  // RVF_IMPEDANCE_CONTROL_HPP_
