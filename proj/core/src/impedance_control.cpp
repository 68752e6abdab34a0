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

#include "rvf/impedance_control.hpp"

#include <cmath>
#include <string>

namespace rvf {

void ControlGains::validate() const {
  elastic.validate();
  if (!(k0 >= 0.0)) throw InvalidArgument("k0 must be >= 0");
  if (!(nullspace_damping >= 0.0)) throw InvalidArgument("nullspace_damping must be >= 0");
  if (!(orientation_stiffness > 0.0)) {
    throw InvalidArgument("orientation_stiffness must be > 0");
  }
  if (!(orientation_damping > 0.0)) {
    throw InvalidArgument("orientation_damping must be > 0");
  }
  if (!(guard_fraction > 0.0 && guard_fraction <= 1.0)) {
    throw InvalidArgument("guard_fraction must lie in (0, 1]");
  }
}

Mat3 default_task_damping(double chi, double nominal_mass) {
  if (!(chi > 0.0) || !(nominal_mass > 0.0)) {
    throw InvalidArgument("default_task_damping: chi and mass must be > 0");
  }
  return Mat3::Identity() * (2.0 * std::sqrt(chi * nominal_mass));
}

VecX joint_centering_gradient(const KinematicChain& chain, const VecX& q,
                              CenteringForm form) {
  const int n = chain.dof();
  if (q.size() != n) throw InvalidArgument("joint_centering_gradient: q has wrong size");
  VecX grad(n);
  for (int i = 0; i < n; ++i) {
    const auto& j = chain.joints[static_cast<size_t>(i)];
    const double range = j.q_max - j.q_min;
    if (!std::isfinite(range) || !(range > 0.0)) {
      throw InvalidArgument("joint_centering_gradient: joint " + std::to_string(i) +
                            " needs finite limits");
    }
    const double center = 0.5 * (j.q_max + j.q_min);
    if (form == CenteringForm::kSquared) {
      grad[i] = (q[i] - center) / (n * range * range);
    } else {
      grad[i] = 1.0 / (2.0 * n * range);
    }
  }
  return grad;
}

namespace {

VecX project(const MatX& J, const MatX& pinv, const VecX& tau0) {
  // J^T Jb^T tau0
  return tau0 - J.transpose() * (pinv.transpose() * tau0);
}

}  // namespace

VecX nullspace_projection(const MatX& J, const MatX& M, const VecX& tau0) {
  if (J.cols() != tau0.size()) throw InvalidArgument("nullspace_projection: size mismatch");
  if (J.rows() >= J.cols()) return VecX::Zero(tau0.size());
  return project(J, dyn_consistent_pinv(J, M).pinv, tau0);
}

VecX nullspace_torque(const KinematicChain& chain, const VecX& q, const MatX& M,
                      const MatX& J, double k0, CenteringForm form) {
  if (J.rows() >= J.cols()) return VecX::Zero(chain.dof());
  const VecX tau0 = -k0 * joint_centering_gradient(chain, q, form);
  return nullspace_projection(J, M, tau0);
}

TaskReference to_task_reference(const ReferenceKinematics& ref,
                                const Quat& orientation) {
  TaskReference t;
  t.position = ref.position;
  t.velocity = ref.velocity;
  t.acceleration = ref.acceleration;
  t.tangent = ref.tangent;
  t.orientation = orientation;
  return t;
}

Quat orientation_deviation(const Quat& current, const Quat& target) {
  Quat e = (current * target.conjugate()).normalized();
  if (e.w() < 0.0) e.coeffs() = -e.coeffs();
  return e;
}

double orientation_potential(double stiffness, const Quat& error) {
  return 4.0 * stiffness * (1.0 - std::abs(error.w()));
}

namespace {

ControlOutput control_law(const KinematicChain& chain, const RobotState& state,
                          const TaskReference& ref, const ControlGains& gains,
                          const MatX* previous_lambda, double dt) {
  if (!ref.position.allFinite() || !ref.velocity.allFinite() ||
      !ref.acceleration.allFinite()) {
    throw InvalidArgument("impedance_torque: non-finite reference");
  }
  ControlOutput out;
  const ChainFrames frames = chain_frames(chain, state.q);
  out.x = frames.end_effector.translation();
  out.orientation = Quat(frames.end_effector.rotation());
  out.J = geometric_jacobian(chain, state.q);
  const Vec6 twist = out.J * state.qdot;
  out.xdot = twist.head<3>();
  out.omega = twist.tail<3>();

  const Vec3 x_tilde = out.x - ref.position;
  out.deviation = decompose_deviation(ref.tangent, x_tilde);
  const auto& el = gains.elastic;
  const double z = out.deviation.orthogonal.norm();
  if (z >= gains.guard_fraction * el.delta) {
    throw ChannelViolation("orthogonal deviation " + std::to_string(z) +
                           " m reached the guard at " +
                           std::to_string(gains.guard_fraction * el.delta) + " m");
  }
  out.f_el = elastic_force(el, out.deviation);
  out.u_el = elastic_potential(el, out.deviation);

  const Quat err = orientation_deviation(out.orientation, ref.orientation);
  out.m_rot = 2.0 * gains.orientation_stiffness * err.vec();
  out.u_rot = orientation_potential(gains.orientation_stiffness, err);

  out.e_dot.head<3>() = out.xdot - ref.velocity;
  out.e_dot.tail<3>() = out.omega;

  out.dynamics = joint_space_dynamics(chain, state);
  const DynConsistentInverse dci = dyn_consistent_pinv(out.J, out.dynamics.M);
  out.lambda = dci.lambda;
  out.degraded = dci.degraded;

  Mat6 D = Mat6::Zero();
  D.topLeftCorner<3, 3>() = el.K_D;
  D.bottomRightCorner<3, 3>() = Mat3::Identity() * gains.orientation_damping;
  MatX damping = D;
  if (previous_lambda != nullptr) damping += (0.5 / dt) * (out.lambda - *previous_lambda);

  Vec6 acc_d = Vec6::Zero();
  acc_d.head<3>() = ref.acceleration;
  Vec6 restoring;
  restoring << out.f_el, out.m_rot;
  const Vec6 jdqd = jacobian_dot_qdot(chain, state);
  const VecX wrench = out.lambda * (acc_d - jdqd) - damping * out.e_dot - restoring;

  const int n = chain.dof();
  if (n > 6) {
    const VecX tau0 = -gains.k0 * joint_centering_gradient(chain, state.q, gains.centering) -
                      gains.nullspace_damping * state.qdot;
    out.tau_null = project(out.J, dci.pinv, tau0);
  } else {
    out.tau_null = VecX::Zero(n);
  }

  out.tau = out.J.transpose() * wrench + out.dynamics.c_qdot + out.dynamics.g + out.tau_null;
  if (!out.tau.allFinite()) throw NumericalFault("non-finite control torque");
  if (gains.saturate) {
    for (int i = 0; i < n; ++i) {
      const double lim = chain.joints[static_cast<size_t>(i)].tau_lim;
      if (std::abs(out.tau[i]) > lim) {
        out.tau[i] = std::copysign(lim, out.tau[i]);
        out.saturated.push_back(i);
      }
    }
  }
  return out;
}

}  // namespace

ControlOutput impedance_torque(const KinematicChain& chain,
                               const RobotState& state,
                               const TaskReference& ref,
                               const ControlGains& gains) {
  return control_law(chain, state, ref, gains, nullptr, 1.0);
}

ImpedanceController::ImpedanceController(const KinematicChain& chain,
                                         ControlGains gains, double dt)
    : chain_(&chain), gains_(std::move(gains)), dt_(dt) {
  gains_.validate();
  if (!(dt_ > 0.0)) throw InvalidArgument("controller dt must be > 0");
}

ControlOutput ImpedanceController::compute(const RobotState& state,
                                           const TaskReference& ref) {
  ControlOutput out = control_law(*chain_, state, ref, gains_,
                                  previous_lambda_ ? &*previous_lambda_ : nullptr, dt_);
  previous_lambda_ = out.lambda;
  return out;
}

}  // namespace rvf
