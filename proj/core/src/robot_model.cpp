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

#include "rvf/robot_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace rvf {
namespace {

// Spatial vectors are (angular; linear), expressed in the base frame and
// referred to the base origin.

Mat3 skew(const Vec3& v) {
  Mat3 S;
  S << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return S;
}

// Motion cross product v x m.
Vec6 cross_motion(const Vec6& v, const Vec6& m) {
  const Vec3 w = v.head<3>();
  const Vec3 vo = v.tail<3>();
  Vec6 out;
  out.head<3>() = w.cross(m.head<3>());
  out.tail<3>() = w.cross(m.tail<3>()) + vo.cross(m.head<3>());
  return out;
}

// Force cross product v x* f.
Vec6 cross_force(const Vec6& v, const Vec6& f) {
  const Vec3 w = v.head<3>();
  const Vec3 vo = v.tail<3>();
  Vec6 out;
  out.head<3>() = w.cross(f.head<3>()) + vo.cross(f.tail<3>());
  out.tail<3>() = w.cross(f.tail<3>());
  return out;
}

// Per-configuration quantities shared by the algorithms below.
struct SpatialModel {
  ChainFrames frames;
  std::vector<Vec6> S;     // joint motion subspaces
  std::vector<Mat6> I;     // link spatial inertias about the base origin
};

SpatialModel spatial_model(const KinematicChain& chain, const VecX& q) {
  SpatialModel sm;
  sm.frames = chain_frames(chain, q);
  const size_t n = chain.joints.size();
  sm.S.resize(n);
  sm.I.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const Iso3& T = sm.frames.joints[i];
    const Vec3 z = T.linear() * chain.joints[i].axis;
    const Vec3 o = T.translation();
    sm.S[i] << z, o.cross(z);

    const LinkSpec& link = chain.links[i];
    const Vec3 c = T * link.com;
    const Mat3 Ic = T.linear() * link.inertia * T.linear().transpose();
    const Mat3 C = skew(c);
    Mat6 I6;
    I6.topLeftCorner<3, 3>() = Ic - link.mass * C * C;
    I6.topRightCorner<3, 3>() = link.mass * C;
    I6.bottomLeftCorner<3, 3>() = -link.mass * C;
    I6.bottomRightCorner<3, 3>() = link.mass * Mat3::Identity();
    sm.I[i] = I6;
  }
  return sm;
}

// Recursive Newton-Euler on a prepared model.
VecX rnea(const KinematicChain& chain, const SpatialModel& sm,
          const VecX& qdot, const VecX* qddot, bool with_gravity) {
  const size_t n = chain.joints.size();
  std::vector<Vec6> f(n);
  Vec6 v = Vec6::Zero();
  Vec6 a = Vec6::Zero();
  if (with_gravity) a.tail<3>() = -chain.gravity;
  for (size_t i = 0; i < n; ++i) {
    const Vec6 vj = sm.S[i] * qdot[static_cast<Eigen::Index>(i)];
    v += vj;
    a += cross_motion(v, vj);
    if (qddot) a += sm.S[i] * (*qddot)[static_cast<Eigen::Index>(i)];
    const Vec6 h = sm.I[i] * v;
    f[i] = sm.I[i] * a + cross_force(v, h);
  }
  VecX tau(static_cast<Eigen::Index>(n));
  Vec6 acc = Vec6::Zero();
  for (size_t k = n; k-- > 0;) {
    acc += f[k];
    tau[static_cast<Eigen::Index>(k)] = sm.S[k].dot(acc);
  }
  return tau;
}

MatX crba(const SpatialModel& sm) {
  const auto n = static_cast<Eigen::Index>(sm.S.size());
  MatX M(n, n);
  Mat6 Ic = Mat6::Zero();
  for (Eigen::Index j = n; j-- > 0;) {
    Ic += sm.I[static_cast<size_t>(j)];
    const Vec6 F = Ic * sm.S[static_cast<size_t>(j)];
    for (Eigen::Index i = 0; i <= j; ++i) {
      M(i, j) = sm.S[static_cast<size_t>(i)].dot(F);
      M(j, i) = M(i, j);
    }
  }
  return M;
}

Mat6X jacobian_from(const KinematicChain& chain, const ChainFrames& frames) {
  const auto n = static_cast<Eigen::Index>(chain.joints.size());
  Mat6X J(6, n);
  const Vec3 p = frames.end_effector.translation();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Iso3& T = frames.joints[static_cast<size_t>(i)];
    const Vec3 z = T.linear() * chain.joints[static_cast<size_t>(i)].axis;
    J.block<3, 1>(0, i) = z.cross(p - T.translation());
    J.block<3, 1>(3, i) = z;
  }
  return J;
}

void check_dim(const KinematicChain& chain, const VecX& v, const char* what) {
  if (v.size() != chain.dof()) {
    throw InvalidArgument(std::string(what) + " has dimension " +
                          std::to_string(v.size()) + ", chain has " +
                          std::to_string(chain.dof()) + " joints");
  }
}

}  // namespace

void KinematicChain::validate() const {
  if (joints.empty()) throw InvalidArgument("chain needs at least one joint");
  if (links.size() != joints.size()) {
    throw InvalidArgument("chain needs exactly one link per joint");
  }
  for (size_t i = 0; i < joints.size(); ++i) {
    const auto& j = joints[i];
    const std::string tag = "joint " + std::to_string(i);
    if (std::abs(j.axis.norm() - 1.0) > 1e-9) throw InvalidArgument(tag + ": axis must be unit");
    if (!(j.q_min < j.q_max)) throw InvalidArgument(tag + ": q_min must be < q_max");
    if (!(j.tau_lim > 0.0)) throw InvalidArgument(tag + ": tau_lim must be > 0");
    const auto& l = links[i];
    if (!(l.mass > 0.0)) throw InvalidArgument("link " + std::to_string(i) + ": mass must be > 0");
    if ((l.inertia - l.inertia.transpose()).norm() > 1e-12) {
      throw InvalidArgument("link " + std::to_string(i) + ": inertia must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(l.inertia);
    if (!(es.eigenvalues().minCoeff() > 0.0)) {
      throw InvalidArgument("link " + std::to_string(i) + ": inertia must be positive definite");
    }
  }
  if (!gravity.allFinite()) throw InvalidArgument("gravity must be finite");
}

VecX KinematicChain::q_min() const {
  VecX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints[static_cast<size_t>(i)].q_min;
  return v;
}

VecX KinematicChain::q_max() const {
  VecX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints[static_cast<size_t>(i)].q_max;
  return v;
}

VecX KinematicChain::tau_limits() const {
  VecX v(dof());
  for (int i = 0; i < dof(); ++i) v[i] = joints[static_cast<size_t>(i)].tau_lim;
  return v;
}

VecX KinematicChain::q_center() const { return 0.5 * (q_min() + q_max()); }

bool KinematicChain::within_limits(const VecX& q, double tol) const {
  for (int i = 0; i < dof(); ++i) {
    const auto& j = joints[static_cast<size_t>(i)];
    if (q[i] < j.q_min - tol || q[i] > j.q_max + tol) return false;
  }
  return true;
}

ChainFrames chain_frames(const KinematicChain& chain, const VecX& q) {
  check_dim(chain, q, "q");
  ChainFrames out;
  out.joints.reserve(chain.joints.size());
  Iso3 T = Iso3::Identity();
  for (size_t i = 0; i < chain.joints.size(); ++i) {
    const auto& j = chain.joints[i];
    T = T * j.origin;
    T.rotate(Eigen::AngleAxisd(q[static_cast<Eigen::Index>(i)], j.axis));
    out.joints.push_back(T);
  }
  out.end_effector = T * chain.tool;
  return out;
}

TaskPose forward_kinematics(const KinematicChain& chain, const VecX& q) {
  const Iso3 T = chain_frames(chain, q).end_effector;
  TaskPose pose;
  pose.position = T.translation();
  pose.orientation = Quat(T.linear()).normalized();
  return pose;
}

Mat6X geometric_jacobian(const KinematicChain& chain, const VecX& q) {
  return jacobian_from(chain, chain_frames(chain, q));
}

Vec6 jacobian_dot_qdot(const KinematicChain& chain, const RobotState& state) {
  check_dim(chain, state.q, "q");
  check_dim(chain, state.qdot, "qdot");
  const ChainFrames frames = chain_frames(chain, state.q);
  Vec6 v = Vec6::Zero();
  Vec6 a = Vec6::Zero();
  for (size_t i = 0; i < chain.joints.size(); ++i) {
    const Iso3& T = frames.joints[i];
    const Vec3 z = T.linear() * chain.joints[i].axis;
    Vec6 S;
    S << z, T.translation().cross(z);
    const Vec6 vj = S * state.qdot[static_cast<Eigen::Index>(i)];
    v += vj;
    a += cross_motion(v, vj);
  }
  // Classical acceleration of the end-effector point from the spatial one.
  const Vec3 p = frames.end_effector.translation();
  const Vec3 w = v.head<3>();
  const Vec3 vp = v.tail<3>() + w.cross(p);
  Vec6 out;
  out.head<3>() = a.tail<3>() + a.head<3>().cross(p) + w.cross(vp);
  out.tail<3>() = a.head<3>();
  return out;
}

MatX mass_matrix(const KinematicChain& chain, const VecX& q) {
  return crba(spatial_model(chain, q));
}

VecX inverse_dynamics(const KinematicChain& chain, const VecX& q,
                      const VecX& qdot, const VecX& qddot, bool with_gravity) {
  check_dim(chain, qdot, "qdot");
  check_dim(chain, qddot, "qddot");
  return rnea(chain, spatial_model(chain, q), qdot, &qddot, with_gravity);
}

VecX gravity_torque(const KinematicChain& chain, const VecX& q) {
  const VecX zero = VecX::Zero(chain.dof());
  return rnea(chain, spatial_model(chain, q), zero, nullptr, true);
}

JointDynamics joint_space_dynamics(const KinematicChain& chain,
                                   const RobotState& state) {
  check_dim(chain, state.qdot, "qdot");
  const SpatialModel sm = spatial_model(chain, state.q);
  JointDynamics out;
  out.M = crba(sm);
  const VecX zero = VecX::Zero(chain.dof());
  out.g = rnea(chain, sm, zero, nullptr, true);
  out.c_qdot = rnea(chain, sm, state.qdot, nullptr, false);
  return out;
}

MatX coriolis_matrix(const KinematicChain& chain, const RobotState& state) {
  const int n = chain.dof();
  const double h = 1e-6;
  std::vector<MatX> dM(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    VecX qp = state.q;
    VecX qm = state.q;
    qp[k] += h;
    qm[k] -= h;
    dM[static_cast<size_t>(k)] = (mass_matrix(chain, qp) - mass_matrix(chain, qm)) / (2.0 * h);
  }
  MatX C = MatX::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double c = 0.0;
      for (int k = 0; k < n; ++k) {
        const double gamma = 0.5 * (dM[static_cast<size_t>(k)](i, j) +
                                    dM[static_cast<size_t>(j)](i, k) -
                                    dM[static_cast<size_t>(i)](j, k));
        c += gamma * state.qdot[k];
      }
      C(i, j) = c;
    }
  }
  return C;
}

double potential_energy(const KinematicChain& chain, const VecX& q) {
  const ChainFrames frames = chain_frames(chain, q);
  double V = 0.0;
  for (size_t i = 0; i < chain.links.size(); ++i) {
    const Vec3 c = frames.joints[i] * chain.links[i].com;
    V -= chain.links[i].mass * chain.gravity.dot(c);
  }
  return V;
}

double kinetic_energy(const KinematicChain& chain, const RobotState& state) {
  return 0.5 * state.qdot.dot(mass_matrix(chain, state.q) * state.qdot);
}

Vec3 orientation_error(const Quat& target, const Quat& current) {
  Quat d = target * current.conjugate();
  if (d.w() < 0.0) d.coeffs() *= -1.0;
  const double vn = d.vec().norm();
  if (vn < 1e-12) return 2.0 * d.vec();
  const double angle = 2.0 * std::atan2(vn, d.w());
  return d.vec() * (angle / vn);
}

std::optional<VecX> inverse_kinematics(const KinematicChain& chain,
                                       const TaskPose& target,
                                       const VecX& seed,
                                       const IkOptions& options) {
  check_dim(chain, seed, "seed");
  const VecX lo = chain.q_min();
  const VecX hi = chain.q_max();
  VecX q = seed.cwiseMax(lo).cwiseMin(hi);
  const double lambda2 = options.damping * options.damping;
  const Eigen::Index rows = options.position_only ? 3 : 6;

  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  for (int it = 0; it < options.max_iterations; ++it) {
    const ChainFrames frames = chain_frames(chain, q);
    VecX e(rows);
    e.head<3>() = target.position - frames.end_effector.translation();
    if (!options.position_only) {
      e.tail<3>() = orientation_error(target.orientation,
                                      Quat(frames.end_effector.linear()));
    }
    const double err = e.norm();
    if (err < 1e-12) break;
    if (err < 0.999 * best) {
      best = err;
      since_best = 0;
    } else if (++since_best > 25) {
      break;
    }
    const MatX J = jacobian_from(chain, frames).topRows(rows);
    const MatX A = J * J.transpose() + lambda2 * MatX::Identity(rows, rows);
    VecX dq = J.transpose() * A.ldlt().solve(e);
    const double step = dq.norm();
    if (step > 0.5) dq *= 0.5 / step;
    const VecX next = (q + dq).cwiseMax(lo).cwiseMin(hi);
    if ((next - q).norm() < 1e-15) break;
    q = next;
  }

  const TaskPose reached = forward_kinematics(chain, q);
  if ((reached.position - target.position).norm() > options.position_tolerance) {
    return std::nullopt;
  }
  if (!options.position_only &&
      orientation_error(target.orientation, reached.orientation).norm() >
          options.orientation_tolerance) {
    return std::nullopt;
  }
  return q;
}

std::optional<VecX> inverse_kinematics_multi(const KinematicChain& chain,
                                             const TaskPose& target,
                                             const std::vector<VecX>& seeds,
                                             const IkOptions& options) {
  for (const VecX& seed : seeds) {
    if (auto q = inverse_kinematics(chain, target, seed, options)) return q;
  }
  return inverse_kinematics(chain, target, chain.q_center(), options);
}

DynConsistentInverse dyn_consistent_pinv(const MatX& J, const MatX& M,
                                         double singular_threshold,
                                         double damping) {
  if (M.rows() != M.cols() || M.rows() != J.cols()) {
    throw InvalidArgument("dyn_consistent_pinv: J is m x n and M must be n x n");
  }
  Eigen::LLT<MatX> llt(M);
  if (llt.info() != Eigen::Success) {
    throw InvalidArgument("dyn_consistent_pinv: M is not positive definite");
  }
  const MatX MinvJt = llt.solve(J.transpose());
  const MatX task_inv = J * MinvJt;  // J M^-1 J^T

  DynConsistentInverse out;
  Eigen::SelfAdjointEigenSolver<MatX> es(task_inv);
  const double max_ev = es.eigenvalues().maxCoeff();
  const double min_ev = es.eigenvalues().minCoeff();
  const auto m = J.rows();
  if (!(max_ev > 0.0) || min_ev < singular_threshold * max_ev) {
    out.degraded = true;
    const double mu2 = damping * damping * std::max(max_ev, 1.0);
    out.lambda = (task_inv + mu2 * MatX::Identity(m, m)).ldlt().solve(MatX::Identity(m, m));
  } else {
    out.lambda = task_inv.ldlt().solve(MatX::Identity(m, m));
  }
  out.lambda = 0.5 * (out.lambda + out.lambda.transpose());
  out.pinv = MinvJt * out.lambda;
  return out;
}

VecX forward_dynamics(const KinematicChain& chain, const RobotState& state,
                      const VecX& tau, const Vec6& wrench) {
  check_dim(chain, tau, "tau");
  const JointDynamics dyn = joint_space_dynamics(chain, state);
  const Mat6X J = geometric_jacobian(chain, state.q);
  const VecX rhs = tau + J.transpose() * wrench - dyn.c_qdot - dyn.g;
  return dyn.M.llt().solve(rhs);
}

RobotState integrate_dynamics(const KinematicChain& chain,
                              const RobotState& state, const VecX& tau,
                              const Vec6& wrench, double dt) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  const VecX qdd = forward_dynamics(chain, state, tau, wrench);
  if (!qdd.allFinite()) throw NumericalFault("non-finite joint acceleration");
  RobotState next;
  next.qdot = state.qdot + qdd * dt;
  next.q = state.q + next.qdot * dt;
  return next;
}

std::vector<int> clamp_to_limits(const KinematicChain& chain, RobotState& state) {
  std::vector<int> clamped;
  for (int i = 0; i < chain.dof(); ++i) {
    const auto& j = chain.joints[static_cast<size_t>(i)];
    if (state.q[i] < j.q_min || state.q[i] > j.q_max) {
      state.q[i] = std::clamp(state.q[i], j.q_min, j.q_max);
      state.qdot[i] = 0.0;
      clamped.push_back(i);
    }
  }
  return clamped;
}

}  // namespace rvf
