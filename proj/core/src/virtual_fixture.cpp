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
#include <string>

#include <Eigen/Eigenvalues>

namespace rvf {

void VirtualMassParams::validate() const {
  if (!(m > 0.0)) throw InvalidArgument("virtual mass m must be > 0");
  if (!(b > 0.0)) throw InvalidArgument("virtual damping b must be > 0");
  if (!std::isfinite(f_virtual)) throw InvalidArgument("F_virtual must be finite");
}

void ElasticParams::validate() const {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be > 0");
  if (!(chi > 0.0)) throw InvalidArgument("chi must be > 0");
  if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
  if ((K_D - K_D.transpose()).norm() > 1e-12 * (1.0 + K_D.norm())) {
    throw InvalidArgument("K_D must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(K_D);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw InvalidArgument("K_D must be positive definite");
  }
}

double tangential_force(const Vec3& tangent, const Vec3& force) {
  return tangent.dot(force);
}

double tangential_force(const PathCurve& path, double s, const Vec3& force) {
  return tangential_force(path.eval(s).tangent, force);
}

double proxy_acceleration(const ProxyState& state,
                          const VirtualMassParams& params, double f_par,
                          double length) {
  const double a = (f_par + params.f_virtual - params.b * state.sdot) / params.m;
  if (state.sdot == 0.0 && ((state.s <= 0.0 && a < 0.0) || (state.s >= length && a > 0.0))) {
    return 0.0;
  }
  return a;
}

ProxyStep step_proxy(const ProxyState& state, const VirtualMassParams& params,
                     double f_par, double dt, double length) {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be > 0");
  ProxyStep out;
  out.sddot = proxy_acceleration(state, params, f_par, length);
  out.state.sdot = state.sdot + out.sddot * dt;
  out.state.s = state.s + out.state.sdot * dt;
  if (out.state.s > length) {
    out.state.s = length;
    out.state.sdot = 0.0;
    out.clamped = true;
  } else if (out.state.s < 0.0) {
    out.state.s = 0.0;
    out.state.sdot = 0.0;
    out.clamped = true;
  }
  return out;
}

ReferenceKinematics reference_kinematics(const PathCurve& path,
                                         const ProxyState& state,
                                         double sddot) {
  const PathPoint p = path.eval(state.s);
  ReferenceKinematics r;
  r.position = p.position;
  r.tangent = p.tangent;
  r.velocity = p.tangent * state.sdot;
  r.acceleration = p.curvature * (state.sdot * state.sdot) + p.tangent * sddot;
  return r;
}

ReferenceKinematics reference_kinematics(const PathCurve& path,
                                         const ProxyState& state,
                                         const VirtualMassParams& params,
                                         double f_par) {
  return reference_kinematics(path, state,
                              proxy_acceleration(state, params, f_par));
}

Deviation decompose_deviation(const Vec3& tangent, const Vec3& x_tilde) {
  Deviation d;
  d.parallel = tangent * tangent.dot(x_tilde);
  d.orthogonal = x_tilde - d.parallel;
  return d;
}

Deviation decompose_deviation(const PathCurve& path, double s,
                              const Vec3& x_tilde) {
  return decompose_deviation(path.eval(s).tangent, x_tilde);
}

namespace {

void check_channel(double delta, double z) {
  if (!(z < delta)) {
    throw ChannelViolation("orthogonal deviation " + std::to_string(z) +
                           " m reached channel radius " + std::to_string(delta) + " m");
  }
}

}  // namespace

double barrier_force(double chi, double delta, double z) {
  check_channel(delta, z);
  const double d2 = delta * delta;
  return chi * d2 * z / (d2 - z * z);
}

double barrier_potential(double chi, double delta, double z) {
  check_channel(delta, z);
  const double d2 = delta * delta;
  // log(d2 / (d2 - z^2)) = -log1p(-z^2 / d2), accurate for small z.
  return 0.5 * chi * d2 * -std::log1p(-(z * z) / d2);
}

double path_coupling_force(const ElasticParams& params, const PathPoint& point,
                           const Vec3& x_tilde) {
  const Deviation dev = decompose_deviation(point.tangent, x_tilde);
  const double z = dev.orthogonal.norm();
  check_channel(params.delta, z);
  const double d2 = params.delta * params.delta;
  const double p = point.tangent.dot(x_tilde);
  // dU/dp at fixed |x_tilde|, times dp/ds from the turning tangent
  const double dU_dp = p * (params.kappa - params.chi * d2 / (d2 - z * z));
  return -dU_dp * point.curvature.dot(x_tilde);
}

Vec3 elastic_force(const ElasticParams& params, const Deviation& dev) {
  const double z = dev.orthogonal.norm();
  check_channel(params.delta, z);
  const double d2 = params.delta * params.delta;
  return params.kappa * dev.parallel +
         (params.chi * d2 / (d2 - z * z)) * dev.orthogonal;
}

double elastic_potential(const ElasticParams& params, const Deviation& dev) {
  const double z = dev.orthogonal.norm();
  return 0.5 * params.kappa * dev.parallel.squaredNorm() +
         barrier_potential(params.chi, params.delta, z);
}

}  // namespace rvf
