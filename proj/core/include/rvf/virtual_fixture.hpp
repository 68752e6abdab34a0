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

// Admittance-type guiding fixture.
//
// A virtual point mass (the proxy) slides along the arc-length path under
// the tangential component of the measured interaction force:
//
//   m sdd + b sd = F_par + F_virtual,   F_par = phi'(s)^T F_h.
//
// The proxy position gives the reference x_d = phi(s) tracked by the
// impedance controller. The deviation x - x_d is split into tangent and
// orthogonal parts; the tangent part sees a linear spring kappa and the
// orthogonal part a barrier spring that diverges at the channel radius
// delta:
//
//   F_el = kappa x_par + chi delta^2 / (delta^2 - |x_perp|^2) x_perp
//   U_el = kappa/2 |x_par|^2 + chi delta^2 / 2 log(delta^2 / (delta^2 - |x_perp|^2))

#ifndef RVF_VIRTUAL_FIXTURE_HPP_
#define RVF_VIRTUAL_FIXTURE_HPP_

#include <limits>

#include "rvf/common.hpp"
#include "rvf/spline_path.hpp"

namespace rvf {

struct ProxyState {
  double s = 0.0;     // m along the path, in [0, l]
  double sdot = 0.0;  // m/s
};

struct VirtualMassParams {
  double m = 5.0;          // kg
  double b = 15.0;         // N s/m
  double f_virtual = 0.0;  // N along the tangent; > 0 assists
  /// Feed the path-coupling force back into the proxy.
  bool path_coupling = true;
  void validate() const;
};

struct ElasticParams {
  double kappa = 2500.0;   // N/m, tangent spring
  double chi = 500.0;      // N/m, orthogonal stiffness at zero deflection
  double delta = 0.02;     // m, channel radius
  Mat3 K_D = Mat3::Identity() * 100.0;  // N s/m, task damping
  void validate() const;
};

/// F_par = tangent^T F_h.
double tangential_force(const Vec3& tangent, const Vec3& force);
double tangential_force(const PathCurve& path, double s, const Vec3& force);

/// (F_par + F_virtual - b sdot) / m. A proxy resting on an end of
/// [0, length] gets zero acceleration when pushed outward.
double proxy_acceleration(const ProxyState& state,
                          const VirtualMassParams& params, double f_par,
                          double length = std::numeric_limits<double>::infinity());

struct ProxyStep {
  ProxyState state;
  double sddot = 0.0;     // acceleration used for the step
  bool clamped = false;   // hit an end of the path
};

/// Semi-implicit Euler step of the proxy on [0, length]. Leaving the range
/// puts the proxy on the bound with zero velocity (inelastic stop).
ProxyStep step_proxy(const ProxyState& state, const VirtualMassParams& params,
                     double f_par, double dt, double length);

struct ReferenceKinematics {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Vec3 acceleration = Vec3::Zero();
  Vec3 tangent = Vec3::UnitX();
};

/// x_d = phi(s), xd_d = phi' sd, xdd_d = phi'' sd^2 + phi' sdd, with the
/// caller-provided sdd (the one used to step the proxy in the same tick).
ReferenceKinematics reference_kinematics(const PathCurve& path,
                                         const ProxyState& state,
                                         double sddot);

/// Same, with sdd computed from the proxy dynamics.
ReferenceKinematics reference_kinematics(const PathCurve& path,
                                         const ProxyState& state,
                                         const VirtualMassParams& params,
                                         double f_par);

struct Deviation {
  Vec3 parallel = Vec3::Zero();
  Vec3 orthogonal = Vec3::Zero();
};

/// Tangent and orthogonal projections of x_tilde; `tangent` must be unit.
Deviation decompose_deviation(const Vec3& tangent, const Vec3& x_tilde);
Deviation decompose_deviation(const PathCurve& path, double s,
                              const Vec3& x_tilde);

/// Magnitude of the orthogonal barrier force at deflection z in [0, delta).
double barrier_force(double chi, double delta, double z);
/// Barrier potential at deflection z in [0, delta).
double barrier_potential(double chi, double delta, double z);

/// Generalized force of U_el on the proxy coordinate from the rotation of
/// the tangent at fixed x_tilde: -dU/dt . phi''. Zero on straight segments.
double path_coupling_force(const ElasticParams& params, const PathPoint& point,
                           const Vec3& x_tilde);

/// Elastic force; throws ChannelViolation if |x_perp| >= delta.
Vec3 elastic_force(const ElasticParams& params, const Deviation& dev);

/// Elastic potential; throws ChannelViolation if |x_perp| >= delta.
double elastic_potential(const ElasticParams& params, const Deviation& dev);

}  // namespace rvf

#endif  // RVF_VIRTUAL_FIXTURE_HPP_
