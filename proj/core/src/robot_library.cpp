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

#include "rvf/robot_library.hpp"

#include <cmath>
#include <string>

namespace rvf::robots {
namespace {

Iso3 origin_xyz_rpy(double x, double y, double z, double roll, double pitch,
                    double yaw) {
  Iso3 T = Iso3::Identity();
  T.translate(Vec3(x, y, z));
  T.rotate(Eigen::AngleAxisd(yaw, Vec3::UnitZ()) *
           Eigen::AngleAxisd(pitch, Vec3::UnitY()) *
           Eigen::AngleAxisd(roll, Vec3::UnitX()));
  return T;
}

LinkSpec rod_link(double mass, double length) {
  LinkSpec l;
  l.mass = mass;
  l.com = Vec3(0.5 * length, 0.0, 0.0);
  const double transverse = mass * length * length / 12.0;
  const double axial = 1e-4 * mass;
  l.inertia = Vec3(axial, transverse, transverse).asDiagonal();
  return l;
}

}  // namespace

KinematicChain panda7() {
  KinematicChain c;
  c.name = "panda7";
  const double h = M_PI / 2.0;
  struct Row {
    double x, y, z, roll, q_min, q_max, tau;
  };
  const Row rows[7] = {
      {0.0, 0.0, 0.333, 0.0, -2.8973, 2.8973, 87.0},
      {0.0, 0.0, 0.0, -h, -1.7628, 1.7628, 87.0},
      {0.0, -0.316, 0.0, h, -2.8973, 2.8973, 87.0},
      {0.0825, 0.0, 0.0, h, -3.0718, -0.0698, 87.0},
      {-0.0825, 0.384, 0.0, -h, -2.8973, 2.8973, 12.0},
      {0.0, 0.0, 0.0, h, -0.0175, 3.7525, 12.0},
      {0.088, 0.0, 0.0, h, -2.8973, 2.8973, 12.0},
  };
  // Placeholder inertial data (mass kg, COM m, principal inertia kg m^2).
  struct Inertial {
    double m;
    Vec3 com;
    Vec3 I;
  };
  const Inertial inertial[7] = {
      {4.97, {0.0039, 0.0021, -0.0476}, {0.030, 0.030, 0.010}},
      {0.65, {-0.0031, -0.0287, 0.0035}, {0.008, 0.003, 0.008}},
      {3.23, {0.0275, 0.0393, -0.0665}, {0.037, 0.036, 0.010}},
      {3.59, {-0.0532, 0.1044, 0.0275}, {0.025, 0.018, 0.030}},
      {1.23, {-0.0120, 0.0411, -0.0384}, {0.035, 0.029, 0.009}},
      {1.67, {0.0601, -0.0141, -0.0105}, {0.004, 0.006, 0.005}},
      // Flange, force sensor and handle lumped into the last link.
      {1.10, {0.0105, -0.0043, 0.0800}, {0.006, 0.006, 0.003}},
  };
  for (int i = 0; i < 7; ++i) {
    JointSpec j;
    j.axis = Vec3::UnitZ();
    j.origin = origin_xyz_rpy(rows[i].x, rows[i].y, rows[i].z, rows[i].roll, 0, 0);
    j.q_min = rows[i].q_min;
    j.q_max = rows[i].q_max;
    j.tau_lim = rows[i].tau;
    c.joints.push_back(j);
    LinkSpec l;
    l.mass = inertial[i].m;
    l.com = inertial[i].com;
    l.inertia = inertial[i].I.asDiagonal();
    c.links.push_back(l);
  }
  c.tool = origin_xyz_rpy(0.0, 0.0, 0.107, 0.0, 0.0, 0.0);
  return c;
}

VecX panda7_ready() {
  VecX q(7);
  q << 0.0, -M_PI / 4.0, 0.0, -3.0 * M_PI / 4.0, 0.0, M_PI / 2.0, M_PI / 4.0;
  return q;
}

KinematicChain planar_two_link(double l1, double l2, double m1, double m2,
                               double tau1, double tau2) {
  KinematicChain c;
  c.name = "planar2";
  JointSpec j1;
  j1.axis = -Vec3::UnitY();
  j1.tau_lim = tau1;
  JointSpec j2 = j1;
  j2.origin = Iso3(Eigen::Translation3d(l1, 0.0, 0.0));
  j2.tau_lim = tau2;
  c.joints = {j1, j2};
  c.links = {rod_link(m1, l1), rod_link(m2, l2)};
  c.tool = Iso3(Eigen::Translation3d(l2, 0.0, 0.0));
  return c;
}

KinematicChain planar_three_link(double l1, double l2, double l3, double m1,
                                 double m2, double m3, double tau1,
                                 double tau2, double tau3) {
  KinematicChain c;
  c.name = "planar3";
  const double lengths[3] = {l1, l2, l3};
  const double masses[3] = {m1, m2, m3};
  const double taus[3] = {tau1, tau2, tau3};
  for (int i = 0; i < 3; ++i) {
    JointSpec j;
    j.axis = -Vec3::UnitY();
    j.tau_lim = taus[i];
    if (i > 0) j.origin = Iso3(Eigen::Translation3d(lengths[i - 1], 0.0, 0.0));
    c.joints.push_back(j);
    c.links.push_back(rod_link(masses[i], lengths[i]));
  }
  c.tool = Iso3(Eigen::Translation3d(l3, 0.0, 0.0));
  return c;
}

KinematicChain single_link(double length, double mass, double com_distance,
                           const Vec3& axis, double tau_lim) {
  KinematicChain c;
  c.name = "single_link";
  JointSpec j;
  j.axis = axis.normalized();
  j.tau_lim = tau_lim;
  c.joints = {j};
  LinkSpec l;
  l.mass = mass;
  l.com = Vec3(com_distance, 0.0, 0.0);
  l.inertia = Mat3::Identity() * 1e-6 * mass;
  c.links = {l};
  c.tool = Iso3(Eigen::Translation3d(length, 0.0, 0.0));
  return c;
}

KinematicChain by_name(std::string_view name) {
  if (name == "panda7") return panda7();
  if (name == "planar2") return planar_two_link();
  if (name == "single_link") return single_link(1.0, 0.5, 1.0, -Vec3::UnitY(), 10.0);
  throw InvalidArgument("unknown builtin robot '" + std::string(name) + "'");
}

}  // namespace rvf::robots
