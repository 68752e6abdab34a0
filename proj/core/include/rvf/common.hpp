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

#ifndef RVF_COMMON_HPP_
#define RVF_COMMON_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace rvf {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using Mat6X = Eigen::Matrix<double, 6, Eigen::Dynamic>;
using Quat = Eigen::Quaterniond;
using Iso3 = Eigen::Isometry3d;

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad sizes, ranges, values).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A query fell outside the domain of a curve or table.
class OutOfDomain : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration. The message carries the location
/// (line number or JSON field path).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Orthogonal deviation reached the channel guard radius.
class ChannelViolation : public Error {
 public:
  using Error::Error;
};

/// Non-finite state or acceleration while stepping a simulation.
class NumericalFault : public Error {
 public:
  using Error::Error;
};

}  // namespace rvf

#endif  // RVF_COMMON_HPP_
