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

// Smoothing B-spline fitting of demonstrated point sequences and
// arc-length parameterized evaluation of the resulting path.
//
// A demonstration is fitted with a clamped B-spline phi(u), u in [0, 1],
// and then reparameterized by arc length so that the guidance layer can
// work with a unit-speed curve phi(s), s in [0, l].

#ifndef RVF_SPLINE_PATH_HPP_
#define RVF_SPLINE_PATH_HPP_

#include <optional>
#include <span>
#include <vector>

#include "rvf/common.hpp"

namespace rvf {

struct DemoSample {
  double t = 0.0;  // seconds
  Vec3 position = Vec3::Zero();
};

/// Clamped, non-rational B-spline curve in R^3.
struct BSplineCurve {
  int degree = 3;
  std::vector<double> knots;
  std::vector<Vec3> control_points;

  double domain_start() const { return knots[static_cast<size_t>(degree)]; }
  double domain_end() const {
    return knots[knots.size() - 1 - static_cast<size_t>(degree)];
  }

  /// Throws InvalidArgument if the knot vector is not clamped and
  /// non-decreasing or if the control-point count does not match.
  void validate() const;
};

/// Value and derivatives with respect to the curve parameter u.
/// Entries above the requested order are left at zero.
struct CurveDerivatives {
  Vec3 value = Vec3::Zero();
  Vec3 first = Vec3::Zero();
  Vec3 second = Vec3::Zero();
};

/// Evaluates the curve and up to `order` (0, 1 or 2) derivatives.
/// Throws OutOfDomain if u lies outside [domain_start, domain_end].
CurveDerivatives eval_curve(const BSplineCurve& curve, double u, int order = 2);

/// Integral of ||phi''(u)||^2 over the parameter domain (the smoothing term).
double bending_energy(const BSplineCurve& curve);

/// Normalized cumulative chord length of the samples, in [0, 1].
std::vector<double> chord_length_sites(std::span<const DemoSample> samples);

struct SmoothingFitOptions {
  double lambda = 0.0;
  int degree = 3;
  /// Defaults to ceil(n / 4) + degree, clamped to [degree + 1, n].
  std::optional<int> control_points;
  /// Per-sample weights. Empty means all ones.
  std::vector<double> weights;
};

/// Minimizes sum_j w_j ||phi(u_j) - q_j||^2 + lambda * int ||phi''||^2 du
/// over the control points of a clamped B-spline with chord-length sites.
///
/// Throws InvalidArgument for fewer than degree + 1 samples, non-positive
/// weights, mismatched weight count, or all-coincident samples.
BSplineCurve fit_smoothing_spline(std::span<const DemoSample> samples,
                                  const SmoothingFitOptions& options = {});

/// Residual norms ||phi(u_j) - q_j|| at the chord-length sites of `samples`.
std::vector<double> fit_residuals(const BSplineCurve& curve,
                                  std::span<const DemoSample> samples);

/// Samples (u_k, s_k) of the cumulative arc length s(u).
struct ArcLengthTable {
  std::vector<double> u;
  std::vector<double> s;
  double total_length = 0.0;
};

/// Builds the arc-length table with `samples_per_span` sub-intervals in every
/// non-empty knot span, each integrated with 5-point Gauss-Legendre.
/// Throws InvalidArgument for samples_per_span < 2 or a zero-length curve.
ArcLengthTable build_arclength_table(const BSplineCurve& curve,
                                     int samples_per_span = 32);

/// Monotone (Fritsch-Carlson) cubic Hermite interpolation of u(s) from the
/// table alone. Throws OutOfDomain for s outside [0, total_length].
double arclength_to_parameter(const ArcLengthTable& table, double s);

/// Arc-length frame at one point of the path.
struct PathPoint {
  Vec3 position = Vec3::Zero();
  Vec3 tangent = Vec3::UnitX();    // phi'(s), unit norm
  Vec3 curvature = Vec3::Zero();   // phi''(s), orthogonal to the tangent
};

/// A fitted curve together with its arc-length table. Immutable after
/// construction; safe to share across threads.
class PathCurve {
 public:
  PathCurve() = default;
  PathCurve(BSplineCurve curve, ArcLengthTable table);

  /// Fits nothing; builds the arc-length table of an existing curve.
  static PathCurve from_curve(BSplineCurve curve, int samples_per_span = 32);

  const BSplineCurve& curve() const { return curve_; }
  const ArcLengthTable& table() const { return table_; }
  double length() const { return table_.total_length; }

  /// u(s): table interpolation polished by safeguarded Newton iterations on
  /// the quadrature of the speed. Throws OutOfDomain outside [0, l].
  double parameter_at(double s) const;

  /// s(u) by quadrature from the nearest table node.
  double arclength_at(double u) const;

  /// phi(s), phi'(s), phi''(s). Throws OutOfDomain outside [0, l].
  PathPoint eval(double s) const;

 private:
  size_t segment_for_parameter(double u) const;

  BSplineCurve curve_;
  ArcLengthTable table_;
};

/// Free-function form of PathCurve::eval.
inline PathPoint eval_by_arclength(const PathCurve& path, double s) {
  return path.eval(s);
}

}  // namespace rvf

#endif  // RVF_SPLINE_PATH_HPP_
