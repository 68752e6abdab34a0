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

#include "rvf/spline_path.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace rvf {
namespace {

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
    0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

// Index i of the knot span [knots[i], knots[i+1]) containing u, restricted
// to the valid range [degree, n_ctrl - 1].
int find_span(const BSplineCurve& c, double u) {
  const int n = static_cast<int>(c.control_points.size()) - 1;
  const int p = c.degree;
  if (u >= c.knots[static_cast<size_t>(n + 1)]) return n;
  if (u <= c.knots[static_cast<size_t>(p)]) return p;
  const auto first = c.knots.begin() + p;
  const auto last = c.knots.begin() + n + 2;
  auto it = std::upper_bound(first, last, u);
  return static_cast<int>(it - c.knots.begin()) - 1;
}

// Nonzero basis functions and their derivatives up to `order` at u
// (The NURBS Book, A2.3). ders(k, j) is the k-th derivative of N_{span-p+j}.
Eigen::MatrixXd basis_derivatives(const BSplineCurve& c, int span, double u,
                                  int order) {
  const int p = c.degree;
  const auto& U = c.knots;
  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(static_cast<size_t>(p + 1));
  std::vector<double> right(static_cast<size_t>(p + 1));
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[static_cast<size_t>(j)] = u - U[static_cast<size_t>(span + 1 - j)];
    right[static_cast<size_t>(j)] = U[static_cast<size_t>(span + j)] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[static_cast<size_t>(r + 1)] + left[static_cast<size_t>(j - r)];
      const double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[static_cast<size_t>(r + 1)] * temp;
      saved = left[static_cast<size_t>(j - r)] * temp;
    }
    ndu(j, j) = saved;
  }

  const int n_ders = std::min(order, p);
  Eigen::MatrixXd ders = Eigen::MatrixXd::Zero(order + 1, p + 1);
  for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0;
    int s2 = 1;
    a(0, 0) = 1.0;
    for (int k = 1; k <= n_ders; ++k) {
      double d = 0.0;
      const int rk = r - k;
      const int pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= n_ders; ++k) {
    ders.row(k) *= factor;
    factor *= (p - k);
  }
  return ders;
}

double speed_at(const BSplineCurve& c, double u) {
  return eval_curve(c, u, 1).first.norm();
}

// Integral of the speed over [a, b] with one 5-point Gauss-Legendre panel.
double gauss_length(const BSplineCurve& c, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (size_t i = 0; i < kGaussNodes.size(); ++i) {
    sum += kGaussWeights[i] * speed_at(c, mid + half * kGaussNodes[i]);
  }
  return half * sum;
}

// Knot vector for a clamped spline with n_ctrl control points over sites.
std::vector<double> make_knots(const std::vector<double>& sites, int n_ctrl,
                               int p) {
  const int m = static_cast<int>(sites.size());
  std::vector<double> knots(static_cast<size_t>(n_ctrl + p + 1), 0.0);
  for (int i = 0; i <= p; ++i) {
    knots[static_cast<size_t>(n_ctrl + i)] = 1.0;
  }
  const int interior = n_ctrl - p - 1;
  if (interior <= 0) return knots;
  if (n_ctrl == m) {
    // Averaging (interpolation): satisfies Schoenberg-Whitney.
    for (int j = 1; j <= interior; ++j) {
      double acc = 0.0;
      for (int i = j; i < j + p; ++i) acc += sites[static_cast<size_t>(i)];
      knots[static_cast<size_t>(j + p)] = acc / p;
    }
  } else {
    // Approximation: every knot span holds at least one site.
    const double d = static_cast<double>(m) / static_cast<double>(n_ctrl - p);
    for (int j = 1; j <= interior; ++j) {
      const double jd = j * d;
      const int i = static_cast<int>(jd);
      const double alpha = jd - i;
      const double lo = sites[static_cast<size_t>(std::max(i - 1, 0))];
      const double hi = sites[static_cast<size_t>(std::min(i, m - 1))];
      knots[static_cast<size_t>(p + j)] = (1.0 - alpha) * lo + alpha * hi;
    }
  }
  return knots;
}

// Gram matrix of second derivatives, R_ik = int B_i'' B_k'' du.
Eigen::MatrixXd bending_gram(const BSplineCurve& c) {
  const int n_ctrl = static_cast<int>(c.control_points.size());
  const int p = c.degree;
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n_ctrl, n_ctrl);
  if (p < 2) return R;
  for (int span = p; span < n_ctrl; ++span) {
    const double a = c.knots[static_cast<size_t>(span)];
    const double b = c.knots[static_cast<size_t>(span + 1)];
    if (b <= a) continue;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (size_t g = 0; g < kGaussNodes.size(); ++g) {
      const double u = mid + half * kGaussNodes[g];
      const Eigen::MatrixXd d = basis_derivatives(c, span, u, 2);
      const double w = half * kGaussWeights[g];
      for (int i = 0; i <= p; ++i) {
        for (int k = 0; k <= p; ++k) {
          R(span - p + i, span - p + k) += w * d(2, i) * d(2, k);
        }
      }
    }
  }
  return R;
}

}  // namespace

void BSplineCurve::validate() const {
  if (degree < 1) throw InvalidArgument("B-spline degree must be >= 1");
  const size_t p = static_cast<size_t>(degree);
  if (control_points.size() < p + 1) {
    throw InvalidArgument("B-spline needs at least degree + 1 control points");
  }
  if (knots.size() != control_points.size() + p + 1) {
    throw InvalidArgument("knot count must equal control points + degree + 1");
  }
  for (size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] >= knots[i - 1])) {
      throw InvalidArgument("knot vector must be non-decreasing");
    }
  }
  for (size_t i = 1; i <= p; ++i) {
    if (knots[i] != knots[0] || knots[knots.size() - 1 - i] != knots.back()) {
      throw InvalidArgument("knot vector must be clamped");
    }
  }
  if (!(knots.back() > knots.front())) {
    throw InvalidArgument("knot vector has an empty domain");
  }
}

CurveDerivatives eval_curve(const BSplineCurve& curve, double u, int order) {
  if (order < 0 || order > 2) throw InvalidArgument("order must be 0, 1 or 2");
  const double u0 = curve.domain_start();
  const double u1 = curve.domain_end();
  if (!(u >= u0 && u <= u1)) {
    throw OutOfDomain("curve parameter " + std::to_string(u) +
                      " outside [" + std::to_string(u0) + ", " +
                      std::to_string(u1) + "]");
  }
  const int span = find_span(curve, u);
  const Eigen::MatrixXd d = basis_derivatives(curve, span, u, order);
  CurveDerivatives out;
  for (int j = 0; j <= curve.degree; ++j) {
    const Vec3& P = curve.control_points[static_cast<size_t>(span - curve.degree + j)];
    out.value += d(0, j) * P;
    if (order >= 1) out.first += d(1, j) * P;
    if (order >= 2) out.second += d(2, j) * P;
  }
  return out;
}

double bending_energy(const BSplineCurve& curve) {
  const Eigen::MatrixXd R = bending_gram(curve);
  const auto n = static_cast<Eigen::Index>(curve.control_points.size());
  Eigen::MatrixXd P(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    P.row(i) = curve.control_points[static_cast<size_t>(i)].transpose();
  }
  return (P.transpose() * R * P).trace();
}

std::vector<double> chord_length_sites(std::span<const DemoSample> samples) {
  std::vector<double> sites(samples.size(), 0.0);
  for (size_t i = 1; i < samples.size(); ++i) {
    sites[i] = sites[i - 1] + (samples[i].position - samples[i - 1].position).norm();
  }
  const double total = sites.empty() ? 0.0 : sites.back();
  if (!(total > 0.0)) {
    throw InvalidArgument("degenerate demonstration: all samples coincide");
  }
  for (double& v : sites) v /= total;
  sites.back() = 1.0;
  return sites;
}

BSplineCurve fit_smoothing_spline(std::span<const DemoSample> samples,
                                  const SmoothingFitOptions& options) {
  const int p = options.degree;
  if (p < 1) throw InvalidArgument("degree must be >= 1");
  if (!(options.lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  const int m = static_cast<int>(samples.size());
  if (m < p + 1) {
    throw InvalidArgument("too few samples: need at least degree + 1 = " +
                          std::to_string(p + 1) + ", got " + std::to_string(m));
  }
  std::vector<double> weights = options.weights;
  if (weights.empty()) weights.assign(samples.size(), 1.0);
  if (weights.size() != samples.size()) {
    throw InvalidArgument("weight count does not match sample count");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw InvalidArgument("weights must be positive");
  }
  for (const auto& s : samples) {
    if (!s.position.allFinite()) throw InvalidArgument("non-finite sample");
  }

  const std::vector<double> sites = chord_length_sites(samples);
  int n_ctrl = options.control_points.value_or(
      static_cast<int>(std::ceil(m / 4.0)) + p);
  n_ctrl = std::clamp(n_ctrl, p + 1, m);

  BSplineCurve curve;
  curve.degree = p;
  curve.knots = make_knots(sites, n_ctrl, p);
  curve.control_points.assign(static_cast<size_t>(n_ctrl), Vec3::Zero());

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, n_ctrl);
  Eigen::MatrixXd Q(m, 3);
  for (int j = 0; j < m; ++j) {
    const double u = sites[static_cast<size_t>(j)];
    const int span = find_span(curve, u);
    const Eigen::MatrixXd d = basis_derivatives(curve, span, u, 0);
    for (int i = 0; i <= p; ++i) B(j, span - p + i) = d(0, i);
    Q.row(j) = samples[static_cast<size_t>(j)].position.transpose();
  }

  Eigen::MatrixXd P;
  if (options.lambda == 0.0 && n_ctrl == m) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) {
      throw InvalidArgument("interpolation system is singular (repeated samples?)");
    }
    P = lu.solve(Q);
  } else {
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(weights.data(), m);
    Eigen::MatrixXd A = B.transpose() * w.asDiagonal() * B;
    if (options.lambda > 0.0) A += options.lambda * bending_gram(curve);
    const Eigen::MatrixXd rhs = B.transpose() * w.asDiagonal() * Q;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success) {
      throw InvalidArgument("smoothing system could not be factorized");
    }
    P = ldlt.solve(rhs);
  }
  if (!P.allFinite()) throw InvalidArgument("smoothing fit produced non-finite control points");
  for (int i = 0; i < n_ctrl; ++i) {
    curve.control_points[static_cast<size_t>(i)] = P.row(i).transpose();
  }
  return curve;
}

std::vector<double> fit_residuals(const BSplineCurve& curve,
                                  std::span<const DemoSample> samples) {
  const std::vector<double> sites = chord_length_sites(samples);
  std::vector<double> out(samples.size());
  for (size_t j = 0; j < samples.size(); ++j) {
    out[j] = (eval_curve(curve, sites[j], 0).value - samples[j].position).norm();
  }
  return out;
}

ArcLengthTable build_arclength_table(const BSplineCurve& curve,
                                     int samples_per_span) {
  if (samples_per_span < 2) throw InvalidArgument("samples_per_span must be >= 2");
  curve.validate();
  ArcLengthTable table;
  table.u.push_back(curve.domain_start());
  table.s.push_back(0.0);
  const size_t p = static_cast<size_t>(curve.degree);
  for (size_t k = p; k + p + 1 < curve.knots.size(); ++k) {
    const double a = curve.knots[k];
    const double b = curve.knots[k + 1];
    if (b <= a) continue;
    for (int i = 1; i <= samples_per_span; ++i) {
      const double lo = a + (b - a) * (i - 1) / samples_per_span;
      const double hi = (i == samples_per_span) ? b : a + (b - a) * i / samples_per_span;
      table.u.push_back(hi);
      table.s.push_back(table.s.back() + gauss_length(curve, lo, hi));
    }
  }
  table.total_length = table.s.back();
  if (!(table.total_length > 0.0)) throw InvalidArgument("zero-length curve");
  for (size_t i = 1; i < table.s.size(); ++i) {
    if (!(table.s[i] > table.s[i - 1])) {
      throw InvalidArgument("curve has a stationary segment (zero speed)");
    }
  }
  return table;
}

double arclength_to_parameter(const ArcLengthTable& table, double s) {
  const auto& S = table.s;
  const auto& U = table.u;
  if (S.size() < 2 || S.size() != U.size()) {
    throw InvalidArgument("arc-length table needs at least two matching samples");
  }
  if (!(s >= 0.0 && s <= table.total_length)) {
    throw OutOfDomain("arc length " + std::to_string(s) + " outside [0, " +
                      std::to_string(table.total_length) + "]");
  }
  const size_t n = S.size();
  size_t k = static_cast<size_t>(std::upper_bound(S.begin(), S.end(), s) - S.begin());
  k = std::clamp<size_t>(k, 1, n - 1) - 1;

  auto secant = [&](size_t i) { return (U[i + 1] - U[i]) / (S[i + 1] - S[i]); };
  // Fritsch-Carlson slopes (harmonic mean of adjacent secants).
  auto slope = [&](size_t i) {
    if (i == 0) return secant(0);
    if (i == n - 1) return secant(n - 2);
    const double d0 = secant(i - 1);
    const double d1 = secant(i);
    if (d0 * d1 <= 0.0) return 0.0;
    const double h0 = S[i] - S[i - 1];
    const double h1 = S[i + 1] - S[i];
    const double w1 = 2.0 * h1 + h0;
    const double w2 = h1 + 2.0 * h0;
    return (w1 + w2) / (w1 / d0 + w2 / d1);
  };

  const double h = S[k + 1] - S[k];
  const double t = (s - S[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * U[k] + h10 * h * slope(k) + h01 * U[k + 1] + h11 * h * slope(k + 1);
}

PathCurve::PathCurve(BSplineCurve curve, ArcLengthTable table)
    : curve_(std::move(curve)), table_(std::move(table)) {
  curve_.validate();
  if (table_.u.size() < 2 || table_.u.size() != table_.s.size()) {
    throw InvalidArgument("arc-length table needs at least two matching samples");
  }
}

PathCurve PathCurve::from_curve(BSplineCurve curve, int samples_per_span) {
  ArcLengthTable table = build_arclength_table(curve, samples_per_span);
  return PathCurve(std::move(curve), std::move(table));
}

size_t PathCurve::segment_for_parameter(double u) const {
  const auto& U = table_.u;
  size_t k = static_cast<size_t>(std::upper_bound(U.begin(), U.end(), u) - U.begin());
  return std::clamp<size_t>(k, 1, U.size() - 1) - 1;
}

double PathCurve::arclength_at(double u) const {
  if (!(u >= curve_.domain_start() && u <= curve_.domain_end())) {
    throw OutOfDomain("curve parameter outside domain");
  }
  const size_t k = segment_for_parameter(u);
  if (u == table_.u[k]) return table_.s[k];
  return table_.s[k] + gauss_length(curve_, table_.u[k], u);
}

double PathCurve::parameter_at(double s) const {
  const double l = table_.total_length;
  // Accept round-off just outside the ends.
  const double slack = 1e-12 * std::max(1.0, l);
  if (!(s >= -slack && s <= l + slack)) {
    throw OutOfDomain("arc length " + std::to_string(s) + " outside [0, " +
                      std::to_string(l) + "]");
  }
  s = std::clamp(s, 0.0, l);
  if (s == 0.0) return table_.u.front();
  if (s == l) return table_.u.back();

  const auto& S = table_.s;
  size_t k = static_cast<size_t>(std::upper_bound(S.begin(), S.end(), s) - S.begin());
  k = std::clamp<size_t>(k, 1, S.size() - 1) - 1;
  double lo = table_.u[k];
  double hi = table_.u[k + 1];
  double u = std::clamp(arclength_to_parameter(table_, s), lo, hi);

  for (int it = 0; it < 20; ++it) {
    const double f = table_.s[k] + gauss_length(curve_, table_.u[k], u) - s;
    if (std::abs(f) <= 1e-15 * std::max(1.0, l)) break;
    if (f > 0.0) hi = u; else lo = u;
    const double df = speed_at(curve_, u);
    double next = u - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == u) break;
    u = next;
  }
  return u;
}

PathPoint PathCurve::eval(double s) const {
  const double u = parameter_at(s);
  const CurveDerivatives d = eval_curve(curve_, u, 2);
  const double speed = d.first.norm();
  if (!(speed > 0.0)) throw NumericalFault("zero curve speed at s = " + std::to_string(s));
  PathPoint out;
  out.position = d.value;
  out.tangent = d.first / speed;
  out.curvature =
      (d.second - out.tangent * out.tangent.dot(d.second)) / (speed * speed);
  return out;
}

}  // namespace rvf
