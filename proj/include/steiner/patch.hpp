#pragma once

#include <array>
#include <cmath>
#include <string>

#include "steiner/error.hpp"
#include "steiner/projective.hpp"

namespace steiner {

// Multi-index order used everywhere (storage, I/O, constructors):
// 002, 011, 020, 101, 110, 200.
inline constexpr std::array<std::array<int, 3>, 6> kNetIndices = {{
    {0, 0, 2}, {0, 1, 1}, {0, 2, 0}, {1, 0, 1}, {1, 1, 0}, {2, 0, 0}}};
inline constexpr std::array<const char*, 6> kNetKeys = {"002", "011", "020",
                                                        "101", "110", "200"};

inline constexpr int kSlot002 = 0;
inline constexpr int kSlot011 = 1;
inline constexpr int kSlot020 = 2;
inline constexpr int kSlot101 = 3;
inline constexpr int kSlot110 = 4;
inline constexpr int kSlot200 = 5;

// Control net of a rational quadratic triangle: six finite control points
// c_ijk (i+j+k = 2) and six nonzero weights. Negative weights are allowed;
// zero weights are rejected here because every downstream step divides by
// corner and middle weights.
class ControlNet {
 public:
  ControlNet(const std::array<Vec3, 6>& points, const std::array<double, 6>& weights)
      : points_(points), weights_(weights) {
    for (int k = 0; k < 6; ++k) {
      if (weights_[k] == 0.0) {
        fail(ErrorKind::ValidationError, std::string("zero weight at ") + kNetKeys[k]);
      }
    }
  }

  const std::array<Vec3, 6>& points() const { return points_; }
  const std::array<double, 6>& weights() const { return weights_; }
  const Vec3& point(int slot) const { return points_[static_cast<std::size_t>(slot)]; }
  double weight(int slot) const { return weights_[static_cast<std::size_t>(slot)]; }

  // Corner labels: P = c002, Q = c020, R = c200.
  const Vec3& corner_p() const { return points_[kSlot002]; }
  const Vec3& corner_q() const { return points_[kSlot020]; }
  const Vec3& corner_r() const { return points_[kSlot200]; }

  // Corners must be pairwise distinct and non-collinear before any of the
  // geometric pipeline runs; evaluation alone does not need this.
  void validate_corners(double eps = kDefaultTolerance) const {
    const Vec3 e1 = corner_q() - corner_p();
    const Vec3 e2 = corner_r() - corner_p();
    if (norm(cross(e1, e2)) < eps * std::max(norm(e1) * norm(e2), 1e-300)) {
      fail(ErrorKind::ValidationError, "collinear corners");
    }
  }

 private:
  std::array<Vec3, 6> points_;
  std::array<double, 6> weights_;
};

// Which boundary of the triangle a conic arc came from (the barycentric
// coordinate that vanishes there).
enum class Boundary { u = 0, v = 1, w = 2 };

inline const char* to_string(Boundary b) {
  switch (b) {
    case Boundary::u: return "u";
    case Boundary::v: return "v";
    case Boundary::w: return "w";
  }
  return "?";
}

// Rational quadratic curve with control polygon p0, p1, p2 and weights
// w0, w1, w2.
struct ConicArc {
  std::array<Vec3, 3> points;
  std::array<double, 3> weights;
  Boundary label = Boundary::u;
};

// Barycentric parameter with u + v + w = 1 held exactly: w is derived.
struct BarycentricParam {
  double u = 0.0, v = 0.0;
  double w() const { return 1.0 - u - v; }
};

namespace detail {

// Quadratic Bernstein values 2!/(i!j!k!) u^i v^j w^k in slot order.
inline std::array<double, 6> bernstein2(const BarycentricParam& p) {
  const double u = p.u, v = p.v, w = p.w();
  return {w * w, 2.0 * v * w, v * v, 2.0 * u * w, 2.0 * u * v, u * u};
}

}  // namespace detail

// Rational Bernstein evaluation. Parameters outside [0,1]^3 are permitted
// (the boundary conics extend beyond the patch edges).
inline Vec3 evaluate(const ControlNet& net, const BarycentricParam& p,
                     double eps = kDefaultTolerance) {
  const auto basis = detail::bernstein2(p);
  Vec3 numerator{};
  double denominator = 0.0;
  double magnitude = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double term = basis[static_cast<std::size_t>(k)] * net.weight(k);
    numerator = numerator + term * net.point(k);
    denominator += term;
    magnitude += std::abs(term);
  }
  if (std::abs(denominator) < eps * magnitude) {
    fail(ErrorKind::PoleEncountered, "evaluate: rational denominator vanishes");
  }
  return numerator / denominator;
}

// Boundary conic extraction:
//   u=0 -> {c002, c011, c020},  v=0 -> {c002, c101, c200},
//   w=0 -> {c020, c110, c200},  with the matching weights.
inline ConicArc boundary_conic(const ControlNet& net, Boundary which,
                               double eps = kDefaultTolerance) {
  std::array<int, 3> slots{};
  switch (which) {
    case Boundary::u: slots = {kSlot002, kSlot011, kSlot020}; break;
    case Boundary::v: slots = {kSlot002, kSlot101, kSlot200}; break;
    case Boundary::w: slots = {kSlot020, kSlot110, kSlot200}; break;
  }
  ConicArc arc;
  arc.label = which;
  for (std::size_t i = 0; i < 3; ++i) {
    arc.points[i] = net.point(slots[i]);
    arc.weights[i] = net.weight(slots[i]);
  }
  const Vec3 e1 = arc.points[1] - arc.points[0];
  const Vec3 e2 = arc.points[2] - arc.points[0];
  if (norm(cross(e1, e2)) < eps * std::max(norm(e1) * norm(e2), 1e-300)) {
    fail(ErrorKind::DegenerateConic,
         std::string("boundary_conic: collinear control polygon at ") + to_string(which));
  }
  return arc;
}

inline Vec3 evaluate_conic(const ConicArc& arc, double t, double eps = kDefaultTolerance) {
  const double s = 1.0 - t;
  const std::array<double, 3> basis = {s * s, 2.0 * t * s, t * t};
  Vec3 numerator{};
  double denominator = 0.0;
  double magnitude = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double term = basis[i] * arc.weights[i];
    numerator = numerator + term * arc.points[i];
    denominator += term;
    magnitude += std::abs(term);
  }
  if (std::abs(denominator) < eps * magnitude) {
    fail(ErrorKind::PoleEncountered, "evaluate_conic: rational denominator vanishes");
  }
  return numerator / denominator;
}

// Moebius reweighting (rho^2 w0, rho w1, w2): same traced conic, different
// parametrization. The parameter map is t(t~) = t~ / ((1-rho) t~ + rho).
inline ConicArc mobius_rescale(const ConicArc& arc, double rho) {
  if (rho == 0.0) {
    fail(ErrorKind::InvalidScale, "mobius_rescale: rho must be nonzero");
  }
  ConicArc out = arc;
  out.weights = {rho * rho * arc.weights[0], rho * arc.weights[1], arc.weights[2]};
  return out;
}

}  // namespace steiner
