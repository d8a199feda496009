#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "steiner/error.hpp"

namespace steiner {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(const Vec3& a, double s) { return s * a; }
inline Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm_sq(const Vec3& a) { return dot(a, a); }
inline double norm(const Vec3& a) { return std::sqrt(norm_sq(a)); }

// Scalar triple product det[a b c].
inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

namespace detail {

// sin of the angle between two n-vectors, stable near parallelism
// (computed from the orthogonal residual, not from 1 - cos^2).
inline double sin_angle_n(const double* a, const double* b, std::size_t n) {
  double aa = 0.0, bb = 0.0, ab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    aa += a[i] * a[i];
    bb += b[i] * b[i];
    ab += a[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 1.0;
  double rr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = a[i] - (ab / bb) * b[i];
    rr += r * r;
  }
  const double s = std::sqrt(rr / aa);
  return s > 1.0 ? 1.0 : s;
}

}  // namespace detail

// Homogeneous point (x, y, z, h). h == 0 encodes a direction (point at
// infinity); equality is projective. Not all four coordinates may be zero.
struct HPoint {
  double x = 0.0, y = 0.0, z = 0.0, h = 1.0;

  static HPoint finite(const Vec3& p) { return {p.x, p.y, p.z, 1.0}; }
  static HPoint direction(const Vec3& d) { return {d.x, d.y, d.z, 0.0}; }

  bool is_infinite() const { return h == 0.0; }
  Vec3 xyz() const { return {x, y, z}; }
  // Affine (dehomogenized) coordinates; valid for finite points only.
  Vec3 affine() const { return {x / h, y / h, z / h}; }
  std::array<double, 4> coords() const { return {x, y, z, h}; }
};

inline double sin_angle(const HPoint& a, const HPoint& b) {
  const auto ca = a.coords();
  const auto cb = b.coords();
  return detail::sin_angle_n(ca.data(), cb.data(), 4);
}

inline bool projectively_equal(const HPoint& a, const HPoint& b,
                               double eps = kDefaultTolerance) {
  return sin_angle(a, b) < eps;
}

// Linear form a·x + b·y + c·z + d·h. With (a,b,c) != 0 its zero set is a
// plane; evaluating at h == 0 applies the linear part to a direction.
struct AffineForm {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  Vec3 normal() const { return {a, b, c}; }
  std::array<double, 4> coeffs() const { return {a, b, c, d}; }
  double magnitude() const { return std::sqrt(a * a + b * b + c * c + d * d); }
};

inline AffineForm operator*(double s, const AffineForm& f) {
  return {s * f.a, s * f.b, s * f.c, s * f.d};
}

inline double evaluate_form(const AffineForm& f, const Vec3& p) {
  return f.a * p.x + f.b * p.y + f.c * p.z + f.d;
}

inline double evaluate_form(const AffineForm& f, const HPoint& p) {
  return f.a * p.x + f.b * p.y + f.c * p.z + f.d * p.h;
}

// Plane through three finite, non-collinear points. The scale of the
// returned form is unspecified; callers normalize where it matters.
inline AffineForm plane_through(const Vec3& p1, const Vec3& p2, const Vec3& p3,
                                double eps = kDefaultTolerance) {
  const Vec3 e1 = p2 - p1;
  const Vec3 e2 = p3 - p1;
  const Vec3 n = cross(e1, e2);
  if (norm(n) < eps * norm(e1) * norm(e2)) {
    fail(ErrorKind::DegenerateConfiguration, "plane_through: collinear points");
  }
  return {n.x, n.y, n.z, -dot(n, p1)};
}

inline AffineForm plane_through(const HPoint& p1, const HPoint& p2, const HPoint& p3,
                                double eps = kDefaultTolerance) {
  if (p1.is_infinite() || p2.is_infinite() || p3.is_infinite()) {
    fail(ErrorKind::DegenerateConfiguration, "plane_through: point at infinity");
  }
  return plane_through(p1.affine(), p2.affine(), p3.affine(), eps);
}

// Rescales f so that it evaluates to 1 at p. A form that already does so
// within a few ulps passes through unchanged, which makes normalization
// idempotent bit for bit.
inline AffineForm normalize_form(const AffineForm& f, const HPoint& p,
                                 double eps = kDefaultTolerance) {
  const double value = evaluate_form(f, p);
  const double scale = f.magnitude() * std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z + p.h * p.h);
  if (std::abs(value) < eps * scale) {
    fail(ErrorKind::NormalizationSingular, "normalize_form: point lies on the plane");
  }
  // Window sized by the conditioning of the evaluation itself.
  if (std::abs(value - 1.0) < 16.0 * 2.220446049250313e-16 * std::max(scale, 1.0)) return f;
  return (1.0 / value) * f;
}

namespace detail {

inline double det3x3(double a00, double a01, double a02,
                     double a10, double a11, double a12,
                     double a20, double a21, double a22) {
  return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
         a02 * (a10 * a21 - a11 * a20);
}

// Divides by the signed largest-magnitude entry, making it +1.
inline void normalize_max_entry(double* v, std::size_t n) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(v[i]) > std::abs(v[k])) k = i;
  }
  const double s = v[k];
  for (std::size_t i = 0; i < n; ++i) v[i] = v[i] / s + 0.0;  // +0.0 canonicalizes -0
}

}  // namespace detail

// Common point of three planes as the 4-vector of signed 3x3 minors of the
// coefficient rows. A near-singular linear part is flushed to an exact
// point at infinity (h = 0, direction scaled so its largest entry is +1);
// finite results are scaled to h = 1.
inline HPoint intersect_three_planes(const AffineForm& f1, const AffineForm& f2,
                                     const AffineForm& f3,
                                     double eps = kDefaultTolerance) {
  const auto r1 = f1.coeffs();
  const auto r2 = f2.coeffs();
  const auto r3 = f3.coeffs();

  const double nx = detail::det3x3(r1[1], r1[2], r1[3], r2[1], r2[2], r2[3], r3[1], r3[2], r3[3]);
  const double ny = -detail::det3x3(r1[0], r1[2], r1[3], r2[0], r2[2], r2[3], r3[0], r3[2], r3[3]);
  const double nz = detail::det3x3(r1[0], r1[1], r1[3], r2[0], r2[1], r2[3], r3[0], r3[1], r3[3]);
  const double nh = -detail::det3x3(r1[0], r1[1], r1[2], r2[0], r2[1], r2[2], r3[0], r3[1], r3[2]);

  const double scale = f1.magnitude() * f2.magnitude() * f3.magnitude();
  const double max_minor = std::max(std::max(std::abs(nx), std::abs(ny)),
                                    std::max(std::abs(nz), std::abs(nh)));
  if (max_minor < eps * scale) {
    fail(ErrorKind::DegenerateConfiguration,
         "intersect_three_planes: planes belong to a pencil");
  }

  const double dir_norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (std::abs(nh) < eps * dir_norm) {
    double d[3] = {nx, ny, nz};
    detail::normalize_max_entry(d, 3);
    return HPoint::direction({d[0], d[1], d[2]});
  }
  return {nx / nh + 0.0, ny / nh + 0.0, nz / nh + 0.0, 1.0};
}

// Coordinates of s in the affine frame of a triangle.
struct Barycentric {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

// Solves alpha*p + beta*t + gamma*q = s with alpha+beta+gamma = 1 for a
// finite s. For s at infinity the homogeneous variant (alpha+beta+gamma = 0,
// combination parallel to the direction) is returned, scaled so the
// largest-magnitude entry is +1. Internally this reduces to a 2x2 solve on
// the two coordinates least aligned with the triangle normal; the residual
// on the dropped coordinate drives the in-plane check.
inline Barycentric barycentric_in_plane(const HPoint& s, const Vec3& p, const Vec3& t,
                                        const Vec3& q, double eps = kDefaultTolerance) {
  const Vec3 e1 = t - p;
  const Vec3 e2 = q - p;
  const Vec3 n = cross(e1, e2);
  if (norm(n) < eps * norm(e1) * norm(e2)) {
    fail(ErrorKind::DegenerateConfiguration, "barycentric_in_plane: degenerate triangle");
  }

  const Vec3 rhs = s.is_infinite() ? s.xyz() : s.affine() - p;

  const double an[3] = {std::abs(n.x), std::abs(n.y), std::abs(n.z)};
  std::size_t drop = 0;
  if (an[1] > an[drop]) drop = 1;
  if (an[2] > an[drop]) drop = 2;

  const double a1[3] = {e1.x, e1.y, e1.z};
  const double a2[3] = {e2.x, e2.y, e2.z};
  const double b[3] = {rhs.x, rhs.y, rhs.z};
  const std::size_t r0 = (drop == 0) ? 1 : 0;
  const std::size_t r1 = (drop == 2) ? 1 : 2;

  // 2x2 determinant equals +-n[drop], bounded away from zero by the pick.
  const double det = a1[r0] * a2[r1] - a2[r0] * a1[r1];
  const double beta = (b[r0] * a2[r1] - a2[r0] * b[r1]) / det;
  const double gamma = (a1[r0] * b[r1] - b[r0] * a1[r1]) / det;

  const double residual = std::abs(beta * a1[drop] + gamma * a2[drop] - b[drop]);
  const double scale = norm(rhs) + norm(e1) + norm(e2);
  if (residual > eps * scale) {
    fail(ErrorKind::NotInPlane, "barycentric_in_plane: point is off the triangle plane");
  }

  if (s.is_infinite()) {
    double v[3] = {-beta - gamma, beta, gamma};
    detail::normalize_max_entry(v, 3);
    return {v[0], v[1], v[2]};
  }
  return {1.0 - beta - gamma, beta, gamma};
}

// Symmetric 4x4 quadratic form over homogeneous coordinates. Exact symmetry
// is guaranteed by construction: every constructor fills both triangles from
// the same values.
class SymForm4 {
 public:
  SymForm4() = default;  // zero form

  // (f (x) g + g (x) f) / 2, so that evaluate() at X gives f(X)·g(X).
  static SymForm4 product(const AffineForm& f, const AffineForm& g) {
    const auto cf = f.coeffs();
    const auto cg = g.coeffs();
    SymForm4 m;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        m.m_[i][j] = 0.5 * (cf[i] * cg[j] + cg[i] * cf[j]);
      }
    }
    return m;
  }

  // Upper triangle in row order: m00 m01 m02 m03 m11 m12 m13 m22 m23 m33.
  static SymForm4 from_upper_triangle(const std::array<double, 10>& u) {
    SymForm4 m;
    std::size_t k = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i; j < 4; ++j) {
        m.m_[i][j] = u[k];
        m.m_[j][i] = u[k];
        ++k;
      }
    }
    return m;
  }

  double at(std::size_t i, std::size_t j) const { return m_[i][j]; }

  double evaluate(const HPoint& p) const {
    const auto x = p.coords();
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        sum += x[i] * m_[i][j] * x[j];
      }
    }
    return sum;
  }

  double evaluate(const Vec3& p) const { return evaluate(HPoint::finite(p)); }

  SymForm4& accumulate(double scale, const SymForm4& other) {
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) m_[i][j] += scale * other.m_[i][j];
    }
    return *this;
  }

  SymForm4& scale(double s) {
    for (auto& row : m_) {
      for (auto& e : row) e = e * s + 0.0;  // +0.0 canonicalizes -0
    }
    return *this;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& row : m_) {
      for (double e : row) m = std::max(m, std::abs(e));
    }
    return m;
  }

  std::array<double, 16> row_major() const {
    std::array<double, 16> out{};
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) out[4 * i + j] = m_[i][j];
    }
    return out;
  }

 private:
  std::array<std::array<double, 4>, 4> m_{};
};

inline SymForm4 sym_product(const AffineForm& f, const AffineForm& g) {
  return SymForm4::product(f, g);
}

}  // namespace steiner
