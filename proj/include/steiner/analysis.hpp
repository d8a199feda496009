#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "steiner/error.hpp"
#include "steiner/patch.hpp"
#include "steiner/projective.hpp"

namespace steiner {

// The ten polynomial coefficients of C(X,X) in the fixed monomial order
// x^2, y^2, z^2, xy, xz, yz, x, y, z, 1.
struct PolyCoeffs {
  std::array<double, 10> c{};

  double operator[](std::size_t i) const { return c[i]; }
  double& operator[](std::size_t i) { return c[i]; }
};

inline constexpr std::array<const char*, 10> kMonomialNames = {
    "x^2", "y^2", "z^2", "xy", "xz", "yz", "x", "y", "z", ""};

inline PolyCoeffs expand_coefficients(const SymForm4& m) {
  PolyCoeffs p;
  p[0] = m.at(0, 0);
  p[1] = m.at(1, 1);
  p[2] = m.at(2, 2);
  p[3] = 2.0 * m.at(0, 1);
  p[4] = 2.0 * m.at(0, 2);
  p[5] = 2.0 * m.at(1, 2);
  p[6] = 2.0 * m.at(0, 3);
  p[7] = 2.0 * m.at(1, 3);
  p[8] = 2.0 * m.at(2, 3);
  p[9] = m.at(3, 3);
  return p;
}

inline SymForm4 form_from_coefficients(const PolyCoeffs& p) {
  return SymForm4::from_upper_triangle({p[0], p[3] / 2.0, p[4] / 2.0, p[6] / 2.0,
                                        p[1], p[5] / 2.0, p[7] / 2.0,
                                        p[2], p[8] / 2.0,
                                        p[9]});
}

// Canonical scale for quadric output: divide by the largest-magnitude matrix
// entry, then flip the sign so the first nonzero polynomial coefficient (in
// the fixed monomial order) is positive.
inline SymForm4 normalize_quadric(SymForm4 m, double eps = kDefaultTolerance) {
  const double mag = m.max_abs();
  if (mag == 0.0) return m;
  m.scale(1.0 / mag);
  const PolyCoeffs p = expand_coefficients(m);
  double cmax = 0.0;
  for (double v : p.c) cmax = std::max(cmax, std::abs(v));
  for (double v : p.c) {
    if (std::abs(v) > eps * cmax) {
      if (v < 0.0) m.scale(-1.0);
      break;
    }
  }
  return m;
}

// sin-based angle between coefficient vectors after sign alignment;
// insensitive to scale, resolves angles far below what acos could.
inline double coefficient_angle(const PolyCoeffs& a, const PolyCoeffs& b) {
  double ab = 0.0;
  for (std::size_t i = 0; i < 10; ++i) ab += a[i] * b[i];
  PolyCoeffs bb = b;
  if (ab < 0.0) {
    for (auto& v : bb.c) v = -v;
  }
  return std::asin(detail::sin_angle_n(a.c.data(), bb.c.data(), 10));
}

enum class QuadricClass {
  sphere,
  ellipsoid,
  elliptic_paraboloid,
  hyperbolic_paraboloid,
  hyperboloid_one_sheet,
  hyperboloid_two_sheets,
  degenerate_or_other,
};

inline const char* to_string(QuadricClass c) {
  switch (c) {
    case QuadricClass::sphere: return "sphere";
    case QuadricClass::ellipsoid: return "ellipsoid";
    case QuadricClass::elliptic_paraboloid: return "elliptic_paraboloid";
    case QuadricClass::hyperbolic_paraboloid: return "hyperbolic_paraboloid";
    case QuadricClass::hyperboloid_one_sheet: return "hyperboloid_one_sheet";
    case QuadricClass::hyperboloid_two_sheets: return "hyperboloid_two_sheets";
    case QuadricClass::degenerate_or_other: return "degenerate_or_other";
  }
  return "?";
}

namespace detail {

template <std::size_t N>
struct EigenSym {
  std::array<double, N> values{};                  // ascending
  std::array<std::array<double, N>, N> vectors{};  // vectors[k] pairs values[k]
};

// Cyclic Jacobi for symmetric matrices. Deterministic sweep order, so
// results are bit-reproducible across runs on identical input.
template <std::size_t N>
EigenSym<N> jacobi_eigensymmetric(std::array<std::array<double, N>, N> a) {
  std::array<std::array<double, N>, N> v{};
  for (std::size_t i = 0; i < N; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (std::size_t p = 0; p < N; ++p) {
      diag += std::abs(a[p][p]);
      for (std::size_t q = p + 1; q < N; ++q) off += std::abs(a[p][q]);
    }
    if (off <= 1e-200 || off <= 1e-16 * (diag + off)) break;

    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const double app = a[p][p], aqq = a[q][q];
        a[p][p] = app - t * apq;
        a[q][q] = aqq + t * apq;
        a[p][q] = 0.0;
        a[q][p] = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
          if (k != p && k != q) {
            const double akp = a[k][p], akq = a[k][q];
            a[k][p] = c * akp - s * akq;
            a[p][k] = a[k][p];
            a[k][q] = s * akp + c * akq;
            a[q][k] = a[k][q];
          }
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<std::size_t, N> order{};
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i][i] < a[j][j]; });

  EigenSym<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = a[order[k]][order[k]];
    for (std::size_t i = 0; i < N; ++i) out.vectors[k][i] = v[i][order[k]];
  }
  return out;
}

inline double det4(const SymForm4& m) {
  double a[4][4];
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) a[i][j] = m.at(i, j);
  }
  double det = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    double sub[3][3];
    for (std::size_t i = 1; i < 4; ++i) {
      std::size_t jj = 0;
      for (std::size_t j = 0; j < 4; ++j) {
        if (j == c) continue;
        sub[i - 1][jj++] = a[i][j];
      }
    }
    const double minor = det3x3(sub[0][0], sub[0][1], sub[0][2],
                                sub[1][0], sub[1][1], sub[1][2],
                                sub[2][0], sub[2][1], sub[2][2]);
    det += ((c % 2 == 0) ? 1.0 : -1.0) * a[0][c] * minor;
  }
  return det;
}

}  // namespace detail

// Classification from the eigenvalue sign pattern of the quadratic part and
// the full 4x4 determinant. Only non-degenerate (rank 4) classes are named;
// everything else collapses to degenerate_or_other. Invariant under scaling
// of the form by any nonzero factor.
inline QuadricClass classify(const SymForm4& m, double eps = kDefaultTolerance) {
  double row_norm_product = 1.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < 4; ++j) r += m.at(i, j) * m.at(i, j);
    row_norm_product *= std::sqrt(r);
  }
  const double determinant = detail::det4(m);
  if (std::abs(determinant) < eps * std::max(row_norm_product, 1e-300)) {
    return QuadricClass::degenerate_or_other;
  }

  std::array<std::array<double, 3>, 3> quad{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) quad[i][j] = m.at(i, j);
  }
  auto eig = detail::jacobi_eigensymmetric<3>(quad);
  double max_eig = 0.0;
  for (double l : eig.values) max_eig = std::max(max_eig, std::abs(l));
  if (max_eig == 0.0) return QuadricClass::degenerate_or_other;

  int positive = 0, negative = 0;
  for (double l : eig.values) {
    if (std::abs(l) < eps * max_eig) continue;
    (l > 0.0 ? positive : negative)++;
  }
  if (negative > positive) std::swap(positive, negative);  // det4 is flip-invariant

  if (positive + negative == 3) {
    if (negative == 0) {
      const double spread = std::abs(eig.values[2]) - std::abs(eig.values[0]);
      const bool equal_axes = std::abs(spread) < eps * max_eig;
      return equal_axes ? QuadricClass::sphere : QuadricClass::ellipsoid;
    }
    return determinant > 0.0 ? QuadricClass::hyperboloid_one_sheet
                             : QuadricClass::hyperboloid_two_sheets;
  }
  if (positive + negative == 2) {
    return negative == 0 ? QuadricClass::elliptic_paraboloid
                         : QuadricClass::hyperbolic_paraboloid;
  }
  return QuadricClass::degenerate_or_other;
}

struct ResidualSweep {
  double max_residual = 0.0;
  int samples = 0;
};

// Max of |C(c(p), c(p))| over the barycentric grid {(i/n, j/n, 1-(i+j)/n)},
// normalized by the form magnitude and (1 + |x|^2)^2. Pole parameters are
// skipped.
inline ResidualSweep validate_residuals(const ControlNet& net, const SymForm4& form,
                                        int grid_n, double eps = kDefaultTolerance) {
  if (grid_n < 2) {
    fail(ErrorKind::ValidationError, "validate_residuals: grid_n must be >= 2");
  }
  const double mag = std::max(form.max_abs(), 1e-300);
  ResidualSweep sweep;
  for (int i = 0; i <= grid_n; ++i) {
    for (int j = 0; j + i <= grid_n; ++j) {
      const BarycentricParam p{static_cast<double>(i) / grid_n,
                               static_cast<double>(j) / grid_n};
      Vec3 x;
      try {
        x = evaluate(net, p, eps);
      } catch (const Error&) {
        continue;  // pole
      }
      const double denom = 1.0 + norm_sq(x);
      const double r = std::abs(form.evaluate(x)) / (mag * denom * denom);
      sweep.max_residual = std::max(sweep.max_residual, r);
      sweep.samples += 1;
    }
  }
  return sweep;
}

struct FitResult {
  PolyCoeffs coefficients;     // normalized like assemble_quadric output
  double singular_ratio = 0.0; // two smallest singular values of the design
  int samples = 0;
};

// Independent implicitization oracle: samples the patch at deterministic
// stratified barycentric parameters (irrational offsets break grid
// symmetries that would otherwise lower the design rank), then takes the
// nullspace direction of the 10-column monomial design via the normal
// equations. Fully deterministic, hence bit-reproducible.
inline FitResult fit_by_sampling(const ControlNet& net, int n_points,
                                 double eps = kDefaultTolerance) {
  if (n_points < 10) {
    fail(ErrorKind::ValidationError, "fit_by_sampling: n_points must be >= 10");
  }

  int g = 1;
  while (g * (g + 1) / 2 < n_points) ++g;
  constexpr double kOffsetU = 0.70710678118654752;  // 1/sqrt(2)
  constexpr double kOffsetV = 0.57735026918962576;  // 1/sqrt(3)

  std::array<std::array<double, 10>, 10> normal{};
  int taken = 0;
  for (int i = 0; i < g && taken < n_points; ++i) {
    for (int j = 0; j < g - i && taken < n_points; ++j) {
      const BarycentricParam p{(i + kOffsetU) / g, (j + kOffsetV) / g};
      const Vec3 x = evaluate(net, p, eps);
      const std::array<double, 10> row = {x.x * x.x, x.y * x.y, x.z * x.z,
                                          x.x * x.y, x.x * x.z, x.y * x.z,
                                          x.x,       x.y,       x.z,       1.0};
      for (std::size_t r = 0; r < 10; ++r) {
        for (std::size_t c = 0; c < 10; ++c) normal[r][c] += row[r] * row[c];
      }
      ++taken;
    }
  }

  const auto eig = detail::jacobi_eigensymmetric<10>(normal);
  const auto sigma = [&](std::size_t k) { return std::sqrt(std::max(eig.values[k], 0.0)); };
  const double sigma_max = sigma(9);
  if (sigma(1) < eps * std::max(sigma_max, 1e-300)) {
    fail(ErrorKind::RankDeficient,
         "fit_by_sampling: patch does not determine a unique quadric");
  }

  PolyCoeffs raw;
  for (std::size_t i = 0; i < 10; ++i) raw[i] = eig.vectors[0][i];

  FitResult result;
  result.coefficients = expand_coefficients(normalize_quadric(form_from_coefficients(raw), eps));
  result.singular_ratio = sigma(0) / sigma(1);
  result.samples = taken;
  return result;
}

}  // namespace steiner
