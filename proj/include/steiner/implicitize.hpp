#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "steiner/analysis.hpp"
#include "steiner/error.hpp"
#include "steiner/patch.hpp"
#include "steiner/projective.hpp"

namespace steiner {

// The tetrahedron spanned by the three net corners and the common point of
// the boundary planes ("apex" below). The boundary planes carry the conics
// at u=0, v=0, w=0; the corner plane passes through c002, c020, c200.
// Normalization: u(R) = v(Q) = w(P) = 1 and corner_plane(apex) = 1.
struct Tetrahedron {
  AffineForm corner_plane;
  std::array<AffineForm, 3> boundary_plane;  // indexed by Boundary
  Vec3 p, q, r;                              // c002, c020, c200
  HPoint apex;                               // may be at infinity
};

inline const AffineForm& plane_of(const Tetrahedron& tet, Boundary which) {
  return tet.boundary_plane[static_cast<std::size_t>(which)];
}

inline Tetrahedron build_tetrahedron(const ControlNet& net, double eps = kDefaultTolerance) {
  Tetrahedron tet;
  tet.p = net.corner_p();
  tet.q = net.corner_q();
  tet.r = net.corner_r();

  const auto normalized_at = [eps](const AffineForm& f, const HPoint& at, const char* what) {
    const double value = evaluate_form(f, at);
    const double scale =
        f.magnitude() * std::sqrt(at.x * at.x + at.y * at.y + at.z * at.z + at.h * at.h);
    if (std::abs(value) < eps * scale) {
      fail(ErrorKind::DegenerateConfiguration, what);
    }
    return (1.0 / value) * f;
  };

  tet.boundary_plane[0] =
      normalized_at(plane_through(net.point(kSlot002), net.point(kSlot011), net.point(kSlot020), eps),
                    HPoint::finite(tet.r), "build_tetrahedron: corner R lies on the u plane");
  tet.boundary_plane[1] =
      normalized_at(plane_through(net.point(kSlot002), net.point(kSlot101), net.point(kSlot200), eps),
                    HPoint::finite(tet.q), "build_tetrahedron: corner Q lies on the v plane");
  tet.boundary_plane[2] =
      normalized_at(plane_through(net.point(kSlot020), net.point(kSlot110), net.point(kSlot200), eps),
                    HPoint::finite(tet.p), "build_tetrahedron: corner P lies on the w plane");

  tet.apex = intersect_three_planes(tet.boundary_plane[0], tet.boundary_plane[1],
                                    tet.boundary_plane[2], eps);
  tet.corner_plane = normalized_at(plane_through(tet.p, tet.q, tet.r, eps), tet.apex,
                                   "build_tetrahedron: apex lies on the corner plane");
  return tet;
}

// Barycentric coordinates of a candidate common point with respect to a
// conic polygon, plus the raw on-conic value beta^2 w0 w2 - 4 alpha gamma
// w1^2. The value vanishes exactly when (alpha, -beta/2, gamma) is a Moebius
// reweighting of the arc, i.e. when the point lies on the conic.
struct ScaleTriple {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double residual = 0.0;
};

inline ScaleTriple conic_scale_triple(const ConicArc& arc, const HPoint& point,
                                      double eps = kDefaultTolerance) {
  const Vec3 e1 = arc.points[1] - arc.points[0];
  const Vec3 e2 = arc.points[2] - arc.points[0];
  if (norm(cross(e1, e2)) < eps * std::max(norm(e1) * norm(e2), 1e-300)) {
    fail(ErrorKind::DegenerateConic, "conic_scale_triple: collinear control polygon");
  }
  const Barycentric bc = barycentric_in_plane(point, arc.points[0], arc.points[1],
                                              arc.points[2], eps);
  ScaleTriple st{bc.alpha, bc.beta, bc.gamma, 0.0};
  st.residual = bc.beta * bc.beta * arc.weights[0] * arc.weights[2] -
                4.0 * bc.alpha * bc.gamma * arc.weights[1] * arc.weights[1];
  return st;
}

// Adjusted weight list merged from the three per-conic triples, with the
// reparametrization scales recovered against the original weights and the
// apex representatives (4-vector weight combinations) per boundary conic.
struct AdjustedWeights {
  std::array<double, 6> weights{};  // slot order 002, 011, 020, 101, 110, 200
  double rho = 0.0, sigma = 0.0, tau = 0.0;
  std::array<HPoint, 3> apex_representatives{};  // for the u, v, w conics
};

struct CompatibilityReport {
  std::array<double, 3> on_conic_residuals{};  // normalized, per conic u, v, w
  double compatibility_residual = 0.0;         // normalized shared-corner mismatch
  std::optional<double> tangent_determinant;   // normalized; finite apex only
  bool is_quadric = false;
  bool apex_is_infinite = false;
};

// Tangent direction of a conic at a point it passes through, computed from
// the weight triple matched to that point: w0·(p0 - s) - w2·(p2 - s).
inline Vec3 tangent_at(const ConicArc& adjusted_arc, const Vec3& s) {
  return adjusted_arc.weights[0] * (adjusted_arc.points[0] - s) -
         adjusted_arc.weights[2] * (adjusted_arc.points[2] - s);
}

// det of the three boundary-conic tangents at a finite apex, normalized by
// the product of their norms. Vanishes iff the tangents are coplanar, which
// is the independent oracle for the quadric verdict. The triples are the
// Moebius-rescaled original weight lists, one per conic.
inline double coplanarity_determinant(const ControlNet& net,
                                      const std::array<std::array<double, 3>, 3>& adjusted_triples,
                                      const HPoint& apex, double eps = kDefaultTolerance) {
  if (apex.is_infinite()) {
    fail(ErrorKind::DegenerateConfiguration,
         "coplanarity_determinant: requires a finite apex");
  }
  const Vec3 s = apex.affine();
  std::array<Vec3, 3> dirs;
  double norms = 1.0;
  for (std::size_t i = 0; i < 3; ++i) {
    ConicArc arc = boundary_conic(net, static_cast<Boundary>(i), eps);
    arc.weights = adjusted_triples[i];
    dirs[i] = tangent_at(arc, s);
    norms *= norm(dirs[i]);
  }
  return det3(dirs[0], dirs[1], dirs[2]) / std::max(norms, 1e-300);
}

namespace detail {

inline double normalized_residual(double lhs, double rhs) {
  const double denom = std::abs(lhs) + std::abs(rhs);
  return denom > 1e-300 ? std::abs(lhs - rhs) / denom : 0.0;
}

inline HPoint weight_combination(const Vec3& a, double wa, const Vec3& b, double wb,
                                 const Vec3& c, double wc, bool at_infinity) {
  const Vec3 xyz = wa * a - 2.0 * wb * b + wc * c;
  const double h = at_infinity ? 0.0 : wa - 2.0 * wb + wc;
  return {xyz.x, xyz.y, xyz.z, h};
}

}  // namespace detail

// The quadric decision. Extracts each conic's triple from the apex
// barycentrics, checks the apex lies on all three conics, then merges the
// triples into one six-weight list: the u triple is kept as-is and the v/w
// triples are scaled onto it through the shared corner weights (002 with v,
// 020 with w). That leaves a single condition - both scaled triples must
// produce the same 200 weight - whose normalized mismatch is the
// compatibility residual. A "not a quadric" outcome is a report, never an
// error.
inline std::pair<CompatibilityReport, std::optional<AdjustedWeights>> quadric_test(
    const ControlNet& net, const Tetrahedron& tet, double eps = kDefaultTolerance) {
  // eps drives the residual verdict only. Structural guards (degeneracy
  // detection, division safety) never loosen beyond the library default, so
  // a permissive verdict tolerance cannot corrupt the arithmetic.
  const double guard = std::min(eps, kDefaultTolerance);
  const std::array<ConicArc, 3> arcs = {boundary_conic(net, Boundary::u, guard),
                                        boundary_conic(net, Boundary::v, guard),
                                        boundary_conic(net, Boundary::w, guard)};
  const HPoint& apex = tet.apex;

  if (!apex.is_infinite()) {
    for (const Vec3& corner : {tet.p, tet.q, tet.r}) {
      if (projectively_equal(apex, HPoint::finite(corner), guard)) {
        fail(ErrorKind::DegenerateConfiguration,
             "quadric_test: apex coincides with a corner of the net");
      }
    }
  }

  CompatibilityReport report;
  report.apex_is_infinite = apex.is_infinite();

  std::array<ScaleTriple, 3> triples;
  for (std::size_t i = 0; i < 3; ++i) {
    triples[i] = conic_scale_triple(arcs[i], apex, guard);
    const auto& w = arcs[i].weights;
    const double on = triples[i].beta * triples[i].beta * w[0] * w[2];
    const double off = 4.0 * triples[i].alpha * triples[i].gamma * w[1] * w[1];
    report.on_conic_residuals[i] = detail::normalized_residual(on, off);
  }

  const ScaleTriple& tu = triples[0];
  const ScaleTriple& tv = triples[1];
  const ScaleTriple& tw = triples[2];
  const auto magnitude = [](const ScaleTriple& t) {
    return std::max({std::abs(t.alpha), std::abs(t.beta), std::abs(t.gamma)});
  };

  // Scale extraction divides by the shared-corner entries; if one of them
  // vanishes the apex sits on a polygon side line and the on-conic residual
  // is already maximal, so the merge is skipped with a sentinel residual.
  const bool merge_ok = std::abs(tv.alpha) > guard * magnitude(tv) &&
                        std::abs(tw.alpha) > guard * magnitude(tw);

  std::array<double, 6> merged{};
  double m200_from_w = 0.0;
  if (merge_ok) {
    merged[kSlot002] = tu.alpha;
    merged[kSlot011] = -tu.beta / 2.0;
    merged[kSlot020] = tu.gamma;
    const double lambda_v = merged[kSlot002] / tv.alpha;
    merged[kSlot101] = -lambda_v * tv.beta / 2.0;
    merged[kSlot200] = lambda_v * tv.gamma;
    const double lambda_w = merged[kSlot020] / tw.alpha;
    merged[kSlot110] = -lambda_w * tw.beta / 2.0;
    m200_from_w = lambda_w * tw.gamma;
    const double denom = std::abs(merged[kSlot200]) + std::abs(m200_from_w);
    report.compatibility_residual =
        denom > 1e-300 ? std::abs(merged[kSlot200] - m200_from_w) / denom : 1.0;
  } else {
    report.compatibility_residual = 1.0;
  }

  // Reparametrization scales against the original weights; these feed the
  // tangent oracle and the diagnostics, not the verdict.
  const auto& weights = net.weights();
  double rho = 0.0, sigma = 0.0, tau = 0.0;
  const bool scales_ok = merge_ok && std::abs(tu.gamma) > guard * magnitude(tu) &&
                         std::abs(tv.gamma) > guard * magnitude(tv);
  if (scales_ok) {
    rho = -tu.beta * weights[kSlot020] / (2.0 * tu.gamma * weights[kSlot011]);
    sigma = -tw.beta * weights[kSlot020] / (2.0 * tw.alpha * weights[kSlot110]);
    if (rho != 0.0) {
      tau = -tv.beta * sigma * weights[kSlot200] /
            (2.0 * tv.gamma * rho * weights[kSlot101]);
    }
  }

  if (!apex.is_infinite() && scales_ok && rho != 0.0) {
    const std::array<std::array<double, 3>, 3> rescaled = {{
        {rho * rho * weights[kSlot002], rho * weights[kSlot011], weights[kSlot020]},
        {tau * tau * rho * rho * weights[kSlot002], tau * sigma * rho * weights[kSlot101],
         sigma * sigma * weights[kSlot200]},
        {weights[kSlot020], sigma * weights[kSlot110], sigma * sigma * weights[kSlot200]},
    }};
    report.tangent_determinant = coplanarity_determinant(net, rescaled, apex, guard);
  }

  bool accept = merge_ok && report.compatibility_residual < eps;
  for (double r : report.on_conic_residuals) accept = accept && r < eps;
  report.is_quadric = accept;

  if (!accept) return {report, std::nullopt};

  AdjustedWeights adjusted;
  adjusted.weights = merged;
  adjusted.rho = rho;
  adjusted.sigma = sigma;
  adjusted.tau = tau;
  const bool inf = apex.is_infinite();
  adjusted.apex_representatives[0] =
      detail::weight_combination(net.point(kSlot002), merged[kSlot002], net.point(kSlot011),
                                 merged[kSlot011], net.point(kSlot020), merged[kSlot020], inf);
  adjusted.apex_representatives[1] =
      detail::weight_combination(net.point(kSlot002), merged[kSlot002], net.point(kSlot101),
                                 merged[kSlot101], net.point(kSlot200), merged[kSlot200], inf);
  adjusted.apex_representatives[2] =
      detail::weight_combination(net.point(kSlot200), merged[kSlot200], net.point(kSlot110),
                                 merged[kSlot110], net.point(kSlot020), merged[kSlot020], inf);
  return {report, adjusted};
}

inline std::pair<CompatibilityReport, std::optional<AdjustedWeights>> quadric_test(
    const ControlNet& net, double eps = kDefaultTolerance) {
  return quadric_test(net, build_tetrahedron(net, std::min(eps, kDefaultTolerance)), eps);
}

// Bilinear form of the quadric through the tetrahedron:
//   C = w020 w002 tu + w002 w200 tv + w200 w020 tw
//     + w002 t(S_w) uv + w200 t(S_u) vw + w020 t(S_v) uw,
// where S_x are the apex representatives. For a finite apex t(S_x) reduces
// to the representative's h component (the plain weight sums); for an apex
// at infinity the corner plane is re-normalized against the u-conic
// representative first. Output is scale-normalized with a positive leading
// polynomial coefficient.
inline SymForm4 assemble_quadric(const Tetrahedron& tet, const AdjustedWeights& aw,
                                 double eps = kDefaultTolerance) {
  const double w002 = aw.weights[kSlot002];
  const double w020 = aw.weights[kSlot020];
  const double w200 = aw.weights[kSlot200];
  const AffineForm& u = plane_of(tet, Boundary::u);
  const AffineForm& v = plane_of(tet, Boundary::v);
  const AffineForm& w = plane_of(tet, Boundary::w);

  AffineForm t = tet.corner_plane;
  double t_su, t_sv, t_sw;
  if (tet.apex.is_infinite()) {
    t = normalize_form(tet.corner_plane, aw.apex_representatives[0], eps);
    t_su = evaluate_form(t, aw.apex_representatives[0]);
    t_sv = evaluate_form(t, aw.apex_representatives[1]);
    t_sw = evaluate_form(t, aw.apex_representatives[2]);
  } else {
    t_su = aw.apex_representatives[0].h;
    t_sv = aw.apex_representatives[1].h;
    t_sw = aw.apex_representatives[2].h;
  }

  SymForm4 c;
  c.accumulate(w020 * w002, sym_product(t, u));
  c.accumulate(w002 * w200, sym_product(t, v));
  c.accumulate(w200 * w020, sym_product(t, w));
  c.accumulate(w002 * t_sw, sym_product(u, v));
  c.accumulate(w200 * t_su, sym_product(v, w));
  c.accumulate(w020 * t_sv, sym_product(u, w));
  return normalize_quadric(c, eps);
}

// In-plane bilinear form of one boundary conic (the restriction of the full
// quadric to that boundary plane, divided by the opposite corner weight).
// Vanishes on every point of the conic.
inline SymForm4 boundary_conic_form(const Tetrahedron& tet, const AdjustedWeights& aw,
                                    Boundary which, double eps = kDefaultTolerance) {
  AffineForm t = tet.corner_plane;
  const bool inf = tet.apex.is_infinite();
  if (inf) t = normalize_form(tet.corner_plane, aw.apex_representatives[0], eps);
  const auto t_of = [&](const HPoint& rep) { return inf ? evaluate_form(t, rep) : rep.h; };

  double first = 0.0, last = 0.0;
  const AffineForm* plane_a = nullptr;
  const AffineForm* plane_b = nullptr;
  switch (which) {
    case Boundary::u:
      first = aw.weights[kSlot002];
      last = aw.weights[kSlot020];
      plane_a = &plane_of(tet, Boundary::v);
      plane_b = &plane_of(tet, Boundary::w);
      break;
    case Boundary::v:
      first = aw.weights[kSlot002];
      last = aw.weights[kSlot200];
      plane_a = &plane_of(tet, Boundary::u);
      plane_b = &plane_of(tet, Boundary::w);
      break;
    case Boundary::w:
      first = aw.weights[kSlot020];
      last = aw.weights[kSlot200];
      plane_a = &plane_of(tet, Boundary::u);
      plane_b = &plane_of(tet, Boundary::v);
      break;
  }
  SymForm4 c;
  c.accumulate(first, sym_product(t, *plane_a));
  c.accumulate(last, sym_product(t, *plane_b));
  c.accumulate(t_of(aw.apex_representatives[static_cast<std::size_t>(which)]),
               sym_product(*plane_a, *plane_b));
  return c;
}

// Full decision outcome for one net.
struct QuadricReport {
  CompatibilityReport compatibility;
  HPoint apex;
  std::optional<AdjustedWeights> adjusted;
  std::optional<SymForm4> quadric;
  std::optional<PolyCoeffs> coefficients;
  std::optional<QuadricClass> quadric_class;
  double tolerance = kDefaultTolerance;

  bool is_quadric() const { return compatibility.is_quadric; }
};

inline QuadricReport implicitize(const ControlNet& net, double eps = kDefaultTolerance) {
  QuadricReport report;
  report.tolerance = eps;
  const Tetrahedron tet = build_tetrahedron(net, std::min(eps, kDefaultTolerance));
  auto [compatibility, adjusted] = quadric_test(net, tet, eps);
  report.compatibility = compatibility;
  report.apex = tet.apex;
  report.adjusted = adjusted;
  if (adjusted) {
    const SymForm4 c = assemble_quadric(tet, *adjusted, eps);
    report.quadric = c;
    report.coefficients = expand_coefficients(c);
    report.quadric_class = classify(c, eps);
  }
  return report;
}

}  // namespace steiner
