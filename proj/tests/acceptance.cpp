// Acceptance suite: one self-contained check per shipping criterion, one
// PASS/FAIL line each. Exit code is the number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "steiner/steiner.hpp"

using namespace steiner;

namespace {

int failures = 0;

struct Criterion {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

void emit(int number, const char* name, const Criterion& c) {
  if (c.ok) {
    std::printf("PASS  %d  %s\n", number, name);
  } else {
    std::printf("FAIL  %d  %s  (%s)\n", number, name, c.detail.c_str());
    ++failures;
  }
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --- criterion 1: elliptic paraboloid reproduction + runtime -------------

void criterion1() {
  Criterion c;
  const ControlNet net = fixtures::example1();
  const QuadricReport report = implicitize(net);
  c.require(report.is_quadric(), "verdict is not quadric");
  if (report.coefficients) {
    const std::array<double, 10> want{-1, -1, 0, -1, 0, 0, 2, 2, -2, 0};
    const double angle = fixtures::aligned_angle<10>(report.coefficients->c, want);
    c.require(angle < 1e-9, "coefficient angle " + num(angle));
  }
  c.require(report.quadric_class && *report.quadric_class == QuadricClass::elliptic_paraboloid,
            "class is not elliptic_paraboloid");

  (void)implicitize(net);  // warm up
  double best_ms = 1e9;
  for (int i = 0; i < 5; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    (void)implicitize(net);
    const auto t1 = std::chrono::steady_clock::now();
    best_ms = std::min(best_ms, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  c.require(best_ms < 10.0, "runtime " + num(best_ms) + " ms");
  emit(1, "example 1: elliptic paraboloid, angle < 1e-9, < 10 ms", c);
}

// --- criterion 2: sphere reproduction -------------------------------------

void criterion2() {
  Criterion c;
  const ControlNet net = fixtures::example2();
  const Tetrahedron tet = build_tetrahedron(net);
  const QuadricReport report = implicitize(net);
  c.require(report.is_quadric(), "verdict is not quadric");

  c.require(std::abs(tet.apex.x) < 1e-12 && std::abs(tet.apex.y) < 1e-12 &&
                std::abs(tet.apex.z + 1.0) < 1e-12 && tet.apex.h == 1.0,
            "intermediate point is not (0,0,-1)");

  if (report.quadric) {
    SymForm4 expected;  // 2tu + 2tv + 4tw + 2uv + 2vw + 2uw
    expected.accumulate(2, sym_product(tet.corner_plane, plane_of(tet, Boundary::u)));
    expected.accumulate(2, sym_product(tet.corner_plane, plane_of(tet, Boundary::v)));
    expected.accumulate(4, sym_product(tet.corner_plane, plane_of(tet, Boundary::w)));
    expected.accumulate(2, sym_product(plane_of(tet, Boundary::u), plane_of(tet, Boundary::v)));
    expected.accumulate(2, sym_product(plane_of(tet, Boundary::v), plane_of(tet, Boundary::w)));
    expected.accumulate(2, sym_product(plane_of(tet, Boundary::u), plane_of(tet, Boundary::w)));
    const double mangle =
        fixtures::aligned_angle<16>(report.quadric->row_major(), expected.row_major());
    c.require(mangle < 1e-9, "form differs from 2tu+2tv+4tw+2uv+2vw+2uw by " + num(mangle));
  }
  if (report.coefficients) {
    const std::array<double, 10> want{-1, -1, -1, 0, 0, 0, 0, 0, 0, 1};
    const double angle = fixtures::aligned_angle<10>(report.coefficients->c, want);
    c.require(angle < 1e-9, "coefficient angle " + num(angle));
  }
  c.require(report.quadric_class && *report.quadric_class == QuadricClass::sphere,
            "class is not sphere");
  emit(2, "example 2: sphere form 2tu+2tv+4tw+2uv+2vw+2uw, S=(0,0,-1)", c);
}

// --- criterion 3: meeting point at infinity -------------------------------

void criterion3() {
  Criterion c;
  const ControlNet net = fixtures::example3();
  const Tetrahedron tet = build_tetrahedron(net);
  const auto [compat, adjusted] = quadric_test(net, tet);
  c.require(compat.is_quadric, "verdict is not quadric");
  c.require(compat.apex_is_infinite, "meeting point is not at infinity");
  if (adjusted) {
    const auto& reps = adjusted->apex_representatives;
    const AffineForm t = normalize_form(tet.corner_plane, reps[0]);
    c.require(std::abs(evaluate_form(t, reps[0]) - 1.0) < 1e-9,
              "t(S_u) = " + num(evaluate_form(t, reps[0])));
    c.require(std::abs(evaluate_form(t, reps[1]) + 0.25) < 1e-9,
              "t(S_v) = " + num(evaluate_form(t, reps[1])));
    c.require(std::abs(evaluate_form(t, reps[2]) - 0.75) < 1e-9,
              "t(S_w) = " + num(evaluate_form(t, reps[2])));
  }
  const QuadricReport report = implicitize(net);
  if (report.coefficients) {
    const std::array<double, 10> want{-1, 1, 0, 0, 0, 0, 0, 0, 2, 0};
    const double angle = fixtures::aligned_angle<10>(report.coefficients->c, want);
    c.require(angle < 1e-9, "coefficient angle " + num(angle));
  }
  c.require(report.quadric_class && *report.quadric_class == QuadricClass::hyperbolic_paraboloid,
            "class is not hyperbolic_paraboloid");
  emit(3, "example 3: t(S_u)=1, t(S_v)=-1/4, t(S_w)=3/4, hyperbolic paraboloid", c);
}

// --- criterion 4: residual vanishing --------------------------------------

void criterion4() {
  Criterion c;
  const ControlNet nets[] = {fixtures::example1(), fixtures::example2(), fixtures::example3()};
  for (int i = 0; i < 3; ++i) {
    const QuadricReport report = implicitize(nets[i]);
    if (!report.quadric) {
      c.require(false, "fixture " + std::to_string(i + 1) + " rejected");
      continue;
    }
    const ResidualSweep sweep = validate_residuals(nets[i], *report.quadric, 15);
    c.require(sweep.max_residual < 1e-10,
              "fixture " + std::to_string(i + 1) + " residual " + num(sweep.max_residual));
  }
  emit(4, "residual vanishing: grid 15 max residual < 1e-10 on all fixtures", c);
}

// --- criterion 5: closed form vs sampling oracle ---------------------------

void criterion5() {
  Criterion c;
  std::vector<ControlNet> corpus = {fixtures::example1(), fixtures::example2(),
                                    fixtures::example3()};
  fixtures::Rng rng(501);
  const ControlNet bases[] = {fixtures::example1(), fixtures::example2(), fixtures::example3()};
  for (int i = 0; i < 51; ++i) {
    const ControlNet& base = bases[i % 3];
    const fixtures::Affine map = fixtures::random_affine(rng);
    ControlNet net = fixtures::transformed(base, map);
    corpus.push_back(fixtures::with_weight_scale(net, rng.uniform(0.25, 4.0)));
  }
  int index = 0;
  for (const ControlNet& net : corpus) {
    const QuadricReport report = implicitize(net);
    if (!report.coefficients) {
      c.require(false, "corpus net " + std::to_string(index) + " rejected");
      ++index;
      continue;
    }
    const FitResult fit = fit_by_sampling(net, 25);
    const double angle = coefficient_angle(*report.coefficients, fit.coefficients);
    c.require(angle < 1e-6,
              "corpus net " + std::to_string(index) + " angle " + num(angle));
    ++index;
  }
  emit(5, "oracle agreement: 3 fixtures + 51 generated patches, angle < 1e-6", c);
}

// --- criterion 6: rejection power ------------------------------------------

void criterion6() {
  Criterion c;
  const ControlNet base = fixtures::example2();

  for (int slot : {kSlot011, kSlot101, kSlot110}) {
    for (double factor : {1.1, 0.9}) {
      const ControlNet perturbed =
          fixtures::with_weight(base, slot, base.weight(slot) * factor);
      c.require(!implicitize(perturbed).is_quadric(),
                std::string("perturbed ") + kNetKeys[slot] + " not rejected");
    }
  }

  // CLI exit code 2 for one representative perturbed document
  const auto dir = std::filesystem::temp_directory_path() / "steinerq_acceptance";
  std::filesystem::create_directories(dir);
  const auto path = dir / "perturbed.json";
  {
    std::ofstream out(path);
    out << R"({"net":{"002":[0,0,1],"011":[1,0,1],"020":[1,0,0],"101":[0,1,1],"110":[1,1,1],"200":[0,1,0]},
               "weights":{"002":1,"011":1,"020":2,"101":1,"110":1.1,"200":2}})";
  }
  const std::string cmd = std::string(STEINERQ_BIN) + " check " + path.string() +
                          " > /dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  c.require(exit_code == 2, "CLI exit code " + std::to_string(exit_code) + ", expected 2");

  // randomized corpus: verdict and tangent determinant must agree case by case
  fixtures::Rng rng(601);
  int agreements = 0;
  for (int i = 0; i < 100; ++i) {
    const fixtures::Affine map = fixtures::random_affine(rng);
    ControlNet net = fixtures::transformed(base, map);
    const bool spoil = i % 2 == 1;
    if (spoil) {
      const int slot = std::array<int, 3>{kSlot011, kSlot101, kSlot110}[rng.pick(3)];
      const double bump = rng.uniform(0.05, 0.2) * (rng.pick(2) == 0 ? 1.0 : -1.0);
      net = fixtures::with_weight(net, slot, net.weight(slot) * (1.0 + bump));
    }
    const auto [compat, adjusted] = quadric_test(net);
    if (!compat.tangent_determinant) {
      c.require(false, "case " + std::to_string(i) + " has no determinant");
      continue;
    }
    const bool det_says_quadric = std::abs(*compat.tangent_determinant) < kDefaultTolerance;
    if (det_says_quadric == compat.is_quadric && compat.is_quadric == !spoil) {
      ++agreements;
    }
  }
  c.require(agreements == 100,
            "verdict/determinant agreement on " + std::to_string(agreements) + "/100 cases");
  emit(6, "rejection power: +-10% interior weights flip verdict; oracle agrees 100/100", c);
}

// --- criterion 7: invariances ----------------------------------------------

void criterion7() {
  Criterion c;
  for (const ControlNet& net : {fixtures::example2(), fixtures::example3()}) {
    const QuadricReport base = implicitize(net);
    if (!base.coefficients) {
      c.require(false, "fixture rejected");
      continue;
    }
    for (double lambda : {0.5, 3.0, 10.0}) {
      const QuadricReport scaled = implicitize(fixtures::with_weight_scale(net, lambda));
      if (!scaled.coefficients) {
        c.require(false, "scaled fixture rejected");
        continue;
      }
      for (std::size_t i = 0; i < 10; ++i) {
        const double diff = std::abs((*scaled.coefficients)[i] - (*base.coefficients)[i]);
        c.require(diff < 1e-12, "weight-scale diff " + num(diff));
      }
    }
  }

  const ControlNet net = fixtures::example2();
  const QuadricReport ref = implicitize(net);
  fixtures::Rng rng(701);
  for (int iter = 0; iter < 20 && ref.quadric; ++iter) {
    const fixtures::Affine map = fixtures::random_affine(rng);
    const QuadricReport moved = implicitize(fixtures::transformed(net, map));
    if (!moved.quadric) {
      c.require(false, "transformed fixture rejected");
      continue;
    }
    const auto& a = map.a;
    const double d = map.det();
    const double inv[3][3] = {
        {(a[1][1] * a[2][2] - a[1][2] * a[2][1]) / d, (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / d,
         (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / d},
        {(a[1][2] * a[2][0] - a[1][0] * a[2][2]) / d, (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / d,
         (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / d},
        {(a[1][0] * a[2][1] - a[1][1] * a[2][0]) / d, (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / d,
         (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / d}};
    double hinv[4][4] = {};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) hinv[i][j] = inv[i][j];
      hinv[i][3] = -(inv[i][0] * map.b.x + inv[i][1] * map.b.y + inv[i][2] * map.b.z);
    }
    hinv[3][3] = 1.0;
    std::array<double, 16> expected{};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double sum = 0.0;
        for (int k = 0; k < 4; ++k) {
          for (int l = 0; l < 4; ++l) {
            sum += hinv[k][i] *
                   ref.quadric->at(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) *
                   hinv[l][j];
          }
        }
        expected[static_cast<std::size_t>(4 * i + j)] = sum;
      }
    }
    const double angle = fixtures::aligned_angle<16>(moved.quadric->row_major(), expected);
    c.require(angle < 1e-8, "covariance angle " + num(angle));
  }
  emit(7, "invariance: weight scaling exact, affine covariance < 1e-8 on 20 maps", c);
}

// --- criterion 8: boundary consistency + conic-form vanishing --------------

void criterion8() {
  Criterion c;
  for (const ControlNet& net :
       {fixtures::example1(), fixtures::example2(), fixtures::example3()}) {
    const ConicArc arc_u = boundary_conic(net, Boundary::u);
    for (int k = 0; k < 50; ++k) {
      const double v = k / 49.0;
      const double diff = norm(evaluate(net, {0.0, v}) - evaluate_conic(arc_u, v));
      c.require(diff < 1e-12, "boundary mismatch " + num(diff));
    }

    const Tetrahedron tet = build_tetrahedron(net);
    const auto [compat, adjusted] = quadric_test(net, tet);
    if (!adjusted) {
      c.require(false, "fixture rejected");
      continue;
    }
    for (Boundary b : {Boundary::u, Boundary::v, Boundary::w}) {
      const SymForm4 cform = boundary_conic_form(tet, *adjusted, b);
      const ConicArc arc = boundary_conic(net, b);
      const double mag = cform.max_abs();
      for (int k = 0; k < 50; ++k) {
        const Vec3 x = evaluate_conic(arc, k / 49.0);
        const double r = std::abs(cform.evaluate(x)) / (mag * (1.0 + norm_sq(x)));
        c.require(r < 1e-10, "conic-form residual " + num(r));
      }
    }
  }
  emit(8, "boundary consistency < 1e-12; conic form vanishes < 1e-10", c);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (failures == 0) {
    std::printf("all 8 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
