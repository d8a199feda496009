#pragma once

// Shared fixtures and small independent oracles for the test suites. The
// three reference nets are exact in small integers (and halves), so tests
// against them can pin values tightly.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "steiner/steiner.hpp"

namespace fixtures {

using namespace steiner;

// Octant of an elliptic paraboloid; the boundary planes meet at infinity.
inline ControlNet example1() {
  return ControlNet({Vec3{0, 0, 0}, Vec3{1, 0, 1}, Vec3{2, 0, 0},
                     Vec3{0, 1, 1}, Vec3{1, 1, 1}, Vec3{0, 2, 0}},
                    {1, 1, 1, 1, 1, 1});
}

// Octant of the unit sphere; finite meeting point (0,0,-1).
inline ControlNet example2() {
  return ControlNet({Vec3{0, 0, 1}, Vec3{1, 0, 1}, Vec3{1, 0, 0},
                     Vec3{0, 1, 1}, Vec3{1, 1, 1}, Vec3{0, 1, 0}},
                    {1, 1, 2, 1, 1, 2});
}

// Hyperbolic paraboloid patch; meeting point at infinity with three
// different representative scales.
inline ControlNet example3() {
  return ControlNet({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{2, 0, 2},
                     Vec3{0, 0.5, 0}, Vec3{1, 0.5, 0}, Vec3{0, 1, -0.5}},
                    {1, 1, 1, 1, 1, 1});
}

inline ControlNet with_weight(const ControlNet& net, int slot, double value) {
  auto weights = net.weights();
  weights[static_cast<std::size_t>(slot)] = value;
  return ControlNet(net.points(), weights);
}

inline ControlNet with_weight_scale(const ControlNet& net, double lambda) {
  auto weights = net.weights();
  for (auto& w : weights) w *= lambda;
  return ControlNet(net.points(), weights);
}

// Direct six-term rational Bernstein sum, written out monomial by monomial.
// Kept independent of the library evaluation path on purpose.
inline Vec3 brute_force_point(const ControlNet& net, double u, double v) {
  const double w = 1.0 - u - v;
  const std::array<double, 6> basis = {w * w,         2.0 * v * w, v * v,
                                       2.0 * u * w,   2.0 * u * v, u * u};
  Vec3 num{};
  double den = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double c = basis[static_cast<std::size_t>(k)] * net.weight(k);
    num = num + c * net.point(k);
    den += c;
  }
  return num / den;
}

struct Rng {
  std::mt19937 gen;
  explicit Rng(std::uint32_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen); }
};

struct Affine {
  std::array<std::array<double, 3>, 3> a{};
  Vec3 b{};

  Vec3 apply(const Vec3& p) const {
    return {a[0][0] * p.x + a[0][1] * p.y + a[0][2] * p.z + b.x,
            a[1][0] * p.x + a[1][1] * p.y + a[1][2] * p.z + b.y,
            a[2][0] * p.x + a[2][1] * p.y + a[2][2] * p.z + b.z};
  }

  double det() const {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }
};

// Invertible map of moderate conditioning: I + 0.6*random, resampled until
// the determinant is comfortably away from zero.
inline Affine random_affine(Rng& rng) {
  for (;;) {
    Affine map;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        map.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            (i == j ? 1.0 : 0.0) + rng.uniform(-0.6, 0.6);
      }
    }
    map.b = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    if (std::abs(map.det()) > 0.25) return map;
  }
}

inline ControlNet transformed(const ControlNet& net, const Affine& map) {
  std::array<Vec3, 6> points;
  for (int k = 0; k < 6; ++k) points[static_cast<std::size_t>(k)] = map.apply(net.point(k));
  return ControlNet(points, net.weights());
}

template <typename F>
std::optional<ErrorKind> thrown_kind(F&& f) {
  try {
    (void)f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

// sin-based angle between two flat arrays after sign alignment.
template <std::size_t N>
double aligned_angle(const std::array<double, N>& a, const std::array<double, N>& b) {
  double ab = 0.0;
  for (std::size_t i = 0; i < N; ++i) ab += a[i] * b[i];
  std::array<double, N> bb = b;
  if (ab < 0.0) {
    for (auto& v : bb) v = -v;
  }
  return std::asin(steiner::detail::sin_angle_n(a.data(), bb.data(), N));
}

}  // namespace fixtures
