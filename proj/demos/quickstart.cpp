// Minimal library walkthrough: build a net, run the decision, print the
// implicit equation and the sampling oracle's agreement with it.

#include <cstdio>

#include "steiner/steiner.hpp"

int main() {
  using namespace steiner;

  // An octant of the unit sphere.
  const ControlNet net({Vec3{0, 0, 1}, Vec3{1, 0, 1}, Vec3{1, 0, 0},
                        Vec3{0, 1, 1}, Vec3{1, 1, 1}, Vec3{0, 1, 0}},
                       {1, 1, 2, 1, 1, 2});

  const QuadricReport report = implicitize(net);
  if (!report.is_quadric()) {
    std::puts("not a quadric patch");
    return 2;
  }

  std::printf("class: %s\n", to_string(*report.quadric_class));
  std::printf("coefficients (x2 y2 z2 xy xz yz x y z 1):\n ");
  for (double c : report.coefficients->c) std::printf(" %+.3f", c);
  std::printf("\n");

  const FitResult fit = fit_by_sampling(net, 25);
  std::printf("closed form vs. sampled fit: %.3g rad\n",
              coefficient_angle(*report.coefficients, fit.coefficients));
  return 0;
}
