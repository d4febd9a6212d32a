// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <utility>

namespace hdld {

// 4-point Gauss-Legendre rule on [-1, 1]; exact through degree 7.
struct GaussLegendre4 {
  static constexpr std::array<double, 4> nodes = {
      -0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 4> weights = {
      0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

  // Integrates f over [a, b] with one panel.
  template <typename F>
  static double panel(F&& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += weights[i] * f(mid + half * nodes[i]);
    return acc * half;
  }

  // Composite rule with `panels` equal panels over [a, b].
  template <typename F>
  static double composite(F&& f, double a, double b, int panels) {
    double acc = 0.0;
    double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) acc += panel(f, a + p * w, a + (p + 1) * w);
    return acc;
  }
};

}  // namespace hdld
