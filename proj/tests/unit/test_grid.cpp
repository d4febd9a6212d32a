// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "hdld/grid.hpp"

using namespace hdld;

TEST_CASE("torus wrap covers negative and overflowing indices") {
  TorusGridSpec grid{4};
  CHECK(grid.wrap(-1) == 3);
  CHECK(grid.wrap(4) == 0);
  CHECK(grid.wrap(9) == 1);
  CHECK(grid.site(2) == doctest::Approx(0.5));
}

TEST_CASE("laplacian of a lattice delta at N=4") {
  GridFunction f(4);
  f[0] = 1.0;
  GridFunction lap = discrete_laplacian(f);
  // N^2 (f(k+1) + f(k-1) - 2 f(k)) with N = 4.
  CHECK(lap[0] == doctest::Approx(-32.0));
  CHECK(lap[1] == doctest::Approx(16.0));
  CHECK(lap[2] == doctest::Approx(0.0));
  CHECK(lap[3] == doctest::Approx(16.0));
}

TEST_CASE("laplacian is self-adjoint and annihilates constants") {
  TorusGridSpec grid{7};
  GridFunction f = GridFunction::sample(grid, [](double x) { return std::sin(2 * M_PI * x) + 0.3; });
  GridFunction g = GridFunction::sample(grid, [](double x) { return std::cos(4 * M_PI * x); });
  CHECK(inner_product(discrete_laplacian(f), g) ==
        doctest::Approx(inner_product(f, discrete_laplacian(g))).epsilon(1e-12));

  GridFunction c(5, 2.5);
  CHECK(discrete_laplacian(c).sup_norm() == doctest::Approx(0.0));

  double mass = 0.0;
  for (int k = 0; k < 7; ++k) mass += discrete_laplacian(f)[k];
  CHECK(std::fabs(mass) < 1e-9);
}

TEST_CASE("gradients agree with exact differences") {
  TorusGridSpec grid{8};
  GridFunction f = GridFunction::sample(grid, [](double x) { return x * (1 - x); });
  DiscreteGradients g = discrete_gradients(f);
  for (int k = 0; k < 8; ++k) {
    CHECK(g.forward[k] == doctest::Approx(8.0 * (f.at(k + 1) - f[k])));
    CHECK(g.backward[k] == doctest::Approx(8.0 * (f.at(k - 1) - f[k])));
    CHECK(g.centered[k] == doctest::Approx(4.0 * (f.at(k + 1) - f.at(k - 1))));
  }
}

TEST_CASE("inner product satisfies the Cauchy-Schwarz inequality") {
  TorusGridSpec grid{16};
  GridFunction f = GridFunction::sample(grid, [](double x) { return std::exp(std::sin(2 * M_PI * x)); });
  GridFunction g = GridFunction::sample(grid, [](double x) { return x - 0.5; });
  CHECK(std::fabs(inner_product(f, g)) <= f.l2() * g.l2() + 1e-14);
}

TEST_CASE("periodic interpolation hits nodes and wraps") {
  TorusGridSpec grid{4};
  GridFunction f{std::vector<double>{1.0, 2.0, 4.0, 0.0}};
  CHECK(interpolate_periodic(f, 0.25) == doctest::Approx(2.0));
  CHECK(interpolate_periodic(f, 0.375) == doctest::Approx(3.0));
  // Between the last site and the wrapped first one.
  CHECK(interpolate_periodic(f, 0.875) == doctest::Approx(0.5));
  CHECK(interpolate_periodic(f, 1.125) == doctest::Approx(1.5));
  CHECK(interpolate_periodic(f, -0.625) == doctest::Approx(3.0));
}
