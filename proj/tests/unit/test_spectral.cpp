// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hdld/error.hpp"
#include "hdld/rng.hpp"
#include "hdld/spectral.hpp"

using namespace hdld;

namespace {
constexpr double kPi = 3.14159265358979323846;

GridFunction random_vector(int n, std::uint64_t stream) {
  Rng rng(123, stream);
  GridFunction g(n);
  for (int k = 0; k < n; ++k) g[k] = 2.0 * rng.uniform() - 1.0;
  return g;
}
}  // namespace

TEST_CASE("N=4 basis carries eigenvalues 0, 32, 32, 64") {
  SpectralBasis basis(TorusGridSpec{4});
  REQUIRE(basis.size() == 4);
  std::vector<double> betas;
  for (std::size_t i = 0; i < basis.size(); ++i) betas.push_back(basis.mode(i).beta);
  std::sort(betas.begin(), betas.end());
  // 2 N^2 (1 - cos(pi m / N)) at N = 4: m=0 -> 0, m=2 twice -> 32, m=4 -> 64.
  CHECK(betas[0] == doctest::Approx(0.0));
  CHECK(betas[1] == doctest::Approx(32.0));
  CHECK(betas[2] == doctest::Approx(32.0));
  CHECK(betas[3] == doctest::Approx(64.0));
}

TEST_CASE("basis is orthonormal and diagonalizes the laplacian at odd and even N") {
  for (int n : {2, 3, 5, 8, 9, 16, 17}) {
    SpectralBasis basis(TorusGridSpec{n});
    REQUIRE(int(basis.size()) == n);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i; j < basis.size(); ++j) {
        double expected = (i == j) ? 1.0 : 0.0;
        CHECK(inner_product(basis.mode(i).vec, basis.mode(j).vec) ==
              doctest::Approx(expected).epsilon(1e-12));
      }
      GridFunction lap = discrete_laplacian(basis.mode(i).vec);
      for (int k = 0; k < n; ++k)
        CHECK(lap[k] == doctest::Approx(-basis.mode(i).beta * basis.mode(i).vec[k])
                            .epsilon(1e-9)
                            .scale(double(n) * double(n)));
    }
  }
}

TEST_CASE("fft fast path agrees with the direct projections") {
  for (int n : {8, 64}) {
    SpectralBasis basis(TorusGridSpec{n});
    GridFunction g = random_vector(n, std::uint64_t(n));
    std::vector<double> fast = basis.analyze(g);
    std::vector<double> direct = basis.analyze_direct(g);
    REQUIRE(fast.size() == direct.size());
    for (std::size_t i = 0; i < fast.size(); ++i)
      CHECK(fast[i] == doctest::Approx(direct[i]).epsilon(1e-12));

    GridFunction round = basis.synthesize(fast);
    GridFunction round_direct = basis.synthesize_direct(direct);
    for (int k = 0; k < n; ++k) {
      CHECK(round[k] == doctest::Approx(g[k]).epsilon(1e-12));
      CHECK(round_direct[k] == doctest::Approx(g[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("heat flow of a smooth bump matches the continuum closed form") {
  // a + b sin^2(2 pi x) = (a + b/2) - (b/2) cos(4 pi x); the cos(4 pi x)
  // component decays at rate 16 pi^2 in the continuum. At N = 2048 the
  // discrete eigenvalue differs by O(N^-2), well inside the tolerance.
  const int n = 2048;
  const double a = 0.5, b = 0.25;
  TorusGridSpec grid{n};
  SpectralBasis basis(grid);
  GridFunction init = GridFunction::sample(grid, [&](double x) {
    double s = std::sin(2 * kPi * x);
    return a + b * s * s;
  });
  for (double t : {0.005, 0.02, 0.1}) {
    GridFunction evolved = semigroup_apply(basis, t, init);
    double damp = std::exp(-16.0 * kPi * kPi * t);
    for (int k = 0; k < n; k += 37) {
      double x = grid.site(k);
      double expected = a + b / 2 - (b / 2) * damp * std::cos(4 * kPi * x);
      CHECK(evolved[k] == doctest::Approx(expected).epsilon(5e-6));
    }
  }
}

TEST_CASE("semigroup matches the dense matrix exponential at N=6") {
  TorusGridSpec grid{6};
  SpectralBasis basis(grid);
  GridFunction g = random_vector(6, 99);
  auto dense = semigroup_matrix_oracle(grid, 0.3);
  GridFunction fast = semigroup_apply(basis, 0.3, g);
  for (int i = 0; i < 6; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 6; ++j) acc += dense[std::size_t(i)][std::size_t(j)] * g[j];
    CHECK(fast[i] == doctest::Approx(acc).epsilon(1e-10));
  }
  CHECK_THROWS_AS(semigroup_apply(basis, -0.1, g), Error);
}

TEST_CASE("duhamel with constant forcing reproduces the exact solution") {
  const int n = 16;
  TorusGridSpec grid{n};
  SpectralBasis basis(grid);
  GridFunction x0 = random_vector(n, 5);
  const double c = 0.8, t = 0.2;

  // Spatially constant forcing is invariant under the semigroup, so the
  // convolution integrates to t * c exactly.
  GridFunction forced = duhamel_deterministic(
      basis, x0, [&](double) { return GridFunction(n, c); }, t);
  GridFunction free_part = semigroup_apply(basis, t, x0);
  for (int k = 0; k < n; ++k)
    CHECK(forced[k] == doctest::Approx(free_part[k] + c * t).epsilon(1e-10));

  // Forcing along one eigenvector integrates to (1 - e^{-beta t}) / beta.
  const SpectralMode& mode = basis.mode(2);
  REQUIRE(mode.beta > 0.0);
  GridFunction eig_forced = duhamel_deterministic(
      basis, GridFunction(n), [&](double) { return mode.vec; }, t);
  double factor = (1.0 - std::exp(-mode.beta * t)) / mode.beta;
  for (int k = 0; k < n; ++k)
    CHECK(eig_forced[k] == doctest::Approx(factor * mode.vec[k]).epsilon(1e-8));
}

TEST_CASE("stochastic convolution of a single jump is a propagated jump") {
  const int n = 8;
  TorusGridSpec grid{n};
  SpectralBasis basis(grid);
  const double u = 0.05, t = 0.12;

  GridFunction v = random_vector(n, 11);
  std::vector<double> times{0.0, u};
  std::vector<GridFunction> values{GridFunction(n), v};

  GridFunction y = duhamel_stochastic_convolution(basis, times, values, t);
  GridFunction expected = semigroup_apply(basis, t - u, v);
  for (int k = 0; k < n; ++k)
    CHECK(y[k] == doctest::Approx(expected[k]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("coefficient interpolant differentiates analytically") {
  const int n = 32;
  TorusGridSpec grid{n};
  SpectralBasis basis(grid);
  GridFunction g = GridFunction::sample(grid, [](double x) { return std::sin(2 * kPi * x); });
  std::vector<double> coef = basis.analyze(g);
  const double x = 0.1375;
  CHECK(basis.evaluate(coef, x, 0) == doctest::Approx(std::sin(2 * kPi * x)).epsilon(1e-9));
  CHECK(basis.evaluate(coef, x, 1) ==
        doctest::Approx(2 * kPi * std::cos(2 * kPi * x)).epsilon(1e-9));
  CHECK(basis.evaluate(coef, x, 2) ==
        doctest::Approx(-4 * kPi * kPi * std::sin(2 * kPi * x)).epsilon(1e-9));
}
