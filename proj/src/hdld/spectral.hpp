// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "hdld/grid.hpp"

namespace hdld {

// One eigenvector of the discrete Laplacian on the N-torus.
struct SpectralMode {
  int m = 0;          // even trig index; phi_m(k) ~ cos(pi m k / N)
  bool is_sine = false;
  double beta = 0.0;  // eigenvalue: Delta_N v = -beta v, beta = 2N^2(1 - cos(pi m / N))
  GridFunction vec;   // orthonormal under the (1/N)-weighted inner product
};

// Full eigenbasis: the constant mode, cos/sin pairs for even m, and for even N
// the alternating mode cos(pi k). Exactly N vectors.
class SpectralBasis {
 public:
  explicit SpectralBasis(TorusGridSpec grid);

  const TorusGridSpec& grid() const { return grid_; }
  int n_sites() const { return grid_.n_sites; }
  std::size_t size() const { return modes_.size(); }
  const SpectralMode& mode(std::size_t i) const { return modes_[i]; }

  // Forward/inverse transforms. Power-of-two sizes take a radix-2 FFT fast
  // path; the direct O(N^2) projections below are the reference semantics and
  // cover every size.
  std::vector<double> analyze(const GridFunction& g) const;
  GridFunction synthesize(const std::vector<double>& coef) const;
  std::vector<double> analyze_direct(const GridFunction& g) const;
  GridFunction synthesize_direct(const std::vector<double>& coef) const;

  // Trigonometric interpolant built from coefficients, evaluated anywhere on
  // the torus; deriv in {0,1,2} differentiates the interpolant analytically.
  double evaluate(const std::vector<double>& coef, double x, int deriv = 0) const;

 private:
  TorusGridSpec grid_;
  std::vector<SpectralMode> modes_;
};

// Heat semigroup e^{t Delta_N} g via per-mode damping. t < 0 is an error.
GridFunction semigroup_apply(const SpectralBasis& basis, double t, const GridFunction& g);

// Dense e^{t Delta_N} by scaling-and-squaring; test oracle only, N <= 8.
std::vector<std::vector<double>> semigroup_matrix_oracle(const TorusGridSpec& grid, double t);

// T(t) x0 + int_0^t T(t-s) F(s) ds, composite Gauss-Legendre in s.
GridFunction duhamel_deterministic(const SpectralBasis& basis, const GridFunction& x0,
                                   const std::function<GridFunction(double)>& forcing, double t,
                                   int panels = 8);

// Y(t) = int_0^t Delta_N T(t-s) Z(s) ds + Z(t) - Z(0) for a piecewise-constant
// path Z given by values[i] on [times[i], times[i+1]). The integral is exact:
// on each constant piece the per-mode factor is e^{-beta(t-s1)} - e^{-beta(t-s2)}.
GridFunction duhamel_stochastic_convolution(const SpectralBasis& basis,
                                            const std::vector<double>& z_times,
                                            const std::vector<GridFunction>& z_values, double t);

}  // namespace hdld
