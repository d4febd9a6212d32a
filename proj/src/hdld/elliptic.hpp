// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hdld/catalog.hpp"
#include "hdld/grid.hpp"
#include "hdld/pde.hpp"

namespace hdld {

// Instantaneous data of a density profile at M uniform torus points, the
// input of the tilt inversion: the profile, its first two space derivatives,
// and its time derivative.
struct EllipticSlice {
  std::vector<double> psi, dx, dxx, dt;

  int points() const { return int(psi.size()); }
  void validate() const;
};

EllipticSlice sample_slice(const ReferenceSolution::Slice& slice, int points);

struct EllipticOptions {
  int max_iters = 50;
  double tolerance = 1e-10;  // sup norm of the residual
  int max_halvings = 8;
};

struct EllipticResult {
  GridFunction h;
  double residual = 0.0;
  int iterations = 0;
};

// Solve for the static tilt H under which the slice is an exact stationary
// balance of drift, diffusion, and tilted reaction:
//
//   2 psi H'' + 2 psi' H' = psi'' - dt psi + e^H b(psi) - e^{-H} d(psi),
//
// discretized with periodic central differences and solved by damped Newton
// on the cyclic tridiagonal linearization. The profile must be strictly
// positive, and the reaction must not vanish identically on it (it pins the
// additive constant of H).
EllipticResult invert_tilt(const EllipticSlice& slice, const ReactionSpec& reaction,
                           EllipticOptions opts = {});

// With psi identically gamma and no time dependence, the balance reduces to
// e^H b(gamma) = e^{-H} d(gamma).
double constant_tilt_closed_form(double gamma, const ReactionSpec& reaction);

}  // namespace hdld
