// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hdld/catalog.hpp"

namespace hdld {

// Gamma(y) = 1 - e^y + y e^y. Nonnegative, vanishing only at y = 0.
double gamma_fn(double y);

// GammaBar(x, y) = 1 - e^x + x e^y. For fixed y, maximized over x at x = y,
// where it equals Gamma(y).
double gamma_bar(double x, double y);

// Golden-section argmax of x -> gamma_bar(x, y) on [lo, hi] (test hook).
double gamma_bar_argmax(double y, double lo, double hi);

// Large-deviation rate of a Poisson(lambda) sample at x:
//   x log(x/lambda) - x + lambda,  with the x = 0 limit equal to lambda.
double poisson_ld_rate(double x, double lambda);

// Space-time tilt on [0, t_final] x torus, presented through its value and
// the derivatives the action integrals need.
struct TiltField {
  std::function<double(double, double)> h;    // (t, x)
  std::function<double(double, double)> dt;   // time derivative
  std::function<double(double, double)> dx;   // space derivative
  std::function<double(double, double)> dxx;  // second space derivative
};

TiltField tilt_from_perturbation(const PerturbationSpec& pert);
TiltField zero_tilt();
// a * f + b * g, combined term by term.
TiltField tilt_combination(double a, const TiltField& f, double b, const TiltField& g);

struct QuadratureSpec {
  int x_points = 256;  // uniform trapezoid points on the torus
  int t_panels = 32;   // Gauss-Legendre panels in time, 4 nodes each
};

// Tilted action of a density path u:
//   J_H(u) = int [H u](T) - [H u](0) dx
//          + int int -u (dt H + dxx H + (dx H)^2)
//                    + b(u)(1 - e^H) + d(u)(1 - e^{-H}) dx dt.
double j_functional(const TiltField& h, const std::function<double(double, double)>& u,
                    const ReactionSpec& reaction, double t_final, QuadratureSpec quad = {});

// Closed form of the rate of the tilted-optimal path psi^H:
//   I = int int (dx H)^2 psi + b(psi) Gamma(H) + d(psi) Gamma(-H) dx dt.
double rate_closed_form(const TiltField& h, const std::function<double(double, double)>& psi,
                        const ReactionSpec& reaction, double t_final, QuadratureSpec quad = {});

// J_G(psi^H) for a family of probe tilts G built around h (scalings, small
// directional offsets, the zero tilt, and any extra catalog entries). The
// variational form guarantees each value is at most the rate of psi^H.
struct ProbeResult {
  std::string label;
  double value = 0.0;
};

std::vector<ProbeResult> rate_variational_probes(
    const TiltField& h, const std::function<double(double, double)>& psi,
    const ReactionSpec& reaction, double t_final,
    const std::vector<std::pair<std::string, TiltField>>& extra = {}, QuadratureSpec quad = {});

}  // namespace hdld
