// SPDX-License-Identifier: Apache-2.0
#include "hdld/rate.hpp"

#include <cmath>

#include "hdld/error.hpp"
#include "hdld/quadrature.hpp"

namespace hdld {

double gamma_fn(double y) { return 1.0 - std::exp(y) + y * std::exp(y); }

double gamma_bar(double x, double y) { return 1.0 - std::exp(x) + x * std::exp(y); }

double gamma_bar_argmax(double y, double lo, double hi) {
  require(hi > lo, Errc::invalid_argument, "gamma_bar_argmax: empty interval");
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = gamma_bar(c, y), fd = gamma_bar(d, y);
  for (int i = 0; i < 200 && b - a > 1e-12; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = gamma_bar(c, y);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = gamma_bar(d, y);
    }
  }
  return 0.5 * (a + b);
}

double poisson_ld_rate(double x, double lambda) {
  require(lambda > 0.0, Errc::domain, "poisson_ld_rate: lambda must be positive");
  require(x >= 0.0, Errc::domain, "poisson_ld_rate: x must be nonnegative");
  if (x == 0.0) return lambda;
  return x * std::log(x / lambda) - x + lambda;
}

TiltField tilt_from_perturbation(const PerturbationSpec& pert) {
  TiltField f;
  f.h = [pert](double t, double x) { return pert.h(t, x); };
  f.dt = [pert](double t, double x) { return pert.dt(t, x); };
  f.dx = [pert](double t, double x) { return pert.dx(t, x); };
  f.dxx = [pert](double t, double x) { return pert.dxx(t, x); };
  return f;
}

TiltField zero_tilt() {
  auto zero = [](double, double) { return 0.0; };
  return TiltField{zero, zero, zero, zero};
}

TiltField tilt_combination(double a, const TiltField& f, double b, const TiltField& g) {
  TiltField out;
  out.h = [a, b, f, g](double t, double x) { return a * f.h(t, x) + b * g.h(t, x); };
  out.dt = [a, b, f, g](double t, double x) { return a * f.dt(t, x) + b * g.dt(t, x); };
  out.dx = [a, b, f, g](double t, double x) { return a * f.dx(t, x) + b * g.dx(t, x); };
  out.dxx = [a, b, f, g](double t, double x) { return a * f.dxx(t, x) + b * g.dxx(t, x); };
  return out;
}

namespace {

void check_quadrature(const QuadratureSpec& quad) {
  require(quad.x_points >= 2 && quad.x_points <= (1 << 20), Errc::quadrature,
          "rate: x_points out of range");
  require(quad.t_panels >= 1 && quad.t_panels <= (1 << 20), Errc::quadrature,
          "rate: t_panels out of range");
}

// int_0^1 f(x) dx by the periodic trapezoid rule (uniform points, no
// duplicated endpoint).
template <typename F>
double torus_integral(F&& f, int points) {
  double acc = 0.0;
  for (int i = 0; i < points; ++i) acc += f(double(i) / points);
  return acc / points;
}

}  // namespace

double j_functional(const TiltField& h, const std::function<double(double, double)>& u,
                    const ReactionSpec& reaction, double t_final, QuadratureSpec quad) {
  check_quadrature(quad);
  require(t_final > 0.0 && std::isfinite(t_final), Errc::invalid_argument,
          "j_functional: t_final must be positive");

  double boundary = torus_integral(
      [&](double x) { return h.h(t_final, x) * u(t_final, x) - h.h(0.0, x) * u(0.0, x); },
      quad.x_points);

  auto space_slice = [&](double t) {
    return torus_integral(
        [&](double x) {
          double ut = u(t, x);
          double hv = h.h(t, x), dxv = h.dx(t, x);
          return -ut * (h.dt(t, x) + h.dxx(t, x) + dxv * dxv) +
                 reaction.birth(ut) * (1.0 - std::exp(hv)) +
                 reaction.death(ut) * (1.0 - std::exp(-hv));
        },
        quad.x_points);
  };

  GaussLegendre4 gl;
  double bulk = gl.composite(space_slice, 0.0, t_final, quad.t_panels);
  return boundary + bulk;
}

double rate_closed_form(const TiltField& h, const std::function<double(double, double)>& psi,
                        const ReactionSpec& reaction, double t_final, QuadratureSpec quad) {
  check_quadrature(quad);
  require(t_final > 0.0 && std::isfinite(t_final), Errc::invalid_argument,
          "rate_closed_form: t_final must be positive");

  auto space_slice = [&](double t) {
    return torus_integral(
        [&](double x) {
          double p = psi(t, x);
          double dxv = h.dx(t, x), hv = h.h(t, x);
          return dxv * dxv * p + reaction.birth(p) * gamma_fn(hv) +
                 reaction.death(p) * gamma_fn(-hv);
        },
        quad.x_points);
  };

  GaussLegendre4 gl;
  return gl.composite(space_slice, 0.0, t_final, quad.t_panels);
}

std::vector<ProbeResult> rate_variational_probes(
    const TiltField& h, const std::function<double(double, double)>& psi,
    const ReactionSpec& reaction, double t_final,
    const std::vector<std::pair<std::string, TiltField>>& extra, QuadratureSpec quad) {
  std::vector<ProbeResult> out;
  auto eval = [&](const std::string& label, const TiltField& g) {
    out.push_back({label, j_functional(g, psi, reaction, t_final, quad)});
  };

  eval("zero", zero_tilt());
  eval("scaled_0.9", tilt_combination(0.9, h, 0.0, h));
  eval("scaled_1.1", tilt_combination(1.1, h, 0.0, h));

  // Small offsets along a fixed low-frequency direction.
  PerturbationSpec bump = PerturbationSpec::sine(1.0, 1, PerturbationSpec::Temporal::constant, 0.0);
  TiltField dir = tilt_from_perturbation(bump);
  eval("offset_plus", tilt_combination(1.0, h, 0.05, dir));
  eval("offset_minus", tilt_combination(1.0, h, -0.05, dir));

  for (const auto& [label, g] : extra) eval(label, g);
  return out;
}

}  // namespace hdld
