// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "hdld/grid.hpp"

namespace hdld {

// ----------------------------------------------------------------------------
// Particles-per-site scaling l = l(N).

struct ScalingLaw {
  enum class Kind { power, exponential, fixed };
  Kind kind = Kind::power;
  double alpha = 2.0;      // power:       l = round(N^alpha)
  double c = 0.5;          // exponential: l = round(exp(c N))
  std::uint64_t ell = 1;   // fixed:       l given explicitly

  static ScalingLaw power(double alpha) { return {Kind::power, alpha, 0.0, 0}; }
  static ScalingLaw exponential(double c) { return {Kind::exponential, 0.0, c, 0}; }
  static ScalingLaw fixed(std::uint64_t ell) { return {Kind::fixed, 0.0, 0.0, ell}; }
};

struct ScalingResolution {
  std::uint64_t ell;  // rounded, half-up
  double raw;         // value before rounding
};

// Guards l * u_max * N against 64-bit overflow before any counts are allocated.
ScalingResolution resolve_scaling_detail(const ScalingLaw& law, const TorusGridSpec& grid,
                                         double u_max);
std::uint64_t resolve_scaling(const ScalingLaw& law, const TorusGridSpec& grid, double u_max = 16.0);

// ----------------------------------------------------------------------------
// Reaction catalog. All members are nonnegative Lipschitz functions on [0,inf);
// evaluation clamps negative arguments to zero so slightly-negative ODE states
// cannot produce negative rates.

class ReactionFn {
 public:
  enum class Family { zero, constant, linear, affine, logistic };

  static ReactionFn zero();
  static ReactionFn constant(double beta);
  static ReactionFn linear(double beta1);
  static ReactionFn affine(double beta0, double beta1);
  // b(u) = r u max(0, 1 - u/K); the truncation keeps it Lipschitz on [0,inf).
  static ReactionFn logistic(double r, double K);

  double operator()(double u) const;
  double derivative(double u) const;  // one-sided at kinks
  double lipschitz() const;           // declared Lipschitz constant
  double sup_on(double u_max) const;  // declared sup over [0, u_max]

  Family family() const { return family_; }
  double p0() const { return p0_; }
  double p1() const { return p1_; }
  std::string describe() const;

 private:
  ReactionFn(Family f, double p0, double p1) : family_(f), p0_(p0), p1_(p1) {}
  Family family_ = Family::zero;
  double p0_ = 0.0;  // beta / beta0 / r
  double p1_ = 0.0;  // beta1 / K
};

struct ReactionSpec {
  ReactionFn birth = ReactionFn::zero();
  ReactionFn death = ReactionFn::zero();
  double u_max = 8.0;  // densities the validator samples over
};

// Hard errors: death(0) != 0, negative parameters. Also verifies the declared
// Lipschitz constants by derivative sampling on [0, u_max].
void validate_reaction(const ReactionSpec& spec);

// ----------------------------------------------------------------------------
// Smooth perturbation catalog: H(t,x) = A g(t) sin(2 pi m x), plus the zero
// element. Closed forms for all derivatives and exact sup norms.

class PerturbationSpec {
 public:
  enum class Temporal { constant, linear, cosine };

  static PerturbationSpec zero();
  static PerturbationSpec sine(double amplitude, int spatial_mode,
                               Temporal temporal = Temporal::constant, double param = 0.0);

  bool is_identically_zero() const { return amplitude_ == 0.0; }
  // True only when H actually varies in time; amplitude 0 never does.
  bool time_dependent() const {
    return amplitude_ != 0.0 && temporal_ != Temporal::constant;
  }

  double h(double t, double x) const;
  double dt(double t, double x) const;
  double dx(double t, double x) const;
  double dxx(double t, double x) const;

  double g(double t) const;
  // Range of g over [t0, t1]; used to build dominating rates for thinning.
  std::pair<double, double> g_range(double t0, double t1) const;

  // Exact sup norms over [0, t_final] x torus.
  double sup_h(double t_final) const;
  double sup_dx(double t_final) const;
  double sup_dxx(double t_final) const;

  double amplitude() const { return amplitude_; }
  int spatial_mode() const { return mode_; }
  Temporal temporal() const { return temporal_; }
  double temporal_param() const { return param_; }
  std::string describe() const;

 private:
  double amplitude_ = 0.0;
  int mode_ = 1;
  Temporal temporal_ = Temporal::constant;
  double param_ = 0.0;
  double sup_g(double t_final) const;
};

struct StrengthReport {
  double sup_dx = 0.0;           // measured ||dx H||_inf over the run window
  double bound = 0.0;            // admissibility bound for the scaling law
  bool admissible = true;
  bool warning_band = false;     // within 1% of the bound
  double conservative_bound = 0.0;  // stricter variant carried alongside
  bool conservative_admissible = true;
  std::string note;
};

// Power law: admissible iff ||dx H||_inf <= pi sqrt(alpha); exponential growth
// of l admits any smooth H; a fixed l carries no asymptotic statement. The
// report also carries the stricter bound pi sqrt(alpha)/2 that the tail
// estimates need, flagged separately.
StrengthReport validate_perturbation_strength(const PerturbationSpec& pert, const ScalingLaw& law,
                                              double t_final);

// ----------------------------------------------------------------------------
// Initial density profiles: constant, or the smooth family a + b sin^2(2 pi x).

class InitialProfile {
 public:
  enum class Kind { constant, smooth };

  static InitialProfile constant(double gamma);
  static InitialProfile smooth(double a, double b);

  double operator()(double x) const;
  double sup() const;
  double inf() const;
  Kind kind() const { return kind_; }
  double p0() const { return p0_; }
  double p1() const { return p1_; }

  GridFunction sample(const TorusGridSpec& grid) const;

 private:
  Kind kind_ = Kind::constant;
  double p0_ = 1.0;
  double p1_ = 0.0;
};

}  // namespace hdld
