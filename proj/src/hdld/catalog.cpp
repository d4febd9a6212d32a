// SPDX-License-Identifier: Apache-2.0
#include "hdld/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdld {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
// Largest count product we allow; leaves headroom below 2^63.
constexpr double kCountCeiling = 9.0e18;
}  // namespace

// ---------------------------------------------------------------- scaling ---

ScalingResolution resolve_scaling_detail(const ScalingLaw& law, const TorusGridSpec& grid,
                                         double u_max) {
  grid.validate();
  require(u_max > 0.0 && std::isfinite(u_max), Errc::config, "scaling: u_max must be positive");
  double raw = 0.0;
  switch (law.kind) {
    case ScalingLaw::Kind::power:
      require(law.alpha > 0.0, Errc::config, "scaling: power law needs alpha > 0");
      raw = std::pow(double(grid.n_sites), law.alpha);
      break;
    case ScalingLaw::Kind::exponential: {
      require(law.c > 0.0, Errc::config, "scaling: exponential law needs c > 0");
      double expo = law.c * grid.n_sites;
      require(expo < 700.0, Errc::overflow, "scaling: exp(cN) overflows");
      raw = std::exp(expo);
      break;
    }
    case ScalingLaw::Kind::fixed:
      require(law.ell >= 1, Errc::config, "scaling: explicit l must be >= 1");
      raw = double(law.ell);
      break;
  }
  double rounded = std::floor(raw + 0.5);  // round half-up
  require(rounded >= 1.0, Errc::config, "scaling: resolved l < 1");
  require(rounded * u_max * grid.n_sites < kCountCeiling, Errc::overflow,
          "scaling: l * u_max * N would overflow 64-bit counts");
  return {static_cast<std::uint64_t>(rounded), raw};
}

std::uint64_t resolve_scaling(const ScalingLaw& law, const TorusGridSpec& grid, double u_max) {
  return resolve_scaling_detail(law, grid, u_max).ell;
}

// --------------------------------------------------------------- reaction ---

ReactionFn ReactionFn::zero() { return ReactionFn(Family::zero, 0.0, 0.0); }

ReactionFn ReactionFn::constant(double beta) {
  require(beta >= 0.0 && std::isfinite(beta), Errc::config, "reaction: constant needs beta >= 0");
  return ReactionFn(Family::constant, beta, 0.0);
}

ReactionFn ReactionFn::linear(double beta1) {
  require(beta1 >= 0.0 && std::isfinite(beta1), Errc::config, "reaction: linear needs beta1 >= 0");
  return ReactionFn(Family::linear, 0.0, beta1);
}

ReactionFn ReactionFn::affine(double beta0, double beta1) {
  require(beta0 >= 0.0 && beta1 >= 0.0 && std::isfinite(beta0) && std::isfinite(beta1),
          Errc::config, "reaction: affine needs beta0, beta1 >= 0");
  return ReactionFn(Family::affine, beta0, beta1);
}

ReactionFn ReactionFn::logistic(double r, double K) {
  require(r >= 0.0 && K > 0.0 && std::isfinite(r) && std::isfinite(K), Errc::config,
          "reaction: logistic needs r >= 0 and K > 0");
  return ReactionFn(Family::logistic, r, K);
}

double ReactionFn::operator()(double u) const {
  double v = std::max(u, 0.0);
  switch (family_) {
    case Family::zero: return 0.0;
    case Family::constant: return p0_;
    case Family::linear: return p1_ * v;
    case Family::affine: return p0_ + p1_ * v;
    case Family::logistic: return p0_ * v * std::max(0.0, 1.0 - v / p1_);
  }
  return 0.0;
}

double ReactionFn::derivative(double u) const {
  double v = std::max(u, 0.0);
  switch (family_) {
    case Family::zero:
    case Family::constant: return 0.0;
    case Family::linear: return u < 0.0 ? 0.0 : p1_;
    case Family::affine: return u < 0.0 ? 0.0 : p1_;
    case Family::logistic:
      if (u < 0.0 || v > p1_) return 0.0;
      return p0_ * (1.0 - 2.0 * v / p1_);
  }
  return 0.0;
}

double ReactionFn::lipschitz() const {
  switch (family_) {
    case Family::zero:
    case Family::constant: return 0.0;
    case Family::linear:
    case Family::affine: return p1_;
    case Family::logistic: return p0_;  // |r(1 - 2u/K)| <= r on [0,K], 0 beyond
  }
  return 0.0;
}

double ReactionFn::sup_on(double u_max) const {
  double v = std::max(u_max, 0.0);
  switch (family_) {
    case Family::zero: return 0.0;
    case Family::constant: return p0_;
    case Family::linear: return p1_ * v;
    case Family::affine: return p0_ + p1_ * v;
    case Family::logistic: {
      double peak = p0_ * p1_ / 4.0;  // at u = K/2
      if (v >= p1_ / 2.0) return peak;
      return p0_ * v * (1.0 - v / p1_);
    }
  }
  return 0.0;
}

std::string ReactionFn::describe() const {
  switch (family_) {
    case Family::zero: return "zero";
    case Family::constant: return "constant(" + std::to_string(p0_) + ")";
    case Family::linear: return "linear(" + std::to_string(p1_) + ")";
    case Family::affine:
      return "affine(" + std::to_string(p0_) + "," + std::to_string(p1_) + ")";
    case Family::logistic:
      return "logistic(" + std::to_string(p0_) + "," + std::to_string(p1_) + ")";
  }
  return "?";
}

void validate_reaction(const ReactionSpec& spec) {
  require(spec.u_max > 0.0, Errc::config, "reaction: u_max must be positive");
  require(spec.death(0.0) == 0.0, Errc::config,
          "reaction: death rate must vanish at zero density (d(0) = 0)");
  // Declared Lipschitz constants must dominate sampled difference quotients.
  const int kSamples = 4096;
  for (const ReactionFn* f : {&spec.birth, &spec.death}) {
    double lip = f->lipschitz();
    double h = spec.u_max / kSamples;
    for (int i = 0; i < kSamples; ++i) {
      double u = i * h;
      double q = std::fabs(((*f)(u + h) - (*f)(u)) / h);
      require(q <= lip + 1e-9 + 1e-9 * lip, Errc::config,
              "reaction: sampled slope exceeds declared Lipschitz constant for " + f->describe());
    }
  }
}

// ----------------------------------------------------------- perturbation ---

PerturbationSpec PerturbationSpec::zero() { return PerturbationSpec{}; }

PerturbationSpec PerturbationSpec::sine(double amplitude, int spatial_mode, Temporal temporal,
                                        double param) {
  require(std::isfinite(amplitude), Errc::config, "perturbation: amplitude must be finite");
  require(spatial_mode >= 1, Errc::config, "perturbation: spatial mode must be >= 1");
  PerturbationSpec p;
  p.amplitude_ = amplitude;
  p.mode_ = spatial_mode;
  p.temporal_ = temporal;
  p.param_ = param;
  if (temporal == Temporal::cosine)
    require(param >= 0.0, Errc::config, "perturbation: cosine frequency must be >= 0");
  return p;
}

double PerturbationSpec::g(double t) const {
  switch (temporal_) {
    case Temporal::constant: return 1.0;
    case Temporal::linear: return 1.0 + param_ * t;
    case Temporal::cosine: return std::cos(param_ * t);
  }
  return 1.0;
}

double PerturbationSpec::h(double t, double x) const {
  return amplitude_ * g(t) * std::sin(kTwoPi * mode_ * x);
}

double PerturbationSpec::dt(double t, double x) const {
  double gd = 0.0;
  switch (temporal_) {
    case Temporal::constant: gd = 0.0; break;
    case Temporal::linear: gd = param_; break;
    case Temporal::cosine: gd = -param_ * std::sin(param_ * t); break;
  }
  return amplitude_ * gd * std::sin(kTwoPi * mode_ * x);
}

double PerturbationSpec::dx(double t, double x) const {
  return amplitude_ * g(t) * kTwoPi * mode_ * std::cos(kTwoPi * mode_ * x);
}

double PerturbationSpec::dxx(double t, double x) const {
  double w = kTwoPi * mode_;
  return -amplitude_ * g(t) * w * w * std::sin(kTwoPi * mode_ * x);
}

std::pair<double, double> PerturbationSpec::g_range(double t0, double t1) const {
  switch (temporal_) {
    case Temporal::constant: return {1.0, 1.0};
    case Temporal::linear: {
      double a = 1.0 + param_ * t0, b = 1.0 + param_ * t1;
      return {std::min(a, b), std::max(a, b)};
    }
    case Temporal::cosine: {
      double a = std::cos(param_ * t0), b = std::cos(param_ * t1);
      double lo = std::min(a, b), hi = std::max(a, b);
      if (param_ > 0.0) {
        // Interior extrema of cos at multiples of pi.
        double first = std::ceil(param_ * t0 / kPi);
        double last = std::floor(param_ * t1 / kPi);
        for (double m = first; m <= last; m += 1.0) {
          double v = (std::fmod(m, 2.0) == 0.0) ? 1.0 : -1.0;
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      return {lo, hi};
    }
  }
  return {1.0, 1.0};
}

double PerturbationSpec::sup_g(double t_final) const {
  auto [lo, hi] = g_range(0.0, t_final);
  return std::max(std::fabs(lo), std::fabs(hi));
}

double PerturbationSpec::sup_h(double t_final) const {
  return std::fabs(amplitude_) * sup_g(t_final);
}

double PerturbationSpec::sup_dx(double t_final) const {
  return std::fabs(amplitude_) * sup_g(t_final) * kTwoPi * mode_;
}

double PerturbationSpec::sup_dxx(double t_final) const {
  double w = kTwoPi * mode_;
  return std::fabs(amplitude_) * sup_g(t_final) * w * w;
}

std::string PerturbationSpec::describe() const {
  if (is_identically_zero()) return "zero";
  std::string t;
  switch (temporal_) {
    case Temporal::constant: t = "constant"; break;
    case Temporal::linear: t = "linear(" + std::to_string(param_) + ")"; break;
    case Temporal::cosine: t = "cosine(" + std::to_string(param_) + ")"; break;
  }
  return "sine(A=" + std::to_string(amplitude_) + ",m=" + std::to_string(mode_) + "," + t + ")";
}

StrengthReport validate_perturbation_strength(const PerturbationSpec& pert, const ScalingLaw& law,
                                              double t_final) {
  StrengthReport rep;
  rep.sup_dx = pert.sup_dx(t_final);
  switch (law.kind) {
    case ScalingLaw::Kind::power: {
      rep.bound = kPi * std::sqrt(law.alpha);
      rep.conservative_bound = 0.5 * rep.bound;
      rep.admissible = rep.sup_dx <= rep.bound;
      rep.conservative_admissible = rep.sup_dx <= rep.conservative_bound;
      rep.warning_band = rep.admissible && rep.sup_dx > 0.99 * rep.bound;
      rep.note =
          "gradient bound pi*sqrt(alpha); the concentration tail estimate needs the stricter "
          "pi*sqrt(alpha)/2 (factor-4 exponent gap), reported as conservative_bound";
      break;
    }
    case ScalingLaw::Kind::exponential:
      rep.bound = std::numeric_limits<double>::infinity();
      rep.conservative_bound = rep.bound;
      rep.admissible = true;
      rep.conservative_admissible = true;
      rep.note = "exponentially growing l admits every smooth perturbation";
      break;
    case ScalingLaw::Kind::fixed:
      rep.bound = std::numeric_limits<double>::infinity();
      rep.conservative_bound = rep.bound;
      rep.admissible = true;
      rep.conservative_admissible = true;
      rep.note = "explicit l carries no asymptotic admissibility statement";
      break;
  }
  return rep;
}

// ---------------------------------------------------------------- initial ---

InitialProfile InitialProfile::constant(double gamma) {
  require(gamma >= 0.0 && std::isfinite(gamma), Errc::config, "initial: gamma must be >= 0");
  InitialProfile p;
  p.kind_ = Kind::constant;
  p.p0_ = gamma;
  return p;
}

InitialProfile InitialProfile::smooth(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b), Errc::config, "initial: parameters must be finite");
  require(a >= 0.0 && a + b >= 0.0, Errc::config, "initial: profile must be nonnegative");
  InitialProfile p;
  p.kind_ = Kind::smooth;
  p.p0_ = a;
  p.p1_ = b;
  return p;
}

double InitialProfile::operator()(double x) const {
  if (kind_ == Kind::constant) return p0_;
  double s = std::sin(kTwoPi * x);
  return p0_ + p1_ * s * s;
}

double InitialProfile::sup() const {
  if (kind_ == Kind::constant) return p0_;
  return std::max(p0_, p0_ + p1_);
}

double InitialProfile::inf() const {
  if (kind_ == Kind::constant) return p0_;
  return std::min(p0_, p0_ + p1_);
}

GridFunction InitialProfile::sample(const TorusGridSpec& grid) const {
  return GridFunction::sample(grid, [this](double x) { return (*this)(x); });
}

}  // namespace hdld
