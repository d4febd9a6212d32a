// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "hdld/catalog.hpp"
#include "hdld/grid.hpp"
#include "hdld/spectral.hpp"

namespace hdld {

// The site ODE system: spatial discretization of the reaction-diffusion-drift
// PDE with the time variable kept continuous.
struct SemiDiscreteProblem {
  TorusGridSpec grid;
  ReactionSpec reaction;
  PerturbationSpec perturbation = PerturbationSpec::zero();
  InitialProfile initial = InitialProfile::constant(1.0);
  double t_final = 1.0;

  void validate() const;
  SemiDiscreteProblem with_grid(int n_sites) const;
};

// d/dt psi_k = N^2(psi_{k+1} - 2 psi_k + psi_{k-1})
//            - dxH_k N (psi_{k+1} - psi_{k-1})
//            - dxxH_k (psi_{k+1} + psi_{k-1} + 2 psi_k) / 2
//            + e^{H_k} b(psi_k) - e^{-H_k} d(psi_k).
// The evaluator caches the site fields of H; when H is constant in time the
// cache is built once.
class SemiDiscreteRhs {
 public:
  explicit SemiDiscreteRhs(const SemiDiscreteProblem& problem);
  void eval(double t, const GridFunction& psi, GridFunction& out) const;
  // Drift and reaction terms only, without the Laplacian (exponential
  // integrators propagate the Laplacian exactly).
  void eval_nonstiff(double t, const GridFunction& psi, GridFunction& out) const;

 private:
  void refresh_fields(double t) const;
  const SemiDiscreteProblem* problem_;
  mutable std::vector<double> dx_h_, dxx_h_, exp_h_, exp_mh_;
  mutable double cached_t_ = 0.0;
  mutable bool cache_valid_ = false;
  bool time_dependent_ = false;
};

// Solution sampled on a uniform time grid (first sample at 0, last at T).
struct SolutionPath {
  TorusGridSpec grid;
  std::vector<double> times;
  std::vector<GridFunction> states;

  const GridFunction& state_at(std::size_t i) const { return states[i]; }
  // Linear interpolation between samples.
  GridFunction at_time(double t) const;
  double sup_distance(const SolutionPath& other) const;
};

// Classical 4-stage Runge-Kutta with dt = dt_factor / N^2 (CFL-limited).
SolutionPath solve_semidiscrete_rk(const SemiDiscreteProblem& problem, double dt_factor = 0.25,
                                   int min_samples = 101);

// Exponential midpoint integrator: the Laplacian propagates through the exact
// heat semigroup, drift and reaction enter through a midpoint predictor.
// Sample times are a subset of panel boundaries, so no sampling bias enters.
SolutionPath solve_semidiscrete_spectral(const SemiDiscreteProblem& problem, int panels = 1000);

// Fine-grid solve wrapped as a (t, x) interpolant: cubic in x between fine
// sites, linear in t between samples. This is the oracle every convergence
// and rate-function experiment measures against.
class ReferenceSolution {
 public:
  ReferenceSolution(const SemiDiscreteProblem& problem, int refinement = 8, int panels = 0,
                    int samples = 0);
  ReferenceSolution(const ReferenceSolution&) = delete;
  ReferenceSolution& operator=(const ReferenceSolution&) = delete;

  double value(double t, double x) const;
  int fine_n() const { return fine_grid_.n_sites; }
  double t_final() const { return problem_.t_final; }
  double sup_dx_estimate() const { return sup_dx_; }
  double sup_value() const { return sup_value_; }

  // Fixed-time view with spectrally interpolated space derivatives and the
  // semi-discrete right-hand side as the time derivative.
  class Slice {
   public:
    double psi(double x) const;
    double dx(double x) const;
    double dxx(double x) const;
    double dt(double x) const;

   private:
    friend class ReferenceSolution;
    const SpectralBasis* basis_ = nullptr;
    std::vector<double> c_psi_, c_dt_;
  };
  Slice slice(double t) const;

 private:
  SemiDiscreteProblem problem_;
  TorusGridSpec fine_grid_;
  SolutionPath path_;
  std::unique_ptr<SpectralBasis> basis_;
  std::unique_ptr<SemiDiscreteRhs> rhs_;
  double sup_dx_ = 0.0;
  double sup_value_ = 0.0;
};

// C_* = max of the five norms entering the one-step error bound; the solution
// gradient is estimated from the reference.
struct SchemeConstant {
  double exp_h_times_lip_b = 0.0;
  double exp_mh_times_lip_d = 0.0;
  double sup_dx_h = 0.0;
  double sup_dxx_h = 0.0;
  double sup_dx_psi = 0.0;
  double c_star = 0.0;
};
SchemeConstant estimate_scheme_constant(const SemiDiscreteProblem& problem,
                                        const ReferenceSolution& reference);

struct SchemeErrorRow {
  int n = 0;
  double error = 0.0;     // sup over sampled t and sites vs reference
  double bound = 0.0;     // exp{(3 C_* + 1) T} / N
  bool within_bound = false;
  bool above_threshold = false;  // N >= ||dxH||_inf + 1
};
struct SchemeErrorStudy {
  std::vector<SchemeErrorRow> rows;
  double fitted_order = 0.0;
  bool order_fitted = false;  // false when errors sit at machine epsilon
  double c_star = 0.0;
};
SchemeErrorStudy scheme_error_study(const SemiDiscreteProblem& base,
                                    const std::vector<int>& n_values,
                                    const ReferenceSolution& reference, double c_star);

// The linear comparison system: d/dt phi_k = N^2(phi_{k+1} - 2 phi_k
// + phi_{k-1}) - N(phi_{k+1} - phi_{k-1}) dxH_k + C(phi_{k+1} + |phi_k|
// + phi_{k-1} + 1/N), phi(0) = 0. Sub/supersolution candidates are checked
// against its integrated solution.
struct ComparisonProblem {
  TorusGridSpec grid;
  PerturbationSpec perturbation = PerturbationSpec::zero();
  double c_star = 1.0;
  double t_final = 1.0;
};

SolutionPath solve_comparison_system(const ComparisonProblem& problem, double dt_factor = 0.2,
                                     int min_samples = 101);

struct ComparisonReport {
  bool passed = false;
  double max_sub_violation = 0.0;  // max over grid of (sub - phi)
  double max_sup_violation = 0.0;  // max over grid of (phi - sup)
};
ComparisonReport comparison_principle_check(const SolutionPath& sub, const SolutionPath& sup,
                                            const ComparisonProblem& problem);

}  // namespace hdld
