// SPDX-License-Identifier: Apache-2.0
#include "hdld/pde.hpp"

#include <algorithm>
#include <cmath>

#include "hdld/error.hpp"

namespace hdld {

namespace {

constexpr double kNegativeTolerance = -1e-8;

void check_state(const GridFunction& psi, const char* where) {
  for (int k = 0; k < psi.n(); ++k) {
    double v = psi[k];
    if (!std::isfinite(v) || v < kNegativeTolerance)
      fail(Errc::instability, std::string(where) + ": state left the admissible region");
  }
}

// Uniform sample grid with samples-1 intervals over [0, T].
std::vector<double> sample_grid(double t_final, int samples) {
  std::vector<double> t(std::size_t(samples), 0.0);
  for (int i = 0; i < samples; ++i) t[std::size_t(i)] = t_final * double(i) / double(samples - 1);
  t.back() = t_final;
  return t;
}

// One exponential-midpoint panel step; shared by the coarse solver and the
// reference builder. psi is advanced in place from time s to s + h.
void exp_midpoint_step(const SpectralBasis& basis, const SemiDiscreteRhs& rhs, double s, double h,
                       const std::vector<double>& damp_full, const std::vector<double>& damp_half,
                       GridFunction& psi, GridFunction& f0, GridFunction& fmid,
                       GridFunction& tmp) {
  const int n = psi.n();
  rhs.eval_nonstiff(s, psi, f0);
  for (int k = 0; k < n; ++k) tmp[k] = psi[k] + 0.5 * h * f0[k];
  std::vector<double> c_half = basis.analyze(tmp);
  for (std::size_t m = 0; m < c_half.size(); ++m) c_half[m] *= damp_half[m];
  GridFunction psi_mid = basis.synthesize(c_half);

  rhs.eval_nonstiff(s + 0.5 * h, psi_mid, fmid);
  std::vector<double> c_psi = basis.analyze(psi);
  std::vector<double> c_f = basis.analyze(fmid);
  for (std::size_t m = 0; m < c_psi.size(); ++m)
    c_psi[m] = damp_full[m] * c_psi[m] + h * damp_half[m] * c_f[m];
  psi = basis.synthesize(c_psi);
}

}  // namespace

void SemiDiscreteProblem::validate() const {
  grid.validate();
  validate_reaction(reaction);
  require(t_final > 0.0 && std::isfinite(t_final), Errc::config,
          "problem: t_final must be positive");
}

SemiDiscreteProblem SemiDiscreteProblem::with_grid(int n_sites) const {
  SemiDiscreteProblem p = *this;
  p.grid.n_sites = n_sites;
  p.grid.validate();
  return p;
}

SemiDiscreteRhs::SemiDiscreteRhs(const SemiDiscreteProblem& problem)
    : problem_(&problem), time_dependent_(problem.perturbation.time_dependent()) {
  const std::size_t n = std::size_t(problem.grid.n_sites);
  dx_h_.resize(n);
  dxx_h_.resize(n);
  exp_h_.resize(n);
  exp_mh_.resize(n);
  refresh_fields(0.0);
}

void SemiDiscreteRhs::refresh_fields(double t) const {
  if (cache_valid_ && (!time_dependent_ || cached_t_ == t)) return;
  const int n = problem_->grid.n_sites;
  const PerturbationSpec& h = problem_->perturbation;
  for (int k = 0; k < n; ++k) {
    double x = double(k) / double(n);
    dx_h_[std::size_t(k)] = h.dx(t, x);
    dxx_h_[std::size_t(k)] = h.dxx(t, x);
    double hv = h.h(t, x);
    exp_h_[std::size_t(k)] = std::exp(hv);
    exp_mh_[std::size_t(k)] = std::exp(-hv);
  }
  cached_t_ = t;
  cache_valid_ = true;
}

void SemiDiscreteRhs::eval(double t, const GridFunction& psi, GridFunction& out) const {
  refresh_fields(t);
  const int n = problem_->grid.n_sites;
  const double dn = double(n);
  const ReactionFn& b = problem_->reaction.birth;
  const ReactionFn& d = problem_->reaction.death;
  for (int k = 0; k < n; ++k) {
    int kp = (k + 1 == n) ? 0 : k + 1;
    int km = (k == 0) ? n - 1 : k - 1;
    double up = psi[kp], uc = psi[k], um = psi[km];
    double lap = dn * dn * (up - 2.0 * uc + um);
    double drift = dx_h_[std::size_t(k)] * dn * (up - um);
    double curvature = dxx_h_[std::size_t(k)] * 0.5 * (up + um + 2.0 * uc);
    double reaction = exp_h_[std::size_t(k)] * b(uc) - exp_mh_[std::size_t(k)] * d(uc);
    out[k] = lap - drift - curvature + reaction;
  }
}

void SemiDiscreteRhs::eval_nonstiff(double t, const GridFunction& psi, GridFunction& out) const {
  refresh_fields(t);
  const int n = problem_->grid.n_sites;
  const double dn = double(n);
  const ReactionFn& b = problem_->reaction.birth;
  const ReactionFn& d = problem_->reaction.death;
  for (int k = 0; k < n; ++k) {
    int kp = (k + 1 == n) ? 0 : k + 1;
    int km = (k == 0) ? n - 1 : k - 1;
    double up = psi[kp], uc = psi[k], um = psi[km];
    double drift = dx_h_[std::size_t(k)] * dn * (up - um);
    double curvature = dxx_h_[std::size_t(k)] * 0.5 * (up + um + 2.0 * uc);
    double reaction = exp_h_[std::size_t(k)] * b(uc) - exp_mh_[std::size_t(k)] * d(uc);
    out[k] = -drift - curvature + reaction;
  }
}

GridFunction SolutionPath::at_time(double t) const {
  require(!times.empty(), Errc::incomplete_path, "solution path: empty");
  if (t <= times.front()) return states.front();
  if (t >= times.back()) return states.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t hi = std::size_t(it - times.begin());
  std::size_t lo = hi - 1;
  double w = (t - times[lo]) / (times[hi] - times[lo]);
  GridFunction out = states[lo];
  for (int k = 0; k < out.n(); ++k)
    out[k] = (1.0 - w) * states[lo][k] + w * states[hi][k];
  return out;
}

double SolutionPath::sup_distance(const SolutionPath& other) const {
  require(times.size() == other.times.size(), Errc::invalid_argument,
          "solution path: sample grids differ");
  double sup = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i)
    for (int k = 0; k < states[i].n(); ++k)
      sup = std::max(sup, std::fabs(states[i][k] - other.states[i][k]));
  return sup;
}

SolutionPath solve_semidiscrete_rk(const SemiDiscreteProblem& problem, double dt_factor,
                                   int min_samples) {
  problem.validate();
  require(dt_factor > 0.0 && dt_factor <= 0.25, Errc::config,
          "rk solve: dt_factor must lie in (0, 0.25]");
  const int samples = std::max(min_samples, 2);
  const int n = problem.grid.n_sites;
  SemiDiscreteRhs rhs(problem);

  SolutionPath path;
  path.grid = problem.grid;
  path.times = sample_grid(problem.t_final, samples);
  path.states.reserve(std::size_t(samples));

  GridFunction psi = problem.initial.sample(problem.grid);
  check_state(psi, "rk solve");
  path.states.push_back(psi);

  GridFunction k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double dt_max = dt_factor / (double(n) * double(n));
  for (int i = 1; i < samples; ++i) {
    double t0 = path.times[std::size_t(i - 1)];
    double t1 = path.times[std::size_t(i)];
    int steps = std::max(1, int(std::ceil((t1 - t0) / dt_max - 1e-12)));
    double dt = (t1 - t0) / steps;
    for (int s = 0; s < steps; ++s) {
      double t = t0 + s * dt;
      rhs.eval(t, psi, k1);
      for (int k = 0; k < n; ++k) tmp[k] = psi[k] + 0.5 * dt * k1[k];
      rhs.eval(t + 0.5 * dt, tmp, k2);
      for (int k = 0; k < n; ++k) tmp[k] = psi[k] + 0.5 * dt * k2[k];
      rhs.eval(t + 0.5 * dt, tmp, k3);
      for (int k = 0; k < n; ++k) tmp[k] = psi[k] + dt * k3[k];
      rhs.eval(t + dt, tmp, k4);
      for (int k = 0; k < n; ++k)
        psi[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
      check_state(psi, "rk solve");
    }
    path.states.push_back(psi);
  }
  return path;
}

SolutionPath solve_semidiscrete_spectral(const SemiDiscreteProblem& problem, int panels) {
  problem.validate();
  require(panels >= 1 && panels <= (1 << 24), Errc::config, "spectral solve: panel budget");

  // Sample at panel boundaries; past 100 intervals, thin to 101 samples and
  // round the panel count up so panels per interval stays integral.
  int intervals = std::min(panels, 100);
  int per_interval = (panels + intervals - 1) / intervals;
  panels = per_interval * intervals;
  const int samples = intervals + 1;

  SpectralBasis basis(problem.grid);
  SemiDiscreteRhs rhs(problem);
  const int n = problem.grid.n_sites;
  const double h = problem.t_final / panels;

  std::vector<double> damp_full(basis.size()), damp_half(basis.size());
  for (std::size_t m = 0; m < basis.size(); ++m) {
    damp_full[m] = std::exp(-basis.mode(m).beta * h);
    damp_half[m] = std::exp(-basis.mode(m).beta * 0.5 * h);
  }

  SolutionPath path;
  path.grid = problem.grid;
  path.times = sample_grid(problem.t_final, samples);
  path.states.reserve(std::size_t(samples));

  GridFunction psi = problem.initial.sample(problem.grid);
  check_state(psi, "spectral solve");
  path.states.push_back(psi);

  GridFunction f0(n), fmid(n), tmp(n);
  for (int i = 1; i < samples; ++i) {
    double t0 = path.times[std::size_t(i - 1)];
    for (int p = 0; p < per_interval; ++p)
      exp_midpoint_step(basis, rhs, t0 + p * h, h, damp_full, damp_half, psi, f0, fmid, tmp);
    check_state(psi, "spectral solve");
    path.states.push_back(psi);
  }
  return path;
}

ReferenceSolution::ReferenceSolution(const SemiDiscreteProblem& problem, int refinement,
                                     int panels, int samples)
    : problem_(problem) {
  require(refinement >= 1, Errc::config, "reference: refinement must be >= 1");
  const long long fine_n = (long long)problem.grid.n_sites * refinement;
  require(fine_n <= 4096, Errc::too_large, "reference: refined grid exceeds 4096 sites");
  problem_ = problem.with_grid(int(fine_n));
  problem_.validate();
  fine_grid_ = problem_.grid;

  if (samples <= 1) samples = 1001;
  if (panels <= 0) panels = std::max(2 * int(fine_n), samples - 1);
  int intervals = samples - 1;
  int per_interval = (panels + intervals - 1) / intervals;

  SpectralBasis basis(fine_grid_);
  SemiDiscreteRhs rhs(problem_);
  const int n = fine_grid_.n_sites;
  const double h = problem_.t_final / double(intervals) / double(per_interval);

  std::vector<double> damp_full(basis.size()), damp_half(basis.size());
  for (std::size_t m = 0; m < basis.size(); ++m) {
    damp_full[m] = std::exp(-basis.mode(m).beta * h);
    damp_half[m] = std::exp(-basis.mode(m).beta * 0.5 * h);
  }

  path_.grid = fine_grid_;
  path_.times = sample_grid(problem_.t_final, samples);
  GridFunction psi = problem_.initial.sample(fine_grid_);
  check_state(psi, "reference solve");
  path_.states.push_back(psi);

  GridFunction f0(n), fmid(n), tmp(n);
  for (int i = 1; i < samples; ++i) {
    double t0 = path_.times[std::size_t(i - 1)];
    for (int p = 0; p < per_interval; ++p)
      exp_midpoint_step(basis, rhs, t0 + p * h, h, damp_full, damp_half, psi, f0, fmid, tmp);
    check_state(psi, "reference solve");
    path_.states.push_back(psi);
  }

  // Gradient and value envelopes feed the error-bound constant.
  for (const GridFunction& state : path_.states) {
    DiscreteGradients grads = discrete_gradients(state);
    for (int k = 0; k < state.n(); ++k) {
      sup_dx_ = std::max(sup_dx_, std::fabs(grads.centered[k]));
      sup_value_ = std::max(sup_value_, std::fabs(state[k]));
    }
  }

  basis_ = std::make_unique<SpectralBasis>(fine_grid_);
  rhs_ = std::make_unique<SemiDiscreteRhs>(problem_);
}

double ReferenceSolution::value(double t, double x) const {
  const auto& times = path_.times;
  require(t >= -1e-12 && t <= problem_.t_final + 1e-12, Errc::negative_time,
          "reference: time outside [0, T]");
  t = std::clamp(t, 0.0, problem_.t_final);
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t hi = std::min(std::size_t(it - times.begin()), times.size() - 1);
  std::size_t lo = (hi == 0) ? 0 : hi - 1;
  double w = (hi == lo) ? 0.0 : (t - times[lo]) / (times[hi] - times[lo]);

  // Catmull-Rom in x on the fine grid, then linear blend in t.
  const int n = fine_grid_.n_sites;
  double xn = (x - std::floor(x)) * n;
  int k1 = int(xn) % n;
  double u = xn - std::floor(xn);
  int k0 = (k1 == 0) ? n - 1 : k1 - 1;
  int k2 = (k1 + 1) % n;
  int k3 = (k1 + 2) % n;
  auto cubic = [&](const GridFunction& f) {
    double p0 = f[k0], p1 = f[k1], p2 = f[k2], p3 = f[k3];
    return p1 + 0.5 * u *
                    (p2 - p0 +
                     u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + u * (3.0 * (p1 - p2) + p3 - p0)));
  };
  double a = cubic(path_.states[lo]);
  double b = cubic(path_.states[hi]);
  return (1.0 - w) * a + w * b;
}

double ReferenceSolution::Slice::psi(double x) const { return basis_->evaluate(c_psi_, x, 0); }
double ReferenceSolution::Slice::dx(double x) const { return basis_->evaluate(c_psi_, x, 1); }
double ReferenceSolution::Slice::dxx(double x) const { return basis_->evaluate(c_psi_, x, 2); }
double ReferenceSolution::Slice::dt(double x) const { return basis_->evaluate(c_dt_, x, 0); }

ReferenceSolution::Slice ReferenceSolution::slice(double t) const {
  require(t >= -1e-12 && t <= problem_.t_final + 1e-12, Errc::negative_time,
          "reference: slice time outside [0, T]");
  t = std::clamp(t, 0.0, problem_.t_final);
  GridFunction psi = path_.at_time(t);
  GridFunction dpsi(fine_grid_.n_sites);
  rhs_->eval(t, psi, dpsi);

  Slice s;
  s.basis_ = basis_.get();
  s.c_psi_ = basis_->analyze(psi);
  s.c_dt_ = basis_->analyze(dpsi);
  return s;
}

SchemeConstant estimate_scheme_constant(const SemiDiscreteProblem& problem,
                                        const ReferenceSolution& reference) {
  SchemeConstant c;
  const PerturbationSpec& h = problem.perturbation;
  double sup_h = h.sup_h(problem.t_final);
  c.exp_h_times_lip_b = std::exp(sup_h) * problem.reaction.birth.lipschitz();
  c.exp_mh_times_lip_d = std::exp(sup_h) * problem.reaction.death.lipschitz();
  c.sup_dx_h = h.sup_dx(problem.t_final);
  c.sup_dxx_h = h.sup_dxx(problem.t_final);
  c.sup_dx_psi = reference.sup_dx_estimate();
  c.c_star = std::max(
      {c.exp_h_times_lip_b, c.exp_mh_times_lip_d, c.sup_dx_h, c.sup_dxx_h, c.sup_dx_psi});
  return c;
}

SchemeErrorStudy scheme_error_study(const SemiDiscreteProblem& base,
                                    const std::vector<int>& n_values,
                                    const ReferenceSolution& reference, double c_star) {
  SchemeErrorStudy study;
  study.c_star = c_star;
  double threshold = base.perturbation.sup_dx(base.t_final) + 1.0;
  for (int n : n_values) {
    SemiDiscreteProblem p = base.with_grid(n);
    SolutionPath sol = solve_semidiscrete_rk(p);
    double err = 0.0;
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
      double t = sol.times[i];
      for (int k = 0; k < n; ++k)
        err = std::max(err, std::fabs(sol.states[i][k] - reference.value(t, double(k) / n)));
    }
    SchemeErrorRow row;
    row.n = n;
    row.error = err;
    row.bound = std::exp((3.0 * c_star + 1.0) * base.t_final) / double(n);
    row.within_bound = err <= row.bound;
    row.above_threshold = double(n) >= threshold;
    study.rows.push_back(row);
  }

  // Least-squares slope of log(error) against log(N).
  std::size_t usable = 0;
  for (const auto& row : study.rows)
    if (row.error > 1e-12) ++usable;
  if (usable >= 2 && usable == study.rows.size()) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& row : study.rows) {
      double lx = std::log(double(row.n)), ly = std::log(row.error);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    double m = double(study.rows.size());
    study.fitted_order = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    study.order_fitted = true;
  }
  return study;
}

SolutionPath solve_comparison_system(const ComparisonProblem& problem, double dt_factor,
                                     int min_samples) {
  problem.grid.validate();
  require(problem.c_star >= 0.0, Errc::config, "comparison: C must be >= 0");
  require(problem.t_final > 0.0, Errc::config, "comparison: t_final must be positive");
  require(dt_factor > 0.0 && dt_factor <= 0.25, Errc::config, "comparison: dt_factor");

  const int n = problem.grid.n_sites;
  const double dn = double(n);
  const int samples = std::max(min_samples, 2);
  const double cs = problem.c_star;

  auto rhs = [&](double t, const GridFunction& phi, GridFunction& out) {
    for (int k = 0; k < n; ++k) {
      int kp = (k + 1 == n) ? 0 : k + 1;
      int km = (k == 0) ? n - 1 : k - 1;
      double up = phi[kp], uc = phi[k], um = phi[km];
      double dxh = problem.perturbation.dx(t, double(k) / dn);
      out[k] = dn * dn * (up - 2.0 * uc + um) - dn * (up - um) * dxh +
               cs * (up + std::fabs(uc) + um + 1.0 / dn);
    }
  };

  SolutionPath path;
  path.grid = problem.grid;
  path.times = sample_grid(problem.t_final, samples);
  GridFunction phi(n);
  path.states.push_back(phi);

  GridFunction k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double dt_max = dt_factor / (dn * dn);
  for (int i = 1; i < samples; ++i) {
    double t0 = path.times[std::size_t(i - 1)];
    double t1 = path.times[std::size_t(i)];
    int steps = std::max(1, int(std::ceil((t1 - t0) / dt_max - 1e-12)));
    double dt = (t1 - t0) / steps;
    for (int s = 0; s < steps; ++s) {
      double t = t0 + s * dt;
      rhs(t, phi, k1);
      for (int k = 0; k < n; ++k) tmp[k] = phi[k] + 0.5 * dt * k1[k];
      rhs(t + 0.5 * dt, tmp, k2);
      for (int k = 0; k < n; ++k) tmp[k] = phi[k] + 0.5 * dt * k2[k];
      rhs(t + 0.5 * dt, tmp, k3);
      for (int k = 0; k < n; ++k) tmp[k] = phi[k] + dt * k3[k];
      rhs(t + dt, tmp, k4);
      for (int k = 0; k < n; ++k)
        phi[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
      for (int k = 0; k < n; ++k)
        require(std::isfinite(phi[k]), Errc::instability, "comparison: non-finite state");
    }
    path.states.push_back(phi);
  }
  return path;
}

ComparisonReport comparison_principle_check(const SolutionPath& sub, const SolutionPath& sup,
                                            const ComparisonProblem& problem) {
  SolutionPath phi = solve_comparison_system(problem, 0.2, int(sub.times.size()));
  require(sub.times.size() == phi.times.size() && sup.times.size() == phi.times.size(),
          Errc::invalid_argument, "comparison: sample grids differ");
  ComparisonReport rep;
  for (std::size_t i = 0; i < phi.times.size(); ++i) {
    for (int k = 0; k < phi.states[i].n(); ++k) {
      double p = phi.states[i][k];
      rep.max_sub_violation = std::max(rep.max_sub_violation, sub.states[i][k] - p);
      rep.max_sup_violation = std::max(rep.max_sup_violation, p - sup.states[i][k]);
    }
  }
  rep.passed = rep.max_sub_violation <= 1e-8 && rep.max_sup_violation <= 1e-8;
  return rep;
}

}  // namespace hdld
