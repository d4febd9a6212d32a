// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hdld/error.hpp"
#include "hdld/pde.hpp"

using namespace hdld;

namespace {
SemiDiscreteProblem catalog_problem(int n) {
  SemiDiscreteProblem p;
  p.grid = TorusGridSpec{n};
  p.reaction.birth = ReactionFn::logistic(1.0, 1.0);
  p.reaction.death = ReactionFn::linear(0.5);
  p.perturbation = PerturbationSpec::sine(0.4, 1);
  p.initial = InitialProfile::smooth(0.5, 0.25);
  p.t_final = 0.25;
  return p;
}
}  // namespace

TEST_CASE("constant birth grows every site linearly") {
  SemiDiscreteProblem p;
  p.grid = TorusGridSpec{8};
  p.reaction.birth = ReactionFn::constant(0.3);
  p.reaction.death = ReactionFn::zero();
  p.initial = InitialProfile::constant(1.0);
  p.t_final = 0.5;
  SolutionPath path = solve_semidiscrete_rk(p);
  const GridFunction& last = path.states.back();
  for (int k = 0; k < 8; ++k)
    CHECK(last[k] == doctest::Approx(1.0 + 0.3 * 0.5).epsilon(1e-10));
}

TEST_CASE("linear death decays every site exponentially") {
  SemiDiscreteProblem p;
  p.grid = TorusGridSpec{8};
  p.reaction.birth = ReactionFn::zero();
  p.reaction.death = ReactionFn::linear(2.0);
  p.initial = InitialProfile::constant(1.5);
  p.t_final = 0.5;
  SolutionPath path = solve_semidiscrete_rk(p);
  const GridFunction& last = path.states.back();
  for (int k = 0; k < 8; ++k)
    CHECK(last[k] == doctest::Approx(1.5 * std::exp(-2.0 * 0.5)).epsilon(1e-8));
}

TEST_CASE("logistic growth follows the scalar closed form") {
  SemiDiscreteProblem p;
  p.grid = TorusGridSpec{4};
  p.reaction.birth = ReactionFn::logistic(1.0, 1.0);
  p.reaction.death = ReactionFn::zero();
  p.initial = InitialProfile::constant(0.5);
  p.t_final = 1.0;
  SolutionPath path = solve_semidiscrete_rk(p);
  // du/dt = u(1-u), u(0) = 1/2 has u(t) = 1/(1+e^{-t}).
  for (std::size_t i = 0; i < path.times.size(); i += 10) {
    double expected = 1.0 / (1.0 + std::exp(-path.times[i]));
    CHECK(path.states[i][0] == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("exponential-integrator and runge-kutta solvers agree") {
  SemiDiscreteProblem p = catalog_problem(32);
  SolutionPath rk = solve_semidiscrete_rk(p);
  // The midpoint integrator is second order in panel width; at the default
  // 1000 panels its own time error (~1e-5) dominates this comparison, so
  // shrink it out of the way to expose any real disagreement.
  SolutionPath spec = solve_semidiscrete_spectral(p, 4000);
  CHECK(rk.sup_distance(spec) <= 1e-5);
}

TEST_CASE("problem validation rejects bad horizons and grids") {
  SemiDiscreteProblem p = catalog_problem(8);
  p.t_final = 0.0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = catalog_problem(8);
  SemiDiscreteProblem q = p.with_grid(64);
  CHECK(q.grid.n_sites == 64);
  CHECK(q.t_final == doctest::Approx(p.t_final));
}

TEST_CASE("reference solution interpolates its own slices consistently") {
  SemiDiscreteProblem p = catalog_problem(32);
  ReferenceSolution ref(p, 4);  // fine grid 128
  CHECK(ref.fine_n() == 128);

  // At t = 0 the reference reproduces the initial profile at fine nodes.
  for (int k = 0; k < ref.fine_n(); k += 17) {
    double x = double(k) / ref.fine_n();
    CHECK(ref.value(0.0, x) == doctest::Approx(p.initial(x)).epsilon(1e-10));
  }

  ReferenceSolution::Slice slice = ref.slice(0.125);
  const double h = 1e-5;
  for (double x : {0.11, 0.37, 0.81}) {
    double fd = (slice.psi(x + h) - slice.psi(x - h)) / (2 * h);
    CHECK(slice.dx(x) == doctest::Approx(fd).epsilon(1e-4));
    double fd2 = (slice.dx(x + h) - slice.dx(x - h)) / (2 * h);
    CHECK(slice.dxx(x) == doctest::Approx(fd2).epsilon(1e-4));
  }

  SchemeConstant c = estimate_scheme_constant(p, ref);
  double expected = std::max({c.exp_h_times_lip_b, c.exp_mh_times_lip_d, c.sup_dx_h,
                              c.sup_dxx_h, c.sup_dx_psi});
  CHECK(c.c_star == doctest::Approx(expected));
  CHECK(c.c_star > 0.0);
}

TEST_CASE("comparison system is bracketed by zero and the exponential envelope") {
  ComparisonProblem cp;
  cp.grid = TorusGridSpec{8};
  cp.perturbation = PerturbationSpec::sine(0.3, 1);
  cp.c_star = 0.8;
  cp.t_final = 0.5;

  SolutionPath phi = solve_comparison_system(cp);

  // phi itself is both a sub- and supersolution of itself.
  ComparisonReport self = comparison_principle_check(phi, phi, cp);
  CHECK(self.passed);

  // z_k(t) = exp(4 C t) / N dominates phi when C <= 1; zero stays below.
  SolutionPath zero = phi, envelope = phi;
  for (std::size_t i = 0; i < phi.times.size(); ++i) {
    double z = std::exp(4.0 * cp.c_star * phi.times[i]) / 8.0;
    for (int k = 0; k < 8; ++k) {
      zero.states[i][k] = 0.0;
      envelope.states[i][k] = z;
    }
  }
  ComparisonReport bracket = comparison_principle_check(zero, envelope, cp);
  CHECK(bracket.passed);
  CHECK(bracket.max_sub_violation <= 1e-8);
  CHECK(bracket.max_sup_violation <= 1e-8);
}
