// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "hdld/error.hpp"
#include "hdld/martingale.hpp"
#include "hdld/sim.hpp"

using namespace hdld;

TEST_CASE("dynkin extraction on a hand-checked two-site trajectory") {
  // N = 2, l = 1, no reaction, no tilt. One particle hops 0 -> 1 at t = 0.1;
  // the integrand is the discrete laplacian of the density path:
  //   before: X = (1,1), lap = 0; after: X = (0,2),
  //   lap X_0 = 4(2+2-0) = 16, lap X_1 = 4(0+0-4) = -16.
  SimParams params;
  params.grid = TorusGridSpec{2};
  params.ell = 1;
  params.reaction.birth = ReactionFn::zero();
  params.reaction.death = ReactionFn::zero();
  params.t_final = 0.25;

  EventLog log(2);
  log.append(0.1, EventKind::jump_right, 0);

  DynkinExtraction dyn = extract_dynkin_martingale(log, {1, 1}, params);
  REQUIRE(!dyn.values.empty());
  const GridFunction& z = dyn.values.back();
  CHECK(z[0] == doctest::Approx(-1.0 - 16.0 * 0.15).epsilon(1e-9));  // -3.4
  CHECK(z[1] == doctest::Approx(1.0 + 16.0 * 0.15).epsilon(1e-9));   // +3.4
  // Truncation allowance: sup|X| (1 + sup|dxH|^2) / N = 2 * 1 / 2.
  CHECK(dyn.bias_bound == doctest::Approx(1.0));
}

TEST_CASE("quadratic compensators on a hand-checked single hop") {
  // N = 4, l = 1, one particle at site 0 hops right at t = 0.05, T = 0.2.
  SimParams params;
  params.grid = TorusGridSpec{4};
  params.ell = 1;
  params.reaction.birth = ReactionFn::zero();
  params.reaction.death = ReactionFn::zero();
  params.t_final = 0.2;

  EventLog log(4);
  log.append(0.05, EventKind::jump_right, 0);

  QuadraticMartingales q = extract_quadratic_martingales(log, {1, 0, 0, 0}, params, 0);
  // M1: delta eta_0 = -1; compensator int (gains - losses)
  //   = (0 - 32) * 0.05 + (16 - 0) * 0.15 = 0.8.
  CHECK(q.m1 == doctest::Approx(-1.0 - 0.8).epsilon(1e-9));
  // M2: one event touches site 0; rates touching it integrate to
  //   32 * 0.05 + 16 * 0.15 = 4.
  CHECK(q.events_m2 == 1);
  CHECK(q.m2 == doctest::Approx(1.0 - 4.0).epsilon(1e-9));
  // M3: one crossing of bond (0,1); the bond's total rate is
  //   16 (eta_0 + eta_1) = 16 throughout, integrating to 3.2.
  CHECK(q.events_m3 == 1);
  CHECK(q.m3 == doctest::Approx(1.0 - 16.0 * 0.2).epsilon(1e-9));
}

TEST_CASE("expansion-form weight vanishes identically without a tilt") {
  SimParams params;
  params.grid = TorusGridSpec{4};
  params.ell = 2;
  params.reaction.birth = ReactionFn::constant(0.5);
  params.reaction.death = ReactionFn::linear(0.5);
  params.t_final = 0.3;

  SimResult run = simulate(params, InitialProfile::constant(1.0), 5, 0);
  CHECK(log_rn_weight_taylor(run.log, initial_counts(params.grid, InitialProfile::constant(1.0),
                                                     params.ell),
                             params) == 0.0);
}

TEST_CASE("expansion-form weight tracks the exact one under a mild tilt") {
  SimParams params;
  params.grid = TorusGridSpec{16};
  params.ell = 8;
  params.reaction.birth = ReactionFn::constant(0.5);
  params.reaction.death = ReactionFn::linear(0.5);
  params.perturbation = PerturbationSpec::sine(0.1, 1);
  params.t_final = 0.1;

  std::vector<std::uint64_t> eta0 =
      initial_counts(params.grid, InitialProfile::constant(1.0), params.ell);
  SimResult run = simulate(params, eta0, Rng(17, 0));
  double exact = run.weights.log_weight();
  double taylor = log_rn_weight_taylor(run.log, eta0, params);
  CHECK(exact != 0.0);
  CHECK(std::fabs(exact - taylor) <= 5e-3);
}

TEST_CASE("replay rejects logs that underflow a site") {
  SimParams params;
  params.grid = TorusGridSpec{2};
  params.ell = 1;
  params.t_final = 0.1;

  EventLog log(2);
  log.append(0.05, EventKind::death, 0);
  try {
    extract_dynkin_martingale(log, {0, 0}, params);
    FAIL("expected the replay to reject an impossible death");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::incomplete_path);
  }
}
