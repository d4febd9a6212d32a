// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "hdld/error.hpp"
#include "hdld/sim.hpp"

using namespace hdld;

namespace {
double total_mass(const GridFunction& density, std::uint64_t ell) {
  double sum = 0.0;
  for (int k = 0; k < density.n(); ++k) sum += density[k] * double(ell);
  return sum;
}
}  // namespace

TEST_CASE("initial counts floor the scaled profile") {
  std::vector<std::uint64_t> eta =
      initial_counts(TorusGridSpec{4}, InitialProfile::smooth(0.5, 0.25), 10);
  // floor(10 * (0.5 + 0.25 sin^2(2 pi k/4))) = 5, 7, 5, 7.
  CHECK(eta == std::vector<std::uint64_t>{5, 7, 5, 7});
}

TEST_CASE("rate table on two sites with unit birth and linear death") {
  SimParams params;
  params.grid = TorusGridSpec{2};
  params.ell = 1;
  params.reaction.birth = ReactionFn::constant(1.0);
  params.reaction.death = ReactionFn::linear(1.0);

  RateTable table = build_rates({1, 2}, params.perturbation, 0.0, params);
  REQUIRE(table.rates.size() == 8);
  // site 0: jumps 4, 4 (N^2 eta), birth 1, death 1; site 1: 8, 8, 1, 2.
  CHECK(table.rates[0] == doctest::Approx(4.0));
  CHECK(table.rates[1] == doctest::Approx(4.0));
  CHECK(table.rates[2] == doctest::Approx(1.0));
  CHECK(table.rates[3] == doctest::Approx(1.0));
  CHECK(table.rates[4] == doctest::Approx(8.0));
  CHECK(table.rates[5] == doctest::Approx(8.0));
  CHECK(table.rates[6] == doctest::Approx(1.0));
  CHECK(table.rates[7] == doctest::Approx(2.0));
  CHECK(table.total == doctest::Approx(29.0));
}

TEST_CASE("tilted rates carry the exponential factors") {
  SimParams params;
  params.grid = TorusGridSpec{4};
  params.ell = 2;
  params.reaction.birth = ReactionFn::constant(0.5);
  params.reaction.death = ReactionFn::linear(1.0);
  params.perturbation = PerturbationSpec::sine(0.3, 1);

  RateTable table = build_rates({1, 1, 1, 1}, params.perturbation, 0.0, params);
  auto h = [&](int k) { return params.perturbation.h(0.0, k / 4.0); };
  for (int k = 0; k < 4; ++k) {
    double u = 0.5;
    CHECK(table.rates[std::size_t(4 * k + 0)] ==
          doctest::Approx(16.0 * std::exp(h((k + 1) % 4) - h(k))).epsilon(1e-12));
    CHECK(table.rates[std::size_t(4 * k + 1)] ==
          doctest::Approx(16.0 * std::exp(h((k + 3) % 4) - h(k))).epsilon(1e-12));
    CHECK(table.rates[std::size_t(4 * k + 2)] ==
          doctest::Approx(2.0 * 0.5 * std::exp(h(k))).epsilon(1e-12));
    CHECK(table.rates[std::size_t(4 * k + 3)] ==
          doctest::Approx(2.0 * u * std::exp(-h(k))).epsilon(1e-12));
  }
}

TEST_CASE("pure transport conserves mass") {
  SimParams params;
  params.grid = TorusGridSpec{4};
  params.ell = 5;
  params.reaction.birth = ReactionFn::zero();
  params.reaction.death = ReactionFn::zero();
  params.t_final = 0.5;

  SimResult run = simulate(params, InitialProfile::constant(2.0), 42, 0);
  CHECK(run.path.finished());
  CHECK(run.n_events == run.log.size());
  CHECK(run.n_events > 0);
  for (std::size_t i = 0; i < run.path.snapshot_count(); i += 50)
    CHECK(total_mass(run.path.snapshot(i), params.ell) == doctest::Approx(40.0));
}

TEST_CASE("net production of a pure-birth chain is poisson distributed") {
  SimParams params;
  params.grid = TorusGridSpec{2};
  params.ell = 1;
  params.reaction.birth = ReactionFn::constant(2.0);
  params.reaction.death = ReactionFn::zero();
  params.t_final = 0.5;
  params.keep_event_log = false;

  // Births arrive at constant total rate sum_k l b = 4, so the terminal
  // particle count is Poisson(2). Check the replica mean against 3 SE.
  const int replicas = 10000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < replicas; ++i) {
    SimResult run = simulate(params, std::vector<std::uint64_t>{0, 0}, Rng(7, std::uint64_t(i)));
    double mass = total_mass(run.path.snapshot(run.path.snapshot_count() - 1), 1);
    sum += mass;
    sumsq += mass * mass;
  }
  double mean = sum / replicas;
  double var = (sumsq - sum * sum / replicas) / (replicas - 1);
  double se = std::sqrt(var / replicas);
  CHECK(std::fabs(mean - 2.0) <= 3.0 * se);
  CHECK(var == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("zero perturbation and zero-amplitude sine give identical paths") {
  SimParams a;
  a.grid = TorusGridSpec{4};
  a.ell = 8;
  a.reaction.birth = ReactionFn::logistic(1.0, 1.0);
  a.reaction.death = ReactionFn::linear(0.5);
  a.perturbation = PerturbationSpec::zero();
  a.t_final = 0.3;

  SimParams b = a;
  b.perturbation = PerturbationSpec::sine(0.0, 1);

  SimResult ra = simulate(a, InitialProfile::constant(1.0), 2024, 3);
  SimResult rb = simulate(b, InitialProfile::constant(1.0), 2024, 3);

  CHECK(ra.n_events == rb.n_events);
  CHECK(ra.weights.log_weight() == 0.0);
  CHECK(rb.weights.log_weight() == 0.0);
  REQUIRE(ra.log.size() == rb.log.size());
  for (std::size_t i = 0; i < ra.log.size(); ++i) {
    CHECK(ra.log[i].time == rb.log[i].time);
    CHECK(ra.log[i].kind == rb.log[i].kind);
    CHECK(ra.log[i].site == rb.log[i].site);
  }
  REQUIRE(ra.path.snapshot_count() == rb.path.snapshot_count());
  for (std::size_t i = 0; i < ra.path.snapshot_count(); i += 100)
    for (int k = 0; k < 4; ++k) CHECK(ra.path.snapshot(i)[k] == rb.path.snapshot(i)[k]);
}

TEST_CASE("long runs survive the periodic rate-table rebuild audit") {
  SimParams params;
  params.grid = TorusGridSpec{8};
  params.ell = 2000;
  params.reaction.birth = ReactionFn::logistic(1.0, 1.0);
  params.reaction.death = ReactionFn::linear(0.5);
  params.perturbation = PerturbationSpec::sine(0.3, 1);
  params.t_final = 0.1;
  params.keep_event_log = false;

  SimResult run = simulate(params, InitialProfile::constant(1.0), 11, 0);
  CHECK(run.path.finished());
  CHECK(run.n_events > (1u << 16));  // enough to cross at least one rebuild
}

TEST_CASE("time-dependent tilts keep the weights normalized via thinning") {
  SimParams params;
  params.grid = TorusGridSpec{4};
  params.ell = 4;
  params.reaction.birth = ReactionFn::constant(0.5);
  params.reaction.death = ReactionFn::linear(0.5);
  params.perturbation =
      PerturbationSpec::sine(0.2, 1, PerturbationSpec::Temporal::cosine, 6.283185307179586);
  params.t_final = 0.25;
  params.keep_event_log = false;

  const int replicas = 2000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < replicas; ++i) {
    SimResult run = simulate(params, InitialProfile::constant(1.0), 99, std::uint64_t(i));
    double w = std::exp(run.weights.log_weight());
    sum += w;
    sumsq += w * w;
  }
  double mean = sum / replicas;
  double se = std::sqrt((sumsq - sum * sum / replicas) / (replicas - 1) / replicas);
  CHECK(std::fabs(mean - 1.0) <= 4.0 * se);
}

TEST_CASE("simulation input validation") {
  SimParams params;
  params.grid = TorusGridSpec{4};
  params.ell = 2;
  params.t_final = 0.1;

  CHECK_THROWS_AS(simulate(params, std::vector<std::uint64_t>{1, 1, 1}, Rng(1, 1)), Error);

  SimParams bad_time = params;
  bad_time.t_final = 0.0;
  CHECK_THROWS_AS(simulate(bad_time, std::vector<std::uint64_t>{1, 1, 1, 1}, Rng(1, 1)), Error);

  SimParams tiny_budget = params;
  tiny_budget.ell = 50;
  tiny_budget.event_budget = 10;
  tiny_budget.t_final = 1.0;
  try {
    simulate(tiny_budget, InitialProfile::constant(2.0), 5, 0);
    FAIL("expected the event budget to trip");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::event_budget);
  }
}

TEST_CASE("replica streams are reproducible and independent") {
  SimParams params;
  params.grid = TorusGridSpec{4};
  params.ell = 8;
  params.reaction.birth = ReactionFn::constant(0.5);
  params.reaction.death = ReactionFn::linear(1.0);
  params.t_final = 0.2;

  SimResult first = simulate(params, InitialProfile::constant(1.0), 31, 2);
  SimResult again = simulate(params, InitialProfile::constant(1.0), 31, 2);
  SimResult other = simulate(params, InitialProfile::constant(1.0), 31, 3);

  REQUIRE(first.log.size() == again.log.size());
  for (std::size_t i = 0; i < first.log.size(); ++i)
    CHECK(first.log[i].time == again.log[i].time);
  bool differs = other.log.size() != first.log.size();
  for (std::size_t i = 0; !differs && i < first.log.size(); ++i)
    differs = first.log[i].time != other.log[i].time;
  CHECK(differs);
}
