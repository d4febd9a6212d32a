// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "hdld/catalog.hpp"
#include "hdld/density_path.hpp"
#include "hdld/event_log.hpp"
#include "hdld/grid.hpp"
#include "hdld/rng.hpp"

namespace hdld {

// Running log Radon-Nikodym weight log(dP/dP^H) along a trajectory sampled
// under the tilted law P^H. Split so tests can see both pieces; the weight is
// -compensator + event_sum. Both stay exactly zero for the zero perturbation.
struct WeightAccumulator {
  double event_sum = 0.0;
  double compensator = 0.0;
  double log_weight() const { return -compensator + event_sum; }
};

struct SimParams {
  TorusGridSpec grid;
  std::uint64_t ell = 1;
  ReactionSpec reaction;
  PerturbationSpec perturbation = PerturbationSpec::zero();
  double t_final = 1.0;
  std::uint64_t event_budget = 1'000'000'000;
  bool keep_event_log = true;  // martingale replay needs the log; bulk runs skip it
};

struct SimResult {
  DensityPath path;
  EventLog log;
  WeightAccumulator weights;
  std::uint64_t n_events = 0;
};

// eta_k(0) = floor(l * gamma(k/N)).
std::vector<std::uint64_t> initial_counts(const TorusGridSpec& grid, const InitialProfile& initial,
                                          std::uint64_t ell);

// Per-site rates at fixed counts and time: [jump-right, jump-left, birth,
// death] per site. Exposed for the generator-consistency tests.
struct RateTable {
  std::vector<double> rates;  // 4 entries per site
  double total = 0.0;
};
RateTable build_rates(const std::vector<std::uint64_t>& counts, const PerturbationSpec& h,
                      double t, const SimParams& params);

// Statistically exact trajectory of the chain. Time-independent perturbations
// run plain event-driven sampling; time-dependent ones use thinning against
// dominating rates built over look-ahead windows of 0.1/N^2.
SimResult simulate(const SimParams& params, const std::vector<std::uint64_t>& eta0, Rng rng);

SimResult simulate(const SimParams& params, const InitialProfile& initial, std::uint64_t seed,
                   std::uint64_t replica);

}  // namespace hdld
