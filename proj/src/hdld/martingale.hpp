// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "hdld/event_log.hpp"
#include "hdld/grid.hpp"
#include "hdld/sim.hpp"

namespace hdld {

// Replay-based extraction of the Dynkin compensated process
//
//   Z(t,k) = X_k(t) - X_k(0) - int_0^t (A X)(s,k) ds,
//
// where A applies the discrete Laplacian, the drift coupling to the tilt, and
// the tilted reaction terms to the density. The operator form drops the
// lattice commutator remainder; bias_bound is the sup over the replay of
// (1/N) |X|_inf (1 + |dx H|_inf^2), which bounds the resulting drift of the
// mean. The time integral is exact per inter-event piece for static tilts and
// Gauss-Legendre quadrature otherwise.
struct DynkinExtraction {
  std::vector<double> times;         // 0 = t_0 < ... <= t_final
  std::vector<GridFunction> values;  // values[i][k] = Z(times[i], k)
  double bias_bound = 0.0;
};

DynkinExtraction extract_dynkin_martingale(const EventLog& log,
                                           const std::vector<std::uint64_t>& eta0,
                                           const SimParams& params);

// Terminal values of the three quadratic compensated processes at one site:
//   m1: count change minus integrated net inflow rate,
//   m2: number of events that changed eta_k minus the integrated sum of all
//       rates that can change it,
//   m3: number of jumps across the bond (k, k+1) minus its integrated rate.
// Each has mean zero under the tilted dynamics.
struct QuadraticMartingales {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double events_m2 = 0.0;  // raw event count feeding m2
  double events_m3 = 0.0;  // raw bond-jump count feeding m3
};

QuadraticMartingales extract_quadratic_martingales(const EventLog& log,
                                                   const std::vector<std::uint64_t>& eta0,
                                                   const SimParams& params, int site);

// Second-order expansion of the log Radon-Nikodym weight in the tilt,
// reconstructed from a replay of the event log. Agrees with the exact
// log weight up to O(1/N^2) per unit of l N.
double log_rn_weight_taylor(const EventLog& log, const std::vector<std::uint64_t>& eta0,
                            const SimParams& params);

}  // namespace hdld
