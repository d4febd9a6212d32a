// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hdld/density_path.hpp"
#include "hdld/sim.hpp"

namespace hdld {

// Sup distance between a recorded trajectory and a smooth target, evaluated
// at the trajectory's own snapshot times and sites.
double path_sup_distance(const DensityPath& path,
                         const std::function<double(double, double)>& target);

struct ReplicaWeight {
  std::uint64_t replica = 0;
  double log_weight = 0.0;
  double sup_distance = 0.0;
  bool in_tube = false;
};

struct ImportanceEstimate {
  double p_hat = 0.0;          // tube probability estimate under the base law
  double standard_error = 0.0;
  double cost = 0.0;           // -log(p_hat) / (l N); +inf when nothing hit
  double entropy = 0.0;        // mean of -log weight / (l N) over in-tube runs
  int in_tube = 0;
  int replicas = 0;
  bool zero_hits = false;
  std::vector<ReplicaWeight> details;  // one row per replica, in replica order
};

// Tilted-dynamics importance sampling estimate of the probability that the
// unmodified process stays delta-close to `target`. Replicas run under
// params.perturbation and are reweighted by the exact Radon-Nikodym factor.
ImportanceEstimate importance_estimate(const SimParams& params, const InitialProfile& initial,
                                       const std::function<double(double, double)>& target,
                                       double delta, int replicas, std::uint64_t seed,
                                       int threads);

}  // namespace hdld
