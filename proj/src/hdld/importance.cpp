// SPDX-License-Identifier: Apache-2.0
#include "hdld/importance.hpp"

#include <cmath>
#include <limits>

#include "hdld/error.hpp"
#include "hdld/pool.hpp"

namespace hdld {

double path_sup_distance(const DensityPath& path,
                         const std::function<double(double, double)>& target) {
  double sup = 0.0;
  const int n = path.grid().n_sites;
  for (std::size_t i = 0; i < path.snapshot_count(); ++i) {
    double t = path.snapshot_time(i);
    const GridFunction& x = path.snapshot(i);
    for (int k = 0; k < n; ++k)
      sup = std::max(sup, std::fabs(x[k] - target(t, path.grid().site(k))));
  }
  return sup;
}

ImportanceEstimate importance_estimate(const SimParams& params, const InitialProfile& initial,
                                       const std::function<double(double, double)>& target,
                                       double delta, int replicas, std::uint64_t seed,
                                       int threads) {
  require(replicas >= 2, Errc::invalid_argument, "importance: need at least 2 replicas");
  require(delta > 0.0, Errc::invalid_argument, "importance: tube width must be positive");

  SimParams run = params;
  run.keep_event_log = false;

  ImportanceEstimate out;
  out.replicas = replicas;
  out.details.assign(std::size_t(replicas), ReplicaWeight{});

  parallel_for(replicas, threads, [&](int i) {
    SimResult result = simulate(run, initial, seed, std::uint64_t(i));
    ReplicaWeight& row = out.details[std::size_t(i)];
    row.replica = std::uint64_t(i);
    row.log_weight = result.weights.log_weight();
    row.sup_distance = path_sup_distance(result.path, target);
    row.in_tube = row.sup_distance <= delta;
  });

  const double scale = double(run.ell) * double(run.grid.n_sites);
  double sum = 0.0, sum_sq = 0.0, entropy_sum = 0.0;
  for (const ReplicaWeight& row : out.details) {
    double v = row.in_tube ? std::exp(row.log_weight) : 0.0;
    sum += v;
    sum_sq += v * v;
    if (row.in_tube) {
      ++out.in_tube;
      entropy_sum += -row.log_weight / scale;
    }
  }

  double r = double(replicas);
  out.p_hat = sum / r;
  double var = std::max(0.0, (sum_sq - sum * sum / r) / (r - 1.0));
  out.standard_error = std::sqrt(var / r);
  out.zero_hits = out.in_tube == 0;
  out.cost = out.p_hat > 0.0 ? -std::log(out.p_hat) / scale
                             : std::numeric_limits<double>::infinity();
  out.entropy = out.in_tube > 0 ? entropy_sum / out.in_tube : 0.0;
  return out;
}

}  // namespace hdld
