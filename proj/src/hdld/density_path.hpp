// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "hdld/grid.hpp"

namespace hdld {

// Time-stamped density snapshots X(t, k/N) = eta_k(t) / l. The path is
// piecewise constant in time (right-continuous) and linearly interpolated in
// space. The sup norm over [0, t_final] is tracked exactly online even when
// snapshot storage is thinned to a fixed time grid.
class DensityPath {
 public:
  enum class Cadence { every_event, fixed_grid };

  DensityPath(TorusGridSpec grid, std::uint64_t ell, double t_final,
              std::uint64_t expected_events);

  Cadence cadence() const { return cadence_; }
  const TorusGridSpec& grid() const { return grid_; }
  std::uint64_t ell() const { return ell_; }
  double t_final() const { return t_final_; }

  // Single-writer construction hooks, driven by the simulator.
  void record_initial(const std::vector<std::uint64_t>& counts);
  void record_event(double t, const std::vector<std::uint64_t>& counts, int changed_site);
  void finish(const std::vector<std::uint64_t>& counts);

  std::size_t snapshot_count() const { return times_.size(); }
  double snapshot_time(std::size_t i) const { return times_[i]; }
  const GridFunction& snapshot(std::size_t i) const { return values_[i]; }
  const std::vector<double>& snapshot_times() const { return times_; }

  // State at time t: the latest recorded snapshot with timestamp <= t.
  const GridFunction& at_time(double t) const;
  // Pointwise read, piecewise constant in t and linear in x.
  double value(double t, double x) const;

  // Exact sup over the whole path, independent of the snapshot cadence.
  double sup_norm() const { return running_sup_; }

  bool finished() const { return finished_; }

 private:
  GridFunction to_density(const std::vector<std::uint64_t>& counts) const;
  void push(double t, const std::vector<std::uint64_t>& counts);

  TorusGridSpec grid_;
  std::uint64_t ell_ = 1;
  double t_final_ = 0.0;
  Cadence cadence_ = Cadence::every_event;

  std::vector<double> times_;
  std::vector<GridFunction> values_;

  // fixed_grid mode bookkeeping
  std::vector<double> grid_times_;
  std::size_t next_grid_ = 0;
  std::vector<std::uint64_t> prev_counts_;

  double running_sup_ = 0.0;
  bool finished_ = false;
};

}  // namespace hdld
