// SPDX-License-Identifier: Apache-2.0
#include "hdld/density_path.hpp"

#include <algorithm>
#include <cmath>

#include "hdld/error.hpp"

namespace hdld {

namespace {
constexpr std::uint64_t kEveryEventCap = 1'000'000;
// Cap on stored doubles (snapshots * N); beyond this the fixed grid kicks in
// even when the event count alone would have allowed per-event storage.
constexpr std::uint64_t kValueBudget = 16'000'000;
constexpr int kGridPoints = 1000;
}  // namespace

DensityPath::DensityPath(TorusGridSpec grid, std::uint64_t ell, double t_final,
                         std::uint64_t expected_events)
    : grid_(grid), ell_(ell), t_final_(t_final) {
  grid_.validate();
  require(ell >= 1, Errc::config, "density path: l must be >= 1");
  require(t_final > 0.0 && std::isfinite(t_final), Errc::config,
          "density path: t_final must be positive");
  std::uint64_t n = std::uint64_t(grid_.n_sites);
  if (expected_events <= kEveryEventCap && (expected_events + 2) * n <= kValueBudget) {
    cadence_ = Cadence::every_event;
  } else {
    cadence_ = Cadence::fixed_grid;
    grid_times_.resize(kGridPoints);
    for (int j = 0; j < kGridPoints; ++j)
      grid_times_[j] = t_final * double(j) / double(kGridPoints - 1);
    grid_times_.back() = t_final;
  }
}

GridFunction DensityPath::to_density(const std::vector<std::uint64_t>& counts) const {
  GridFunction x(grid_.n_sites);
  double inv = 1.0 / double(ell_);
  for (int k = 0; k < grid_.n_sites; ++k) x[k] = double(counts[std::size_t(k)]) * inv;
  return x;
}

void DensityPath::push(double t, const std::vector<std::uint64_t>& counts) {
  times_.push_back(t);
  values_.push_back(to_density(counts));
}

void DensityPath::record_initial(const std::vector<std::uint64_t>& counts) {
  require(times_.empty(), Errc::internal, "density path: initial state recorded twice");
  push(0.0, counts);
  running_sup_ = values_.front().sup_norm();
  if (cadence_ == Cadence::fixed_grid) {
    prev_counts_ = counts;
    next_grid_ = 1;  // grid time 0 is already stored
  }
}

void DensityPath::record_event(double t, const std::vector<std::uint64_t>& counts,
                               int changed_site) {
  require(!times_.empty(), Errc::internal, "density path: event before initial state");
  require(!finished_, Errc::internal, "density path: event after finish");
  double v = double(counts[std::size_t(grid_.wrap(changed_site))]) / double(ell_);
  running_sup_ = std::max(running_sup_, v);
  if (cadence_ == Cadence::every_event) {
    push(t, counts);
    return;
  }
  // The path equals prev_counts_ on [previous event, t); fill grid times there.
  while (next_grid_ < grid_times_.size() && grid_times_[next_grid_] < t) {
    push(grid_times_[next_grid_], prev_counts_);
    ++next_grid_;
  }
  prev_counts_ = counts;
}

void DensityPath::finish(const std::vector<std::uint64_t>& counts) {
  require(!times_.empty(), Errc::internal, "density path: finish before initial state");
  if (finished_) return;
  if (cadence_ == Cadence::fixed_grid) {
    while (next_grid_ < grid_times_.size()) {
      push(grid_times_[next_grid_], counts);
      ++next_grid_;
    }
    prev_counts_.clear();
    prev_counts_.shrink_to_fit();
  } else if (times_.back() < t_final_) {
    push(t_final_, counts);
  }
  finished_ = true;
}

const GridFunction& DensityPath::at_time(double t) const {
  require(!times_.empty(), Errc::incomplete_path, "density path: no snapshots");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  require(it != times_.begin(), Errc::negative_time, "density path: query before t = 0");
  return values_[std::size_t(it - times_.begin() - 1)];
}

double DensityPath::value(double t, double x) const {
  return interpolate_periodic(at_time(t), x);
}

}  // namespace hdld
