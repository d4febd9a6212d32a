// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hdld {

struct SuiteOptions {
  std::string out_dir;  // when nonempty, CSV artifacts are written here
  std::uint64_t seed = 20260816;
  int threads = 1;
  int replicas = 0;  // 0 = suite default
};

struct SuiteCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // measured values backing the verdict
};

// One experiment suite run: every check carries its own measurements, and the
// suite passes only when all of them do.
struct SuiteReport {
  std::string suite;
  std::vector<SuiteCheck> checks;
  std::vector<std::string> artifacts;

  bool passed() const;
  std::string summary() const;
};

SuiteReport run_scheme_order_suite(const SuiteOptions& opts);
SuiteReport run_semigroup_suite(const SuiteOptions& opts);
SuiteReport run_martingale_suite(const SuiteOptions& opts);
SuiteReport run_weights_suite(const SuiteOptions& opts);
SuiteReport run_lln_suite(const SuiteOptions& opts, bool perturbed);
SuiteReport run_rate_identity_suite(const SuiteOptions& opts);
SuiteReport run_invert_tilt_suite(const SuiteOptions& opts);
SuiteReport run_importance_suite(const SuiteOptions& opts);
SuiteReport run_concentration_suite(const SuiteOptions& opts);

// One trajectory from a config file: CSV of (t, site, density) rows for every
// recorded snapshot, plus an optional binary event log.
struct SimulateFileRequest {
  std::string config_path;
  std::string out_csv;
  std::string event_log_path;  // empty = skip
  std::uint64_t replica = 0;
};
void simulate_to_files(const SimulateFileRequest& req);

}  // namespace hdld
