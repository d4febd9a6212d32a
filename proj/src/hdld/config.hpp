// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "hdld/catalog.hpp"
#include "hdld/grid.hpp"

namespace hdld {

// A full run description, parsed from the sectioned key-value text format.
struct RunConfig {
  TorusGridSpec grid;
  ScalingLaw scaling = ScalingLaw::power(2.0);
  ReactionSpec reaction;
  PerturbationSpec perturbation = PerturbationSpec::zero();
  InitialProfile initial = InitialProfile::constant(1.0);
  double t_final = 0.0;
  std::uint64_t seed = 0;
  int replicas = 1;

  std::uint64_t resolved_ell() const { return resolve_scaling(scaling, grid); }

  // Canonical re-serialization; equal configs produce identical text.
  std::string canonical() const;
};

// Parses config text. Unknown sections or keys, missing mandatory keys, and
// keys that do not belong to the chosen variant are all hard errors
// (Errc::config). Lines starting with '#' are comments.
RunConfig parse_config(const std::string& text);

RunConfig load_config(const std::string& path);

// FNV-1a of arbitrary text as a 16-hex-digit string.
std::string text_hash(const std::string& text);

// text_hash of the canonical serialization. Used in CSV metadata so outputs
// are traceable to the exact run parameters.
std::string config_hash(const RunConfig& cfg);

}  // namespace hdld
