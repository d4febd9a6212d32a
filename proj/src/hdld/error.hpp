// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace hdld {

// Error categories; mirrored one-to-one by the C API status codes.
enum class Errc {
  ok = 0,
  config,              // bad config file / parameters
  overflow,            // particle counts would overflow 64-bit arithmetic
  nonfinite_rate,      // NaN/Inf transition rate
  event_budget,        // simulation exceeded its event cap
  incomplete_path,     // path does not cover the requested window
  negative_time,       // semigroup asked for t < 0
  too_large,           // dense oracle asked for n > 8
  quadrature,          // quadrature budget exhausted
  instability,         // ODE solve produced a significantly negative component
  positivity,          // elliptic solve requires psi > 0
  singular_jacobian,   // Newton linear system broke down
  no_convergence,      // Newton iteration cap hit
  degenerate_reaction, // b(psi) = d(psi) = 0 everywhere: constant mode unconstrained
  domain,              // argument outside mathematical domain
  io,                  // file read/write failure
  invalid_argument,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace hdld
