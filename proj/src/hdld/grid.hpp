// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hdld/error.hpp"

namespace hdld {

// Discrete torus with n_sites equally spaced points x_k = k/n.
struct TorusGridSpec {
  int n_sites = 0;

  void validate() const { require(n_sites >= 2, Errc::config, "grid: n_sites must be >= 2"); }
  int wrap(int k) const {
    int m = k % n_sites;
    return m < 0 ? m + n_sites : m;
  }
  double site(int k) const { return double(wrap(k)) / n_sites; }
};

// Real-valued function on the grid sites. Plain value type; index access is
// unchecked, at() wraps periodically.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(int n, double fill = 0.0) : v_(static_cast<size_t>(n), fill) {}
  explicit GridFunction(std::vector<double> v) : v_(std::move(v)) {}

  int n() const { return static_cast<int>(v_.size()); }
  double& operator[](int k) { return v_[static_cast<size_t>(k)]; }
  double operator[](int k) const { return v_[static_cast<size_t>(k)]; }
  double at(int k) const {
    int n = this->n();
    int m = k % n;
    return v_[static_cast<size_t>(m < 0 ? m + n : m)];
  }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  double sup_norm() const;
  // Weighted norms and inner product use the (1/N) sum convention.
  double l1() const;
  double l2() const;

  static GridFunction sample(const TorusGridSpec& grid, const std::function<double(double)>& f);

 private:
  std::vector<double> v_;
};

// <f,g> = (1/N) sum_k f(k) g(k)
double inner_product(const GridFunction& f, const GridFunction& g);

// (L_N f)(k) = N^2 [f(k+1) + f(k-1) - 2 f(k)]
GridFunction discrete_laplacian(const GridFunction& f);

struct DiscreteGradients {
  GridFunction forward;   // N [f(k+1) - f(k)]
  GridFunction backward;  // N [f(k-1) - f(k)]
  GridFunction centered;  // (N/2) [f(k+1) - f(k-1)] == (forward - backward)/2
};
DiscreteGradients discrete_gradients(const GridFunction& f);

// Piecewise-linear interpolation between sites, periodic in x (period 1).
double interpolate_periodic(const GridFunction& f, double x);

}  // namespace hdld
