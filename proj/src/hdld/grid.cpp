// SPDX-License-Identifier: Apache-2.0
#include "hdld/grid.hpp"

#include <cmath>

namespace hdld {

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::fabs(x));
  return m;
}

double GridFunction::l1() const {
  double s = 0.0;
  for (double x : v_) s += std::fabs(x);
  return s / n();
}

double GridFunction::l2() const {
  double s = 0.0;
  for (double x : v_) s += x * x;
  return std::sqrt(s / n());
}

GridFunction GridFunction::sample(const TorusGridSpec& grid, const std::function<double(double)>& f) {
  grid.validate();
  GridFunction g(grid.n_sites);
  for (int k = 0; k < grid.n_sites; ++k) g[k] = f(grid.site(k));
  return g;
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  require(f.n() == g.n(), Errc::invalid_argument, "inner_product: size mismatch");
  double s = 0.0;
  for (int k = 0; k < f.n(); ++k) s += f[k] * g[k];
  return s / f.n();
}

GridFunction discrete_laplacian(const GridFunction& f) {
  int n = f.n();
  require(n >= 2, Errc::invalid_argument, "discrete_laplacian: need n >= 2");
  GridFunction out(n);
  double n2 = double(n) * double(n);
  for (int k = 0; k < n; ++k) {
    int kp = (k + 1 == n) ? 0 : k + 1;
    int km = (k == 0) ? n - 1 : k - 1;
    out[k] = n2 * (f[kp] + f[km] - 2.0 * f[k]);
  }
  return out;
}

DiscreteGradients discrete_gradients(const GridFunction& f) {
  int n = f.n();
  require(n >= 2, Errc::invalid_argument, "discrete_gradients: need n >= 2");
  DiscreteGradients g{GridFunction(n), GridFunction(n), GridFunction(n)};
  double dn = n;
  for (int k = 0; k < n; ++k) {
    int kp = (k + 1 == n) ? 0 : k + 1;
    int km = (k == 0) ? n - 1 : k - 1;
    g.forward[k] = dn * (f[kp] - f[k]);
    g.backward[k] = dn * (f[km] - f[k]);
    g.centered[k] = 0.5 * dn * (f[kp] - f[km]);
  }
  return g;
}

double interpolate_periodic(const GridFunction& f, double x) {
  int n = f.n();
  double y = x - std::floor(x);  // into [0,1)
  double s = y * n;
  int k = static_cast<int>(std::floor(s));
  if (k >= n) k = n - 1;
  double frac = s - k;
  int kp = (k + 1 == n) ? 0 : k + 1;
  return (1.0 - frac) * f[k] + frac * f[kp];
}

}  // namespace hdld
