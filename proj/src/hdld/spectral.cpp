// SPDX-License-Identifier: Apache-2.0
#include "hdld/spectral.hpp"

#include <cmath>
#include <complex>

#include "hdld/error.hpp"

namespace hdld {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730951;

bool is_pow2(int n) { return n >= 2 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey; forward uses e^{-2 pi i jk/n}. The inverse
// here omits the 1/n factor (callers fold it into their normalization).
void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * kPi / double(len) * (inverse ? 1.0 : -1.0);
    std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        std::complex<double> u = a[i + j];
        std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace

SpectralBasis::SpectralBasis(TorusGridSpec grid) : grid_(grid) {
  grid_.validate();
  const int n = grid_.n_sites;
  auto push = [&](int m, bool is_sine, auto&& fn) {
    SpectralMode mode;
    mode.m = m;
    mode.is_sine = is_sine;
    mode.beta = 2.0 * double(n) * double(n) * (1.0 - std::cos(kPi * m / n));
    mode.vec = GridFunction(n);
    for (int k = 0; k < n; ++k) mode.vec[k] = fn(k);
    modes_.push_back(std::move(mode));
  };

  push(0, false, [](int) { return 1.0; });
  for (int m = 2; m < n; m += 2) {
    push(m, false, [&](int k) { return kSqrt2 * std::cos(kPi * m * k / double(n)); });
    push(m, true, [&](int k) { return kSqrt2 * std::sin(kPi * m * k / double(n)); });
  }
  if (n % 2 == 0) push(n, false, [&](int k) { return (k % 2 == 0) ? 1.0 : -1.0; });
}

std::vector<double> SpectralBasis::analyze_direct(const GridFunction& g) const {
  std::vector<double> coef(modes_.size());
  for (std::size_t i = 0; i < modes_.size(); ++i) coef[i] = inner_product(g, modes_[i].vec);
  return coef;
}

GridFunction SpectralBasis::synthesize_direct(const std::vector<double>& coef) const {
  GridFunction g(grid_.n_sites);
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    double c = coef[i];
    if (c == 0.0) continue;
    const GridFunction& v = modes_[i].vec;
    for (int k = 0; k < grid_.n_sites; ++k) g[k] += c * v[k];
  }
  return g;
}

std::vector<double> SpectralBasis::analyze(const GridFunction& g) const {
  require(g.n() == grid_.n_sites, Errc::invalid_argument, "spectral: size mismatch");
  const int n = grid_.n_sites;
  if (!is_pow2(n) || n < 8) return analyze_direct(g);

  std::vector<std::complex<double>> a(std::size_t(n), {0.0, 0.0});
  for (int k = 0; k < n; ++k) a[std::size_t(k)] = g[k];
  fft_inplace(a, false);

  // Mode layout: [const, (cos,sin) pairs for m=2,4,..., alternating mode].
  std::vector<double> coef(modes_.size());
  coef[0] = a[0].real() / n;
  std::size_t idx = 1;
  for (int m = 2; m < n; m += 2) {
    const auto& aj = a[std::size_t(m / 2)];
    coef[idx++] = kSqrt2 * aj.real() / n;
    coef[idx++] = -kSqrt2 * aj.imag() / n;
  }
  coef[idx] = a[std::size_t(n / 2)].real() / n;
  return coef;
}

GridFunction SpectralBasis::synthesize(const std::vector<double>& coef) const {
  require(coef.size() == modes_.size(), Errc::invalid_argument, "spectral: coefficient count");
  const int n = grid_.n_sites;
  if (!is_pow2(n) || n < 8) return synthesize_direct(coef);

  std::vector<std::complex<double>> a(std::size_t(n), {0.0, 0.0});
  a[0] = double(n) * coef[0];
  std::size_t idx = 1;
  for (int m = 2; m < n; m += 2) {
    double cc = coef[idx++];
    double cs = coef[idx++];
    std::complex<double> aj(double(n) / kSqrt2 * cc, -double(n) / kSqrt2 * cs);
    a[std::size_t(m / 2)] = aj;
    a[std::size_t(n - m / 2)] = std::conj(aj);
  }
  a[std::size_t(n / 2)] = double(n) * coef[idx];
  fft_inplace(a, true);

  GridFunction g(grid_.n_sites);
  for (int k = 0; k < n; ++k) g[k] = a[std::size_t(k)].real() / n;
  return g;
}

double SpectralBasis::evaluate(const std::vector<double>& coef, double x, int deriv) const {
  require(coef.size() == modes_.size(), Errc::invalid_argument, "spectral: coefficient count");
  require(deriv >= 0 && deriv <= 2, Errc::invalid_argument, "spectral: derivative order");
  double acc = 0.0;
  const int n = grid_.n_sites;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    double c = coef[i];
    if (c == 0.0) continue;
    double w = kPi * modes_[i].m;  // vec is cos/sin(pi m k/N), i.e. cos/sin(w x)
    double amp = (modes_[i].m == 0 || modes_[i].m == n) ? 1.0 : kSqrt2;
    double v = 0.0;
    if (modes_[i].is_sine) {
      switch (deriv) {
        case 0: v = std::sin(w * x); break;
        case 1: v = w * std::cos(w * x); break;
        case 2: v = -w * w * std::sin(w * x); break;
      }
    } else {
      switch (deriv) {
        case 0: v = std::cos(w * x); break;
        case 1: v = -w * std::sin(w * x); break;
        case 2: v = -w * w * std::cos(w * x); break;
      }
    }
    acc += c * amp * v;
  }
  return acc;
}

GridFunction semigroup_apply(const SpectralBasis& basis, double t, const GridFunction& g) {
  require(t >= 0.0, Errc::negative_time, "semigroup: t must be >= 0");
  std::vector<double> coef = basis.analyze(g);
  for (std::size_t i = 0; i < coef.size(); ++i) coef[i] *= std::exp(-basis.mode(i).beta * t);
  return basis.synthesize(coef);
}

std::vector<std::vector<double>> semigroup_matrix_oracle(const TorusGridSpec& grid, double t) {
  grid.validate();
  require(grid.n_sites <= 8, Errc::too_large, "semigroup oracle: N must be <= 8");
  require(t >= 0.0, Errc::negative_time, "semigroup oracle: t must be >= 0");
  const int n = grid.n_sites;
  const double n2 = double(n) * double(n);

  using Mat = std::vector<std::vector<double>>;
  auto zeros = [n] { return Mat(std::size_t(n), std::vector<double>(std::size_t(n), 0.0)); };
  auto matmul = [n](const Mat& a, const Mat& b) {
    Mat c(std::size_t(n), std::vector<double>(std::size_t(n), 0.0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        double aik = a[std::size_t(i)][std::size_t(k)];
        if (aik == 0.0) continue;
        for (int j = 0; j < n; ++j)
          c[std::size_t(i)][std::size_t(j)] += aik * b[std::size_t(k)][std::size_t(j)];
      }
    return c;
  };

  Mat a = zeros();
  for (int k = 0; k < n; ++k) {
    a[std::size_t(k)][std::size_t(k)] = -2.0 * n2 * t;
    a[std::size_t(k)][std::size_t(grid.wrap(k + 1))] += n2 * t;
    a[std::size_t(k)][std::size_t(grid.wrap(k - 1))] += n2 * t;
  }

  // Scale until the Taylor series converges quickly, then square back up.
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::fabs(a[std::size_t(i)][std::size_t(j)]);
    norm = std::max(norm, row);
  }
  int squarings = 0;
  while (norm > 0.5 && squarings < 60) {
    norm *= 0.5;
    ++squarings;
  }
  double scale = std::ldexp(1.0, -squarings);
  Mat b = zeros();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b[std::size_t(i)][std::size_t(j)] = a[std::size_t(i)][std::size_t(j)] * scale;

  Mat result = zeros();
  for (int i = 0; i < n; ++i) result[std::size_t(i)][std::size_t(i)] = 1.0;
  Mat term = result;
  for (int order = 1; order <= 24; ++order) {
    term = matmul(term, b);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) term[std::size_t(i)][std::size_t(j)] /= double(order);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        result[std::size_t(i)][std::size_t(j)] += term[std::size_t(i)][std::size_t(j)];
  }
  for (int s = 0; s < squarings; ++s) result = matmul(result, result);
  return result;
}

GridFunction duhamel_deterministic(const SpectralBasis& basis, const GridFunction& x0,
                                   const std::function<GridFunction(double)>& forcing, double t,
                                   int panels) {
  require(t >= 0.0, Errc::negative_time, "duhamel: t must be >= 0");
  require(panels >= 1 && panels <= 65536, Errc::quadrature, "duhamel: panel count out of budget");
  GridFunction out = semigroup_apply(basis, t, x0);
  if (t == 0.0) return out;

  static constexpr double nodes[4] = {-0.8611363115940526, -0.3399810435848563,
                                      0.3399810435848563, 0.8611363115940526};
  static constexpr double weights[4] = {0.3478548451374538, 0.6521451548625461,
                                        0.6521451548625461, 0.3478548451374538};
  double h = t / panels;
  for (int p = 0; p < panels; ++p) {
    double mid = (p + 0.5) * h, half = 0.5 * h;
    for (int q = 0; q < 4; ++q) {
      double s = mid + half * nodes[q];
      GridFunction damped = semigroup_apply(basis, t - s, forcing(s));
      double w = weights[q] * half;
      for (int k = 0; k < basis.n_sites(); ++k) out[k] += w * damped[k];
    }
  }
  return out;
}

GridFunction duhamel_stochastic_convolution(const SpectralBasis& basis,
                                            const std::vector<double>& z_times,
                                            const std::vector<GridFunction>& z_values, double t) {
  require(!z_times.empty() && z_times.size() == z_values.size(), Errc::incomplete_path,
          "stochastic convolution: empty or inconsistent path");
  require(z_times.front() == 0.0, Errc::incomplete_path,
          "stochastic convolution: path must start at time 0");
  require(t >= 0.0, Errc::negative_time, "stochastic convolution: t must be >= 0");

  const std::size_t n_modes = basis.size();
  std::vector<double> acc(n_modes, 0.0);
  std::size_t last = 0;
  for (std::size_t i = 0; i < z_times.size() && z_times[i] <= t; ++i) last = i;

  for (std::size_t i = 0; i <= last; ++i) {
    double s1 = z_times[i];
    double s2 = (i < last) ? z_times[i + 1] : t;
    if (s2 <= s1) continue;
    std::vector<double> coef = basis.analyze(z_values[i]);
    for (std::size_t mi = 0; mi < n_modes; ++mi) {
      double beta = basis.mode(mi).beta;
      if (beta == 0.0) continue;  // the Laplacian kills the constant mode
      acc[mi] += coef[mi] * (std::exp(-beta * (t - s1)) - std::exp(-beta * (t - s2)));
    }
  }

  GridFunction out = basis.synthesize(acc);
  const GridFunction& z_t = z_values[last];
  const GridFunction& z_0 = z_values.front();
  for (int k = 0; k < basis.n_sites(); ++k) out[k] += z_t[k] - z_0[k];
  return out;
}

}  // namespace hdld
