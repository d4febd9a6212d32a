// SPDX-License-Identifier: Apache-2.0
#include "hdld/elliptic.hpp"

#include <algorithm>
#include <cmath>

#include "hdld/error.hpp"

namespace hdld {

void EllipticSlice::validate() const {
  std::size_t m = psi.size();
  require(m >= 4, Errc::invalid_argument, "elliptic: need at least 4 points");
  require(dx.size() == m && dxx.size() == m && dt.size() == m, Errc::invalid_argument,
          "elliptic: field sizes disagree");
  for (std::size_t i = 0; i < m; ++i)
    require(std::isfinite(psi[i]) && std::isfinite(dx[i]) && std::isfinite(dxx[i]) &&
                std::isfinite(dt[i]),
            Errc::invalid_argument, "elliptic: non-finite slice data");
}

EllipticSlice sample_slice(const ReferenceSolution::Slice& slice, int points) {
  require(points >= 4, Errc::invalid_argument, "elliptic: need at least 4 points");
  EllipticSlice out;
  out.psi.resize(std::size_t(points));
  out.dx.resize(std::size_t(points));
  out.dxx.resize(std::size_t(points));
  out.dt.resize(std::size_t(points));
  for (int i = 0; i < points; ++i) {
    double x = double(i) / points;
    out.psi[std::size_t(i)] = slice.psi(x);
    out.dx[std::size_t(i)] = slice.dx(x);
    out.dxx[std::size_t(i)] = slice.dxx(x);
    out.dt[std::size_t(i)] = slice.dt(x);
  }
  return out;
}

namespace {

// Solve the cyclic tridiagonal system with diagonal a, upper band b (row i to
// i+1), lower band c (row i to i-1), and the two wrap entries alpha = A[m-1][0]
// and beta = A[0][m-1], via the Sherman-Morrison rank-one correction of a
// plain Thomas sweep.
class CyclicTridiagonal {
 public:
  CyclicTridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                    double alpha, double beta)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), alpha_(alpha), beta_(beta) {}

  std::vector<double> solve(const std::vector<double>& r) const {
    const std::size_t m = a_.size();
    double gamma = -a_[0];
    if (gamma == 0.0) gamma = 1.0;

    std::vector<double> diag = a_;
    diag[0] -= gamma;
    diag[m - 1] -= alpha_ * beta_ / gamma;

    std::vector<double> y = thomas(diag, r);
    std::vector<double> u(m, 0.0);
    u[0] = gamma;
    u[m - 1] = alpha_;
    std::vector<double> z = thomas(diag, u);

    double vy = y[0] + beta_ / gamma * y[m - 1];
    double vz = z[0] + beta_ / gamma * z[m - 1];
    double denom = 1.0 + vz;
    require(std::fabs(denom) > 1e-14, Errc::singular_jacobian,
            "elliptic: rank-one correction is singular");
    double factor = vy / denom;
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = y[i] - factor * z[i];
    return x;
  }

 private:
  std::vector<double> thomas(const std::vector<double>& diag, const std::vector<double>& r) const {
    const std::size_t m = diag.size();
    std::vector<double> cp(m, 0.0), dp(m, 0.0);
    double pivot = diag[0];
    require(std::fabs(pivot) > 1e-300, Errc::singular_jacobian, "elliptic: zero pivot");
    cp[0] = b_[0] / pivot;
    dp[0] = r[0] / pivot;
    for (std::size_t i = 1; i < m; ++i) {
      pivot = diag[i] - c_[i] * cp[i - 1];
      require(std::fabs(pivot) > 1e-300, Errc::singular_jacobian, "elliptic: zero pivot");
      cp[i] = (i + 1 < m ? b_[i] : 0.0) / pivot;
      dp[i] = (r[i] - c_[i] * dp[i - 1]) / pivot;
    }
    std::vector<double> x(m);
    x[m - 1] = dp[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
  }

  std::vector<double> a_, b_, c_;
  double alpha_, beta_;
};

}  // namespace

double constant_tilt_closed_form(double gamma, const ReactionSpec& reaction) {
  double b = reaction.birth(gamma), d = reaction.death(gamma);
  require(b > 0.0 && d > 0.0, Errc::degenerate_reaction,
          "elliptic: closed form needs positive birth and death at gamma");
  return 0.5 * std::log(d / b);
}

EllipticResult invert_tilt(const EllipticSlice& slice, const ReactionSpec& reaction,
                           EllipticOptions opts) {
  slice.validate();
  const int m = slice.points();
  const double md = double(m);
  for (int i = 0; i < m; ++i)
    require(slice.psi[std::size_t(i)] > 0.0, Errc::positivity,
            "elliptic: profile must be strictly positive");
  require(opts.max_iters >= 1 && opts.max_halvings >= 0 && opts.tolerance > 0.0,
          Errc::invalid_argument, "elliptic: bad options");

  std::vector<double> bpsi(std::size_t(m), 0.0), dpsi(std::size_t(m), 0.0);
  double mean_psi = 0.0;
  for (int i = 0; i < m; ++i) {
    bpsi[std::size_t(i)] = reaction.birth(slice.psi[std::size_t(i)]);
    dpsi[std::size_t(i)] = reaction.death(slice.psi[std::size_t(i)]);
    mean_psi += slice.psi[std::size_t(i)] / md;
  }
  double reaction_mass = 0.0;
  for (int i = 0; i < m; ++i) reaction_mass += bpsi[std::size_t(i)] + dpsi[std::size_t(i)];
  require(reaction_mass > 0.0, Errc::degenerate_reaction,
          "elliptic: reaction vanishes on the profile, tilt constant is free");

  std::vector<double> h(std::size_t(m), 0.0);
  {
    double b0 = reaction.birth(mean_psi), d0 = reaction.death(mean_psi);
    if (b0 > 0.0 && d0 > 0.0) std::fill(h.begin(), h.end(), 0.5 * std::log(d0 / b0));
  }

  auto residual = [&](const std::vector<double>& hv, std::vector<double>& out) {
    double sup = 0.0;
    for (int i = 0; i < m; ++i) {
      int ip = (i + 1) % m, im = (i + m - 1) % m;
      double hpp = md * md * (hv[std::size_t(ip)] - 2.0 * hv[std::size_t(i)] + hv[std::size_t(im)]);
      double hp = 0.5 * md * (hv[std::size_t(ip)] - hv[std::size_t(im)]);
      double f = 2.0 * slice.psi[std::size_t(i)] * hpp + 2.0 * slice.dx[std::size_t(i)] * hp -
                 slice.dxx[std::size_t(i)] + slice.dt[std::size_t(i)] -
                 std::exp(hv[std::size_t(i)]) * bpsi[std::size_t(i)] +
                 std::exp(-hv[std::size_t(i)]) * dpsi[std::size_t(i)];
      require(std::isfinite(f), Errc::no_convergence, "elliptic: residual diverged");
      out[std::size_t(i)] = f;
      sup = std::max(sup, std::fabs(f));
    }
    return sup;
  };

  std::vector<double> f(std::size_t(m), 0.0);
  double sup = residual(h, f);

  EllipticResult result;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    if (sup <= opts.tolerance) {
      result.h = GridFunction(std::move(h));
      result.residual = sup;
      result.iterations = iter;
      return result;
    }

    std::vector<double> diag(std::size_t(m), 0.0), upper(std::size_t(m), 0.0),
        lower(std::size_t(m), 0.0);
    for (int i = 0; i < m; ++i) {
      diag[std::size_t(i)] = -4.0 * slice.psi[std::size_t(i)] * md * md -
                             std::exp(h[std::size_t(i)]) * bpsi[std::size_t(i)] -
                             std::exp(-h[std::size_t(i)]) * dpsi[std::size_t(i)];
      double off = 2.0 * slice.psi[std::size_t(i)] * md * md;
      double drift = slice.dx[std::size_t(i)] * md;
      upper[std::size_t(i)] = off + drift;   // couples to i+1
      lower[std::size_t(i)] = off - drift;   // couples to i-1
    }
    double alpha = upper[std::size_t(m - 1)];  // row m-1 wraps to column 0
    double beta = lower[0];                    // row 0 wraps to column m-1

    std::vector<double> rhs(std::size_t(m), 0.0);
    for (int i = 0; i < m; ++i) rhs[std::size_t(i)] = -f[std::size_t(i)];
    CyclicTridiagonal jac(diag, upper, lower, alpha, beta);
    std::vector<double> step = jac.solve(rhs);

    double scale = 1.0;
    bool accepted = false;
    std::vector<double> trial(std::size_t(m), 0.0);
    for (int halving = 0; halving <= opts.max_halvings; ++halving) {
      for (int i = 0; i < m; ++i)
        trial[std::size_t(i)] = h[std::size_t(i)] + scale * step[std::size_t(i)];
      double trial_sup = residual(trial, f);
      if (trial_sup < sup) {
        h = trial;
        sup = trial_sup;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    require(accepted, Errc::no_convergence, "elliptic: damped step failed to reduce residual");
  }
  require(sup <= opts.tolerance, Errc::no_convergence, "elliptic: iteration budget exhausted");
  result.h = GridFunction(std::move(h));
  result.residual = sup;
  result.iterations = opts.max_iters;
  return result;
}

}  // namespace hdld
