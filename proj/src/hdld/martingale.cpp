// SPDX-License-Identifier: Apache-2.0
#include "hdld/martingale.hpp"

#include <cmath>

#include "hdld/error.hpp"

namespace hdld {

namespace {

constexpr double kGlNodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
constexpr double kGlWeights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                  0.3478548451374538};

void apply_event_to_counts(std::vector<std::uint64_t>& counts, const EventRecord& e, int n) {
  auto dec = [&](int k) {
    require(counts[std::size_t(k)] > 0, Errc::incomplete_path,
            "replay: event log decrements an empty site");
    --counts[std::size_t(k)];
  };
  int k = int(e.site);
  switch (e.kind) {
    case EventKind::jump_right:
      dec(k);
      ++counts[std::size_t((k + 1) % n)];
      break;
    case EventKind::jump_left:
      dec(k);
      ++counts[std::size_t((k + n - 1) % n)];
      break;
    case EventKind::birth:
      ++counts[std::size_t(k)];
      break;
    case EventKind::death:
      dec(k);
      break;
  }
}

// Walk the log's constant-count pieces in order. piece(t0, t1, counts) is
// called for every piece of positive length, then on_event(record) after the
// count change it triggers.
template <typename PieceFn, typename EventFn>
void replay(const EventLog& log, std::vector<std::uint64_t> counts, double t_final, int n,
            PieceFn&& piece, EventFn&& on_event) {
  double t = 0.0;
  for (const EventRecord& e : log.events()) {
    require(e.time <= t_final, Errc::incomplete_path, "replay: event beyond final time");
    if (e.time > t) piece(t, e.time, counts);
    apply_event_to_counts(counts, e, n);
    on_event(e, counts);
    t = e.time;
  }
  if (t_final > t) piece(t, t_final, counts);
}

struct TiltFields {
  GridFunction h, eh, emh, dxh, dxxh;
};

TiltFields sample_tilt(const PerturbationSpec& pert, const TorusGridSpec& grid, double t) {
  int n = grid.n_sites;
  TiltFields f{GridFunction(n), GridFunction(n), GridFunction(n), GridFunction(n),
               GridFunction(n)};
  for (int k = 0; k < n; ++k) {
    double x = grid.site(k);
    double hk = pert.h(t, x);
    f.h[k] = hk;
    f.eh[k] = std::exp(hk);
    f.emh[k] = std::exp(-hk);
    f.dxh[k] = pert.dx(t, x);
    f.dxxh[k] = pert.dxx(t, x);
  }
  return f;
}

}  // namespace

DynkinExtraction extract_dynkin_martingale(const EventLog& log,
                                           const std::vector<std::uint64_t>& eta0,
                                           const SimParams& params) {
  const int n = params.grid.n_sites;
  require(int(eta0.size()) == n, Errc::invalid_argument, "dynkin: initial counts size mismatch");
  require(log.n_sites() == n, Errc::invalid_argument, "dynkin: event log grid mismatch");
  const double ell = double(params.ell);
  const bool time_dep = params.perturbation.time_dependent();
  TiltFields static_fields = sample_tilt(params.perturbation, params.grid, 0.0);

  std::vector<double> x0(std::size_t(n), 0.0);
  for (int k = 0; k < n; ++k) x0[std::size_t(k)] = double(eta0[std::size_t(k)]) / ell;

  std::vector<double> integral(std::size_t(n), 0.0);
  double sup_x = 0.0;

  // Operator action on the density for frozen counts at one time.
  auto add_integrand = [&](const std::vector<std::uint64_t>& counts, const TiltFields& f,
                           double weight) {
    for (int k = 0; k < n; ++k) {
      int kp = (k + 1) % n, km = (k + n - 1) % n;
      double xc = double(counts[std::size_t(k)]) / ell;
      double xp = double(counts[std::size_t(kp)]) / ell;
      double xm = double(counts[std::size_t(km)]) / ell;
      double lap = double(n) * double(n) * ((xp - 2.0 * xc) + xm);
      double grad = 0.5 * double(n) * (xp - xm);
      double val = lap - 2.0 * grad * f.dxh[k] - 0.5 * (xp + xm + 2.0 * xc) * f.dxxh[k] +
                   params.reaction.birth(xc) * f.eh[k] - params.reaction.death(xc) * f.emh[k];
      integral[std::size_t(k)] += weight * val;
    }
  };

  auto piece = [&](double t0, double t1, const std::vector<std::uint64_t>& counts) {
    for (int k = 0; k < n; ++k)
      sup_x = std::max(sup_x, double(counts[std::size_t(k)]) / ell);
    if (!time_dep) {
      add_integrand(counts, static_fields, t1 - t0);
    } else {
      double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
      for (int q = 0; q < 4; ++q) {
        TiltFields f = sample_tilt(params.perturbation, params.grid, mid + half * kGlNodes[q]);
        add_integrand(counts, f, kGlWeights[q] * half);
      }
    }
  };

  DynkinExtraction out;
  out.times.push_back(0.0);
  out.values.emplace_back(n, 0.0);

  auto on_event = [&](const EventRecord& e, const std::vector<std::uint64_t>& counts) {
    GridFunction z(n);
    for (int k = 0; k < n; ++k)
      z[k] = double(counts[std::size_t(k)]) / ell - x0[std::size_t(k)] - integral[std::size_t(k)];
    out.times.push_back(e.time);
    out.values.push_back(std::move(z));
  };

  replay(log, eta0, params.t_final, n, piece, on_event);

  GridFunction z(n);
  {
    std::vector<std::uint64_t> final_counts = eta0;
    for (const EventRecord& e : log.events()) apply_event_to_counts(final_counts, e, n);
    for (int k = 0; k < n; ++k)
      z[k] = double(final_counts[std::size_t(k)]) / ell - x0[std::size_t(k)] -
             integral[std::size_t(k)];
  }
  out.times.push_back(params.t_final);
  out.values.push_back(std::move(z));

  double dxh_sup = params.perturbation.sup_dx(params.t_final);
  out.bias_bound = sup_x * (1.0 + dxh_sup * dxh_sup) / double(n);
  return out;
}

QuadraticMartingales extract_quadratic_martingales(const EventLog& log,
                                                   const std::vector<std::uint64_t>& eta0,
                                                   const SimParams& params, int site) {
  const int n = params.grid.n_sites;
  require(int(eta0.size()) == n, Errc::invalid_argument,
          "quadratic: initial counts size mismatch");
  require(site >= 0 && site < n, Errc::invalid_argument, "quadratic: site out of range");
  const double ell = double(params.ell);
  const double n2 = double(n) * double(n);
  const bool time_dep = params.perturbation.time_dependent();
  const PerturbationSpec& pert = params.perturbation;
  const int k = site, kp = (site + 1) % n, km = (site + n - 1) % n;
  const double xk = params.grid.site(k), xkp = params.grid.site(kp), xkm = params.grid.site(km);

  double comp1 = 0.0, comp2 = 0.0, comp3 = 0.0;

  auto add_rates = [&](const std::vector<std::uint64_t>& counts, double t, double w) {
    double hk = pert.h(t, xk), hp = pert.h(t, xkp), hm = pert.h(t, xkm);
    double uk = double(counts[std::size_t(k)]) / ell;
    double gain_r = n2 * double(counts[std::size_t(km)]) * std::exp(hk - hm);
    double gain_l = n2 * double(counts[std::size_t(kp)]) * std::exp(hk - hp);
    double loss_r = n2 * double(counts[std::size_t(k)]) * std::exp(hp - hk);
    double loss_l = n2 * double(counts[std::size_t(k)]) * std::exp(hm - hk);
    double birth = ell * params.reaction.birth(uk) * std::exp(hk);
    double death = ell * params.reaction.death(uk) * std::exp(-hk);
    comp1 += w * (gain_r + gain_l - loss_r - loss_l + birth - death);
    comp2 += w * (gain_r + gain_l + loss_r + loss_l + birth + death);
    // Jumps across the bond (k, k+1): right from k, left from k+1.
    comp3 += w * (loss_r + n2 * double(counts[std::size_t(kp)]) * std::exp(hk - hp));
  };

  auto piece = [&](double t0, double t1, const std::vector<std::uint64_t>& counts) {
    if (!time_dep) {
      add_rates(counts, 0.0, t1 - t0);
    } else {
      double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
      for (int q = 0; q < 4; ++q) add_rates(counts, mid + half * kGlNodes[q], kGlWeights[q] * half);
    }
  };

  QuadraticMartingales out;
  std::int64_t delta_eta = 0;

  auto on_event = [&](const EventRecord& e, const std::vector<std::uint64_t>&) {
    int s = int(e.site);
    bool touches = false;
    switch (e.kind) {
      case EventKind::jump_right:
        touches = (s == k) || ((s + 1) % n == k);
        if (s == k) --delta_eta;
        if ((s + 1) % n == k) ++delta_eta;
        if (s == k) out.events_m3 += 1.0;
        break;
      case EventKind::jump_left:
        touches = (s == k) || ((s + n - 1) % n == k);
        if (s == k) --delta_eta;
        if ((s + n - 1) % n == k) ++delta_eta;
        if (s == kp) out.events_m3 += 1.0;
        break;
      case EventKind::birth:
        touches = (s == k);
        if (s == k) ++delta_eta;
        break;
      case EventKind::death:
        touches = (s == k);
        if (s == k) --delta_eta;
        break;
    }
    if (touches) out.events_m2 += 1.0;
  };

  replay(log, eta0, params.t_final, n, piece, on_event);

  out.m1 = double(delta_eta) - comp1;
  out.m2 = out.events_m2 - comp2;
  out.m3 = out.events_m3 - comp3;
  return out;
}

double log_rn_weight_taylor(const EventLog& log, const std::vector<std::uint64_t>& eta0,
                            const SimParams& params) {
  const int n = params.grid.n_sites;
  require(int(eta0.size()) == n, Errc::invalid_argument, "taylor: initial counts size mismatch");
  const double ell = double(params.ell);
  const bool time_dep = params.perturbation.time_dependent();
  const PerturbationSpec& pert = params.perturbation;

  // Static pieces of the expansion: discrete Laplacian and the squared
  // one-sided gradients of the sampled tilt.
  auto tilt_profile = [&](double t) {
    GridFunction h(n);
    for (int k = 0; k < n; ++k) h[k] = pert.h(t, params.grid.site(k));
    return h;
  };
  auto expansion_term = [&](const std::vector<std::uint64_t>& counts, double t) {
    GridFunction h = tilt_profile(t);
    GridFunction lap = discrete_laplacian(h);
    DiscreteGradients dg = discrete_gradients(h);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      double u = double(counts[std::size_t(k)]) / ell;
      double grad2 = 0.5 * (dg.forward[k] * dg.forward[k] + dg.backward[k] * dg.backward[k]);
      acc += params.reaction.birth(u) * (1.0 - std::exp(h[k])) +
             params.reaction.death(u) * (1.0 - std::exp(-h[k])) - u * (lap[k] + grad2);
    }
    return acc / double(n);
  };
  auto density_dt_term = [&](const std::vector<std::uint64_t>& counts, double t) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
      acc += double(counts[std::size_t(k)]) / ell * pert.dt(t, params.grid.site(k));
    return acc / double(n);
  };

  double time_integral = 0.0;
  double dt_integral = 0.0;

  auto piece = [&](double t0, double t1, const std::vector<std::uint64_t>& counts) {
    if (!time_dep) {
      time_integral += (t1 - t0) * expansion_term(counts, 0.0);
    } else {
      double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
      for (int q = 0; q < 4; ++q) {
        double s = mid + half * kGlNodes[q], w = kGlWeights[q] * half;
        time_integral += w * expansion_term(counts, s);
        dt_integral += w * density_dt_term(counts, s);
      }
    }
  };

  replay(log, eta0, params.t_final, n, piece, [](const EventRecord&, const auto&) {});

  std::vector<std::uint64_t> final_counts = eta0;
  for (const EventRecord& e : log.events()) apply_event_to_counts(final_counts, e, n);

  GridFunction h0 = tilt_profile(0.0);
  GridFunction hT = tilt_profile(params.t_final);
  double boundary = 0.0;
  for (int k = 0; k < n; ++k)
    boundary += hT[k] * double(final_counts[std::size_t(k)]) / ell -
                h0[k] * double(eta0[std::size_t(k)]) / ell;
  boundary = boundary / double(n) - dt_integral;

  return -ell * double(n) * (time_integral + boundary);
}

}  // namespace hdld
