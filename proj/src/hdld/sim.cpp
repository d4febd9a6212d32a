// SPDX-License-Identifier: Apache-2.0
#include "hdld/sim.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hdld/error.hpp"

namespace hdld {

namespace {

constexpr std::uint64_t kRebuildInterval = 1u << 16;
constexpr std::uint64_t kCountCeiling = 1ULL << 62;
constexpr double kWindowFactor = 0.1;  // thinning look-ahead: 0.1/N^2

// 4-point Gauss-Legendre on [-1, 1].
constexpr double kGlNodes[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                0.8611363115940526};
constexpr double kGlWeights[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                  0.3478548451374538};

enum Channel { kJumpRight = 0, kJumpLeft = 1, kBirth = 2, kDeath = 3 };

// Mutable state of one trajectory. Rates are recomputed from scratch for any
// site an event touches; only the running sums are incremental, and a full
// rebuild every 2^16 events stops their float drift from accumulating.
class Engine {
 public:
  Engine(const SimParams& params, std::vector<std::uint64_t> eta0, Rng rng)
      : p_(params),
        n_(params.grid.n_sites),
        counts_(std::move(eta0)),
        rng_(rng),
        perturbed_(!params.perturbation.is_identically_zero()),
        time_dep_(params.perturbation.time_dependent()),
        path_(params.grid, params.ell, params.t_final, estimate_events()),
        log_(params.grid.n_sites) {
    rates_.assign(std::size_t(4 * n_), 0.0);
    site_sum_.assign(std::size_t(n_), 0.0);
    if (perturbed_ && !time_dep_) comp_site_.assign(std::size_t(n_), 0.0);
    site_x_.resize(std::size_t(n_));
    for (int k = 0; k < n_; ++k) site_x_[std::size_t(k)] = double(k) / double(n_);
  }

  SimResult run() {
    path_.record_initial(counts_);
    if (time_dep_)
      run_thinning();
    else
      run_homogeneous();
    path_.finish(counts_);
    SimResult result{std::move(path_), std::move(log_), weights_, events_};
    return result;
  }

 private:
  std::uint64_t estimate_events() const {
    // Crude expected-event count from the initial rates; decides only the
    // snapshot cadence, not correctness.
    double total = 0.0;
    for (int k = 0; k < n_; ++k) {
      double u = double(counts_[std::size_t(k)]) / double(p_.ell);
      total += 2.0 * double(n_) * double(n_) * double(counts_[std::size_t(k)]);
      total += double(p_.ell) * (p_.reaction.birth(u) + p_.reaction.death(u));
    }
    double expected = 2.0 * total * p_.t_final + 1000.0;
    return expected > 1e18 ? std::uint64_t(1) << 62 : std::uint64_t(expected);
  }

  // ---- rate evaluation -----------------------------------------------------

  double channel_rate(int k, int c, double t) const {
    const double n2 = double(n_) * double(n_);
    double u = double(counts_[std::size_t(k)]) / double(p_.ell);
    double xk = site_x_[std::size_t(k)];
    const PerturbationSpec& h = p_.perturbation;
    switch (c) {
      case kJumpRight: {
        double xp = site_x_[std::size_t((k + 1) % n_)];
        return n2 * double(counts_[std::size_t(k)]) * std::exp(h.h(t, xp) - h.h(t, xk));
      }
      case kJumpLeft: {
        double xm = site_x_[std::size_t((k + n_ - 1) % n_)];
        return n2 * double(counts_[std::size_t(k)]) * std::exp(h.h(t, xm) - h.h(t, xk));
      }
      case kBirth:
        return double(p_.ell) * p_.reaction.birth(u) * std::exp(h.h(t, xk));
      case kDeath:
        return double(p_.ell) * p_.reaction.death(u) * std::exp(-h.h(t, xk));
    }
    return 0.0;
  }

  // Write the four rates of one site from its current count and return their
  // sum. `factor` supplies the exponential tilts (static, or per-window sups).
  template <typename FactorFn>
  double site_rates_from_counts(int k, FactorFn&& factor) {
    const double n2 = double(n_) * double(n_);
    double cnt = double(counts_[std::size_t(k)]);
    double u = cnt / double(p_.ell);
    double* r = &rates_[std::size_t(4 * k)];
    r[kJumpRight] = n2 * cnt * factor(k, kJumpRight);
    r[kJumpLeft] = n2 * cnt * factor(k, kJumpLeft);
    r[kBirth] = double(p_.ell) * p_.reaction.birth(u) * factor(k, kBirth);
    r[kDeath] = double(p_.ell) * p_.reaction.death(u) * factor(k, kDeath);
    double sum = r[0] + r[1] + r[2] + r[3];
    require(std::isfinite(sum), Errc::nonfinite_rate, "simulate: non-finite rate");
    return sum;
  }

  // Incremental refresh of one site after an event; only the running total
  // picks up float drift, bounded by the periodic full rebuild.
  template <typename FactorFn>
  void refresh_site(int k, FactorFn&& factor) {
    double old = site_sum_[std::size_t(k)];
    double sum = site_rates_from_counts(k, factor);
    site_sum_[std::size_t(k)] = sum;
    total_ += sum - old;
  }

  template <typename FactorFn>
  void recompute_all(FactorFn&& factor) {
    total_ = 0.0;
    for (int k = 0; k < n_; ++k) {
      double sum = site_rates_from_counts(k, factor);
      site_sum_[std::size_t(k)] = sum;
      total_ += sum;
    }
  }

  // Per-site term of the compensator integrand lambda - lambda-bar at the
  // current counts (time-independent tilts only).
  double comp_term(int k) const {
    double u = double(counts_[std::size_t(k)]) / double(p_.ell);
    double jump = double(n_) * double(n_) * double(counts_[std::size_t(k)]) *
                  (2.0 - static_fr_[std::size_t(k)] - static_fl_[std::size_t(k)]);
    return double(p_.ell) * (p_.reaction.birth(u) * (1.0 - static_fb_[std::size_t(k)]) +
                             p_.reaction.death(u) * (1.0 - static_fd_[std::size_t(k)])) +
           jump;
  }

  void refresh_comp(int k) {
    double old = comp_site_[std::size_t(k)];
    double now = comp_term(k);
    comp_site_[std::size_t(k)] = now;
    comp_total_ += now - old;
  }

  // Compensator integrand at arbitrary time (time-dependent tilts).
  double comp_integrand(double t) const {
    const PerturbationSpec& h = p_.perturbation;
    const double n2 = double(n_) * double(n_);
    double acc = 0.0;
    for (int k = 0; k < n_; ++k) {
      double u = double(counts_[std::size_t(k)]) / double(p_.ell);
      double xk = site_x_[std::size_t(k)];
      double hk = h.h(t, xk);
      double hp = h.h(t, site_x_[std::size_t((k + 1) % n_)]);
      double hm = h.h(t, site_x_[std::size_t((k + n_ - 1) % n_)]);
      acc += double(p_.ell) * (p_.reaction.birth(u) * (1.0 - std::exp(hk)) +
                               p_.reaction.death(u) * (1.0 - std::exp(-hk)));
      acc += n2 * double(counts_[std::size_t(k)]) *
             (2.0 - std::exp(hp - hk) - std::exp(hm - hk));
    }
    return acc;
  }

  void integrate_compensator_to(double t) {
    if (!perturbed_) return;
    double a = comp_mark_, b = t;
    if (b <= a) return;
    if (!time_dep_) {
      weights_.compensator += comp_total_ * (b - a);
    } else {
      // Gauss-Legendre, panels capped at 0.05 time units for smoothness.
      int panels = std::max(1, int(std::ceil((b - a) / 0.05)));
      double w = (b - a) / panels;
      for (int pnl = 0; pnl < panels; ++pnl) {
        double mid = a + (pnl + 0.5) * w, half = 0.5 * w;
        for (int q = 0; q < 4; ++q)
          weights_.compensator += kGlWeights[q] * half * comp_integrand(mid + half * kGlNodes[q]);
      }
    }
    comp_mark_ = t;
  }

  // Event-sum term of the log weight: the log rate ratio of the executed
  // transition (original over tilted).
  double event_term(int k, int c, double t) const {
    const PerturbationSpec& h = p_.perturbation;
    double xk = site_x_[std::size_t(k)];
    switch (c) {
      case kJumpRight: return h.h(t, xk) - h.h(t, site_x_[std::size_t((k + 1) % n_)]);
      case kJumpLeft: return h.h(t, xk) - h.h(t, site_x_[std::size_t((k + n_ - 1) % n_)]);
      case kBirth: return -h.h(t, xk);
      case kDeath: return h.h(t, xk);
    }
    return 0.0;
  }

  // ---- event application ---------------------------------------------------

  void bump(int k, std::int64_t delta) {
    std::uint64_t& c = counts_[std::size_t(k)];
    if (delta > 0) {
      require(c < kCountCeiling, Errc::overflow, "simulate: site count overflow");
      ++c;
    } else {
      require(c > 0, Errc::internal, "simulate: event at an empty site");
      --c;
    }
  }

  // Applies the count change; returns the site whose count increased (used
  // for the exact online sup-norm update), or -1 for a death.
  int apply_event(int k, int c) {
    switch (c) {
      case kJumpRight: {
        int kp = (k + 1) % n_;
        bump(k, -1);
        bump(kp, +1);
        return kp;
      }
      case kJumpLeft: {
        int km = (k + n_ - 1) % n_;
        bump(k, -1);
        bump(km, +1);
        return km;
      }
      case kBirth:
        bump(k, +1);
        return k;
      case kDeath:
        bump(k, -1);
        return k;
    }
    return -1;
  }

  void note_event(double t, int k, int c) {
    ++events_;
    require(events_ <= p_.event_budget, Errc::event_budget,
            "simulate: event budget exceeded");
    if (p_.keep_event_log) log_.append(t, EventKind(c), std::uint32_t(k));
  }

  // Scan the per-site sums, then the chosen site's four channels. Float
  // residue (sum drift stays below the rebuild threshold) can push the target
  // past the table; clamp to the last positive rate in that case.
  std::pair<int, int> pick_channel(double target) const {
    for (int k = 0; k < n_; ++k) {
      double s = site_sum_[std::size_t(k)];
      if (s <= 0.0) continue;
      if (target >= s) {
        target -= s;
        continue;
      }
      for (int c = 0; c < 4; ++c) {
        double r = rates_[std::size_t(4 * k + c)];
        if (r <= 0.0) continue;
        if (target < r) return {k, c};
        target -= r;
      }
      break;
    }
    for (int k = n_ - 1; k >= 0; --k)
      for (int c = 3; c >= 0; --c)
        if (rates_[std::size_t(4 * k + c)] > 0.0) return {k, c};
    fail(Errc::internal, "simulate: channel scan found no positive rate");
  }

  void full_rebuild(double t) {
    RateTable fresh = build_rates(counts_, p_.perturbation, t, p_);
    for (std::size_t i = 0; i < fresh.rates.size(); ++i) {
      double a = rates_[i], b = fresh.rates[i];
      require(std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)), Errc::internal,
              "simulate: cached rate diverged from recomputation");
    }
    require(std::fabs(total_ - fresh.total) <= 1e-9 * std::max(1.0, std::fabs(fresh.total)),
            Errc::internal, "simulate: total rate drifted beyond tolerance");
    rates_ = std::move(fresh.rates);
    total_ = fresh.total;
    for (int k = 0; k < n_; ++k) {
      double s = 0.0;
      for (int c = 0; c < 4; ++c) s += rates_[std::size_t(4 * k + c)];
      site_sum_[std::size_t(k)] = s;
    }
    if (perturbed_ && !time_dep_) {
      comp_total_ = 0.0;
      for (int k = 0; k < n_; ++k) {
        comp_site_[std::size_t(k)] = comp_term(k);
        comp_total_ += comp_site_[std::size_t(k)];
      }
    }
  }

  // ---- homogeneous-in-time dynamics (H constant or zero) --------------------

  void build_static_factors() {
    static_fr_.resize(std::size_t(n_));
    static_fl_.resize(std::size_t(n_));
    static_fb_.resize(std::size_t(n_));
    static_fd_.resize(std::size_t(n_));
    const PerturbationSpec& h = p_.perturbation;
    for (int k = 0; k < n_; ++k) {
      double hk = h.h(0.0, site_x_[std::size_t(k)]);
      double hp = h.h(0.0, site_x_[std::size_t((k + 1) % n_)]);
      double hm = h.h(0.0, site_x_[std::size_t((k + n_ - 1) % n_)]);
      static_fr_[std::size_t(k)] = std::exp(hp - hk);
      static_fl_[std::size_t(k)] = std::exp(hm - hk);
      static_fb_[std::size_t(k)] = std::exp(hk);
      static_fd_[std::size_t(k)] = std::exp(-hk);
      require(std::isfinite(static_fr_[std::size_t(k)] + static_fl_[std::size_t(k)] +
                            static_fb_[std::size_t(k)] + static_fd_[std::size_t(k)]),
              Errc::nonfinite_rate, "simulate: non-finite tilt factor");
    }
  }

  void run_homogeneous() {
    build_static_factors();
    auto factor = [this](int k, int c) {
      switch (c) {
        case kJumpRight: return static_fr_[std::size_t(k)];
        case kJumpLeft: return static_fl_[std::size_t(k)];
        case kBirth: return static_fb_[std::size_t(k)];
        default: return static_fd_[std::size_t(k)];
      }
    };
    recompute_all(factor);
    if (perturbed_) {
      comp_total_ = 0.0;
      for (int k = 0; k < n_; ++k) {
        comp_site_[std::size_t(k)] = comp_term(k);
        comp_total_ += comp_site_[std::size_t(k)];
      }
    }

    double t = 0.0;
    std::uint64_t since_rebuild = 0;
    while (true) {
      if (total_ <= 0.0) break;
      double tau = rng_.exponential(total_);
      if (t + tau >= p_.t_final) break;
      t += tau;
      auto [k, c] = pick_channel(rng_.uniform() * total_);

      integrate_compensator_to_homogeneous(t, tau);
      if (perturbed_) weights_.event_sum += event_term(k, c, t);

      note_event(t, k, c);
      int grew = apply_event(k, c);
      refresh_site(k, factor);
      if (c == kJumpRight || c == kJumpLeft) refresh_site(grew, factor);
      if (perturbed_) {
        refresh_comp(k);
        if (c == kJumpRight || c == kJumpLeft) refresh_comp(grew);
      }
      path_.record_event(t, counts_, grew);

      if (++since_rebuild == kRebuildInterval) {
        full_rebuild(t);
        since_rebuild = 0;
      }
    }
    if (perturbed_) weights_.compensator += comp_total_ * (p_.t_final - comp_mark_);
    comp_mark_ = p_.t_final;
  }

  void integrate_compensator_to_homogeneous(double t, double tau) {
    if (!perturbed_) return;
    weights_.compensator += comp_total_ * tau;
    comp_mark_ = t;
  }

  // ---- time-dependent dynamics via thinning --------------------------------

  void build_window_factors(double t0, double t1) {
    win_fr_.resize(std::size_t(n_));
    win_fl_.resize(std::size_t(n_));
    win_fb_.resize(std::size_t(n_));
    win_fd_.resize(std::size_t(n_));
    const PerturbationSpec& h = p_.perturbation;
    auto [g_lo, g_hi] = h.g_range(t0, t1);
    double a = h.amplitude();
    double two_pi_m = 2.0 * 3.14159265358979323846 * h.spatial_mode();
    // H(t,x) = a g(t) s(x): sup over the window of c g(t) is attained at an
    // endpoint of [g_lo, g_hi].
    auto sup_exp = [&](double c) { return std::exp(std::max(c * g_lo, c * g_hi)); };
    for (int k = 0; k < n_; ++k) {
      double sk = std::sin(two_pi_m * site_x_[std::size_t(k)]);
      double sp = std::sin(two_pi_m * site_x_[std::size_t((k + 1) % n_)]);
      double sm = std::sin(two_pi_m * site_x_[std::size_t((k + n_ - 1) % n_)]);
      win_fr_[std::size_t(k)] = sup_exp(a * (sp - sk));
      win_fl_[std::size_t(k)] = sup_exp(a * (sm - sk));
      win_fb_[std::size_t(k)] = sup_exp(a * sk);
      win_fd_[std::size_t(k)] = sup_exp(-a * sk);
    }
  }

  void run_thinning() {
    const double window = kWindowFactor / (double(n_) * double(n_));
    auto factor = [this](int k, int c) {
      switch (c) {
        case kJumpRight: return win_fr_[std::size_t(k)];
        case kJumpLeft: return win_fl_[std::size_t(k)];
        case kBirth: return win_fb_[std::size_t(k)];
        default: return win_fd_[std::size_t(k)];
      }
    };

    double t = 0.0;
    std::uint64_t since_rebuild = 0;
    while (t < p_.t_final) {
      double w_end = std::min(t + window, p_.t_final);
      build_window_factors(t, w_end);
      recompute_all(factor);

      while (t < w_end) {
        if (total_ <= 0.0) {
          t = w_end;
          break;
        }
        double tau = rng_.exponential(total_);
        if (t + tau >= w_end) {
          t = w_end;
          break;
        }
        t += tau;
        auto [k, c] = pick_channel(rng_.uniform() * total_);
        double dominating = rates_[std::size_t(4 * k + c)];
        double actual = channel_rate(k, c, t);
        require(actual <= dominating * (1.0 + 1e-9), Errc::internal,
                "simulate: dominating rate violated");
        if (rng_.uniform() * dominating > actual) continue;  // rejected candidate

        integrate_compensator_to(t);
        weights_.event_sum += event_term(k, c, t);

        note_event(t, k, c);
        int grew = apply_event(k, c);
        refresh_site(k, factor);
        if (c == kJumpRight || c == kJumpLeft) refresh_site(grew, factor);
        path_.record_event(t, counts_, grew);

        if (++since_rebuild == kRebuildInterval) {
          double old_total = total_;
          recompute_all(factor);
          require(std::fabs(old_total - total_) <= 1e-9 * std::max(1.0, std::fabs(total_)),
                  Errc::internal, "simulate: dominating total drifted beyond tolerance");
          since_rebuild = 0;
        }
      }
    }
    integrate_compensator_to(p_.t_final);
  }

  const SimParams& p_;
  int n_;
  std::vector<std::uint64_t> counts_;
  Rng rng_;
  bool perturbed_;
  bool time_dep_;
  DensityPath path_;
  EventLog log_;
  WeightAccumulator weights_;

  std::vector<double> rates_, site_sum_;
  double total_ = 0.0;
  std::vector<double> site_x_;

  std::vector<double> static_fr_, static_fl_, static_fb_, static_fd_;
  std::vector<double> win_fr_, win_fl_, win_fb_, win_fd_;

  std::vector<double> comp_site_;
  double comp_total_ = 0.0;
  double comp_mark_ = 0.0;

  std::uint64_t events_ = 0;
};

}  // namespace

std::vector<std::uint64_t> initial_counts(const TorusGridSpec& grid, const InitialProfile& initial,
                                          std::uint64_t ell) {
  grid.validate();
  std::vector<std::uint64_t> counts(std::size_t(grid.n_sites), 0);
  for (int k = 0; k < grid.n_sites; ++k)
    counts[std::size_t(k)] = std::uint64_t(std::floor(double(ell) * initial(grid.site(k))));
  return counts;
}

RateTable build_rates(const std::vector<std::uint64_t>& counts, const PerturbationSpec& h,
                      double t, const SimParams& params) {
  const int n = params.grid.n_sites;
  require(counts.size() == std::size_t(n), Errc::invalid_argument, "build_rates: size mismatch");
  const double n2 = double(n) * double(n);
  RateTable table;
  table.rates.assign(std::size_t(4 * n), 0.0);
  for (int k = 0; k < n; ++k) {
    double xk = double(k) / n;
    double xp = double((k + 1) % n) / n;
    double xm = double((k + n - 1) % n) / n;
    double cnt = double(counts[std::size_t(k)]);
    double u = cnt / double(params.ell);
    double hk = h.h(t, xk);
    double* r = &table.rates[std::size_t(4 * k)];
    r[kJumpRight] = n2 * cnt * std::exp(h.h(t, xp) - hk);
    r[kJumpLeft] = n2 * cnt * std::exp(h.h(t, xm) - hk);
    r[kBirth] = double(params.ell) * params.reaction.birth(u) * std::exp(hk);
    r[kDeath] = double(params.ell) * params.reaction.death(u) * std::exp(-hk);
    for (int c = 0; c < 4; ++c) {
      require(std::isfinite(r[c]), Errc::nonfinite_rate, "build_rates: non-finite rate");
      table.total += r[c];
    }
  }
  return table;
}

SimResult simulate(const SimParams& params, const std::vector<std::uint64_t>& eta0, Rng rng) {
  params.grid.validate();
  require(params.ell >= 1, Errc::config, "simulate: l must be >= 1");
  require(params.t_final > 0.0 && std::isfinite(params.t_final), Errc::config,
          "simulate: t_final must be positive");
  require(eta0.size() == std::size_t(params.grid.n_sites), Errc::invalid_argument,
          "simulate: initial counts size mismatch");
  Engine engine(params, eta0, rng);
  return engine.run();
}

SimResult simulate(const SimParams& params, const InitialProfile& initial, std::uint64_t seed,
                   std::uint64_t replica) {
  return simulate(params, initial_counts(params.grid, initial, params.ell), Rng(seed, replica));
}

}  // namespace hdld
