// SPDX-License-Identifier: Apache-2.0
#include "hdld/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "hdld/config.hpp"
#include "hdld/csv.hpp"
#include "hdld/elliptic.hpp"
#include "hdld/error.hpp"
#include "hdld/importance.hpp"
#include "hdld/martingale.hpp"
#include "hdld/pde.hpp"
#include "hdld/pool.hpp"
#include "hdld/rate.hpp"
#include "hdld/sim.hpp"
#include "hdld/spectral.hpp"
#include "hdld/version.hpp"

namespace hdld {

bool SuiteReport::passed() const {
  for (const SuiteCheck& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string SuiteReport::summary() const {
  std::ostringstream out;
  out << (passed() ? "PASS" : "FAIL") << " " << suite;
  for (const SuiteCheck& c : checks)
    out << " | " << c.name << (c.passed ? " ok" : " FAILED") << " (" << c.detail << ")";
  return out.str();
}

namespace {

std::string fmt(double v) { return format_double(v); }

SuiteCheck make_check(std::string name, bool passed, std::string detail) {
  return SuiteCheck{std::move(name), passed, std::move(detail)};
}

// CSV artifact with the standard traceability trailer.
void emit_csv(SuiteReport& report, const SuiteOptions& opts, CsvWriter& csv,
              const std::string& filename, const std::string& params_text) {
  if (opts.out_dir.empty()) return;
  std::filesystem::create_directories(opts.out_dir);
  csv.add_comment("seed=" + std::to_string(opts.seed));
  csv.add_comment(std::string("git-describe=") + HDLD_GIT_DESCRIBE);
  csv.add_comment("config-hash=" + text_hash(params_text));
  std::string path = opts.out_dir + "/" + filename;
  csv.write_file(path);
  report.artifacts.push_back(path);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

double percentile_of(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  auto idx = std::size_t(std::llround(p * double(v.size() - 1)));
  return v[std::min(idx, v.size() - 1)];
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  double n = double(v.size());
  double sum = 0.0, sq = 0.0;
  for (double x : v) {
    sum += x;
    sq += x * x;
  }
  MeanSe out;
  out.mean = sum / n;
  double var = std::max(0.0, (sq - sum * sum / n) / (n - 1.0));
  out.se = std::sqrt(var / n);
  return out;
}

int default_replicas(const SuiteOptions& opts, int fallback) {
  return opts.replicas > 0 ? opts.replicas : fallback;
}

// Sup distance between a recorded path and a deterministic same-grid solution
// at the path's snapshot times.
double sup_error_vs_solution(const DensityPath& path, const SolutionPath& target) {
  double sup = 0.0;
  const int n = path.grid().n_sites;
  for (std::size_t i = 0; i < path.snapshot_count(); ++i) {
    GridFunction psi = target.at_time(path.snapshot_time(i));
    const GridFunction& x = path.snapshot(i);
    for (int k = 0; k < n; ++k) sup = std::max(sup, std::fabs(x[k] - psi[k]));
  }
  return sup;
}

}  // namespace

// ---------------------------------------------------------------------------
// Deterministic scheme: error against the fine reference, certified bound,
// and the observed convergence order.

SuiteReport run_scheme_order_suite(const SuiteOptions& opts) {
  SuiteReport report{"scheme-order", {}, {}};

  SemiDiscreteProblem base;
  base.grid = TorusGridSpec{16};
  base.reaction.birth = ReactionFn::logistic(1.0, 1.0);
  base.reaction.death = ReactionFn::linear(0.5);
  base.perturbation = PerturbationSpec::sine(0.4, 1);
  base.initial = InitialProfile::smooth(0.5, 0.25);
  base.t_final = 0.5;
  validate_reaction(base.reaction);

  ReferenceSolution reference(base.with_grid(256), 8);
  SchemeConstant constant = estimate_scheme_constant(base, reference);

  std::vector<int> n_values{16, 32, 64, 128, 256};
  SchemeErrorStudy study = scheme_error_study(base, n_values, reference, constant.c_star);

  bool bounds_ok = true;
  std::ostringstream rows;
  for (const SchemeErrorRow& row : study.rows) {
    bounds_ok = bounds_ok && row.within_bound && row.above_threshold;
    rows << " N=" << row.n << " err=" << fmt(row.error) << " bound=" << fmt(row.bound);
  }
  report.checks.push_back(make_check(
      "per_n_bound", bounds_ok,
      "exp((3C*+1)T)/N with C*=" + fmt(study.c_star) + ";" + rows.str()));

  const double kOrderLo = 0.9, kOrderHi = 1.3;
  bool order_ok = study.order_fitted && study.fitted_order >= kOrderLo &&
                  study.fitted_order <= kOrderHi;
  report.checks.push_back(make_check(
      "order_band", order_ok,
      "fitted order " + fmt(study.fitted_order) + " vs [" + fmt(kOrderLo) + ", " +
          fmt(kOrderHi) + "]"));

  CsvWriter csv({"n", "sup_error", "bound", "within_bound"});
  for (const SchemeErrorRow& row : study.rows)
    csv.add_row({double(row.n), row.error, row.bound, row.within_bound ? 1.0 : 0.0});
  emit_csv(report, opts, csv, "scheme_order.csv",
           "scheme-order N={16..256} T=0.5 logistic/linear sine(0.4,1) smooth(0.5,0.25)");
  return report;
}

// ---------------------------------------------------------------------------
// Heat semigroup against the dense matrix exponential, plus basis invariants.

SuiteReport run_semigroup_suite(const SuiteOptions& opts) {
  SuiteReport report{"semigroup", {}, {}};

  double worst_dense = 0.0;
  for (int n = 3; n <= 8; ++n) {
    TorusGridSpec grid{n};
    SpectralBasis basis(grid);
    std::vector<GridFunction> probes;
    GridFunction delta(n);
    delta[0] = 1.0;
    probes.push_back(delta);
    GridFunction ramp(n);
    for (int k = 0; k < n; ++k) ramp[k] = double(k) / n;
    probes.push_back(ramp);
    Rng rng(opts.seed, std::uint64_t(n));
    GridFunction noise(n);
    for (int k = 0; k < n; ++k) noise[k] = rng.uniform() - 0.5;
    probes.push_back(noise);

    for (double t : {0.0, 0.01, 0.1, 1.0}) {
      auto dense = semigroup_matrix_oracle(grid, t);
      for (const GridFunction& g : probes) {
        GridFunction fast = semigroup_apply(basis, t, g);
        for (int i = 0; i < n; ++i) {
          double acc = 0.0;
          for (int j = 0; j < n; ++j) acc += dense[std::size_t(i)][std::size_t(j)] * g[j];
          worst_dense = std::max(worst_dense, std::fabs(fast[i] - acc));
        }
      }
    }
  }
  const double kDenseTol = 1e-10;
  report.checks.push_back(make_check("dense_match", worst_dense <= kDenseTol,
                                     "max |semigroup - expm| = " + fmt(worst_dense) +
                                         " tol " + fmt(kDenseTol)));

  double worst_orth = 0.0, worst_eigen = 0.0, worst_complete = 0.0, worst_law = 0.0,
         worst_contract = 0.0, worst_commute = 0.0;
  bool counts_ok = true;
  for (int n : {2, 3, 4, 5, 6, 7, 8, 12, 16, 31, 32, 64, 100, 128, 256}) {
    TorusGridSpec grid{n};
    SpectralBasis basis(grid);
    counts_ok = counts_ok && int(basis.size()) == n;

    for (std::size_t i = 0; i < basis.size(); ++i) {
      for (std::size_t j = i; j < basis.size(); ++j) {
        double dot = inner_product(basis.mode(i).vec, basis.mode(j).vec);
        worst_orth = std::max(worst_orth, std::fabs(dot - (i == j ? 1.0 : 0.0)));
      }
      GridFunction lap = discrete_laplacian(basis.mode(i).vec);
      double beta = basis.mode(i).beta;
      for (int k = 0; k < n; ++k)
        worst_eigen =
            std::max(worst_eigen, std::fabs(lap[k] + beta * basis.mode(i).vec[k]) /
                                      (double(n) * double(n)));
    }

    Rng rng(opts.seed ^ 0x5eedu, std::uint64_t(n));
    GridFunction g(n);
    for (int k = 0; k < n; ++k) g[k] = 2.0 * rng.uniform() - 1.0;
    GridFunction back = basis.synthesize(basis.analyze(g));
    for (int k = 0; k < n; ++k)
      worst_complete = std::max(worst_complete, std::fabs(back[k] - g[k]));

    GridFunction two_step = semigroup_apply(basis, 0.03, semigroup_apply(basis, 0.04, g));
    GridFunction one_step = semigroup_apply(basis, 0.07, g);
    for (int k = 0; k < n; ++k)
      worst_law = std::max(worst_law, std::fabs(two_step[k] - one_step[k]));

    worst_contract = std::max(worst_contract,
                              semigroup_apply(basis, 0.1, g).l2() - g.l2());

    GridFunction lap_then_flow = semigroup_apply(basis, 0.1, discrete_laplacian(g));
    GridFunction flow_then_lap = discrete_laplacian(semigroup_apply(basis, 0.1, g));
    for (int k = 0; k < n; ++k)
      worst_commute = std::max(worst_commute,
                               std::fabs(lap_then_flow[k] - flow_then_lap[k]) /
                                   (double(n) * double(n)));
  }
  bool invariants_ok = counts_ok && worst_orth <= 1e-12 && worst_eigen <= 1e-9 &&
                       worst_complete <= 1e-12 && worst_law <= 1e-10 &&
                       worst_contract <= 1e-12 && worst_commute <= 1e-12;
  report.checks.push_back(
      make_check("basis_invariants", invariants_ok,
                 "orth=" + fmt(worst_orth) + " eigen/N^2=" + fmt(worst_eigen) +
                     " roundtrip=" + fmt(worst_complete) + " law=" + fmt(worst_law) +
                     " contraction_excess=" + fmt(worst_contract) +
                     " commutation/N^2=" + fmt(worst_commute)));

  CsvWriter csv({"worst_dense", "worst_orth", "worst_eigen_scaled", "worst_roundtrip",
                 "worst_law", "worst_contraction_excess", "worst_commutation_scaled"});
  csv.add_row({worst_dense, worst_orth, worst_eigen, worst_complete, worst_law, worst_contract,
               worst_commute});
  emit_csv(report, opts, csv, "semigroup.csv", "semigroup N=3..8 t={0,0.01,0.1,1} + invariants");
  return report;
}

// ---------------------------------------------------------------------------
// Mean-zero checks for the compensated processes.

SuiteReport run_martingale_suite(const SuiteOptions& opts) {
  SuiteReport report{"martingale", {}, {}};
  const int replicas = default_replicas(opts, 2000);

  SimParams params;
  params.grid = TorusGridSpec{8};
  params.ell = 16;
  params.reaction.birth = ReactionFn::affine(0.4, 0.1);
  params.reaction.death = ReactionFn::linear(0.5);
  params.perturbation = PerturbationSpec::sine(0.3, 1);
  params.t_final = 0.25;
  params.keep_event_log = true;
  validate_reaction(params.reaction);
  InitialProfile initial = InitialProfile::constant(1.0);

  const int n = params.grid.n_sites;
  auto z_terminal = std::vector<std::vector<double>>(std::size_t(replicas));
  std::vector<double> biases(std::size_t(replicas), 0.0);

  parallel_for(replicas, opts.threads, [&](int i) {
    std::vector<std::uint64_t> eta0 = initial_counts(params.grid, initial, params.ell);
    SimResult run = simulate(params, eta0, Rng(opts.seed, std::uint64_t(i)));
    DynkinExtraction dyn = extract_dynkin_martingale(run.log, eta0, params);
    std::vector<double> z(std::size_t(n), 0.0);
    for (int k = 0; k < n; ++k) z[std::size_t(k)] = dyn.values.back()[k];
    z_terminal[std::size_t(i)] = std::move(z);
    biases[std::size_t(i)] = dyn.bias_bound;
  });

  double bias = *std::max_element(biases.begin(), biases.end());
  int sites_ok = 0;
  CsvWriter site_csv({"site", "mean", "se", "bias", "passed"});
  std::ostringstream site_detail;
  for (int k = 0; k < n; ++k) {
    std::vector<double> zs(std::size_t(replicas), 0.0);
    for (int i = 0; i < replicas; ++i) zs[std::size_t(i)] = z_terminal[std::size_t(i)][std::size_t(k)];
    MeanSe st = mean_se(zs);
    bool ok = std::fabs(st.mean) <= 4.0 * st.se + bias;
    sites_ok += ok ? 1 : 0;
    site_csv.add_row({double(k), st.mean, st.se, bias, ok ? 1.0 : 0.0});
    if (k < 3) site_detail << " k" << k << ": |" << fmt(st.mean) << "| vs " << fmt(4.0 * st.se + bias) << ";";
  }
  int needed = int(std::ceil(0.95 * n));
  report.checks.push_back(make_check(
      "dynkin_mean_zero", sites_ok >= needed,
      std::to_string(sites_ok) + "/" + std::to_string(n) + " sites within 4se+bias (need " +
          std::to_string(needed) + "); bias=" + fmt(bias) + ";" + site_detail.str()));
  emit_csv(report, opts, site_csv, "dynkin_sites.csv",
           "martingale dynkin N=8 l=16 T=0.25 affine/linear sine(0.3,1)");

  // Quadratic compensated processes on the small grid.
  SimParams qparams = params;
  qparams.grid = TorusGridSpec{4};
  qparams.ell = 4;
  const int site = 1;
  std::vector<double> m1(std::size_t(replicas), 0.0), m2(std::size_t(replicas), 0.0),
      m3(std::size_t(replicas), 0.0);
  parallel_for(replicas, opts.threads, [&](int i) {
    std::vector<std::uint64_t> eta0 = initial_counts(qparams.grid, initial, qparams.ell);
    SimResult run = simulate(qparams, eta0, Rng(opts.seed ^ 0x9e37u, std::uint64_t(i)));
    QuadraticMartingales q = extract_quadratic_martingales(run.log, eta0, qparams, site);
    m1[std::size_t(i)] = q.m1;
    m2[std::size_t(i)] = q.m2;
    m3[std::size_t(i)] = q.m3;
  });
  MeanSe s1 = mean_se(m1), s2 = mean_se(m2), s3 = mean_se(m3);
  bool quad_ok = std::fabs(s1.mean) <= 4.0 * s1.se && std::fabs(s2.mean) <= 4.0 * s2.se &&
                 std::fabs(s3.mean) <= 4.0 * s3.se;
  report.checks.push_back(make_check(
      "quadratic_mean_zero", quad_ok,
      "m1 " + fmt(s1.mean) + "+-" + fmt(s1.se) + ", m2 " + fmt(s2.mean) + "+-" + fmt(s2.se) +
          ", m3 " + fmt(s3.mean) + "+-" + fmt(s3.se) + " (4se each)"));

  CsvWriter quad_csv({"martingale", "mean", "se"});
  quad_csv.add_row({1.0, s1.mean, s1.se});
  quad_csv.add_row({2.0, s2.mean, s2.se});
  quad_csv.add_row({3.0, s3.mean, s3.se});
  emit_csv(report, opts, quad_csv, "quadratic_martingales.csv",
           "martingale quadratic N=4 l=4 T=0.25 site=1");
  return report;
}

// ---------------------------------------------------------------------------
// Radon-Nikodym weights: normalization and the Taylor-form gap decay.

SuiteReport run_weights_suite(const SuiteOptions& opts) {
  SuiteReport report{"weights", {}, {}};
  const int replicas = default_replicas(opts, 10000);

  SimParams params;
  params.grid = TorusGridSpec{4};
  params.ell = 8;
  params.reaction.birth = ReactionFn::constant(0.5);
  params.reaction.death = ReactionFn::linear(0.5);
  params.perturbation = PerturbationSpec::sine(0.1, 1);
  params.t_final = 0.1;
  params.keep_event_log = false;
  validate_reaction(params.reaction);
  InitialProfile initial = InitialProfile::constant(1.0);

  std::vector<double> weights(std::size_t(replicas), 0.0);
  parallel_for(replicas, opts.threads, [&](int i) {
    SimResult run = simulate(params, initial, opts.seed, std::uint64_t(i));
    weights[std::size_t(i)] = std::exp(run.weights.log_weight());
  });
  MeanSe st = mean_se(weights);
  bool mean_ok = std::fabs(st.mean - 1.0) <= 3.0 * st.se;
  report.checks.push_back(make_check(
      "mean_weight_one", mean_ok,
      "mean=" + fmt(st.mean) + " se=" + fmt(st.se) + " |mean-1| vs 3se=" + fmt(3.0 * st.se)));

  // Exact vs second-order expansion, per unit of l N, halving N twice.
  const int gap_replicas = 200;
  std::vector<int> n_values{4, 8, 16};
  std::vector<double> gaps;
  CsvWriter gap_csv({"n", "mean_gap_per_ln"});
  for (int nv : n_values) {
    SimParams g = params;
    g.grid = TorusGridSpec{nv};
    g.keep_event_log = true;
    std::vector<double> gap(std::size_t(gap_replicas), 0.0);
    parallel_for(gap_replicas, opts.threads, [&](int i) {
      std::vector<std::uint64_t> eta0 = initial_counts(g.grid, initial, g.ell);
      SimResult run = simulate(g, eta0, Rng(opts.seed ^ 0x77u, std::uint64_t(i)));
      double exact = run.weights.log_weight();
      double taylor = log_rn_weight_taylor(run.log, eta0, g);
      gap[std::size_t(i)] = std::fabs(exact - taylor) / (double(g.ell) * double(nv));
    });
    gaps.push_back(mean_se(gap).mean);
    gap_csv.add_row({double(nv), gaps.back()});
  }
  bool decay_ok = gaps[1] <= 0.6 * gaps[0] && gaps[2] <= 0.6 * gaps[1];
  report.checks.push_back(make_check(
      "taylor_gap_decay", decay_ok,
      "gap/lN at N=4,8,16: " + fmt(gaps[0]) + ", " + fmt(gaps[1]) + ", " + fmt(gaps[2]) +
          " (each step must drop below 0.6x)"));
  emit_csv(report, opts, gap_csv, "weight_gap.csv", "weights gap N={4,8,16} l=8 T=0.1 sine(0.1,1)");
  return report;
}

// ---------------------------------------------------------------------------
// Hydrodynamic convergence: sup error against the same-grid deterministic
// solution shrinks as N grows with l = N^2.

SuiteReport run_lln_suite(const SuiteOptions& opts, bool perturbed) {
  SuiteReport report{perturbed ? "lln-perturbed" : "lln", {}, {}};
  const int replicas = default_replicas(opts, 20);

  PerturbationSpec tilt =
      perturbed ? PerturbationSpec::sine(0.5, 1) : PerturbationSpec::zero();
  ReactionSpec reaction;
  reaction.birth = ReactionFn::logistic(1.0, 1.0);
  reaction.death = ReactionFn::linear(0.5);
  validate_reaction(reaction);
  InitialProfile initial = InitialProfile::smooth(0.5, 0.25);
  const double t_final = 0.25;
  ScalingLaw law = ScalingLaw::power(2.0);

  if (perturbed) {
    StrengthReport strength = validate_perturbation_strength(tilt, law, t_final);
    report.checks.push_back(make_check(
        "tilt_admissible", strength.admissible,
        "|dxH|=" + fmt(strength.sup_dx) + " bound=" + fmt(strength.bound) + " " + strength.note));
  }

  std::vector<int> n_values{8, 16, 32};
  std::vector<std::vector<double>> errors(n_values.size());
  CsvWriter csv({"n", "replica", "sup_error"});

  for (std::size_t ni = 0; ni < n_values.size(); ++ni) {
    int nv = n_values[ni];
    TorusGridSpec grid{nv};
    SimParams params;
    params.grid = grid;
    params.ell = resolve_scaling(law, grid);
    params.reaction = reaction;
    params.perturbation = tilt;
    params.t_final = t_final;
    params.keep_event_log = false;

    SemiDiscreteProblem problem{grid, reaction, tilt, initial, t_final};
    SolutionPath target = solve_semidiscrete_rk(problem);

    errors[ni].assign(std::size_t(replicas), 0.0);
    parallel_for(replicas, opts.threads, [&](int i) {
      SimResult run = simulate(params, initial, opts.seed, std::uint64_t(i));
      errors[ni][std::size_t(i)] = sup_error_vs_solution(run.path, target);
    });
    for (int i = 0; i < replicas; ++i)
      csv.add_row({double(nv), double(i), errors[ni][std::size_t(i)]});
  }

  double med8 = median_of(errors[0]), med16 = median_of(errors[1]), med32 = median_of(errors[2]);
  bool median_ok = med8 > med16 && med16 > med32;
  report.checks.push_back(make_check(
      "median_decreases", median_ok,
      "median sup-error N=8,16,32: " + fmt(med8) + " > " + fmt(med16) + " > " + fmt(med32)));

  int wins = 0;
  for (int i = 0; i < replicas; ++i)
    if (errors[2][std::size_t(i)] < errors[0][std::size_t(i)]) ++wins;
  bool wins_ok = wins >= int(std::ceil(0.8 * replicas));
  report.checks.push_back(make_check(
      "paired_seed_wins", wins_ok,
      std::to_string(wins) + "/" + std::to_string(replicas) + " seeds improve from N=8 to N=32"));

  emit_csv(report, opts, csv, perturbed ? "lln_perturbed.csv" : "lln.csv",
           std::string("lln N={8,16,32} l=N^2 T=0.25 ") + (perturbed ? "sine(0.5,1)" : "zero"));
  return report;
}

// ---------------------------------------------------------------------------
// Action functionals: J on the tilt-optimal path matches the closed form, the
// zero tilt gives zero, and variational probes never exceed it.

SuiteReport run_rate_identity_suite(const SuiteOptions& opts) {
  SuiteReport report{"rate", {}, {}};

  ReactionSpec reaction;
  reaction.birth = ReactionFn::logistic(1.0, 1.0);
  reaction.death = ReactionFn::linear(0.5);
  validate_reaction(reaction);
  InitialProfile initial = InitialProfile::smooth(0.5, 0.25);
  const double t_final = 0.25;

  std::vector<std::pair<std::string, PerturbationSpec>> tilts = {
      {"sine(0.5,1,const)", PerturbationSpec::sine(0.5, 1)},
      {"sine(0.3,2,cos)",
       PerturbationSpec::sine(0.3, 2, PerturbationSpec::Temporal::cosine, 3.14159265358979323846)},
  };

  CsvWriter csv({"tilt", "j_value", "i_value", "rel_gap", "max_probe_excess"});
  bool identity_ok = true, probes_ok = true;
  std::ostringstream detail;

  for (std::size_t ti = 0; ti < tilts.size(); ++ti) {
    const PerturbationSpec& pert = tilts[ti].second;
    SemiDiscreteProblem problem{TorusGridSpec{128}, reaction, pert, initial, t_final};
    ReferenceSolution psi(problem, 8);
    auto u = [&psi](double t, double x) { return psi.value(t, x); };

    TiltField tilt = tilt_from_perturbation(pert);
    double j = j_functional(tilt, u, reaction, t_final);
    double i_closed = rate_closed_form(tilt, u, reaction, t_final);
    double rel = std::fabs(j - i_closed) / std::max(1e-12, std::fabs(i_closed));
    identity_ok = identity_ok && rel <= 1e-3;

    double max_excess = -1e300;
    for (const ProbeResult& probe : rate_variational_probes(tilt, u, reaction, t_final))
      max_excess = std::max(max_excess, probe.value - j);
    probes_ok = probes_ok && max_excess <= 1e-3;

    csv.add_row({double(ti), j, i_closed, rel, max_excess});
    detail << " " << tilts[ti].first << ": J=" << fmt(j) << " I=" << fmt(i_closed)
           << " rel=" << fmt(rel) << " probe_excess=" << fmt(max_excess) << ";";
  }

  report.checks.push_back(
      make_check("j_matches_rate", identity_ok, "rel tol 1e-3;" + detail.str()));
  report.checks.push_back(
      make_check("probes_below_optimum", probes_ok, "max J_G - J <= 1e-3;" + detail.str()));

  SemiDiscreteProblem flat{TorusGridSpec{64}, reaction, PerturbationSpec::zero(), initial,
                           t_final};
  ReferenceSolution psi0(flat, 8);
  double j0 = j_functional(zero_tilt(), [&psi0](double t, double x) { return psi0.value(t, x); },
                           reaction, t_final);
  report.checks.push_back(
      make_check("zero_tilt_zero_cost", std::fabs(j0) <= 1e-12, "J_0 = " + fmt(j0)));

  emit_csv(report, opts, csv, "rate_identity.csv", "rate identities two tilts T=0.25");
  return report;
}

// ---------------------------------------------------------------------------
// Tilt inversion round trip and its second-order convergence in the number of
// inversion points.

SuiteReport run_invert_tilt_suite(const SuiteOptions& opts) {
  SuiteReport report{"invert-h", {}, {}};

  ReactionSpec reaction;
  reaction.birth = ReactionFn::logistic(1.0, 1.0);
  reaction.death = ReactionFn::linear(0.5);
  validate_reaction(reaction);
  PerturbationSpec truth = PerturbationSpec::sine(0.4, 1);
  SemiDiscreteProblem problem{TorusGridSpec{256}, reaction, truth,
                              InitialProfile::smooth(0.5, 0.25), 0.2};
  ReferenceSolution reference(problem, 8);
  ReferenceSolution::Slice slice = reference.slice(0.1);

  double err256 = 0.0, err512 = 0.0;
  CsvWriter csv({"points", "sup_error", "iterations", "residual"});
  for (int m : {256, 512}) {
    EllipticSlice data = sample_slice(slice, m);
    EllipticResult res = invert_tilt(data, reaction);
    double err = 0.0;
    for (int i = 0; i < m; ++i)
      err = std::max(err, std::fabs(res.h[i] - truth.h(0.1, double(i) / m)));
    (m == 256 ? err256 : err512) = err;
    csv.add_row({double(m), err, double(res.iterations), res.residual});
  }

  report.checks.push_back(make_check("round_trip_accuracy", err512 <= 1e-3,
                                     "sup|H - truth| at 512 points = " + fmt(err512)));
  bool order_ok = err512 > 0.0 && err256 / err512 >= 3.0;
  report.checks.push_back(make_check(
      "second_order_in_points", order_ok,
      "error ratio 256->512 = " + fmt(err256 / std::max(err512, 1e-300)) + " (need >= 3)"));

  // Constant profile: the balance has the closed-form solution.
  ReactionSpec flat;
  flat.birth = ReactionFn::constant(0.5);
  flat.death = ReactionFn::linear(1.0);
  validate_reaction(flat);
  const int m = 64;
  EllipticSlice constant_slice;
  constant_slice.psi.assign(m, 1.0);
  constant_slice.dx.assign(m, 0.0);
  constant_slice.dxx.assign(m, 0.0);
  constant_slice.dt.assign(m, 0.0);
  EllipticResult res = invert_tilt(constant_slice, flat);
  double target = constant_tilt_closed_form(1.0, flat);
  double cerr = 0.0;
  for (int i = 0; i < m; ++i) cerr = std::max(cerr, std::fabs(res.h[i] - target));
  report.checks.push_back(make_check("constant_closed_form", cerr <= 1e-10,
                                     "sup|H - 0.5 log(d/b)| = " + fmt(cerr)));

  emit_csv(report, opts, csv, "invert_tilt.csv", "invert-h sine(0.4,1) slice t=0.1 M={256,512}");
  return report;
}

// ---------------------------------------------------------------------------
// Importance sampling: the per-site entropy of the tilted run converges to
// the closed-form rate of its optimal path.

SuiteReport run_importance_suite(const SuiteOptions& opts) {
  SuiteReport report{"is-estimate", {}, {}};
  const int replicas = default_replicas(opts, 2000);

  SimParams params;
  params.grid = TorusGridSpec{16};
  params.ell = 64;
  params.reaction.birth = ReactionFn::linear(0.5);
  params.reaction.death = ReactionFn::linear(1.0);
  params.perturbation = PerturbationSpec::sine(0.35, 1);
  params.t_final = 0.25;
  validate_reaction(params.reaction);
  InitialProfile initial = InitialProfile::constant(1.0);
  const double delta = 0.6;

  SemiDiscreteProblem problem{params.grid, params.reaction, params.perturbation, initial,
                              params.t_final};
  ReferenceSolution psi(problem.with_grid(64), 8);
  auto target = [&psi](double t, double x) { return psi.value(t, x); };

  ImportanceEstimate est =
      importance_estimate(params, initial, target, delta, replicas, opts.seed, opts.threads);

  TiltField tilt = tilt_from_perturbation(params.perturbation);
  double i_closed = rate_closed_form(tilt, target, params.reaction, params.t_final);
  double tol = std::max(0.15 * i_closed, 0.02);

  report.checks.push_back(make_check(
      "tube_hits", !est.zero_hits && est.in_tube >= replicas / 3,
      std::to_string(est.in_tube) + "/" + std::to_string(replicas) + " replicas in the tube"));
  report.checks.push_back(make_check(
      "entropy_matches_rate", std::fabs(est.entropy - i_closed) <= tol,
      "entropy=" + fmt(est.entropy) + " rate=" + fmt(i_closed) + " tol=" + fmt(tol)));

  CsvWriter csv({"replica", "log_weight", "sup_distance", "in_tube"});
  for (const ReplicaWeight& row : est.details)
    csv.add_row({double(row.replica), row.log_weight, row.sup_distance, row.in_tube ? 1.0 : 0.0});
  csv.add_comment("p_hat=" + fmt(est.p_hat) + " se=" + fmt(est.standard_error) +
                  " cost=" + fmt(est.cost) + " entropy=" + fmt(est.entropy));
  emit_csv(report, opts, csv, "importance.csv",
           "is-estimate N=16 l=64 T=0.25 sine(0.35,1) delta=0.6");
  return report;
}

// ---------------------------------------------------------------------------
// Concentration: with N fixed, growing l pushes the sup-error tail down.

SuiteReport run_concentration_suite(const SuiteOptions& opts) {
  SuiteReport report{"concentration", {}, {}};
  const int replicas = default_replicas(opts, 300);

  TorusGridSpec grid{8};
  ReactionSpec reaction;
  reaction.birth = ReactionFn::logistic(1.0, 1.0);
  reaction.death = ReactionFn::linear(0.5);
  validate_reaction(reaction);
  InitialProfile initial = InitialProfile::smooth(0.5, 0.25);
  const double t_final = 0.25;

  SemiDiscreteProblem problem{grid, reaction, PerturbationSpec::zero(), initial, t_final};
  SolutionPath target = solve_semidiscrete_rk(problem);

  std::vector<std::uint64_t> ells{8, 32, 128};
  std::vector<std::vector<double>> errors(ells.size());
  CsvWriter csv({"ell", "replica", "sup_error"});

  for (std::size_t li = 0; li < ells.size(); ++li) {
    SimParams params;
    params.grid = grid;
    params.ell = ells[li];
    params.reaction = reaction;
    params.t_final = t_final;
    params.keep_event_log = false;

    errors[li].assign(std::size_t(replicas), 0.0);
    parallel_for(replicas, opts.threads, [&](int i) {
      SimResult run = simulate(params, initial, opts.seed + li, std::uint64_t(i));
      errors[li][std::size_t(i)] = sup_error_vs_solution(run.path, target);
    });
    for (int i = 0; i < replicas; ++i)
      csv.add_row({double(ells[li]), double(i), errors[li][std::size_t(i)]});
  }

  double eps = percentile_of(errors[0], 0.30);
  std::vector<double> tails;
  for (std::size_t li = 0; li < ells.size(); ++li) {
    int above = 0;
    for (double e : errors[li])
      if (e > eps) ++above;
    tails.push_back(double(above) / double(replicas));
  }
  bool monotone = tails[0] >= tails[1] && tails[1] >= tails[2];
  report.checks.push_back(make_check(
      "tail_nonincreasing", monotone,
      "eps=" + fmt(eps) + " tail fractions l=8,32,128: " + fmt(tails[0]) + ", " + fmt(tails[1]) +
          ", " + fmt(tails[2])));

  emit_csv(report, opts, csv, "concentration.csv", "concentration N=8 l={8,32,128} T=0.25");
  return report;
}

// ---------------------------------------------------------------------------

void simulate_to_files(const SimulateFileRequest& req) {
  RunConfig cfg = load_config(req.config_path);
  validate_reaction(cfg.reaction);
  StrengthReport strength =
      validate_perturbation_strength(cfg.perturbation, cfg.scaling, cfg.t_final);
  require(strength.admissible, Errc::config,
          "simulate: perturbation exceeds the admissibility bound: " + strength.note);

  SimParams params;
  params.grid = cfg.grid;
  params.ell = cfg.resolved_ell();
  params.reaction = cfg.reaction;
  params.perturbation = cfg.perturbation;
  params.t_final = cfg.t_final;
  params.keep_event_log = !req.event_log_path.empty();

  SimResult run = simulate(params, cfg.initial, cfg.seed, req.replica);

  CsvWriter csv({"t", "site", "density"});
  for (std::size_t i = 0; i < run.path.snapshot_count(); ++i) {
    const GridFunction& x = run.path.snapshot(i);
    for (int k = 0; k < cfg.grid.n_sites; ++k)
      csv.add_row({run.path.snapshot_time(i), double(k), x[k]});
  }
  csv.add_comment("seed=" + std::to_string(cfg.seed));
  csv.add_comment(std::string("git-describe=") + HDLD_GIT_DESCRIBE);
  csv.add_comment("config-hash=" + config_hash(cfg));
  csv.add_comment("events=" + std::to_string(run.n_events) +
                  " log_weight=" + fmt(run.weights.log_weight()));
  csv.write_file(req.out_csv);

  if (!req.event_log_path.empty()) run.log.write_file(req.event_log_path);
}

}  // namespace hdld
