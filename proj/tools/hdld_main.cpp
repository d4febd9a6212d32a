// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Everything goes through the C API in hdld/hdld.h;
// exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "hdld/hdld.h"

namespace {

struct SuiteCliArgs {
  std::string out_dir;
  std::uint64_t seed = 20260816;
  int threads = 1;
  int replicas = 0;
};

int run_suite(const char* name, const SuiteCliArgs& args) {
  hdld_suite_options options{};
  options.out_dir = args.out_dir.empty() ? nullptr : args.out_dir.c_str();
  options.seed = args.seed;
  options.threads = args.threads;
  options.replicas = args.replicas;

  hdld_suite_report* report = nullptr;
  hdld_status status = hdld_suite_run(name, &options, &report);
  if (status != HDLD_OK) {
    std::fprintf(stderr, "error (%d): %s\n", int(status), hdld_last_error());
    return 2;
  }

  std::printf("suite: %s\n", hdld_report_suite(report));
  for (int i = 0; i < hdld_report_check_count(report); ++i)
    std::printf("  [%s] %s: %s\n", hdld_report_check_passed(report, i) ? "PASS" : "FAIL",
                hdld_report_check_name(report, i), hdld_report_check_detail(report, i));
  for (int i = 0; i < hdld_report_artifact_count(report); ++i)
    std::printf("  wrote %s\n", hdld_report_artifact(report, i));
  int all_passed = hdld_report_passed(report);
  std::printf("result: %s\n", all_passed ? "PASS" : "FAIL");
  hdld_report_free(report);
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interacting random walks with births and deaths on the discrete torus:\n"
               "validation suites and single-trajectory simulation."};
  app.set_version_flag("--version", hdld_version());
  app.require_subcommand(1);

  SuiteCliArgs args;
  const std::vector<std::pair<const char*, const char*>> suite_specs = {
      {"scheme-order", "convergence of the semi-discrete scheme against a fine reference"},
      {"semigroup", "heat semigroup vs dense matrix exponential, basis invariants"},
      {"martingale", "mean-zero checks for the compensated processes"},
      {"weights", "change-of-measure weight normalization and expansion gap decay"},
      {"lln", "hydrodynamic convergence of empirical densities, no drift"},
      {"lln-perturbed", "hydrodynamic convergence under an admissible weak drift"},
      {"rate", "action functional identities and variational probes"},
      {"invert-h", "recover the drift potential from a density slice"},
      {"is-estimate", "importance-sampled tube probability and entropy"},
      {"concentration", "sup-error tail decay as the particle density grows"},
  };

  std::vector<std::pair<CLI::App*, const char*>> suites;
  for (const auto& [name, description] : suite_specs) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--out", args.out_dir, "directory for CSV artifacts");
    sub->add_option("--seed", args.seed, "base RNG seed")->capture_default_str();
    sub->add_option("--threads", args.threads, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--replicas", args.replicas, "replica count override (0 = suite default)")
        ->check(CLI::NonNegativeNumber);
    suites.emplace_back(sub, name);
  }

  std::string config_path, out_csv, event_log_path;
  std::uint64_t replica = 0;
  CLI::App* sim = app.add_subcommand("simulate", "run one trajectory from a config file");
  sim->add_option("--config", config_path, "key=value configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sim->add_option("--out", out_csv, "output CSV path (t,site,density)")->required();
  sim->add_option("--events", event_log_path, "also write the binary event log here");
  sim->add_option("--replica", replica, "RNG stream index");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (sim->parsed()) {
    hdld_status status =
        hdld_simulate_file(config_path.c_str(), out_csv.c_str(),
                           event_log_path.empty() ? nullptr : event_log_path.c_str(), replica);
    if (status != HDLD_OK) {
      std::fprintf(stderr, "error (%d): %s\n", int(status), hdld_last_error());
      return 2;
    }
    std::printf("wrote %s\n", out_csv.c_str());
    if (!event_log_path.empty()) std::printf("wrote %s\n", event_log_path.c_str());
    return 0;
  }

  for (const auto& [sub, name] : suites)
    if (sub->parsed()) return run_suite(name, args);
  return 2;
}
