// SPDX-License-Identifier: Apache-2.0
#include "hdld/hdld.h"

#include <exception>
#include <string>

#include "hdld/error.hpp"
#include "hdld/experiments.hpp"
#include "hdld/version.hpp"

namespace {

thread_local std::string t_last_error;

hdld_status status_from(hdld::Errc code) {
  using hdld::Errc;
  switch (code) {
    case Errc::ok: return HDLD_OK;
    case Errc::config: return HDLD_ERR_CONFIG;
    case Errc::overflow: return HDLD_ERR_OVERFLOW;
    case Errc::nonfinite_rate: return HDLD_ERR_NONFINITE_RATE;
    case Errc::event_budget: return HDLD_ERR_EVENT_BUDGET;
    case Errc::incomplete_path: return HDLD_ERR_INCOMPLETE_PATH;
    case Errc::negative_time: return HDLD_ERR_NEGATIVE_TIME;
    case Errc::too_large: return HDLD_ERR_TOO_LARGE;
    case Errc::quadrature: return HDLD_ERR_QUADRATURE;
    case Errc::instability: return HDLD_ERR_INSTABILITY;
    case Errc::positivity: return HDLD_ERR_POSITIVITY;
    case Errc::singular_jacobian: return HDLD_ERR_SINGULAR_JACOBIAN;
    case Errc::no_convergence: return HDLD_ERR_NO_CONVERGENCE;
    case Errc::degenerate_reaction: return HDLD_ERR_DEGENERATE_REACTION;
    case Errc::domain: return HDLD_ERR_DOMAIN;
    case Errc::io: return HDLD_ERR_IO;
    case Errc::invalid_argument: return HDLD_ERR_INVALID_ARGUMENT;
    case Errc::internal: return HDLD_ERR_INTERNAL;
  }
  return HDLD_ERR_INTERNAL;
}

template <typename Fn>
hdld_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return HDLD_OK;
  } catch (const hdld::Error& e) {
    t_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return HDLD_ERR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return HDLD_ERR_INTERNAL;
  }
}

hdld::SuiteReport dispatch_suite(const std::string& name, const hdld::SuiteOptions& opts) {
  if (name == "scheme-order") return hdld::run_scheme_order_suite(opts);
  if (name == "semigroup") return hdld::run_semigroup_suite(opts);
  if (name == "martingale") return hdld::run_martingale_suite(opts);
  if (name == "weights") return hdld::run_weights_suite(opts);
  if (name == "lln") return hdld::run_lln_suite(opts, false);
  if (name == "lln-perturbed") return hdld::run_lln_suite(opts, true);
  if (name == "rate") return hdld::run_rate_identity_suite(opts);
  if (name == "invert-h") return hdld::run_invert_tilt_suite(opts);
  if (name == "is-estimate") return hdld::run_importance_suite(opts);
  if (name == "concentration") return hdld::run_concentration_suite(opts);
  hdld::fail(hdld::Errc::invalid_argument,
             "unknown suite '" + name + "'; valid names: " + hdld_suite_names());
}

}  // namespace

struct hdld_suite_report {
  hdld::SuiteReport rep;
  std::string summary;
};

extern "C" {

const char* hdld_version(void) {
  static const std::string version = std::string("1.0.0 (") + HDLD_GIT_DESCRIBE + ")";
  return version.c_str();
}

const char* hdld_last_error(void) { return t_last_error.c_str(); }

const char* hdld_suite_names(void) {
  return "scheme-order,semigroup,martingale,weights,lln,lln-perturbed,rate,invert-h,"
         "is-estimate,concentration";
}

hdld_status hdld_suite_run(const char* name, const hdld_suite_options* options,
                           hdld_suite_report** out) {
  if (out) *out = nullptr;
  return guarded([&] {
    hdld::require(name != nullptr && out != nullptr, hdld::Errc::invalid_argument,
                  "hdld_suite_run: name and out must be non-null");
    hdld::SuiteOptions opts;
    if (options) {
      if (options->out_dir) opts.out_dir = options->out_dir;
      opts.seed = options->seed;
      hdld::require(options->threads >= 1, hdld::Errc::invalid_argument,
                    "hdld_suite_run: threads must be >= 1");
      opts.threads = options->threads;
      hdld::require(options->replicas >= 0, hdld::Errc::invalid_argument,
                    "hdld_suite_run: replicas must be >= 0");
      opts.replicas = options->replicas;
    }
    auto* report = new hdld_suite_report{dispatch_suite(name, opts), {}};
    report->summary = report->rep.summary();
    *out = report;
  });
}

int hdld_report_passed(const hdld_suite_report* report) {
  return report && report->rep.passed() ? 1 : 0;
}

const char* hdld_report_suite(const hdld_suite_report* report) {
  return report ? report->rep.suite.c_str() : "";
}

const char* hdld_report_summary(const hdld_suite_report* report) {
  return report ? report->summary.c_str() : "";
}

int hdld_report_check_count(const hdld_suite_report* report) {
  return report ? int(report->rep.checks.size()) : 0;
}

const char* hdld_report_check_name(const hdld_suite_report* report, int i) {
  if (!report || i < 0 || i >= int(report->rep.checks.size())) return "";
  return report->rep.checks[std::size_t(i)].name.c_str();
}

int hdld_report_check_passed(const hdld_suite_report* report, int i) {
  if (!report || i < 0 || i >= int(report->rep.checks.size())) return 0;
  return report->rep.checks[std::size_t(i)].passed ? 1 : 0;
}

const char* hdld_report_check_detail(const hdld_suite_report* report, int i) {
  if (!report || i < 0 || i >= int(report->rep.checks.size())) return "";
  return report->rep.checks[std::size_t(i)].detail.c_str();
}

int hdld_report_artifact_count(const hdld_suite_report* report) {
  return report ? int(report->rep.artifacts.size()) : 0;
}

const char* hdld_report_artifact(const hdld_suite_report* report, int i) {
  if (!report || i < 0 || i >= int(report->rep.artifacts.size())) return "";
  return report->rep.artifacts[std::size_t(i)].c_str();
}

void hdld_report_free(hdld_suite_report* report) { delete report; }

hdld_status hdld_simulate_file(const char* config_path, const char* out_csv,
                               const char* event_log_path, uint64_t replica) {
  return guarded([&] {
    hdld::require(config_path != nullptr && out_csv != nullptr, hdld::Errc::invalid_argument,
                  "hdld_simulate_file: config_path and out_csv must be non-null");
    hdld::SimulateFileRequest req;
    req.config_path = config_path;
    req.out_csv = out_csv;
    if (event_log_path) req.event_log_path = event_log_path;
    req.replica = replica;
    hdld::simulate_to_files(req);
  });
}

}  // extern "C"
