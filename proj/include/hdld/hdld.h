/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the hydrodynamic-limit simulation library. All entry points
 * are thread-safe; errors are reported as status codes with a thread-local
 * message available through hdld_last_error().
 */
#ifndef HDLD_H
#define HDLD_H

#include <stdint.h>

#if defined(_WIN32)
#define HDLD_API __declspec(dllexport)
#else
#define HDLD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hdld_status {
  HDLD_OK = 0,
  HDLD_ERR_CONFIG = 1,
  HDLD_ERR_OVERFLOW = 2,
  HDLD_ERR_NONFINITE_RATE = 3,
  HDLD_ERR_EVENT_BUDGET = 4,
  HDLD_ERR_INCOMPLETE_PATH = 5,
  HDLD_ERR_NEGATIVE_TIME = 6,
  HDLD_ERR_TOO_LARGE = 7,
  HDLD_ERR_QUADRATURE = 8,
  HDLD_ERR_INSTABILITY = 9,
  HDLD_ERR_POSITIVITY = 10,
  HDLD_ERR_SINGULAR_JACOBIAN = 11,
  HDLD_ERR_NO_CONVERGENCE = 12,
  HDLD_ERR_DEGENERATE_REACTION = 13,
  HDLD_ERR_DOMAIN = 14,
  HDLD_ERR_IO = 15,
  HDLD_ERR_INVALID_ARGUMENT = 16,
  HDLD_ERR_INTERNAL = 17
} hdld_status;

/* Library version string, e.g. "1.0.0 (gitdescribe)". Static storage. */
HDLD_API const char* hdld_version(void);

/* Message for the most recent failure on the calling thread. Empty string
 * when the last call succeeded. Valid until the thread's next hdld_* call. */
HDLD_API const char* hdld_last_error(void);

/* Comma-separated list of suite names accepted by hdld_suite_run. */
HDLD_API const char* hdld_suite_names(void);

typedef struct hdld_suite_options {
  const char* out_dir; /* directory for CSV artifacts; NULL writes nothing */
  uint64_t seed;       /* base RNG seed */
  int threads;         /* worker threads, >= 1 */
  int replicas;        /* replica override, 0 keeps the suite default */
} hdld_suite_options;

/* Opaque result of a suite run: named checks plus artifact paths. */
typedef struct hdld_suite_report hdld_suite_report;

/* Run the named validation suite. `options` may be NULL for defaults
 * (no artifacts, seed 20260816, one thread). On success *out owns the
 * report and must be released with hdld_report_free. A report with failed
 * checks still returns HDLD_OK; inspect hdld_report_passed. */
HDLD_API hdld_status hdld_suite_run(const char* name, const hdld_suite_options* options,
                                    hdld_suite_report** out);

HDLD_API int hdld_report_passed(const hdld_suite_report* report);
HDLD_API const char* hdld_report_suite(const hdld_suite_report* report);
HDLD_API const char* hdld_report_summary(const hdld_suite_report* report);
HDLD_API int hdld_report_check_count(const hdld_suite_report* report);
HDLD_API const char* hdld_report_check_name(const hdld_suite_report* report, int i);
HDLD_API int hdld_report_check_passed(const hdld_suite_report* report, int i);
HDLD_API const char* hdld_report_check_detail(const hdld_suite_report* report, int i);
HDLD_API int hdld_report_artifact_count(const hdld_suite_report* report);
HDLD_API const char* hdld_report_artifact(const hdld_suite_report* report, int i);
HDLD_API void hdld_report_free(hdld_suite_report* report);

/* Run one stochastic trajectory from a key=value config file and write the
 * density path as CSV (columns t,site,density). event_log_path may be NULL;
 * when given, the binary event record is written there as well. `replica`
 * selects the independent RNG stream. */
HDLD_API hdld_status hdld_simulate_file(const char* config_path, const char* out_csv,
                                        const char* event_log_path, uint64_t replica);

#ifdef __cplusplus
}
#endif

#endif /* HDLD_H */
