// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: one numbered criterion per invocation, one verdict line
// with the measured values, exit 0 on pass. Designed for ctest registration
//   acceptance <criterion> [--out DIR] [--threads T]
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "hdld/experiments.hpp"

namespace {

struct Criterion {
  int number;
  const char* title;
  std::vector<hdld::SuiteReport> (*run)(const hdld::SuiteOptions&);
};

template <hdld::SuiteReport (*Fn)(const hdld::SuiteOptions&)>
std::vector<hdld::SuiteReport> single(const hdld::SuiteOptions& opts) {
  return {Fn(opts)};
}

std::vector<hdld::SuiteReport> both_lln(const hdld::SuiteOptions& opts) {
  return {hdld::run_lln_suite(opts, false), hdld::run_lln_suite(opts, true)};
}

const Criterion kCriteria[] = {
    {1, "scheme accuracy and error bound", single<hdld::run_scheme_order_suite>},
    {2, "semigroup against dense oracle", single<hdld::run_semigroup_suite>},
    {3, "martingale mean-zero", single<hdld::run_martingale_suite>},
    {4, "change-of-measure weights", single<hdld::run_weights_suite>},
    {5, "density convergence to the limit", both_lln},
    {6, "tilted cost identity", single<hdld::run_rate_identity_suite>},
    {7, "tilt inversion round trip", single<hdld::run_invert_tilt_suite>},
    {8, "importance-sampling cost estimate", single<hdld::run_importance_suite>},
    {9, "concentration of paths", single<hdld::run_concentration_suite>},
};

void usage() {
  std::fprintf(stderr, "usage: acceptance <criterion 1..9> [--out DIR] [--threads T]\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage();
    return 2;
  }
  int number = std::atoi(argv[1]);
  if (number < 1 || number > 9) {
    usage();
    return 2;
  }

  hdld::SuiteOptions opts;
  for (int i = 2; i < argc; ++i) {
    if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
      opts.out_dir = argv[++i];
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      opts.threads = std::atoi(argv[++i]);
      if (opts.threads < 1) {
        usage();
        return 2;
      }
    } else {
      usage();
      return 2;
    }
  }

  const Criterion& crit = kCriteria[number - 1];
  bool ok = true;
  std::string detail;
  try {
    std::vector<hdld::SuiteReport> reports = crit.run(opts);
    for (const hdld::SuiteReport& rep : reports) {
      ok = ok && rep.passed();
      for (const hdld::SuiteCheck& check : rep.checks) {
        if (!detail.empty()) detail += "; ";
        detail += check.name + (check.passed ? "=ok" : "=FAIL") + " [" + check.detail + "]";
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }

  std::printf("[%s] criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", number, crit.title,
              detail.c_str());
  return ok ? 0 : 1;
}
