// SPDX-License-Identifier: Apache-2.0
// Exercises the shared library strictly through the C header, the way an
// external consumer would.
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "hdld/hdld.h"

namespace {

const char* kConfigText =
    "[grid]\n"
    "n_sites = 4\n"
    "[scaling]\n"
    "law = fixed\n"
    "ell = 8\n"
    "[reaction]\n"
    "birth = constant\n"
    "birth_beta = 0.5\n"
    "death = linear\n"
    "death_beta1 = 1.0\n"
    "[perturbation]\n"
    "variant = zero\n"
    "[initial]\n"
    "variant = constant\n"
    "gamma = 1.0\n"
    "[run]\n"
    "t_final = 0.1\n"
    "seed = 7\n"
    "replicas = 1\n";

bool file_exists(const std::string& path) { return bool(std::ifstream(path)); }

}  // namespace

TEST_CASE("version and suite listing") {
  const char* v = hdld_version();
  REQUIRE(v != nullptr);
  CHECK(std::string(v).find("1.0.0") != std::string::npos);

  const char* names = hdld_suite_names();
  REQUIRE(names != nullptr);
  std::string all(names);
  CHECK(all.find("semigroup") != std::string::npos);
  CHECK(all.find("scheme-order") != std::string::npos);
  CHECK(all.find("concentration") != std::string::npos);
}

TEST_CASE("semigroup suite through the C interface") {
  hdld_suite_report* rep = nullptr;
  hdld_status st = hdld_suite_run("semigroup", nullptr, &rep);
  REQUIRE(st == HDLD_OK);
  REQUIRE(rep != nullptr);

  CHECK(hdld_report_passed(rep) == 1);
  CHECK(std::string(hdld_report_suite(rep)) == "semigroup");
  CHECK(std::string(hdld_report_summary(rep)).size() > 0);

  int n = hdld_report_check_count(rep);
  REQUIRE(n == 2);
  for (int i = 0; i < n; ++i) {
    CHECK(std::string(hdld_report_check_name(rep, i)).size() > 0);
    CHECK(hdld_report_check_passed(rep, i) == 1);
    CHECK(std::string(hdld_report_check_detail(rep, i)).size() > 0);
  }
  CHECK(hdld_report_artifact_count(rep) == 0);  // no out_dir, nothing written

  // Out-of-range accessors degrade to empty strings, never UB.
  CHECK(std::string(hdld_report_check_name(rep, -1)).empty());
  CHECK(std::string(hdld_report_check_name(rep, n)).empty());
  CHECK(std::string(hdld_report_artifact(rep, 0)).empty());

  hdld_report_free(rep);
  hdld_report_free(nullptr);  // must be a no-op
}

TEST_CASE("argument validation") {
  hdld_suite_report* rep = nullptr;
  CHECK(hdld_suite_run("not-a-suite", nullptr, &rep) == HDLD_ERR_INVALID_ARGUMENT);
  CHECK(std::string(hdld_last_error()).size() > 0);
  CHECK(rep == nullptr);

  CHECK(hdld_suite_run(nullptr, nullptr, &rep) == HDLD_ERR_INVALID_ARGUMENT);
  CHECK(hdld_suite_run("semigroup", nullptr, nullptr) == HDLD_ERR_INVALID_ARGUMENT);
  CHECK(hdld_simulate_file(nullptr, "x.csv", nullptr, 0) == HDLD_ERR_INVALID_ARGUMENT);
}

TEST_CASE("simulate_file happy path and error paths") {
  const std::string cfg = "capi_run.cfg";
  {
    std::ofstream out(cfg, std::ios::binary);
    out << kConfigText;
  }

  SUBCASE("writes the density CSV and the event log") {
    hdld_status st = hdld_simulate_file(cfg.c_str(), "capi_run.csv", "capi_run.evt", 0);
    CHECK(st == HDLD_OK);
    CHECK(std::string(hdld_last_error()).empty());
    CHECK(file_exists("capi_run.csv"));
    CHECK(file_exists("capi_run.evt"));

    std::ifstream in("capi_run.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,site,density");

    std::remove("capi_run.csv");
    std::remove("capi_run.evt");
  }

  SUBCASE("bad config maps to HDLD_ERR_CONFIG") {
    const std::string broken = "capi_broken.cfg";
    {
      std::ofstream out(broken, std::ios::binary);
      out << "[grid]\nn_sites = 4\n";  // everything else missing
    }
    CHECK(hdld_simulate_file(broken.c_str(), "nope.csv", nullptr, 0) == HDLD_ERR_CONFIG);
    CHECK(std::string(hdld_last_error()).find("config") != std::string::npos);
    std::remove(broken.c_str());
  }

  SUBCASE("missing config file is an io error") {
    CHECK(hdld_simulate_file("no_such_file.cfg", "nope.csv", nullptr, 0) == HDLD_ERR_IO);
  }

  std::remove(cfg.c_str());
}
