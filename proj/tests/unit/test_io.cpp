// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hdld/config.hpp"
#include "hdld/csv.hpp"
#include "hdld/error.hpp"
#include "hdld/event_log.hpp"
#include "hdld/importance.hpp"
#include "hdld/sim.hpp"

using namespace hdld;

namespace {

std::string temp_path(const std::string& tag) {
  static int counter = 0;
  return "io_test_" + tag + "_" + std::to_string(counter++) + ".tmp";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool same_bits(double a, double b) {
  std::uint64_t ua, ub;
  std::memcpy(&ua, &a, 8);
  std::memcpy(&ub, &b, 8);
  return ua == ub;
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.6789, -0.0, 0.0, 2.718281828459045e17}) {
    std::string s = format_double(v);
    double back = std::strtod(s.c_str(), nullptr);
    CHECK(same_bits(back, v));
  }
}

TEST_CASE("csv writer layout and file round trip") {
  CsvWriter w({"n", "error"});
  w.add_row({16.0, 0.5});
  w.add_row({32.0, 0.25});
  w.add_comment("seed=7");

  std::string text = w.to_string();
  std::istringstream in(text);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);

  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "n,error");
  CHECK(lines[1] == "16,0.5");
  CHECK(lines[2] == "32,0.25");
  CHECK(lines[3].front() == '#');
  CHECK(lines[3].find("seed=7") != std::string::npos);

  std::string path = temp_path("csv");
  w.write_file(path);
  CHECK(slurp(path) == text);
  std::remove(path.c_str());

  CHECK_THROWS_AS(w.add_row({1.0}), Error);
}

TEST_CASE("config file parsing") {
  const std::string text =
      "# sample run\n"
      "[grid]\n"
      "n_sites = 8\n"
      "\n"
      "[scaling]\n"
      "law = power\n"
      "alpha = 2.0\n"
      "\n"
      "[reaction]\n"
      "birth = logistic\n"
      "birth_r = 1.0\n"
      "birth_k = 1.0\n"
      "death = linear\n"
      "death_beta1 = 0.5\n"
      "\n"
      "[perturbation]\n"
      "variant = sine\n"
      "amplitude = 0.3\n"
      "spatial_mode = 1\n"
      "temporal = cosine\n"
      "omega = 1.5\n"
      "\n"
      "[initial]\n"
      "variant = smooth\n"
      "a = 0.5\n"
      "b = 0.25\n"
      "\n"
      "[run]\n"
      "t_final = 0.25\n"
      "seed = 42\n"
      "replicas = 3\n";

  SUBCASE("fields land where they should") {
    std::string path = temp_path("cfg");
    {
      std::ofstream out(path, std::ios::binary);
      out << text;
    }
    RunConfig cfg = load_config(path);
    std::remove(path.c_str());

    CHECK(cfg.grid.n_sites == 8);
    CHECK(cfg.resolved_ell() == 64);  // 8^2
    CHECK(cfg.reaction.birth(0.5) == doctest::Approx(0.25));
    CHECK(cfg.reaction.death(0.8) == doctest::Approx(0.4));
    CHECK(cfg.perturbation.h(0.0, 0.25) == doctest::Approx(0.3));
    CHECK(cfg.perturbation.temporal_param() == doctest::Approx(1.5));
    CHECK(cfg.initial(0.25) == doctest::Approx(0.75));
    CHECK(cfg.t_final == doctest::Approx(0.25));
    CHECK(cfg.seed == 42);
    CHECK(cfg.replicas == 3);

    std::string canon = cfg.canonical();
    CHECK(canon == cfg.canonical());
    std::string hash = config_hash(cfg);
    CHECK(hash.size() == 16);
    CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);
  }

  SUBCASE("unknown keys are rejected, not ignored") {
    std::string bad = text + "bogus = 1\n";
    try {
      parse_config(bad);
      FAIL("expected config error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::config);
    }
  }

  SUBCASE("missing file is an io error") {
    try {
      load_config("definitely_not_here.cfg");
      FAIL("expected io error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::io);
    }
  }
}

TEST_CASE("event log binary round trip") {
  SimParams params;
  params.grid.n_sites = 4;
  params.ell = 8;
  params.reaction.birth = ReactionFn::constant(0.5);
  params.reaction.death = ReactionFn::linear(1.0);
  params.t_final = 0.2;
  SimResult run = simulate(params, InitialProfile::constant(1.0), 99, 0);
  REQUIRE(run.log.size() > 0);

  std::string path = temp_path("evt");
  run.log.write_file(path);
  EventLog back = EventLog::read_file(path);

  CHECK(back.n_sites() == run.log.n_sites());
  REQUIRE(back.size() == run.log.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(same_bits(back[i].time, run.log[i].time));
    CHECK(back[i].kind == run.log[i].kind);
    CHECK(back[i].site == run.log[i].site);
  }

  // Chop the last record in half; the reader must notice.
  std::string bytes = slurp(path);
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), std::streamsize(bytes.size() - 6));
  }
  try {
    EventLog::read_file(path);
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::io);
  }
  std::remove(path.c_str());
}

TEST_CASE("importance sampling details are independent of thread count") {
  SimParams params;
  params.grid.n_sites = 4;
  params.ell = 2;
  params.reaction.birth = ReactionFn::constant(0.5);
  params.reaction.death = ReactionFn::linear(1.0);
  params.t_final = 0.1;
  params.keep_event_log = false;
  auto target = [](double, double) { return 1.0; };

  ImportanceEstimate one = importance_estimate(params, InitialProfile::constant(1.0), target,
                                               2.0, 6, 1234, 1);
  ImportanceEstimate three = importance_estimate(params, InitialProfile::constant(1.0), target,
                                                 2.0, 6, 1234, 3);
  REQUIRE(one.details.size() == 6);
  REQUIRE(three.details.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(one.details[i].replica == three.details[i].replica);
    CHECK(same_bits(one.details[i].log_weight, three.details[i].log_weight));
    CHECK(same_bits(one.details[i].sup_distance, three.details[i].sup_distance));
    CHECK(one.details[i].in_tube == three.details[i].in_tube);
  }
  CHECK(same_bits(one.p_hat, three.p_hat));
}
