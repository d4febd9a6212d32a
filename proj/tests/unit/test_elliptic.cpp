// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hdld/elliptic.hpp"
#include "hdld/error.hpp"

using namespace hdld;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Slice whose time derivative is manufactured so that h_true, sampled on the
// same M points, satisfies the discrete balance equation exactly.
EllipticSlice manufactured_slice(int m, std::vector<double>& h_true,
                                 const ReactionSpec& reaction) {
  EllipticSlice s;
  s.psi.resize(size_t(m));
  s.dx.resize(size_t(m));
  s.dxx.resize(size_t(m));
  s.dt.resize(size_t(m));
  h_true.resize(size_t(m));
  for (int i = 0; i < m; ++i) {
    double x = double(i) / m;
    h_true[size_t(i)] = 0.2 * std::sin(2 * kPi * x);
    double sn = std::sin(2 * kPi * x);
    s.psi[size_t(i)] = 0.6 + 0.2 * sn * sn;
    s.dx[size_t(i)] = 0.4 * kPi * std::sin(4 * kPi * x);
    s.dxx[size_t(i)] = 1.6 * kPi * kPi * std::cos(4 * kPi * x);
  }
  for (int i = 0; i < m; ++i) {
    double hc = h_true[size_t(i)];
    double hp = h_true[size_t((i + 1) % m)];
    double hm = h_true[size_t((i - 1 + m) % m)];
    double d1 = 0.5 * m * (hp - hm);
    double d2 = double(m) * m * (hp - 2 * hc + hm);
    s.dt[size_t(i)] = s.dxx[size_t(i)] - 2 * s.psi[size_t(i)] * d2 - 2 * s.dx[size_t(i)] * d1 +
                      std::exp(hc) * reaction.birth(s.psi[size_t(i)]) -
                      std::exp(-hc) * reaction.death(s.psi[size_t(i)]);
  }
  return s;
}

}  // namespace

TEST_CASE("invert_tilt recovers a manufactured tilt to solver precision") {
  ReactionSpec reaction;
  reaction.birth = ReactionFn::logistic(1.0, 1.0);
  reaction.death = ReactionFn::linear(0.5);
  std::vector<double> h_true;
  EllipticSlice slice = manufactured_slice(32, h_true, reaction);

  EllipticResult res = invert_tilt(slice, reaction);
  CHECK(res.residual <= 1e-10);
  double err = 0.0;
  for (int i = 0; i < 32; ++i) err = std::max(err, std::abs(res.h[i] - h_true[size_t(i)]));
  CHECK(err <= 1e-8);
}

TEST_CASE("invert_tilt input validation") {
  ReactionSpec reaction;
  reaction.birth = ReactionFn::constant(0.5);
  reaction.death = ReactionFn::linear(1.0);

  SUBCASE("component length mismatch") {
    EllipticSlice s;
    s.psi.assign(8, 1.0);
    s.dx.assign(7, 0.0);
    s.dxx.assign(8, 0.0);
    s.dt.assign(8, 0.0);
    CHECK_THROWS_AS(invert_tilt(s, reaction), Error);
  }

  SUBCASE("profile must stay positive") {
    EllipticSlice s;
    s.psi.assign(8, 1.0);
    s.psi[3] = 0.0;
    s.dx.assign(8, 0.0);
    s.dxx.assign(8, 0.0);
    s.dt.assign(8, 0.0);
    try {
      invert_tilt(s, reaction);
      FAIL("expected positivity error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::positivity);
    }
  }

  SUBCASE("reaction must not vanish on the profile") {
    ReactionSpec dead;
    dead.birth = ReactionFn::zero();
    dead.death = ReactionFn::zero();
    EllipticSlice s;
    s.psi.assign(8, 1.0);
    s.dx.assign(8, 0.0);
    s.dxx.assign(8, 0.0);
    s.dt.assign(8, 0.0);
    try {
      invert_tilt(s, dead);
      FAIL("expected degenerate reaction error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::degenerate_reaction);
    }
  }
}

TEST_CASE("constant profile tilt in closed form") {
  ReactionSpec reaction;
  reaction.birth = ReactionFn::constant(0.5);
  reaction.death = ReactionFn::linear(1.0);
  CHECK(constant_tilt_closed_form(1.0, reaction) ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-14));

  ReactionSpec no_birth;
  no_birth.birth = ReactionFn::zero();
  no_birth.death = ReactionFn::linear(1.0);
  try {
    constant_tilt_closed_form(1.0, no_birth);
    FAIL("expected degenerate reaction error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_reaction);
  }
}
