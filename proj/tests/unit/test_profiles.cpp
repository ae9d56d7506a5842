#include "doctest.h"

#include <cmath>
#include <numbers>

#include "mtcrit/error.hpp"
#include "mtcrit/profiles.hpp"

using namespace mtc;

namespace {
const ProfileSet& profiles() {
  static const ProfileSet ps = solve_profiles();
  return ps;
}
}  // namespace

TEST_CASE("standard bubble") {
  CHECK(t0(0.0) == 0.0);
  CHECK(t0(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("explicit S0") {
  CHECK(s0_explicit(0.0) == 0.0);
  for (double r : {0.3, 1.0, 7.0, 60.0})
    CHECK(s0_explicit(r) == doctest::Approx(s0_explicit_quadrature(r)).epsilon(1e-10));
}

TEST_CASE("explicit S0 solves its equation") {
  // S'' + S'/r + 8 e^{-2T0} S = -RHS_0 in long double
  long double worst = 0.0L;
  const long double h = 1e-4L;
  for (long double r = 0.1L; r <= 50.0L; r *= 1.05L) {
    // five-point stencils
    const long double s = s0_explicit_ld(r), sp = s0_explicit_ld(r + h), sm = s0_explicit_ld(r - h);
    const long double sp2 = s0_explicit_ld(r + 2 * h), sm2 = s0_explicit_ld(r - 2 * h);
    const long double d2 = (-sp2 + 16 * sp - 30 * s + 16 * sm - sm2) / (12 * h * h);
    const long double d1 = (-sp2 + 8 * sp - 8 * sm + sm2) / (12 * h);
    const long double e = 1.0L / ((1.0L + r * r) * (1.0L + r * r));
    worst = std::max(worst, std::fabs(d2 + d1 / r + 8.0L * e * s + profile_rhs_ld(0, r)));
  }
  CHECK(static_cast<double>(worst) < 1e-8);
}

TEST_CASE("ODE S0 matches the explicit form") {
  const auto& S0 = profiles().S[0];
  double worst = 0.0;
  for (double r = 0.0; r <= 100.0; r += 0.05) worst = std::max(worst, std::abs(S0(r) - s0_explicit(r)));
  CHECK(worst < 1e-7);
}

TEST_CASE("far-field constants") {
  const auto& ps = profiles();
  CHECK(std::abs(ps.S[0].asym_slope / kA0 - 1.0) < 1e-3);
  CHECK(std::abs(ps.S[1].asym_slope / kA1 - 1.0) < 5e-3);
  CHECK(std::abs(ps.S[2].asym_slope / kA2 - 1.0) < 5e-3);
  CHECK(std::abs(ps.S[0].asym_intercept - kB0) < 1e-3);
  CHECK(kB0 == doctest::Approx(3.644934).epsilon(1e-6));
}

TEST_CASE("profile integrals") {
  const auto I = profile_integrals(profiles());
  CHECK(std::abs(I.I_S0) < 1e-6);
  CHECK(std::abs(I.I_T0sq - 2 * std::numbers::pi) < 1e-6);
  const double A[3] = {kA0, kA1, kA2};
  for (int i = 0; i < 3; ++i) CHECK(std::abs(I.A_check[i] / A[i] - 1.0) < 5e-3);
}

TEST_CASE("tail remainder decays at the predicted rate") {
  for (const auto& p : profiles().S) {
    const auto tc = tail_check(p, 500.0);
    const double q = tc.measured_ratio / tc.predicted_ratio;
    CHECK(q > 0.25);
    CHECK(q < 4.0);
  }
}

TEST_CASE("profile solve is linear in the source") {
  ProfileOptions o;
  o.r_max = 1e3;
  const auto a = solve_profile(2, o);
  o.rhs_scale = 3.0;
  const auto b = solve_profile(2, o);
  double worst = 0.0;
  for (double r : {0.01, 0.5, 3.0, 40.0, 900.0}) worst = std::max(worst, std::abs(b(r) - 3.0 * a(r)) / (1 + std::abs(a(r))));
  CHECK(worst < 1e-8);
}

TEST_CASE("short range is rejected") {
  ProfileOptions o;
  o.r_max = 50.0;
  CHECK_THROWS_AS(solve_profile(0, o), GridMismatch);
}

TEST_CASE("profiles are regular at the origin") {
  for (const auto& p : profiles().S) {
    CHECK(p(0.0) == 0.0);
    CHECK(std::abs(p(1e-3)) < 1e-5);
  }
}
