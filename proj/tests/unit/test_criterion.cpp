#include "doctest.h"

#include <cmath>
#include <numbers>
#include <tuple>

#include "mtcrit/criterion.hpp"
#include "mtcrit/error.hpp"
#include "mtcrit/parallel.hpp"

using namespace mtc;

namespace {
const double kE = std::exp(1.0);
AsymptoticData power_log_data(double cp, double ap, double bp) {
  PowerLogParams p;
  p.c_prime = cp;
  p.a_prime = ap;
  p.b_prime = bp;
  return asymptotic_data(Perturbation::power_log(p));
}
CriterionInputs inputs(const AsymptoticData& d, double lambda_g) {
  CriterionInputs in;
  in.M = 0.0;
  in.S = 0.5;
  in.lambda_g = lambda_g;
  in.lambda_g_upper = lambda_g;
  in.limit = limit_l(d, 0.0, 0.5, default_gamma_grid());
  return in;
}
}  // namespace

TEST_CASE("ratio examples") {
  const auto z = asymptotic_data(Perturbation::zero());
  for (double g : {10.0, 100.0}) CHECK(ratio_value(z, 0, 0.5, g) == doctest::Approx((1 + 2 / kE) / 2).epsilon(1e-14));
  const auto d = power_log_data(-1, 2, 0);
  CHECK(ratio_value(d, 0, 0.5, 50.0) == doctest::Approx(1 / (2 * kE)).epsilon(1e-12));
  AsymptoticData only_a;
  only_a.A_terms = {{1.0, 4.0, 0.0}};
  for (double g : {3.0, 30.0}) CHECK(ratio_value(only_a, 0, 0.5, g) == doctest::Approx(0.75).epsilon(1e-14));
  AsymptoticData neither;
  neither.A_terms = {{0.0, 4.0, 0.0}};
  // with A = B = 0 only the gamma^-4 terms remain
  CHECK(ratio_value(neither, 0, 0.5, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("limit of the ratio") {
  const auto z = limit_l(asymptotic_data(Perturbation::zero()), 0, 0.5, default_gamma_grid());
  REQUIRE(z.l_closed.has_value());
  CHECK(*z.l_closed == doctest::Approx((1 + 2 / kE) / 2).epsilon(1e-14));
  CHECK(std::abs(z.l_grid - *z.l_closed) < 1e-12);
  CHECK(z.confidence < 1e-12);
  CHECK_FALSE(z.oscillating);
  const auto n = limit_l(power_log_data(-1, 1, 0), 0, 0.5, default_gamma_grid());
  CHECK(*n.l_closed == doctest::Approx(-0.5));
  CHECK(n.l_grid < 0.0);
  CHECK_THROWS_AS(limit_l(asymptotic_data(Perturbation::zero()), 0, 0.5, {3, 4, 5}), ConfigError);
  CHECK_THROWS_AS(limit_l(asymptotic_data(Perturbation::zero()), 0, 0.5, {3, 5, 4, 6}), ConfigError);
}

TEST_CASE("closed form and grid agree for power-log families") {
  for (auto [cp, ap, bp] : {std::tuple{0.0, 2.0, 0.0}, {-1.0, 2.0, 0.0}, {1.0, 3.0, 0.0}, {-1.0, 1.0, 0.0},
                            {2.0, 0.5, 0.0}, {-0.5, 1.5, 1.0}}) {
    const auto d = power_log_data(cp, ap, bp);
    const auto est = limit_l(d, 0, 0.5, extended_gamma_grid());
    REQUIRE(est.l_closed.has_value());
    CHECK(std::abs(*est.l_closed - est.l_grid) < 1e-3);
  }
}

TEST_CASE("limit is thread independent") {
  const auto d = power_log_data(-0.7, 1.3, 0.5);
  set_thread_count(1);
  const auto a = limit_l(d, 0, 0.5, extended_gamma_grid());
  set_thread_count(4);
  const auto b = limit_l(d, 0, 0.5, extended_gamma_grid());
  set_thread_count(0);
  CHECK(a.ratios == b.ratios);
  CHECK(a.l_grid == b.l_grid);
}

TEST_CASE("verdicts") {
  const double pe = std::numbers::pi * kE;
  CHECK(classify(inputs(asymptotic_data(Perturbation::zero()), 2.17)).verdict == Verdict::ExtremalExists_l);
  const auto neg = classify(inputs(power_log_data(-1, 1, 0), 2.17));
  CHECK(neg.verdict == Verdict::NoExtremal_Truncations);
  CHECK_FALSE(neg.note.empty());
  CHECK(classify(inputs(power_log_data(-1, 1, 0), pe + 0.1)).verdict == Verdict::ExtremalExists_Lambda);
  // upper bound above the level leaves the negative case open
  auto in = inputs(power_log_data(-1, 1, 0), 2.17);
  in.lambda_g_upper = pe + 1.0;
  CHECK(classify(in).verdict == Verdict::Inconclusive);
  CHECK(verdict_name(Verdict::ExtremalExists_l) == "ExtremalExists_l");
}

TEST_CASE("classifier of the decay exponents") {
  CHECK(cor2_classifier(3, 0, -1) == Cor2Class::Exists);
  CHECK(cor2_classifier(1, 0, 1) == Cor2Class::Exists);
  CHECK(cor2_classifier(1, 0, -1) == Cor2Class::NotExists);
  CHECK(cor2_classifier(2, 0, -2) == Cor2Class::Border);
  CHECK_THROWS_AS(cor2_classifier(0, 0, 1), ConfigError);
  CHECK_THROWS_AS(cor2_classifier(1, 0, 0), ConfigError);
}

TEST_CASE("border threshold") {
  CHECK(border_threshold() == doctest::Approx(-(1 + 2 / kE)).epsilon(1e-14));
  CHECK(border_threshold() == doctest::Approx(-1.7358).epsilon(1e-4));
  // below the threshold l is negative, above it positive
  const auto below = limit_l(power_log_data(-2, 2, 0), 0, 0.5, default_gamma_grid());
  const auto above = limit_l(power_log_data(-1.5, 2, 0), 0, 0.5, default_gamma_grid());
  CHECK(*below.l_closed < 0.0);
  CHECK(*above.l_closed > 0.0);
}

TEST_CASE("non-asymptotic condition") {
  const double l1 = 5.783185962946784;
  CHECK(nonasympt_condition(l1, 0, 3.0));
  CHECK_FALSE(nonasympt_condition(l1, 0, 2.9));
  CHECK_FALSE(nonasympt_condition(l1, 0, 0.0));
}

TEST_CASE("vanishing denominator") {
  AsymptoticData d;
  CHECK_THROWS_AS(ratio_value(d, 0, 0.5, INFINITY), ZeroDenominator);
}
