#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "mtcrit/error.hpp"
#include "mtcrit/numerics.hpp"
#include "mtcrit/parallel.hpp"
#include "mtcrit/special.hpp"

using namespace mtc;

TEST_CASE("gauss rule integrates polynomials exactly") {
  const GaussRule& g = gauss_legendre(8);
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * std::pow(g.x[i], 14);
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("adaptive integral on a half line") {
  const double v = integrate([](double x) { return std::exp(-x * x); }, 0.0, INFINITY);
  CHECK(v == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-12));
}

TEST_CASE("bracketed root and failure without sign change") {
  CHECK(find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, 0.0, 2.0), RootFail);
}

TEST_CASE("tridiagonal solve") {
  std::vector<double> d{2, 2, 2}, o{-1, -1}, rhs{1, 0, 1};
  auto u = solve_tridiagonal(d, o, rhs);
  for (double v : u) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("least squares recovers an exact fit") {
  std::vector<double> x{1, 2, 3, 4, 5}, one(5, 1.0), y(5);
  for (int i = 0; i < 5; ++i) y[i] = 3.0 - 2.0 * x[i];
  auto c = least_squares({one, x}, y);
  CHECK(c[0] == doctest::Approx(3.0));
  CHECK(c[1] == doctest::Approx(-2.0));
}

TEST_CASE("pairwise sum is identical under serial and parallel maps") {
  auto f = [](std::size_t i) { return std::sin(0.37 * i) / (1.0 + i); };
  const auto a = map_values(Exec::Serial, 10007, f);
  set_thread_count(3);
  const auto b = map_values(Exec::Parallel, 10007, f);
  set_thread_count(0);
  CHECK(pairwise_sum(a) == pairwise_sum(b));
}

TEST_CASE("parallel map rethrows worker exceptions") {
  CHECK_THROWS_AS(map_values(Exec::Parallel, 100,
                             [](std::size_t i) -> double {
                               if (i == 57) throw StepFailure("boom");
                               return 0.0;
                             }),
                  StepFailure);
}

TEST_CASE("series tail values") {
  CHECK(phi_tail(0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  CHECK(phi_tail(1, 1.0) == doctest::Approx(std::exp(1.0) - 2.0).epsilon(1e-14));
  for (int N : {0, 3, 50}) CHECK(phi_tail(N, 0.0) == 0.0);
  // log form survives where the value itself overflows
  CHECK(std::isfinite(log_phi_tail(2, 2000.0)));
  CHECK_THROWS_AS(phi_tail(2, 2000.0), Overflow);
}

TEST_CASE("series identities on random triples") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dn(0, 200);
  std::uniform_real_distribution<double> dt(0.01, 400.0);
  double worst_a = 0.0, worst_f = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int N = dn(rng);
    const double T = dt(rng), G = dt(rng);
    worst_a = std::max(worst_a, alg_relat_residual(N, T, G));
    worst_f = std::max(worst_f, formula_phi_residual(N, G));
  }
  CHECK(worst_a < 1e-12);
  CHECK(worst_f < 1e-12);
}

TEST_CASE("truncation weight and peak") {
  CHECK(xi_weight(1, 1.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-12));
  double prev = INFINITY;
  for (double g : {2.0, 3.0, 4.0}) {
    const double v = xi_weight(1, g) * g * g;
    CHECK(v < prev);
    prev = v;
  }
  const double ref = 1.0 / std::sqrt(2.0 * std::numbers::pi * 50.0);
  CHECK(std::abs(truncation_peak(50) / ref - 1.0) < 0.01);
}

TEST_CASE("dilogarithm and Bessel values") {
  CHECK(dilog(1.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-14));
  CHECK(dilog(-1.0) == doctest::Approx(-std::numbers::pi * std::numbers::pi / 12).epsilon(1e-14));
  CHECK(dilog(0.5) == doctest::Approx(0.5822405264650125).epsilon(1e-14));
  CHECK(bessel_j0_first_zero() == doctest::Approx(2.404825557695773).epsilon(1e-14));
  CHECK(std::abs(bessel_j0(bessel_j0_first_zero())) < 1e-15);
}
