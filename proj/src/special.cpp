#include "mtcrit/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include "mtcrit/error.hpp"

namespace mtc {

double log_phi_tail(int N, double T) {
  if (N < 0 || T < 0) throw Error("log_phi_tail: negative argument");
  if (T == 0.0) return -std::numeric_limits<double>::infinity();
  const double logT = std::log(T);
  // Largest term of the tail, then ratio recurrences on both sides.
  const long kstar = std::max<long>(N + 1, static_cast<long>(std::floor(T)));
  const double log_peak = kstar * logT - std::lgamma(kstar + 1.0);
  double sum = 1.0;
  double term = 1.0;
  for (long k = kstar + 1;; ++k) {
    term *= T / k;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  term = 1.0;
  for (long k = kstar; k > N + 1; --k) {
    term *= k / T;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return log_peak + std::log(sum);
}

double phi_tail(int N, double T) {
  const double l = log_phi_tail(N, T);
  if (l > kExpBudget) throw Overflow("phi_N(T) beyond exponent budget, use log_phi_tail");
  return std::exp(l);
}

double log_xi_weight(int N, double gamma) {
  if (N < 1 || gamma <= 0) throw Error("xi: N >= 1 and gamma > 0 required");
  const double T = gamma * gamma;
  return (N - 1) * std::log(T) - std::lgamma(static_cast<double>(N)) - log_phi_tail(N - 1, T);
}

double xi_weight(int N, double gamma) { return std::exp(log_xi_weight(N, gamma)); }

namespace {

template <class R>
R dilog_series(R x) {
  R s = 0, p = 1;
  for (int k = 1; k < 400; ++k) {
    p *= x;
    const R t = p / (R(k) * k);
    s += t;
    if (std::abs(t) < R(1e-21) * std::abs(s)) break;
  }
  return s;
}

template <class R>
R dilog_impl(R x) {
  const R pi = std::numbers::pi_v<R>;
  const R pi2_6 = pi * pi / 6;
  if (x > 1) throw Error("dilog: argument above 1");
  if (x == 1) return pi2_6;
  if (x == 0) return 0;
  if (x < -1) {
    const R l = std::log(-x);
    return -pi2_6 - l * l / 2 - dilog_impl(1 / x);
  }
  if (x > R(0.5)) return pi2_6 - std::log(x) * std::log1p(-x) - dilog_impl(1 - x);
  if (x < R(-0.5)) {
    const R l = std::log1p(-x);
    return -dilog_series(x / (x - 1)) - l * l / 2;
  }
  return dilog_series(x);
}

}  // namespace

double dilog(double x) { return dilog_impl(x); }
long double dilog(long double x) { return dilog_impl(x); }

namespace {

// Ascending series, used for |x| <= 12.
double j_series(int order, double x) {
  const double h = 0.5 * x;
  const double h2 = h * h;
  double term = order == 0 ? 1.0 : h;
  double s = term;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / (double(k) * (k + order));
    s += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(s))) break;
  }
  return s;
}

// Hankel asymptotic expansion for large x.
double j_asymptotic(int order, double x) {
  const double mu = 4.0 * order * order;
  double P = 1.0, Q = 0.0, tp = 1.0;
  const double z8 = 8.0 * x;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    tp *= (mu - odd * odd) / (k * z8);
    const double prev = std::abs(tp);
    if (prev > last) break;  // asymptotic series started to diverge
    last = prev;
    if (k % 2 == 1) {
      Q += (k / 2 % 2 == 0 ? 1.0 : -1.0) * tp;
    } else {
      P += (k / 2 % 2 == 1 ? -1.0 : 1.0) * tp;
    }
    if (prev < 1e-17) break;
  }
  const double w = x - (0.5 * order + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (P * std::cos(w) - Q * std::sin(w));
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);
  return x <= 12.0 ? j_series(0, x) : j_asymptotic(0, x);
}

double bessel_j1(double x) {
  const double s = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  return s * (x <= 12.0 ? j_series(1, x) : j_asymptotic(1, x));
}

double bessel_j0_first_zero() {
  double a = 2.0, b = 3.0;
  for (int i = 0; i < 30; ++i) {
    const double m = 0.5 * (a + b);
    if ((bessel_j0(a) > 0) == (bessel_j0(m) > 0)) a = m; else b = m;
  }
  double z = 0.5 * (a + b);
  for (int i = 0; i < 8; ++i) {
    const double dz = bessel_j0(z) / bessel_j1(z);  // J0' = -J1
    z += dz;
    if (std::abs(dz) < 1e-16 * z) break;
  }
  return z;
}

namespace {
// log of int_a^b e^{-s} s^N / N! ds for 0 <= a <= b, from whichever regularized tail is small.
double log_gamma_window(int N, double a, double b) {
  using boost::math::gamma_p;
  using boost::math::gamma_q;
  const double n1 = N + 1.0;
  double d;
  if (b <= n1) d = gamma_p(n1, b) - gamma_p(n1, a);
  else d = gamma_q(n1, a) - gamma_q(n1, b);
  return std::log(d);
}
}  // namespace

double alg_relat_residual(int N, double T, double G) {
  if (N < 0 || !(T > 0) || !(G > 0)) throw Error("alg_relat_residual: need N >= 0, T, G > 0");
  const double lhs = log_phi_tail(N, T);
  const double t1 = log_phi_tail(N, G) - (G - T);
  if (T == G) return std::abs(std::expm1(t1 - lhs));
  const double sign = G > T ? 1.0 : -1.0;
  const double t2 = T + log_gamma_window(N, std::min(T, G), std::max(T, G));
  const double top = std::max({lhs, t1, t2});
  const double r = std::exp(lhs - top) - std::exp(t1 - top) + sign * std::exp(t2 - top);
  return std::abs(r);
}

double formula_phi_residual(int N, double G) {
  if (N < 0 || !(G > 0)) throw Error("formula_phi_residual: need N >= 0, G > 0");
  const double lhs = log_phi_tail(N, G);
  const double rhs = G + std::log(boost::math::gamma_p(N + 1.0, G));
  return std::abs(std::expm1(lhs - rhs));
}

double truncation_peak(int N) {
  if (N < 1) throw Error("truncation_peak: N >= 1");
  auto neg_log = [N](double t) { return -(2.0 * N * std::log(t) - t * t - std::lgamma(N + 1.0)); };
  const double c = std::sqrt(static_cast<double>(N));
  const auto res = boost::math::tools::brent_find_minima(neg_log, 0.5 * c, 2.0 * c, 52);
  return std::exp(-res.second);
}

}  // namespace mtc
