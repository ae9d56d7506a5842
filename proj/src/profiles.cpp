#include "mtcrit/profiles.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "mtcrit/error.hpp"
#include "mtcrit/numerics.hpp"
#include "mtcrit/parallel.hpp"
#include "mtcrit/special.hpp"

namespace mtc {

namespace {
constexpr double kPi = std::numbers::pi;

template <class R>
R s0_closed(R r) {
  const R r2 = r * r;
  const R T = std::log1p(r2);
  return -T + 2 * r2 / (1 + r2) - T * T / 2 + (1 - r2) / (1 + r2) * dilog(-r2);
}

template <class R>
R rhs_impl(int i, R r) {
  const R r2 = r * r;
  const R T = std::log1p(r2);
  const R e = 4 / ((1 + r2) * (1 + r2));
  switch (i) {
    case 0:
      return e * (T * T - T);
    case 1: {
      const R S = s0_closed(r);
      return e * (S + 2 * S * S - 4 * T * S + 2 * S * T * T - T * T * T + T * T * T * T / 2);
    }
    case 2:
      return e * T;
  }
  throw Error("profile index must be 0, 1 or 2");
}
}  // namespace

double t0(double r) { return std::log1p(r * r); }
double s0_explicit(double r) { return s0_closed(r); }
long double s0_explicit_ld(long double r) { return s0_closed(r); }

double s0_explicit_quadrature(double r) {
  const double r2 = r * r;
  const double T = std::log1p(r2);
  double I = 0.0;
  if (r2 > 0) {
    // log(t)/(1-t) with t = 1 + u, written as -log1p(u)/u (regular at u = 0).
    I = integrate([](double u) { return u == 0.0 ? -1.0 : -std::log1p(u) / u; }, 0.0, r2, 1e-14, 30);
  }
  return -T + 2 * r2 / (1 + r2) - T * T / 2 + (1 - r2) / (1 + r2) * I;
}

double profile_rhs(int i, double r) { return rhs_impl(i, r); }
long double profile_rhs_ld(int i, long double r) { return rhs_impl(i, r); }

double RadialProfile::operator()(double r) const {
  if (r <= r_min) return 0.0;  // all profiles vanish to second order at the origin
  const double xx = std::log(r);
  if (xx >= x.back()) return -(asym_slope / (2.0 * kPi)) * xx + intercept_far;
  const auto it = std::upper_bound(x.begin(), x.end(), xx);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  if (k == 0) return value.front();
  return hermite_cubic(x[k - 1], x[k], value[k - 1], rds[k - 1], value[k], rds[k], xx).value;
}

double RadialProfile::r_dS(double r) const {
  if (r <= r_min) return 0.0;
  const double xx = std::log(r);
  if (xx >= x.back()) return -asym_slope / (2.0 * kPi);
  const auto it = std::upper_bound(x.begin(), x.end(), xx);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  if (k == 0) return rds.front();
  return hermite_cubic(x[k - 1], x[k], rds[k - 1], drds[k - 1], rds[k], drds[k], xx).value;
}

double RadialProfile::laplacian(double r) const {
  const double e = 1.0 / ((1.0 + r * r) * (1.0 + r * r));
  return rhs_scale * profile_rhs(index, r) + 8.0 * e * (*this)(r);
}

RadialProfile solve_profile(int i, const ProfileOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  if (i < 0 || i > 2) throw Error("profile index must be 0, 1 or 2");
  if (opt.r_max < 100.0) throw GridMismatch("r_max must be at least 100");
  using State = std::array<double, 2>;
  const double scale = opt.rhs_scale;
  auto sys = [i, scale](const State& y, State& dy, double x) {
    const double s = std::exp(x);
    const double s2 = s * s;
    const double e = 1.0 / ((1.0 + s2) * (1.0 + s2));
    dy[0] = y[1];
    dy[1] = -s2 * (scale * profile_rhs(i, s) + 8.0 * e * y[0]);
  };
  RadialProfile p;
  p.index = i;
  p.rhs_scale = scale;
  p.r_min = opt.r_min;
  p.r_max = opt.r_max;
  const double x0 = std::log(opt.r_min), x1 = std::log(opt.r_max);
  const double R0 = scale * profile_rhs(i, 0.0);
  const double s02 = opt.r_min * opt.r_min;
  State y{-R0 * s02 / 4.0, -R0 * s02 / 2.0};
  auto observer = [&](const State& st, double x) {
    State d{};
    sys(st, d, x);
    if (!std::isfinite(st[0]) || !std::isfinite(st[1])) throw StepFailure("non-finite profile state");
    p.x.push_back(x);
    p.value.push_back(st[0]);
    p.rds.push_back(st[1]);
    p.drds.push_back(d[1]);
  };
  try {
    auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, opt.max_dx,
                                             odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, sys, y, x0, x1, 1e-3, observer);
  } catch (const odeint::odeint_error& e) {
    throw StepFailure(e.what());
  }
  if (p.x.back() < x1 - 1e-12) throw StepFailure("integration stopped before r_max");
  p.asym_slope = -2.0 * kPi * p.rds.back();
  p.intercept_far = p.value.back() + (p.asym_slope / (2.0 * kPi)) * p.x.back();
  auto intercept = [&](double r) { return p(r) + (p.asym_slope / (2.0 * kPi)) * std::log(r); };
  const double rr = std::min(1000.0, opt.r_max);
  p.asym_intercept = (4.0 * intercept(rr) - intercept(0.5 * rr)) / 3.0;
  return p;
}

ProfileSet solve_profiles(const ProfileOptions& opt) {
  ProfileSet ps;
  for_each_index(Exec::Parallel, 3, [&](std::size_t i) { ps.S[i] = solve_profile(static_cast<int>(i), opt); });
  return ps;
}

namespace {

// 2 pi int_0^inf f(r) r dr over x = log r panels in [-30, log r_max], plus a far tail model.
double radial_integral(const std::function<double(double)>& f, double r_max) {
  const GaussRule& gr = gauss_legendre(20);
  const double xa = -30.0, xb = std::log(r_max);
  const int panels = static_cast<int>(std::ceil((xb - xa) / 0.5));
  std::vector<double> parts(panels);
  for (int k = 0; k < panels; ++k) {
    const double a = xa + (xb - xa) * k / panels, b = xa + (xb - xa) * (k + 1) / panels;
    double s = 0.0;
    for (std::size_t j = 0; j < gr.x.size(); ++j) {
      const double x = 0.5 * (a + b) + 0.5 * (b - a) * gr.x[j];
      const double r = std::exp(x);
      s += gr.w[j] * f(r) * r * r;
    }
    parts[k] = 0.5 * (b - a) * s;
  }
  return 2.0 * kPi * pairwise_sum(parts);
}

}  // namespace

ProfileIntegrals profile_integrals(const ProfileSet& ps) {
  ProfileIntegrals out;
  const double rmax = ps.S[0].r_max;
  auto e2 = [](double r) { return 1.0 / ((1.0 + r * r) * (1.0 + r * r)); };
  // Far tail: S0 ~ -2 log r + B0, e^{-2T0} ~ r^{-4}: 2 pi int_R^inf (-2 log r + B) r^{-3} dr.
  const double A0 = ps.S[0].asym_slope, B0 = ps.S[0].intercept_far, lR = std::log(rmax);
  const double tail_S0 =
      2.0 * kPi * (-(A0 / (2.0 * kPi)) * (2.0 * lR + 1.0) / (4.0 * rmax * rmax) + B0 / (2.0 * rmax * rmax));
  out.I_S0 = radial_integral([&](double r) { return e2(r) * ps.S[0](r); }, rmax) + tail_S0;
  const double tail_T = 2.0 * kPi * (2.0 * lR * lR + 2.0 * lR + 1.0) / (rmax * rmax);
  out.I_T0sq = radial_integral([&](double r) { const double T = t0(r); return e2(r) * T * T; }, rmax) + tail_T;
  for (int i = 0; i < 3; ++i)
    out.A_check[i] = radial_integral([&](double r) { return ps.S[i].laplacian(r); }, rmax);
  return out;
}

TailCheck tail_check(const RadialProfile& p, double r) {
  auto resid = [&](double rr) {
    return p(rr) - (-(p.asym_slope / (2.0 * kPi)) * std::log(rr) + p.intercept_far);
  };
  const int k = p.index == 0 ? 2 : (p.index == 1 ? 4 : 1);
  TailCheck tc;
  tc.measured_ratio = std::abs(resid(2.0 * r) / resid(r));
  tc.predicted_ratio = std::pow(std::log(2.0 * r) / std::log(r), k) / 4.0;
  return tc;
}

}  // namespace mtc
