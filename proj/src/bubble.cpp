#include "mtcrit/bubble.hpp"

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
const double kEps0Min = 1.0 / std::sqrt(std::exp(1.0));

struct StopShot {};
}  // namespace

double lambda_from_level(double gamma, double M) {
  if (!(gamma > 0)) throw Error("gamma must be positive");
  return 4.0 / (gamma * gamma * std::exp(1.0 + M));
}

double log_mu_from_scaling(const Perturbation& fam, int N, double gamma, double lambda) {
  const double Hg = fam.H(gamma);
  if (!(Hg > 0)) throw Error("H(gamma) must be positive");
  const double lphi = log_phi_tail(N - 1, gamma * gamma);
  return 0.5 * (std::log(4.0) - std::log(lambda) - std::log(Hg) - 2.0 * std::log(gamma) - lphi);
}

double BubbleSolution::value(double s) const {
  // Below the seed B is quadratic in s, with s dB/ds = sB0 (s/s0)^2.
  if (s <= std::exp(x.front())) return B.front() + (sB.front() / 2.0) * ((s * s) / std::exp(2 * x.front()) - 1.0);
  const double xx = std::log(s);
  if (xx > x.back() + 1e-12) throw GridMismatch("bubble evaluated beyond its shot range");
  auto it = std::upper_bound(x.begin(), x.end(), xx);
  std::size_t k = static_cast<std::size_t>(it - x.begin());
  if (k >= x.size()) k = x.size() - 1;
  return hermite_cubic(x[k - 1], x[k], B[k - 1], sB[k - 1], B[k], sB[k], xx).value;
}

double BubbleSolution::s_dB(double s) const {
  if (s <= std::exp(x.front())) return sB.front() * (s * s) / std::exp(2 * x.front());
  const double xx = std::log(s);
  if (xx > x.back() + 1e-12) throw GridMismatch("bubble evaluated beyond its shot range");
  auto it = std::upper_bound(x.begin(), x.end(), xx);
  std::size_t k = static_cast<std::size_t>(it - x.begin());
  if (k >= x.size()) k = x.size() - 1;
  return hermite_cubic(x[k - 1], x[k], sB[k - 1], dsB[k - 1], sB[k], dsB[k], xx).value;
}

double BubbleSolution::scaled_source(const Perturbation& fam, double s) const {
  const double b = value(s);
  return source_scale * std::exp(log_phi) * fam.psi_prime_scaled(N, b, log_phi);
}

BubbleSolution shoot_bubble(const Perturbation& fam, int N, double gamma, double lambda,
                            const BubbleOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  if (!(lambda > 0)) throw ConfigError("lambda must be positive");
  if (N < 1) throw ConfigError("N must be >= 1");
  if (!(opt.eps0 > kEps0Min && opt.eps0 < 1.0))
    throw ConfigError("eps0 must lie in (1/sqrt(e), 1)");
  BubbleSolution sol;
  sol.gamma = gamma;
  sol.N = N;
  sol.lambda = lambda;
  sol.eps0 = opt.eps0;
  sol.log_phi = log_phi_tail(N - 1, gamma * gamma);
  const double Hg = fam.H(gamma);
  if (!(Hg > 0)) throw Error("H(gamma) must be positive");
  // c = 2 / (H gamma^2 phi); Psi' is carried scaled by 1/phi.
  const double c_scaled = 2.0 / (Hg * gamma * gamma);
  sol.source_scale = c_scaled * std::exp(-sol.log_phi);
  sol.log_mu = log_mu_from_scaling(fam, N, gamma, lambda);
  sol.mu = std::exp(sol.log_mu);
  sol.s_rho = std::sqrt(std::expm1((1.0 - opt.eps0) * gamma * gamma));
  sol.rho = sol.mu * sol.s_rho;
  const double lphi = sol.log_phi;

  using State = std::array<double, 2>;
  auto rhs = [&](double b) { return c_scaled * fam.psi_prime_scaled(N, b, lphi); };
  auto sys = [&](const State& y, State& dy, double x) {
    const double s = std::exp(x);
    dy[0] = y[1];
    dy[1] = -s * s * rhs(y[0]);
  };
  const double s0 = opt.r_seed;
  const double f0 = rhs(gamma);
  State y{gamma - f0 * s0 * s0 / 4.0, -f0 * s0 * s0 / 2.0};
  const double x0 = std::log(s0), x_rho = std::log(sol.s_rho);
  const double s_src = std::sqrt(std::expm1(gamma));
  const double x_ext = std::log(std::max({sol.s_rho, s_src, opt.extend_to}));
  bool past_rho = false;
  auto observer = [&](const State& st, double x) {
    if (!std::isfinite(st[0]) || !std::isfinite(st[1])) throw StepFailure("non-finite bubble state");
    if (st[0] <= 0.0) {
      if (!past_rho) throw BlowDown("B reaches 0 before rho");
      throw StopShot{};
    }
    if (!sol.x.empty() && x <= sol.x.back()) return;
    State d{};
    sys(st, d, x);
    if (!sol.B.empty() && st[0] > sol.B.back()) sol.decreasing = false;
    sol.x.push_back(x);
    sol.B.push_back(st[0]);
    sol.sB.push_back(st[1]);
    sol.dsB.push_back(d[1]);
  };
  try {
    auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, opt.max_dx,
                                             odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, sys, y, x0, x_rho, 1e-4, observer);
    if (x_ext > x_rho) {
      past_rho = true;
      auto st2 = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, opt.max_dx,
                                           odeint::runge_kutta_dopri5<State>());
      try {
        odeint::integrate_adaptive(st2, sys, y, x_rho, x_ext, 1e-4, observer);
      } catch (const StopShot&) {
      }
    }
  } catch (const odeint::odeint_error& e) {
    throw StepFailure(e.what());
  }
  sol.s_end = std::exp(sol.x.back());
  return sol;
}

ExpansionReport verify_expansion(const Perturbation& fam, const BubbleSolution& sol,
                                 const AsymptoticData& data, const ProfileSet& prof) {
  (void)fam;
  const double g = sol.gamma;
  if (prof.S[0].r_max < sol.s_rho) throw GridMismatch("profile range shorter than rho / mu");
  ExpansionReport rep;
  rep.gamma = g;
  rep.A = data.A(g);
  rep.xi = xi_weight(sol.N, g);
  const double coefA = rep.A - 2.0 * rep.xi;
  const double norm = std::pow(g, -5) + (std::abs(rep.A) + rep.xi) / g;
  auto remainder = [&](double s) {
    const double t = std::log1p(s * s);
    const double approx = g - t / g + prof.S[0](s) / std::pow(g, 3) + prof.S[1](s) / std::pow(g, 5) +
                          coefA * prof.S[2](s) / g;
    return sol.value(s) - approx;
  };
  const int n = 1200;
  const double la = std::log(1e-4), lb = std::log(sol.s_rho);
  double num = 0.0, den = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = std::exp(la + (lb - la) * i / n);
    const double t = std::log1p(s * s);
    const double R = remainder(s);
    const double v = std::abs(R) / (t * norm);
    if (v > rep.normalized_sup) {
      rep.normalized_sup = v;
      rep.s_at_sup = s;
    }
    rep.leading_sup = std::max(rep.leading_sup, std::abs(sol.value(s) - (g - t / g)) * g / t);
    const double basis = prof.S[2](s) / g;
    num += R * basis;
    den += basis * basis;
  }
  const double s_small = 1e-3;
  rep.small_r_ratio = std::abs(remainder(s_small)) / (s_small * s_small);
  rep.fitted_A_correction = den > 0 ? std::abs(num / den) * g * g : 0.0;
  return rep;
}

SourceReport verify_source_expansion(const Perturbation& fam, const BubbleSolution& sol,
                                     const AsymptoticData& data, const ProfileSet& prof,
                                     double delta_tilde0) {
  const double g = sol.gamma;
  SourceReport rep;
  rep.gamma = g;
  rep.delta_tilde0 = delta_tilde0;
  const double A = data.A(g), xi = xi_weight(sol.N, g);
  rep.zeta = std::max({std::pow(g, -4), std::abs(A), xi});
  // mu^2 (lambda/2) Psi'(B) relative to 4 e^{-2t} / gamma.
  auto lhs_rel = [&](double s) {
    const double e = 4.0 / ((1.0 + s * s) * (1.0 + s * s));
    const double b = s == 0.0 ? g : sol.value(s);
    const double src = sol.source_scale * std::exp(sol.log_phi) *
                       fam.psi_prime_scaled(sol.N, b, sol.log_phi);
    return src / (e / g);
  };
  // With mu^2 lambda / 2 = 2 / (H gamma^2 phi): at the center the ratio is
  // H(gamma)^{-1} Psi'_N(gamma) / (2 gamma phi_{N-1}(gamma^2)).
  rep.center_ratio = lhs_rel(0.0);
  rep.center_gap = std::abs(rep.center_ratio - 1.0);
  const double s_top = std::min(std::sqrt(std::expm1(g)), sol.s_end);
  const int n = 1200;
  const double la = std::log(1e-3), lb = std::log(s_top);
  for (int i = 0; i <= n; ++i) {
    const double s = std::exp(la + (lb - la) * i / n);
    const double t = std::log1p(s * s);
    const double e = 4.0 / ((1.0 + s * s) * (1.0 + s * s));
    const double bracket = 1.0 + (prof.S[0].laplacian(s) / (g * g) + prof.S[1].laplacian(s) / std::pow(g, 4) +
                                  (A - 2.0 * xi) * prof.S[2].laplacian(s)) / e;
    const double v = std::abs(lhs_rel(s) - bracket) / (rep.zeta * std::exp(delta_tilde0 * t));
    if (v > rep.weighted_sup) {
      rep.weighted_sup = v;
      rep.t_at_sup = t;
    }
  }
  return rep;
}

double bubble_energy(const Perturbation& fam, const BubbleSolution& sol, double R) {
  if (R > sol.s_end) throw GridMismatch("energy radius beyond the shot range");
  const GaussRule& gr = gauss_legendre(16);
  const double xa = std::log(1e-6), xb = std::log(R);
  const int panels = static_cast<int>(std::ceil((xb - xa) / 0.25));
  std::vector<double> parts(panels);
  for (int k = 0; k < panels; ++k) {
    const double a = xa + (xb - xa) * k / panels, b = xa + (xb - xa) * (k + 1) / panels;
    double s = 0.0;
    for (std::size_t j = 0; j < gr.x.size(); ++j) {
      const double xx = 0.5 * (a + b) + 0.5 * (b - a) * gr.x[j];
      const double r = std::exp(xx);
      s += gr.w[j] * sol.value(r) * sol.scaled_source(fam, r) * r * r;
    }
    parts[k] = 0.5 * (b - a) * s;
  }
  return 2.0 * kPi * pairwise_sum(parts);
}

double first_rescaling_gap(const BubbleSolution& sol, double R) {
  double m = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double s = R * i / 1000.0;
    m = std::max(m, std::abs(sol.gamma * (sol.gamma - sol.value(s)) - std::log1p(s * s)));
  }
  return m;
}

}  // namespace mtc
