#include "mtcrit/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mtcrit/error.hpp"
#include "mtcrit/numerics.hpp"
#include "mtcrit/special.hpp"

namespace mtc {

double LogPowerTerm::operator()(double gamma) const {
  if (coef == 0.0) return 0.0;
  const double lg = std::log(gamma);
  return coef * std::exp(-p * lg - q * std::log(lg));
}

double AsymptoticData::A(double gamma) const {
  double s = 0.0;
  for (const auto& t : A_terms) s += t(gamma);
  return s;
}

double AsymptoticData::B(double gamma) const {
  double s = 0.0;
  for (const auto& t : B_terms) s += t(gamma);
  return s;
}

bool in_exponent_set(double a, double b) { return a > 0.0 || (a == 0.0 && b > 0.0); }

Perturbation Perturbation::zero(double g0) {
  if (g0 <= -1.0) throw NonAdmissible("g(0) <= -1");
  Perturbation p;
  p.kind_ = FamilyKind::Zero;
  p.g0_ = g0;
  p.pl_.g0 = g0;
  p.sup_g_ = std::max(g0, 0.0);
  // A constant g0 != 0 is only used as a degenerate family by tests; g is then g0 at every t.
  return p;
}

Perturbation Perturbation::power_log(const PowerLogParams& prm) {
  if (!in_exponent_set(prm.a, prm.b))
    throw NonAdmissible("(a, b) outside E: a >= 0 and b > 0 when a = 0");
  if (!in_exponent_set(prm.a_prime, prm.b_prime))
    throw NonAdmissible("(a', b') outside E: a' >= 0 and b' > 0 when a' = 0");
  if (!(prm.R_prime > 1.0)) throw NonAdmissible("R' must exceed 1");
  if (prm.g0 <= -1.0) throw NonAdmissible("g(0) <= -1");
  Perturbation p;
  p.kind_ = FamilyKind::PowerLog;
  p.pl_ = prm;
  p.g0_ = prm.g0;
  p.build_blend();
  p.check_admissible();
  return p;
}

Perturbation Perturbation::tabulated(std::vector<Knot> knots) {
  if (knots.size() < 2) throw NonAdmissible("tabulated family needs at least two knots");
  if (knots.front().t != 0.0 || knots.front().dg != 0.0)
    throw NonAdmissible("first knot must be at t = 0 with g' = 0 (evenness)");
  if (knots.back().g != 0.0 || knots.back().dg != 0.0)
    throw NonAdmissible("last knot must have g = g' = 0 (g vanishes beyond the table)");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i].t > knots[i - 1].t)) throw NonAdmissible("knot abscissae must increase");
  Perturbation p;
  p.kind_ = FamilyKind::Tabulated;
  p.knots_ = std::move(knots);
  p.g0_ = p.knots_.front().g;
  p.pl_.g0 = p.g0_;
  p.check_admissible();
  return p;
}

Jet Perturbation::near_zero(double t) const {
  const double g0 = pl_.g0, c = pl_.c, p = pl_.a + 1.0, b = pl_.b;
  if (t == 0.0 || c == 0.0) {
    double d2 = 0.0;
    if (c != 0.0 && pl_.a <= 1.0) {
      d2 = (pl_.a == 1.0 && b == 0.0) ? 2.0 * c : std::copysign(std::numeric_limits<double>::infinity(), c);
      if (pl_.a == 1.0 && b > 0.0) d2 = 0.0;
    }
    return {g0, 0.0, d2};
  }
  const double L = -std::log(t);
  const double f = std::exp(p * std::log(t) - b * std::log(L));
  const double u = p + b / L;
  const double f1 = f / t * u;
  const double f2 = f / (t * t) * (((p - 1.0) + b / L) * u + b / (L * L));
  return {g0 + c * f, c * f1, c * f2};
}

Jet Perturbation::near_infinity(double t) const {
  const double c = pl_.c_prime, q = -pl_.a_prime, b = pl_.b_prime;
  if (c == 0.0) return {0.0, 0.0, 0.0};
  const double l = std::log(t);
  const double h = std::exp(q * l - b * std::log(l));
  const double v = q - b / l;
  const double h1 = h / t * v;
  const double h2 = h / (t * t) * (((q - 1.0) - b / l) * v + b / (l * l));
  return {c * h, c * h1, c * h2};
}

void Perturbation::build_blend() {
  const double t1 = 1.0 / pl_.R_prime, t2 = pl_.R_prime, h = t2 - t1;
  const Jet y0 = near_zero(t1), y1 = near_infinity(t2);
  const double c0 = y0.g, c1 = h * y0.dg, c2 = 0.5 * h * h * y0.d2g;
  const double r0 = y1.g - (c0 + c1 + c2);
  const double r1 = h * y1.dg - (c1 + 2.0 * c2);
  const double r2 = h * h * y1.d2g - 2.0 * c2;
  blend_ = {c0, c1, c2, 10.0 * r0 - 4.0 * r1 + 0.5 * r2, -15.0 * r0 + 7.0 * r1 - r2,
            6.0 * r0 - 3.0 * r1 + 0.5 * r2};
}

Jet Perturbation::eval_raw(double t) const {
  t = std::abs(t);
  switch (kind_) {
    case FamilyKind::Zero:
      return {g0_, 0.0, 0.0};
    case FamilyKind::PowerLog: {
      const double t1 = 1.0 / pl_.R_prime, t2 = pl_.R_prime;
      if (t <= t1) return near_zero(t);
      if (t >= t2) return near_infinity(t);
      const double h = t2 - t1, s = (t - t1) / h;
      const auto& c = blend_;
      const double v = c[0] + s * (c[1] + s * (c[2] + s * (c[3] + s * (c[4] + s * c[5]))));
      const double d = c[1] + s * (2 * c[2] + s * (3 * c[3] + s * (4 * c[4] + s * 5 * c[5])));
      const double dd = 2 * c[2] + s * (6 * c[3] + s * (12 * c[4] + s * 20 * c[5]));
      return {v, d / h, dd / (h * h)};
    }
    case FamilyKind::Tabulated: {
      if (t >= knots_.back().t) return {0.0, 0.0, 0.0};
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                 [](double x, const Knot& k) { return x < k.t; });
      const Knot& k1 = *it;
      const Knot& k0 = *(it - 1);
      const auto hv = hermite_cubic(k0.t, k1.t, k0.g, k0.dg, k1.g, k1.dg, t);
      const double h = k1.t - k0.t, s = (t - k0.t) / h;
      const double dd = ((12 * s - 6) * (k0.g - k1.g) / h + (6 * s - 4) * k0.dg + (6 * s - 2) * k1.dg) / h;
      return {hv.value, hv.deriv, dd};
    }
  }
  return {0.0, 0.0, 0.0};
}

Jet Perturbation::eval(double t) const {
  const Jet j = eval_raw(t);
  if (!(j.g > -1.0)) {
    std::ostringstream os;
    os << "g(" << t << ") = " << j.g << " <= -1";
    throw NonAdmissible(os.str());
  }
  // g is even: the sign of g' follows the sign of t.
  return t < 0 ? Jet{j.g, -j.dg, j.d2g} : j;
}

void Perturbation::check_admissible() {
  double gmin = g0_, gmax = g0_;
  auto visit = [&](double t) {
    const double v = eval_raw(t).g;
    gmin = std::min(gmin, v);
    gmax = std::max(gmax, v);
  };
  if (kind_ == FamilyKind::PowerLog) {
    const double t1 = 1.0 / pl_.R_prime, t2 = pl_.R_prime;
    for (int i = 0; i <= 400; ++i) visit(t1 * std::pow(1e-8, 1.0 - i / 400.0));
    for (int i = 0; i <= 4000; ++i) visit(t1 + (t2 - t1) * i / 4000.0);
    // Infinity branch: endpoint, the critical point of t^{-a'}(log t)^{-b'}, and the limit 0.
    double inf_min = std::min(0.0, eval_raw(t2).g);
    double inf_max = std::max(0.0, eval_raw(t2).g);
    if (pl_.a_prime > 0.0) {
      const double lstar = -pl_.b_prime / pl_.a_prime;
      if (lstar > std::log(t2) && lstar < 700.0) {
        const double v = eval_raw(std::exp(lstar)).g;
        inf_min = std::min(inf_min, v);
        inf_max = std::max(inf_max, v);
      }
    }
    if (inf_min <= -1.0 + 1e-9) throw NonAdmissible("infinity branch dips to g <= -1 + 1e-9");
    gmin = std::min(gmin, inf_min);
    gmax = std::max(gmax, inf_max);
  } else if (kind_ == FamilyKind::Tabulated) {
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
      for (int j = 0; j <= 200; ++j) visit(knots_[i].t + (knots_[i + 1].t - knots_[i].t) * j / 200.0);
    gmax = std::max(gmax, 0.0);
  }
  if (gmin <= -1.0) throw NonAdmissible("g <= -1 on the sampled range");
  sup_g_ = gmax;
}

double Perturbation::H(double t) const {
  t = std::abs(t);
  if (t == 0.0) throw Error("H(0) undefined; use tH");
  const Jet j = eval(t);
  return 1.0 + j.g + j.dg / (2.0 * t);
}

double Perturbation::tH(double t) const {
  if (t == 0.0) return 0.0;
  const Jet j = eval(t);
  return t * (1.0 + j.g) + 0.5 * j.dg;
}

double Perturbation::psi(int N, double t) const {
  const double T = t * t;
  const double onepg = 1.0 + eval(t).g;
  const double l = log_add_exp(std::log1p(T), log_phi_tail(N, T));
  if (l + std::log(onepg) > kExpBudget) throw Overflow("Psi_N beyond exponent budget");
  return onepg * std::exp(l);
}

double Perturbation::psi_prime_scaled(int N, double t, double log_scale) const {
  const double T = t * t;
  const Jet j = eval(t);
  const double twotH = 2.0 * (t == 0.0 ? 0.0 : t * (1.0 + j.g) + 0.5 * j.dg);
  double s = 0.0;
  if (T > 0.0) s += twotH * std::exp(log_phi_tail(N, T) - log_scale);
  const double lpow = T > 0.0 ? N * std::log(T) - std::lgamma(N + 1.0) : -std::numeric_limits<double>::infinity();
  s += 2.0 * t * (1.0 + j.g) * (std::exp(-log_scale) + std::exp(lpow - log_scale));
  s += j.dg * (1.0 + T) * std::exp(-log_scale);
  return s;
}

double Perturbation::psi_prime(int N, double t) const {
  if (t * t > kExpBudget) throw Overflow("Psi'_N beyond exponent budget");
  return psi_prime_scaled(N, t, 0.0);
}

double Perturbation::g_N(int N, double t) const {
  const double T = t * t;
  const double onepg = 1.0 + eval(t).g;
  const double phi_part = T > 0.0 ? std::exp(log_phi_tail(N, T) - T) : 0.0;
  return onepg * ((1.0 + T) * std::exp(-T) + phi_part) - 1.0;
}

double Perturbation::H_N(int N, double t) const {
  if (t == 0.0) throw Error("H_N(0) undefined");
  return psi_prime_scaled(N, t, t * t) / (2.0 * t);
}

AsymptoticData asymptotic_data(const Perturbation& fam) {
  if (fam.user_asymptotics) return *fam.user_asymptotics;
  AsymptoticData d;
  switch (fam.kind()) {
    case FamilyKind::Zero:
      d.B_terms = {{1.0 + fam.g0(), 1.0, 0.0}};
      d.kappa = 1.0;
      return d;
    case FamilyKind::PowerLog: {
      const auto& p = fam.params();
      if (p.c_prime != 0.0) {
        if (p.a_prime > 0.0)
          d.A_terms = {{p.c_prime * p.a_prime, p.a_prime + 2.0, p.b_prime}};
        else
          d.A_terms = {{p.c_prime * p.b_prime, 2.0, p.b_prime + 1.0}};
      }
      d.B_terms = {{1.0 + p.g0, 1.0, 0.0}};
      if (p.c != 0.0) {
        d.B_terms.push_back({0.5 * p.c * (p.a + 1.0), p.a, p.b});
        d.kappa = std::min(p.a, 1.0);
      }
      return d;
    }
    case FamilyKind::Tabulated:
      break;
  }
  throw Unsupported("asymptotic data must be supplied for tabulated families");
}

bool ValidationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

namespace {

// Residual trend: finite and decaying from the first to the last grid point (all-zero passes).
bool decays(const std::vector<double>& r) {
  for (double v : r)
    if (!std::isfinite(v)) return false;
  const double mx = *std::max_element(r.begin(), r.end());
  if (mx < 1e-13) return true;
  return r.back() < r.front();
}

double sup_over(double a, double b, int n, const std::function<double(double)>& f) {
  double m = 0.0;
  for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(f(a + (b - a) * i / n)));
  return m;
}

}  // namespace

ValidationReport validate_hypotheses(const Perturbation& fam, const AsymptoticData& data,
                                     const std::vector<double>& grid) {
  ValidationReport rep;
  auto add = [&](std::string name, std::function<double(double)> per_gamma, std::string note) {
    HypothesisCheck c;
    c.name = std::move(name);
    c.gammas = grid;
    for (double g : grid) c.normalized_residual.push_back(per_gamma(g));
    c.pass = decays(c.normalized_residual);
    c.note = std::move(note);
    rep.checks.push_back(std::move(c));
  };

  add("InftyBehavior a", [&](double g) {
    const double Hg = fam.H(g), A = data.A(g);
    return sup_over(0.0, 5.0, 200, [&](double t) { return fam.H(g - t / g) / Hg - 1.0 - A * t; }) /
           (std::abs(A) + std::pow(g, -4));
  }, "sup_{t in [0,5]} |H(g-t/g)/H(g) - 1 - A t| / (|A| + g^-4)");

  add("ZeroBehavior a", [&](double g) {
    const double B = data.B(g);
    return sup_over(1.0, 5.0, 200, [&](double t) { return fam.tH(t / g) - B * data.F(t); }) /
           (std::abs(B) + 1.0 / g);
  }, "sup_{t in [1,5]} |(t/g)H(t/g) - B F(t)| / (|B| + 1/g)");

  add("ZeroBehaviorG a", [&](double g) {
    const double B = data.B(g);
    return sup_over(1.0, 5.0, 200, [&](double t) {
             const double x = t / g;
             return (1.0 + fam.g(x)) * std::exp(x * x) - (1.0 + fam.g0()) -
                    2.0 * B * data.F(t) * t / (g * (data.kappa + 1.0));
           }) /
           (std::abs(B) / g + 1.0 / (g * g));
  }, "sup_{t in [1,5]} of the zero-side expansion of (1+g)exp(t^2), scaled by |B|/g + g^-2");

  add("AsymptG a", [&](double g) {
    const double Hg = fam.H(g), A = data.A(g);
    return sup_over(0.0, 5.0, 200, [&](double t) {
             return 1.0 + fam.g(g - t / g) - Hg * (1.0 + A * (t + 0.5));
           }) /
           (std::abs(Hg) * (std::abs(A) + std::pow(g, -4)));
  }, "sup_{t in [0,5]} |1+g(g-t/g) - H(g)(1 + A(t+1/2))| / (|H|(|A| + g^-4))");

  add("EqHBehavior", [&](double g) { return std::abs(fam.H(g) - 1.0); }, "|H(g) - 1|");
  add("A to 0", [&](double g) { return std::abs(data.A(g)); }, "|A(g)|");
  add("B to 0", [&](double g) { return std::abs(data.B(g)); }, "|B(g)|");

  // Growth bounds b): smallest delta on a grid whose constant stays bounded along the ladder.
  auto constant_inf = [&](double g, double delta) {
    const double Hg = fam.H(g), A = data.A(g);
    const double tmax = g * g - 1e-6 * g;
    double m = 0.0;
    for (int i = 0; i <= 600; ++i) {
      const double t = tmax * std::pow(double(i) / 600.0, 2.0);
      m = std::max(m, std::abs(fam.H(g - t / g) - Hg) /
                          (std::abs(Hg) * (std::abs(A) + std::pow(g, -4)) * std::exp(delta * t)));
    }
    return m;
  };
  auto constant_zero = [&](double g, double delta) {
    const double B = data.B(g);
    double m = 0.0;
    for (int i = 0; i <= 600; ++i) {
      const double t = g * g * std::pow(double(i) / 600.0, 2.0);
      m = std::max(m, std::abs(fam.tH(t / g)) / ((std::abs(B) + 1.0 / g) * std::exp(delta * t)));
    }
    return m;
  };
  auto measure = [&](auto&& fn, double& delta_out, double& C_out) {
    delta_out = 0.95;
    C_out = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 19; ++k) {
      const double d = 0.05 * k;
      const double c_first = fn(grid.front(), d), c_last = fn(grid.back(), d);
      if (std::isfinite(c_last) && c_last <= 2.0 * c_first + 1e-12) {
        delta_out = d;
        C_out = 0.0;
        for (double g : grid) C_out = std::max(C_out, fn(g, d));
        return true;
      }
    }
    return false;
  };
  HypothesisCheck b_inf{"InftyBehavior b", false, grid, {}, "measured delta0 and constant C"};
  b_inf.pass = measure(constant_inf, rep.delta0_measured, rep.C_infinity);
  b_inf.normalized_residual = {rep.delta0_measured, rep.C_infinity};
  rep.checks.push_back(b_inf);
  HypothesisCheck b_zero{"ZeroBehavior b", false, grid, {}, "measured delta0' and constant C"};
  b_zero.pass = measure(constant_zero, rep.delta0_prime_measured, rep.C_zero);
  b_zero.normalized_residual = {rep.delta0_prime_measured, rep.C_zero};
  rep.checks.push_back(b_zero);
  return rep;
}

}  // namespace mtc
