#include "mtcrit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mtcrit/criterion.hpp"
#include "mtcrit/domain.hpp"
#include "mtcrit/numerics.hpp"
#include "mtcrit/perturbation.hpp"
#include "mtcrit/profiles.hpp"
#include "mtcrit/special.hpp"

namespace mtc {

namespace {
constexpr double kPi = std::numbers::pi;

CheckRow row(std::string name, double value, double threshold, std::string note = {}) {
  CheckRow r;
  r.name = std::move(name);
  r.value = value;
  r.threshold = threshold;
  r.pass = std::isfinite(value) && value <= threshold;
  r.note = std::move(note);
  return r;
}

double ref(const VerifyOptions& opt, const std::string& key, double fallback) {
  const auto it = opt.reference_override.find(key);
  return it == opt.reference_override.end() ? fallback : it->second;
}
}  // namespace

std::vector<CheckRow> run_verification(const VerifyOptions& opt) {
  const double ts = opt.tolerance_scale;
  std::vector<CheckRow> rows;

  const Domain disk({});
  rows.push_back(row("lambda1 disk", std::abs(disk.lambda1() - 5.783185962946784), 1e-6 * ts));
  rows.push_back(row("Robin disk center", std::abs(disk.robin({0.0, 0.0})), 1e-12 * ts));
  {
    DomainSpec rs;
    rs.shape = Shape::Rectangle;
    rs.width = 2.0;
    const Domain rect(rs);
    const Point a{0.3, 0.4}, b{1.55, 0.8};
    rows.push_back(row("Green symmetry rectangle", std::abs(rect.green(a, b) - rect.green(b, a)), 1e-12 * ts));
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> nd(0, 200);
  std::uniform_real_distribution<double> td(0.01, 400.0);
  double alg = 0.0, form = 0.0, step = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int N = nd(rng);
    const double T = td(rng), G = td(rng);
    alg = std::max(alg, alg_relat_residual(N, T, G));
    form = std::max(form, formula_phi_residual(N, G));
    if (N >= 1) {
      const double lhs = log_phi_tail(N - 1, T);
      const double rhs = log_add_exp(log_phi_tail(N, T), N * std::log(T) - std::lgamma(N + 1.0));
      step = std::max(step, std::abs(std::expm1(lhs - rhs)));
    }
  }
  rows.push_back(row("AlgRelat", alg, 1e-12 * ts));
  rows.push_back(row("FormulaPhi", form, 1e-12 * ts));
  rows.push_back(row("phi step identity", step, 1e-12 * ts));
  rows.push_back(row("Stirling peak N=50",
                     std::abs(truncation_peak(50) * std::sqrt(2.0 * kPi * 50.0) - 1.0), 0.01 * ts));

  ProfileOptions po;
  po.abs_tol *= ts;
  po.rel_tol *= ts;
  const ProfileSet ps = solve_profiles(po);
  const double refA[3] = {ref(opt, "A_0", kA0), ref(opt, "A_1", kA1), ref(opt, "A_2", kA2)};
  for (int i = 0; i < 3; ++i)
    rows.push_back(row("ExpansionSi A_" + std::to_string(i), std::abs(ps.S[i].asym_slope / refA[i] - 1.0), 5e-3 * ts));
  rows.push_back(row("ExpansionSi B_0", std::abs(ps.S[0].asym_intercept - ref(opt, "B_0", kB0)), 1e-3 * ts));
  const ProfileIntegrals pint = profile_integrals(ps);
  for (int i = 0; i < 3; ++i)
    rows.push_back(row("NoteSi A_" + std::to_string(i), std::abs(pint.A_check[i] / refA[i] - 1.0), 5e-3 * ts));
  rows.push_back(row("Integral e^{-2T0} S0", std::abs(pint.I_S0), 1e-6 * ts));
  rows.push_back(row("Integral e^{-2T0} T0^2", std::abs(pint.I_T0sq - 2.0 * kPi), 1e-6 * ts));
  double gap = 0.0;
  for (int k = 0; k <= 4000; ++k) {
    const double r = 100.0 * k / 4000.0;
    gap = std::max(gap, std::abs(s0_explicit(r) - ps.S[0](r)));
  }
  rows.push_back(row("S0 explicit vs ODE", gap, 1e-7 * ts));

  const AsymptoticData zero = asymptotic_data(Perturbation::zero());
  const double l0 = (1.0 + 2.0 / std::exp(1.0)) / 2.0;
  rows.push_back(row("Ratio disk g=0",
                     std::max(std::abs(ratio_value(zero, 0.0, 0.5, 10.0) - l0),
                              std::abs(ratio_value(zero, 0.0, 0.5, 100.0) - l0)),
                     1e-12 * ts));
  auto border_l = [](double cp) {
    PowerLogParams p;
    p.c_prime = cp;
    p.a_prime = 2.0;
    p.b_prime = 0.0;
    return *closed_form_limit(asymptotic_data(Perturbation::power_log(p)), 0.0, 0.5);
  };
  const double cstar = find_root(border_l, -3.0, -1.0, 1e-12);
  rows.push_back(row("Border threshold", std::abs(cstar - border_threshold()), 1e-3 * ts));

  {
    PowerLogParams p;
    p.c_prime = 1.0;
    const Perturbation fam = Perturbation::power_log(p);
    double worst = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double t = 0.1 * k, h = 1e-5;
      auto F = [&](double s) { return (1.0 + fam.g(s)) * std::exp(s * s); };
      const double fd = (F(t + h) - F(t - h)) / (2 * h);
      const double an = 2.0 * fam.tH(t) * std::exp(t * t);
      worst = std::max(worst, std::abs(fd / an - 1.0));
    }
    rows.push_back(row("Croissance", worst, 1e-6 * ts));
  }
  return rows;
}

}  // namespace mtc
