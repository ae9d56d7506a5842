#include "mtcrit/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mtcrit/error.hpp"
#include "mtcrit/numerics.hpp"
#include "mtcrit/parallel.hpp"

namespace mtc {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ExtremalExists_l:
      return "ExtremalExists_l";
    case Verdict::ExtremalExists_Lambda:
      return "ExtremalExists_Lambda";
    case Verdict::NoExtremal_Truncations:
      return "NoExtremal_Truncations";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

double ratio_value(const AsymptoticData& data, double M, double S, double gamma) {
  const double g4 = std::pow(gamma, -4), g3 = std::pow(gamma, -3);
  const double A = data.A(gamma), B = data.B(gamma);
  const double den = g4 + std::abs(A) + g3 * std::abs(B);
  if (!(den > 0) || !std::isfinite(den)) throw ZeroDenominator("ratio denominator vanishes at gamma");
  return (g4 + A / 2.0 + 4.0 * g3 * std::exp(-1.0 - M) * B * S) / den;
}

std::optional<double> closed_form_limit(const AsymptoticData& data, double M, double S) {
  // Each contribution is coef gamma^{-p} (log gamma)^{-q}; the smallest (p, q) dominates.
  struct Term {
    double p, q, coef;
    int kind;  // 0: gamma^-4, 1: A, 2: gamma^-3 B
  };
  std::vector<Term> terms{{4.0, 0.0, 1.0, 0}};
  for (const auto& t : data.A_terms)
    if (t.coef != 0.0) terms.push_back({t.p, t.q, t.coef, 1});
  for (const auto& t : data.B_terms)
    if (t.coef != 0.0) terms.push_back({t.p + 3.0, t.q, t.coef, 2});
  constexpr double tol = 1e-12;
  double p = terms[0].p, q = terms[0].q;
  for (const auto& t : terms)
    if (t.p < p - tol || (std::abs(t.p - p) <= tol && t.q < q - tol)) {
      p = t.p;
      q = t.q;
    }
  double sum[3] = {0, 0, 0};
  for (const auto& t : terms)
    if (std::abs(t.p - p) <= tol && std::abs(t.q - q) <= tol) sum[t.kind] += t.coef;
  const double den = sum[0] + std::abs(sum[1]) + std::abs(sum[2]);
  if (den == 0.0) return std::nullopt;
  return (sum[0] + sum[1] / 2.0 + 4.0 * std::exp(-1.0 - M) * S * sum[2]) / den;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> g;
  for (int k = 2; k <= 8; ++k) g.push_back(std::exp(static_cast<double>(k)));
  return g;
}

std::vector<double> extended_gamma_grid() {
  std::vector<double> g;
  for (int k = 2; k <= 40; k += 2) g.push_back(std::exp(static_cast<double>(k)));
  return g;
}

LimitEstimate limit_l(const AsymptoticData& data, double M, double S, const std::vector<double>& gamma_grid) {
  if (gamma_grid.size() < 4) throw ConfigError("gamma grid needs at least 4 points");
  for (std::size_t i = 1; i < gamma_grid.size(); ++i)
    if (!(gamma_grid[i] > gamma_grid[i - 1])) throw ConfigError("gamma grid must be strictly increasing");
  if (!(gamma_grid.front() > 1.0)) throw ConfigError("gamma grid must lie above 1");
  LimitEstimate est;
  est.gammas = gamma_grid;
  est.ratios = map_values(Exec::Parallel, gamma_grid.size(),
                          [&](std::size_t i) { return ratio_value(data, M, S, gamma_grid[i]); });
  const std::size_t n = gamma_grid.size();
  std::vector<double> one(n, 1.0), il(n), il2(n), ig(n), ig2(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gamma_grid[i];
    il[i] = 1.0 / std::log(g);
    il2[i] = il[i] * il[i];
    ig[i] = 1.0 / g;
    ig2[i] = ig[i] * ig[i];
  }
  const std::vector<std::vector<std::vector<double>>> models{{one, il, ig}, {one, il, il2}, {one, ig, ig2}};
  auto fit = [&](const std::vector<std::vector<double>>& cols) {
    const auto c = least_squares(cols, est.ratios);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) f += c[j] * cols[j][i];
      ss += (f - est.ratios[i]) * (f - est.ratios[i]);
    }
    return std::pair{c[0], std::sqrt(ss / n)};
  };
  // Fit each model; the one with the smallest residual gives l_grid, the spread between
  // models plus that residual gives the confidence.
  std::vector<double> ls, res;
  for (const auto& cols : models) {
    const auto [l, r] = fit(cols);
    ls.push_back(l);
    res.push_back(r);
  }
  // Rational model (l + a m) / (1 + b m), linear in (l, a, b) as r = l + a m - b m r, with
  // m = gamma^-d (log gamma)^q scanned. The ratio has exactly this form when a single
  // monomial corrects the leading order.
  double best_l = 0.0, best_r = INFINITY;
  for (int q = -2; q <= 2; ++q)
    for (int k = 5; k <= 300; ++k) {
      const double d = 0.01 * k;
      std::vector<double> p1(n), p2(n);
      for (std::size_t i = 0; i < n; ++i) {
        p1[i] = std::pow(gamma_grid[i], -d) * std::pow(std::log(gamma_grid[i]), q);
        p2[i] = -p1[i] * est.ratios[i];
      }
      try {
        const auto [l, r] = fit({one, p1, p2});
        if (r < best_r) {
          best_r = r;
          best_l = l;
        }
      } catch (const Error&) {
        // a constant sequence makes the last column proportional to the second
      }
    }
  if (!std::isfinite(best_r)) best_l = ls[0], best_r = res[0];
  ls.push_back(best_l);
  res.push_back(best_r);
  const std::size_t best = static_cast<std::size_t>(std::min_element(res.begin(), res.end()) - res.begin());
  est.l_grid = ls[best];
  double spread = 0.0;
  for (double v : ls) spread = std::max(spread, std::abs(v - ls[best]));
  est.confidence = spread + res[best];
  // Oscillation: the sequence of increments changes sign repeatedly above round-off.
  double scale = 0.0;
  for (double v : est.ratios) scale = std::max(scale, std::abs(v));
  int changes = 0, last = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d = est.ratios[i] - est.ratios[i - 1];
    if (std::abs(d) <= 1e-13 * std::max(scale, 1.0)) continue;
    const int s = d > 0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  est.oscillating = changes >= 2;
  est.l_closed = closed_form_limit(data, M, S);
  est.l = est.l_closed ? *est.l_closed : est.l_grid;
  return est;
}

CriterionReport classify(const CriterionInputs& in) {
  CriterionReport rep;
  rep.M = in.M;
  rep.S = in.S;
  rep.lambda_g = in.lambda_g;
  rep.lambda_g_upper = std::max(in.lambda_g_upper, in.lambda_g);
  rep.lambda_g_gap = rep.lambda_g_upper - rep.lambda_g;
  rep.pi_e_level = std::numbers::pi * std::exp(1.0 + in.M);
  rep.l_closed = in.limit.l_closed;
  rep.l_grid = in.limit.l_grid;
  rep.l_confidence = in.limit.confidence;
  const bool have_closed = in.limit.l_closed.has_value();
  const double l = in.limit.l;
  const double margin = have_closed ? 1e-12 : in.limit.confidence;
  const bool l_usable = have_closed || !in.limit.oscillating;
  rep.diagnostics["l"] = l;
  rep.diagnostics["l_margin"] = margin;
  if (have_closed) rep.diagnostics["closed_minus_grid"] = *in.limit.l_closed - in.limit.l_grid;
  if (!in.limit.ratios.empty()) rep.diagnostics["ratio_last"] = in.limit.ratios.back();
  rep.diagnostics["lambda_minus_level"] = rep.lambda_g - rep.pi_e_level;
  if (rep.lambda_g >= rep.pi_e_level) {
    rep.verdict = Verdict::ExtremalExists_Lambda;
  } else if (l_usable && l > margin) {
    rep.verdict = Verdict::ExtremalExists_l;
  } else if (l_usable && l < -margin && rep.lambda_g_upper < rep.pi_e_level) {
    rep.verdict = Verdict::NoExtremal_Truncations;
    rep.note = "non-existence holds for the truncations g_N with N >= N0; N0 is not constructive";
  } else {
    rep.verdict = Verdict::Inconclusive;
    if (!l_usable) rep.note = "ratio sequence oscillates on the grid";
    else rep.note = "l within its confidence of 0 or Lambda_g within its gap of the level";
  }
  return rep;
}

std::string cor2_name(Cor2Class c) {
  switch (c) {
    case Cor2Class::Exists:
      return "Exists";
    case Cor2Class::NotExists:
      return "NotExists";
    case Cor2Class::Border:
      return "Border";
  }
  return "Border";
}

Cor2Class cor2_classifier(double a_prime, double b_prime, double c_prime) {
  if (!in_exponent_set(a_prime, b_prime)) throw ConfigError("(a', b') outside the exponent set");
  if (c_prime == 0.0) throw ConfigError("c' must be nonzero");
  if (a_prime > 2.0 || c_prime > 0.0) return Cor2Class::Exists;
  if (a_prime < 2.0) return Cor2Class::NotExists;
  return Cor2Class::Border;
}

double border_threshold(double M, double S) { return -(1.0 + 4.0 * std::exp(-1.0 - M) * S); }

bool nonasympt_condition(double lambda1, double M, double A_bar) {
  return 4.0 * (1.0 + A_bar) > lambda1 * std::exp(1.0 + M);
}

}  // namespace mtc
