#pragma once
// Existence decision: the limit l of the criterion ratio, the comparison of Lambda_g
// with pi e^{1+M}, and the corollary classifiers.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtcrit/perturbation.hpp"

namespace mtc {

enum class Verdict { ExtremalExists_l, ExtremalExists_Lambda, NoExtremal_Truncations, Inconclusive };
std::string verdict_name(Verdict v);

// (gamma^-4 + A/2 + 4 gamma^-3 e^{-1-M} B S) / (gamma^-4 + |A| + gamma^-3 |B|)
double ratio_value(const AsymptoticData& data, double M, double S, double gamma);

// Limit from the leading log-power orders of A and B; empty when the leading coefficients cancel.
std::optional<double> closed_form_limit(const AsymptoticData& data, double M, double S);

struct LimitEstimate {
  double l = 0.0;           // closed form when available, else extrapolated
  double l_grid = 0.0;      // extrapolated from the grid
  double confidence = 0.0;  // spread between extrapolation models
  std::optional<double> l_closed;
  bool oscillating = false;
  std::vector<double> gammas, ratios;
};

std::vector<double> default_gamma_grid();  // e^2 ... e^8
std::vector<double> extended_gamma_grid(); // e^2 ... e^40

LimitEstimate limit_l(const AsymptoticData& data, double M, double S, const std::vector<double>& gamma_grid);

struct CriterionInputs {
  double M = 0.0;
  double S = 0.0;
  double lambda_g = 0.0;        // computed value (lower bound)
  double lambda_g_upper = 0.0;  // upper bound
  LimitEstimate limit;
};

struct CriterionReport {
  double M = 0.0, S = 0.0;
  double lambda_g = 0.0, lambda_g_upper = 0.0, lambda_g_gap = 0.0;
  double pi_e_level = 0.0;
  std::optional<double> l_closed;
  double l_grid = 0.0, l_confidence = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
  std::map<std::string, double> diagnostics;
};

CriterionReport classify(const CriterionInputs& in);

enum class Cor2Class { Exists, NotExists, Border };
std::string cor2_name(Cor2Class c);
Cor2Class cor2_classifier(double a_prime, double b_prime, double c_prime);

// Border case a' = 2, b' = 0 on the disk with g zero near 0: l changes sign at this c'.
double border_threshold(double M = 0.0, double S = 0.5);

// 4(1 + A_bar) > lambda1 e^{1+M}
bool nonasympt_condition(double lambda1, double M, double A_bar);

}  // namespace mtc
