#pragma once
// Radial bubble: solution of B'' + B'/r = -(lambda/2) Psi'_N(B), B(0) = gamma, B'(0) = 0,
// shot in the scaled variable s = r / mu, where lambda H(gamma) mu^2 gamma^2 phi_{N-1}(gamma^2) = 4.

#include <vector>

#include "mtcrit/perturbation.hpp"
#include "mtcrit/profiles.hpp"

namespace mtc {

struct BubbleOptions {
  double eps0 = 0.75;
  double r_seed = 1e-6;  // scaled seed radius
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  double max_dx = 0.01;
  double extend_to = 30.0;  // shoot past rho up to at least this scaled radius (if B stays positive)
};

struct BubbleSolution {
  double gamma = 0.0;
  int N = 1;
  double lambda = 0.0;
  double mu = 0.0, log_mu = 0.0;
  double eps0 = 0.75;
  double rho = 0.0;
  double s_rho = 0.0;   // rho / mu
  double s_end = 0.0;   // last shot scaled radius (>= s_rho)
  double source_scale = 0.0;  // 2 / (H(gamma) gamma^2 phi_{N-1}(gamma^2))
  double log_phi = 0.0;       // log phi_{N-1}(gamma^2)
  // Samples in x = log s.
  std::vector<double> x, B, sB, dsB;
  bool decreasing = true;

  double value(double s) const;  // B at scaled radius s
  double s_dB(double s) const;   // s dB/ds
  // Source term (lambda/2) Psi'_N(B(s)) times mu^2.
  double scaled_source(const Perturbation& fam, double s) const;
};

double lambda_from_level(double gamma, double M);

// mu from the scaling relation, in log form.
double log_mu_from_scaling(const Perturbation& fam, int N, double gamma, double lambda);

BubbleSolution shoot_bubble(const Perturbation& fam, int N, double gamma, double lambda,
                            const BubbleOptions& opt = {});

struct ExpansionReport {
  double gamma = 0.0;
  double normalized_sup = 0.0;  // sup |R| / (t (gamma^-5 + (|A| + xi)/gamma)) on (0, rho]
  double s_at_sup = 0.0;
  double leading_sup = 0.0;     // sup |B - (gamma - t/gamma)| gamma / t
  double small_r_ratio = 0.0;   // |R(s)| / s^2 at the smallest sample
  double fitted_A_correction = 0.0;  // least-squares coefficient a in R ~ a S2 / gamma, times gamma^2
  double xi = 0.0;
  double A = 0.0;
};

ExpansionReport verify_expansion(const Perturbation& fam, const BubbleSolution& sol,
                                 const AsymptoticData& data, const ProfileSet& prof);

struct SourceReport {
  double gamma = 0.0;
  double center_ratio = 0.0;     // LHS / RHS at r = 0
  double center_gap = 0.0;       // |LHS/RHS - 1| at r = 0
  double weighted_sup = 0.0;     // sup_{t <= gamma} |LHS/RHS_0 - bracket| / (zeta e^{delta t})
  double t_at_sup = 0.0;
  double zeta = 0.0;
  double delta_tilde0 = 0.0;
};

// Compares (lambda/2) Psi'_N(B) with (4 e^{-2t}/(mu^2 gamma)) [1 + DS0/g^2 + DS1/g^4 + (A - 2 xi) DS2]
// where the profile Laplacians enter relative to the leading density 4 e^{-2t}.
SourceReport verify_source_expansion(const Perturbation& fam, const BubbleSolution& sol,
                                     const AsymptoticData& data, const ProfileSet& prof,
                                     double delta_tilde0 = 0.75);

// (lambda/2) int_{B(R mu)} B Psi'_N(B): tends to 4 pi as R grows.
double bubble_energy(const Perturbation& fam, const BubbleSolution& sol, double R);

// Sup over |y| <= R of gamma (gamma - B(y)) - log(1 + |y|^2).
double first_rescaling_gap(const BubbleSolution& sol, double R);

}  // namespace mtc
