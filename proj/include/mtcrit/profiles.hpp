#pragma once
// The standard bubble T0(r) = log(1 + r^2) and the radial correction profiles S0, S1, S2
// solving  Delta S - 8 exp(-2 T0) S = RHS_i  (Delta = -(d_rr + d_r / r)), S(0) = S'(0) = 0.

#include <array>
#include <vector>

namespace mtc {

double t0(double r);

// Closed form of S0 (dilogarithm form of the integral term).
double s0_explicit(double r);
long double s0_explicit_ld(long double r);
// Same closed form with the integral term by adaptive quadrature (oracle).
double s0_explicit_quadrature(double r);

// RHS_i(r); i = 1 uses the explicit S0.
double profile_rhs(int i, double r);
long double profile_rhs_ld(int i, long double r);

// A radial function sampled at the integrator's accepted steps in x = log r.
// Beyond the sampled range it follows the far-field form (A/4pi) log(1/r^2) + B.
struct RadialProfile {
  int index = 0;
  std::vector<double> x;      // log r
  std::vector<double> value;  // S
  std::vector<double> rds;    // r S'(r) = dS/dx
  std::vector<double> drds;   // d(r S')/dx
  double asym_slope = 0.0;      // A_i, from -2 pi r S'(r) at r_max
  double asym_intercept = 0.0;  // B_i, Richardson value from r in {250, 500, 1000}
  double intercept_far = 0.0;   // B_i read at r_max
  double r_min = 0.0, r_max = 0.0;
  double rhs_scale = 1.0;

  double operator()(double r) const;
  double r_dS(double r) const;
  // Delta S_i(r) = RHS_i(r) + 8 exp(-2 T0) S_i(r), from the equation.
  double laplacian(double r) const;
};

struct ProfileOptions {
  double r_min = 1e-6;
  double r_max = 1e6;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_dx = 0.01;
  double rhs_scale = 1.0;
};

RadialProfile solve_profile(int i, const ProfileOptions& opt = {});

struct ProfileSet {
  std::array<RadialProfile, 3> S;
  double S_of(int i, double r) const { return S[i](r); }
};

// Solves the three profiles (independent, parallel over i).
ProfileSet solve_profiles(const ProfileOptions& opt = {});

struct ProfileIntegrals {
  double I_S0 = 0.0;    // int e^{-2T0} S0
  double I_T0sq = 0.0;  // int e^{-2T0} T0^2
  std::array<double, 3> A_check{};  // int Delta S_i
};

ProfileIntegrals profile_integrals(const ProfileSet& ps);

// Tail decay ratio of value - (far-field form) between r and 2r, and the predicted ratio
// for the O(log(r)^k / r^2) remainder.
struct TailCheck {
  double measured_ratio, predicted_ratio;
};
TailCheck tail_check(const RadialProfile& p, double r = 500.0);

// Constants of the far-field expansion (reference values for A_i, B_0).
inline constexpr double kA0 = 12.566370614359172;                 // 4 pi
inline constexpr double kA1 = 4.0 * 3.141592653589793 * (3.0 + 3.141592653589793 * 3.141592653589793 / 6.0);
inline constexpr double kA2 = 6.283185307179586;                  // 2 pi
inline constexpr double kB0 = 3.141592653589793 * 3.141592653589793 / 6.0 + 2.0;

}  // namespace mtc
