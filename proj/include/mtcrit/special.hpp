#pragma once
// Special functions: the exponential-series tail phi_N(T) = sum_{k>N} T^k/k! in log scale,
// the truncation weight xi, the dilogarithm and the order-0/1 Bessel functions.

namespace mtc {

// Exponent budget used before switching to log-scale arithmetic.
inline constexpr double kExpBudget = 700.0;

// log(phi_N(T)); -inf at T = 0. N >= 0, T >= 0.
double log_phi_tail(int N, double T);
// phi_N(T); throws Overflow if the value exceeds the exponent budget.
double phi_tail(int N, double T);

// xi(N, gamma) = gamma^{2(N-1)} / (phi_{N-1}(gamma^2) (N-1)!), N >= 1.
double xi_weight(int N, double gamma);
double log_xi_weight(int N, double gamma);

// Li2(x) for x <= 1.
double dilog(double x);
long double dilog(long double x);

double bessel_j0(double x);
double bessel_j1(double x);
// First positive zero of J0.
double bessel_j0_first_zero();

// Residual of phi_N(T) = phi_N(G) e^{-(G-T)} - e^T int_T^G e^{-s} s^N/N! ds, relative to the
// largest of the three terms. The integral comes from the regularized incomplete gamma.
double alg_relat_residual(int N, double T, double G);
// Relative gap between the series phi_N(G) and e^G int_0^G e^{-s} s^N/N! ds.
double formula_phi_residual(int N, double G);
// sup_t t^{2N} e^{-t^2} / N!, located numerically.
double truncation_peak(int N);

}  // namespace mtc
