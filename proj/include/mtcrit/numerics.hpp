#pragma once
// Small numerical utilities shared by the modules: Gauss-Legendre rules,
// adaptive quadrature, bracketed roots, Hermite interpolation, tridiagonal solves.

#include <functional>
#include <vector>

namespace mtc {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// n-point Gauss-Legendre rule (cached per n).
const GaussRule& gauss_legendre(int n);

// Adaptive Gauss-Kronrod integral of f over [a, b]; b may be +infinity.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, int max_depth = 20, double* err = nullptr);

// Root of f in [a, b] (sign change required). Throws RootFail otherwise.
double find_root(const std::function<double(double)>& f, double a, double b,
                 double x_tol = 1e-15, int max_iter = 200);

// Cubic Hermite value and first derivative on [x0, x1].
struct HermiteValue {
  double value;
  double deriv;
};
HermiteValue hermite_cubic(double x0, double x1, double y0, double d0, double y1, double d1,
                           double x);

// Solve a symmetric tridiagonal system (diag, off) * u = rhs (Thomas algorithm).
std::vector<double> solve_tridiagonal(const std::vector<double>& diag,
                                      const std::vector<double>& off,
                                      const std::vector<double>& rhs);

// Least-squares solution of a small dense system (columns given), via normal equations with
// column scaling and Cholesky. Returns coefficients.
std::vector<double> least_squares(const std::vector<std::vector<double>>& cols,
                                  const std::vector<double>& y);

// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

}  // namespace mtc
