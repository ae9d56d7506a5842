#include "mtcrit/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "mtcrit/error.hpp"

namespace mtc {

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[n - 1 - i] = r.w[i];
  }
  return cache.emplace(n, std::move(r)).first->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 int max_depth, double* err) {
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, static_cast<unsigned>(max_depth), rel_tol, &e);
  if (err) *err = e;
  return v;
}

double find_root(const std::function<double(double)>& f, double a, double b, double x_tol,
                 int max_iter) {
  const double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw RootFail("no sign change on bracket");
  std::uintmax_t it = static_cast<std::uintmax_t>(max_iter);
  auto tol = [x_tol](double l, double r) { return std::abs(r - l) <= x_tol * std::max(1.0, std::abs(l)); };
  auto res = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, it);
  return 0.5 * (res.first + res.second);
}

HermiteValue hermite_cubic(double x0, double x1, double y0, double d0, double y1, double d1,
                           double x) {
  const double h = x1 - x0;
  const double s = (x - x0) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double v = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  const double dh00 = 6 * s2 - 6 * s, dh10 = 3 * s2 - 4 * s + 1;
  const double dh01 = -6 * s2 + 6 * s, dh11 = 3 * s2 - 2 * s;
  const double d = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
  return {v, d};
}

std::vector<double> solve_tridiagonal(const std::vector<double>& diag,
                                      const std::vector<double>& off,
                                      const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n, 0.0), d(n, 0.0);
  double beta = diag[0];
  d[0] = rhs[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    c[i - 1] = off[i - 1] / beta;
    beta = diag[i] - off[i - 1] * c[i - 1];
    d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
  return d;
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& cols,
                                  const std::vector<double>& y) {
  const std::size_t m = cols.size(), n = y.size();
  std::vector<double> scale(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (double v : cols[j]) scale[j] = std::max(scale[j], std::abs(v));
    if (scale[j] == 0.0) scale[j] = 1.0;
  }
  // Modified Gram-Schmidt QR on scaled columns.
  std::vector<std::vector<double>> q(m, std::vector<double>(n));
  std::vector<std::vector<double>> r(m, std::vector<double>(m, 0.0));
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) q[j][i] = cols[j][i] / scale[j];
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += q[k][i] * q[j][i];
      r[k][j] = dot;
      for (std::size_t i = 0; i < n; ++i) q[j][i] -= dot * q[k][i];
    }
    double nrm = 0.0;
    for (double v : q[j]) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw Error("least_squares: rank deficient");
    r[j][j] = nrm;
    for (double& v : q[j]) v /= nrm;
  }
  std::vector<double> qty(m, 0.0), coef(m, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) qty[j] += q[j][i] * y[i];
  for (std::size_t j = m; j-- > 0;) {
    double s = qty[j];
    for (std::size_t k = j + 1; k < m; ++k) s -= r[j][k] * coef[k];
    coef[j] = s / r[j][j];
  }
  for (std::size_t j = 0; j < m; ++j) coef[j] /= scale[j];
  return coef;
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace mtc
