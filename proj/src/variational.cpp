#include "mtcrit/variational.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "mtcrit/error.hpp"
#include "mtcrit/numerics.hpp"
#include "mtcrit/special.hpp"

namespace mtc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;

std::vector<double> geomspace(double a, double b, int n) {
  std::vector<double> v(n);
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) v[i] = std::exp(la + (lb - la) * i / (n - 1));
  return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
  return pairwise_sum(p);
}

void scale_to_energy(const FeGrid& grid, std::vector<double>& u, double alpha) {
  const double e = fe_energy(grid, u);
  if (!(e > 0)) throw Stall("start has zero energy");
  const double s = std::sqrt(alpha / e);
  for (double& v : u) v *= s;
}

// Panels in x = log r with Gauss-Legendre nodes: returns 2 pi int f(r) r^2 dx.
double radial_log_integral(const std::function<double(double)>& f, double xa, double xb,
                           const std::vector<double>& breaks = {}, double width = 0.25) {
  std::vector<double> pts{xa};
  for (double b : breaks)
    if (b > xa && b < xb) pts.push_back(b);
  pts.push_back(xb);
  std::sort(pts.begin(), pts.end());
  const GaussRule& gr = gauss_legendre(16);
  std::vector<double> parts;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const int m = std::max(1, static_cast<int>(std::ceil((pts[k + 1] - pts[k]) / width)));
    for (int j = 0; j < m; ++j) {
      const double a = pts[k] + (pts[k + 1] - pts[k]) * j / m;
      const double b = pts[k] + (pts[k + 1] - pts[k]) * (j + 1) / m;
      double s = 0.0;
      for (std::size_t q = 0; q < gr.x.size(); ++q) {
        const double x = 0.5 * (a + b) + 0.5 * (b - a) * gr.x[q];
        const double r = std::exp(x);
        s += gr.w[q] * f(r) * r * r;
      }
      parts.push_back(0.5 * (b - a) * s);
    }
  }
  return 2.0 * kPi * pairwise_sum(parts);
}
}  // namespace

FeGrid make_fe_grid(int n) {
  if (n < 50) throw ConfigError("grid needs at least 50 nodes");
  std::vector<double> r{0.0};
  for (double v : geomspace(1e-7, 1.0, n)) r.push_back(v);
  for (double v : geomspace(1e-6, 0.5, 300)) r.push_back(1.0 - v);
  std::sort(r.begin(), r.end());
  FeGrid g;
  for (double v : r)
    if (g.r.empty() || v - g.r.back() > 1e-13) g.r.push_back(v);
  g.r.back() = 1.0;
  const std::size_t m = g.r.size() - 1;
  g.stiff.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    const double h = g.r[e + 1] - g.r[e];
    g.stiff[e] = 2.0 * kPi * 0.5 * (g.r[e] + g.r[e + 1]) / h;
  }
  return g;
}

double fe_energy(const FeGrid& grid, const std::vector<double>& u) {
  const std::size_t m = grid.free_count();
  std::vector<double> p(m);
  for (std::size_t e = 0; e < m; ++e) {
    const double d = (e + 1 < m ? u[e + 1] : 0.0) - u[e];
    p[e] = grid.stiff[e] * d * d;
  }
  return pairwise_sum(p);
}

std::vector<double> fe_solve(const FeGrid& grid, const std::vector<double>& rhs) {
  const std::size_t m = grid.free_count();
  std::vector<double> diag(m), off(m - 1);
  for (std::size_t j = 0; j < m; ++j) diag[j] = grid.stiff[j] + (j > 0 ? grid.stiff[j - 1] : 0.0);
  for (std::size_t j = 0; j + 1 < m; ++j) off[j] = -grid.stiff[j];
  return solve_tridiagonal(diag, off, rhs);
}

Integrand moser_integrand(const Perturbation& fam, int N) {
  if (N < 0) throw ConfigError("N must be >= 0");
  if (N == 0) {
    return {[&fam](double u) { return (1.0 + fam.g(u)) * std::exp(u * u); },
            [&fam](double u) { return 2.0 * fam.tH(u) * std::exp(u * u); }};
  }
  return {[&fam, N](double u) { return fam.psi(N, u); }, [&fam, N](double u) { return fam.psi_prime(N, u); }};
}

Integrand lambda_integrand(const Perturbation& fam) {
  const double base = 1.0 + fam.g0();
  return {[&fam, base](double u) { return (1.0 + fam.g(u)) * (1.0 + u * u) - base; },
          [&fam](double u) {
            const Jet j = fam.eval(u);
            return j.dg * (1.0 + u * u) + 2.0 * u * (1.0 + j.g);
          }};
}

FeEval fe_evaluate(const FeGrid& grid, const Integrand& I, const std::vector<double>& u, Exec ex) {
  const std::size_t m = grid.free_count();
  const GaussRule& gr = gauss_legendre(4);
  std::vector<double> val(m), left(m), right(m);
  for_each_index(ex, m, [&](std::size_t e) {
    const double r0 = grid.r[e], h = grid.r[e + 1] - r0;
    const double u0 = u[e], u1 = e + 1 < m ? u[e + 1] : 0.0;
    double v = 0.0, l = 0.0, rt = 0.0;
    for (std::size_t q = 0; q < gr.x.size(); ++q) {
      const double t = 0.5 * (gr.x[q] + 1.0);
      const double w = 0.5 * gr.w[q] * h * 2.0 * kPi * (r0 + t * h);
      const double ui = u0 * (1.0 - t) + u1 * t;
      v += w * I.f(ui);
      const double d = w * I.df(ui);
      l += d * (1.0 - t);
      rt += d * t;
    }
    val[e] = v;
    left[e] = l;
    right[e] = rt;
  });
  FeEval out;
  out.value = pairwise_sum(val);
  out.load.assign(m, 0.0);
  for (std::size_t e = 0; e < m; ++e) {
    out.load[e] += left[e];
    if (e + 1 < m) out.load[e + 1] += right[e];
  }
  return out;
}

double moser_functional(const Perturbation& fam, const FeGrid& grid, const std::vector<double>& u, int N,
                        Exec ex) {
  return fe_evaluate(grid, moser_integrand(fam, N), u, ex).value;
}

std::string Start::label() const {
  switch (kind) {
    case StartKind::Flat:
      return "flat";
    case StartKind::Eigen:
      return "eigenfunction";
    case StartKind::Bubble:
      return "bubble(eps=" + std::to_string(eps) + ")";
  }
  return "?";
}

std::vector<Start> default_starts() {
  return {{StartKind::Flat, 0.0}, {StartKind::Eigen, 0.0}, {StartKind::Bubble, 0.3},
          {StartKind::Bubble, 0.1}, {StartKind::Bubble, 0.03}};
}

namespace {

std::vector<double> start_values(const FeGrid& grid, const Start& s) {
  const std::size_t m = grid.free_count();
  std::vector<double> u(m);
  const double j = bessel_j0_first_zero();
  for (std::size_t i = 0; i < m; ++i) {
    const double r = grid.r[i];
    switch (s.kind) {
      case StartKind::Flat:
        u[i] = 1.0 - r * r;
        break;
      case StartKind::Eigen:
        u[i] = bessel_j0(j * r);
        break;
      case StartKind::Bubble:
        if (!(s.eps > 0)) throw ConfigError("bubble start needs eps > 0");
        u[i] = std::log((1.0 + s.eps * s.eps) / (s.eps * s.eps + r * r));
        break;
    }
  }
  return u;
}

ExtremalRun ascend(const FeGrid& grid, const Integrand& I, double alpha, const Start& st,
                   const AscentOptions& opt) {
  std::vector<double> u = start_values(grid, st);
  scale_to_energy(grid, u, alpha);
  FeEval cur = fe_evaluate(grid, I, u, Exec::Serial);
  ExtremalRun run;
  run.alpha = alpha;
  run.start = st.label();
  int it = 0;
  bool converged = false;
  for (; it < opt.max_iter; ++it) {
    std::vector<double> w = fe_solve(grid, cur.load);
    const double wn = dot(w, cur.load);
    if (!(wn > 0)) {
      run.stalled = true;
      break;
    }
    const double s = std::sqrt(alpha / wn);
    for (double& v : w) v *= s;
    FeEval cand = fe_evaluate(grid, I, w, Exec::Serial);
    double tau = 1.0;
    std::vector<double> trial = w;
    // Damped fallback toward the conditional-gradient target when the full step loses value.
    while (cand.value < cur.value - 1e-15 * std::abs(cur.value) && tau > 1e-6) {
      tau *= 0.5;
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] = u[i] + tau * (w[i] - u[i]);
      cand = fe_evaluate(grid, I, trial, Exec::Serial);
    }
    if (cand.value < cur.value - 1e-15 * std::abs(cur.value)) {
      run.stalled = true;
      break;
    }
    const double change = std::abs(cand.value - cur.value);
    u = std::move(trial);
    cur = std::move(cand);
    if (change <= opt.rel_tol * std::abs(cur.value)) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged && !run.stalled) run.stalled = true;
  run.iterations = it;
  run.J = cur.value;
  run.norm_sq = fe_energy(grid, u);
  run.saturated = std::abs(run.norm_sq - alpha) < 1e-6;
  const double ul = dot(u, cur.load);
  run.lambda = ul != 0.0 ? 2.0 * run.norm_sq / ul : 0.0;
  // Residual of K u = (lambda/2) L(u) in the dual norm, relative to ||u||.
  std::vector<double> w = fe_solve(grid, cur.load);
  std::vector<double> d(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) d[i] = u[i] - 0.5 * run.lambda * w[i];
  run.el_residual = std::sqrt(fe_energy(grid, d) / run.norm_sq);
  run.r = grid.r;
  run.u = u;
  run.u.push_back(0.0);
  run.gamma = *std::max_element(run.u.begin(), run.u.end());
  return run;
}

}  // namespace

ExtremalRun maximize_on_ball(const Integrand& I, double alpha, const std::vector<Start>& starts,
                             const AscentOptions& opt, std::vector<ExtremalRun>* all) {
  if (starts.empty()) throw ConfigError("at least one start is required");
  if (!(alpha > 0)) throw ConfigError("alpha must be positive");
  const FeGrid grid = make_fe_grid(opt.grid_nodes);
  std::vector<ExtremalRun> runs(starts.size());
  for_each_index(Exec::Parallel, starts.size(), [&](std::size_t k) { runs[k] = ascend(grid, I, alpha, starts[k], opt); });
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k)
    if (runs[k].J > runs[best].J) best = k;
  if (all) *all = runs;
  return runs[best];
}

ExtremalRun solve_subcritical(const Perturbation& fam, int N, double alpha, const std::vector<Start>& starts,
                              const AscentOptions& opt, std::vector<ExtremalRun>* all) {
  if (alpha > kFourPi) throw ConfigError("alpha > 4 pi: the supremum is infinite");
  if (alpha >= kFourPi) throw ConfigError("alpha must be strictly below 4 pi");
  return maximize_on_ball(moser_integrand(fam, N), alpha, starts, opt, all);
}

LambdaG lambda_g(const Perturbation& fam, const Domain& dom, const AscentOptions& opt) {
  LambdaG out;
  const double sup_g = std::max(fam.sup_g(), fam.g0());
  out.upper = dom.area() * (sup_g - fam.g0()) + (1.0 + sup_g) * kFourPi / dom.lambda1();
  const Integrand I = lambda_integrand(fam);
  double line = 0.0;
  if (dom.spec().shape == Shape::UnitDisk) {
    const FeGrid grid = make_fe_grid(opt.grid_nodes);
    std::vector<double> v = start_values(grid, {StartKind::Eigen, 0.0});
    scale_to_energy(grid, v, kFourPi);
    std::vector<double> vals = map_values(Exec::Parallel, 101, [&](std::size_t k) {
      std::vector<double> w = v;
      for (double& x : w) x *= k / 100.0;
      return fe_evaluate(grid, I, w, Exec::Serial).value;
    });
    line = *std::max_element(vals.begin(), vals.end());
    const ExtremalRun run = maximize_on_ball(I, kFourPi, {{StartKind::Eigen, 0.0}, {StartKind::Flat, 0.0}}, opt);
    out.value = std::max(run.J, line);
    out.method = "radial ascent";
  } else {
    const auto nodes = dom.polar_rule(dom.center());
    std::vector<double> vals = map_values(Exec::Serial, 101, [&](std::size_t k) {
      const double s = k / 100.0;
      return integrate_nodes(nodes, [&](Point p) { return I.f(s * dom.eigenfunction(p)); });
    });
    line = *std::max_element(vals.begin(), vals.end());
    out.value = line;
    out.method = "eigenfunction line search";
  }
  out.lower = out.value;
  // the bound is sharp for constant g; keep quadrature round-off from inverting the bracket
  out.upper = std::max(out.upper, out.lower);
  out.gap = out.upper - out.lower;
  return out;
}

TestFunctionEnergy step1_testfun(const Domain& dom, const Perturbation& fam, double eps, Point z, int N) {
  if (dom.spec().shape != Shape::UnitDisk) throw Unsupported("step-1 test function is built on the unit disk");
  if (!(eps > 0 && eps <= 0.2)) throw ConfigError("eps must lie in (0, 0.2]");
  if (!dom.contains(z)) throw ConfigError("z must be interior");
  const Integrand I = moser_integrand(fam, N);
  const double e2 = eps * eps;
  TestFunctionEnergy out;
  out.norm_sq_model = kFourPi * (std::log(1.0 / e2) - 1.0 + dom.robin(z));
  const double zr = std::hypot(z.x, z.y);
  if (zr == 0.0) {
    auto v = [&](double r) { return std::log((1.0 + e2) / (e2 + r * r)); };
    const double xa = std::log(eps) - 25.0, le = std::log(eps);
    out.norm_sq = radial_log_integral(
        [&](double r) {
          const double d = 2.0 / (e2 + r * r);
          return d * d * r * r;
        },
        xa, 0.0, {le});
    const double s = std::sqrt(kFourPi / out.norm_sq);
    out.f_norm_sq = s * s * out.norm_sq;
    out.J = radial_log_integral([&](double r) { return I.f(s * v(r)); }, xa, 0.0, {le}) + kPi * I.f(s * v(0.0)) * std::exp(2 * xa);
    return out;
  }
  // Harmonic correction with boundary data log(eps^2 + |y - z|^2), by its Fourier series.
  const int K = 512;
  std::vector<std::complex<double>> coef(K / 2 + 1);
  std::vector<double> h(K);
  for (int k = 0; k < K; ++k) {
    const double th = 2.0 * kPi * k / K;
    const double dx = std::cos(th) - z.x, dy = std::sin(th) - z.y;
    h[k] = std::log(e2 + dx * dx + dy * dy);
  }
  for (int m = 0; m <= K / 2; ++m) {
    std::complex<double> c = 0.0;
    for (int k = 0; k < K; ++k) c += h[k] * std::polar(1.0, -2.0 * kPi * m * k / K);
    coef[m] = c / static_cast<double>(K);
  }
  auto harm = [&](Point p) {
    const std::complex<double> w(p.x, p.y);
    std::complex<double> pw = 1.0;
    double s = coef[0].real();
    for (int m = 1; m <= K / 2; ++m) {
      pw *= w;
      s += 2.0 * (coef[m] * pw).real();
    }
    return s;
  };
  auto v = [&](Point p) {
    const double dx = p.x - z.x, dy = p.y - z.y;
    return std::log(1.0 / (e2 + dx * dx + dy * dy)) + harm(p);
  };
  const auto nodes = dom.polar_rule(z);
  out.norm_sq = integrate_nodes(nodes, [&](Point p) {
    const double dx = p.x - z.x, dy = p.y - z.y;
    const double q = e2 + dx * dx + dy * dy;
    return v(p) * 4.0 * e2 / (q * q);
  });
  const double s = std::sqrt(kFourPi / out.norm_sq);
  out.f_norm_sq = s * s * out.norm_sq;
  out.J = integrate_nodes(nodes, [&](Point p) { return I.f(s * v(p)); });
  return out;
}

ModelEnergy model_testfun_energy(const Domain& dom, const Perturbation& fam, const AsymptoticData& data,
                                 const ProfileSet& prof, double gamma, Point z) {
  if (dom.spec().shape != Shape::UnitDisk || z.x != 0.0 || z.y != 0.0)
    throw Unsupported("model test function is radial: unit disk with z = 0");
  const double g = gamma;
  ModelEnergy out;
  out.gamma = g;
  const double A = data.A(g), B = data.B(g);
  const double M = dom.robin(z);
  const double kap = data.kappa, e0 = data.eps_tilde0;
  const double S = e0 * std::tgamma(kap + 2.0) / 4.0;
  const double cW = 4.0 * B / (g * g * std::exp(1.0 + M));
  // W solves Delta W = F(2 log 1/r), W(1) = 0.
  auto W = [&](double r) {
    if (r <= 0.0) return S;
    const double X = -2.0 * std::log(r);
    return 0.25 * e0 * (X * boost::math::tgamma(kap + 1.0, X) + boost::math::tgamma_lower(kap + 2.0, X));
  };
  auto rW = [&](double r) { return -0.5 * e0 * boost::math::tgamma(kap + 1.0, -2.0 * std::log(r)); };
  const double g3 = std::pow(g, 3), g5 = std::pow(g, 5);
  auto center = [&](double L) {
    const double s1 = std::exp(0.5 * L);
    return (L + std::log1p(std::exp(-L))) / g - prof.S[0](s1) / g3 - prof.S[1](s1) / g5 -
           (A / g) * prof.S[2](s1) + cW * S - g;
  };
  const double L = find_root(center, 0.25 * g * g, 2.0 * g * g + 10.0, 1e-14);
  out.log_inv_mu2 = L;
  const double arg = 1.0 - g * g * A / 2.0 - 4.0 * B * S / (g * std::exp(1.0 + M));
  if (!(arg > 0)) throw RootFail("explicit scale relation has a non-positive argument");
  out.log_inv_mu2_closed = g * g - 1.0 - M + std::log(arg);
  out.mu_rel_gap = std::abs(L - out.log_inv_mu2_closed) / std::abs(out.log_inv_mu2_closed);
  const double mu = std::exp(-0.5 * L), mu2 = mu * mu;
  const double s1 = 1.0 / mu;
  auto U = [&](double r) {
    const double s = r / mu;
    return std::log((1.0 + mu2) / (mu2 + r * r)) / g + (prof.S[0](s) - prof.S[0](s1)) / g3 +
           (prof.S[1](s) - prof.S[1](s1)) / g5 + (A / g) * (prof.S[2](s) - prof.S[2](s1)) + cW * W(r);
  };
  auto rU = [&](double r) {
    const double s = r / mu;
    return -2.0 * r * r / (g * (r * r + mu2)) + prof.S[0].r_dS(s) / g3 + prof.S[1].r_dS(s) / g5 +
           (A / g) * prof.S[2].r_dS(s) + cW * rW(r);
  };
  const double xa = std::log(mu) - 14.0, lm = std::log(mu);
  out.norm_sq = radial_log_integral([&](double r) { const double d = rU(r); return d * d / (r * r); }, xa, 0.0, {lm});
  out.I = std::pow(g, -4) + A / 2.0 + 4.0 * B * S / (g3 * std::exp(1.0 + M));
  out.zeta_check = std::max({std::pow(g, -4), std::abs(A), std::abs(B) / g3});
  out.normalized_gap = (out.norm_sq / kFourPi - 1.0 - out.I) / out.zeta_check;
  const double sc = std::sqrt(kFourPi / out.norm_sq);
  const Integrand I = moser_integrand(fam, 0);
  out.J = radial_log_integral([&](double r) { return I.f(sc * U(r)); }, xa, 0.0, {lm}) +
          kPi * I.f(sc * g) * std::exp(2 * xa);
  return out;
}

}  // namespace mtc
