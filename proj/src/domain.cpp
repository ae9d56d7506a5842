#include "mtcrit/domain.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "mtcrit/error.hpp"
#include "mtcrit/numerics.hpp"
#include "mtcrit/special.hpp"

namespace mtc {

namespace {

constexpr double kPi = std::numbers::pi;

using cplx = std::complex<double>;

// exp(w) - 1 accurate near w = 0.
cplx cexpm1(cplx w) {
  const double x = w.real(), y = w.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

// log|1 - e^w| for Re w <= 0.
double log_abs_one_minus_exp(cplx w) {
  const cplx v = -cexpm1(w);
  return std::log(std::abs(v));
}

}  // namespace

Shape parse_shape(const std::string& s) {
  if (s == "disk" || s == "UnitDisk" || s == "unit_disk") return Shape::UnitDisk;
  if (s == "rectangle" || s == "Rectangle") return Shape::Rectangle;
  throw ConfigError("unknown domain shape '" + s + "'");
}

std::string shape_name(Shape s) { return s == Shape::UnitDisk ? "disk" : "rectangle"; }

Domain::Domain(DomainSpec spec) : spec_(spec) {
  if (spec_.shape == Shape::Rectangle) {
    if (!(spec_.width > 0 && spec_.height > 0)) throw ConfigError("rectangle sides must be positive");
    swapped_ = spec_.width > spec_.height;
  }
  if (spec_.quad_order < 2) throw ConfigError("quad_order must be >= 2");
  if (spec_.image_layers < 1) throw ConfigError("image_layers must be >= 1");
}

double Domain::area() const {
  return spec_.shape == Shape::UnitDisk ? kPi : spec_.width * spec_.height;
}

bool Domain::contains(Point p) const {
  if (spec_.shape == Shape::UnitDisk) return p.x * p.x + p.y * p.y < 1.0;
  return p.x > 0 && p.x < spec_.width && p.y > 0 && p.y < spec_.height;
}

double Domain::boundary_distance(Point p) const {
  if (spec_.shape == Shape::UnitDisk) return 1.0 - std::hypot(p.x, p.y);
  return std::min({p.x, spec_.width - p.x, p.y, spec_.height - p.y});
}

Point Domain::center() const {
  if (spec_.shape == Shape::UnitDisk) return {0.0, 0.0};
  return {0.5 * spec_.width, 0.5 * spec_.height};
}

// Green function of the strip 0 < x < a through w = exp(i pi z / a) onto the half plane.
double Domain::strip_green(Point z, Point zeta, double a) const {
  if (zeta.y < z.y) std::swap(z, zeta);
  const cplx zc(z.x, z.y), zt(zeta.x, zeta.y);
  const cplx I(0.0, 1.0);
  const double num = log_abs_one_minus_exp(-I * kPi * (std::conj(zt) + zc) / a);
  const double den = log_abs_one_minus_exp(I * kPi * (zt - zc) / a);
  return (num - den) / (2.0 * kPi);
}

double Domain::green(Point x, Point y) const {
  const double d2 = (x.x - y.x) * (x.x - y.x) + (x.y - y.y) * (x.y - y.y);
  if (d2 < 1e-28) throw PoleCoincidence("x and y coincide");
  if (spec_.shape == Shape::UnitDisk) {
    const double D = 1.0 - 2.0 * (x.x * y.x + x.y * y.y) +
                     (x.x * x.x + x.y * x.y) * (y.x * y.x + y.y * y.y);
    return std::log(D / d2) / (4.0 * kPi);
  }
  Point z = x, zeta = y;
  double a = spec_.width, b = spec_.height;
  if (swapped_) {
    z = {x.y, x.x};
    zeta = {y.y, y.x};
    std::swap(a, b);
  }
  double g = strip_green(z, zeta, a) - strip_green(z, {zeta.x, -zeta.y}, a);
  for (int n = 1; n <= spec_.image_layers; ++n) {
    double layer = 0.0;
    for (int s : {-1, 1}) {
      const double sh = 2.0 * n * b * s;
      layer += strip_green(z, {zeta.x, zeta.y + sh}, a) - strip_green(z, {zeta.x, -zeta.y + sh}, a);
    }
    g += layer;
    if (std::abs(layer) < 1e-18) break;
  }
  return g;
}

double Domain::regular_part(Point x, Point y) const {
  const double d2 = (x.x - y.x) * (x.x - y.x) + (x.y - y.y) * (x.y - y.y);
  return 4.0 * kPi * green(x, y) + std::log(d2);
}

double Domain::robin(Point x) const {
  if (spec_.shape == Shape::UnitDisk) {
    const double r2 = x.x * x.x + x.y * x.y;
    return 2.0 * std::log1p(-r2);
  }
  Point z = x;
  double a = spec_.width, b = spec_.height;
  if (swapped_) {
    z = {x.y, x.x};
    std::swap(a, b);
  }
  // Direct term: limit of 4 pi G_strip + log|z - zeta|^2.
  const cplx I(0.0, 1.0);
  double h = 2.0 * log_abs_one_minus_exp(-I * kPi * (2.0 * z.x) / a) - 2.0 * std::log(kPi / a);
  h -= 4.0 * kPi * strip_green(z, {z.x, -z.y}, a);
  for (int n = 1; n <= spec_.image_layers; ++n) {
    double layer = 0.0;
    for (int s : {-1, 1}) {
      const double sh = 2.0 * n * b * s;
      layer += strip_green(z, {z.x, z.y + sh}, a) - strip_green(z, {z.x, -z.y + sh}, a);
    }
    h += 4.0 * kPi * layer;
    if (std::abs(layer) < 1e-18) break;
  }
  return h;
}

double Domain::lambda1() const {
  if (spec_.shape == Shape::UnitDisk) {
    const double j = bessel_j0_first_zero();
    return j * j;
  }
  return kPi * kPi * (1.0 / (spec_.width * spec_.width) + 1.0 / (spec_.height * spec_.height));
}

double Domain::eigenfunction(Point p) const {
  if (!contains(p)) return 0.0;
  if (spec_.shape == Shape::UnitDisk) {
    const double j = bessel_j0_first_zero();
    const double c = 2.0 / (j * bessel_j1(j));
    return c * bessel_j0(j * std::hypot(p.x, p.y));
  }
  const double w = spec_.width, h = spec_.height;
  const double c = std::sqrt(16.0 * kPi / (lambda1() * w * h));
  return c * std::sin(kPi * p.x / w) * std::sin(kPi * p.y / h);
}

double Domain::ray_length(Point p, double th) const {
  const double cx = std::cos(th), cy = std::sin(th);
  if (spec_.shape == Shape::UnitDisk) {
    const double pe = p.x * cx + p.y * cy;
    return -pe + std::sqrt(pe * pe + 1.0 - (p.x * p.x + p.y * p.y));
  }
  double t = std::numeric_limits<double>::infinity();
  if (cx > 1e-300) t = std::min(t, (spec_.width - p.x) / cx);
  if (cx < -1e-300) t = std::min(t, -p.x / cx);
  if (cy > 1e-300) t = std::min(t, (spec_.height - p.y) / cy);
  if (cy < -1e-300) t = std::min(t, -p.y / cy);
  return t;
}

std::vector<QuadNode> Domain::polar_rule(Point pole, const PolarRuleParams& prm) const {
  if (!contains(pole)) throw Error("polar_rule: pole outside the domain");
  std::vector<double> breaks;
  if (spec_.shape == Shape::UnitDisk) {
    for (int k = 0; k <= prm.theta_panels; ++k) breaks.push_back(2.0 * kPi * k / prm.theta_panels);
  } else {
    std::vector<double> corners;
    for (Point c : {Point{0, 0}, Point{spec_.width, 0}, Point{spec_.width, spec_.height}, Point{0, spec_.height}}) {
      double a = std::atan2(c.y - pole.y, c.x - pole.x);
      if (a < 0) a += 2.0 * kPi;
      corners.push_back(a);
    }
    std::sort(corners.begin(), corners.end());
    corners.push_back(corners.front() + 2.0 * kPi);
    const int sub = std::max(1, prm.theta_panels / 4);
    for (std::size_t i = 0; i + 1 < corners.size(); ++i)
      for (int k = 0; k < sub; ++k)
        breaks.push_back(corners[i] + (corners[i + 1] - corners[i]) * k / sub);
    breaks.push_back(corners.back());
  }
  // Radial breakpoints in units of the ray length.
  std::vector<double> rb = {0.0, 0.5, 1.0};
  for (int k = 1; k <= prm.radial_grade; ++k) rb.push_back(std::pow(prm.ratio, k) * 0.5);
  for (int k = 1; k <= prm.boundary_grade; ++k) rb.push_back(1.0 - 0.5 * std::pow(prm.ratio, k));
  std::sort(rb.begin(), rb.end());
  rb.erase(std::unique(rb.begin(), rb.end()), rb.end());

  const GaussRule& gr = gauss_legendre(spec_.quad_order);
  std::vector<QuadNode> nodes;
  nodes.reserve((breaks.size() - 1) * gr.x.size() * (rb.size() - 1) * gr.x.size());
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double t0 = breaks[i], t1 = breaks[i + 1];
    for (std::size_t a = 0; a < gr.x.size(); ++a) {
      const double th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gr.x[a];
      const double wth = 0.5 * (t1 - t0) * gr.w[a];
      const double R = ray_length(pole, th);
      const double cx = std::cos(th), cy = std::sin(th);
      // Levels finer than an absolute floor merge into the innermost panel, keeping nodes
      // clear of the pole on short rays.
      bool inner = true;
      for (std::size_t j = 0; j + 1 < rb.size(); ++j) {
        if (rb[j + 1] * R < 1e-9 && j + 2 < rb.size()) continue;
        const double r0 = inner ? 0.0 : rb[j] * R, r1 = rb[j + 1] * R;
        inner = false;
        for (std::size_t b = 0; b < gr.x.size(); ++b) {
          const double rho = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gr.x[b];
          const double w = wth * 0.5 * (r1 - r0) * gr.w[b] * rho;
          nodes.push_back({{pole.x + rho * cx, pole.y + rho * cy}, w});
        }
      }
    }
  }
  return nodes;
}

double integrate_nodes(const std::vector<QuadNode>& nodes, const std::function<double(Point)>& f,
                       Exec ex) {
  std::vector<double> vals(nodes.size());
  for_each_index(ex, nodes.size(), [&](std::size_t i) { vals[i] = nodes[i].w * f(nodes[i].p); });
  return pairwise_sum(vals);
}

double s_integral(const Domain& dom, Point z, const std::function<double(double)>& F,
                  const PolarRuleParams& prm, Exec ex) {
  const auto nodes = dom.polar_rule(z, prm);
  return integrate_nodes(
      nodes,
      [&](Point y) {
        const double G = dom.green(z, y);
        return G * F(4.0 * kPi * G);
      },
      ex);
}

RobinReport robin_report(const Domain& dom, const std::function<double(double)>& F, double tol_K,
                         Exec ex, const PolarRuleParams& prm) {
  constexpr int n = 41;
  constexpr double margin = 0.05;
  const DomainSpec& sp = dom.spec();
  double x0, x1, y0, y1;
  if (sp.shape == Shape::UnitDisk) {
    x0 = y0 = -1.0 + margin;
    x1 = y1 = 1.0 - margin;
  } else {
    x0 = margin * sp.width;
    x1 = (1.0 - margin) * sp.width;
    y0 = margin * sp.height;
    y1 = (1.0 - margin) * sp.height;
  }
  const double hx = (x1 - x0) / (n - 1), hy = (y1 - y0) / (n - 1);
  auto pt = [&](int i, int j) { return Point{x0 + i * hx, y0 + j * hy}; };
  auto inside = [&](Point p) { return dom.contains(p) && dom.boundary_distance(p) >= 0.5 * margin; };
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> vals = map_values(ex, static_cast<std::size_t>(n * n), [&](std::size_t k) {
    const Point p = pt(static_cast<int>(k % n), static_cast<int>(k / n));
    return inside(p) ? dom.robin(p) : ninf;
  });

  std::vector<Point> cands;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double v = vals[j * n + i];
      if (v == ninf) continue;
      bool is_max = true;
      for (int dj = -1; dj <= 1 && is_max; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (!di && !dj) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
          if (vals[jj * n + ii] > v) { is_max = false; break; }
        }
      if (is_max) cands.push_back(pt(i, j));
    }

  // Compass-search refinement of each grid maximum.
  std::vector<std::pair<Point, double>> refined;
  for (Point p : cands) {
    double v = dom.robin(p), step = std::max(hx, hy);
    while (step > 1e-11) {
      bool moved = false;
      for (Point d : {Point{step, 0}, Point{-step, 0}, Point{0, step}, Point{0, -step}}) {
        const Point q{p.x + d.x, p.y + d.y};
        if (!dom.contains(q)) continue;
        const double vq = dom.robin(q);
        if (vq > v) { p = q; v = vq; moved = true; break; }
      }
      if (!moved) step *= 0.5;
    }
    if (dom.boundary_distance(p) < 0.5 * margin) throw DegenerateMax("Robin maximizer reaches the grid margin");
    refined.emplace_back(p, v);
  }
  RobinReport rep;
  rep.M = ninf;
  for (const auto& r : refined) rep.M = std::max(rep.M, r.second);
  for (const auto& r : refined) {
    if (rep.M - r.second > tol_K) continue;
    bool dup = false;
    for (Point q : rep.K) dup = dup || std::hypot(q.x - r.first.x, q.y - r.first.y) < 1e-6;
    if (!dup) rep.K.push_back(r.first);
  }
  rep.S = ninf;
  for (Point z : rep.K) {
    const double s = s_integral(dom, z, F, prm, ex);
    rep.S_per_point.push_back(s);
    if (s > rep.S) {
      rep.S = s;
      rep.argmax_S = z;
    }
  }
  return rep;
}

}  // namespace mtc
