#pragma once
// Planar domains with an evaluable Dirichlet Green function (normalized as
// (1/4pi)(log 1/|x-y|^2 + regular part)), Robin function, first eigenpair and
// pole-centred quadrature.

#include <functional>
#include <string>
#include <vector>

#include "mtcrit/parallel.hpp"

namespace mtc {

struct Point {
  double x = 0.0, y = 0.0;
};

enum class Shape { UnitDisk, Rectangle };

struct DomainSpec {
  Shape shape = Shape::UnitDisk;
  double width = 1.0, height = 1.0;  // rectangle [0,width] x [0,height]
  int quad_order = 24;                 // Gauss points per panel
  int image_layers = 64;               // image rows in the rectangle Green function
};

struct QuadNode {
  Point p;
  double w;
};

// Polar rule centred at a pole: theta panels (split at rectangle corners), radial panels
// graded geometrically toward the pole and toward the boundary.
struct PolarRuleParams {
  int theta_panels = 8;    // per smooth arc
  int radial_grade = 18;   // geometric panels toward the pole
  int boundary_grade = 12; // geometric panels toward the boundary
  double ratio = 0.25;
};

class Domain {
 public:
  explicit Domain(DomainSpec spec);

  const DomainSpec& spec() const { return spec_; }
  double area() const;
  bool contains(Point p) const;
  double boundary_distance(Point p) const;
  Point center() const;

  // G_x(y); throws PoleCoincidence when |x - y| < 1e-14.
  double green(Point x, Point y) const;
  // Regular part H_x(y) = 4 pi G_x(y) - log(1/|x-y|^2).
  double regular_part(Point x, Point y) const;
  // Robin function H_x(x).
  double robin(Point x) const;

  double lambda1() const;
  // First Dirichlet eigenfunction normalized to Dirichlet energy 4 pi, and its Laplacian
  // -(v_xx + v_yy).
  double eigenfunction(Point p) const;

  // Distance from the pole to the boundary along direction theta.
  double ray_length(Point pole, double theta) const;
  std::vector<QuadNode> polar_rule(Point pole, const PolarRuleParams& prm = {}) const;

 private:
  double strip_green(Point z, Point zeta, double a) const;
  DomainSpec spec_;
  bool swapped_ = false;  // rectangle: strip taken along the shorter side
};

// Integral of f over the nodes: parallel map, then pairwise sum (bitwise thread-independent).
double integrate_nodes(const std::vector<QuadNode>& nodes, const std::function<double(Point)>& f,
                       Exec ex = Exec::Parallel);

struct RobinReport {
  double M = 0.0;
  std::vector<Point> K;
  double S = 0.0;
  Point argmax_S;
  std::vector<double> S_per_point;
};

// Maximize the Robin function on a grid with local refinement, then evaluate
// S = max_{z in K} int G_z F(4 pi G_z).
RobinReport robin_report(const Domain& dom, const std::function<double(double)>& F,
                         double tol_K = 1e-8, Exec ex = Exec::Parallel,
                         const PolarRuleParams& prm = {});

// int_Omega G_z(y) F(4 pi G_z(y)) dy
double s_integral(const Domain& dom, Point z, const std::function<double(double)>& F,
                  const PolarRuleParams& prm = {}, Exec ex = Exec::Parallel);

Shape parse_shape(const std::string& s);
std::string shape_name(Shape s);

}  // namespace mtc
