#pragma once
// Radial variational problems on the unit disk: the Moser functional, the subcritical
// extremal problem over the H^1_0 ball, the nonlinear eigenvalue Lambda_g, and the
// energies of the concentrating test functions.

#include <functional>
#include <string>
#include <vector>

#include "mtcrit/domain.hpp"
#include "mtcrit/parallel.hpp"
#include "mtcrit/perturbation.hpp"
#include "mtcrit/profiles.hpp"

namespace mtc {

// Radial P1 grid on [0, 1]; the last node carries the boundary value 0.
struct FeGrid {
  std::vector<double> r;
  std::vector<double> stiff;  // per element: 2 pi r_mid / h
  std::size_t free_count() const { return r.size() - 1; }
};

FeGrid make_fe_grid(int n = 2000);

// Dirichlet energy 2 pi int u'^2 r dr of the free node values.
double fe_energy(const FeGrid& grid, const std::vector<double>& u);
// Solves K w = rhs on the free nodes.
std::vector<double> fe_solve(const FeGrid& grid, const std::vector<double>& rhs);

// Integrand of a functional 2 pi int f(u) r dr and its derivative f'.
struct Integrand {
  std::function<double(double)> f, df;
};

// Moser integrand (1+g(u)) e^{u^2}; N >= 1 uses Psi_N, N = 0 the untruncated weight.
Integrand moser_integrand(const Perturbation& fam, int N = 0);
// (1+g(u))(1+u^2) - (1+g(0)).
Integrand lambda_integrand(const Perturbation& fam);

struct FeEval {
  double value = 0.0;
  std::vector<double> load;  // 2 pi int f'(u) phi_j r dr
};

// Functional value and load vector; element loop is the parallel kernel.
FeEval fe_evaluate(const FeGrid& grid, const Integrand& I, const std::vector<double>& u,
                   Exec ex = Exec::Parallel);

double moser_functional(const Perturbation& fam, const FeGrid& grid, const std::vector<double>& u,
                        int N = 0, Exec ex = Exec::Parallel);

enum class StartKind { Flat, Eigen, Bubble };
struct Start {
  StartKind kind = StartKind::Flat;
  double eps = 0.1;  // bubble width
  std::string label() const;
};

std::vector<Start> default_starts();

struct AscentOptions {
  int max_iter = 20000;
  double rel_tol = 1e-13;  // relative change of the functional
  int grid_nodes = 2000;
};

struct ExtremalRun {
  double alpha = 0.0;
  std::vector<double> r, u;  // includes the boundary node
  double J = 0.0;
  double gamma = 0.0;   // max u
  double lambda = 0.0;  // multiplier in Delta u = (lambda/2) Psi'(u)
  double el_residual = 0.0;
  double norm_sq = 0.0;
  bool saturated = false;
  bool stalled = false;
  int iterations = 0;
  std::string start;
};

// Maximizes the functional over {||u||^2 <= alpha} from every start, returning the best run.
ExtremalRun maximize_on_ball(const Integrand& I, double alpha, const std::vector<Start>& starts,
                             const AscentOptions& opt = {}, std::vector<ExtremalRun>* all = nullptr);

ExtremalRun solve_subcritical(const Perturbation& fam, int N, double alpha,
                              const std::vector<Start>& starts, const AscentOptions& opt = {},
                              std::vector<ExtremalRun>* all = nullptr);

struct LambdaG {
  double value = 0.0;  // best computed value
  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;    // upper - lower
  std::string method;
};

// Disk: radial ascent for the value, eigenfunction line search and the bound
// |Omega|(sup g - g(0)) + (1 + sup g) 4pi/lambda1 for the bracket. Rectangle: bracket only.
LambdaG lambda_g(const Perturbation& fam, const Domain& dom, const AscentOptions& opt = {});

struct TestFunctionEnergy {
  double norm_sq = 0.0;       // ||v||^2 before normalization
  double norm_sq_model = 0.0; // 4 pi (log(1/eps^2) - 1 + H_z(z))
  double f_norm_sq = 0.0;     // ||f||^2 after normalization
  double J = 0.0;
};

// Step-1 test function log(1/(eps^2+|y-z|^2)) + harmonic correction on the unit disk.
TestFunctionEnergy step1_testfun(const Domain& dom, const Perturbation& fam, double eps, Point z,
                                 int N = 0);

struct ModelEnergy {
  double gamma = 0.0;
  double log_inv_mu2 = 0.0;         // root of U(z) = gamma
  double log_inv_mu2_closed = 0.0;  // explicit approximation
  double mu_rel_gap = 0.0;
  double norm_sq = 0.0;
  double I = 0.0;
  double zeta_check = 0.0;
  double normalized_gap = 0.0;  // (||U||^2/4pi - 1 - I) / zeta_check
  double J = 0.0;               // functional of the 4pi-normalized U
};

// Model test function at z = 0 on the unit disk.
ModelEnergy model_testfun_energy(const Domain& dom, const Perturbation& fam, const AsymptoticData& data,
                                 const ProfileSet& prof, double gamma, Point z = {});

}  // namespace mtc
