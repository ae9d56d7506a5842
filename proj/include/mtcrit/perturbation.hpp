#pragma once
// The perturbation g of the Moser-Trudinger integrand (1+g(u))exp(u^2), its derived
// functions H, g_N, Psi_N, and its asymptotic data at infinity (A) and at zero (B, F).

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace mtc {

enum class FamilyKind { Zero, PowerLog, Tabulated };

// g(0) + c t^{a+1} log(1/t)^{-b} near zero, c' t^{-a'} (log t)^{-b'} near infinity.
struct PowerLogParams {
  double c = 0.0, a = 0.0, b = 1.0;
  double c_prime = 0.0, a_prime = 2.0, b_prime = 0.0;
  double R_prime = 10.0;
  double g0 = 0.0;
};

struct Knot {
  double t, g, dg;
};

// Value with first and second derivative.
struct Jet {
  double g, dg, d2g;
};

// coef * gamma^{-p} * (log gamma)^{-q}
struct LogPowerTerm {
  double coef, p, q;
  double operator()(double gamma) const;
};

struct AsymptoticData {
  std::vector<LogPowerTerm> A_terms;  // infinity side
  std::vector<LogPowerTerm> B_terms;  // zero side
  double kappa = 1.0;
  double eps_tilde0 = 1.0;
  // Existential exponents of the growth bounds; reported by validate_hypotheses.
  double delta0 = 0.5, delta0_prime = 0.5;

  double A(double gamma) const;
  double B(double gamma) const;
  double F(double t) const { return eps_tilde0 * (kappa == 0.0 ? 1.0 : std::pow(t, kappa)); }
};

class Perturbation {
 public:
  static Perturbation zero(double g0 = 0.0);
  static Perturbation power_log(const PowerLogParams& p);
  static Perturbation tabulated(std::vector<Knot> knots);

  FamilyKind kind() const { return kind_; }
  const PowerLogParams& params() const { return pl_; }
  const std::vector<Knot>& knots() const { return knots_; }
  double g0() const { return g0_; }

  // g, g', g'' at |t|. Throws NonAdmissible if g <= -1.
  Jet eval(double t) const;
  double g(double t) const { return eval(t).g; }
  // H(t) = 1 + g + g'/(2t), t > 0.
  double H(double t) const;
  // t H(t), continuous at 0 with value 0.
  double tH(double t) const;

  // Psi_N(t) = (1+g)(1+t^2+phi_N(t^2)) and its derivative; both may overflow for t^2 > 700.
  double psi(int N, double t) const;
  double psi_prime(int N, double t) const;
  // Psi'_N(t) * exp(-log_scale), evaluated without overflow.
  double psi_prime_scaled(int N, double t, double log_scale) const;
  // Psi_N(t) * exp(-t^2) - 1.
  double g_N(int N, double t) const;
  // H_N(t) = Psi'_N(t) exp(-t^2) / (2t).
  double H_N(int N, double t) const;

  // Maximum of g (sampled, exact on the analytic branches' critical points).
  double sup_g() const { return sup_g_; }

  std::optional<AsymptoticData> user_asymptotics;

 private:
  Jet eval_raw(double t) const;
  Jet near_zero(double t) const;
  Jet near_infinity(double t) const;
  void build_blend();
  void check_admissible();

  FamilyKind kind_ = FamilyKind::Zero;
  PowerLogParams pl_{};
  std::vector<Knot> knots_;
  double g0_ = 0.0;
  std::array<double, 6> blend_{};  // monomial coefficients in s = (t - t1)/(t2 - t1)
  double sup_g_ = 0.0;
};

// Closed-form asymptotic data of the family (user-supplied data wins when present).
AsymptoticData asymptotic_data(const Perturbation& fam);

// Check that (a, b) lies in E = {a >= 0, b > 0 if a = 0}.
bool in_exponent_set(double a, double b);

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  std::vector<double> gammas;
  std::vector<double> normalized_residual;  // per gamma
  std::string note;
};

struct ValidationReport {
  std::vector<HypothesisCheck> checks;
  double delta0_measured = 0.0;
  double delta0_prime_measured = 0.0;
  double C_infinity = 0.0;
  double C_zero = 0.0;
  bool all_pass() const;
};

ValidationReport validate_hypotheses(const Perturbation& fam, const AsymptoticData& data,
                                     const std::vector<double>& gamma_grid);

}  // namespace mtc
