#include "mtcrit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "mtcrit/bubble.hpp"
#include "mtcrit/criterion.hpp"
#include "mtcrit/domain.hpp"
#include "mtcrit/error.hpp"
#include "mtcrit/parallel.hpp"
#include "mtcrit/profiles.hpp"
#include "mtcrit/special.hpp"
#include "mtcrit/variational.hpp"
#include "mtcrit/verify.hpp"

namespace mtc {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;

Json header(const Json& cfg, const CliOptions& opt, const std::string& command) {
  Json h;
  h["tool"] = "mtcrit";
  h["version"] = kToolVersion;
  h["command"] = command;
  h["config_hash"] = config_hash(cfg);
  h["seed"] = opt.seed;
  h["tolerance_scale"] = opt.tolerance_scale;
  return h;
}

std::string out_path(const CliOptions& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out);
  return (std::filesystem::path(opt.out) / name).string();
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

Perturbation family_of(const Json& cfg) {
  return cfg.contains("family") ? family_from_json(cfg.at("family")) : Perturbation::zero();
}

DomainSpec domain_of(const Json& cfg) { return cfg.contains("domain") ? domain_from_json(cfg.at("domain")) : DomainSpec{}; }

ProfileOptions profile_options(const Json& j, double ts) {
  ProfileOptions po;
  po.r_min = get_number(j, "r_min", po.r_min);
  po.r_max = get_number(j, "r_max", po.r_max);
  po.abs_tol = get_number(j, "abs_tol", po.abs_tol) * ts;
  po.rel_tol = get_number(j, "rel_tol", po.rel_tol) * ts;
  po.max_dx = get_number(j, "max_dx", po.max_dx);
  if (!(po.r_min > 0) || !(po.abs_tol > 0) || !(po.rel_tol > 0) || !(po.max_dx > 0))
    throw ConfigError("profile tolerances and r_min must be positive");
  return po;
}

void check_increasing(const std::vector<double>& v, const std::string& name) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw ConfigError("field '" + name + "' must be strictly increasing");
}
}  // namespace

int cmd_criterion(const Json& cfg, const CliOptions& opt) {
  const Domain dom(domain_of(cfg));
  const Perturbation fam = family_of(cfg);
  const std::vector<double> grid = get_numbers(cfg, "gamma_grid", default_gamma_grid());
  check_increasing(grid, "gamma_grid");
  const AsymptoticData data = asymptotic_data(fam);
  const RobinReport rr = robin_report(dom, [&](double t) { return data.F(t); }, 1e-8 * opt.tolerance_scale);
  AscentOptions ao;
  ao.rel_tol *= opt.tolerance_scale;
  const LambdaG lg = lambda_g(fam, dom, ao);
  CriterionInputs in;
  in.M = rr.M;
  in.S = rr.S;
  in.lambda_g = lg.lower;
  in.lambda_g_upper = lg.upper;
  in.limit = limit_l(data, rr.M, rr.S, grid);
  const CriterionReport rep = classify(in);

  Json j = header(cfg, opt, "criterion");
  j["domain"] = domain_to_json(dom.spec());
  j["family"] = family_to_json(fam);
  j["asymptotics"] = asymptotics_to_json(data);
  j["M"] = rep.M;
  j["S"] = rep.S;
  Json K = Json::array();
  for (const auto& p : rr.K) K.push_back({p.x, p.y});
  j["robin_maximizers"] = K;
  j["lambda_g"] = rep.lambda_g;
  j["lambda_g_upper"] = rep.lambda_g_upper;
  j["lambda_g_gap"] = rep.lambda_g_gap;
  j["lambda_g_method"] = lg.method;
  j["pi_e_level"] = rep.pi_e_level;
  j["l_closed"] = optional_number(rep.l_closed);
  j["l_grid"] = rep.l_grid;
  j["l_confidence"] = rep.l_confidence;
  j["l"] = in.limit.l;
  j["verdict"] = verdict_name(rep.verdict);
  j["note"] = rep.note;
  j["diagnostics"] = rep.diagnostics;
  write_json_file(out_path(opt, "criterion_report.json"), j);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) rows.push_back({grid[i], in.limit.ratios[i]});
  write_csv(out_path(opt, "criterion_ratio.csv"), {"gamma", "ratio"}, rows);
  std::cout << "verdict " << verdict_name(rep.verdict) << "  l = " << fmt(in.limit.l) << "  Lambda_g = "
            << fmt(rep.lambda_g) << "  level = " << fmt(rep.pi_e_level) << "\n";
  return rep.verdict == Verdict::Inconclusive ? 2 : 0;
}

int cmd_profiles(const Json& cfg, const CliOptions& opt) {
  const ProfileOptions po = profile_options(cfg, opt.tolerance_scale);
  const ProfileSet ps = solve_profiles(po);
  const ProfileIntegrals pint = profile_integrals(ps);
  Json j = header(cfg, opt, "profiles");
  const double refA[3] = {kA0, kA1, kA2};
  Json arr = Json::array();
  for (int i = 0; i < 3; ++i) {
    const auto& p = ps.S[i];
    const TailCheck tc = tail_check(p);
    Json e;
    e["index"] = i;
    e["A"] = p.asym_slope;
    e["A_reference"] = refA[i];
    e["B"] = p.asym_intercept;
    e["B_at_r_max"] = p.intercept_far;
    e["integral_of_laplacian"] = pint.A_check[i];
    e["tail_ratio_measured"] = tc.measured_ratio;
    e["tail_ratio_predicted"] = tc.predicted_ratio;
    e["samples"] = p.x.size();
    arr.push_back(e);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < p.x.size(); ++k) rows.push_back({std::exp(p.x[k]), p.value[k], p.rds[k]});
    write_csv(out_path(opt, "profile_S" + std::to_string(i) + ".csv"), {"r", "S", "r_dS"}, rows);
  }
  j["profiles"] = arr;
  j["B0_reference"] = kB0;
  j["integral_e2T0_S0"] = pint.I_S0;
  j["integral_e2T0_T0sq"] = pint.I_T0sq;
  write_json_file(out_path(opt, "profiles_constants.json"), j);
  std::cout << "A = " << fmt(ps.S[0].asym_slope) << ", " << fmt(ps.S[1].asym_slope) << ", "
            << fmt(ps.S[2].asym_slope) << "  B0 = " << fmt(ps.S[0].asym_intercept) << "\n";
  return 0;
}

int cmd_bubble(const Json& cfg, const CliOptions& opt) {
  const Perturbation fam = family_of(cfg);
  const int N = get_int(cfg, "N", 1);
  const std::vector<double> gammas = get_numbers(cfg, "gammas", {3.0, 4.0, 5.0});
  check_increasing(gammas, "gammas");
  const double M = get_number(cfg, "M", 0.0);
  const bool fixed_lambda = cfg.contains("lambda");
  const double lambda_cfg = get_number(cfg, "lambda", 1.0);
  if (fixed_lambda && !(lambda_cfg > 0)) throw ConfigError("field 'lambda' must be positive");
  BubbleOptions bo;
  bo.eps0 = get_number(cfg, "eps0", bo.eps0);
  bo.abs_tol *= opt.tolerance_scale;
  bo.rel_tol *= opt.tolerance_scale;
  if (!(bo.eps0 > 1.0 / std::sqrt(std::exp(1.0)) && bo.eps0 < 1.0))
    throw ConfigError("field 'eps0' must lie in (1/sqrt(e), 1)");
  const double dt0 = get_number(cfg, "delta_tilde0", 0.75);
  const AsymptoticData data = asymptotic_data(fam);
  ProfileOptions po;
  po.abs_tol *= opt.tolerance_scale;
  po.rel_tol *= opt.tolerance_scale;
  const ProfileSet ps = solve_profiles(po);
  struct Out {
    BubbleSolution sol;
    ExpansionReport exp;
    SourceReport src;
    double energy = 0.0, energy_R = 0.0, resc = 0.0;
  };
  std::vector<Out> outs(gammas.size());
  for_each_index(Exec::Parallel, gammas.size(), [&](std::size_t k) {
    const double g = gammas[k];
    const double lam = fixed_lambda ? lambda_cfg : lambda_from_level(g, M);
    Out& o = outs[k];
    o.sol = shoot_bubble(fam, N, g, lam, bo);
    o.exp = verify_expansion(fam, o.sol, data, ps);
    o.src = verify_source_expansion(fam, o.sol, data, ps, dt0);
    o.energy_R = std::min(30.0, o.sol.s_end);
    o.energy = bubble_energy(fam, o.sol, o.energy_R);
    o.resc = first_rescaling_gap(o.sol, std::min(10.0, o.sol.s_end));
  });
  Json j = header(cfg, opt, "bubble");
  j["family"] = family_to_json(fam);
  j["N"] = N;
  j["eps0"] = bo.eps0;
  j["delta_tilde0"] = dt0;
  Json arr = Json::array();
  bool mono_exp = true, mono_src = true;
  for (std::size_t k = 0; k < outs.size(); ++k) {
    const Out& o = outs[k];
    if (k > 0 && o.exp.normalized_sup > outs[k - 1].exp.normalized_sup) mono_exp = false;
    if (k > 0 && o.src.weighted_sup > outs[k - 1].src.weighted_sup) mono_src = false;
    Json e;
    e["gamma"] = o.sol.gamma;
    e["lambda"] = o.sol.lambda;
    e["log_mu"] = o.sol.log_mu;
    e["rho"] = o.sol.rho;
    e["rho_over_mu"] = o.sol.s_rho;
    e["B_at_rho_over_gamma"] = o.sol.value(o.sol.s_rho) / o.sol.gamma;
    e["decreasing"] = o.sol.decreasing;
    e["expansion_normalized_sup"] = o.exp.normalized_sup;
    e["expansion_leading_sup"] = o.exp.leading_sup;
    e["expansion_small_r_ratio"] = o.exp.small_r_ratio;
    e["expansion_A_correction"] = o.exp.fitted_A_correction;
    e["source_center_gap"] = o.src.center_gap;
    e["source_weighted_sup"] = o.src.weighted_sup;
    e["source_t_at_sup"] = o.src.t_at_sup;
    e["energy"] = o.energy;
    e["energy_radius"] = o.energy_R;
    e["rescaling_gap"] = o.resc;
    arr.push_back(e);
    std::vector<std::vector<double>> rows;
    const double g = o.sol.gamma, A = data.A(g), xi = xi_weight(N, g);
    for (std::size_t i = 0; i < o.sol.x.size(); ++i) {
      const double s = std::exp(o.sol.x[i]), r = o.sol.mu * s, t = std::log1p(s * s);
      const double lead = g - t / g;
      const double expn = lead + ps.S[0](s) / std::pow(g, 3) + ps.S[1](s) / std::pow(g, 5) +
                          (A - 2.0 * xi) * ps.S[2](s) / g;
      rows.push_back({r, s, o.sol.B[i], o.sol.sB[i] / r, t, lead, expn, o.sol.B[i] - expn});
    }
    std::ostringstream name;
    name << "bubble_gamma_" << o.sol.gamma << ".csv";
    write_csv(out_path(opt, name.str()), {"r", "s", "B", "dB_dr", "t", "leading", "expansion", "remainder"}, rows);
  }
  j["ladder"] = arr;
  j["expansion_nonincreasing"] = mono_exp;
  j["source_nonincreasing"] = mono_src;
  write_json_file(out_path(opt, "bubble_report.json"), j);
  for (const auto& o : outs)
    std::cout << "gamma " << o.sol.gamma << "  expansion " << fmt(o.exp.normalized_sup) << "  source "
              << fmt(o.src.weighted_sup) << "  energy " << fmt(o.energy) << "\n";
  return 0;
}

int cmd_extremal(const Json& cfg, const CliOptions& opt) {
  const Perturbation fam = family_of(cfg);
  const int N = get_int(cfg, "N", 0);
  const std::vector<double> fr = get_numbers(cfg, "alphas_over_4pi", {0.7, 0.8, 0.9, 0.95});
  check_increasing(fr, "alphas_over_4pi");
  for (double f : fr)
    if (!(f > 0) || f >= 1.0) throw ConfigError("field 'alphas_over_4pi' must lie in (0, 1); alpha > 4 pi has infinite supremum");
  std::vector<Start> starts = default_starts();
  if (cfg.contains("starts")) {
    const Json& s = cfg.at("starts");
    if (!s.is_array() || s.empty()) throw ConfigError("field 'starts' must be a non-empty array");
    starts.clear();
    for (const auto& e : s) {
      if (!e.is_object() || !e.contains("kind")) throw ConfigError("field 'starts' entries need a 'kind'");
      const std::string k = e.at("kind").get<std::string>();
      Start st;
      if (k == "flat") st.kind = StartKind::Flat;
      else if (k == "eigen") st.kind = StartKind::Eigen;
      else if (k == "bubble") {
        st.kind = StartKind::Bubble;
        st.eps = get_number(e, "eps", 0.1);
      } else throw ConfigError("field 'starts.kind' must be flat, eigen or bubble");
      starts.push_back(st);
    }
  }
  AscentOptions ao;
  ao.rel_tol *= opt.tolerance_scale;
  ao.grid_nodes = get_int(cfg, "grid_nodes", ao.grid_nodes);
  const Domain disk({});
  Json j = header(cfg, opt, "extremal");
  j["family"] = family_to_json(fam);
  j["N"] = N;
  Json runs = Json::array();
  for (std::size_t k = 0; k < fr.size(); ++k) {
    const ExtremalRun run = solve_subcritical(fam, N, fr[k] * kFourPi, starts, ao);
    Json e;
    e["alpha"] = run.alpha;
    e["alpha_over_4pi"] = fr[k];
    e["J"] = run.J;
    e["gamma"] = run.gamma;
    e["lambda"] = run.lambda;
    e["el_residual"] = run.el_residual;
    e["norm_sq"] = run.norm_sq;
    e["branch"] = run.saturated ? "saturated" : "interior";
    e["stalled"] = run.stalled;
    e["iterations"] = run.iterations;
    e["start"] = run.start;
    runs.push_back(e);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < run.r.size(); ++i) rows.push_back({run.r[i], run.u[i]});
    write_csv(out_path(opt, "extremal_alpha_" + std::to_string(k) + ".csv"), {"r", "u"}, rows);
    std::cout << "alpha/4pi " << fr[k] << "  J " << fmt(run.J) << "  gamma " << fmt(run.gamma) << "  residual "
              << fmt(run.el_residual) << "\n";
  }
  j["runs"] = runs;
  Json s1 = Json::array();
  for (double eps : get_numbers(cfg, "step1_eps", {0.01, 0.005, 0.0025})) {
    const TestFunctionEnergy t = step1_testfun(disk, fam, eps, {0.0, 0.0}, N);
    s1.push_back({{"eps", eps}, {"norm_sq", t.norm_sq}, {"norm_sq_model", t.norm_sq_model}, {"f_norm_sq", t.f_norm_sq}, {"J", t.J}});
  }
  j["step1"] = s1;
  const std::vector<double> mg = get_numbers(cfg, "model_gammas", {});
  if (!mg.empty()) {
    const ProfileSet ps = solve_profiles();
    const AsymptoticData data = asymptotic_data(fam);
    Json m = Json::array();
    for (double g : mg) {
      const ModelEnergy me = model_testfun_energy(disk, fam, data, ps, g);
      m.push_back({{"gamma", g}, {"log_inv_mu2", me.log_inv_mu2}, {"log_inv_mu2_closed", me.log_inv_mu2_closed},
                   {"mu_rel_gap", me.mu_rel_gap}, {"norm_sq", me.norm_sq}, {"I", me.I},
                   {"normalized_gap", me.normalized_gap}, {"J", me.J}});
    }
    j["model"] = m;
  }
  write_json_file(out_path(opt, "extremal_report.json"), j);
  return 0;
}

int cmd_verify(const Json& cfg, const CliOptions& opt) {
  VerifyOptions vo;
  vo.seed = opt.seed;
  vo.tolerance_scale = opt.tolerance_scale;
  if (cfg.contains("inject")) {
    const Json& inj = cfg.at("inject");
    if (!inj.is_object()) throw ConfigError("field 'inject' must be an object");
    for (auto it = inj.begin(); it != inj.end(); ++it) {
      if (!it.value().is_number()) throw ConfigError("field 'inject." + it.key() + "' must be a number");
      vo.reference_override[it.key()] = it.value().get<double>();
    }
  }
  const auto rows = run_verification(vo);
  Json j = header(cfg, opt, "verify");
  Json arr = Json::array();
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    arr.push_back({{"name", r.name}, {"pass", r.pass}, {"value", r.value}, {"threshold", r.threshold}});
    std::cout << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(28) << r.name << " " << fmt(r.value)
              << " (<= " << fmt(r.threshold) << ")\n";
  }
  j["checks"] = arr;
  j["all_pass"] = all;
  write_json_file(out_path(opt, "verify_report.json"), j);
  return all ? 0 : 1;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Numerical checks of the extremal criterion for perturbed Moser-Trudinger inequalities"};
  app.require_subcommand(1);
  CliOptions opt;
  app.add_option("--config", opt.config, "scenario JSON");
  app.add_option("--out", opt.out, "output directory");
  app.add_option("--jobs", opt.jobs, "worker threads (0: runtime default)");
  app.add_option("--seed", opt.seed, "seed for randomized checks");
  app.add_option("--tolerance-scale", opt.tolerance_scale, "multiplies numerical tolerances")
      ->check(CLI::PositiveNumber);
  app.set_version_flag("--version", std::string(kToolVersion));
  auto* c1 = app.add_subcommand("criterion", "criterion quantities and verdict");
  auto* c2 = app.add_subcommand("profiles", "radial correction profiles and constants");
  auto* c3 = app.add_subcommand("bubble", "bubble ladder and expansion residuals");
  auto* c4 = app.add_subcommand("extremal", "subcritical extremals and test functions");
  auto* c5 = app.add_subcommand("verify", "invariant suite");
  for (auto* c : {c1, c2, c3, c4, c5}) c->fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    if (opt.jobs > 0) set_thread_count(opt.jobs);
    Json cfg = Json::object();
    if (!opt.config.empty()) cfg = parse_json_file(opt.config);
    if (!cfg.is_object()) throw ConfigError("config root must be an object");
    if (c1->parsed()) return cmd_criterion(cfg, opt);
    if (c2->parsed()) return cmd_profiles(cfg, opt);
    if (c3->parsed()) return cmd_bubble(cfg, opt);
    if (c4->parsed()) return cmd_extremal(cfg, opt);
    if (c5->parsed()) return cmd_verify(cfg, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace mtc
