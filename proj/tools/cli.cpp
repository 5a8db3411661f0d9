#include "cli.hpp"

#include "wfb/acceptance.hpp"
#include "wfb/bernstein.hpp"
#include "wfb/rates.hpp"
#include "wfb/report.hpp"
#include "wfb/test_functions.hpp"
#include "wfb/wf_chain.hpp"
#include "wfb/wf_diffusion.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace wfb::cli {

namespace {

struct Global {
  std::uint64_t seed = kDefaultSeed;
  std::string format = "csv";
  std::string out;
};

struct Context {
  const Global& global;
  std::ostream& out;
  std::ostream& err;
  bool color;

  OutputFormat format() const { return global.format == "json" ? OutputFormat::json : OutputFormat::csv; }

  int emit(const RateReport& rep) const {
    const auto text = render(rep, format());
    if (global.out.empty()) {
      out << text;
    } else {
      std::ofstream f(global.out, std::ios::binary);
      if (!f) throw std::invalid_argument("--out: cannot open '" + global.out + "'");
      f << text;
    }
    const auto bad = rep.first_failure();
    if (bad < 0) return kOk;
    std::size_t count = 0;
    for (const auto& row : rep.rows) count += row.pass ? 0 : 1;
    err << "bound violation (" << count << " row" << (count == 1 ? "" : "s") << "): "
        << describe_row(rep, static_cast<std::size_t>(bad)) << '\n';
    return kBoundViolation;
  }
};

using Runner = std::function<int(const Context&)>;

template <class S>
S parse_scalar(const std::string& text, const char* name) {
  try {
    const Rational q = parse_rational(text);
    if constexpr (is_exact_v<S>) return q;
    else return q.get_d();
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument(std::string(name) + ": not a number: '" + text + "'");
  }
}

template <class S>
Cell cell(const S& v) {
  if constexpr (is_exact_v<S>) return Cell(Rational(v));
  else return Cell(static_cast<double>(v));
}

std::int64_t resolve_n(const TestFunction& fn, std::int64_t n) {
  if (auto fixed = fn.fixed_n()) return *fixed;
  return n;
}

// approx ---------------------------------------------------------------------

struct ApproxParams {
  std::int64_t n = 10;
  std::string fn = "xsq";
  std::string x;
  bool exact = false;
};

template <class S>
RateReport approx_report(const ApproxParams& p) {
  const auto fn = TestFunction::parse(p.fn);
  const auto n = resolve_n(fn, p.n);
  const auto g = fn.grid<S>(n);
  RateReport rep;
  rep.experiment_name = "bernstein_approximation";
  rep.add_parameter("n", std::to_string(n));
  rep.add_parameter("fn", p.fn);
  rep.add_parameter("mode", is_exact_v<S> ? "exact" : "float");
  rep.show_pass = false;
  rep.columns = {"x", "f_x", "Bn_f_x", "Bn_f_minus_f"};
  std::vector<S> xs;
  if (!p.x.empty()) xs.push_back(parse_scalar<S>(p.x, "--x"));
  else if (fn.fixed_n()) for (std::int64_t j = 0; j <= n; ++j) xs.push_back(grid_point<S>(n, j));
  else xs = uniform_grid<S>(kSupGridPoints);
  for (const auto& x : xs) {
    require_unit_interval(x, "--x");
    const S b = apply_bernstein(g, x);
    S fx;
    if (fn.fixed_n()) {
      const auto j = static_cast<std::int64_t>(std::llround(to_double(x) * static_cast<double>(n)));
      if (grid_point<S>(n, j) != x) {
        rep.add_row({cell(x), std::numeric_limits<double>::quiet_NaN(), cell(b), std::numeric_limits<double>::quiet_NaN()});
        continue;
      }
      fx = g[j];
    } else if constexpr (is_exact_v<S>) {
      fx = fn.exact_value(x);
    } else {
      fx = fn(x);
    }
    rep.add_row({cell(x), cell(fx), cell(b), cell(S(b - fx))});
  }
  return rep;
}

Runner add_approx(CLI::App& app) {
  auto p = std::make_shared<ApproxParams>();
  auto* sub = app.add_subcommand("approx", "Evaluate B_n f against f");
  sub->add_option("--n", p->n, "degree n")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--fn", p->fn, "test function")->capture_default_str();
  sub->add_option("--x", p->x, "single evaluation point (default: 201-point grid)");
  sub->add_flag("--exact", p->exact, "exact rational arithmetic");
  return [p](const Context& c) { return c.emit(p->exact ? approx_report<Rational>(*p) : approx_report<double>(*p)); };
}

// iterate --------------------------------------------------------------------

struct IterateParams {
  std::int64_t n = 5;
  std::int64_t k = 1;
  std::string fn = "xsq";
  bool exact = false;
};

template <class S>
RateReport iterate_report(const IterateParams& p) {
  const auto fn = TestFunction::parse(p.fn);
  const auto n = resolve_n(fn, p.n);
  const auto f = fn.grid<S>(n);
  const TransitionMatrix<S> P(n);
  const auto it = iterate_grid(P, f, p.k);
  const auto limit = kelisky_rivlin_limit(f);
  std::optional<GridFunction<S>> beta;
  if (p.k >= 1) beta = beta_exact(P, p.k);
  const S fsup = sup_norm(f);

  RateReport rep;
  rep.experiment_name = "bernstein_iterates";
  rep.add_parameter("n", std::to_string(n));
  rep.add_parameter("k", std::to_string(p.k));
  rep.add_parameter("fn", p.fn);
  rep.add_parameter("mode", is_exact_v<S> ? "exact" : "float");
  rep.show_pass = false;
  rep.columns = {"x", "f_x", "bound_2f_beta", "Bn^k_f", "B1_f", "abs_err"};
  for (std::int64_t j = 0; j <= n; ++j) {
    const S x = grid_point<S>(n, j);
    const S lim = limit(x);
    const S err = abs_value(S(it[j] - lim));
    if (beta) {
      const S bound = kr_error_bound_tight(fsup, (*beta)[j]);
      rep.add_row({cell(x), cell(f[j]), cell(bound), cell(it[j]), cell(lim), cell(err)}, err <= bound);
    } else {
      rep.add_row({cell(x), cell(f[j]), std::numeric_limits<double>::quiet_NaN(), cell(it[j]), cell(lim), cell(err)});
    }
  }
  return rep;
}

Runner add_iterate(CLI::App& app) {
  auto p = std::make_shared<IterateParams>();
  auto* sub = app.add_subcommand("iterate", "Grid values of B_n^k f against the limit B_1 f");
  sub->add_option("--n", p->n, "degree n")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--k", p->k, "number of iterations")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--fn", p->fn, "test function")->capture_default_str();
  sub->add_flag("--exact", p->exact, "exact rational arithmetic");
  return [p](const Context& c) { return c.emit(p->exact ? iterate_report<Rational>(*p) : iterate_report<double>(*p)); };
}

// chain-sim ------------------------------------------------------------------

struct ChainParams {
  std::int64_t n = 10;
  std::string x = "0.3";
  std::int64_t replicas = 100000;
  std::int64_t max_steps = 10000;
};

Runner add_chain_sim(CLI::App& app) {
  auto p = std::make_shared<ChainParams>();
  auto* sub = app.add_subcommand("chain-sim", "Monte Carlo absorption statistics of the Wright-Fisher chain");
  sub->add_option("--n", p->n, "population size n")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--x", p->x, "start state (snapped to the grid)")->capture_default_str();
  sub->add_option("--replicas", p->replicas, "independent replicas")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--max-steps", p->max_steps, "censoring horizon")->check(CLI::NonNegativeNumber)->capture_default_str();
  return [p](const Context& c) {
    const double x = parse_scalar<double>(p->x, "--x");
    const auto est = absorption_prob_mc(p->n, x, p->replicas, p->max_steps, c.global.seed);
    const double tol = 3.0 * std::sqrt(est.start * (1.0 - est.start) / static_cast<double>(p->replicas));
    RateReport rep;
    rep.experiment_name = "chain_absorption";
    rep.add_parameter("seed", std::to_string(c.global.seed));
    rep.columns = {"n", "x", "snapped", "replicas", "absorbed_at_one", "censored",
                   "estimate", "std_error", "tolerance_3sigma", "mean_absorption_time"};
    const bool pass = est.censored == 0 && std::fabs(est.estimate - est.start) <= tol;
    rep.add_row({p->n, est.start, std::string(est.snapped ? "yes" : "no"), p->replicas, est.absorbed_at_one,
                 est.censored, est.estimate, est.std_error, tol, est.mean_absorption_time},
                pass);
    if (est.snapped) c.err << "warning: --x " << p->x << " snapped to grid point " << format_double(est.start) << '\n';
    return c.emit(rep);
  };
}

// diffusion-sim --------------------------------------------------------------

struct DiffusionParams {
  std::string x = "0.5";
  double t = 0.5;
  double dt = 1e-3;
  std::int64_t replicas = 100000;
  std::int64_t r = 3;
};

Runner add_diffusion_sim(CLI::App& app) {
  auto p = std::make_shared<DiffusionParams>();
  auto* sub = app.add_subcommand("diffusion-sim", "Euler-Maruyama moments against the closed form");
  sub->add_option("--x", p->x, "start point")->capture_default_str();
  sub->add_option("--t", p->t, "horizon")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--dt", p->dt, "time step")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--replicas", p->replicas, "paths")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--r", p->r, "highest moment")->check(CLI::Range(1, 64))->capture_default_str();
  return [p](const Context& c) {
    const double x = parse_scalar<double>(p->x, "--x");
    const auto terminal = euler_maruyama_ensemble(x, p->t, p->dt, p->replicas, c.global.seed);
    RateReport rep;
    rep.experiment_name = "diffusion_moments";
    rep.add_parameter("x", format_double(x));
    rep.add_parameter("t", format_double(p->t));
    rep.add_parameter("dt", format_double(p->dt));
    rep.add_parameter("seed", std::to_string(c.global.seed));
    rep.columns = {"r", "mc_moment", "std_error", "closed_form", "tolerance_3se_plus_2dt"};
    for (std::int64_t r = 1; r <= p->r; ++r) {
      const auto m = sample_moment(terminal, static_cast<int>(r));
      const double exact = moment_eval(r, p->t, x);
      const double tol = 3.0 * m.std_error + 2.0 * p->dt;
      rep.add_row({r, m.estimate, m.std_error, exact, tol}, std::fabs(m.estimate - exact) <= tol);
    }
    return c.emit(rep);
  };
}

// moments --------------------------------------------------------------------

struct MomentsParams {
  std::int64_t r = 4;
  std::optional<double> t;
  std::string x;
};

Runner add_moments(CLI::App& app) {
  auto p = std::make_shared<MomentsParams>();
  auto* sub = app.add_subcommand("moments", "Exact coefficients of E X_t^r from both formulas");
  sub->add_option("--r", p->r, "moment order")->check(CLI::Range(1, 64))->capture_default_str();
  sub->add_option("--t", p->t, "also evaluate at this time")->check(CLI::NonNegativeNumber);
  sub->add_option("--x", p->x, "also evaluate at this start point");
  return [p](const Context& c) {
    const auto a = moment_expansion(p->r);
    const auto b = moment_expansion_kr(p->r);
    RateReport rep;
    rep.experiment_name = "moment_coefficients";
    rep.add_parameter("r", std::to_string(p->r));
    rep.columns = {"i", "j", "coefficient", "rate", "coefficient_closed_binomial"};
    for (std::size_t n = 0; n < a.terms.size(); ++n) {
      const auto& ta = a.terms[n];
      const auto& tb = b.terms[n];
      rep.add_row({ta.i, ta.j, ta.coefficient, ta.rate, tb.coefficient}, ta == tb);
    }
    if (p->t && !p->x.empty()) {
      const double x = parse_scalar<double>(p->x, "--x");
      rep.notes.push_back("E X_t^r at t=" + format_double(*p->t) + " x=" + format_double(x) + ": " +
                          format_double(moment_eval(p->r, *p->t, x)));
    }
    return c.emit(rep);
  };
}

// identity-check -------------------------------------------------------------

Runner add_identity_check(CLI::App& app) {
  auto rmax = std::make_shared<std::int64_t>(10);
  auto* sub = app.add_subcommand("identity-check", "Exact check of the moment-coefficient identity");
  sub->add_option("--rmax", *rmax, "largest r")->check(CLI::Range(1, 64))->capture_default_str();
  return [rmax](const Context& c) {
    const auto res = coefficient_identity_check(*rmax);
    RateReport rep;
    rep.experiment_name = "coefficient_identity";
    rep.add_parameter("rmax", std::to_string(*rmax));
    rep.columns = {"i", "j", "r", "lhs_binomial_products", "rhs_closed_form"};
    for (const auto& row : res.rows) rep.add_row({row.i, row.j, row.r, row.lhs, row.rhs}, row.pass);
    const auto summary = std::to_string(res.triples) + " triples, " + std::to_string(res.failures.size()) + " failures";
    rep.notes.push_back(summary);
    c.err << summary << '\n';
    return c.emit(rep);
  };
}

// voronovskaya ---------------------------------------------------------------

struct VoronovskayaParams {
  std::string fn = "x4";
  std::vector<std::int64_t> n{4, 16, 64, 256};
};

Runner add_voronovskaya(CLI::App& app) {
  auto p = std::make_shared<VoronovskayaParams>();
  auto* sub = app.add_subcommand("voronovskaya", "n(B_n f - f) - L f against the Lipschitz-f'' bound");
  sub->add_option("--fn", p->fn, "polynomial test function")->capture_default_str();
  sub->add_option("--n", p->n, "degrees (comma separated)")->delimiter(',')->check(CLI::PositiveNumber)->capture_default_str();
  return [p](const Context& c) {
    const auto fn = TestFunction::parse(p->fn);
    if (!fn.polynomial()) throw std::invalid_argument("--fn: voronovskaya needs a polynomial (xsq|xcube|x4|linear)");
    return c.emit(voronovskaya_experiment(*fn.polynomial(), p->n));
  };
}

// hoeffding ------------------------------------------------------------------

struct HoeffdingParams {
  std::int64_t n = 50;
  std::vector<std::string> eps;
  std::int64_t y_points = 21;
};

Runner add_hoeffding(CLI::App& app) {
  auto p = std::make_shared<HoeffdingParams>();
  auto* sub = app.add_subcommand("hoeffding", "Exact binomial tails against 2 exp(-eps^2 n / 2)");
  sub->add_option("--n", p->n, "sample size")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--eps", p->eps, "deviation thresholds (default 0.05,0.10,...,0.95)")->delimiter(',');
  sub->add_option("--y-points", p->y_points, "uniform y-grid size")->check(CLI::Range(2, 10001))->capture_default_str();
  return [p](const Context& c) {
    std::vector<Rational> eps;
    for (const auto& e : p->eps) {
      eps.push_back(parse_scalar<Rational>(e, "--eps"));
      if (!(eps.back() > 0)) throw std::domain_error("--eps must be > 0");
    }
    if (eps.empty())
      for (int e = 1; e <= 19; ++e) eps.push_back(make_rational(e, 20));
    return c.emit(hoeffding_check(p->n, eps, uniform_grid<Rational>(p->y_points)));
  };
}

// joint-limit ----------------------------------------------------------------

struct JointParams {
  std::int64_t r = 2;
  double t = 1.0;
  std::vector<std::int64_t> n{50, 100, 200, 400};
};

Runner add_joint_limit(CLI::App& app) {
  auto p = std::make_shared<JointParams>();
  auto* sub = app.add_subcommand("joint-limit", "sup-error of B_n^[nt] x^r against E X_t^r");
  sub->add_option("--r", p->r, "monomial degree")->check(CLI::Range(1, 64))->capture_default_str();
  sub->add_option("--t", p->t, "diffusion time")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--n", p->n, "degrees (comma separated)")->delimiter(',')->check(CLI::PositiveNumber)->capture_default_str();
  return [p](const Context& c) { return c.emit(joint_limit_experiment(p->r, p->t, p->n)); };
}

// kr-curve -------------------------------------------------------------------

struct KrParams {
  std::int64_t n = 5;
  std::int64_t k = 100;
  std::string fn = "xsq";
  bool exact = false;
};

Runner add_kr_curve(CLI::App& app) {
  auto p = std::make_shared<KrParams>();
  auto* sub = app.add_subcommand("kr-curve", "Convergence of B_n^k f to B_1 f with both rate bounds");
  sub->add_option("--n", p->n, "degree n")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--k", p->k, "largest k")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--fn", p->fn, "test function")->capture_default_str();
  sub->add_flag("--exact", p->exact, "exact rational arithmetic");
  return [p](const Context& c) {
    const auto fn = TestFunction::parse(p->fn);
    const auto n = resolve_n(fn, p->n);
    auto rep = p->exact ? kr_convergence_curve(fn.grid<Rational>(n), p->k)
                        : kr_convergence_curve(fn.grid<double>(n), p->k);
    rep.add_parameter("fn", p->fn);
    return c.emit(rep);
  };
}

// verify-all -----------------------------------------------------------------

struct VerifyParams {
  std::vector<int> only;
  bool corrupt = false;
};

Runner add_verify_all(CLI::App& app) {
  auto p = std::make_shared<VerifyParams>();
  auto* sub = app.add_subcommand("verify-all", "Run the full acceptance suite");
  sub->add_option("--only", p->only, "criterion ids (comma separated)")->delimiter(',')->check(CLI::Range(1, kCriterionCount));
  sub->add_flag("--corrupt-bound", p->corrupt, "harness self-test: shrink a bound so the suite must fail")
      ->group("");
  return [p](const Context& c) {
    AcceptanceOptions opt;
    opt.seed = c.global.seed;
    opt.only.insert(p->only.begin(), p->only.end());
    opt.corrupt_bound = p->corrupt;
    const auto results = run_acceptance(opt);
    for (const auto& r : results) {
      const auto line = format_result_line(r);
      if (c.color) c.err << (r.pass ? "\033[32m" : "\033[31m") << line << "\033[0m\n";
      else c.err << line << '\n';
    }
    return c.emit(acceptance_report(results, opt.seed));
  };
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"Bernstein operator, Wright-Fisher chain and diffusion numerics", "wfb"};
  Global global;
  app.add_option("--seed", global.seed, "random seed")->capture_default_str();
  app.add_option("--format", global.format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", global.out, "write the table to PATH instead of stdout");
  app.require_subcommand(1, 1);

  const std::vector<Runner> runners{
      add_approx(app),       add_iterate(app),   add_chain_sim(app), add_diffusion_sim(app),
      add_moments(app),      add_identity_check(app), add_voronovskaya(app), add_hoeffding(app),
      add_joint_limit(app),  add_kr_curve(app),  add_verify_all(app)};
  const auto subs = app.get_subcommands([](const CLI::App*) { return true; });
  for (auto* sub : subs) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    try {
      return runners[i](Context{global, out, err, color});
    } catch (const std::domain_error& e) {
      err << "error: " << e.what() << '\n';
      return kUsageError;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kUsageError;
    }
  }
  return kUsageError;
}

}  // namespace wfb::cli
