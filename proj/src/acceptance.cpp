#include "wfb/acceptance.hpp"

#include "wfb/bernstein.hpp"
#include "wfb/rates.hpp"
#include "wfb/wf_chain.hpp"
#include "wfb/wf_diffusion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace wfb {

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    if (!pass) detail << "; ";
    pass = false;
    detail << why;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Polynomial<Rational> closed_form_xsq_iterate(std::int64_t n, std::int64_t k) {
  const Rational c = ipow(Rational(1) - make_rational(1, n), k);
  return Polynomial<Rational>{Rational(0), Rational(1 - c), c};
}

// 1. Both moment-coefficient formulas agree exactly for r <= 10.
void moment_identity(Outcome& o, const AcceptanceOptions&) {
  const auto rep = coefficient_identity_check(10);
  if (rep.triples != 220) o.fail("expected 220 triples, got " + std::to_string(rep.triples));
  if (!rep.failures.empty()) o.fail(std::to_string(rep.failures.size()) + " identity failures");
  for (std::int64_t r = 1; r <= 10; ++r)
    if (!(moment_expansion(r) == moment_expansion_kr(r))) o.fail("expansions differ at r=" + std::to_string(r));
  if (o.pass) o.detail << rep.triples << " triples, 0 failures; expansions identical for r<=10";
}

// 2. B_n^k x^2 closed form, exact and float; error to B_1 shrinks by (1-1/n) per step.
void kelisky_rivlin_closed_form(Outcome& o, const AcceptanceOptions&) {
  double worst_float = 0.0;
  for (std::int64_t n = 2; n <= 10; ++n) {
    const TransitionMatrix<Rational> Pq(n);
    const TransitionMatrix<double> Pd(n);
    const auto fq = sample_grid<Rational>(n, [](const Rational& x) { return Rational(x * x); });
    auto vq = fq.values;
    auto vd = sample_grid<double>(n, [](double x) { return x * x; }).values;
    const Rational ratio_expected = Rational(1) - make_rational(1, n);
    std::vector<Rational> prev_err(vq.size());
    for (std::int64_t j = 0; j <= n; ++j) prev_err[j] = vq[j] - make_rational(j, n);
    for (std::int64_t k = 1; k <= 100; ++k) {
      vq = Pq.apply(vq);
      vd = Pd.apply(vd);
      const auto closed = closed_form_xsq_iterate(n, k);
      for (std::int64_t j = 0; j <= n; ++j) {
        const Rational x = make_rational(j, n);
        const Rational expect = closed(x);
        if (vq[j] != expect) {
          o.fail("exact mismatch n=" + std::to_string(n) + " k=" + std::to_string(k));
          return;
        }
        worst_float = std::max(worst_float, std::fabs(vd[j] - expect.get_d()));
        const Rational err = vq[j] - x;
        if (err != ratio_expected * prev_err[j]) {
          o.fail("error ratio differs from 1-1/n at n=" + std::to_string(n) + " k=" + std::to_string(k));
          return;
        }
        prev_err[j] = err;
      }
    }
  }
  if (worst_float > 1e-12) o.fail("float deviation " + fmt(worst_float) + " > 1e-12");
  if (o.pass) o.detail << "exact for n=2..10, k=1..100; max float deviation " << fmt(worst_float);
}

// 3. beta(k,x) <= n(1-1/n)^(k-1) x(1-x) exactly, and |B_n^k f - B_1 f| <= 2||f|| beta.
void rate_bound_dominance(Outcome& o, const AcceptanceOptions& opt) {
  const double scale = opt.corrupt_bound ? 1e-3 : 1.0;
  const Rational qscale(scale);
  for (std::int64_t n = 2; n <= 10; ++n) {
    const TransitionMatrix<Rational> P(n);
    std::vector<Rational> beta(static_cast<std::size_t>(n + 1), Rational(1));
    beta.front() = 0;
    beta.back() = 0;
    for (std::int64_t k = 1; k <= 100; ++k) {
      beta = P.apply(beta);
      for (std::int64_t j = 0; j <= n; ++j) {
        if (beta[j] > qscale * beta_upper_bound(n, k, make_rational(j, n))) {
          o.fail("beta bound violated at n=" + std::to_string(n) + " k=" + std::to_string(k) +
                 " j=" + std::to_string(j));
          return;
        }
      }
    }
    const auto xsq = sample_grid<Rational>(n, [](const Rational& x) { return Rational(x * x); });
    const auto vee = sample_grid<Rational>(n, [](const Rational& x) {
      return abs_value(Rational(x - make_rational(1, 2)));
    });
    for (const auto* f : {&xsq, &vee}) {
      const auto rep = kr_convergence_curve(*f, 100, scale);
      if (!rep.all_pass()) {
        o.fail(describe_row(rep, static_cast<std::size_t>(rep.first_failure())));
        return;
      }
    }
  }
  o.detail << "exact dominance for n=2..10, k=1..100, f in {x^2, |x-1/2|}";
}

// 4. Voronovskaya residuals, the Lipschitz-f'' bound, and saturation.
void voronovskaya(Outcome& o, const AcceptanceOptions&) {
  const auto xsq = Polynomial<Rational>::monomial(2);
  for (std::int64_t n = 1; n <= 100; ++n)
    if (voronovskaya_residual(xsq, n) != 0) o.fail("x^2 residual nonzero at n=" + std::to_string(n));
  const auto x4 = Polynomial<Rational>::monomial(4);
  const double lip = second_derivative_lipschitz(to_double(x4));
  if (std::fabs(lip - 24.0) > 1e-9) o.fail("Lip((x^4)'') = " + fmt(lip) + ", expected 24");
  for (std::int64_t n : {4, 16, 64, 256}) {
    const double res = voronovskaya_residual(x4, n).get_d();
    const double bound = voronovskaya_bound(24.0, n);
    if (res > bound) o.fail("x^4 residual " + fmt(res) + " > " + fmt(bound) + " at n=" + std::to_string(n));
  }
  const double sat = saturation_ratio(Polynomial<Rational>::monomial(3), 512);
  if (std::fabs(sat - 1.0) > 0.02) o.fail("n||B_n x^3 - x^3|| / ||L x^3|| = " + fmt(sat) + " at n=512");
  if (o.pass) o.detail << "x^2 residual 0 for n<=100; x^4 within bound; saturation ratio " << fmt(sat);
}

// 5. B_n^[nt] x^r against E X_t^r.
void joint_limit(Outcome& o, const AcceptanceOptions&) {
  const std::vector<std::int64_t> ns{50, 100, 200, 400};
  const auto rep2 = joint_limit_experiment(2, 1.0, ns);
  std::vector<double> err;
  for (const auto& row : rep2.rows) err.push_back(std::get<double>(row.cells[2]));
  if (err[1] > 5e-4) o.fail("r=2 error at n=100 is " + fmt(err[1]) + " > 5e-4");
  for (std::size_t i = 1; i < err.size(); ++i) {
    const double ratio = err[i] / err[i - 1];
    if (ratio < 0.4 || ratio > 0.6)
      o.fail("r=2 doubling ratio " + fmt(ratio) + " outside [0.4,0.6] at n=" + std::to_string(ns[i]));
  }
  for (std::int64_t r : {3, 4}) {
    const auto rep = joint_limit_experiment(r, 1.0, ns);
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
      if (!(std::get<double>(rep.rows[i].cells[2]) < std::get<double>(rep.rows[i - 1].cells[2])))
        o.fail("r=" + std::to_string(r) + " error not decreasing at n=" + std::to_string(ns[i]));
  }
  if (o.pass) o.detail << "r=2 errors " << fmt(err[0]) << ", " << fmt(err[1]) << ", " << fmt(err[2]) << ", " << fmt(err[3]);
}

// 6. Absorption at 1 happens with probability x.
void chain_absorption(Outcome& o, const AcceptanceOptions& opt) {
  const auto est = absorption_prob_mc(10, 0.3, 100000, 10000, opt.seed);
  if (est.censored != 0) o.fail(std::to_string(est.censored) + " censored replicas");
  const double dev = std::fabs(est.estimate - 0.3);
  if (dev > 0.0043) o.fail("|p - 0.3| = " + fmt(dev) + " > 0.0043");
  if (o.pass) o.detail << "p = " << fmt(est.estimate) << ", censored 0, mean T = " << fmt(est.mean_absorption_time);
}

// 7. Euler-Maruyama moments against the closed form.
void diffusion_moments(Outcome& o, const AcceptanceOptions& opt) {
  const double dt = 1e-3;
  const auto terminal = euler_maruyama_ensemble(0.5, 0.5, dt, 100000, opt.seed);
  for (int r : {2, 3}) {
    const auto m = sample_moment(terminal, r);
    const double exact = moment_eval(r, 0.5, 0.5);
    const double tol = 3.0 * m.std_error + 2.0 * dt;
    const double dev = std::fabs(m.estimate - exact);
    if (dev > tol) o.fail("m" + std::to_string(r) + " deviation " + fmt(dev) + " > " + fmt(tol));
    else o.detail << (r == 2 ? "" : "; ") << "m" << r << " " << fmt(m.estimate) << " vs " << fmt(exact) << " (tol " << fmt(tol) << ")";
  }
}

// 8. Exact binomial tails against 2 exp(-eps^2 n / 2).
void hoeffding(Outcome& o, const AcceptanceOptions&) {
  std::vector<Rational> eps, ys;
  for (int e = 1; e <= 19; ++e) eps.push_back(make_rational(e, 20));
  for (int i = 0; i <= 20; ++i) ys.push_back(make_rational(i, 20));
  std::int64_t cells = 0;
  for (std::int64_t n = 1; n <= 50; ++n) {
    const auto rep = hoeffding_check(n, eps, ys);
    cells += static_cast<std::int64_t>(rep.rows.size());
    if (!rep.all_pass()) {
      o.fail(describe_row(rep, static_cast<std::size_t>(rep.first_failure())));
      return;
    }
  }
  o.detail << cells << " cells, 0 violations";
}

// 9. One-step mean change 0 and n * variance = y(1-y), exactly.
void step_moments(Outcome& o, const AcceptanceOptions&) {
  for (std::int64_t n = 2; n <= 20; ++n) {
    const auto rep = step_moment_check(n);
    if (!rep.all_pass()) {
      o.fail(describe_row(rep, static_cast<std::size_t>(rep.first_failure())));
      return;
    }
  }
  o.detail << "exact for n=2..20";
}

// 10. Convexity preservation, B_n f >= f for convex f, and monotonicity.
void convexity(Outcome& o, const AcceptanceOptions& opt) {
  const auto xs = uniform_grid<double>(kSupGridPoints);
  double worst_second = 0.0;
  for (std::int64_t n = 3; n <= 12; ++n) {
    for (std::int64_t m = 0; m < 100; ++m) {
      RandomStream rng(opt.seed, static_cast<std::uint64_t>(1000 * n + m));
      // max of a few random affine functions
      const auto lines = 1 + static_cast<int>(rng.next_u64() % 5);
      std::vector<std::pair<double, double>> ab;
      for (int l = 0; l < lines; ++l) ab.emplace_back(4.0 * rng.uniform() - 2.0, 2.0 * rng.uniform() - 1.0);
      const auto f = sample_grid<double>(n, [&](double x) {
        double v = -1e300;
        for (auto [a, b] : ab) v = std::max(v, a * x + b);
        return v;
      });
      auto g = f;
      for (auto& v : g.values) v += rng.uniform();
      for (double x : xs) {
        const double d2 = bernstein_second_derivative(f, x);
        worst_second = std::min(worst_second, d2);
        if (d2 < -1e-12) {
          o.fail("(B_n f)'' = " + fmt(d2) + " at n=" + std::to_string(n) + " x=" + fmt(x));
          return;
        }
        if (apply_bernstein(f, x) > apply_bernstein(g, x) + 1e-12) {
          o.fail("monotonicity violated at n=" + std::to_string(n));
          return;
        }
      }
      for (std::int64_t j = 0; j <= n; ++j) {
        if (apply_bernstein(f, static_cast<double>(j) / static_cast<double>(n)) < f[j] - 1e-12) {
          o.fail("B_n f < f at n=" + std::to_string(n) + " j=" + std::to_string(j));
          return;
        }
      }
    }
  }
  o.detail << "1000 convex grid functions; min (B_n f)'' = " << fmt(worst_second);
}

// 11. E|Phi(nt) - [nt]| by Monte Carlo, against the exact value and sqrt(nt) + 1.
void poissonization(Outcome& o, const AcceptanceOptions& opt) {
  for (double mean : {10.0, 100.0, 1000.0}) {
    const auto est = poisson_abs_deviation_mc(mean, 100000, opt.seed);
    const double exact = poisson_abs_deviation_exact(mean);
    const double cap = std::sqrt(mean) + 1.0;
    if (std::fabs(est.estimate - exact) > 3.0 * est.std_error)
      o.fail("nt=" + fmt(mean) + ": MC " + fmt(est.estimate) + " vs exact " + fmt(exact));
    if (exact > cap || est.estimate > cap) o.fail("nt=" + fmt(mean) + ": exceeds sqrt(nt)+1");
    if (o.pass) o.detail << (mean == 10.0 ? "" : "; ") << "nt=" << fmt(mean) << ": " << fmt(est.estimate) << " (exact " << fmt(exact) << ")";
  }
}

struct CriterionSpec {
  int id;
  const char* title;
  std::optional<double> limit;
  void (*body)(Outcome&, const AcceptanceOptions&);
};

const CriterionSpec kCriteria[] = {
    {1, "moment coefficient formulas agree exactly", 5.0, moment_identity},
    {2, "iterates of x^2 match the closed form", std::nullopt, kelisky_rivlin_closed_form},
    {3, "geometric rate bounds dominate", 30.0, rate_bound_dominance},
    {4, "Voronovskaya residual, bound and saturation", std::nullopt, voronovskaya},
    {5, "joint limit k = [nt] converges to the diffusion", 60.0, joint_limit},
    {6, "chain absorbs at 1 with probability x", 20.0, chain_absorption},
    {7, "Euler-Maruyama moments match the closed form", 120.0, diffusion_moments},
    {8, "binomial tails below the Hoeffding bound", std::nullopt, hoeffding},
    {9, "step mean and variance scaling", std::nullopt, step_moments},
    {10, "convexity preservation and monotonicity", std::nullopt, convexity},
    {11, "Poissonized step count deviation", std::nullopt, poissonization},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  const auto* spec = std::find_if(std::begin(kCriteria), std::end(kCriteria),
                                  [id](const CriterionSpec& c) { return c.id == id; });
  if (spec == std::end(kCriteria)) throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  CriterionResult res;
  res.id = id;
  res.title = spec->title;
  res.time_limit = spec->limit;
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  try {
    spec->body(o, options);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (res.time_limit && res.seconds > *res.time_limit)
    o.fail("runtime " + fmt(res.seconds) + " s exceeds " + fmt(*res.time_limit) + " s");
  res.pass = o.pass;
  res.detail = o.detail.str();
  return res;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  std::vector<CriterionResult> out;
  for (const auto& c : kCriteria)
    if (options.only.empty() || options.only.count(c.id)) out.push_back(run_criterion(c.id, options));
  return out;
}

RateReport acceptance_report(const std::vector<CriterionResult>& results, std::uint64_t seed) {
  RateReport rep;
  rep.experiment_name = "verify_all";
  rep.add_parameter("seed", std::to_string(seed));
  rep.columns = {"criterion", "title", "time_limit_s", "detail"};
  for (const auto& r : results) {
    rep.add_row({static_cast<std::int64_t>(r.id), r.title,
                 r.time_limit ? Cell(*r.time_limit) : Cell(std::string("none")), r.detail},
                r.pass);
  }
  return rep;
}

std::string format_result_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.title << " (" << fmt(r.seconds) << " s";
  if (r.time_limit) os << ", limit " << fmt(*r.time_limit) << " s";
  os << "): " << r.detail;
  return os.str();
}

}  // namespace wfb
