#include "wfb/rates.hpp"

#include "wfb/wf_diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wfb {

namespace {

Rational grid_sup_abs(const Polynomial<Rational>& q, std::int64_t points) {
  Rational m(0);
  for (const auto& x : uniform_grid<Rational>(points)) {
    Rational v = abs_value(q(x));
    if (v > m) m = v;
  }
  return m;
}

std::string join_n(std::span<const std::int64_t> n_list) {
  std::string s;
  for (std::size_t i = 0; i < n_list.size(); ++i) s += (i ? " " : "") + std::to_string(n_list[i]);
  return s;
}

}  // namespace

Rational voronovskaya_residual(const Polynomial<Rational>& p, std::int64_t n, std::int64_t x_grid_size) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  const auto bn = bernstein_of_polynomial(p, n);
  const auto q = (bn - p) * Rational(n) - generator_apply(p);
  return grid_sup_abs(q, x_grid_size);
}

double voronovskaya_bound(double lip_fpp, std::int64_t n) {
  if (lip_fpp < 0.0) throw std::domain_error("Lipschitz constant must be >= 0");
  if (n < 1) throw std::domain_error("n must be >= 1");
  return lip_fpp / (16.0 * std::pow(3.0, 0.25)) / std::sqrt(static_cast<double>(n));
}

double sup_on_unit_interval(const Polynomial<double>& q) {
  double best = std::max(std::fabs(q(0.0)), std::fabs(q(1.0)));
  const auto dq = q.derivative();
  if (dq.is_zero()) return best;
  // A polynomial of modest degree has at most deg roots; a fine bracket grid
  // plus bisection isolates every sign change of q'.
  constexpr int kBrackets = 4096;
  double a = 0.0, fa = dq(0.0);
  for (int s = 1; s <= kBrackets; ++s) {
    const double b = static_cast<double>(s) / kBrackets;
    const double fb = dq(b);
    if (fa == 0.0) best = std::max(best, std::fabs(q(a)));
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = dq(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      best = std::max(best, std::fabs(q(0.5 * (lo + hi))));
    }
    a = b;
    fa = fb;
  }
  return best;
}

double second_derivative_lipschitz(const Polynomial<double>& p) {
  return sup_on_unit_interval(p.derivative().derivative().derivative());
}

double saturation_ratio(const Polynomial<Rational>& p, std::int64_t n, std::int64_t x_grid_size) {
  const auto diff = (bernstein_of_polynomial(p, n) - p) * Rational(n);
  const Rational lp = grid_sup_abs(generator_apply(p), x_grid_size);
  if (lp == 0) throw std::domain_error("saturation_ratio: L p vanishes on the grid");
  return Rational(grid_sup_abs(diff, x_grid_size) / lp).get_d();
}

RateReport voronovskaya_experiment(const Polynomial<Rational>& p, std::span<const std::int64_t> n_list,
                                   std::int64_t x_grid_size) {
  RateReport rep;
  rep.experiment_name = "voronovskaya_residual";
  rep.add_parameter("grid_points", std::to_string(x_grid_size));
  rep.add_parameter("n_list", join_n(n_list));
  const double lip = second_derivative_lipschitz(to_double(p));
  rep.add_parameter("lip_f2", format_double(lip));
  rep.columns = {"n", "residual", "bound_lip_f2_over_16_3^0.25_sqrt_n", "n_sup_Bnf_minus_f"};
  for (auto n : n_list) {
    const Rational res = voronovskaya_residual(p, n, x_grid_size);
    const double bound = voronovskaya_bound(lip, n);
    const double nsup = Rational(grid_sup_abs((bernstein_of_polynomial(p, n) - p) * Rational(n), x_grid_size)).get_d();
    rep.add_row({n, res.get_d(), bound, nsup}, res.get_d() <= bound);
  }
  return rep;
}

double kac_bound(double C, double alpha, std::int64_t n) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::domain_error("alpha must lie in (0,1]");
  if (C < 0.0) throw std::domain_error("C must be >= 0");
  if (n < 1) throw std::domain_error("n must be >= 1");
  return C * std::pow(2.0, -alpha) * std::pow(static_cast<double>(n), -alpha / 2.0);
}

McEstimate kac_mc_estimate(const std::function<double(double)>& f, std::int64_t n, double x,
                           std::int64_t replicas, std::uint64_t seed) {
  require_unit_interval(x, "x");
  if (replicas < 1) throw std::domain_error("replicas must be >= 1");
  const double fx = f(x);
  std::vector<double> v(static_cast<std::size_t>(replicas));
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < replicas; ++r) {
    RandomStream rng(seed, static_cast<std::uint64_t>(r));
    const auto s = rng.binomial(n, x);
    v[r] = std::fabs(f(static_cast<double>(s) / static_cast<double>(n)) - fx);
  }
  return summarize(v);
}

RateReport kac_experiment(const std::function<double(double)>& f, double C, double alpha,
                          std::span<const std::int64_t> n_list, double x, std::int64_t replicas,
                          std::uint64_t seed) {
  RateReport rep;
  rep.experiment_name = "kac_holder_rate";
  rep.add_parameter("C", format_double(C));
  rep.add_parameter("alpha", format_double(alpha));
  rep.add_parameter("x", format_double(x));
  rep.add_parameter("replicas", std::to_string(replicas));
  rep.columns = {"n", "mc_mean_abs_dev", "std_error", "bound_C_2^-a_n^-a/2"};
  for (auto n : n_list) {
    const auto est = kac_mc_estimate(f, n, x, replicas, seed);
    const double bound = kac_bound(C, alpha, n);
    rep.add_row({n, est.estimate, est.std_error, bound}, est.estimate <= bound);
  }
  return rep;
}

double hoeffding_bound(std::int64_t n, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("eps must be > 0");
  return 2.0 * std::exp(-0.5 * eps * eps * static_cast<double>(n));
}

namespace {

Rational tail_from_weights(std::int64_t n, const std::vector<Rational>& w, const Rational& y,
                           const Rational& eps) {
  Rational acc(0);
  for (std::int64_t j = 0; j <= n; ++j) {
    const Rational d = abs_value(Rational(make_rational(j, n) - y));
    if (d > eps) acc += w[j];
  }
  return acc;
}

}  // namespace

Rational binomial_tail_exact(std::int64_t n, const Rational& y, const Rational& eps) {
  return tail_from_weights(n, bernstein_weights(n, y), y, eps);
}

RateReport hoeffding_check(std::int64_t n, std::span<const Rational> eps_list, std::span<const Rational> y_grid) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  RateReport rep;
  rep.experiment_name = "hoeffding_tail";
  rep.add_parameter("n", std::to_string(n));
  rep.columns = {"n", "eps", "y", "exact_tail", "bound_2exp(-eps^2n/2)"};
  rep.notes.push_back("bound exponent is eps^2 n / (2 c^2) with c = 1 for indicator summands");
  for (const auto& y : y_grid) {
    const auto w = bernstein_weights(n, y);
    for (const auto& eps : eps_list) {
      if (!(eps > 0)) throw std::domain_error("eps must be > 0");
      const double tail = tail_from_weights(n, w, y, eps).get_d();
      const double bound = hoeffding_bound(n, eps.get_d());
      rep.add_row({n, eps, y, tail, bound}, tail <= bound);
    }
  }
  return rep;
}

RateReport hoeffding_check(std::int64_t n, const Rational& eps, std::span<const Rational> y_grid) {
  return hoeffding_check(n, std::span<const Rational>(&eps, 1), y_grid);
}

RateReport joint_limit_experiment(std::int64_t r, double t, std::span<const std::int64_t> n_list) {
  if (r < 1) throw std::domain_error("r must be >= 1");
  if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
  std::vector<std::int64_t> ns(n_list.begin(), n_list.end());
  std::sort(ns.begin(), ns.end());
  const auto grid = uniform_grid<double>(kSupGridPoints);
  const auto limit = semigroup_poly(Polynomial<double>::monomial(static_cast<std::size_t>(r)), t);

  RateReport rep;
  rep.experiment_name = "joint_limit";
  rep.add_parameter("r", std::to_string(r));
  rep.add_parameter("t", format_double(t));
  rep.columns = {"n", "k", "sup_error", "ratio_to_previous"};
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (auto n : ns) {
    if (n < 1) throw std::domain_error("n must be >= 1");
    const auto k = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * t));
    const auto f = sample_grid<double>(n, [r](double y) { return std::pow(y, static_cast<double>(r)); });
    double err = 0.0;
    if (k == 0) {
      for (double x : grid) err = std::max(err, std::fabs(std::pow(x, static_cast<double>(r)) - limit(x)));
    } else {
      const auto g = iterate_grid(f, k - 1);
      for (double x : grid) err = std::max(err, std::fabs(apply_bernstein(g, x) - limit(x)));
    }
    const bool pass = std::isnan(prev) || err <= prev + 1e-12;
    rep.add_row({n, k, err, err / prev}, pass);
    prev = err;
  }
  return rep;
}

template <class S>
RateReport kr_convergence_curve(const GridFunction<S>& f, std::int64_t k_max, double bound_scale) {
  if (k_max < 1) throw std::domain_error("k_max must be >= 1");
  const auto n = f.n;
  const TransitionMatrix<S> P(n);
  const S fsup = sup_norm(f);
  const auto limit = kelisky_rivlin_limit(f);
  std::vector<S> lim(static_cast<std::size_t>(n + 1));
  for (std::int64_t j = 0; j <= n; ++j) lim[j] = limit(grid_point<S>(n, j));
  const S scale = from_double<S>(bound_scale);

  RateReport rep;
  rep.experiment_name = "kelisky_rivlin_curve";
  rep.add_parameter("n", std::to_string(n));
  rep.add_parameter("k_max", std::to_string(k_max));
  rep.add_parameter("mode", is_exact_v<S> ? "exact" : "float");
  rep.columns = {"k", "sup_error", "bound_2f_beta", "envelope_2f_n(1-1/n)^(k-1)/4"};

  std::vector<S> v = f.values;
  std::vector<S> beta(static_cast<std::size_t>(n + 1), S(1));
  beta.front() = S(0);
  beta.back() = S(0);
  for (std::int64_t k = 1; k <= k_max; ++k) {
    v = P.apply(v);
    beta = P.apply(beta);
    S sup_err(0), sup_bound(0);
    bool pass = true;
    for (std::int64_t j = 0; j <= n; ++j) {
      const S err = abs_value(S(v[j] - lim[j]));
      const S bound = scale * kr_error_bound_tight(fsup, beta[j]);
      if (err > bound) pass = false;
      sup_err = std::max<S>(sup_err, err);
      sup_bound = std::max<S>(sup_bound, bound);
    }
    const S envelope = scale * S(2) * fsup * S(n) * ipow(S(1) - ratio<S>(1, n), k - 1) * ratio<S>(1, 4);
    if (sup_err > envelope) pass = false;
    rep.add_row({k, to_double(sup_err), to_double(sup_bound), to_double(envelope)}, pass);
  }
  return rep;
}

template RateReport kr_convergence_curve<double>(const GridFunction<double>&, std::int64_t, double);
template RateReport kr_convergence_curve<Rational>(const GridFunction<Rational>&, std::int64_t, double);

RateReport step_moment_check(std::int64_t n) {
  const TransitionMatrix<Rational> P(n);
  std::vector<Rational> eps_list;
  for (int e = 1; e <= 19; ++e) eps_list.push_back(make_rational(e, 20));

  RateReport rep;
  rep.experiment_name = "step_moments";
  rep.add_parameter("n", std::to_string(n));
  rep.add_parameter("tau_n", std::to_string(n));
  rep.columns = {"y", "mean_change", "variance", "tau_n_variance", "y(1-y)", "max_tail_over_bound"};
  for (std::int64_t i = 0; i <= n; ++i) {
    const Rational y = make_rational(i, n);
    Rational mean(0), var(0);
    for (std::int64_t j = 0; j <= n; ++j) {
      const Rational d = make_rational(j, n) - y;
      mean += P(i, j) * d;
      var += P(i, j) * d * d;
    }
    const Rational target = y * (1 - y);
    const Rational scaled = var * n;
    std::vector<Rational> w(P.row(i).begin(), P.row(i).end());
    double worst = 0.0;
    for (const auto& eps : eps_list)
      worst = std::max(worst, tail_from_weights(n, w, y, eps).get_d() / hoeffding_bound(n, eps.get_d()));
    const bool pass = mean == 0 && var == target / n && scaled == target && worst <= 1.0;
    rep.add_row({y, mean, var, scaled, target, worst}, pass);
  }
  return rep;
}

}  // namespace wfb
