#pragma once

// Convergence-rate experiments. Each experiment returns a RateReport whose
// rows pair an observed quantity with the bound it is checked against.

#include "wfb/bernstein.hpp"
#include "wfb/numerics.hpp"
#include "wfb/report.hpp"
#include "wfb/wf_chain.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wfb {

inline constexpr std::int64_t kSupGridPoints = 201;

/// i / (points - 1), i = 0..points-1.
template <class S>
std::vector<S> uniform_grid(std::int64_t points) {
  if (points < 2) throw std::domain_error("uniform grid needs at least 2 points");
  std::vector<S> g;
  g.reserve(static_cast<std::size_t>(points));
  for (std::int64_t i = 0; i < points; ++i) g.push_back(ratio<S>(i, points - 1));
  return g;
}

/// max over the grid of |n (B_n p - p) - L p|, exact.
Rational voronovskaya_residual(const Polynomial<Rational>& p, std::int64_t n,
                               std::int64_t x_grid_size = kSupGridPoints);

/// Lip(f'') / (16 3^(1/4)) n^(-1/2)
double voronovskaya_bound(double lip_fpp, std::int64_t n);

/// Lip(p'') on [0,1] = max |p'''|, located through the critical points of p'''.
double second_derivative_lipschitz(const Polynomial<double>& p);

/// max over [0,1] of |q|: endpoints plus bracketed roots of q'.
double sup_on_unit_interval(const Polynomial<double>& q);

/// n ||B_n p - p|| / ||L p|| over the grid; tends to 1 (saturation).
double saturation_ratio(const Polynomial<Rational>& p, std::int64_t n,
                        std::int64_t x_grid_size = kSupGridPoints);

RateReport voronovskaya_experiment(const Polynomial<Rational>& p, std::span<const std::int64_t> n_list,
                                   std::int64_t x_grid_size = kSupGridPoints);

/// E (S_n - n x)^4 = n x (1-x) (1 - 6x + 6x^2 + 3nx - 3nx^2)
template <class S>
S binomial_fourth_moment(std::int64_t n, const S& x) {
  require_unit_interval(x, "x");
  const S nn(n);
  return nn * x * (S(1) - x) * (S(1) - S(6) * x + S(6) * x * x + S(3) * nn * x - S(3) * nn * x * x);
}

/// Same quantity by summing over the binomial law.
template <class S>
S binomial_fourth_moment_direct(std::int64_t n, const S& x) {
  const auto w = bernstein_weights(n, x);
  S acc(0);
  for (std::int64_t j = 0; j <= n; ++j) {
    const S d = S(j) - S(n) * x;
    acc += w[j] * d * d * d * d;
  }
  return acc;
}

/// C 2^(-alpha) n^(-alpha/2)
double kac_bound(double C, double alpha, std::int64_t n);

/// E |f(S_n / n) - f(x)| by Monte Carlo; replica r uses RandomStream(seed, r).
McEstimate kac_mc_estimate(const std::function<double(double)>& f, std::int64_t n, double x,
                           std::int64_t replicas, std::uint64_t seed);

RateReport kac_experiment(const std::function<double(double)>& f, double C, double alpha,
                          std::span<const std::int64_t> n_list, double x, std::int64_t replicas,
                          std::uint64_t seed);

/// 2 exp(-eps^2 n / 2)
double hoeffding_bound(std::int64_t n, double eps);

/// P(|S_n / n - y| > eps) exactly.
Rational binomial_tail_exact(std::int64_t n, const Rational& y, const Rational& eps);

/// One row per (eps, y): exact tail against 2 exp(-eps^2 n / 2).
RateReport hoeffding_check(std::int64_t n, std::span<const Rational> eps_list, std::span<const Rational> y_grid);
RateReport hoeffding_check(std::int64_t n, const Rational& eps, std::span<const Rational> y_grid);

/// sup over a 201-point grid of |B_n^[nt] x^r - E X_t(x)^r| for each n (sorted).
/// Rows pass while the error is nonincreasing in n (1e-12 slack).
RateReport joint_limit_experiment(std::int64_t r, double t, std::span<const std::int64_t> n_list);

/// For k = 1..k_max: sup-error of B_n^k f against B_1 f on the grid, the
/// pointwise bound 2||f|| beta(k,x), and the envelope 2||f|| n (1-1/n)^(k-1) / 4.
/// A row passes when both bounds dominate (pointwise for the beta bound).
/// With Rational the dominance test is exact.
template <class S>
RateReport kr_convergence_curve(const GridFunction<S>& f, std::int64_t k_max, double bound_scale = 1.0);

/// Exact conditional mean change and variance of one chain step at every grid
/// state, the rescaled variance n * var against y (1 - y), and the worst
/// tail-to-Hoeffding ratio over eps in {0.05, ..., 0.95}.
RateReport step_moment_check(std::int64_t n);

}  // namespace wfb
