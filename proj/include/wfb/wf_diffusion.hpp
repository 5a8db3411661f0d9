#pragma once

// Wright-Fisher diffusion dX = sqrt(X(1-X)) dW on [0,1].
//
// Moments E X_t(x)^r are finite sums of exponentials with exact rational
// coefficients. They are built two independent ways (partial fractions of the
// Laplace-transform recursion, and the closed binomial form), which must agree
// exactly. The polynomial semigroup, its forward/backward equations and an
// Euler-Maruyama path simulator sit on top.

#include "wfb/numerics.hpp"
#include "wfb/random.hpp"
#include "wfb/wf_chain.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace wfb {

inline constexpr std::int64_t kMaxMomentOrder = 64;

/// j (j - 1) / 2
Rational alpha(std::int64_t j);

struct MomentTerm {
  std::int64_t i = 0;  // power of x
  std::int64_t j = 0;  // index of the decay rate
  Rational coefficient;
  Rational rate;  // alpha(j)

  friend bool operator==(const MomentTerm&, const MomentTerm&) = default;
};

/// E X_t(x)^r = sum over terms of coefficient * exp(-rate t) * x^i,
/// terms ordered by (i, j) with 1 <= i <= j <= r.
struct MomentExpansion {
  std::int64_t r = 1;
  std::vector<MomentTerm> terms;

  /// b_{i,r}(t)
  double b(std::int64_t i, double t) const;
  /// sum_j coefficient_{i,j}; the t = 0 value of b_{i,r}, exact.
  Rational b_at_zero(std::int64_t i) const;
  /// sum of coefficients with rate zero, for each i (the t -> infinity limit), exact.
  Rational b_at_infinity(std::int64_t i) const;

  double eval(double t, double x) const;
  /// d/dt E X_t(x)^r
  double eval_time_derivative(double t, double x) const;
  /// E X_t(x)^r as a polynomial in x.
  Polynomial<double> polynomial_at(double t) const;
  Polynomial<double> time_derivative_at(double t) const;

  friend bool operator==(const MomentExpansion&, const MomentExpansion&) = default;
};

/// Coefficients A_{i,r} / B_{i,j,r} with A = prod_{k=i+1}^r alpha_k and
/// B = prod_{k=i, k!=j}^r (alpha_k - alpha_j).
MomentExpansion moment_expansion(std::int64_t r);

/// Coefficients from the closed binomial form
///   (i/r) C(r,i)^2 (-1)^(i+j) C(r-i,j-i)^2 / (C(2j-2,j-i) C(j+r-1,r-j)).
MomentExpansion moment_expansion_kr(std::int64_t r);

struct IdentityRow {
  std::int64_t i = 0, j = 0, r = 0;
  Rational lhs;  // prod C(k,2) / prod [C(k,2) - C(j,2)]
  Rational rhs;  // closed binomial form
  bool pass = false;
};

struct IdentityCheckReport {
  std::int64_t triples = 0;
  std::vector<IdentityRow> rows;
  std::vector<IdentityRow> failures;
};

/// Exact comparison of both coefficient formulas for every 1 <= i <= j <= r <= r_max.
IdentityCheckReport coefficient_identity_check(std::int64_t r_max);

/// E X_t(x)^r.
double moment_eval(std::int64_t r, double t, double x);

/// P_t p = E p(X_t(x)) as a polynomial; degree does not increase.
Polynomial<double> semigroup_poly(const Polynomial<double>& p, double t);
/// d/dt P_t p, from the analytic derivative of the exponentials.
Polynomial<double> semigroup_time_derivative(const Polynomial<double>& p, double t);

struct EquationResiduals {
  double forward = 0.0;   // max |d/dt P_t p - P_t(L p)|
  double backward = 0.0;  // max |d/dt P_t p - L(P_t p)|
};

EquationResiduals forward_equation_residual(const Polynomial<double>& p, double t,
                                            std::span<const double> x_grid);

struct DiffusionPath {
  double x0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;
  bool absorbed = false;
};

/// X_{k+1} = clamp(X_k + sqrt(max(X_k (1 - X_k), 0)) sqrt(dt) Z_k, 0, 1),
/// sticking at 0 or 1 once hit. round(t_end / dt) steps.
DiffusionPath euler_maruyama(double x0, double t_end, double dt, RandomStream& rng);

/// X_{t_end} of one Euler-Maruyama path without storing the path.
double euler_maruyama_terminal(double x0, std::int64_t steps, double dt, RandomStream& rng);

/// Terminal values of `replicas` paths; path r uses RandomStream(seed, r).
std::vector<double> euler_maruyama_ensemble(double x0, double t_end, double dt, std::int64_t replicas,
                                            std::uint64_t seed);
std::vector<double> euler_maruyama_ensemble_serial(double x0, double t_end, double dt,
                                                   std::int64_t replicas, std::uint64_t seed);

/// Sample estimates of E X^power over the terminal values.
McEstimate sample_moment(const std::vector<double>& terminal, int power);

/// E exp(-theta X_t(x)) by Monte Carlo over Euler-Maruyama paths.
McEstimate exp_functional_mc(double theta, double t, double x, std::int64_t replicas, double dt,
                             std::uint64_t seed);

/// sum_{r=0}^{r_max} (-theta)^r E X_t(x)^r / r!
double exp_functional_series(double theta, double t, double x, std::int64_t r_max = 20);

/// B_n^{[nt]} applied to exp(-theta y), evaluated at x.
double exp_functional_chain(double theta, double t, double x, std::int64_t n);

}  // namespace wfb
