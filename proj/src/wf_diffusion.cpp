#include "wfb/wf_diffusion.hpp"

#include "wfb/bernstein.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace wfb {

Rational alpha(std::int64_t j) {
  if (j < 0) throw std::domain_error("alpha: j must be >= 0");
  return make_rational(j * (j - 1), 2);
}

namespace {

void check_order(std::int64_t r) {
  if (r < 1 || r > kMaxMomentOrder) throw std::domain_error("moment order r must lie in [1, 64]");
}

// Expansions are immutable once built; keep one per order.
const MomentExpansion& cached_expansion(std::int64_t r) {
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<MomentExpansion>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[r];
  if (!slot) slot = std::make_unique<MomentExpansion>(moment_expansion(r));
  return *slot;
}

}  // namespace

double MomentExpansion::b(std::int64_t i, double t) const {
  long double acc = 0.0L;
  for (const auto& term : terms)
    if (term.i == i) acc += static_cast<long double>(term.coefficient.get_d()) * std::exp(-term.rate.get_d() * t);
  return static_cast<double>(acc);
}

Rational MomentExpansion::b_at_zero(std::int64_t i) const {
  Rational acc(0);
  for (const auto& term : terms)
    if (term.i == i) acc += term.coefficient;
  return acc;
}

Rational MomentExpansion::b_at_infinity(std::int64_t i) const {
  Rational acc(0);
  for (const auto& term : terms)
    if (term.i == i && term.rate == 0) acc += term.coefficient;
  return acc;
}

Polynomial<double> MomentExpansion::polynomial_at(double t) const {
  std::vector<long double> c(static_cast<std::size_t>(r + 1), 0.0L);
  for (const auto& term : terms)
    c[term.i] += static_cast<long double>(term.coefficient.get_d()) * std::exp(-term.rate.get_d() * t);
  return Polynomial<double>(std::vector<double>(c.begin(), c.end()));
}

Polynomial<double> MomentExpansion::time_derivative_at(double t) const {
  std::vector<long double> c(static_cast<std::size_t>(r + 1), 0.0L);
  for (const auto& term : terms) {
    const double rate = term.rate.get_d();
    c[term.i] -= static_cast<long double>(term.coefficient.get_d()) * rate * std::exp(-rate * t);
  }
  return Polynomial<double>(std::vector<double>(c.begin(), c.end()));
}

double MomentExpansion::eval(double t, double x) const { return polynomial_at(t)(x); }

double MomentExpansion::eval_time_derivative(double t, double x) const { return time_derivative_at(t)(x); }

MomentExpansion moment_expansion(std::int64_t r) {
  check_order(r);
  MomentExpansion m;
  m.r = r;
  for (std::int64_t i = 1; i <= r; ++i) {
    Rational a(1);
    for (std::int64_t k = i + 1; k <= r; ++k) a *= alpha(k);
    for (std::int64_t j = i; j <= r; ++j) {
      const Rational aj = alpha(j);
      Rational b(1);
      for (std::int64_t k = i; k <= r; ++k)
        if (k != j) b *= alpha(k) - aj;
      m.terms.push_back({i, j, Rational(a / b), aj});
    }
  }
  return m;
}

namespace {

Rational kr_coefficient(std::int64_t i, std::int64_t j, std::int64_t r) {
  const BigInt cri = binomial(r, i);
  const BigInt c = binomial(r - i, j - i);
  Rational v = make_rational(BigInt(i) * cri * cri * c * c,
                             BigInt(r) * binomial(2 * j - 2, j - i) * binomial(j + r - 1, r - j));
  if ((i + j) % 2 != 0) v = -v;
  return v;
}

}  // namespace

MomentExpansion moment_expansion_kr(std::int64_t r) {
  check_order(r);
  MomentExpansion m;
  m.r = r;
  for (std::int64_t i = 1; i <= r; ++i)
    for (std::int64_t j = i; j <= r; ++j)
      m.terms.push_back({i, j, kr_coefficient(i, j, r), make_rational(j * (j - 1), 2)});
  return m;
}

IdentityCheckReport coefficient_identity_check(std::int64_t r_max) {
  if (r_max < 1) throw std::domain_error("r_max must be >= 1");
  IdentityCheckReport rep;
  for (std::int64_t r = 1; r <= r_max; ++r) {
    for (std::int64_t i = 1; i <= r; ++i) {
      for (std::int64_t j = i; j <= r; ++j) {
        const BigInt cj2 = binomial(j, 2);
        BigInt num(1), den(1);
        for (std::int64_t k = i + 1; k <= r; ++k) num *= binomial(k, 2);
        for (std::int64_t k = i; k <= r; ++k)
          if (k != j) den *= binomial(k, 2) - cj2;
        IdentityRow row{i, j, r, make_rational(num, den), kr_coefficient(i, j, r), false};
        row.pass = row.lhs == row.rhs;
        ++rep.triples;
        if (!row.pass) rep.failures.push_back(row);
        rep.rows.push_back(std::move(row));
      }
    }
  }
  return rep;
}

double moment_eval(std::int64_t r, double t, double x) {
  check_order(r);
  if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
  require_unit_interval(x, "x");
  return cached_expansion(r).eval(t, x);
}

Polynomial<double> semigroup_poly(const Polynomial<double>& p, double t) {
  if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
  Polynomial<double> out{p.coeff(0)};
  for (std::size_t r = 1; r <= p.degree(); ++r) {
    if (p.coeff(r) == 0.0) continue;
    out += cached_expansion(static_cast<std::int64_t>(r)).polynomial_at(t) * p.coeff(r);
  }
  return out;
}

Polynomial<double> semigroup_time_derivative(const Polynomial<double>& p, double t) {
  if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
  Polynomial<double> out;
  for (std::size_t r = 1; r <= p.degree(); ++r) {
    if (p.coeff(r) == 0.0) continue;
    out += cached_expansion(static_cast<std::int64_t>(r)).time_derivative_at(t) * p.coeff(r);
  }
  return out;
}

EquationResiduals forward_equation_residual(const Polynomial<double>& p, double t,
                                            std::span<const double> x_grid) {
  const auto dt_p = semigroup_time_derivative(p, t);
  const auto forward = semigroup_poly(generator_apply(p), t);
  const auto backward = generator_apply(semigroup_poly(p, t));
  EquationResiduals res;
  for (double x : x_grid) {
    const double lhs = dt_p(x);
    res.forward = std::max(res.forward, std::fabs(lhs - forward(x)));
    res.backward = std::max(res.backward, std::fabs(lhs - backward(x)));
  }
  return res;
}

namespace {

std::int64_t em_steps(double x0, double t_end, double dt) {
  require_unit_interval(x0, "x0");
  if (!(dt > 0.0)) throw std::domain_error("dt must be > 0");
  if (!(dt <= t_end)) throw std::domain_error("dt must not exceed t_end");
  return std::llround(t_end / dt);
}

inline double em_step(double x, double sqrt_dt, double z) {
  const double next = x + std::sqrt(std::max(x * (1.0 - x), 0.0)) * sqrt_dt * z;
  return std::clamp(next, 0.0, 1.0);
}

}  // namespace

DiffusionPath euler_maruyama(double x0, double t_end, double dt, RandomStream& rng) {
  const auto steps = em_steps(x0, t_end, dt);
  DiffusionPath path{x0, dt, {x0}, false};
  path.values.reserve(static_cast<std::size_t>(steps + 1));
  const double sqrt_dt = std::sqrt(dt);
  double x = x0;
  for (std::int64_t s = 0; s < steps; ++s) {
    if (x == 0.0 || x == 1.0) {
      path.absorbed = true;
    } else {
      x = em_step(x, sqrt_dt, rng.normal());
    }
    path.values.push_back(x);
  }
  path.absorbed = x == 0.0 || x == 1.0;
  return path;
}

double euler_maruyama_terminal(double x0, std::int64_t steps, double dt, RandomStream& rng) {
  const double sqrt_dt = std::sqrt(dt);
  double x = x0;
  for (std::int64_t s = 0; s < steps; ++s) {
    if (x == 0.0 || x == 1.0) break;
    x = em_step(x, sqrt_dt, rng.normal());
  }
  return x;
}

std::vector<double> euler_maruyama_ensemble(double x0, double t_end, double dt, std::int64_t replicas,
                                            std::uint64_t seed) {
  const auto steps = em_steps(x0, t_end, dt);
  if (replicas < 1) throw std::domain_error("replicas must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(replicas));
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < replicas; ++r) {
    RandomStream rng(seed, static_cast<std::uint64_t>(r));
    out[r] = euler_maruyama_terminal(x0, steps, dt, rng);
  }
  return out;
}

std::vector<double> euler_maruyama_ensemble_serial(double x0, double t_end, double dt,
                                                   std::int64_t replicas, std::uint64_t seed) {
  const auto steps = em_steps(x0, t_end, dt);
  if (replicas < 1) throw std::domain_error("replicas must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(replicas));
  for (std::int64_t r = 0; r < replicas; ++r) {
    RandomStream rng(seed, static_cast<std::uint64_t>(r));
    out[r] = euler_maruyama_terminal(x0, steps, dt, rng);
  }
  return out;
}

McEstimate sample_moment(const std::vector<double>& terminal, int power) {
  std::vector<double> v(terminal.size());
  std::transform(terminal.begin(), terminal.end(), v.begin(),
                 [power](double x) { return std::pow(x, power); });
  return summarize(v);
}

McEstimate exp_functional_mc(double theta, double t, double x, std::int64_t replicas, double dt,
                             std::uint64_t seed) {
  require_unit_interval(x, "x");
  if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
  if (replicas < 1) throw std::domain_error("replicas must be >= 1");
  if (theta == 0.0) return {1.0, 0.0, replicas};
  if (t == 0.0) return {std::exp(-theta * x), 0.0, replicas};
  auto terminal = euler_maruyama_ensemble(x, t, dt, replicas, seed);
  for (auto& v : terminal) v = std::exp(-theta * v);
  return summarize(terminal);
}

double exp_functional_series(double theta, double t, double x, std::int64_t r_max) {
  if (r_max < 0 || r_max > kMaxMomentOrder) throw std::domain_error("r_max must lie in [0, 64]");
  long double acc = 1.0L;
  long double factor = 1.0L;  // (-theta)^r / r!
  for (std::int64_t r = 1; r <= r_max; ++r) {
    factor *= -static_cast<long double>(theta) / static_cast<long double>(r);
    acc += factor * moment_eval(r, t, x);
  }
  return static_cast<double>(acc);
}

double exp_functional_chain(double theta, double t, double x, std::int64_t n) {
  require_unit_interval(x, "x");
  if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
  const auto k = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * t));
  if (k == 0) return std::exp(-theta * x);
  const auto f = sample_grid<double>(n, [theta](double y) { return std::exp(-theta * y); });
  return iterate_eval(f, k, x);
}

}  // namespace wfb
