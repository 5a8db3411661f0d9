#include <doctest.h>

#include "wfb/wf_diffusion.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace wfb;

namespace {

// m_r(t) = E X_t^r solves m_r' = a_r (m_{r-1} - m_r), m_r(0) = x^r, with a_r = r(r-1)/2.
// Classical RK4 on the whole triangular system.
std::vector<double> moments_by_ode(int r_max, double t, double x, int steps = 4000) {
  std::vector<double> m(r_max + 1);
  for (int r = 0; r <= r_max; ++r) m[r] = std::pow(x, r);
  const double h = t / steps;
  auto rhs = [&](const std::vector<double>& v) {
    std::vector<double> d(v.size(), 0.0);
    for (int r = 2; r <= r_max; ++r) d[r] = 0.5 * r * (r - 1) * (v[r - 1] - v[r]);
    return d;
  };
  for (int s = 0; s < steps; ++s) {
    const auto k1 = rhs(m);
    std::vector<double> tmp(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) tmp[i] = m[i] + 0.5 * h * k1[i];
    const auto k2 = rhs(tmp);
    for (std::size_t i = 0; i < m.size(); ++i) tmp[i] = m[i] + 0.5 * h * k2[i];
    const auto k3 = rhs(tmp);
    for (std::size_t i = 0; i < m.size(); ++i) tmp[i] = m[i] + h * k3[i];
    const auto k4 = rhs(tmp);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return m;
}

double max_coeff_diff(const Polynomial<double>& a, const Polynomial<double>& b) {
  double m = 0;
  const auto d = std::max(a.degree(), b.degree());
  for (std::size_t i = 0; i <= d; ++i) m = std::max(m, std::abs(a.coeff(i) - b.coeff(i)));
  return m;
}

}  // namespace

TEST_CASE("alpha") {
  CHECK(alpha(0) == 0);
  CHECK(alpha(1) == 0);
  CHECK(alpha(2) == 1);
  CHECK(alpha(5) == 10);
}

TEST_CASE("small expansions") {
  const auto e1 = moment_expansion(1);
  REQUIRE(e1.terms.size() == 1);
  CHECK(e1.terms[0].coefficient == 1);
  CHECK(e1.terms[0].rate == 0);
  CHECK(moment_expansion_kr(1) == e1);

  // E X_t^2 = (1 - e^-t) x + e^-t x^2
  const auto e2 = moment_expansion(2);
  for (const auto& term : e2.terms) {
    if (term.i == 1 && term.j == 1) CHECK(term.coefficient == 1);
    if (term.i == 1 && term.j == 2) CHECK(term.coefficient == -1);
    if (term.i == 2 && term.j == 2) CHECK(term.coefficient == 1);
  }
  const auto k2 = moment_expansion_kr(2);
  for (const auto& term : k2.terms)
    if (term.i == 1 && term.j == 2) CHECK(term.coefficient == -1);

  for (double t : {0.0, 0.3, 1.0, 4.0})
    for (double x : {0.0, 0.2, 0.5, 1.0})
      CHECK(e2.eval(t, x) == doctest::Approx((1 - std::exp(-t)) * x + std::exp(-t) * x * x).epsilon(1e-14));

  CHECK_THROWS_AS(moment_expansion(0), std::domain_error);
  CHECK_THROWS_AS(moment_expansion_kr(kMaxMomentOrder + 1), std::domain_error);
}

TEST_CASE("both coefficient formulas agree") {
  for (std::int64_t r = 1; r <= 10; ++r) CHECK(moment_expansion(r) == moment_expansion_kr(r));
  CHECK(moment_expansion(23) == moment_expansion_kr(23));

  const auto rep = coefficient_identity_check(10);
  CHECK(rep.triples == 220);
  CHECK(rep.failures.empty());
  for (const auto& row : rep.rows) {
    if (row.i == row.j && row.j == row.r) {
      CHECK(row.lhs == 1);
      CHECK(row.rhs == 1);
    }
    if (row.i == 1 && row.j == 1 && row.r == 2) {
      CHECK(row.lhs == 1);
      CHECK(row.rhs == 1);
    }
  }
}

TEST_CASE("expansion limits") {
  for (std::int64_t r = 1; r <= 12; ++r) {
    const auto e = moment_expansion(r);
    for (std::int64_t i = 1; i <= r; ++i) {
      CHECK(e.b_at_zero(i) == (i == r ? 1 : 0));
      CHECK(e.b_at_infinity(i) == (i == 1 ? 1 : 0));
    }
  }
}

TEST_CASE("moments match an independent ODE integration") {
  for (double t : {0.1, 1.0, 3.0}) {
    for (double x : {0.1, 0.45, 0.8}) {
      const auto m = moments_by_ode(8, t, x);
      for (int r = 1; r <= 8; ++r) CHECK(moment_eval(r, t, x) == doctest::Approx(m[r]).epsilon(1e-10));
    }
  }
}

TEST_CASE("moment values") {
  CHECK(std::abs(moment_eval(3, 0.0, 0.7) - 0.343) <= 1e-14);
  for (double t : {0.0, 0.5, 7.0}) CHECK(moment_eval(1, t, 0.37) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(moment_eval(2, 1.0, 0.5) == doctest::Approx(0.5 - 0.25 * std::exp(-1.0)).epsilon(1e-14));
  CHECK(std::abs(moment_eval(2, 1.0, 0.5) - 0.408030) < 1e-6);
  for (int r = 1; r <= 10; ++r)
    for (int i = 0; i <= 10; ++i) CHECK(std::abs(moment_eval(r, 0.0, i / 10.0) - std::pow(i / 10.0, r)) <= 1e-14);
  CHECK_THROWS_AS(moment_eval(2, -1.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(moment_eval(2, 1.0, 1.5), std::domain_error);
}

TEST_CASE("moments lie in [0,1] and decrease in r") {
  for (double t : {0.1, 1.0, 10.0}) {
    for (int i = 0; i <= 20; ++i) {
      const double x = i / 20.0;
      double prev = 1.0;
      for (int r = 1; r <= 10; ++r) {
        const double m = moment_eval(r, t, x);
        CHECK(m >= -1e-14);
        CHECK(m <= 1 + 1e-14);
        CHECK(m <= prev + 1e-14);
        prev = m;
      }
    }
  }
}

TEST_CASE("long-time limit") {
  for (int r = 1; r <= 10; ++r) {
    for (int i = 0; i <= 10; ++i) {
      const double x = i / 10.0;
      CHECK(std::abs(moment_eval(r, 50.0, x) - x) <= 1e-12);
      CHECK(std::abs(moment_eval(r, 5.0, x) - x) <= 2.0 * r * r * std::exp(-5.0));
    }
  }
}

TEST_CASE("semigroup on polynomials") {
  CHECK(max_coeff_diff(semigroup_poly(Polynomial<double>{0, 1}, 2.0), Polynomial<double>{0, 1}) < 1e-15);
  CHECK(max_coeff_diff(semigroup_poly(Polynomial<double>{3.5}, 2.0), Polynomial<double>{3.5}) < 1e-15);
  const double t = 0.7;
  CHECK(max_coeff_diff(semigroup_poly(Polynomial<double>{0, 0, 1}, t),
                       Polynomial<double>{0, 1 - std::exp(-t), std::exp(-t)}) < 1e-14);

  for (std::size_t r = 1; r <= 6; ++r) {
    const auto p = Polynomial<double>::monomial(r);
    CHECK(semigroup_poly(p, 1.3).degree() <= r);
    for (auto [s, u] : {std::pair{0.2, 0.5}, std::pair{1.0, 1.0}, std::pair{0.05, 3.0}})
      CHECK(max_coeff_diff(semigroup_poly(semigroup_poly(p, s), u), semigroup_poly(p, s + u)) <= 1e-10);
  }
}

TEST_CASE("generator is the time derivative at zero") {
  for (std::size_t r = 0; r <= 8; ++r) {
    const auto p = Polynomial<double>::monomial(r);
    CHECK(max_coeff_diff(semigroup_time_derivative(p, 0.0), generator_apply(p)) <= 1e-10);
  }
  const Polynomial<double> p{0.3, -1, 2, 0, -0.5};
  CHECK(max_coeff_diff(semigroup_time_derivative(p, 0.0), generator_apply(p)) <= 1e-10);
  // finite-difference check away from zero
  const double t = 0.6, h = 1e-5;
  const auto fd = (semigroup_poly(p, t + h) - semigroup_poly(p, t - h)) * (1 / (2 * h));
  CHECK(max_coeff_diff(fd, semigroup_time_derivative(p, t)) <= 1e-7);
}

TEST_CASE("forward and backward equations") {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
  const auto lin = forward_equation_residual(Polynomial<double>{0, 1}, 0.4, grid);
  CHECK(lin.forward == 0.0);
  CHECK(lin.backward == 0.0);
  const auto sq = forward_equation_residual(Polynomial<double>{0, 0, 1}, 0.5, grid);
  CHECK(sq.forward <= 1e-10);
  CHECK(sq.backward <= 1e-10);
  const auto q4 = forward_equation_residual(Polynomial<double>::monomial(4), 1.0, grid);
  CHECK(q4.forward <= 1e-9);
  CHECK(q4.backward <= 1e-9);
}

TEST_CASE("Euler-Maruyama paths") {
  RandomStream rng(2, 0);
  const auto p0 = euler_maruyama(0.0, 1.0, 0.01, rng);
  CHECK(p0.values.size() == 101);
  for (double v : p0.values) CHECK(v == 0.0);

  for (int r = 0; r < 200; ++r) {
    RandomStream g(kDefaultSeed, static_cast<std::uint64_t>(r));
    const auto p = euler_maruyama(0.1, 2.0, 0.01, g);
    bool hit = false;
    double hit_value = -1;
    for (double v : p.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (hit) CHECK(v == hit_value);
      if (!hit && (v == 0.0 || v == 1.0)) {
        hit = true;
        hit_value = v;
      }
    }
    CHECK(p.absorbed == hit);
  }

  CHECK_THROWS_AS(euler_maruyama(0.5, 1.0, 0.0, rng), std::domain_error);
  CHECK_THROWS_AS(euler_maruyama(0.5, 0.1, 0.2, rng), std::domain_error);
  CHECK_THROWS_AS(euler_maruyama(1.5, 1.0, 0.1, rng), std::domain_error);
}

TEST_CASE("Euler-Maruyama ensemble") {
  const auto a = euler_maruyama_ensemble(0.5, 0.5, 1e-3, 20000, kDefaultSeed);
  const auto b = euler_maruyama_ensemble_serial(0.5, 0.5, 1e-3, 20000, kDefaultSeed);
  CHECK(a == b);
  const auto m1 = sample_moment(a, 1);
  CHECK(std::abs(m1.estimate - 0.5) <= 3 * m1.std_error);
  const auto m2 = sample_moment(a, 2);
  CHECK(std::abs(m2.estimate - moment_eval(2, 0.5, 0.5)) <= 3 * m2.std_error + 2e-3);
}

TEST_CASE("exponential functional") {
  CHECK(exp_functional_mc(0.0, 1.0, 0.4, 100, 0.01, 1).estimate == 1.0);
  CHECK(exp_functional_mc(2.0, 0.0, 0.4, 100, 0.01, 1).estimate == doctest::Approx(std::exp(-0.8)).epsilon(1e-15));
  CHECK(exp_functional_series(2.0, 0.0, 0.4) == doctest::Approx(std::exp(-0.8)).epsilon(1e-12));

  const double series = exp_functional_series(1.0, 1.0, 0.5);
  const auto mc = exp_functional_mc(1.0, 1.0, 0.5, 100000, 1e-3, kDefaultSeed);
  CHECK(std::abs(mc.estimate - series) <= 3 * mc.std_error + 1e-6);

  // the chain at k = [nt] approaches the diffusion value
  const double e100 = std::abs(exp_functional_chain(1.0, 1.0, 0.5, 100) - series);
  const double e400 = std::abs(exp_functional_chain(1.0, 1.0, 0.5, 400) - series);
  CHECK(e400 < e100);
  CHECK(e400 < 1e-3);
}
