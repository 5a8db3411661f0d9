#include <doctest.h>

#include "wfb/rates.hpp"
#include "wfb/wf_diffusion.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace wfb;

namespace {

Rational q(long a, long b = 1) { return make_rational(std::int64_t{a}, std::int64_t{b}); }

double cell_d(const RateReport& rep, std::size_t row, std::size_t col) {
  return std::get<double>(rep.rows[row].cells[col]);
}

// P(|S/n - y| > eps) by summing the pmf directly, binomials from the multiplicative formula
Rational tail_oracle(int n, const Rational& y, const Rational& eps) {
  Rational acc = 0;
  BigInt c = 1;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) c = c * (n - j + 1) / j;
    if (abs_value(q(j, n) - y) > eps) {
      Rational term(c);
      for (int a = 0; a < j; ++a) term *= y;
      for (int a = 0; a < n - j; ++a) term *= 1 - y;
      acc += term;
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("Voronovskaya residual") {
  for (std::int64_t n = 1; n <= 100; ++n) CHECK(voronovskaya_residual(Polynomial<Rational>{0, 0, 1}, n) == 0);
  CHECK(voronovskaya_residual(Polynomial<Rational>{q(2, 3), -4}, 17) == 0);

  const auto x4 = Polynomial<Rational>::monomial(4);
  const double r100 = voronovskaya_residual(x4, 100).get_d();
  CHECK(r100 <= 24 / (16 * std::pow(3.0, 0.25)) / 10);

  // oracle: n (B_n p - p) - L p with B_n p from the weighted sum, on the same grid
  for (std::int64_t n : {3, 8}) {
    const auto lp = generator_apply(x4);
    const auto f = sample_polynomial(n, x4);
    Rational worst = 0;
    for (int i = 0; i <= 200; ++i) {
      const Rational x = q(i, 200);
      const Rational v = abs_value(Rational(n * (apply_bernstein(f, x) - x4(x)) - lp(x)));
      if (v > worst) worst = v;
    }
    CHECK(voronovskaya_residual(x4, n) == worst);
  }
}

TEST_CASE("Voronovskaya bound") {
  CHECK(voronovskaya_bound(0.0, 7) == 0.0);
  CHECK(voronovskaya_bound(24.0, 100) == doctest::Approx(0.11398).epsilon(1e-4));
  double prev = 1e300;
  for (std::int64_t n = 1; n <= 300; ++n) {
    const double b = voronovskaya_bound(24.0, n);
    CHECK(b <= prev);
    prev = b;
  }
}

TEST_CASE("Voronovskaya residual stays within the bound") {
  for (std::size_t r : {3, 4, 5}) {
    const auto p = Polynomial<Rational>::monomial(r);
    const double lip = second_derivative_lipschitz(to_double(p));
    for (std::int64_t n : {4, 16, 64, 256}) CHECK(voronovskaya_residual(p, n).get_d() <= voronovskaya_bound(lip, n));
  }
  CHECK(second_derivative_lipschitz(Polynomial<double>::monomial(4)) == doctest::Approx(24.0));
  CHECK(second_derivative_lipschitz(Polynomial<double>::monomial(3)) == doctest::Approx(6.0));
  CHECK(second_derivative_lipschitz(Polynomial<double>::monomial(5)) == doctest::Approx(60.0));
  // p''' = 6 - 24x changes sign inside; the sup of |p'''| is 18 at x = 1
  CHECK(second_derivative_lipschitz(Polynomial<double>{0, 0, 0, 1, -1}) == doctest::Approx(18.0));
}

TEST_CASE("sup on the unit interval") {
  CHECK(sup_on_unit_interval(Polynomial<double>{0, 1, -1}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(sup_on_unit_interval(Polynomial<double>{-2, 1}) == doctest::Approx(2.0));
  // 0.25 + (x-1/3)(x-2/3) has its minimum 0.25 - 1/36 at 1/2
  CHECK(sup_on_unit_interval(Polynomial<double>{-0.25, 0, 1, 0}) == doctest::Approx(0.75));
}

TEST_CASE("saturation for x^3") {
  const auto p = Polynomial<Rational>::monomial(3);
  double prev_gap = 1e300;
  for (std::int64_t n : {8, 32, 128, 512}) {
    const double gap = std::abs(saturation_ratio(p, n) - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 0.02);
}

TEST_CASE("fourth moment") {
  CHECK(binomial_fourth_moment<Rational>(9, 0) == 0);
  // n = 2: S in {0,1,2} with mass 1/4, 1/2, 1/4, so E(S-1)^4 = 1/2
  CHECK(binomial_fourth_moment<Rational>(2, q(1, 2)) == q(1, 2));
  for (std::int64_t n = 2; n <= 30; ++n) {
    // the formula gives n(3n-2)/16 at x = 1/2, below 3n^2/16
    const Rational mid = binomial_fourth_moment<Rational>(n, q(1, 2));
    CHECK(mid == make_rational(n * (3 * n - 2), std::int64_t{16}));
    CHECK(mid <= make_rational(3 * n * n, std::int64_t{16}));
    for (int i = 0; i <= 10; ++i) {
      const Rational x = q(i, 10);
      CHECK(binomial_fourth_moment(n, x) == binomial_fourth_moment_direct(n, x));
      CHECK(binomial_fourth_moment(n, x) <= mid);
    }
  }
  CHECK(binomial_fourth_moment<double>(10, 0.3) ==
        doctest::Approx(binomial_fourth_moment_direct<double>(10, 0.3)).epsilon(1e-10));
}

TEST_CASE("Kac bound") {
  CHECK(kac_bound(1.0, 1.0, 4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(kac_bound(1.0, 1.0, 400) == doctest::Approx(kac_bound(1.0, 1.0, 100) / 2).epsilon(1e-15));
  const auto lip = kac_mc_estimate([](double y) { return std::abs(y - 0.5); }, 100, 0.5, 100000, kDefaultSeed);
  CHECK(lip.estimate <= kac_bound(1.0, 1.0, 100));
  // E|S/n - 1/2| for n = 100 is about sqrt(2/pi) * 0.05
  CHECK(lip.estimate == doctest::Approx(std::sqrt(2 / M_PI) * 0.05).epsilon(0.03));

  const std::vector<std::int64_t> ns{16, 64, 256};
  const auto rep = kac_experiment([](double y) { return std::sqrt(y); }, 1.0, 0.5, ns, 0.5, 20000, kDefaultSeed);
  CHECK(rep.rows.size() == 3);
  CHECK(rep.all_pass());
}

TEST_CASE("Hoeffding") {
  CHECK(hoeffding_bound(20, 0.25) == doctest::Approx(2 * std::exp(-0.625)).epsilon(1e-15));
  // P(Bin(20,1/2) >= 16) + P(<= 4), both tails
  Rational one_side = 0;
  for (int j = 16; j <= 20; ++j) one_side += Rational(binomial(20, j));
  one_side /= Rational(BigInt(1) << 20);
  CHECK(binomial_tail_exact(20, q(1, 2), q(1, 4)) == 2 * one_side);
  CHECK(binomial_tail_exact(20, q(1, 2), q(1, 4)) == tail_oracle(20, q(1, 2), q(1, 4)));
  CHECK(binomial_tail_exact(13, q(2, 7), 1) == 0);

  for (int n : {1, 7, 23}) {
    for (int i = 0; i <= 8; ++i)
      for (int e = 1; e <= 9; e += 2)
        CHECK(binomial_tail_exact(n, q(i, 8), q(e, 10)) == tail_oracle(n, q(i, 8), q(e, 10)));
  }

  std::vector<Rational> ys;
  for (int i = 0; i <= 20; ++i) ys.push_back(q(i, 20));
  CHECK(hoeffding_check(50, q(3, 10), ys).all_pass());
  CHECK(hoeffding_check(50, q(3, 10), ys).rows.size() == 21);
  CHECK_THROWS_AS(hoeffding_check(5, Rational(0), ys), std::domain_error);
}

TEST_CASE("joint limit") {
  const std::vector<std::int64_t> ns{10, 40, 100};
  const auto r1 = joint_limit_experiment(1, 1.3, ns);
  for (std::size_t i = 0; i < r1.rows.size(); ++i) CHECK(cell_d(r1, i, 2) <= 1e-13);

  const std::vector<std::int64_t> one{100};
  const auto r2 = joint_limit_experiment(2, 1.0, one);
  const double expected = std::abs(std::pow(0.99, 100) - std::exp(-1.0)) * 0.25;
  CHECK(cell_d(r2, 0, 2) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(cell_d(r2, 0, 2) == doctest::Approx(4.6e-4).epsilon(0.01));

  const std::vector<std::int64_t> doubling{400, 50, 200, 100};
  const auto d = joint_limit_experiment(2, 1.0, doubling);
  CHECK(std::get<std::int64_t>(d.rows.front().cells[0]) == 50);
  for (std::size_t i = 1; i < d.rows.size(); ++i) {
    const double ratio = cell_d(d, i, 2) / cell_d(d, i - 1, 2);
    CHECK(ratio >= 0.4);
    CHECK(ratio <= 0.6);
  }
}

TEST_CASE("joint limit errors do not increase in n") {
  const std::vector<std::int64_t> ns{50, 100, 200, 400};
  for (std::int64_t r = 1; r <= 4; ++r)
    for (double t : {0.5, 1.0, 2.0}) CHECK(joint_limit_experiment(r, t, ns).all_pass());
}

TEST_CASE("iterate convergence curve") {
  const auto lin = sample_grid<Rational>(6, [](const Rational& x) { return Rational(1 - 2 * x); });
  const auto rl = kr_convergence_curve(lin, 20);
  for (const auto& row : rl.rows) CHECK(std::get<double>(row.cells[1]) == 0.0);

  const auto sq = sample_grid<Rational>(5, [](const Rational& x) { return Rational(x * x); });
  const auto rep = kr_convergence_curve(sq, 100);
  CHECK(rep.all_pass());
  for (std::size_t k = 1; k <= 100; ++k) {
    // sup over the grid of (4/5)^k (x - x^2) is attained at x = 2/5, 3/5
    const double exact = std::pow(0.8, static_cast<double>(k)) * 0.24;
    CHECK(cell_d(rep, k - 1, 1) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(cell_d(rep, k - 1, 1) <= std::pow(0.8, static_cast<double>(k)) / 4);
  }

  const auto sqd = sample_grid<double>(5, [](double x) { return x * x; });
  CHECK(kr_convergence_curve(sqd, 50).all_pass());
  CHECK_FALSE(kr_convergence_curve(sq, 10, 1e-3).all_pass());
}

TEST_CASE("step moments") {
  const auto rep = step_moment_check(10);
  CHECK(rep.all_pass());
  CHECK(rep.rows.size() == 11);
  CHECK(std::get<Rational>(rep.rows[0].cells[1]) == 0);
  CHECK(std::get<Rational>(rep.rows[0].cells[2]) == 0);
  CHECK(std::get<Rational>(rep.rows[3].cells[2]) == q(21, 1000));
  for (std::int64_t n = 2; n <= 20; ++n) CHECK(step_moment_check(n).all_pass());
}
