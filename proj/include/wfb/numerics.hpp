#pragma once

// Exact rationals, dense polynomials and Bernstein-to-monomial conversion.
//
// Everything here is templated on the scalar type. Two scalars are used in
// practice: `double` for experiments and `Rational` (GMP) for identity checks.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace wfb {

using BigInt = mpz_class;
using Rational = mpq_class;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

/// num/den in lowest terms. Throws std::domain_error when den == 0.
Rational make_rational(const BigInt& num, const BigInt& den);
Rational make_rational(std::int64_t num, std::int64_t den);

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// C(n, j); zero outside 0 <= j <= n.
BigInt binomial(std::int64_t n, std::int64_t j);

template <class S>
S binomial_as(std::int64_t n, std::int64_t j) {
  if constexpr (is_exact_v<S>) {
    return Rational(binomial(n, j));
  } else {
    return static_cast<S>(binomial(n, j).get_d());
  }
}

/// num/den converted into the scalar type, exactly when S is Rational.
template <class S>
S ratio(std::int64_t num, std::int64_t den) {
  if constexpr (is_exact_v<S>) {
    return make_rational(num, den);
  } else {
    return static_cast<S>(num) / static_cast<S>(den);
  }
}

template <class S>
double to_double(const S& v) {
  if constexpr (is_exact_v<S>) {
    return v.get_d();
  } else {
    return static_cast<double>(v);
  }
}

template <class S>
S from_double(double v) {
  if constexpr (is_exact_v<S>) {
    return Rational(v);  // exact binary value
  } else {
    return static_cast<S>(v);
  }
}

/// Value type of a scalar expression; GMP expression templates collapse to
/// the class they evaluate to.
template <class T>
struct scalar_of {
  using type = T;
};
template <class U>
struct scalar_of<__gmp_expr<mpq_t, U>> {
  using type = mpq_class;
};
template <class U>
struct scalar_of<__gmp_expr<mpz_t, U>> {
  using type = mpz_class;
};
template <class T>
using scalar_of_t = typename scalar_of<T>::type;

template <class E>
scalar_of_t<E> ipow(const E& b, std::int64_t e) {
  using S = scalar_of_t<E>;
  S base(b);
  S result(1);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

template <class E>
scalar_of_t<E> abs_value(const E& e) {
  using S = scalar_of_t<E>;
  S v(e);
  return v < S(0) ? S(-v) : v;
}

/// Dense polynomial in the monomial basis; coefficient i multiplies x^i.
/// The zero polynomial has no stored coefficients.
template <class S>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<S> coefficients) : coeffs_(std::move(coefficients)) { trim(); }
  Polynomial(std::initializer_list<S> coefficients) : coeffs_(coefficients) { trim(); }

  static Polynomial monomial(std::size_t r, S scale = S(1)) {
    std::vector<S> c(r + 1, S(0));
    c[r] = scale;
    return Polynomial(std::move(c));
  }

  bool is_zero() const { return coeffs_.empty(); }
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  std::span<const S> coefficients() const { return coeffs_; }

  /// Coefficient of x^i, zero past the degree.
  S coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : S(0); }

  S operator()(const S& x) const {
    S acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<S> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * S(static_cast<long>(i));
    return Polynomial(std::move(d));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), S(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), S(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const S& a) {
    for (auto& c : coeffs_) c *= a;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
  friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<S> c(a.coeffs_.size() + b.coeffs_.size() - 1, S(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == S(0)) coeffs_.pop_back();
  }

  std::vector<S> coeffs_;
};

template <class S>
Polynomial<S> second_derivative(const Polynomial<S>& p) {
  return p.derivative().derivative();
}

/// L p = 1/2 x (1 - x) p''. Maps degree r to degree at most r.
template <class S>
Polynomial<S> generator_apply(const Polynomial<S>& p) {
  const Polynomial<S> half_x_one_minus_x{S(0), ratio<S>(1, 2), ratio<S>(-1, 2)};
  return half_x_one_minus_x * second_derivative(p);
}

/// Monomial coefficients of sum_j g_j C(n,j) x^j (1-x)^(n-j), n = values.size() - 1.
///
/// Uses the forward-difference form  sum_k C(n,k) (Delta^k g)_0 x^k  instead of
/// expanding each (1-x)^(n-j); this is O(n^2) and never forms alternating sums
/// of binomial products.
template <class S>
Polynomial<S> bernstein_to_monomial(std::span<const S> values) {
  if (values.empty()) return {};
  const auto n = static_cast<std::int64_t>(values.size()) - 1;
  std::vector<S> diff(values.begin(), values.end());
  std::vector<S> out(values.size(), S(0));
  out[0] = diff[0];
  for (std::int64_t k = 1; k <= n; ++k) {
    for (std::int64_t j = 0; j + k <= n; ++j) diff[j] = diff[j + 1] - diff[j];
    out[k] = binomial_as<S>(n, k) * diff[0];
  }
  return Polynomial<S>(std::move(out));
}

/// B_n p for a polynomial p, exactly. Differences above deg p vanish, so only
/// deg p + 1 grid samples and differences are formed; cost is independent of n.
template <class S>
Polynomial<S> bernstein_of_polynomial(const Polynomial<S>& p, std::int64_t n) {
  const auto d = std::min<std::int64_t>(static_cast<std::int64_t>(p.degree()), n);
  std::vector<S> diff(d + 1);
  for (std::int64_t j = 0; j <= d; ++j) diff[j] = p(ratio<S>(j, n));
  std::vector<S> out(d + 1, S(0));
  out[0] = diff[0];
  for (std::int64_t k = 1; k <= d; ++k) {
    for (std::int64_t j = 0; j + k <= d; ++j) diff[j] = diff[j + 1] - diff[j];
    out[k] = binomial_as<S>(n, k) * diff[0];
  }
  return Polynomial<S>(std::move(out));
}

template <class S>
Polynomial<double> to_double(const Polynomial<S>& p) {
  std::vector<double> c;
  c.reserve(p.coefficients().size());
  for (const auto& v : p.coefficients()) c.push_back(to_double(v));
  return Polynomial<double>(std::move(c));
}

template <class S>
Polynomial<Rational> to_rational(const Polynomial<S>& p) {
  if constexpr (is_exact_v<S>) return p;
  std::vector<Rational> c;
  for (const auto& v : p.coefficients()) c.push_back(from_double<Rational>(to_double(v)));
  return Polynomial<Rational>(std::move(c));
}

}  // namespace wfb
