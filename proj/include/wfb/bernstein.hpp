#pragma once

// The Bernstein operator B_n on grid functions, the Wright-Fisher transition
// matrix that realizes it on {0, 1/n, ..., 1}, and its iterates.

#include "wfb/numerics.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfb {

/// Values f(j/n), j = 0..n.
template <class S>
struct GridFunction {
  std::int64_t n = 1;
  std::vector<S> values;

  GridFunction() : values(2, S(0)) {}
  GridFunction(std::int64_t n_, std::vector<S> v) : n(n_), values(std::move(v)) {
    if (n < 1) throw std::domain_error("GridFunction: n must be >= 1");
    if (static_cast<std::int64_t>(values.size()) != n + 1)
      throw std::domain_error("GridFunction: expected n+1 values");
  }

  const S& operator[](std::int64_t j) const { return values[static_cast<std::size_t>(j)]; }
  S& operator[](std::int64_t j) { return values[static_cast<std::size_t>(j)]; }
  std::span<const S> span() const { return values; }

  friend bool operator==(const GridFunction&, const GridFunction&) = default;
};

template <class S>
S grid_point(std::int64_t n, std::int64_t j) {
  return ratio<S>(j, n);
}

template <class S, class F>
GridFunction<S> sample_grid(std::int64_t n, F&& f) {
  if (n < 1) throw std::domain_error("sample_grid: n must be >= 1");
  std::vector<S> v;
  v.reserve(static_cast<std::size_t>(n + 1));
  for (std::int64_t j = 0; j <= n; ++j) v.push_back(f(grid_point<S>(n, j)));
  return GridFunction<S>(n, std::move(v));
}

template <class S>
GridFunction<S> sample_polynomial(std::int64_t n, const Polynomial<S>& p) {
  return sample_grid<S>(n, [&](const S& x) { return p(x); });
}

/// max_j |f_j|
template <class S>
S sup_norm(const GridFunction<S>& f) {
  S m(0);
  for (const auto& v : f.values) m = std::max<S>(m, abs_value(v));
  return m;
}

template <class S>
void require_unit_interval(const S& x, const char* what) {
  if (!(x >= S(0) && x <= S(1)))
    throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

namespace detail {
std::vector<double> bernstein_weights_float(std::int64_t n, double x);
}

/// Binomial(n, x) probabilities C(n,j) x^j (1-x)^(n-j), j = 0..n.
template <class S>
std::vector<S> bernstein_weights(std::int64_t n, const S& x) {
  if (n < 0) throw std::domain_error("bernstein_weights: n must be >= 0");
  require_unit_interval(x, "x");
  if constexpr (is_exact_v<S>) {
    std::vector<S> w(static_cast<std::size_t>(n + 1));
    const S y = S(1) - x;
    for (std::int64_t j = 0; j <= n; ++j) w[j] = binomial_as<S>(n, j) * ipow(x, j) * ipow(y, n - j);
    return w;
  } else {
    auto w = detail::bernstein_weights_float(n, static_cast<double>(x));
    return std::vector<S>(w.begin(), w.end());
  }
}

template <class S>
S dot(std::span<const S> a, std::span<const S> b) {
  S acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// B_n f(x) = E f(S_n / n), S_n ~ Binomial(n, x).
template <class S>
S apply_bernstein(const GridFunction<S>& f, const S& x) {
  const auto w = bernstein_weights(f.n, x);
  return dot<S>(w, f.span());
}

/// Row-stochastic Wright-Fisher kernel p(i/n, j/n) = C(n,j) (i/n)^j (1-i/n)^(n-j).
/// Immutable after construction.
template <class S>
class TransitionMatrix {
 public:
  explicit TransitionMatrix(std::int64_t n) : n_(n) {
    if (n < 1) throw std::domain_error("TransitionMatrix: n must be >= 1");
    const auto dim = static_cast<std::size_t>(n + 1);
    entries_.reserve(dim * dim);
    for (std::int64_t i = 0; i <= n; ++i) {
      auto row = bernstein_weights(n, grid_point<S>(n, i));
      entries_.insert(entries_.end(), row.begin(), row.end());
    }
  }

  /// Kernel whose row i is Binomial(n, h(i/n)); used for mutation-map chains.
  template <class H>
  static TransitionMatrix from_map(std::int64_t n, H&& h) {
    TransitionMatrix m;
    if (n < 1) throw std::domain_error("TransitionMatrix: n must be >= 1");
    m.n_ = n;
    for (std::int64_t i = 0; i <= n; ++i) {
      const S p = h(grid_point<S>(n, i));
      if (!(p >= S(0) && p <= S(1))) throw std::domain_error("map h escapes [0,1] on the grid");
      auto row = bernstein_weights(n, p);
      m.entries_.insert(m.entries_.end(), row.begin(), row.end());
    }
    return m;
  }

  std::int64_t n() const { return n_; }
  std::size_t dim() const { return static_cast<std::size_t>(n_ + 1); }

  const S& operator()(std::int64_t i, std::int64_t j) const {
    return entries_[static_cast<std::size_t>(i) * dim() + static_cast<std::size_t>(j)];
  }
  std::span<const S> row(std::int64_t i) const {
    return std::span<const S>(entries_).subspan(static_cast<std::size_t>(i) * dim(), dim());
  }

  /// P v. Rows are distributed over OpenMP threads for floating matrices of
  /// moderate size.
  std::vector<S> apply(std::span<const S> v) const {
    if (v.size() != dim()) throw std::domain_error("TransitionMatrix::apply: size mismatch");
    std::vector<S> out(dim(), S(0));
    const auto rows = static_cast<std::int64_t>(dim());
    const bool parallel = !is_exact_v<S> && n_ >= 128;
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t i = 0; i < rows; ++i) out[static_cast<std::size_t>(i)] = dot<S>(row(i), v);
    return out;
  }

  /// Single-threaded reference for apply().
  std::vector<S> apply_serial(std::span<const S> v) const {
    if (v.size() != dim()) throw std::domain_error("TransitionMatrix::apply: size mismatch");
    std::vector<S> out(dim(), S(0));
    for (std::int64_t i = 0; i <= n_; ++i) out[static_cast<std::size_t>(i)] = dot<S>(row(i), v);
    return out;
  }

 private:
  TransitionMatrix() = default;

  std::int64_t n_ = 0;
  std::vector<S> entries_;
};

template <class S>
TransitionMatrix<S> transition_matrix(std::int64_t n) {
  return TransitionMatrix<S>(n);
}

/// P^k f by k matrix-vector products; k = 0 returns f.
template <class S>
GridFunction<S> iterate_grid(const TransitionMatrix<S>& P, const GridFunction<S>& f, std::int64_t k) {
  if (k < 0) throw std::domain_error("iterate_grid: k must be >= 0");
  if (P.n() != f.n) throw std::domain_error("iterate_grid: matrix and grid disagree on n");
  std::vector<S> v = f.values;
  for (std::int64_t s = 0; s < k; ++s) v = P.apply(v);
  return GridFunction<S>(f.n, std::move(v));
}

template <class S>
GridFunction<S> iterate_grid(const GridFunction<S>& f, std::int64_t k) {
  if (k == 0) return f;
  return iterate_grid(TransitionMatrix<S>(f.n), f, k);
}

/// B_n^k f(x): one Bernstein evaluation on top of k-1 grid iterates.
template <class S>
S iterate_eval(const GridFunction<S>& f, std::int64_t k, const S& x) {
  if (k < 1) throw std::domain_error("iterate_eval: k must be >= 1");
  require_unit_interval(x, "x");
  return apply_bernstein(iterate_grid(f, k - 1), x);
}

/// The k -> infinity limit of B_n^k f: f(0) + (f(1) - f(0)) x.
template <class S>
Polynomial<S> kelisky_rivlin_limit(const GridFunction<S>& f) {
  return Polynomial<S>{f.values.front(), f.values.back() - f.values.front()};
}

/// (B_n f)'(x) = n E[f((S+1)/n) - f(S/n)], S ~ Binomial(n-1, x).
template <class S>
S bernstein_first_derivative(const GridFunction<S>& f, const S& x) {
  require_unit_interval(x, "x");
  const auto w = bernstein_weights(f.n - 1, x);
  S acc(0);
  for (std::int64_t j = 0; j < f.n; ++j) acc += w[j] * (f[j + 1] - f[j]);
  return S(f.n) * acc;
}

/// (B_n f)''(x) = n(n-1) E[second difference of f at S/n], S ~ Binomial(n-2, x).
/// Zero when n < 2.
template <class S>
S bernstein_second_derivative(const GridFunction<S>& f, const S& x) {
  require_unit_interval(x, "x");
  if (f.n < 2) return S(0);
  const auto w = bernstein_weights(f.n - 2, x);
  S acc(0);
  for (std::int64_t j = 0; j + 2 <= f.n; ++j) acc += w[j] * (f[j + 2] - S(2) * f[j + 1] + f[j]);
  return S(f.n * (f.n - 1)) * acc;
}

}  // namespace wfb
