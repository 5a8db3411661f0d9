#include "wfb/bernstein.hpp"

#include <cmath>

namespace wfb::detail {

// Multiplicative recurrence w_{j+1} = w_j (n-j)/(j+1) * x/(1-x). When (1-x)^n
// would underflow the recurrence is anchored at the mode instead, with the
// anchor computed in log space, and run outward in both directions.
std::vector<double> bernstein_weights_float(std::int64_t n, double x) {
  std::vector<double> w(static_cast<std::size_t>(n + 1), 0.0);
  if (x == 0.0) {
    w.front() = 1.0;
    return w;
  }
  if (x == 1.0) {
    w.back() = 1.0;
    return w;
  }
  // recurrence in extended precision, then one rounding per weight
  using L = long double;
  std::vector<L> v(static_cast<std::size_t>(n + 1), 0.0L);
  const L nl = static_cast<L>(n);
  const L xl = x;
  const L odds = xl / (1.0L - xl);
  const L log_w0 = nl * std::log1p(-xl);
  if (log_w0 > -11000.0L && odds < 1e4000L) {
    v[0] = std::exp(log_w0);
    for (std::int64_t j = 0; j < n; ++j) v[j + 1] = v[j] * (static_cast<L>(n - j) / static_cast<L>(j + 1)) * odds;
  } else {
    // anchor at the mode in log space and recur outward
    auto mode = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * x));
    if (mode > n) mode = n;
    const L md = static_cast<L>(mode);
    v[mode] = std::exp(std::lgamma(nl + 1.0L) - std::lgamma(md + 1.0L) - std::lgamma(nl - md + 1.0L) +
                       md * std::log(xl) + (nl - md) * std::log1p(-xl));
    for (std::int64_t j = mode; j < n; ++j) v[j + 1] = v[j] * (static_cast<L>(n - j) / static_cast<L>(j + 1)) * odds;
    for (std::int64_t j = mode; j > 0; --j) v[j - 1] = v[j] * (static_cast<L>(j) / static_cast<L>(n - j + 1)) / odds;
  }
  L total = 0.0L;
  for (const auto& e : v) total += e;
  for (std::size_t j = 0; j < v.size(); ++j) w[j] = static_cast<double>(v[j] / total);
  return w;
}

}  // namespace wfb::detail
