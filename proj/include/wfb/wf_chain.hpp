#pragma once

// The Wright-Fisher chain H_n^k(x): k-fold composition of independent random
// empirical distribution functions. Simulation kernels, exact non-absorption
// probabilities and the geometric rate bounds for iterates.

#include "wfb/bernstein.hpp"
#include "wfb/random.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace wfb {

/// G_n(x) = #{U_i <= x} / n for n sorted uniforms. One realization can be
/// evaluated at every x, which couples the step monotonically across starts.
class EmpiricalMap {
 public:
  explicit EmpiricalMap(std::vector<double> sorted_points);

  std::int64_t n() const { return static_cast<std::int64_t>(points_.size()); }
  const std::vector<double>& sorted_points() const { return points_; }

  std::int64_t count(double x) const;
  double operator()(double x) const { return static_cast<double>(count(x)) / static_cast<double>(n()); }

 private:
  std::vector<double> points_;
};

EmpiricalMap sample_empirical_map(std::int64_t n, RandomStream& rng);

/// A realized path of the chain. `counts[k]` is n * H_n^k(x); storage stops at
/// absorption, and `state(k)` past the end returns the absorbing value.
struct Trajectory {
  std::int64_t n = 1;
  double start_x = 0.0;
  bool snapped = false;  // start_x was off-grid and moved to the nearest grid point
  std::int64_t steps = 0;  // steps requested
  std::vector<std::int64_t> counts;
  std::optional<std::int64_t> absorbed_at;
  bool censored = false;

  double state(std::size_t k) const {
    const auto c = k < counts.size() ? counts[k] : counts.back();
    return static_cast<double>(c) / static_cast<double>(n);
  }
  double final_state() const { return state(counts.size() - 1); }
};

struct GridStart {
  std::int64_t count = 0;
  bool snapped = false;
};

/// Nearest grid index to x0 (x0 in [0,1]).
GridStart snap_to_grid(std::int64_t n, double x0);

Trajectory simulate_chain(std::int64_t n, double x0, std::int64_t steps, RandomStream& rng);

/// Each step applies h, then one binomial(n, h(state)) draw. Endpoints are
/// absorbing only when h fixes them. Throws std::domain_error when h leaves
/// [0,1] on the grid.
Trajectory mutation_chain_simulate(std::int64_t n, double x0, std::int64_t steps,
                                   const std::function<double(double)>& h, RandomStream& rng);

/// Draws Phi ~ Poisson(n t) and runs the chain for Phi steps on the same stream.
Trajectory poissonized_simulate(std::int64_t n, double x0, double t, RandomStream& rng);

struct AbsorptionEstimate {
  double estimate = 0.0;   // fraction absorbed at 1 among absorbed replicas
  double std_error = 0.0;
  std::int64_t censored = 0;
  std::int64_t absorbed_at_one = 0;
  std::int64_t replicas = 0;
  double mean_absorption_time = 0.0;  // over absorbed replicas
  double start = 0.0;                 // grid start actually used
  bool snapped = false;
};

/// Replica r uses RandomStream(seed, r); results do not depend on the thread count.
AbsorptionEstimate absorption_prob_mc(std::int64_t n, double x, std::int64_t replicas,
                                      std::int64_t max_steps, std::uint64_t seed);
AbsorptionEstimate absorption_prob_mc_serial(std::int64_t n, double x, std::int64_t replicas,
                                             std::int64_t max_steps, std::uint64_t seed);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Mean and standard error of ordered samples.
McEstimate summarize(const std::vector<double>& samples);

/// E f(G2(G1(x))) with two independent empirical maps; equals (B_n B_n) f(x).
McEstimate two_step_composition_mc(std::int64_t n, double x, const std::function<double(double)>& f,
                                   std::int64_t replicas, std::uint64_t seed);

/// E |Phi - floor(mean)|, Phi ~ Poisson(mean).
McEstimate poisson_abs_deviation_mc(double mean, std::int64_t draws, std::uint64_t seed);
McEstimate poisson_abs_deviation_mc_serial(double mean, std::int64_t draws, std::uint64_t seed);
double poisson_abs_deviation_exact(double mean);

/// beta(k, x) = P(H_n^k(x) not in {0,1}) on the grid, as P^k phi with phi the
/// indicator of interior grid points.
template <class S>
GridFunction<S> beta_exact(const TransitionMatrix<S>& P, std::int64_t k) {
  if (k < 1) throw std::domain_error("beta_exact: k must be >= 1");
  const auto n = P.n();
  std::vector<S> phi(static_cast<std::size_t>(n + 1), S(1));
  phi.front() = S(0);
  phi.back() = S(0);
  return iterate_grid(P, GridFunction<S>(n, std::move(phi)), k);
}

template <class S>
GridFunction<S> beta_exact(std::int64_t n, std::int64_t k) {
  return beta_exact(TransitionMatrix<S>(n), k);
}

/// n (1 - 1/n)^(k-1) x (1 - x)
template <class S>
S beta_upper_bound(std::int64_t n, std::int64_t k, const S& x) {
  if (k < 1) throw std::domain_error("beta_upper_bound: k must be >= 1");
  return S(n) * ipow(S(1) - ratio<S>(1, n), k - 1) * x * (S(1) - x);
}

/// gamma(k, x) = (1 - 1/n)^k x (1 - x)
template <class S>
S gamma_sequence(std::int64_t n, std::int64_t k, const S& x) {
  if (k < 0) throw std::domain_error("gamma_sequence: k must be >= 0");
  return ipow(S(1) - ratio<S>(1, n), k) * x * (S(1) - x);
}

/// E[H_n^k(x) (1 - H_n^k(x))] on the grid, from P^k.
template <class S>
GridFunction<S> gamma_from_matrix(const TransitionMatrix<S>& P, std::int64_t k) {
  const auto g = sample_grid<S>(P.n(), [](const S& y) { return S(y * (S(1) - y)); });
  return iterate_grid(P, g, k);
}

/// 2 ||f|| n (1 - 1/n)^(k-1) x (1 - x)
template <class S>
S kr_error_bound(const S& f_sup, std::int64_t n, std::int64_t k, const S& x) {
  if (f_sup < S(0)) throw std::domain_error("kr_error_bound: f_sup must be >= 0");
  return S(2) * f_sup * beta_upper_bound(n, k, x);
}

/// 2 ||f|| beta(k, x)
template <class S>
S kr_error_bound_tight(const S& f_sup, const S& beta) {
  return S(2) * f_sup * beta;
}

}  // namespace wfb
