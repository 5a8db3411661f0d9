#include "wfb/wf_chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wfb {

EmpiricalMap::EmpiricalMap(std::vector<double> sorted_points) : points_(std::move(sorted_points)) {
  if (points_.empty()) throw std::domain_error("EmpiricalMap: need at least one point");
  if (!std::is_sorted(points_.begin(), points_.end()))
    throw std::domain_error("EmpiricalMap: points must be nondecreasing");
}

std::int64_t EmpiricalMap::count(double x) const {
  return std::upper_bound(points_.begin(), points_.end(), x) - points_.begin();
}

EmpiricalMap sample_empirical_map(std::int64_t n, RandomStream& rng) {
  if (n < 1) throw std::domain_error("sample_empirical_map: n must be >= 1");
  std::vector<double> u(static_cast<std::size_t>(n));
  for (auto& v : u) v = rng.uniform();
  std::sort(u.begin(), u.end());
  return EmpiricalMap(std::move(u));
}

GridStart snap_to_grid(std::int64_t n, double x0) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  require_unit_interval(x0, "x0");
  const double scaled = x0 * static_cast<double>(n);
  const auto c = static_cast<std::int64_t>(std::llround(scaled));
  return {c, static_cast<double>(c) != scaled};
}

namespace {

Trajectory start_trajectory(std::int64_t n, double x0, std::int64_t steps) {
  if (steps < 0) throw std::domain_error("steps must be >= 0");
  const auto start = snap_to_grid(n, x0);
  Trajectory tr;
  tr.n = n;
  tr.start_x = x0;
  tr.snapped = start.snapped;
  tr.steps = steps;
  tr.counts.push_back(start.count);
  return tr;
}

// Number of steps until absorption, or -1 if still interior after max_steps.
// Sets `count` to the final state.
std::int64_t run_to_absorption(std::int64_t n, std::int64_t& count, std::int64_t max_steps,
                               RandomStream& rng) {
  const double nd = static_cast<double>(n);
  for (std::int64_t s = 0; s < max_steps; ++s) {
    if (count == 0 || count == n) return s;
    count = rng.binomial(n, static_cast<double>(count) / nd);
  }
  return (count == 0 || count == n) ? max_steps : -1;
}

struct ReplicaOutcome {
  std::int64_t time = -1;
  bool at_one = false;
};

AbsorptionEstimate finish(std::int64_t n, std::int64_t replicas, const GridStart& start,
                          const std::vector<ReplicaOutcome>& out) {
  AbsorptionEstimate est;
  est.replicas = replicas;
  est.start = static_cast<double>(start.count) / static_cast<double>(n);
  est.snapped = start.snapped;
  std::int64_t time_sum = 0;
  for (const auto& o : out) {
    if (o.time < 0) {
      ++est.censored;
      continue;
    }
    time_sum += o.time;
    if (o.at_one) ++est.absorbed_at_one;
  }
  const auto absorbed = replicas - est.censored;
  if (absorbed > 0) {
    const double m = static_cast<double>(absorbed);
    est.estimate = static_cast<double>(est.absorbed_at_one) / m;
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / m);
    est.mean_absorption_time = static_cast<double>(time_sum) / m;
  }
  return est;
}

ReplicaOutcome absorption_replica(std::int64_t n, std::int64_t start, std::int64_t max_steps,
                                  std::uint64_t seed, std::int64_t r) {
  RandomStream rng(seed, static_cast<std::uint64_t>(r));
  std::int64_t c = start;
  const auto t = run_to_absorption(n, c, max_steps, rng);
  return {t, t >= 0 && c == n};
}

void validate_replicas(std::int64_t replicas) {
  if (replicas < 1) throw std::domain_error("replicas must be >= 1");
}

}  // namespace

Trajectory simulate_chain(std::int64_t n, double x0, std::int64_t steps, RandomStream& rng) {
  auto tr = start_trajectory(n, x0, steps);
  const double nd = static_cast<double>(n);
  std::int64_t c = tr.counts.back();
  for (std::int64_t s = 0;; ++s) {
    if (c == 0 || c == n) {
      tr.absorbed_at = s;
      break;
    }
    if (s == steps) {
      tr.censored = true;
      break;
    }
    c = rng.binomial(n, static_cast<double>(c) / nd);
    tr.counts.push_back(c);
  }
  return tr;
}

Trajectory mutation_chain_simulate(std::int64_t n, double x0, std::int64_t steps,
                                   const std::function<double(double)>& h, RandomStream& rng) {
  auto tr = start_trajectory(n, x0, steps);
  const double nd = static_cast<double>(n);
  std::vector<double> hp(static_cast<std::size_t>(n + 1));
  for (std::int64_t j = 0; j <= n; ++j) {
    hp[j] = h(static_cast<double>(j) / nd);
    if (!(hp[j] >= 0.0 && hp[j] <= 1.0)) throw std::domain_error("mutation map h escapes [0,1] on the grid");
  }
  const bool zero_absorbing = hp.front() == 0.0;
  const bool one_absorbing = hp.back() == 1.0;
  std::int64_t c = tr.counts.back();
  for (std::int64_t s = 0;; ++s) {
    if ((c == 0 && zero_absorbing) || (c == n && one_absorbing)) {
      tr.absorbed_at = s;
      break;
    }
    if (s == steps) {
      tr.censored = true;
      break;
    }
    c = rng.binomial(n, hp[c]);
    tr.counts.push_back(c);
  }
  return tr;
}

Trajectory poissonized_simulate(std::int64_t n, double x0, double t, RandomStream& rng) {
  if (!(t >= 0.0)) throw std::domain_error("t must be >= 0");
  const auto steps = rng.poisson(static_cast<double>(n) * t);
  return simulate_chain(n, x0, steps, rng);
}

AbsorptionEstimate absorption_prob_mc(std::int64_t n, double x, std::int64_t replicas,
                                      std::int64_t max_steps, std::uint64_t seed) {
  validate_replicas(replicas);
  const auto start = snap_to_grid(n, x);
  std::vector<ReplicaOutcome> out(static_cast<std::size_t>(replicas));
#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t r = 0; r < replicas; ++r) out[r] = absorption_replica(n, start.count, max_steps, seed, r);
  return finish(n, replicas, start, out);
}

AbsorptionEstimate absorption_prob_mc_serial(std::int64_t n, double x, std::int64_t replicas,
                                             std::int64_t max_steps, std::uint64_t seed) {
  validate_replicas(replicas);
  const auto start = snap_to_grid(n, x);
  std::vector<ReplicaOutcome> out(static_cast<std::size_t>(replicas));
  for (std::int64_t r = 0; r < replicas; ++r) out[r] = absorption_replica(n, start.count, max_steps, seed, r);
  return finish(n, replicas, start, out);
}

McEstimate summarize(const std::vector<double>& samples) {
  McEstimate e;
  e.samples = static_cast<std::int64_t>(samples.size());
  if (samples.empty()) return e;
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double m = static_cast<double>(samples.size());
  e.estimate = sum / m;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double v : samples) ss += (v - e.estimate) * (v - e.estimate);
    e.std_error = std::sqrt(ss / (m - 1.0) / m);
  }
  return e;
}

McEstimate two_step_composition_mc(std::int64_t n, double x, const std::function<double(double)>& f,
                                   std::int64_t replicas, std::uint64_t seed) {
  validate_replicas(replicas);
  require_unit_interval(x, "x");
  std::vector<double> v(static_cast<std::size_t>(replicas));
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < replicas; ++r) {
    RandomStream rng(seed, static_cast<std::uint64_t>(r));
    const auto g1 = sample_empirical_map(n, rng);
    const auto g2 = sample_empirical_map(n, rng);
    v[r] = f(g2(g1(x)));
  }
  return summarize(v);
}

namespace {
double poisson_abs_deviation_draw(double mean, std::uint64_t seed, std::int64_t r) {
  RandomStream rng(seed, static_cast<std::uint64_t>(r));
  return std::fabs(static_cast<double>(rng.poisson(mean)) - std::floor(mean));
}
}  // namespace

McEstimate poisson_abs_deviation_mc(double mean, std::int64_t draws, std::uint64_t seed) {
  validate_replicas(draws);
  std::vector<double> v(static_cast<std::size_t>(draws));
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < draws; ++r) v[r] = poisson_abs_deviation_draw(mean, seed, r);
  return summarize(v);
}

McEstimate poisson_abs_deviation_mc_serial(double mean, std::int64_t draws, std::uint64_t seed) {
  validate_replicas(draws);
  std::vector<double> v(static_cast<std::size_t>(draws));
  for (std::int64_t r = 0; r < draws; ++r) v[r] = poisson_abs_deviation_draw(mean, seed, r);
  return summarize(v);
}

double poisson_abs_deviation_exact(double mean) {
  if (!(mean >= 0.0)) throw std::domain_error("mean must be >= 0");
  if (mean == 0.0) return 0.0;
  // Sum the pmf outward from the mode in log space until the tail is negligible.
  const double m = std::floor(mean);
  const double log_mean = std::log(mean);
  auto pmf = [&](double k) { return std::exp(k * log_mean - mean - std::lgamma(k + 1.0)); };
  const double reach = 40.0 * std::sqrt(mean) + 40.0;
  double acc = 0.0;
  for (double k = std::max(0.0, m - reach); k <= m + reach; k += 1.0) acc += pmf(k) * std::fabs(k - m);
  return acc;
}

}  // namespace wfb
