#pragma once

// Seeded, platform-independent random streams.
//
// std::*_distribution implementations differ between standard libraries, so
// every sampler used by the simulations is implemented here on top of
// std::mt19937_64 (whose output sequence the standard fixes).

#include <cstdint>
#include <random>

namespace wfb {

inline constexpr std::uint64_t kDefaultSeed = 0xB17057E1ULL;

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal (Box-Muller, spare value cached).
  double normal();

  /// Binomial(n, p). Inversion when min(p, 1-p) * n < 10, otherwise
  /// Hormann's BTRS transformed rejection.
  std::int64_t binomial(std::int64_t n, double p);

  /// Poisson(mean). Inversion below mean 10, otherwise Hormann's PTRS.
  std::int64_t poisson(double mean);

 private:
  std::int64_t binomial_inversion(std::int64_t n, double p);
  std::int64_t binomial_btrs(std::int64_t n, double p);
  std::int64_t poisson_inversion(double mean);
  std::int64_t poisson_ptrs(double mean);

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace wfb
