#pragma once

// The end-to-end acceptance suite. Shared by the acceptance test binary and
// the `verify-all` CLI command.

#include "wfb/random.hpp"
#include "wfb/report.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace wfb {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  std::optional<double> time_limit;  // seconds; exceeding it fails the criterion
};

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  std::set<int> only;          // empty runs everything
  bool corrupt_bound = false;  // harness self-test: shrink one bound so it must fail
};

inline constexpr int kCriterionCount = 11;

CriterionResult run_criterion(int id, const AcceptanceOptions& options);
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options);

/// Table with one row per criterion. Timing is omitted so the output is
/// byte-identical across runs.
RateReport acceptance_report(const std::vector<CriterionResult>& results, std::uint64_t seed);

/// "[PASS] 1 title (0.12 s): detail"
std::string format_result_line(const CriterionResult& r);

}  // namespace wfb
