#pragma once

// Tabulated experiment output. CSV (default) and JSON renderings are
// deterministic: floats use 17 significant digits, rationals print as "p/q".

#include "wfb/numerics.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wfb {

using Cell = std::variant<std::int64_t, double, Rational, std::string>;

struct RateRow {
  std::vector<Cell> cells;
  bool pass = true;
};

struct RateReport {
  std::string experiment_name;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> columns;
  std::vector<RateRow> rows;
  std::vector<std::string> notes;
  bool show_pass = true;  // append a "pass" column when rendering

  bool all_pass() const;
  /// Index of the first failing row, or -1.
  std::int64_t first_failure() const;
  void add_row(std::vector<Cell> cells, bool pass = true);
  void add_parameter(std::string key, std::string value);
};

enum class OutputFormat { csv, json };

std::string format_double(double v);
std::string format_cell(const Cell& c);

std::string render_csv(const RateReport& report);
std::string render_json(const RateReport& report);
std::string render(const RateReport& report, OutputFormat format);

/// One failing row as "name: col=value, ..." for diagnostics.
std::string describe_row(const RateReport& report, std::size_t row);

}  // namespace wfb
