#include "wfb/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wfb {

bool RateReport::all_pass() const { return first_failure() < 0; }

std::int64_t RateReport::first_failure() const {
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!rows[i].pass) return static_cast<std::int64_t>(i);
  return -1;
}

void RateReport::add_row(std::vector<Cell> cells, bool pass) {
  if (cells.size() != columns.size()) throw std::logic_error("RateReport: row width differs from header");
  rows.push_back({std::move(cells), pass});
}

void RateReport::add_parameter(std::string key, std::string value) {
  parameters.emplace_back(std::move(key), std::move(value));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const Rational& v) const { return to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_value(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? format_double(*d) : "null";
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return json_string(format_cell(c));
}

}  // namespace

std::string render_csv(const RateReport& report) {
  std::ostringstream os;
  os << "# experiment: " << report.experiment_name << '\n';
  for (const auto& [k, v] : report.parameters) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < report.columns.size(); ++i) os << (i ? "," : "") << csv_field(report.columns[i]);
  if (report.show_pass) os << ",pass";
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.cells.size(); ++i) os << (i ? "," : "") << csv_field(format_cell(row.cells[i]));
    if (report.show_pass) os << ',' << (row.pass ? "true" : "false");
    os << '\n';
  }
  for (const auto& note : report.notes) os << "# " << note << '\n';
  return os.str();
}

std::string render_json(const RateReport& report) {
  std::ostringstream os;
  os << "{\"experiment\":" << json_string(report.experiment_name) << ",\"parameters\":{";
  for (std::size_t i = 0; i < report.parameters.size(); ++i)
    os << (i ? "," : "") << json_string(report.parameters[i].first) << ':' << json_string(report.parameters[i].second);
  os << "},\"rows\":[";
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    const auto& row = report.rows[r];
    os << (r ? ",\n" : "\n") << '{';
    for (std::size_t i = 0; i < row.cells.size(); ++i)
      os << (i ? "," : "") << json_string(report.columns[i]) << ':' << json_value(row.cells[i]);
    if (report.show_pass) os << ",\"pass\":" << (row.pass ? "true" : "false");
    os << '}';
  }
  os << "],\"notes\":[";
  for (std::size_t i = 0; i < report.notes.size(); ++i) os << (i ? "," : "") << json_string(report.notes[i]);
  os << "]}\n";
  return os.str();
}

std::string render(const RateReport& report, OutputFormat format) {
  return format == OutputFormat::json ? render_json(report) : render_csv(report);
}

std::string describe_row(const RateReport& report, std::size_t row) {
  std::string out = report.experiment_name + ":";
  const auto& cells = report.rows.at(row).cells;
  for (std::size_t i = 0; i < cells.size(); ++i)
    out += (i ? ", " : " ") + report.columns[i] + "=" + format_cell(cells[i]);
  return out;
}

}  // namespace wfb
