#include <doctest.h>

#include "wfb/report.hpp"
#include "wfb/test_functions.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

using namespace wfb;

namespace {

Rational q(long a, long b = 1) { return make_rational(std::int64_t{a}, std::int64_t{b}); }

RateReport sample_report() {
  RateReport r;
  r.experiment_name = "demo";
  r.add_parameter("n", "5");
  r.columns = {"k", "value", "exact"};
  r.add_row({std::int64_t{1}, 0.1, q(1, 3)});
  r.add_row({std::int64_t{2}, std::numeric_limits<double>::infinity(), q(4)}, false);
  r.notes.push_back("a note");
  return r;
}

}  // namespace

TEST_CASE("cell formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_cell(Cell(q(-6, 4))) == "-3/2");
  CHECK(format_cell(Cell(std::int64_t{-7})) == "-7");
  CHECK(format_cell(Cell(std::string("abc"))) == "abc");
  // 17 digits round-trip
  for (double v : {1.0 / 3, M_PI, 1e-300, 123456789.123456789})
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("report bookkeeping") {
  auto r = sample_report();
  CHECK_FALSE(r.all_pass());
  CHECK(r.first_failure() == 1);
  CHECK_THROWS_AS(r.add_row({std::int64_t{1}}), std::logic_error);
  RateReport ok;
  ok.columns = {"a"};
  ok.add_row({0.0});
  CHECK(ok.all_pass());
  CHECK(ok.first_failure() == -1);
  CHECK(describe_row(r, 1).find("value=inf") != std::string::npos);
}

TEST_CASE("csv rendering") {
  const std::string expected =
      "# experiment: demo\n"
      "# n: 5\n"
      "k,value,exact,pass\n"
      "1,0.10000000000000001,1/3,true\n"
      "2,inf,4,false\n"
      "# a note\n";
  CHECK(render_csv(sample_report()) == expected);
  auto r = sample_report();
  r.show_pass = false;
  CHECK(render_csv(r).find("k,value,exact\n") != std::string::npos);
}

TEST_CASE("json rendering") {
  const auto text = render_json(sample_report());
  const auto j = nlohmann::json::parse(text);
  CHECK(j["experiment"] == "demo");
  CHECK(j["parameters"]["n"] == "5");
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["k"] == 1);
  CHECK(j["rows"][0]["value"].get<double>() == 0.1);
  CHECK(j["rows"][0]["exact"] == "1/3");
  CHECK(j["rows"][0]["pass"] == true);
  CHECK(j["rows"][1]["value"].is_null());
  CHECK(j["notes"][0] == "a note");
  CHECK(render(sample_report(), OutputFormat::json) == text);
}

TEST_CASE("rational literals") {
  CHECK(parse_rational("3/8") == q(3, 8));
  CHECK(parse_rational("-6/4") == q(-3, 2));
  CHECK(parse_rational("0.3") == q(3, 10));
  CHECK(parse_rational("-1.25e-3") == q(-1, 800));
  CHECK(parse_rational("2E2") == 200);
  CHECK(parse_rational(".5") == q(1, 2));
  CHECK(parse_rational("7") == 7);
  for (const char* bad : {"", "abc", "1/0", "1.2.3", "3/", "0x10", "1e"})
    CHECK_THROWS_AS(parse_rational(bad), std::invalid_argument);
}

TEST_CASE("grid text") {
  const auto g = parse_grid_text("2\n0\n1/4\n1\n");
  CHECK(g.n == 2);
  CHECK(g.values == std::vector<Rational>{0, q(1, 4), 1});
  CHECK_THROWS_AS(parse_grid_text("3\n0\n1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid_text("0\n1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_grid_text("2\n0\nx\n1\n"), std::invalid_argument);
  CHECK_THROWS_AS(read_grid_file("/nonexistent/grid.txt"), std::invalid_argument);
}

TEST_CASE("named test functions") {
  const auto xsq = TestFunction::parse("xsq");
  CHECK(xsq(0.5) == 0.25);
  CHECK(xsq.exact_value(q(1, 3)) == q(1, 9));
  REQUIRE(xsq.polynomial().has_value());
  CHECK(*xsq.polynomial() == Polynomial<Rational>{0, 0, 1});
  CHECK_FALSE(xsq.fixed_n().has_value());

  CHECK(TestFunction::parse("xcube").exact_value(q(1, 2)) == q(1, 8));
  CHECK(TestFunction::parse("x4").exact_value(q(1, 2)) == q(1, 16));
  CHECK(TestFunction::parse("linear").exact_value(q(2, 7)) == q(2, 7));
  const auto a = TestFunction::parse("abs");
  CHECK(a.exact_value(q(1, 5)) == q(3, 10));
  CHECK_FALSE(a.polynomial().has_value());

  const auto e = TestFunction::parse("expneg:2");
  CHECK(e(0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(e.grid<double>(4)[4] == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));

  CHECK(xsq.grid<Rational>(4).values == std::vector<Rational>{0, q(1, 16), q(1, 4), q(9, 16), 1});

  CHECK_THROWS_AS(TestFunction::parse("sine"), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::parse("expneg:"), std::invalid_argument);
}
