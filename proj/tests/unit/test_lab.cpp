// Copyright 2026 The ratiolab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "ratiolab/lab.hpp"
#include "ratiolab/sim.hpp"

using namespace ratiolab;

namespace {

StudySpec halfline_spec(int workers) {
  StudySpec s;
  s.kind = "ratio-scaling";
  s.cls = "HalfLine1D";
  s.n_grid = {1000, 10000};
  s.reps = 2;
  s.seed = 5;
  s.workers = workers;
  return s;
}

bool same_rows(const std::vector<Row>& a, const std::vector<Row>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].study != b[i].study || a[i].cls != b[i].cls || a[i].n != b[i].n || a[i].rep != b[i].rep ||
        a[i].statistic != b[i].statistic || a[i].seed != b[i].seed)
      return false;
    if (std::memcmp(&a[i].value, &b[i].value, sizeof(double)) != 0) return false;
  }
  return true;
}

size_t count_lines(const std::string& s) {
  size_t c = 0;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) ++c;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  CHECK_THROWS_WITH_AS(parse_config(""), doctest::Contains("no study specified"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("# nothing here\n[params]\nq = 2\n"), doctest::Contains("no study specified"),
                       ConfigError);
  auto s = parse_config(
      "[study]\n"
      "kind = ratio-scaling   # trailing comment\n"
      "class = BoxCdf\n"
      "n = 1e3, 1e4\n"
      "reps = 50\n"
      "seed = 7\n"
      "[params]\n"
      "d = 2\n"
      "[output]\n"
      "csv = out.csv\n");
  CHECK(s.kind == "ratio-scaling");
  CHECK(s.cls == "BoxCdf");
  CHECK(s.n_grid == std::vector<long>{1000, 10000});
  CHECK(s.reps == 50);
  CHECK(s.seed == 7);
  CHECK(s.params.at("d") == "2");
  CHECK(s.csv == "out.csv");
  CHECK(parse_config(emit_config(s)) == s);

  CHECK_THROWS_WITH_AS(parse_config("[study]\nkind = margin\nbogus line\n"), doctest::Contains("line 3"), ConfigError);
}

TEST_CASE("validation happens before any work") {
  StudySpec s = halfline_spec(1);
  s.cls = "Hexagons";
  CHECK_THROWS_AS(validate(s), ConfigError);
  CHECK_THROWS_AS(run_study(s), ConfigError);
  s = halfline_spec(1);
  s.n_grid = {1000, 100};
  CHECK_THROWS_AS(validate(s), ConfigError);
  s = halfline_spec(1);
  s.kind = "astrology";
  CHECK_THROWS_AS(validate(s), ConfigError);
}

TEST_CASE("studies are deterministic across runs and workers") {
  auto a = run_study(halfline_spec(1));
  auto b = run_study(halfline_spec(1));
  auto c = run_study(halfline_spec(4));
  CHECK(!a.rows.empty());
  CHECK(same_rows(a.rows, b.rows));
  CHECK(same_rows(a.rows, c.rows));
}

TEST_CASE("oracle study passes the exact law through") {
  StudySpec s;
  s.kind = "oracle";
  s.cls = "FiniteDict";
  s.n_grid = {2};
  s.params["p"] = "0.5,0.5";
  s.params["funcs"] = "1,0";
  auto r = run_study(s);
  auto law = exact_small_oracle({0.5, 0.5}, 2, [](const std::vector<int>& c, int n) { return std::fabs(c[0] / double(n) - 0.5); });
  auto sup = column(r, "support", "0");
  auto pr = column(r, "prob", "1");
  REQUIRE(sup.size() == 1);
  CHECK(sup[0] == law.values[0]);
  CHECK(pr[0] == law.probs[1]);
  CHECK(column(r, "expectation", "value")[0] == doctest::Approx(0.25));
}

TEST_CASE("slope fits") {
  std::vector<double> x{1e3, 1e4, 1e5, 1e6}, y, c(4, 3.0);
  for (double v : x) y.push_back(2.5 / std::sqrt(v));
  auto f = fit_slope(x, y);
  CHECK(std::abs(f.slope + 0.5) <= 1e-12);
  CHECK(f.points == 4);
  CHECK(std::abs(fit_slope(x, c).slope) <= 1e-12);
  CHECK_THROWS(fit_slope({1.0, 2.0}, {1.0, 2.0}));
}

TEST_CASE("stability checks") {
  std::vector<double> n{1e3, 1e4, 1e5, 1e6}, c(4, 0.7), logs;
  for (double v : n) logs.push_back(std::log(v));
  auto one = [](double) { return 1.0; };
  CHECK(stability_check(n, c, one, 2.0).pass);
  auto s = stability_check(n, logs, one, 2.0);
  CHECK_FALSE(s.pass);
  CHECK(s.ratio == doctest::Approx(2.0));
}

TEST_CASE("csv and json round trips") {
  StudySpec s;
  s.kind = "bound-table";
  s.cls = "excess";
  s.n_grid = {1000, 10000};
  s.params["problem"] = "constant";
  auto r = run_study(s);
  std::string csv = emit_csv(r);
  CHECK(count_lines(csv) == 5);
  CHECK(same_rows(parse_csv(csv), r.rows));

  auto h = run_study(halfline_spec(1));
  h.rows.push_back({"x", "y", 1, "mean", "stat", kInf, 1});
  h.rows.push_back({"x", "y", 1, "mean", "stat", 1.0 / 3.0, 2});
  h.rows.push_back({"x", "y", 1, "mean", "stat", -2.5e-300, 3});
  CHECK(same_rows(parse_csv(emit_csv(h)), h.rows));
  std::string js = emit_json(h);
  CHECK(same_rows(rows_from_json(js), h.rows));
  CHECK(spec_from_json(js) == h.spec);
}

TEST_CASE("gnuplot data") {
  auto g = emit_gnuplot({1000, 10000}, {0.5, 0.25}, "median sup");
  CHECK(g.rfind("# median sup", 0) == 0);
  CHECK(count_lines(g) == 3);
}

TEST_CASE("shortest doubles") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.125, -0.0})
    CHECK(std::stod(format_double(v)) == v);
}
