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
#include <set>

#include "ratiolab/core.hpp"
#include "ratiolab/rng.hpp"

using namespace ratiolab;

TEST_CASE("truncated logs") {
  CHECK(log_e(0.5) == doctest::Approx(1.0));
  CHECK(log_e(kE) == doctest::Approx(1.0));
  CHECK(log_e(100.0) == doctest::Approx(std::log(100.0)));
  CHECK(loglog_e(2.0) == doctest::Approx(0.0));
  CHECK(loglog_e(1e10) == doctest::Approx(std::log(std::log(1e10))));
}

TEST_CASE("quadrature") {
  auto r = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  auto s = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-10));
  auto t = integrate_to_inf([](double u) { return 1.0 / (u * u); }, 1.0);
  CHECK(t.value == doctest::Approx(1.0).epsilon(1e-8));
  auto h = integrate_to_inf([](double u) { return std::pow(u, -1.5); }, 1.0);
  CHECK(h.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("root finding") {
  double x = bisect([](double v) { return v * v - 2.0; }, 0.0, 2.0);
  CHECK(x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  double y = bisect_predicate([](double v) { return v >= 0.3; }, 0.0, 1.0);
  CHECK(std::abs(y - 0.3) < 1e-10);
}

TEST_CASE("grids") {
  auto g = logspace(1e-3, 1.0, 4);
  REQUIRE(g.size() == 4);
  CHECK(g.front() == doctest::Approx(1e-3));
  CHECK(g[1] == doctest::Approx(1e-2));
  CHECK(g.back() == doctest::Approx(1.0));
  auto l = linspace(0.0, 1.0, 5);
  CHECK(l[2] == doctest::Approx(0.5));
}

TEST_CASE("norm weights") {
  CHECK(NormWeight::power(1.0)(0.25) == doctest::Approx(0.25));
  CHECK(NormWeight::power(2.0)(0.5) == doctest::Approx(0.25));
  CHECK(NormWeight::power(0.0)(0.3) == doctest::Approx(1.0));
  CHECK(NormWeight::power(0.0).is_unit());
  auto w = NormWeight::power_loglog(1.0, 1.0);
  double t = 1e-6;
  CHECK(w(t) == doctest::Approx(t * std::log(std::log(1.0 / t))));
  CHECK_FALSE(w.is_power());
}

TEST_CASE("mode names") {
  CHECK(mode_from_string("shape") == Mode::Shape);
  CHECK(mode_from_string("explicit") == Mode::Explicit);
  CHECK(mode_from_string(to_string(Mode::Explicit)) == Mode::Explicit);
  CHECK_THROWS(mode_from_string("loose"));
}

TEST_CASE("counter rng is a pure function of key and counter") {
  CounterRng a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  std::set<std::uint64_t> keys;
  for (std::uint64_t i = 0; i < 1000; ++i) keys.insert(stream_key(42, i));
  CHECK(keys.size() == 1000);
}

TEST_CASE("rng moments") {
  CounterRng r(123);
  const int N = 200000;
  double s = 0, s2 = 0, e = 0, z = 0, z2 = 0;
  for (int i = 0; i < N; ++i) {
    double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
    e += r.exponential();
    double g = r.normal();
    z += g;
    z2 += g * g;
  }
  CHECK(s / N == doctest::Approx(0.5).epsilon(0.01));
  CHECK(s2 / N == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  CHECK(e / N == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(z / N) < 0.01);
  CHECK(z2 / N == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("binomial draws") {
  CounterRng r(99);
  const int N = 20000;
  for (auto [n, p] : {std::pair<long, double>{20, 0.5}, {1000, 0.01}, {100000, 0.3}}) {
    double s = 0, s2 = 0;
    for (int i = 0; i < N; ++i) {
      long k = r.binomial(n, p);
      REQUIRE(k >= 0);
      REQUIRE(k <= n);
      s += k;
      s2 += double(k) * k;
    }
    double mean = s / N, var = s2 / N - mean * mean;
    double m0 = n * p, v0 = n * p * (1 - p);
    CHECK(std::abs(mean - m0) < 5.0 * std::sqrt(v0 / N));
    CHECK(var == doctest::Approx(v0).epsilon(0.05));
  }
  CHECK(r.binomial(10, 0.0) == 0);
  CHECK(r.binomial(10, 1.0) == 10);
}
