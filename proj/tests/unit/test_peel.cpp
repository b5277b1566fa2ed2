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
#include <vector>

#include "ratiolab/peel.hpp"
#include "ratiolab/rng.hpp"

using namespace ratiolab;

TEST_CASE("gamma inverse and gamma") {
  CHECK(gamma_inverse(0.0) == 0.0);
  CHECK(gamma_inverse(1.0) == doctest::Approx(std::log(2.0)));
  CHECK(gamma_inverse(2.0) == doctest::Approx(2.0 * std::log(3.0)));
  CHECK(gamma_fn(0.0) == 0.0);
  CHECK(gamma_fn(std::log(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gamma_fn(2.0 * std::log(3.0)) == doctest::Approx(2.0).epsilon(1e-12));
  for (int k = 1; k <= 1000; ++k) {
    double x = k;
    CHECK(std::abs(gamma_fn(gamma_inverse(x)) - x) <= 1e-10 * x);
  }
  for (int i = 0; i < 100; i += 7)
    for (int j = 0; j < 100; j += 7) {
      double x = 0.05 * i, y = 0.05 * j;
      CHECK(gamma_fn(x + y) <= gamma_fn(x) + gamma_fn(y) + 1e-12);
    }
}

TEST_CASE("peeling grid") {
  auto g = build_grid(0.1, 0.4, 2.0);
  CHECK(g.l == 2);
  CHECK(g.rho[1] == doctest::Approx(0.2));
  CHECK(g.rho[2] == doctest::Approx(0.4));
  auto h = build_grid(0.1, 0.5, 2.0);
  CHECK(h.l == 3);
  CHECK(h.lo(3) == doctest::Approx(0.4));
  CHECK(h.hi(3) == doctest::Approx(0.5));
  CHECK(build_grid(0.01, 0.25, 2.0).l == 5);
}

TEST_CASE("variance proxy") {
  double rho = 0.3;
  CHECK(variance_proxy(rho, 0.0, rho * rho, VarPolicy::Min) == doctest::Approx(rho * rho));
  CHECK(variance_proxy(rho, rho * rho / 16, 10.0, VarPolicy::Min) == doctest::Approx(2 * rho * rho));
  CHECK(variance_proxy(rho, 0.01, 0.5, VarPolicy::Envelope) == doctest::Approx(0.5));
  CHECK(variance_proxy(rho, 0.01, 0.5, VarPolicy::PsiBased) == doctest::Approx(rho * rho + 0.16));
}

TEST_CASE("s_j strategies") {
  auto g = build_grid(1.0 / 256, 1.0, 2.0);
  REQUIRE(g.l == 8);
  auto c = sj_strategy(g, "constant-log-l", 3.0);
  REQUIRE(c.s.size() == 8);
  for (double s : c.s) CHECK(s == doctest::Approx(3.0 * std::log(8.0)));
  double sum = 0;
  for (double s : c.s) sum += std::exp(-s);
  CHECK(sum <= 1.0 / 64 + 1e-12);
  CHECK(c.sum_bound >= sum - 1e-12);

  auto geo = sj_strategy(g, "geometric", 4.0, 2.0);
  CHECK(geo.prob_bound == doctest::Approx((4.0 / 3.0) * 0.25 * std::exp(-1.0)));

  auto cu = sj_strategy(g, "custom", 0.0, 2.0, 1.0, {1, 2, 3, 4, 5, 6, 7, 8});
  CHECK(cu.s[2] == 3.0);
}

TEST_CASE("tau radius") {
  auto g = build_grid(0.25, 0.5, 2.0);
  REQUIRE(g.l == 1);
  std::vector<SliceStats> st{{0.0, 0.25, -1.0}};
  auto t = tau_radius(g, NormWeight::power(1.0), st, {5.0}, 10);
  CHECK_FALSE(t.poisson[0]);
  CHECK(t.value == doctest::Approx(2.0 * std::sqrt(5.0 * 0.25 / (10 * 0.25))));

  // nonincreasing in n, nondecreasing in s
  auto g4 = build_grid(0.01, 0.5, 2.0);
  std::vector<SliceStats> s4(g4.l);
  for (int j = 1; j <= g4.l; ++j) s4[j - 1] = {0.0, 2 * g4.hi(j) * g4.hi(j), -1.0};
  double prev = kInf;
  for (long n : {10L, 100L, 1000L, 10000L}) {
    double v = tau_radius(g4, NormWeight::power(1.0), s4, std::vector<double>(g4.l, 3.0), n).value;
    CHECK(v <= prev);
    prev = v;
  }
  prev = 0;
  for (double s : {0.5, 1.0, 5.0, 50.0, 500.0}) {
    double v = tau_radius(g4, NormWeight::power(1.0), s4, std::vector<double>(g4.l, s), 100).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("single-slice certificate") {
  auto g = build_grid(0.25, 0.5, 2.0);
  double s = std::log(20.0);
  std::vector<SliceStats> st{{0.0, 0.25, -1.0}};
  CertificateQuery qy;
  qy.n = 100;
  qy.s = {s};
  auto b = concentration_certificate(g, NormWeight::power(1.0), st, qy);
  CHECK(b.center == 0.0);
  CHECK(b.radius == doctest::Approx(2.0 * std::sqrt(s / 100.0)));
  CHECK(b.prob == doctest::Approx(0.05));
}

TEST_CASE("trivial subdivision matches the plain certificate") {
  auto g = build_grid(0.02, 0.5, 2.0);
  std::vector<SliceStats> st;
  std::vector<std::vector<SliceStats>> sub;
  std::vector<std::vector<double>> ss;
  std::vector<double> s;
  for (int j = 1; j <= g.l; ++j) {
    SliceStats x{0.01 * g.hi(j), g.hi(j) * g.hi(j), -1.0};
    st.push_back(x);
    sub.push_back({x});
    s.push_back(2.0 + j);
    ss.push_back({2.0 + j});
  }
  for (Mode m : {Mode::Shape, Mode::Explicit}) {
    CertificateQuery qy;
    qy.n = 500;
    qy.s = s;
    qy.mode = m;
    auto a = concentration_certificate(g, NormWeight::power(1.0), st, qy);
    auto b = concentration_certificate_subdivided(g, NormWeight::power(1.0), sub, ss, 500, 1.0, m);
    CHECK(a.radius == b.radius);
    CHECK(a.center == b.center);
    CHECK(a.prob == b.prob);
  }
}

TEST_CASE("single layer bound") {
  SingleLayerInput in;
  in.phi = NormWeight::power(1.0);
  in.psi_tilde = [](double) { return 0.0; };
  in.n = 100;
  in.r = 0.3;
  in.delta = 0.6;
  in.s = 1.0;
  auto b = single_layer_bound(in);
  CHECK(b.radius == doctest::Approx(2.0 * std::sqrt(1.0 / 100)));
  in.lambda = 0.5;
  in.psi_tilde = [](double t) { return t * t; };
  CHECK_THROWS_AS(single_layer_bound(in), PremiseError);
}

TEST_CASE("t^2 ratio bound") {
  long n = 1000;
  double r = 0.1;
  auto b = ratio_bound_t2(n, r, 0.5, 2.0, 0.0, n * r * r);
  CHECK(b.lower.radius == doctest::Approx(2.0));
  CHECK(b.upper.radius == doctest::Approx(4.0));
  auto p = ratio_bound_t2(n, r, 0.5, 2.0, 0.0, 100 * n * r * r);
  CHECK(p.lower.regime.find("poisson") != std::string::npos);
  // monotone in s
  double prev_r = 0, prev_p = 2;
  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    auto x = ratio_bound_t2(n, r, 0.5, 2.0, 0.01, s);
    CHECK(x.upper.radius >= prev_r);
    CHECK(x.upper.prob <= prev_p);
    prev_r = x.upper.radius;
    prev_p = x.upper.prob;
  }
}

TEST_CASE("c_q_alpha against a dense grid") {
  double want = 0;
  const int N = 1000000;
  for (int k = 1; k <= N; ++k) {
    double u = 2.0 * k / N;
    want = std::max(want, u * std::log(std::log(4.0 / u) / std::log(2.0)));
  }
  double got = c_q_alpha(2.0, 0.5, 1.0);
  CHECK(got >= want - 1e-9);
  CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("tail bounds") {
  long n = 100;
  double s2 = 0.01;
  auto b = bousquet_tail(n, s2, 6 * n * s2, 26 * n * s2);
  CHECK(b.threshold <= 41 * n * s2 + 1e-12);
  CHECK(b.probability == doctest::Approx(std::exp(-26 * n * s2)));
  CHECK(bernstein_tail(10, 0.25, 0.0).probability == 1.0);

  // exact upper tail of a centered Binomial(20, 1/2) sum
  std::vector<double> pmf(21);
  for (int k = 0; k <= 20; ++k) pmf[k] = std::exp(std::lgamma(21) - std::lgamma(k + 1) - std::lgamma(21 - k) - 20 * std::log(2.0));
  for (double t : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0}) {
    double tail = 0;
    for (int k = 0; k <= 20; ++k)
      if (k - 10.0 >= t - 1e-12) tail += pmf[k];
    CHECK(bernstein_tail(20, 0.25, t, 0.5).probability >= tail);
  }
}

TEST_CASE("alexander precheck") {
  std::vector<double> ns;
  for (double n = 10; n <= 1e6; n *= 1.5) ns.push_back(n);
  auto ok = alexander_precheck(
      ns, [](double n) { return std::sqrt(std::log(std::log(n))); }, [](double n) { return 1 / std::sqrt(n); },
      [](double) { return 0.25; }, [](double n) { return 1 / std::log(n); }, NormWeight::power(1.0));
  CHECK(ok.pass);
  auto bad = alexander_precheck(
      ns, [](double n) { return n * n; }, [](double n) { return 1 / std::sqrt(n); }, [](double) { return 0.25; },
      [](double n) { return 1 / std::log(n); }, NormWeight::power(1.0));
  CHECK_FALSE(bad.pass);
  auto sq = alexander_precheck(
      ns, [](double) { return 1.0; }, [](double n) { return 1 / std::sqrt(n); }, [](double) { return 0.25; },
      [](double n) { return 1 / std::log(n); }, NormWeight::power(2.0));
  CHECK_FALSE(sq.pass);
}

TEST_CASE("t ratio bound") {
  long n = 10000;
  auto b = ratio_bound_t1(n, 0.1, 0.5, 2.0, 0.05, 2.0, 2.0);
  double core = 2.0 + 2.0 * std::log(std::log2(2.0 * 0.5 / 0.1));
  CHECK(b.upper.radius == doctest::Approx(2 * std::sqrt(17.0) * std::sqrt(core / n)));
  CHECK(b.upper.prob == doctest::Approx(2 * std::exp(-2.0)));
  auto one = ratio_bound_t1(n, 0.25, 0.5, 2.0, 0.0, 2.0, 2.0);
  for (const auto& c : one.upper.constants)
    if (c.name == "c_q") CHECK(c.value == 0.0);
}
