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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ratiolab/sim.hpp"

using namespace ratiolab;

namespace {

SampleBatch line(std::vector<double> x) {
  SampleBatch b;
  b.law = Law::uniform1d();
  std::sort(x.begin(), x.end());
  b.n = static_cast<long>(x.size());
  b.x = std::move(x);
  return b;
}

std::vector<double> uniforms(std::uint64_t key, int n) {
  CounterRng r(key);
  std::vector<double> v(n);
  for (auto& x : v) x = r.uniform();
  return v;
}

// counts of sorted x in [a, b] and in [0, t)
long count_closed(const std::vector<double>& x, double a, double b) {
  return std::upper_bound(x.begin(), x.end(), b) - std::lower_bound(x.begin(), x.end(), a);
}

// |F_n(t) - t| / phi(sqrt t) on a dense grid plus both one-sided values at every sample point
double halfline_oracle(const std::vector<double>& x, double lo, double hi, const NormWeight& phi, int grid) {
  double n = static_cast<double>(x.size()), best = 0;
  auto val = [&](double t, double cnt) { return std::fabs(cnt / n - t) / phi(std::sqrt(t)); };
  for (int k = 1; k <= grid; ++k) {
    double t = lo + (hi - lo) * k / grid;
    best = std::max(best, val(t, double(std::upper_bound(x.begin(), x.end(), t) - x.begin())));
  }
  // right limit at the open lower end
  if (lo > 0) best = std::max(best, val(lo, double(std::upper_bound(x.begin(), x.end(), lo) - x.begin())));
  for (size_t i = 0; i < x.size(); ++i) {
    double t = x[i];
    if (t > lo && t <= hi) {
      best = std::max(best, val(t, double(std::upper_bound(x.begin(), x.end(), t) - x.begin())));
      best = std::max(best, val(t, double(std::lower_bound(x.begin(), x.end(), t) - x.begin())));
    }
  }
  return best;
}

double intervals_oracle(const std::vector<double>& x, double r, double delta, const NormWeight& phi, int grid) {
  std::vector<double> ends;
  for (int k = 0; k <= grid; ++k) ends.push_back(double(k) / grid);
  const double eps = 1e-12;
  for (double v : x)
    for (double e : {v, v - eps, v + eps, v + r * r, v - r * r, v + delta * delta, v - delta * delta,
                     v + r * r + eps, v - r * r - eps})
      if (e >= 0 && e <= 1) ends.push_back(e);
  std::sort(ends.begin(), ends.end());
  double n = static_cast<double>(x.size()), best = 0;
  for (size_t i = 0; i < ends.size(); ++i)
    for (size_t j = i; j < ends.size(); ++j) {
      double len = ends[j] - ends[i];
      if (len <= r * r || len > delta * delta) continue;
      double v = std::fabs(count_closed(x, ends[i], ends[j]) / n - len) / phi(std::sqrt(len));
      best = std::max(best, v);
    }
  return best;
}

}  // namespace

TEST_CASE("samples are deterministic") {
  auto a = draw_sample(Law::uniform1d(), 3, 42), b = draw_sample(Law::uniform1d(), 3, 42);
  CHECK(a.x == b.x);
  CHECK(std::is_sorted(a.x.begin(), a.x.end()));
  auto c = draw_sample(Law::coord_c0(20), 500, 1);
  REQUIRE(c.counts.size() == 20);
  CHECK(c.counts[0] == 500);
  auto e = draw_sample(Law::classification([](double) { return 1.0; }), 100, 3);
  for (double y : e.y) CHECK(y == 1.0);
  CounterRng rng(8);
  auto counts = draw_counts(rng, {0.1, 0.2, 0.3, 0.4}, 1000);
  CHECK(std::accumulate(counts.begin(), counts.end(), 0) == 1000);
}

TEST_CASE("half-line supremum") {
  CHECK(sup_halfline(line({0.3}), 0.0, 0.5, NormWeight::power(0.0)).value == doctest::Approx(0.7));
  auto two = line({0.1, 0.4});
  double got = sup_halfline(two, 0.25, 0.5, NormWeight::power(1.0)).value;
  CHECK(std::abs(got - halfline_oracle(two.x, 0.25, 0.5, NormWeight::power(1.0), 1000000)) < 1e-6);
  // sawtooth grid
  std::vector<double> g;
  for (int k = 1; k <= 10; ++k) g.push_back(k / 10.0);
  CHECK(sup_halfline(line(g), 0.0, 1.0, NormWeight::power(0.0)).value == doctest::Approx(0.1));

  for (int i = 0; i < 20; ++i) {
    int n = 3 + i * 2;
    auto b = line(uniforms(100 + i, n));
    auto phi = NormWeight::power(1.0);
    auto s = sup_halfline(b, 1.0 / n, 0.5, phi);
    CHECK(std::abs(s.value - halfline_oracle(b.x, 1.0 / n, 0.5, phi, 200000)) < 1e-6);
    // the witness reproduces the value
    double t = s.witness[0], fn = s.witness[1];
    CHECK(std::abs(std::fabs(fn - t) / phi(std::sqrt(t)) - s.value) < 1e-12);
    // enlarging the range never decreases the sup
    CHECK(sup_halfline(b, 0.5 / n, 0.5, phi).value >= s.value);
    // never above the two-sided KS statistic
    double ks = 0;
    for (int k = 0; k < n; ++k) ks = std::max({ks, (k + 1.0) / n - b.x[k], b.x[k] - double(k) / n});
    CHECK(sup_halfline(b, 0.0, 0.5, NormWeight::power(0.0)).value <= ks + 1e-15);
  }
}

TEST_CASE("box supremum") {
  auto b1 = line({0.05, 0.2, 0.3, 0.7});
  b1.law = Law::uniform_box(1);
  auto h = line({0.05, 0.2, 0.3, 0.7});
  auto phi = NormWeight::power(1.0);
  CHECK(sup_box(b1, 0.1, std::sqrt(0.5), phi).value == doctest::Approx(sup_halfline(h, 0.01, 0.5, phi).value));

  SampleBatch b2;
  b2.law = Law::uniform_box(2);
  b2.n = 3;
  b2.x = {0.2, 0.7, 0.5, 0.3, 0.9, 0.6};
  double got = sup_box(b2, 0.0, 1.0, NormWeight::power(0.0)).value;
  double want = 0;
  const int m = 2000;
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      double u = double(i) / m, v = double(j) / m;
      int c = 0;
      for (int k = 0; k < 3; ++k) c += (b2.x[2 * k] <= u && b2.x[2 * k + 1] <= v);
      want = std::max(want, std::fabs(c / 3.0 - u * v));
    }
  CHECK(std::abs(got - want) < 1e-3);

  SampleBatch empty;
  empty.law = Law::uniform_box(2);
  CHECK(sup_box(empty, 0.1, 0.6, NormWeight::power(0.0)).value == doctest::Approx(0.36));

  for (int i = 0; i < 10; ++i) {
    auto d = draw_sample(Law::uniform_box(2), 6, 500 + i);
    double a = sup_box(d, 0.05, 0.7, phi).value, b = sup_box_bruteforce(d, 0.05, 0.7, phi).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
  }
}

TEST_CASE("interval supremum") {
  CHECK(sup_intervals(line({0.5}), 0.0, 1.0, NormWeight::power(0.0)).value == doctest::Approx(1.0));
  SampleBatch none;
  none.law = Law::uniform1d();
  CHECK(sup_intervals(none, 0.0, 0.5, NormWeight::power(0.0)).value == doctest::Approx(0.25));
  CHECK(sup_intervals_quadratic(none, 0.0, 0.5, NormWeight::power(0.0)).value == doctest::Approx(0.25));
  CHECK(sup_halfline(none, 0.0, 0.5, NormWeight::power(1.0)).value == doctest::Approx(std::sqrt(0.5)));

  auto phi = NormWeight::power(1.0);
  auto four = line({0.12, 0.33, 0.41, 0.86});
  double got = sup_intervals(four, 0.25, 0.5, phi).value;
  CHECK(std::abs(got - intervals_oracle(four.x, 0.25, 0.5, phi, 2000)) < 1e-6);

  for (int i = 0; i < 20; ++i) {
    auto b = line(uniforms(300 + i, 3 + i % 8));
    double r = 0.1, delta = 0.6;
    auto s = sup_intervals(b, r, delta, phi);
    CHECK(s.value == doctest::Approx(sup_intervals_quadratic(b, r, delta, phi).value).epsilon(1e-12));
    CHECK(std::abs(s.value - intervals_oracle(b.x, r, delta, phi, 600)) < 1e-6);
    CHECK(sup_intervals(b, 0.05, delta, phi).value >= s.value);
  }
}

TEST_CASE("c0 supremum") {
  SampleBatch b;
  b.law = Law::coord_c0(30);
  b.n = 100;
  b.counts.assign(30, 0);
  b.counts[0] = 100;
  CHECK(sup_c0(b, 2, 30, NormWeight::power(2.0)).value == doctest::Approx(1.0));
  CHECK(sup_c0(b, 1, 1, NormWeight::power(2.0)).value == doctest::Approx(0.0));
  CHECK(sup_c0(b, 1, 30, NormWeight::power(2.0)).value == doctest::Approx(1.0));
}

TEST_CASE("monotone supremum") {
  for (int i = 0; i < 5; ++i) {
    auto b = line(uniforms(700 + i, 5 + 3 * i));
    double n = static_cast<double>(b.n), ks = 0;
    for (long k = 0; k < b.n; ++k) ks = std::max(ks, (n - k) / n - (1.0 - b.x[k]));
    auto s = sup_monotone(b, 1.0);
    CHECK(s.value == doctest::Approx(ks).epsilon(1e-9));
  }
  // brute force over step functions with 12 jump sites and 8 levels
  auto b = line(uniforms(900, 5));
  double delta = 0.6;
  std::vector<double> sites(12);
  for (int k = 0; k < 12; ++k) sites[k] = (k + 0.5) / 12.0;
  for (double x : b.x) sites.push_back(x);
  std::sort(sites.begin(), sites.end());
  sites.resize(12);
  double brute = 0;
  std::vector<int> lv(12, 0);
  std::function<void(int, int)> rec = [&](int k, int from) {
    if (k == 12) {
      double pg2 = 0, pg = 0, png = 0;
      for (int j = 0; j < 12; ++j) {
        double v = lv[j] / 7.0, w = (j + 1 < 12 ? sites[j + 1] : 1.0) - sites[j];
        pg2 += v * v * w;
        pg += v * w;
      }
      if (pg2 > delta * delta) return;
      for (double x : b.x) {
        int j = int(std::upper_bound(sites.begin(), sites.end(), x) - sites.begin()) - 1;
        if (j >= 0) png += lv[j] / 7.0;
      }
      brute = std::max(brute, png / b.n - pg);
      return;
    }
    for (int l = from; l < 8; ++l) {
      lv[k] = l;
      rec(k + 1, l);
    }
  };
  rec(0, 0);
  auto s = sup_monotone(b, delta);
  CHECK(s.value >= brute - 1e-6);
  CHECK(s.gap >= 0.0);
}

TEST_CASE("replicates and summaries") {
  auto fn = [](long rep, std::uint64_t key) {
    auto b = draw_sample(Law::uniform1d(), 200 + rep, key);
    return sup_halfline(b, 0.0, 0.5, NormWeight::power(1.0)).value;
  };
  auto a = run_replicates_serial(40, 77, fn);
  auto p = run_replicates(40, 77, 4, fn);
  REQUIRE(a.size() == p.size());
  CHECK(std::equal(a.begin(), a.end(), p.begin()));
  CHECK(quantile7({1, 2, 3, 4}, 0.9) == doctest::Approx(3.7));
  auto s = summarize({1, 2, 3, 4});
  CHECK(s.median == doctest::Approx(2.5));
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}

TEST_CASE("psi and beta estimates") {
  auto g = build_grid(0.05, std::sqrt(0.5), 2.0);
  auto one = estimate_psi_beta(FunctionClass::half_line(), g, NormWeight::power(1.0), 500, 1, 9);
  for (const auto& s : one.slices) {
    REQUIRE(s.values.size() == 1);
    CHECK(s.mean == s.values[0]);
    CHECK(s.median == s.values[0]);
  }
  long n = 1000;
  auto gh = build_grid(1.0 / std::sqrt(double(n)), std::sqrt(0.5), 2.0);
  auto est = estimate_psi_beta(FunctionClass::half_line(), gh, NormWeight::power(1.0), n, 100, 4);
  for (int j = 1; j <= gh.l; ++j)
    CHECK(est.slices[j - 1].mean <= 4 * gh.hi(j) / std::sqrt(double(n)) + 3 * est.slices[j - 1].stderr_);

  // tiny dictionary against exact enumeration
  FiniteDict d{{0.2, 0.3, 0.5}, {{1, 0, 0}, {1, 1, 0}}};
  auto cls = FunctionClass::finite_dict(d);
  auto gd = build_grid(0.3, 0.8, 2.0);
  auto ed = estimate_psi_beta(cls, gd, NormWeight::power(1.0), 5, 4000, 21);
  auto law0 = exact_small_oracle(d.p, 5, [](const std::vector<int>& c, int nn) { return std::fabs(c[0] / double(nn) - 0.2); });
  auto law1 = exact_small_oracle(d.p, 5, [](const std::vector<int>& c, int nn) {
    return std::fabs((c[0] + c[1]) / double(nn) - 0.5);
  });
  CHECK(std::abs(ed.slices[0].mean - law0.expectation()) <= 3 * ed.slices[0].stderr_);
  CHECK(std::abs(ed.slices[1].mean - law1.expectation()) <= 3 * ed.slices[1].stderr_);
}

TEST_CASE("exact oracle") {
  auto law = exact_small_oracle({0.5, 0.5}, 2, [](const std::vector<int>& c, int n) { return std::fabs(c[0] / double(n) - 0.5); });
  REQUIRE(law.values.size() == 2);
  CHECK(law.values[0] == doctest::Approx(0.0));
  CHECK(law.values[1] == doctest::Approx(0.5));
  CHECK(law.probs[0] == doctest::Approx(0.5));
  CHECK(law.expectation() == doctest::Approx(0.25));

  double p = 0.3;
  auto ratio = exact_small_oracle({p, 1 - p}, 3, [&](const std::vector<int>& c, int n) {
    return std::fabs(c[0] / double(n) / p - 1.0);
  });
  double e = 0;
  for (int k = 0; k <= 3; ++k) {
    double pk = std::tgamma(4) / (std::tgamma(k + 1) * std::tgamma(4 - k)) * std::pow(p, k) * std::pow(1 - p, 3 - k);
    e += pk * std::fabs(k / 3.0 / p - 1.0);
  }
  CHECK(ratio.expectation() == doctest::Approx(e).epsilon(1e-12));
  CHECK(ratio.tail_ge(0.0) == doctest::Approx(1.0));

  FiniteDict d{{0.25, 0.25, 0.5}, {{0.7, 0.7, 0.7}}};
  auto stat = dict_weighted_sup(FunctionClass::finite_dict(d), {1.0}, {1});
  auto c = exact_small_oracle(d.p, 4, stat);
  REQUIRE(c.values.size() == 1);
  CHECK(c.values[0] == doctest::Approx(0.0));
  CHECK(c.probs[0] == doctest::Approx(1.0));
}

TEST_CASE("clt weight must grow faster than t") {
  CltPremiseInput in;
  in.weight = {"t", [](double t) { return t; }};
  in.r_n = [](double n) { return 1 / std::sqrt(n); };
  in.q_n = [](double) { return 2.0; };
  in.n_grid = {1000};
  in.delta_grid = {0.1};
  CHECK_THROWS_AS(clt_premise_check(in), DomainError);
}
