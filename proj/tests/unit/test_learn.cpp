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
#include <vector>

#include "ratiolab/learn.hpp"

using namespace ratiolab;

namespace {

CdfView random_steps(CounterRng& rng) {
  std::vector<double> a(4), v(4);
  for (auto& x : a) x = 0.05 + 0.9 * rng.uniform();
  for (auto& x : v) x = 0.05 + 0.95 * rng.uniform();
  std::sort(a.begin(), a.end());
  std::sort(v.begin(), v.end());
  return CdfView::steps(a, v);
}

}  // namespace

TEST_CASE("multiplicative Levy distance") {
  auto F = CdfView::continuous([](double t) { return std::clamp(t, 0.0, 1.0); });
  auto G = CdfView::continuous([](double t) { return std::clamp(2 * t, 0.0, 1.0); });
  CHECK(mult_levy_distance(F, F, 0.0, 0.5) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(std::abs(mult_levy_distance(F, G, 0.0, 0.5) - std::log(std::sqrt(2.0))) < 1e-5);
  auto step = CdfView::steps({0.5}, {1.0});
  auto zero = CdfView::continuous([](double) { return 0.0; });
  CHECK(std::isinf(mult_levy_distance(step, zero, 0.0, 1.0)));
  CHECK(mult_levy_distance(F, G, 0.6, 0.4) == 0.0);

  CounterRng rng(21);
  for (int i = 0; i < 20; ++i) {
    auto a = random_steps(rng), b = random_steps(rng), c = random_steps(rng);
    double ab = mult_levy_distance(a, b, 0.1, 0.9), ba = mult_levy_distance(b, a, 0.1, 0.9);
    double bc = mult_levy_distance(b, c, 0.1, 0.9), ac = mult_levy_distance(a, c, 0.1, 0.9);
    CHECK(ab == ba);
    CHECK(mult_levy_distance(a, a, 0.1, 0.9) == doctest::Approx(0.0).epsilon(1e-6));
    if (std::isfinite(ab) && std::isfinite(bc)) CHECK(ac <= ab + bc + 3e-6);
  }
}

TEST_CASE("margin cutoff") {
  CHECK(margin_cutoff([](double) { return 1.0; }, 1.0, 8, 1.0) == doctest::Approx(0.125));
  CHECK(std::isinf(margin_cutoff([](double) { return 0.0; }, 1.0, 8, 1.0)));

  // empirical cdf of 100 draws against a dense scan of the definition
  CounterRng rng(5);
  std::vector<double> s(100);
  for (auto& x : s) x = rng.uniform();
  auto Fn = CdfView::empirical(s);
  long n = 1000;
  double lambda = 2.0, alpha = 1.0;
  double got = margin_cutoff(Fn.F, lambda, n, alpha);
  double scan = kInf;
  const int N = 1000000;
  for (int k = 0; k <= N; ++k) {
    double d = 1.0 / n + (1.0 - 1.0 / n) * k / N;
    if (std::pow(d, 2 * alpha / (2 + alpha)) * Fn.F(d) >= lambda * std::pow(double(n), -2.0 / (2 + alpha))) {
      scan = d;
      break;
    }
  }
  CHECK(std::abs(got - scan) <= 1.0 / N + 1e-12);

  auto F = [](double t) { return std::pow(std::clamp(t, 0.0, 1.0), 0.7); };
  for (long m : {100L, 1000L, 10000L})
    CHECK(margin_cutoff(F, 1.0, 10 * m, 1.0) <= margin_cutoff(F, 1.0, m, 1.0));
  CHECK(margin_cutoff(F, 2.0, 1000, 1.0) >= margin_cutoff(F, 1.0, 1000, 1.0));
}

TEST_CASE("margin experiment shrinks with lambda") {
  MarginExperimentConfig cfg;
  cfg.n = 2000;
  cfg.reps = 10;
  cfg.seed = 3;
  cfg.setup.D = 4.0;
  cfg.lambda_n = std::log(2000.0);
  auto a = margin_experiment(ScoreFamily::identity(), cfg);
  cfg.lambda_n *= 4;
  auto b = margin_experiment(ScoreFamily::identity(), cfg);
  REQUIRE(a.sup_m.values.size() == b.sup_m.values.size());
  for (size_t i = 0; i < a.sup_m.values.size(); ++i) CHECK(b.sup_m.values[i] <= a.sup_m.values[i] + 1e-12);
}

TEST_CASE("gamma_n") {
  long n = 1000;
  double r = 0.01, s = 2.0;
  CHECK(gamma_n(r, s, n, 0.0, 0.0) == doctest::Approx(2 * s / (n * r * std::log(2.0))));
  CHECK(gamma_n(r, n * r, n, 0.0, 1.0) == doctest::Approx(2.0 / std::log(2.0)));
  CHECK(gamma_n(r, n * r, n, 0.0, 1.0) == doctest::Approx(2.885).epsilon(1e-3));
  CounterRng rng(2);
  for (int i = 0; i < 20; ++i) {
    double rr = 0.001 + rng.uniform() * 0.1, ss = 0.1 + 5 * rng.uniform(), b = 0.01 * rng.uniform(), D = rng.uniform();
    long m = 100 + static_cast<long>(1e4 * rng.uniform());
    CHECK(gamma_n(rr, ss, 2 * m, b, D) <= gamma_n(rr, ss, m, b, D) + 1e-15);
    CHECK(gamma_n(rr, 1.5 * ss, m, b, D) >= gamma_n(rr, ss, m, b, D) - 1e-15);
  }
}

TEST_CASE("excess risk certificate, constant model") {
  auto p = ErmProblem::constant_model(1.0);
  long n = 10000;
  double s = 3.0;
  auto c = excess_risk_certificate(p, n, s, 2.0);
  REQUIRE(c.feasible);
  CHECK(c.r_star == doctest::Approx(16 * s / n).epsilon(1e-6));
  double prev = kInf;
  for (long m : {1000L, 10000L, 100000L}) {
    double r = excess_risk_certificate(p, m, s, 2.0).r_star;
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("critical radius") {
  for (long n : {10L, 1000L, 100000L}) {
    CHECK(critical_radius([](double) { return kE; }, n) == doctest::Approx(1.0 / n));
    // log(1/r) / r = n, solved by bisection on a log scale
    double lo = 1e-300, hi = 1.0;
    for (int it = 0; it < 3000; ++it) {
      double mid = std::sqrt(lo * hi);
      if (log_e(1.0 / mid) / mid > n) lo = mid; else hi = mid;
    }
    CHECK(std::abs(critical_radius([](double r) { return 1.0 / r; }, n) - hi) < 1e-9);
  }
  CHECK(critical_radius([](double) { return std::sqrt(kE * kE); }, 50) == doctest::Approx(1.0 / 50));
}

TEST_CASE("least squares fits") {
  auto g0 = [](double x) { return 0.5 + 0.1 * cosine_basis(1, x) + 0.05 * cosine_basis(3, x); };
  auto b = draw_sample(Law::regression(g0, 0.0), 200, 8);
  auto f = fit_finite_dim_ls(b, 4);
  CHECK(f.excess <= 1e-10);

  auto noisy = draw_sample(Law::regression([](double) { return 0.5; }, 0.1), 300, 9);
  double ybar = 0;
  for (double y : noisy.y) ybar += y;
  ybar /= noisy.n;
  auto c = fit_finite_dim_ls(noisy, 1);
  CHECK(eval_cosine_fit(c.coef, 0.3) == doctest::Approx(std::clamp(ybar, 0.0, 1.0)).epsilon(1e-12));
  CHECK(c.excess == doctest::Approx((ybar - 0.5) * (ybar - 0.5)).epsilon(1e-9));
}

TEST_CASE("isotonic fits") {
  SampleBatch b;
  b.law = Law::regression([](double) { return 0.5; }, 0.0);
  b.n = 2;
  b.x = {0.2, 0.7};
  b.y = {1.0, 0.0};
  auto f = fit_isotonic(b);
  CHECK(f(0.2) == doctest::Approx(0.5));
  CHECK(f(0.7) == doctest::Approx(0.5));

  b.n = 4;
  b.x = {0.1, 0.3, 0.6, 0.9};
  b.y = {0.1, 0.2, 0.2, 0.8};
  auto g = fit_isotonic(b);
  for (int i = 0; i < 4; ++i) CHECK(g(b.x[i]) == doctest::Approx(b.y[i]));

  auto s = draw_sample(Law::regression([](double x) { return x < 0.5 ? 0.3 : 0.7; }, 0.2), 200, 4);
  auto h = fit_isotonic(s);
  for (size_t k = 1; k < h.values.size(); ++k) CHECK(h.values[k] >= h.values[k - 1]);
  CounterRng rng(6);
  for (int t = 0; t < 100; ++t) {
    double c = rng.uniform(), lo = rng.uniform(), hi = lo + (1 - lo) * rng.uniform();
    double risk = 0;
    for (long i = 0; i < s.n; ++i) {
      double v = s.x[i] < c ? lo : hi;
      risk += (s.y[i] - v) * (s.y[i] - v);
    }
    CHECK(h.emp_risk <= risk / s.n + 1e-12);
  }
}

TEST_CASE("margin classifiers") {
  auto one = draw_sample(Law::classification([](double) { return 1.0; }), 50, 1);
  for (SetClass c : {SetClass::HalfLines, SetClass::Intervals}) {
    auto f = fit_margin_classifier(one, c);
    CHECK(f.emp_error == 0.0);
    CHECK(f.excess == doctest::Approx(0.0));
  }
  std::vector<double> x{0.2, 0.5, 0.8}, y{1, 0, 1};
  auto eta = [](double) { return 0.5; };
  auto f = fit_margin_classifier(x, y, 1, SetClass::HalfLines, eta);
  int best = 3;
  for (double t : {-1.0, 0.2, 0.5, 0.8}) {
    int err = 0;
    for (int i = 0; i < 3; ++i) err += (x[i] <= t) != (y[i] == 1.0);
    best = std::min(best, err);
  }
  CHECK(f.emp_error == doctest::Approx(best / 3.0));
}
