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

#include "ratiolab/classes.hpp"
#include "ratiolab/rng.hpp"

using namespace ratiolab;

TEST_CASE("sigma of members") {
  CHECK(sigma_of(FunctionClass::half_line(), {{0.25}}) == doctest::Approx(0.5));
  CHECK(sigma_of(FunctionClass::coord_c0(), {{kE}}) == doctest::Approx(1.0 / kE));
  CHECK(sigma_of(FunctionClass::intervals(), {{0.2, 0.6}}) == doctest::Approx(std::sqrt(0.4)));
  CHECK(sigma_of(FunctionClass::box_cdf(2), {{0.5, 0.5}}) == doctest::Approx(0.5));
  FiniteDict d{{0.2, 0.3, 0.5}, {{3.0, 3.0, 3.0}, {1.0, 0.0, 0.0}}};
  auto fd = FunctionClass::finite_dict(d, SigmaConvention::SqrtVariance);
  CHECK(sigma_of(fd, {{0}}) == doctest::Approx(0.0));
  CHECK(sigma_of(fd, {{1}}) == doctest::Approx(std::sqrt(0.2 * 0.8)));
}

TEST_CASE("monotone envelope") {
  auto m = FunctionClass::monotone_unit();
  CHECK(slice_envelope_norm(m, {0.0, 1.0}).norm == doctest::Approx(1.0).epsilon(1e-7));
  double d = std::exp(-0.5);
  double nrm = slice_envelope_norm(m, {0.0, d}).norm;
  CHECK(nrm * nrm == doctest::Approx(2.0 / kE).epsilon(1e-7));
  for (int k = 1; k <= 20; ++k) {
    double delta = 0.05 * k;
    double v = slice_envelope_norm(m, {0.0, delta}).norm;
    CHECK(std::abs(v * v - delta * delta * std::log(kE / (delta * delta))) < 1e-6);
  }
}

TEST_CASE("half-line envelope and capacity") {
  auto h = FunctionClass::half_line();
  for (double u : {0.01, 0.1, 0.3, 0.7}) {
    CHECK(slice_envelope_norm(h, {u / 2, u}).norm == doctest::Approx(u));
    CHECK(capacity(h, u, 2.0, kE, 2.0) == doctest::Approx(kE * kE));
  }
}

TEST_CASE("envelope norm is nondecreasing in the upper end") {
  CounterRng rng(5);
  std::vector<FunctionClass> classes{FunctionClass::half_line(), FunctionClass::intervals(),
                                     FunctionClass::box_cdf(2), FunctionClass::monotone_unit()};
  for (const auto& c : classes)
    for (int i = 0; i < 50; ++i) {
      double a = 0.01 + 0.6 * rng.uniform(), b = 0.01 + 0.6 * rng.uniform();
      if (a > b) std::swap(a, b);
      CHECK(slice_envelope_norm(c, {0.0, a}).norm <= slice_envelope_norm(c, {0.0, b}).norm + 1e-9);
    }
}

TEST_CASE("box capacity growth") {
  auto b = FunctionClass::box_cdf(2);
  double t = 1e-4;
  double g1 = capacity(b, t, 2.0, kE, 3.0), g2 = capacity(b, t / 4, 2.0, kE, 3.0);
  double ratio = std::pow(g2 / g1, 2.0 / 3.0);
  double want = std::log(4.0 / t) / std::log(1.0 / t);
  CHECK(ratio == doctest::Approx(want).epsilon(0.1));
}

TEST_CASE("monotone capacity") {
  // the slice (1/2, 1] contains g = 1, so its envelope is 1
  auto m = FunctionClass::monotone_unit();
  CHECK(slice_envelope_norm(m, {0.5, 1.0}).norm == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(capacity(m, 1.0, 2.0, kE, 1.0) == doctest::Approx(kE).epsilon(1e-7));
}

// Union of C delta C0 over all grid intervals C with |C delta C0| <= delta,
// marked on cells of width 1/m.
double brute_union(double c0a, double c0b, double delta, int m) {
  std::vector<char> cov(m, 0);
  for (int i = 0; i <= m; ++i)
    for (int j = i; j <= m; ++j) {
      double a = double(i) / m, b = double(j) / m;
      double inter = std::max(0.0, std::min(b, c0b) - std::max(a, c0a));
      double sd = (b - a) + (c0b - c0a) - 2 * inter;
      if (sd > delta + 1e-12) continue;
      for (int k = 0; k < m; ++k) {
        double x = (k + 0.5) / m;
        bool inC = x >= a && x <= b, in0 = x >= c0a && x <= c0b;
        if (inC != in0) cov[k] = 1;
      }
    }
  double s = 0;
  for (char c : cov) s += c;
  return s / m;
}

TEST_CASE("local capacity") {
  // growing or shrinking either end by 0.1 reaches [0.1, 0.3] and [0.5, 0.7]
  auto lc = local_capacity_tau(FunctionClass::intervals(), {{0.2, 0.6}}, 0.1);
  CHECK(lc.union_mass == doctest::Approx(0.4));
  CHECK(lc.tau == doctest::Approx(4.0));
  CHECK(brute_union(0.2, 0.6, 0.1, 200) == doctest::Approx(0.4));
  auto lh = local_capacity_tau(FunctionClass::half_line(), {{0.3}}, 0.05);
  CHECK(lh.tau == doctest::Approx(2.0));
  auto full = local_capacity_tau(FunctionClass::intervals(), {{0.2, 0.6}}, 1.0);
  CHECK(full.tau <= 1.0 + 1e-12);

  CounterRng rng(11);
  const int m = 200;
  for (int i = 0; i < 20; ++i) {
    double a = rng.uniform(), b = rng.uniform();
    if (a > b) std::swap(a, b);
    a = std::round(a * m) / m;
    b = std::round(b * m) / m;
    double delta = std::round((0.02 + 0.2 * rng.uniform()) * m) / m;
    auto r = local_capacity_tau(FunctionClass::intervals(), {{a, b}}, delta);
    CHECK(std::abs(r.union_mass - brute_union(a, b, delta, m)) <= 2.0 / m + 1e-12);
  }
}

TEST_CASE("w parameter") {
  auto g = [](double) { return kE; };
  CHECK(w_parameter(g, 0.25, 0.5, 2.0) == doctest::Approx(1.0));
  // direct loop over j, both branches
  auto b = FunctionClass::box_cdf(2);
  auto gq = [&](double t) { return capacity(b, t, 2.0, kE, 3.0); };
  double r = 1e-3, delta = 0.5, q = 2.0, want = -kInf;
  for (double rho = r; rho < delta * q; rho *= q) {
    double lhs = std::log(std::log(delta * q / rho) / std::log(q));
    want = std::max({want, lhs, std::log(gq(rho))});
  }
  CHECK(w_parameter(gq, r, delta, q) == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("entropy models") {
  CHECK(entropy_eval(EntropyModel::vc_type(kE, 1.0), 1.0) == doctest::Approx(1.0));
  CHECK(entropy_eval(EntropyModel::reg_varying(1.0, 1.0), 0.4) == 0.0);
  CounterRng rng(3);
  auto vc = EntropyModel::vc_type(3.0, 2.5);
  for (int i = 0; i < 10; ++i) {
    double x = 0.5 + 20 * rng.uniform();
    CHECK(entropy_eval(vc, x) == 2.5 * std::log(3.0 * x));
  }
  double A = kE, F = 0.5, tau = 0.1;
  double ax = A * F / tau;
  double want = ax * (std::pow(std::log(ax), 2) + std::log(ax) * std::log(1.0 / (A * F)));
  CHECK(entropy_eval(EntropyModel::vc_major(A, F), F / tau) == doctest::Approx(want));
}

TEST_CASE("entropy constants") {
  auto c = entropy_constants(EntropyModel::vc_type(kE, 1.0));
  CHECK(c.C_H == doctest::Approx(2.0));
  CHECK(c.D_H == doctest::Approx(2.0));
  CHECK(c.A_H == doctest::Approx(kE));
  auto r = entropy_constants(EntropyModel::reg_varying(1.0, 1.0));
  CHECK(r.D_H >= 2.0 - 1e-6);
  CHECK(r.C_H >= 1.0);
  CHECK(r.A_H >= 1.0);
  CHECK_THROWS_AS(entropy_constants(EntropyModel::reg_varying(2.5, 1.0)), DomainError);
}
