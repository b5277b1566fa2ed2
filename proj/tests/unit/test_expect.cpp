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

#include "ratiolab/expect.hpp"
#include "ratiolab/sim.hpp"

using namespace ratiolab;

namespace {

ExpectationQuery query(long n, double sigma, double env, Mode m, EntropyModel model = EntropyModel::vc_type(kE, 1.0)) {
  ExpectationQuery q;
  q.n = n;
  q.sigma = sigma;
  q.env_norm = env;
  q.mode = m;
  q.model = model;
  return q;
}

// Exact moments of n max_k |P_n f_k - P f_k| on a small dictionary.
ExactLaw dict_sup_law(const FiniteDict& d, int n) {
  std::vector<double> pf(d.funcs.size(), 0.0);
  for (size_t k = 0; k < d.funcs.size(); ++k)
    for (size_t x = 0; x < d.p.size(); ++x) pf[k] += d.p[x] * d.funcs[k][x];
  return exact_small_oracle(d.p, n, [&](const std::vector<int>& c, int nn) {
    double best = 0;
    for (size_t k = 0; k < d.funcs.size(); ++k) {
      double s = 0;
      for (size_t x = 0; x < c.size(); ++x) s += c[x] * (d.funcs[k][x] - pf[k]);
      best = std::max(best, std::fabs(s));
    }
    (void)nn;
    return best;
  });
}

}  // namespace

TEST_CASE("flat regime at sigma = ||F||") {
  auto b = expectation_upper(query(1000, 0.3, 0.3, Mode::Shape, EntropyModel::vc_type(kE, 20.0)));
  CHECK(b.regime == "flat");
  CHECK(b.value == doctest::Approx(std::sqrt(1000.0) * 0.3));
}

TEST_CASE("expectation bound is monotone in n, sigma and ||F||") {
  CounterRng rng(17);
  for (Mode m : {Mode::Shape, Mode::Explicit})
    for (int i = 0; i < 20; ++i) {
      long n = 10 + static_cast<long>(rng.uniform() * 1e5);
      double env = 0.05 + 0.9 * rng.uniform();
      double sigma = env * (0.01 + 0.98 * rng.uniform());
      double base = expectation_upper(query(n, sigma, env, m)).value;
      CHECK(expectation_upper(query(2 * n, sigma, env, m)).value >= base * (1 - 1e-12));
      CHECK(expectation_upper(query(n, std::min(env, sigma * 1.1), env, m)).value >= base * (1 - 1e-12));
      CHECK(expectation_upper(query(n, sigma, env * 1.1, m)).value >= base * (1 - 1e-12));
    }
}

TEST_CASE("moment bound") {
  CounterRng rng(4);
  for (int i = 0; i < 20; ++i) {
    long n = 10 + static_cast<long>(rng.uniform() * 1e4);
    double env = 0.05 + 0.9 * rng.uniform(), sigma = env * (0.01 + 0.98 * rng.uniform());
    auto q = query(n, sigma, env, Mode::Shape);
    CHECK(moment_upper(q, 1.0).value >= expectation_upper(q).value * (1 - 1e-12));
  }
  auto tiny = query(100, 1e-9, 1e-9, Mode::Shape);
  CHECK(moment_upper(tiny, 2.0).value == doctest::Approx(4.0));
}

TEST_CASE("vc-subgraph expectation") {
  long n = 400;
  double g = 0.2, A = 5.0;
  double sn = std::sqrt(double(n));
  double want = std::min(sn * g, std::max({sn * g * std::sqrt(std::log(A)), std::log(std::min(A, sn * g)), 1.0}));
  CHECK(vc_subgraph_expectation(n, g, g, A, 1.0, 1.0) == doctest::Approx(want));
  // n = 1 on a two-point space: E|f - P f| <= ||f - P f||
  FiniteDict d{{0.3, 0.7}, {{1.0, 0.0}}};
  auto law = dict_sup_law(d, 1);
  double norm = std::sqrt(0.3 * 0.7 * 0.7 + 0.7 * 0.3 * 0.3);
  CHECK(vc_subgraph_expectation(1, norm, norm, kE, 1.0, 1.0) >= law.expectation());
}

TEST_CASE("explicit bounds dominate exact dictionary moments") {
  std::vector<FiniteDict> dicts{
      {{0.5, 0.5}, {{1, 0}}},
      {{0.2, 0.3, 0.5}, {{1, 0, 0}, {1, 1, 0}, {0, 1, 1}}},
      {{0.1, 0.2, 0.3, 0.4}, {{1, 0, 1, 0}, {0, 0, 1, 1}, {1, 1, 1, 0}, {0.5, 0, 0, 1}}},
  };
  for (const auto& d : dicts) {
    // centered functions, their envelope and largest L2 norm
    size_t N = d.funcs.size(), m = d.p.size();
    std::vector<double> env(m, 0.0);
    double sig2 = 0;
    for (const auto& f : d.funcs) {
      double pf = 0;
      for (size_t x = 0; x < m; ++x) pf += d.p[x] * f[x];
      double v = 0;
      for (size_t x = 0; x < m; ++x) {
        env[x] = std::max(env[x], std::fabs(f[x] - pf));
        v += d.p[x] * (f[x] - pf) * (f[x] - pf);
      }
      sig2 = std::max(sig2, v);
    }
    double envn = 0;
    for (size_t x = 0; x < m; ++x) envn += d.p[x] * env[x] * env[x];
    envn = std::sqrt(envn);
    // N balls always suffice, and one below x = 1/2: v log(A x) >= log N there with A = 2N
    auto model = EntropyModel::vc_type(std::max(kE, 2.0 * N), 1.0);
    for (int n = 1; n <= 5; ++n) {
      auto law = dict_sup_law(d, n);
      auto q = query(n, std::sqrt(sig2), envn, Mode::Explicit, model);
      CHECK(expectation_upper(q).value >= law.expectation());
      double second = 0;
      for (size_t k = 0; k < law.values.size(); ++k) second += law.probs[k] * law.values[k] * law.values[k];
      CHECK(moment_upper(q, 2.0).value >= second);
    }
  }
}

TEST_CASE("lower bound premises") {
  auto model = EntropyModel::vc_type(kE, 1.0);
  auto z = expectation_lower(1000000000000L, 1.0, 0.0, 1.0, model, 1.0);
  CHECK(z.premises_ok);
  CHECK(z.value == 0.0);
  auto f = expectation_lower(2499, 1.0, 3.0, 1.0, model, 1.0);
  CHECK_FALSE(f.premises_ok);
  CHECK(f.value == 0.0);
  CHECK(f.raw > 0.0);
}

TEST_CASE("fullness estimates") {
  FiniteDict d{{0.5, 0.5}, {{1.0, 0.0}}};
  auto one = fullness_estimate(FunctionClass::finite_dict(d), 1.0, 100, 1, EntropyModel::vc_type(kE, 1.0));
  CHECK(one.packing_log == 0.0);
  CHECK(one.packing == 1);
  std::vector<double> logs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed)
    logs.push_back(fullness_estimate(FunctionClass::intervals(), 0.25, 2000, seed, intervals_entropy_model()).packing_log);
  auto [lo, hi] = std::minmax_element(logs.begin(), logs.end());
  CHECK(*lo > 0.0);
  CHECK(*hi / *lo <= 1.2);
}
