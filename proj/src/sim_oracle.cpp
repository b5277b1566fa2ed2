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


#include <algorithm>
#include <cmath>
#include <map>

#include "ratiolab/sim.hpp"

namespace ratiolab {

double ExactLaw::expectation() const {
  double e = 0.0;
  for (size_t i = 0; i < values.size(); ++i) e += values[i] * probs[i];
  return e;
}

double ExactLaw::tail_ge(double x) const {
  double s = 0.0;
  for (size_t i = 0; i < values.size(); ++i)
    if (values[i] >= x) s += probs[i];
  return std::min(1.0, s);
}

double ExactLaw::tail_le(double x) const {
  double s = 0.0;
  for (size_t i = 0; i < values.size(); ++i)
    if (values[i] <= x) s += probs[i];
  return std::min(1.0, s);
}

namespace {

constexpr double kMaxOutcomes = 2e5;

double outcome_count(int n, int m) {
  // C(n + m - 1, m - 1)
  double c = 1.0;
  for (int i = 1; i < m; ++i) c = c * (n + i) / i;
  return c;
}

}  // namespace

ExactLaw exact_small_oracle(const std::vector<double>& p, int n, const CountStatistic& stat) {
  const int m = static_cast<int>(p.size());
  require(m >= 1 && n >= 1, "oracle needs a nonempty space and n >= 1");
  double tot = 0.0;
  for (double v : p) {
    require(v >= 0.0, "probabilities must be nonnegative");
    tot += v;
  }
  require(std::fabs(tot - 1.0) < 1e-12, "probabilities must sum to 1");
  if (outcome_count(n, m) > kMaxOutcomes) throw DomainError("oracle size limit exceeded");

  std::vector<double> logfact(static_cast<size_t>(n + 1), 0.0);
  for (int i = 1; i <= n; ++i) logfact[static_cast<size_t>(i)] = logfact[static_cast<size_t>(i - 1)] + std::log(i);

  std::map<double, double> law;
  std::vector<int> c(static_cast<size_t>(m), 0);
  // enumerate compositions of n into m parts, recursively
  auto rec = [&](auto&& self, int k, int left, double logw) -> void {
    if (k == m - 1) {
      c[static_cast<size_t>(k)] = left;
      double pk = p[static_cast<size_t>(k)];
      if (left > 0 && pk == 0.0) return;
      double lw = logw - logfact[static_cast<size_t>(left)] + (left > 0 ? left * std::log(pk) : 0.0);
      double prob = std::exp(logfact[static_cast<size_t>(n)] + lw);
      law[stat(c, n)] += prob;
      return;
    }
    double pk = p[static_cast<size_t>(k)];
    for (int a = 0; a <= left; ++a) {
      if (a > 0 && pk == 0.0) break;
      c[static_cast<size_t>(k)] = a;
      self(self, k + 1, left - a, logw - logfact[static_cast<size_t>(a)] + (a > 0 ? a * std::log(pk) : 0.0));
    }
  };
  rec(rec, 0, n, 0.0);

  ExactLaw out;
  // merge values that differ only by rounding
  for (const auto& [v, pr] : law) {
    if (!out.values.empty() && std::fabs(v - out.values.back()) <= 1e-12 * std::max(1.0, std::fabs(v))) {
      out.probs.back() += pr;
    } else {
      out.values.push_back(v);
      out.probs.push_back(pr);
    }
  }
  return out;
}

CountStatistic dict_weighted_sup(const FunctionClass& cls, const std::vector<double>& weight,
                                 const std::vector<char>& active) {
  require(cls.kind == ClassKind::FiniteDict, "dict_weighted_sup needs a FiniteDict class");
  const auto& d = cls.dict;
  require(weight.size() == d.funcs.size() && active.size() == d.funcs.size(),
          "one weight and one flag per member");
  std::vector<double> pf(d.funcs.size(), 0.0);
  for (size_t k = 0; k < d.funcs.size(); ++k)
    for (size_t x = 0; x < d.p.size(); ++x) pf[k] += d.p[x] * d.funcs[k][x];
  return [d, pf, weight, active](const std::vector<int>& c, int n) {
    double best = 0.0;
    for (size_t k = 0; k < d.funcs.size(); ++k) {
      if (!active[k]) continue;
      double s = 0.0;
      for (size_t x = 0; x < c.size(); ++x) s += c[x] * d.funcs[k][x];
      double dev = std::fabs(s / n - pf[k]);
      double v = dev == 0.0 ? 0.0 : (weight[k] > 0.0 ? dev / weight[k] : kInf);
      best = std::max(best, v);
    }
    return best;
  };
}

}  // namespace ratiolab
