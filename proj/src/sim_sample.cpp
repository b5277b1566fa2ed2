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

#include "ratiolab/sim.hpp"

namespace ratiolab {

Law Law::uniform1d() { return Law{}; }

Law Law::uniform_box(int d) {
  if (d < 1 || d > 3) throw UnsupportedError("uniform box law supports d in 1..3");
  Law l;
  l.kind = LawKind::UniformBox;
  l.dim = d;
  return l;
}

Law Law::coord_c0(long j_max) {
  require(j_max >= 1, "coordc0 law needs j_max >= 1");
  Law l;
  l.kind = LawKind::CoordC0;
  l.j_max = j_max;
  return l;
}

Law Law::regression(std::function<double(double)> g0, double noise) {
  require(static_cast<bool>(g0), "regression law needs a mean function");
  require(noise >= 0.0, "noise level must be nonnegative");
  Law l;
  l.kind = LawKind::RegressionPair;
  l.g0 = std::move(g0);
  l.noise = noise;
  return l;
}

Law Law::classification(std::function<double(double)> eta) {
  require(static_cast<bool>(eta), "classification law needs eta");
  Law l;
  l.kind = LawKind::ClassificationPair;
  l.eta = std::move(eta);
  return l;
}

void uniform_order_stats(CounterRng& rng, long n, std::vector<double>& out) {
  out.resize(static_cast<size_t>(n));
  double s = 0.0;
  for (long i = 0; i < n; ++i) {
    s += rng.exponential();
    out[static_cast<size_t>(i)] = s;
  }
  s += rng.exponential();
  double inv = 1.0 / s;
  for (auto& v : out) v *= inv;
}

std::vector<int> draw_counts(CounterRng& rng, const std::vector<double>& p, long n) {
  std::vector<int> c(p.size(), 0);
  long left = n;
  double mass = 1.0;
  for (size_t k = 0; k < p.size() && left > 0; ++k) {
    if (k + 1 == p.size()) {
      c[k] = static_cast<int>(left);
      break;
    }
    double pk = mass > 0.0 ? std::min(1.0, p[k] / mass) : 1.0;
    long m = rng.binomial(left, pk);
    c[k] = static_cast<int>(m);
    left -= m;
    mass -= p[k];
  }
  return c;
}

SampleBatch draw_sample(const Law& law, long n, std::uint64_t seed) {
  require(n >= 1, "sample size must be >= 1");
  SampleBatch b;
  b.law = law;
  b.n = n;
  b.seed = seed;
  CounterRng rng(seed);
  switch (law.kind) {
    case LawKind::Uniform1D:
      uniform_order_stats(rng, n, b.x);
      break;
    case LawKind::UniformBox: {
      if (law.dim < 1 || law.dim > 3) throw UnsupportedError("uniform box law supports d in 1..3");
      b.x.resize(static_cast<size_t>(n * law.dim));
      for (auto& v : b.x) v = rng.uniform_pos();
      break;
    }
    case LawKind::CoordC0: {
      if (law.j_max < 1) throw UnsupportedError("coordc0 law needs j_max >= 1");
      b.counts.resize(static_cast<size_t>(law.j_max));
      for (long j = 1; j <= law.j_max; ++j) {
        double p = 1.0 / (static_cast<double>(j) * static_cast<double>(j));
        b.counts[static_cast<size_t>(j - 1)] = rng.binomial(n, p);
      }
      break;
    }
    case LawKind::RegressionPair: {
      if (!law.g0) throw UnsupportedError("regression law without mean function");
      uniform_order_stats(rng, n, b.x);
      b.y.resize(static_cast<size_t>(n));
      for (long i = 0; i < n; ++i) {
        double u = law.noise * (2.0 * rng.uniform() - 1.0);
        b.y[static_cast<size_t>(i)] = std::clamp(law.g0(b.x[static_cast<size_t>(i)]) + u, 0.0, 1.0);
      }
      break;
    }
    case LawKind::ClassificationPair: {
      if (!law.eta) throw UnsupportedError("classification law without eta");
      uniform_order_stats(rng, n, b.x);
      b.y.resize(static_cast<size_t>(n));
      for (long i = 0; i < n; ++i)
        b.y[static_cast<size_t>(i)] = rng.bernoulli(law.eta(b.x[static_cast<size_t>(i)])) ? 1.0 : 0.0;
      break;
    }
  }
  return b;
}

}  // namespace ratiolab
