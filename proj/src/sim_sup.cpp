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
#include <deque>
#include <sstream>

#include "ratiolab/sim.hpp"

namespace ratiolab {

namespace {

double ratio_value(double diff, double scale_t, const NormWeight& phi) {
  double d = std::fabs(diff);
  if (d == 0.0) return 0.0;
  double w = phi(std::sqrt(std::max(scale_t, 0.0)));
  if (w <= 0.0) return kInf;
  return d / w;
}

std::string regime(double lo, double hi, const NormWeight& phi, const char* units) {
  std::ostringstream os;
  os << "range (" << lo << ", " << hi << "] " << units << ", weight " << phi.name();
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- half-line

SupremumResult sup_empty_sample(double lo, double hi, const NormWeight& phi) {
  SupremumResult res;
  auto f = [&](double u) { return u / phi(std::sqrt(u)); };
  res.value = f(hi);
  res.witness = {hi, 0.0};
  if (!(phi.is_power() && phi.alpha() <= 2.0)) {
    // not monotone in general: scan a log grid of the range
    for (double u : logspace(std::max(lo, hi * 1e-12), hi, 2001))
      if (u > lo && f(u) > res.value) {
        res.value = f(u);
        res.witness = {u, 0.0};
      }
  }
  res.detail = "empty sample";
  return res;
}

SupremumResult sup_halfline_sorted(const double* x, long n, double t_lo, double t_hi,
                                   const NormWeight& phi) {
  require(n >= 0, "sup_halfline: negative sample size");
  require(t_lo >= 0.0 && t_lo < t_hi && t_hi <= 1.0, "sup_halfline: empty or invalid range");
  if (n == 0) return sup_empty_sample(t_lo, t_hi, phi);
  const double inv_n = 1.0 / static_cast<double>(n);
  long k0 = std::upper_bound(x, x + n, t_lo) - x;
  long k1 = std::upper_bound(x, x + n, t_hi) - x;

  SupremumResult res;
  double best_t = t_hi, best_f = k1 * inv_n;
  double best = ratio_value(best_f - t_hi, t_hi, phi);
  auto consider = [&](double t, double f) {
    double v = ratio_value(f - t, t, phi);
    if (v > best) {
      best = v;
      best_t = t;
      best_f = f;
    }
  };
  // right limit at the lower end of the range
  consider(t_lo, k0 * inv_n);
  long k = k0;
  while (k < k1) {
    double t = x[k];
    long first = k;
    while (k < k1 && x[k] == t) ++k;
    consider(t, first * inv_n);  // left limit
    consider(t, k * inv_n);      // value at the jump
  }
  res.value = best;
  res.witness = {best_t, best_f};
  res.detail = regime(t_lo, t_hi, phi, "in t");
  return res;
}

SupremumResult sup_halfline(const SampleBatch& b, double t_lo, double t_hi, const NormWeight& phi) {
  require(b.law.kind == LawKind::Uniform1D, "sup_halfline needs a uniform-1d batch");
  return sup_halfline_sorted(b.x.data(), b.n, t_lo, t_hi, phi);
}

// ---------------------------------------------------------------- intervals
//
// Lengths live in (lo, hi] = (r^2, delta^2]. Positive deviations are
// maximized by the tightest interval around a run of points x_i..x_j
// (length max(x_j - x_i, lo+)); negative ones by the widest interval inside
// a gap (x_u, x_v), sentinels x_0 = 0 and x_{n+1} = 1 included.
// Witness {a, b, count}: value = |count / n - (b - a)| / phi(sqrt(b - a)).

SupremumResult sup_intervals_quadratic(const SampleBatch& b, double r, double delta,
                                       const NormWeight& phi) {
  require(b.law.kind == LawKind::Uniform1D, "sup_intervals needs a uniform-1d batch");
  require(r >= 0.0 && r < delta && delta <= 1.0, "sup_intervals: empty or invalid range");
  if (b.n == 0) {
    auto e = sup_empty_sample(r * r, delta * delta, phi);
    e.witness = {0.0, e.witness[0], 0.0};
    return e;
  }
  const long n = b.n;
  const double lo = r * r, hi = delta * delta, inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> X(static_cast<size_t>(n + 2));
  X[0] = 0.0;
  std::copy(b.x.begin(), b.x.end(), X.begin() + 1);
  X[static_cast<size_t>(n + 1)] = 1.0;

  SupremumResult res;
  res.witness = {0.0, 0.0, 0.0};
  auto consider = [&](double v, double a, double len, double count) {
    if (v > res.value) {
      res.value = v;
      res.witness = {a, a + len, count};
    }
  };
  for (long i = 1; i <= n; ++i) {
    for (long j = i; j <= n; ++j) {
      double g = X[j] - X[i];
      if (g > hi) break;
      double c = static_cast<double>(j - i + 1);
      if (g > lo) {
        consider(ratio_value(c * inv_n - g, g, phi), X[i], g, c);
      } else {
        double dev = c * inv_n - lo;
        if (dev > 0.0) consider(ratio_value(dev, lo, phi), X[i], lo, c);
      }
    }
  }
  for (long u = 0; u <= n; ++u) {
    for (long v = u + 1; v <= n + 1; ++v) {
      double g = X[v] - X[u];
      if (g <= lo) continue;
      double len = std::min(g, hi);
      double c = static_cast<double>(v - u - 1);
      double dev = len - c * inv_n;
      if (dev > 0.0) consider(ratio_value(dev, len, phi), X[u], len, c);
      if (g > hi) break;
    }
  }
  res.detail = regime(r, delta, phi, "in sigma");
  return res;
}

SupremumResult sup_intervals(const SampleBatch& b, double r, double delta, const NormWeight& phi) {
  if (!phi.is_unit()) return sup_intervals_quadratic(b, r, delta, phi);
  require(b.law.kind == LawKind::Uniform1D, "sup_intervals needs a uniform-1d batch");
  require(r >= 0.0 && r < delta && delta <= 1.0, "sup_intervals: empty or invalid range");
  if (b.n == 0) {
    auto e = sup_empty_sample(r * r, delta * delta, phi);
    e.witness = {0.0, e.witness[0], 0.0};
    return e;
  }
  // Unweighted case in O(n): every family above is a sliding-window maximum.
  const long n = b.n;
  const double lo = r * r, hi = delta * delta, inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> X(static_cast<size_t>(n + 2));
  X[0] = 0.0;
  std::copy(b.x.begin(), b.x.end(), X.begin() + 1);
  X[static_cast<size_t>(n + 1)] = 1.0;

  SupremumResult res;
  res.witness = {0.0, 0.0, 0.0};
  auto consider = [&](double v, double a, double len, double count) {
    if (v > res.value) {
      res.value = v;
      res.witness = {a, a + len, count};
    }
  };

  // runs of length <= lo, pushed out to lo+
  for (long i = 1, j = 1; i <= n; ++i) {
    if (j < i) j = i;
    while (j + 1 <= n && X[j + 1] - X[i] <= lo) ++j;
    double c = static_cast<double>(j - i + 1);
    if (c * inv_n - lo > 0.0) consider(c * inv_n - lo, X[i], lo, c);
  }
  // runs with lo < x_j - x_i <= hi: max over j of a_j - min a_i, a_k = k/n - x_k
  {
    std::deque<long> dq;
    long add = 1;
    auto a = [&](long k) { return k * inv_n - X[k]; };
    for (long j = 1; j <= n; ++j) {
      while (add < j && X[j] - X[add] > lo) {
        while (!dq.empty() && a(dq.back()) >= a(add)) dq.pop_back();
        dq.push_back(add++);
      }
      while (!dq.empty() && X[j] - X[dq.front()] > hi) dq.pop_front();
      if (dq.empty()) continue;
      long i = dq.front();
      double g = X[j] - X[i];
      double c = static_cast<double>(j - i + 1);
      consider(std::fabs(c * inv_n - g), X[i], g, c);
    }
  }
  // gaps with lo < x_v - x_u <= hi: max over v of b_v - min b_u, b_k = x_k - k/n
  {
    std::deque<long> dq;
    long add = 0;
    auto bb = [&](long k) { return X[k] - k * inv_n; };
    for (long v = 1; v <= n + 1; ++v) {
      while (add < v && X[v] - X[add] > lo) {
        while (!dq.empty() && bb(dq.back()) >= bb(add)) dq.pop_back();
        dq.push_back(add++);
      }
      while (!dq.empty() && X[v] - X[dq.front()] > hi) dq.pop_front();
      if (dq.empty()) continue;
      long u = dq.front();
      double g = X[v] - X[u];
      double c = static_cast<double>(v - u - 1);
      if (g - c * inv_n > 0.0) consider(g - c * inv_n, X[u], g, c);
    }
  }
  // gaps wider than hi: first v past x_u + hi
  for (long u = 0, v = 1; u <= n; ++u) {
    if (v <= u) v = u + 1;
    while (v <= n + 1 && X[v] - X[u] <= hi) ++v;
    if (v > n + 1) break;
    double c = static_cast<double>(v - u - 1);
    if (hi - c * inv_n > 0.0) consider(hi - c * inv_n, X[u], hi, c);
  }
  res.detail = regime(r, delta, phi, "in sigma");
  return res;
}

// ---------------------------------------------------------------- c0

SupremumResult sup_c0(const SampleBatch& b, long j_lo, long j_hi, const NormWeight& phi) {
  require(b.law.kind == LawKind::CoordC0, "sup_c0 needs a coordc0 batch");
  require(j_lo >= 1 && j_lo <= j_hi && j_hi <= b.law.j_max, "sup_c0: j range outside the batch");
  SupremumResult res;
  res.witness = {static_cast<double>(j_lo), static_cast<double>(b.counts[j_lo - 1])};
  const double inv_n = 1.0 / static_cast<double>(b.n);
  for (long j = j_lo; j <= j_hi; ++j) {
    double jd = static_cast<double>(j);
    double p = 1.0 / (jd * jd);
    double lj = log_e(jd);
    double v = 1.0 / (lj * lj);
    double sigma = 1.0 / (jd * lj);
    double cnt = static_cast<double>(b.counts[j - 1]);
    double dev = std::fabs(cnt * inv_n - p) * v;
    double w = phi(sigma);
    double val = dev == 0.0 ? 0.0 : (w > 0.0 ? dev / w : kInf);
    if (val > res.value) {
      res.value = val;
      res.witness = {jd, cnt};
    }
  }
  std::ostringstream os;
  os << "j in [" << j_lo << ", " << j_hi << "], weight " << phi.name();
  res.detail = os.str();
  return res;
}

// ---------------------------------------------------------------- monotone
//
// g jumps only at sample points, so g is described by its levels W_k on
// [x_k, x_{k+1}). Then (P_n - P) g = sum_k W_k (1/n - gap_k) and
// P g^2 = sum_k gap_k W_k^2, with 0 <= W_1 <= ... <= W_n <= 1. The objective
// is linear, so the linear-minimization step is the whole problem; it is
// solved through the Lagrangian: for fixed mu the maximizer is the clipped
// weighted isotonic fit of d_k / (2 mu gap_k), and bisection on mu closes
// the duality gap. Witness: pairs (x_k, W_k) at the level changes.

namespace {

struct IsoFit {
  std::vector<double> W;
  double obj = 0.0;   // sum d_k W_k
  double quad = 0.0;  // sum gap_k W_k^2
};

void isotonic_clipped(const std::vector<double>& d, const std::vector<double>& gap, double mu,
                      IsoFit& out) {
  struct Block {
    double w, wy;
    long len;
    double mean() const {
      if (w > 0.0) return wy / w;
      return wy > 0.0 ? kInf : (wy < 0.0 ? -kInf : 0.0);
    }
  };
  std::vector<Block> st;
  st.reserve(d.size());
  for (size_t k = 0; k < d.size(); ++k) {
    st.push_back({gap[k], d[k] / (2.0 * mu), 1});
    while (st.size() > 1 && st[st.size() - 2].mean() >= st.back().mean()) {
      Block top = st.back();
      st.pop_back();
      st.back().w += top.w;
      st.back().wy += top.wy;
      st.back().len += top.len;
    }
  }
  out.W.resize(d.size());
  out.obj = out.quad = 0.0;
  size_t k = 0;
  for (const auto& bl : st) {
    double m = std::clamp(bl.mean(), 0.0, 1.0);
    for (long t = 0; t < bl.len; ++t, ++k) {
      out.W[k] = m;
      out.obj += d[k] * m;
      out.quad += gap[k] * m * m;
    }
  }
}

}  // namespace

SupremumResult sup_monotone(const SampleBatch& b, double delta, int budget) {
  require(b.law.kind == LawKind::Uniform1D, "sup_monotone needs a uniform-1d batch");
  require(delta > 0.0, "sup_monotone: delta must be positive");
  const long n = b.n;
  const auto& x = b.x;
  std::vector<double> gap(static_cast<size_t>(n)), d(static_cast<size_t>(n));
  for (long k = 0; k < n; ++k) {
    double nxt = k + 1 < n ? x[k + 1] : 1.0;
    gap[k] = nxt - x[k];
    d[k] = 1.0 / static_cast<double>(n) - gap[k];
  }
  const double d2 = delta * delta;
  SupremumResult res;
  auto emit_witness = [&](const std::vector<double>& W) {
    res.witness.clear();
    double prev = 0.0;
    for (long k = 0; k < n; ++k) {
      if (W[k] != prev) {
        res.witness.push_back(x[k]);
        res.witness.push_back(W[k]);
        prev = W[k];
      }
    }
  };

  // Without the ball constraint the optimum is an indicator I[x_k, 1].
  double suffix = 0.0, best_suffix = 0.0, mass = 0.0;
  long kstar = n;
  for (long k = n - 1; k >= 0; --k) {
    suffix += d[k];
    if (suffix > best_suffix) {
      best_suffix = suffix;
      kstar = k;
    }
  }
  if (kstar < n) mass = 1.0 - x[kstar];
  if (mass <= d2) {
    res.value = best_suffix;
    std::vector<double> W(static_cast<size_t>(n), 0.0);
    for (long k = kstar; k < n; ++k) W[k] = 1.0;
    emit_witness(W);
    res.gap = 0.0;
    res.detail = "ball constraint inactive; indicator solution";
    return res;
  }

  IsoFit fit;
  double best_primal = 0.0, best_dual = kInf;
  std::vector<double> bestW(static_cast<size_t>(n), 0.0);
  auto eval = [&](double mu) {
    isotonic_clipped(d, gap, mu, fit);
    double dual = fit.obj - mu * fit.quad + mu * d2;
    best_dual = std::min(best_dual, dual);
    if (fit.quad <= d2 && fit.obj > best_primal) {
      best_primal = fit.obj;
      bestW = fit.W;
    }
    return fit.quad;
  };
  double mu_hi = 1.0, mu_lo;
  int it = 0;
  while (eval(mu_hi) > d2 && it++ < 2000) mu_hi *= 2.0;
  mu_lo = mu_hi / 2.0;
  while (mu_lo > 1e-300 && eval(mu_lo) <= d2 && it++ < 4000) {
    mu_hi = mu_lo;
    mu_lo /= 2.0;
  }
  auto scale = [&] { return std::max(best_primal, 1.0 / static_cast<double>(n)); };
  int iters = 0;
  while (iters < budget && best_dual - best_primal > 1e-8 * scale()) {
    double mid = 0.5 * (mu_lo + mu_hi);
    if (mid <= mu_lo || mid >= mu_hi) break;
    if (eval(mid) > d2)
      mu_lo = mid;
    else
      mu_hi = mid;
    ++iters;
  }
  res.value = best_primal;
  res.gap = std::max(0.0, best_dual - best_primal);
  res.refinement = iters;
  emit_witness(bestW);
  std::ostringstream os;
  os << "delta " << delta << ", dual bisection " << iters << " steps, gap " << res.gap;
  if (res.gap > 1e-8 * scale()) os << " (gap target not reached)";
  res.detail = os.str();
  return res;
}

}  // namespace ratiolab
