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
#include <array>
#include <cmath>
#include <memory>
#include <numeric>
#include <queue>
#include <sstream>

#include "ratiolab/sim.hpp"

namespace ratiolab {

namespace {

// Wavelet matrix over a permutation of 0..n-1: counts values < v among the
// first p entries in O(log n).
class WaveletMatrix {
 public:
  explicit WaveletMatrix(std::vector<std::uint32_t> a) : n_(a.size()) {
    bits_ = 1;
    while ((std::size_t{1} << bits_) < n_ + 1) ++bits_;
    ones_before_.assign(static_cast<size_t>(bits_), std::vector<std::uint32_t>(n_ + 1, 0));
    zeros_.assign(static_cast<size_t>(bits_), 0);
    std::vector<std::uint32_t> nxt(n_);
    for (int lvl = 0; lvl < bits_; ++lvl) {
      int bit = bits_ - 1 - lvl;
      auto& ob = ones_before_[static_cast<size_t>(lvl)];
      for (size_t i = 0; i < n_; ++i) ob[i + 1] = ob[i] + ((a[i] >> bit) & 1u);
      size_t z = 0;
      for (size_t i = 0; i < n_; ++i)
        if (!((a[i] >> bit) & 1u)) nxt[z++] = a[i];
      zeros_[static_cast<size_t>(lvl)] = z;
      for (size_t i = 0; i < n_; ++i)
        if ((a[i] >> bit) & 1u) nxt[z++] = a[i];
      a.swap(nxt);
    }
  }

  // #{i < p : a[i] < v}
  std::uint32_t count_less(size_t p, std::uint32_t v) const {
    if (v >= (std::uint32_t{1} << bits_)) return static_cast<std::uint32_t>(p);
    std::uint32_t res = 0;
    size_t lo = 0, hi = p;
    for (int lvl = 0; lvl < bits_; ++lvl) {
      int bit = bits_ - 1 - lvl;
      const auto& ob = ones_before_[static_cast<size_t>(lvl)];
      size_t lo1 = ob[lo], hi1 = ob[hi];
      if ((v >> bit) & 1u) {
        res += static_cast<std::uint32_t>((hi - hi1) - (lo - lo1));
        lo = zeros_[static_cast<size_t>(lvl)] + lo1;
        hi = zeros_[static_cast<size_t>(lvl)] + hi1;
      } else {
        lo -= lo1;
        hi -= hi1;
      }
    }
    return res;
  }

 private:
  size_t n_;
  int bits_;
  std::vector<std::vector<std::uint32_t>> ones_before_;
  std::vector<size_t> zeros_;
};

using Idx = std::array<long, 3>;

struct BoxGeometry {
  int d = 2;
  long n = 0;
  std::array<std::vector<double>, 3> cut;  // cut[k][0] = 0, sorted coords, cut[k][n+1] = 1
  std::vector<std::array<long, 3>> rank;   // per point, 1-based rank on each axis
  std::unique_ptr<WaveletMatrix> wm;

  BoxGeometry(const SampleBatch& b, int dim) : d(dim), n(b.n) {
    rank.assign(static_cast<size_t>(n), {0, 0, 0});
    for (int k = 0; k < d; ++k) {
      std::vector<long> order(static_cast<size_t>(n));
      std::iota(order.begin(), order.end(), 0L);
      std::sort(order.begin(), order.end(), [&](long i, long j) {
        double xi = b.x[static_cast<size_t>(i * d + k)], xj = b.x[static_cast<size_t>(j * d + k)];
        return xi < xj || (xi == xj && i < j);
      });
      auto& c = cut[static_cast<size_t>(k)];
      c.assign(static_cast<size_t>(n + 2), 0.0);
      c[static_cast<size_t>(n + 1)] = 1.0;
      for (long p = 0; p < n; ++p) {
        long i = order[static_cast<size_t>(p)];
        c[static_cast<size_t>(p + 1)] = b.x[static_cast<size_t>(i * d + k)];
        rank[static_cast<size_t>(i)][static_cast<size_t>(k)] = p + 1;
      }
    }
    if (d == 2) {
      std::vector<std::uint32_t> perm(static_cast<size_t>(n));
      for (long i = 0; i < n; ++i)
        perm[static_cast<size_t>(rank[static_cast<size_t>(i)][0] - 1)] =
            static_cast<std::uint32_t>(rank[static_cast<size_t>(i)][1] - 1);
      wm = std::make_unique<WaveletMatrix>(std::move(perm));
    }
  }

  // F_n on cell a, times n. Ties on an axis are resolved by rank, which is
  // exact for samples without ties (probability one).
  long count(const Idx& a) const {
    if (d == 2) return static_cast<long>(wm->count_less(static_cast<size_t>(a[0]), static_cast<std::uint32_t>(a[1])));
    long c = 0;
    for (const auto& rk : rank) {
      bool in = true;
      for (int k = 0; k < d && in; ++k) in = rk[static_cast<size_t>(k)] <= a[static_cast<size_t>(k)];
      c += in;
    }
    return c;
  }

  double lower_product(const Idx& a) const {
    double t = 1.0;
    for (int k = 0; k < d; ++k) t *= cut[static_cast<size_t>(k)][static_cast<size_t>(a[static_cast<size_t>(k)])];
    return t;
  }
  double upper_product(const Idx& a) const {
    double t = 1.0;
    for (int k = 0; k < d; ++k) t *= cut[static_cast<size_t>(k)][static_cast<size_t>(a[static_cast<size_t>(k)] + 1)];
    return t;
  }
};

struct BoxSearch {
  const BoxGeometry& geo;
  const NormWeight& phi;
  double lo_t, hi_t;  // (r^2, delta^2]
  int refine_m;
  bool monotone_weight;
  double best = 0.0;
  std::vector<double> witness;

  double ratio(double dev, double t) const {
    if (dev <= 0.0) return 0.0;
    double w = phi(std::sqrt(t));
    return w > 0.0 ? dev / w : kInf;
  }

  // A point of the cell with coordinate product t: walk the diagonal.
  std::vector<double> point_with_product(const Idx& a, double t) const {
    std::vector<double> lo(static_cast<size_t>(geo.d)), hi(static_cast<size_t>(geo.d));
    for (int k = 0; k < geo.d; ++k) {
      lo[static_cast<size_t>(k)] = geo.cut[static_cast<size_t>(k)][static_cast<size_t>(a[static_cast<size_t>(k)])];
      hi[static_cast<size_t>(k)] = geo.cut[static_cast<size_t>(k)][static_cast<size_t>(a[static_cast<size_t>(k)] + 1)];
    }
    auto at = [&](double lam) {
      std::vector<double> p(lo.size());
      for (size_t k = 0; k < lo.size(); ++k) p[k] = lo[k] + lam * (hi[k] - lo[k]);
      return p;
    };
    auto prod = [&](double lam) {
      double s = 1.0;
      for (double v : at(lam)) s *= v;
      return s;
    };
    double a0 = 0.0, a1 = 1.0;
    for (int it = 0; it < 200 && a1 - a0 > 1e-17; ++it) {
      double m = 0.5 * (a0 + a1);
      (prod(m) < t ? a0 : a1) = m;
    }
    return at(a1);
  }

  // Witness {x_1..x_d, count}; at limit candidates x is the limit point and
  // count the one-sided value of n F_n there.
  void offer(double v, const Idx& a, double t, long count) {
    if (!(v > best)) return;
    best = v;
    witness = point_with_product(a, t);
    witness.push_back(static_cast<double>(count));
  }

  void leaf(const Idx& a, long c) {
    double inv_n = 1.0 / static_cast<double>(geo.n);
    double tmin = geo.lower_product(a), tmax = geo.upper_product(a);
    if (tmax <= lo_t || tmin > hi_t) return;
    double f = c * inv_n;
    // smallest admissible product: attained at the corner, or r^2+ as a limit
    double ta = std::max(tmin, lo_t);
    double va = tmin > lo_t ? ratio(std::fabs(f - ta), ta) : ratio(f - ta, ta);
    offer(va, a, ta, c);
    // largest admissible product: delta^2 inside the cell, or the upper corner as a left limit
    double tb = std::min(tmax, hi_t);
    double vb = hi_t < tmax ? ratio(std::fabs(f - tb), tb) : ratio(tb - f, tb);
    offer(vb, a, tb, c);
    if (!monotone_weight) {
      for (int m = 1; m <= refine_m; ++m) {
        double t = ta + (tb - ta) * m / (refine_m + 1.0);
        if (t <= lo_t) continue;
        offer(ratio(std::fabs(f - t), t), a, t, c);
      }
    }
  }
};

void check_box(const SampleBatch& b, double r, double delta) {
  require(b.law.kind == LawKind::UniformBox, "sup_box needs a uniform-box batch");
  if (b.law.dim > 3) throw UnsupportedError("sup_box supports d <= 3");
  require(r >= 0.0 && r < delta && delta <= 1.0, "sup_box: empty or invalid range");
}

std::string box_detail(double r, double delta, const NormWeight& phi, int m) {
  std::ostringstream os;
  os << "range (" << r << ", " << delta << "] in sigma, weight " << phi.name() << ", M = " << m;
  return os.str();
}

}  // namespace

SupremumResult sup_box(const SampleBatch& b, double r, double delta, const NormWeight& phi, int refine_m) {
  check_box(b, r, delta);
  if (b.n == 0) {
    auto e = sup_empty_sample(r * r, delta * delta, phi);
    e.witness = {e.witness[0], 0.0, -1.0};
    return e;
  }
  const int d = b.law.dim;
  SupremumResult res;
  res.refinement = refine_m;
  if (d == 1) {
    std::vector<double> xs = b.x;
    std::sort(xs.begin(), xs.end());
    auto h = sup_halfline_sorted(xs.data(), b.n, r * r, delta * delta, phi);
    res.value = h.value;
    res.witness = {h.witness[0], std::round(h.witness[1] * static_cast<double>(b.n))};
    res.detail = box_detail(r, delta, phi, refine_m);
    return res;
  }
  BoxGeometry geo(b, d);
  BoxSearch S{geo, phi, r * r, delta * delta, refine_m, phi.is_power() && phi.alpha() <= 2.0, 0.0, {}};
  const double inv_n = 1.0 / static_cast<double>(b.n);

  struct Node {
    double ub;
    Idx lo, hi;
    bool operator<(const Node& o) const { return ub < o.ub; }
  };
  auto bound = [&](const Idx& lo, const Idx& hi, bool& feasible) {
    double tmin = geo.lower_product(lo), tmax = geo.upper_product(hi);
    feasible = !(tmax <= S.lo_t || tmin > S.hi_t);
    if (!feasible) return 0.0;
    double cmax = geo.count(hi) * inv_n, cmin = geo.count(lo) * inv_n;
    double ta = std::max(tmin, S.lo_t), tb = std::min(tmax, S.hi_t);
    double ua = S.ratio(cmax - ta, ta);
    double ub = S.monotone_weight ? S.ratio(tb - cmin, tb) : S.ratio(tb - cmin, ta);
    return std::max(ua, ub);
  };

  std::priority_queue<Node> pq;
  Idx lo0{0, 0, 0}, hi0{b.n, b.n, b.n};
  for (int k = d; k < 3; ++k) hi0[static_cast<size_t>(k)] = 0;
  bool feas = false;
  double ub0 = bound(lo0, hi0, feas);
  if (feas) pq.push({ub0, lo0, hi0});
  long nodes = 0;
  while (!pq.empty()) {
    Node nd = pq.top();
    pq.pop();
    ++nodes;
    if (nd.ub <= S.best) break;
    int axis = -1;
    long widest = 0;
    for (int k = 0; k < d; ++k) {
      long w = nd.hi[static_cast<size_t>(k)] - nd.lo[static_cast<size_t>(k)];
      if (w > widest) {
        widest = w;
        axis = k;
      }
    }
    if (axis < 0) {
      S.leaf(nd.lo, geo.count(nd.lo));
      continue;
    }
    long mid = (nd.lo[static_cast<size_t>(axis)] + nd.hi[static_cast<size_t>(axis)]) / 2;
    Idx hi_left = nd.hi, lo_right = nd.lo;
    hi_left[static_cast<size_t>(axis)] = mid;
    lo_right[static_cast<size_t>(axis)] = mid + 1;
    bool f1 = false, f2 = false;
    double u1 = bound(nd.lo, hi_left, f1);
    double u2 = bound(lo_right, nd.hi, f2);
    if (f1 && u1 > S.best) pq.push({u1, nd.lo, hi_left});
    if (f2 && u2 > S.best) pq.push({u2, lo_right, nd.hi});
  }
  res.value = S.best;
  res.witness = S.witness;
  res.nodes = nodes;
  res.detail = box_detail(r, delta, phi, refine_m);
  return res;
}

SupremumResult sup_box_bruteforce(const SampleBatch& b, double r, double delta, const NormWeight& phi) {
  check_box(b, r, delta);
  if (b.n == 0) {
    auto e = sup_empty_sample(r * r, delta * delta, phi);
    e.witness = {e.witness[0], 0.0, -1.0};
    return e;
  }
  const int d = b.law.dim;
  BoxGeometry geo(b, d);
  const int m = 8;
  BoxSearch S{geo, phi, r * r, delta * delta, m, phi.is_power() && phi.alpha() <= 2.0, 0.0, {}};
  Idx a{0, 0, 0};
  long lim1 = d >= 2 ? b.n : 0, lim2 = d >= 3 ? b.n : 0;
  for (a[0] = 0; a[0] <= b.n; ++a[0])
    for (a[1] = 0; a[1] <= lim1; ++a[1])
      for (a[2] = 0; a[2] <= lim2; ++a[2]) {
        long c = 0;
        for (const auto& rk : geo.rank) {
          bool in = true;
          for (int k = 0; k < d && in; ++k) in = rk[static_cast<size_t>(k)] <= a[static_cast<size_t>(k)];
          c += in;
        }
        S.leaf(a, c);
      }
  SupremumResult res;
  res.value = S.best;
  res.witness = S.witness;
  res.refinement = m;
  res.detail = box_detail(r, delta, phi, m);
  return res;
}

}  // namespace ratiolab
