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
#include <memory>

#include "ratiolab/learn.hpp"

namespace ratiolab {

CdfView CdfView::empirical(std::vector<double> sample) {
  require(!sample.empty(), "empirical cdf needs a nonempty sample");
  if (!std::is_sorted(sample.begin(), sample.end())) std::sort(sample.begin(), sample.end());
  auto xs = std::make_shared<const std::vector<double>>(std::move(sample));
  const double n = static_cast<double>(xs->size());
  CdfView v;
  v.F = [xs, n](double t) {
    return static_cast<double>(std::upper_bound(xs->begin(), xs->end(), t) - xs->begin()) / n;
  };
  v.F_left = [xs, n](double t) {
    return static_cast<double>(std::lower_bound(xs->begin(), xs->end(), t) - xs->begin()) / n;
  };
  const auto& s = *xs;
  for (size_t i = 0; i < s.size();) {
    size_t j = i;
    while (j < s.size() && s[j] == s[i]) ++j;
    v.atoms.push_back(s[i]);
    v.atom_left.push_back(static_cast<double>(i) / n);
    v.atom_value.push_back(static_cast<double>(j) / n);
    i = j;
  }
  return v;
}

CdfView CdfView::continuous(std::function<double(double)> F) {
  require(static_cast<bool>(F), "continuous cdf needs a function");
  CdfView v;
  v.F = F;
  v.F_left = std::move(F);
  return v;
}

CdfView CdfView::steps(std::vector<double> atoms, std::vector<double> values) {
  require(!atoms.empty() && atoms.size() == values.size(), "step cdf needs one value per atom");
  require(std::is_sorted(atoms.begin(), atoms.end()), "step cdf atoms must be sorted");
  auto a = std::make_shared<const std::vector<double>>(atoms);
  auto vals = std::make_shared<const std::vector<double>>(values);
  CdfView v;
  v.F = [a, vals](double t) {
    auto k = std::upper_bound(a->begin(), a->end(), t) - a->begin();
    return k == 0 ? 0.0 : (*vals)[static_cast<size_t>(k - 1)];
  };
  v.F_left = [a, vals](double t) {
    auto k = std::lower_bound(a->begin(), a->end(), t) - a->begin();
    return k == 0 ? 0.0 : (*vals)[static_cast<size_t>(k - 1)];
  };
  v.atoms = std::move(atoms);
  v.atom_value = values;
  v.atom_left.resize(values.size());
  for (size_t k = 0; k < values.size(); ++k) v.atom_left[k] = k == 0 ? 0.0 : values[k - 1];
  return v;
}

namespace {

constexpr double kSlack = 1e-12;

// F(t) <= c G(ct) for every t in (a, b)?
bool dominated(const CdfView& F, const CdfView& G, double c, double a, double b, int grid) {
  auto le = [](double x, double y) { return x <= y + kSlack; };
  if (!le(F.F(a), c * G.F(c * a))) return false;
  if (!le(F.F_left(b), c * G.F_left(c * b))) return false;
  // F jumps up at its atoms, G(c .) is smallest there
  auto lo = std::upper_bound(F.atoms.begin(), F.atoms.end(), a) - F.atoms.begin();
  for (auto k = lo; k < static_cast<long>(F.atoms.size()) && F.atoms[k] < b; ++k)
    if (!le(F.atom_value[k], c * G.F(c * F.atoms[k]))) return false;
  // just before G(c .) jumps, F is largest
  auto glo = std::upper_bound(G.atoms.begin(), G.atoms.end(), c * a) - G.atoms.begin();
  for (auto k = glo; k < static_cast<long>(G.atoms.size()) && G.atoms[k] <= c * b; ++k)
    if (!le(F.F_left(G.atoms[k] / c), c * G.atom_left[k])) return false;
  if (F.is_continuous() && G.is_continuous()) {
    for (int i = 1; i < grid; ++i) {
      double t = a + (b - a) * i / grid;
      if (!le(F.F(t), c * G.F(c * t))) return false;
    }
    if (a > 0.0) {
      double r = std::log(b / a);
      for (int i = 1; i < grid; ++i) {
        double t = a * std::exp(r * i / grid);
        if (!le(F.F(t), c * G.F(c * t))) return false;
      }
    }
  }
  return true;
}

}  // namespace

double mult_levy_distance(const CdfView& F, const CdfView& G, double a, double b, int grid) {
  require(static_cast<bool>(F.F) && static_cast<bool>(G.F), "mult_levy_distance needs two cdfs");
  require(std::isfinite(b), "the upper end of the range must be finite");
  if (!(a < b)) return 0.0;
  auto feasible = [&](double logc) {
    double c = std::exp(logc);
    return dominated(F, G, c, a, b, grid) && dominated(G, F, c, a, b, grid);
  };
  if (feasible(0.0)) return 0.0;
  double lo = 0.0, hi = 64.0;
  if (!feasible(hi)) return kInf;
  // fixed bracket and step count, so nested ranges give ordered answers
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

double margin_cutoff(const std::function<double(double)>& F, double lambda, long n, double alpha) {
  require(lambda > 0.0 && n >= 1 && alpha > 0.0 && alpha < 2.0, "margin_cutoff: bad inputs");
  const double e = 2.0 * alpha / (2.0 + alpha);
  const double rhs = lambda * std::pow(static_cast<double>(n), -2.0 / (2.0 + alpha));
  auto pred = [&](double d) { return std::pow(d, e) * F(d) >= rhs * (1.0 - 1e-12); };
  const double lo = 1.0 / static_cast<double>(n);
  if (pred(lo)) return lo;
  if (!pred(1.0)) return kInf;
  return bisect_predicate(pred, lo, 1.0, 1e-15);
}

double margin_range_cap(const MarginSetup& s, long n, double t) {
  require(t > 0.0 && s.D > 0.0, "A_n(t) needs t > 0, D > 0");
  return s.D * std::sqrt(static_cast<double>(n)) / std::pow(t, (2.0 + s.alpha) / (2.0 * s.alpha));
}

double margin_t_n(long n, double q, double K) {
  return 2.0 * K * q * q * std::log(static_cast<double>(n));
}

ScoreFamily ScoreFamily::identity() {
  ScoreFamily f;
  f.name = "identity";
  f.size = 1;
  f.score = [](int, double x) { return x; };
  f.cdf = [](int, double t) { return std::clamp(t, 0.0, 1.0); };
  return f;
}

ScoreFamily ScoreFamily::powers(int members) {
  require(members >= 1, "powers family needs at least one member");
  ScoreFamily f;
  f.name = "powers";
  f.size = members;
  auto ex = std::make_shared<std::vector<double>>(
      members == 1 ? std::vector<double>{1.0} : logspace(0.5, 2.0, members));
  f.score = [ex](int k, double x) { return std::pow(x, (*ex)[static_cast<size_t>(k)]); };
  f.cdf = [ex](int k, double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return std::pow(t, 1.0 / (*ex)[static_cast<size_t>(k)]);
  };
  return f;
}

ScoreFamily ScoreFamily::two_point(double p, double lo, double hi) {
  require(p > 0.0 && p < 1.0 && lo < hi, "two_point needs p in (0, 1) and lo < hi");
  ScoreFamily f;
  f.name = "two-point";
  f.size = 1;
  f.score = [p, lo, hi](int, double x) { return x < p ? lo : hi; };
  f.cdf = [p, lo, hi](int, double t) { return t < lo ? 0.0 : (t < hi ? p : 1.0); };
  f.atoms = [lo, hi](int) { return std::vector<double>{lo, hi}; };
  return f;
}

namespace {

CdfView exact_view(const ScoreFamily& fam, int k) {
  auto F = [fam, k](double t) { return fam.cdf(k, t); };
  if (fam.atoms) {
    auto at = fam.atoms(k);
    if (!at.empty()) {
      std::vector<double> vals;
      for (double a : at) vals.push_back(F(a));
      return CdfView::steps(at, vals);
    }
  }
  return CdfView::continuous(F);
}

}  // namespace

MarginExperimentResult margin_experiment(const ScoreFamily& family, const MarginExperimentConfig& cfg) {
  const auto& su = cfg.setup;
  require(su.alpha > 0.0 && su.alpha < 2.0 && su.D > 0.0, "margin setup needs alpha in (0, 2), D > 0");
  require(cfg.n >= 2 && cfg.reps >= 1 && cfg.lambda_n > 0.0 && cfg.q > 1.0, "margin_experiment: bad inputs");
  if (!family.cdf || !family.score) throw UnsupportedError("family without an analytic margin cdf");
  MarginExperimentResult out;
  const int m = std::min(cfg.subfamily, family.size);
  out.subfamily = family.name + " members 0.." + std::to_string(m - 1);
  out.t_n = margin_t_n(cfg.n, cfg.q, cfg.K);
  out.B = cfg.B > 0.0 ? cfg.B : margin_range_cap(su, cfg.n, out.t_n);

  std::vector<CdfView> exact;
  for (int k = 0; k < m; ++k) {
    exact.push_back(exact_view(family, k));
    out.cutoffs.push_back(margin_cutoff(exact.back().F, cfg.lambda_n, cfg.n, su.alpha));
  }

  // companion: the two bracket inequalities at width sigma
  const double t = cfg.t > 0.0 ? cfg.t : out.t_n;
  const double q = cfg.q, C = cfg.C, sg = cfg.sigma;
  out.c_assembled = q * C + std::max(2.0 * q * std::sqrt(1.0 + 16.0 * C), 2.0 * q / std::log(2.0));
  out.prob_bound = std::min(1.0, cfg.K * q * q / (q * q - 1.0) / t * std::exp(-t / (cfg.K * q * q)));
  const double lam_sigma = std::pow(su.D, 2.0 * su.alpha / (2.0 + su.alpha)) / (sg * sg);
  std::vector<double> cut_sigma;
  for (int k = 0; k < m; ++k) cut_sigma.push_back(margin_cutoff(exact[k].F, lam_sigma, cfg.n, su.alpha));
  std::vector<double> deltas;
  const double cap = margin_range_cap(su, cfg.n, t);
  for (int j = static_cast<int>(std::ceil(-std::log(cap) / std::log(q) - 1e-12));; ++j) {
    double d = std::pow(q, -j);
    if (d < 1.0 / static_cast<double>(cfg.n)) break;
    if (d <= cap) deltas.push_back(d);
  }
  out.deltas_checked = static_cast<long>(deltas.size());
  const bool check_lower = out.c_assembled * sg < 1.0;
  const size_t nd = deltas.size();

  auto rep = [&](long, std::uint64_t key) {
    CounterRng rng(key);
    std::vector<double> x;
    uniform_order_stats(rng, cfg.n, x);
    std::vector<double> res(1 + 2 * nd, 0.0);
    std::vector<double> sc(x.size());
    for (int k = 0; k < m; ++k) {
      for (size_t i = 0; i < x.size(); ++i) sc[i] = family.score(k, x[i]);
      CdfView Fn = CdfView::empirical(sc);
      res[0] = std::max(res[0], mult_levy_distance(Fn, exact[k], out.cutoffs[k], out.B));
      for (size_t j = 0; j < nd; ++j) {
        double d = deltas[j];
        if (!(cut_sigma[k] <= d)) continue;
        double Ff = exact[k].F(d);
        double Fnd = Fn.F(d);
        if (check_lower && Ff > 0.0 && Ff >= Fn.F((1.0 + sg) * d) / (1.0 - out.c_assembled * sg))
          res[1 + j] = 1.0;
        if (Fnd > 0.0 && Fnd >= (1.0 + out.c_assembled * sg) * exact[k].F((1.0 + sg) * d)) res[1 + nd + j] = 1.0;
      }
    }
    return res;
  };
  auto all = run_replicates_vec(cfg.reps, cfg.seed, cfg.workers, rep);
  std::vector<double> sup(static_cast<size_t>(cfg.reps));
  std::vector<double> lo(nd, 0.0), up(nd, 0.0);
  for (size_t r = 0; r < all.size(); ++r) {
    sup[r] = all[r][0];
    for (size_t j = 0; j < nd; ++j) {
      lo[j] += all[r][1 + j];
      up[j] += all[r][1 + nd + j];
    }
  }
  out.sup_m = summarize(sup, cfg.seed);
  for (size_t j = 0; j < nd; ++j) {
    out.lower_violation_freq = std::max(out.lower_violation_freq, lo[j] / static_cast<double>(cfg.reps));
    out.upper_violation_freq = std::max(out.upper_violation_freq, up[j] / static_cast<double>(cfg.reps));
  }
  return out;
}

}  // namespace ratiolab
