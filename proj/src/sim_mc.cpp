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
#include <cstdlib>
#include <exception>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "ratiolab/sim.hpp"

namespace ratiolab {

// ---------------------------------------------------------------- summaries

double quantile7(std::vector<double> v, double p) {
  require(!v.empty(), "quantile of an empty sample");
  std::sort(v.begin(), v.end());
  double h = (static_cast<double>(v.size()) - 1.0) * p;
  size_t lo = static_cast<size_t>(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

ReplicationSummary summarize(const std::vector<double>& v, std::uint64_t seed) {
  require(!v.empty(), "summary of an empty sample");
  ReplicationSummary s;
  s.values = v;
  s.master_seed = seed;
  // sums over the sorted values, so the summary ignores replicate order
  std::vector<double> w = v;
  std::sort(w.begin(), w.end());
  double n = static_cast<double>(w.size());
  double sum = 0.0;
  for (double x : w) sum += x;
  s.mean = sum / n;
  if (w.size() > 1) {
    double ss = 0.0;
    for (double x : w) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  s.median = quantile7(w, 0.5);
  s.q90 = quantile7(w, 0.9);
  s.q95 = quantile7(w, 0.95);
  return s;
}

// ---------------------------------------------------------------- drivers

int default_workers() {
  if (const char* e = std::getenv("RATIOLAB_WORKERS")) {
    int w = std::atoi(e);
    if (w >= 1) return w;
  }
  return std::max(1, omp_get_max_threads());
}

std::vector<double> run_replicates_serial(long reps, std::uint64_t master, const ReplicateFn& fn) {
  require(reps >= 1, "need at least one replicate");
  std::vector<double> out(static_cast<size_t>(reps));
  for (long i = 0; i < reps; ++i) out[static_cast<size_t>(i)] = fn(i, stream_key(master, static_cast<std::uint64_t>(i)));
  return out;
}

std::vector<double> run_replicates(long reps, std::uint64_t master, int workers, const ReplicateFn& fn) {
  require(reps >= 1, "need at least one replicate");
  if (workers <= 1) return run_replicates_serial(reps, master, fn);
  std::vector<double> out(static_cast<size_t>(reps));
  std::exception_ptr err;
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
  for (long i = 0; i < reps; ++i) {
    try {
      out[static_cast<size_t>(i)] = fn(i, stream_key(master, static_cast<std::uint64_t>(i)));
    } catch (...) {
#pragma omp critical(ratiolab_replicate_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<std::vector<double>> run_replicates_vec(long reps, std::uint64_t master, int workers,
                                                    const ReplicateVecFn& fn) {
  require(reps >= 1, "need at least one replicate");
  std::vector<std::vector<double>> out(static_cast<size_t>(reps));
  std::exception_ptr err;
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(dynamic, 1)
  for (long i = 0; i < reps; ++i) {
    try {
      out[static_cast<size_t>(i)] = fn(i, stream_key(master, static_cast<std::uint64_t>(i)));
    } catch (...) {
#pragma omp critical(ratiolab_replicate_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

// ---------------------------------------------------------------- psi / beta

namespace {

double coord_sigma(long j) {
  double jd = static_cast<double>(j);
  return 1.0 / (jd * log_e(jd));
}

// Indices j with sigma_j in (lo, hi]; empty when first > last.
std::pair<long, long> coord_range(double lo, double hi) {
  long first = 1;
  while (coord_sigma(first) > hi) ++first;
  long last = first - 1;
  while (coord_sigma(last + 1) > lo) ++last;
  return {first, last};
}

}  // namespace

PsiBetaEstimate estimate_psi_beta(const FunctionClass& cls, const PeelingGrid& g, const NormWeight& phi,
                                  long n, long reps, std::uint64_t seed, int workers) {
  require(n >= 1 && reps >= 1, "estimate_psi_beta needs n >= 1 and reps >= 1");
  const int l = g.l;
  const NormWeight unit = NormWeight::power(0.0);
  ReplicateVecFn rep;

  switch (cls.kind) {
    case ClassKind::HalfLine1D: {
      if (cls.sigma != SigmaConvention::SqrtMean)
        throw UnsupportedError("half-line simulation uses the sqrt-mean convention");
      rep = [=](long, std::uint64_t key) {
        auto b = draw_sample(Law::uniform1d(), n, key);
        std::vector<double> out(static_cast<size_t>(l), 0.0);
        for (int j = 1; j <= l; ++j) {
          double tl = g.lo(j) * g.lo(j), th = std::min(g.hi(j) * g.hi(j), 0.5);
          if (tl < th) out[static_cast<size_t>(j - 1)] = sup_halfline(b, tl, th, unit).value;
        }
        return out;
      };
      break;
    }
    case ClassKind::Intervals1D:
      rep = [=](long, std::uint64_t key) {
        auto b = draw_sample(Law::uniform1d(), n, key);
        std::vector<double> out(static_cast<size_t>(l), 0.0);
        for (int j = 1; j <= l; ++j) {
          double lo = g.lo(j), hi = std::min(g.hi(j), 1.0);
          if (lo < hi) out[static_cast<size_t>(j - 1)] = sup_intervals(b, lo, hi, unit).value;
        }
        return out;
      };
      break;
    case ClassKind::BoxCdf: {
      int d = cls.dim;
      rep = [=](long, std::uint64_t key) {
        auto b = draw_sample(Law::uniform_box(d), n, key);
        std::vector<double> out(static_cast<size_t>(l), 0.0);
        for (int j = 1; j <= l; ++j) {
          double lo = g.lo(j), hi = std::min(g.hi(j), std::sqrt(0.5));
          if (lo < hi) out[static_cast<size_t>(j - 1)] = sup_box(b, lo, hi, unit).value;
        }
        return out;
      };
      break;
    }
    case ClassKind::CoordC0: {
      auto last = coord_range(g.r, 1.0).second;
      rep = [=](long, std::uint64_t key) {
        auto b = draw_sample(Law::coord_c0(std::max(1L, last)), n, key);
        std::vector<double> out(static_cast<size_t>(l), 0.0);
        for (int j = 1; j <= l; ++j) {
          auto [a, z] = coord_range(g.lo(j), g.hi(j));
          if (a <= z) out[static_cast<size_t>(j - 1)] = sup_c0(b, a, z, unit).value;
        }
        return out;
      };
      break;
    }
    case ClassKind::FiniteDict: {
      const FiniteDict dict = cls.dict;
      std::vector<double> pf, sig;
      for (size_t k = 0; k < dict.funcs.size(); ++k) {
        double m = 0.0;
        for (size_t x = 0; x < dict.p.size(); ++x) m += dict.p[x] * dict.funcs[k][x];
        pf.push_back(m);
        sig.push_back(sigma_of(cls, Member{{static_cast<double>(k)}}));
      }
      rep = [=](long, std::uint64_t key) {
        CounterRng rng(key);
        auto c = draw_counts(rng, dict.p, n);
        std::vector<double> out(static_cast<size_t>(l), 0.0);
        for (size_t k = 0; k < dict.funcs.size(); ++k) {
          double s = 0.0;
          for (size_t x = 0; x < c.size(); ++x) s += c[x] * dict.funcs[k][x];
          double dev = std::fabs(s / static_cast<double>(n) - pf[k]);
          for (int j = 1; j <= l; ++j)
            if (sig[k] > g.lo(j) && sig[k] <= g.hi(j))
              out[static_cast<size_t>(j - 1)] = std::max(out[static_cast<size_t>(j - 1)], dev);
        }
        return out;
      };
      break;
    }
    default:
      throw UnsupportedError("no exact slice supremum for class " + to_string(cls.kind));
  }

  auto rows = run_replicates_vec(reps, seed, workers, rep);
  PsiBetaEstimate est;
  std::vector<double> weighted(static_cast<size_t>(reps), 0.0);
  for (int j = 1; j <= l; ++j) {
    std::vector<double> col(static_cast<size_t>(reps));
    double w = phi(g.rho[static_cast<size_t>(j)]);
    for (long i = 0; i < reps; ++i) {
      col[static_cast<size_t>(i)] = rows[static_cast<size_t>(i)][static_cast<size_t>(j - 1)];
      weighted[static_cast<size_t>(i)] = std::max(weighted[static_cast<size_t>(i)], col[static_cast<size_t>(i)] / w);
    }
    est.slices.push_back(summarize(col, seed));
    est.beta_hat = std::max(est.beta_hat, est.slices.back().mean / w);
  }
  est.weighted = summarize(weighted, seed);
  est.e_hat = est.weighted.mean;
  return est;
}

// ---------------------------------------------------------------- CLT premises

namespace {

std::string trend_verdict(const std::vector<double>& v) {
  if (v.size() < 2) return "insufficient-evidence";
  bool strict = true;
  for (size_t i = 1; i < v.size(); ++i) strict = strict && v[i] < v[i - 1];
  if (strict) return "pass";
  if (v.back() >= v.front()) return "fail";
  return "insufficient-evidence";
}

}  // namespace

CltPremiseReport clt_premise_check(const CltPremiseInput& in) {
  const auto& psi = in.weight.psi;
  require(static_cast<bool>(psi), "clt_premise_check needs a weight psi");
  require(in.r_n && in.q_n, "clt_premise_check needs r_n and q_n");
  require(!in.n_grid.empty() && !in.delta_grid.empty(), "clt_premise_check needs n and delta grids");
  CltPremiseReport rep;

  // psi(t)/t must increase as t runs through 10^-1 .. 10^-8
  double prev = -kInf;
  rep.weight_ok = true;
  for (int k = 1; k <= 8; ++k) {
    double t = std::pow(10.0, -k);
    double v = psi(t) / t;
    if (!(v > prev)) rep.weight_ok = false;
    prev = v;
  }
  if (!rep.weight_ok)
    throw DomainError("'" + in.weight.name + "' is not a weight: psi(t)/t does not grow as t -> 0");
  for (double x : logspace(1e-12, 0.25, 400)) rep.doubling_constant = std::max(rep.doubling_constant, psi(2.0 * x) / psi(x));

  auto llq = [](double r, double q) {
    double v = std::log(1.0 / r) / std::log(q);
    return v > 1.0 ? std::log(v) : 0.0;
  };

  // local modulus: sup over r in (r_n, delta] of r sqrt(loglog_q 1/r) / psi(r), max over the n grid
  TrendSeries c4{"ratio of r sqrt(log log_q 1/r) to psi(r)", in.delta_grid, {}, ""};
  for (double delta : in.delta_grid) {
    double s = 0.0;
    for (double n : in.n_grid) {
      double rn = in.r_n(n), q = in.q_n(n);
      if (rn >= delta) continue;
      auto rs = logspace(rn * (1.0 + 1e-9), delta, 400);
      for (double r : rs) s = std::max(s, r * std::sqrt(llq(r, q)) / psi(r));
    }
    c4.values.push_back(s);
  }
  c4.verdict = trend_verdict(c4.values);

  // radius term: log log_q(1/r_n) / (psi(r_n) sqrt n)
  TrendSeries c5{"log log_q(1/r_n) over psi(r_n) sqrt n", in.n_grid, {}, ""};
  for (double n : in.n_grid) {
    double rn = in.r_n(n);
    c5.values.push_back(llq(rn, in.q_n(n)) / (psi(rn) * std::sqrt(n)));
  }
  c5.verdict = trend_verdict(c5.values);

  // local mean: sup over grid points r in (r_n, delta] of sqrt n psi_hat(r) / psi(r)
  TrendSeries c6{"sqrt n psi_n(r) over psi(r)", in.delta_grid, {}, ""};
  bool have = !in.psi_estimates.empty();
  if (have) {
    require(in.psi_estimates.size() == in.n_grid.size(), "one psi estimate list per n");
    for (double delta : in.delta_grid) {
      double s = 0.0;
      for (size_t i = 0; i < in.n_grid.size(); ++i) {
        double n = in.n_grid[i], rn = in.r_n(n);
        for (const auto& e : in.psi_estimates[i])
          if (e[0] > rn && e[0] <= delta) s = std::max(s, std::sqrt(n) * e[1] / psi(e[0]));
      }
      c6.values.push_back(s);
    }
    c6.verdict = trend_verdict(c6.values);
  } else {
    c6.verdict = "insufficient-evidence";
  }
  rep.conditions = {c4, c5, c6};

  // dominance omega(t) >= sqrt n psi_hat(t), allowing two standard errors
  auto omega = in.omega ? in.omega : std::function<double(double)>([](double t) { return 4.0 * t; });
  double worst = kInf;
  std::ostringstream os;
  for (size_t i = 0; i < in.psi_estimates.size(); ++i) {
    double sn = std::sqrt(in.n_grid[i]);
    for (const auto& e : in.psi_estimates[i]) {
      double lhs = omega(e[0]), rhs = sn * (e[1] - 2.0 * e[2]);
      double margin = lhs - rhs;
      if (margin < worst) worst = margin;
      if (margin < 0.0) {
        rep.dominance_ok = false;
        os << "n=" << in.n_grid[i] << " r=" << e[0] << ": omega " << lhs << " < " << rhs << "; ";
      }
    }
  }
  if (rep.dominance_ok) os << "smallest margin " << worst;
  rep.dominance_detail = os.str();
  rep.pass = rep.weight_ok && rep.dominance_ok &&
             std::all_of(rep.conditions.begin(), rep.conditions.end(),
                         [](const TrendSeries& t) { return t.verdict == "pass"; });
  return rep;
}

}  // namespace ratiolab
