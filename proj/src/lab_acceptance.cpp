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
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <sstream>

#include "lab_internal.hpp"
#include "ratiolab/expect.hpp"
#include "ratiolab/lab.hpp"
#include "ratiolab/learn.hpp"
#include "ratiolab/peel.hpp"
#include "ratiolab/sim.hpp"

namespace ratiolab {

namespace {

using namespace detail;

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

std::string series(const std::vector<double>& v, int prec = 4) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], prec);
  return s + "]";
}

StudySpec spec(const AcceptanceOptions& o, int workers, const std::string& kind, const std::string& cls,
               std::vector<long> ns) {
  StudySpec s;
  s.kind = kind;
  s.cls = cls;
  s.n_grid = std::move(ns);
  s.reps = o.reps;
  s.seed = o.seed;
  s.workers = workers;
  return s;
}

void append_rows(std::vector<double>& fp, const StudyResult& r) {
  for (const auto& row : r.rows) fp.push_back(row.value);
}

// Slightly below x, so that ties computed with rounding still count.
double below(double x) { return x - 1e-9 * std::max(1.0, std::fabs(x)); }

// ------------------------------------------------------------- criterion 1

struct DictInstance {
  FiniteDict dict;
  int n = 0;
};

std::vector<DictInstance> dict_instances(std::uint64_t seed) {
  std::vector<DictInstance> out;
  for (int k = 0; k < 10; ++k) {
    CounterRng rng(stream_key(seed, 9000 + static_cast<std::uint64_t>(k)));
    DictInstance in;
    int m = 2 + k % 5;
    in.n = 2 + k % 4;
    double tot = 0.0;
    for (int x = 0; x < m; ++x) {
      in.dict.p.push_back(0.2 + rng.exponential());
      tot += in.dict.p.back();
    }
    double acc = 0.0;
    for (int x = 0; x + 1 < m; ++x) {
      in.dict.p[static_cast<size_t>(x)] /= tot;
      acc += in.dict.p[static_cast<size_t>(x)];
    }
    in.dict.p.back() = 1.0 - acc;
    // indicators of random nonempty proper subsets
    int members = 3 + k % 3;
    for (int f = 0; f < members; ++f) {
      std::vector<double> v(static_cast<size_t>(m), 0.0);
      int ones = 0;
      while (ones == 0 || ones == m) {
        ones = 0;
        for (int x = 0; x < m; ++x) {
          v[static_cast<size_t>(x)] = rng.bernoulli(0.5) ? 1.0 : 0.0;
          ones += static_cast<int>(v[static_cast<size_t>(x)]);
        }
      }
      in.dict.funcs.push_back(v);
    }
    out.push_back(in);
  }
  return out;
}

CriterionResult crit1(const AcceptanceOptions& o) {
  CriterionResult c{1, "exact-oracle domination", true, "", 0.0, {}};
  long checks = 0, violations = 0;
  std::string first;
  auto note = [&](bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++violations;
      if (first.empty()) first = what;
    }
  };
  int idx = 0;
  for (const auto& in : dict_instances(o.seed)) {
    ++idx;
    auto cls = FunctionClass::finite_dict(in.dict);
    const auto& p = in.dict.p;
    const size_t N = in.dict.funcs.size();
    std::vector<double> pf(N), var(N), sig(N);
    for (size_t k = 0; k < N; ++k) {
      double m = 0.0;
      for (size_t x = 0; x < p.size(); ++x) m += p[x] * in.dict.funcs[k][x];
      pf[k] = m;
      var[k] = m * (1.0 - m);
      sig[k] = std::sqrt(m);
    }
    const double smin = *std::min_element(sig.begin(), sig.end());
    const double smax = *std::max_element(sig.begin(), sig.end());
    const double vmax = *std::max_element(var.begin(), var.end());
    const std::vector<double> ones(N, 1.0);
    const std::vector<char> all(N, 1);
    const std::string tag = "instance " + std::to_string(idx);

    // concentration certificate around the exact slice expectations
    if (smax > smin) {
      auto g = build_grid(0.5 * smin, smax, 2.0);
      auto phi = NormWeight::power(1.0);
      std::vector<SliceStats> st(static_cast<size_t>(g.l));
      std::vector<double> w(N, 1.0);
      for (int j = 1; j <= g.l; ++j) {
        std::vector<char> act(N, 0);
        double v2 = 0.0;
        bool any = false;
        for (size_t k = 0; k < N; ++k)
          if (sig[k] > g.lo(j) && sig[k] <= g.hi(j)) {
            act[k] = 1;
            any = true;
            v2 = std::max(v2, var[k]);
            w[k] = phi(g.rho[static_cast<size_t>(j)]);
          }
        auto& s = st[static_cast<size_t>(j - 1)];
        s.sigma2 = v2;
        s.psi = any ? exact_small_oracle(p, in.n, dict_weighted_sup(cls, ones, act)).expectation() : 0.0;
      }
      CertificateQuery qy;
      qy.n = in.n;
      qy.U = 1.0;
      qy.s.assign(static_cast<size_t>(g.l), 2.0);
      qy.mode = Mode::Explicit;
      auto b = concentration_certificate(g, phi, st, qy);
      auto law = exact_small_oracle(p, in.n, dict_weighted_sup(cls, w, all));
      note(law.tail_ge(below(b.threshold)) <= b.prob + 1e-12, tag + ": concentration certificate");

      // ratio |P_n f / P f - 1| over the same range
      double beta = 0.0;
      for (int j = 1; j <= g.l; ++j)
        beta = std::max(beta, st[static_cast<size_t>(j - 1)].psi /
                                  (g.rho[static_cast<size_t>(j)] * g.rho[static_cast<size_t>(j)]));
      auto rb = ratio_bound_t2(in.n, 0.5 * smin, smax, 2.0, beta, 1.0, 1.0, Mode::Explicit);
      auto rlaw = exact_small_oracle(p, in.n, dict_weighted_sup(cls, pf, all));
      note(rlaw.tail_ge(below(rb.upper.threshold)) <= rb.upper.prob + 1e-12, tag + ": ratio bound");
    }

    // Bernstein, one member at a time and each tail separately
    for (size_t k = 0; k < N; ++k) {
      const auto& f = in.dict.funcs[k];
      const int n = in.n;
      const double mean = pf[k];
      auto law = exact_small_oracle(p, n, [f, mean](const std::vector<int>& cnt, int nn) {
        double s = 0.0;
        for (size_t x = 0; x < cnt.size(); ++x) s += cnt[x] * f[x];
        return s - nn * mean;
      });
      for (double t : {0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
        auto bt = bernstein_tail(n, var[k], t, 1.0);
        note(law.tail_ge(below(t)) <= bt.probability + 1e-12, tag + ": Bernstein upper tail");
        note(law.tail_le(-below(t)) <= bt.probability + 1e-12, tag + ": Bernstein lower tail");
      }
    }

    // Bousquet for Z = n sup |P_n f - P f|
    auto sup_all = dict_weighted_sup(cls, ones, all);
    auto zl = exact_small_oracle(p, in.n, [&](const std::vector<int>& cnt, int nn) { return nn * sup_all(cnt, nn); });
    const double ez = zl.expectation();
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
      auto bq = bousquet_tail(in.n, vmax, ez, t, 1.0);
      note(zl.tail_ge(below(bq.threshold)) <= bq.probability + 1e-12, tag + ": Bousquet");
    }
  }
  c.pass = violations == 0;
  c.detail = std::to_string(checks) + " checks on 10 instances, " + std::to_string(violations) + " violations" +
             (first.empty() ? "" : " (first: " + first + ")");
  return c;
}

// ------------------------------------------------------------- criterion 2

CriterionResult crit2(const AcceptanceOptions&) {
  CriterionResult c{2, "gamma machinery", true, "", 0.0, {}};
  long checks = 0, bad = 0;
  double worst_resid = 0.0;
  for (double x : linspace(0.0, 1000.0, 1000)) {
    double y = gamma_fn(x);
    double resid = std::fabs(gamma_inverse(y) - x) / std::max(1.0, x);
    worst_resid = std::max(worst_resid, resid);
    ++checks;
    if (!(resid <= 1e-10)) ++bad;
  }
  auto slack = [](double b) { return b * (1.0 + 1e-12); };
  for (double x : logspace(1e-8, 1e8, 1000)) {
    ++checks;
    if (!(gamma_fn(x) <= slack(2.0 * x / std::log1p(x)))) ++bad;
  }
  for (double x : logspace(2.0, 1e8, 1000)) {
    ++checks;
    if (!(gamma_fn(x) <= slack(2.0 * x / std::log(x)))) ++bad;
  }
  for (double x : linspace(0.0, 2.0, 1000)) {
    ++checks;
    if (!(gamma_fn(x) <= slack(2.0 * std::sqrt(x)))) ++bad;
  }
  auto grid = logspace(1e-4, 1e4, 100);
  for (double a : grid)
    for (double b : grid) {
      ++checks;
      if (!(gamma_fn(a + b) <= slack(gamma_fn(a) + gamma_fn(b)))) ++bad;
    }
  c.pass = bad == 0;
  c.detail = std::to_string(checks) + " checks, " + std::to_string(bad) + " violations, worst inversion residual " +
             fmt(worst_resid, 3);
  return c;
}

// ------------------------------------------------------------- criterion 3

CriterionResult crit3(const AcceptanceOptions& o, int workers) {
  CriterionResult c{3, "Eicker rate", true, "", 0.0, {}};
  auto s = spec(o, workers, "ratio-scaling", "HalfLine1D", {1000, 10000, 100000, 1000000});
  s.params["r"] = "inv-sqrt-n";
  s.weight = "power:1";
  auto r = run_study(s);
  append_rows(c.fingerprint, r);
  std::vector<double> ns;
  auto med = column(r, "sup", "median", &ns);
  auto fit = fit_slope(ns, med);
  auto st = stability_check(ns, med, [](double n) { return std::sqrt(n / std::log(std::log(n))); }, 1.5);
  c.pass = std::fabs(fit.slope + 0.5) <= 0.05 && st.pass;
  c.detail = "slope " + fmt(fit.slope) + " (target -0.5 +- 0.05); sqrt(n/loglog n) median " +
             series(st.normalized) + ", max/min " + fmt(st.ratio) + " (band 1.5)";
  return c;
}

// ------------------------------------------------------------- criterion 4

CriterionResult crit4(const AcceptanceOptions& o, int workers) {
  CriterionResult c{4, "d = 2 cdf rate", true, "", 0.0, {}};
  auto s = spec(o, workers, "ratio-scaling", "BoxCdf", {1000, 10000, 100000});
  s.params["r"] = "inv-sqrt-nlogn";
  s.params["delta"] = "0.5";
  s.params["M"] = "8";
  s.weight = "power:1";
  auto r = run_study(s);
  append_rows(c.fingerprint, r);
  std::vector<double> ns;
  auto med = column(r, "sup", "median", &ns);
  auto st = stability_check(ns, med, [](double n) { return std::sqrt(n / std::log(n)); }, 2.0);
  c.pass = st.pass;
  c.detail = "sqrt(n/log n) median " + series(st.normalized) + ", max/min " + fmt(st.ratio) + " (band 2)";
  return c;
}

// ------------------------------------------------------------- criterion 5

// beta_n = sup_{u > r} E sup_{u <= sigma_f < u q} |P_n f - P f| / u^2, the sliding
// window form. The window content only changes where u crosses some sigma_j
// or sigma_j / q, and the ratio is largest just to the right of a change, so
// those points (plus r itself) are the candidates.
double c0_beta(long n, double r, double q, double delta, long reps, std::uint64_t seed, int workers) {
  auto sig = [](long j) {
    double jd = static_cast<double>(j);
    return 1.0 / (jd * log_e(jd));
  };
  auto [j_top, j_bot] = coord_range(r / q, delta);  // j_top: first j with sigma_j <= delta
  std::vector<double> us;
  auto consider = [&](double b) {
    double u = b * (1.0 + 1e-9);
    if (u > r && u <= delta) us.push_back(u);
  };
  consider(r);
  for (long j = j_top; j <= j_bot + 1; ++j) {
    consider(sig(j));
    consider(sig(j) / q);
  }
  std::sort(us.begin(), us.end());
  struct Window {
    double u;
    long a, b;
  };
  std::vector<Window> win;
  for (double u : us) {
    long a = 1;
    while (sig(a) >= u * q) ++a;  // first j with sigma_j < u q
    long b = a - 1;
    while (sig(b + 1) >= u) ++b;  // last j with sigma_j >= u
    a = std::max(a, j_top);
    if (a <= b) win.push_back({u, a, b});
  }
  long jmax = 1;
  for (const auto& w : win) jmax = std::max(jmax, w.b);
  const auto unit = NormWeight::power(0.0);
  auto rows = run_replicates_vec(reps, seed, workers, [&](long, std::uint64_t key) {
    auto bt = draw_sample(Law::coord_c0(jmax), n, key);
    std::vector<double> v;
    for (const auto& w : win) v.push_back(sup_c0(bt, w.a, w.b, unit).value);
    return v;
  });
  double beta = 0.0;
  for (size_t k = 0; k < win.size(); ++k) {
    double m = 0.0;
    for (const auto& row : rows) m += row[k];
    m /= static_cast<double>(rows.size());
    beta = std::max(beta, m / (win[k].u * win[k].u));
  }
  return beta;
}

CriterionResult crit5(const AcceptanceOptions& o, int workers) {
  CriterionResult c{5, "c0 counterexample", true, "", 0.0, {}};
  const std::vector<long> grid{10000, 100000, 1000000};
  int good = 0;
  std::string det;
  for (int k = 0; k < 5; ++k) {
    AcceptanceOptions ok = o;
    ok.seed = o.seed + static_cast<std::uint64_t>(k);
    auto s = spec(ok, workers, "ratio-scaling", "CoordC0", grid);
    s.params["r"] = "logn-over-sqrt-n";
    s.params["delta"] = "0.5";
    s.weight = "power:2";
    auto r = run_study(s);
    append_rows(c.fingerprint, r);
    std::vector<double> ns;
    auto med = column(r, "sup", "median", &ns);
    auto st = stability_check(ns, med, [](double n) { return std::sqrt(std::log(n)); }, 2.0);
    std::vector<double> ratio;
    for (size_t i = 0; i < ns.size(); ++i) {
      double n = ns[i];
      double rn = std::log(n) / std::sqrt(n), qn = 1.0 + std::log(n) * std::log(n) / std::sqrt(n);
      double beta = c0_beta(grid[i], rn, qn, 0.5, o.reps, stream_key(point_seed(ok.seed, grid[i]), 77), workers);
      c.fingerprint.push_back(beta);
      ratio.push_back(med[i] / beta);
    }
    bool inc = true;
    for (size_t i = 1; i < ratio.size(); ++i) inc = inc && ratio[i] > ratio[i - 1];
    bool pass = st.pass && inc;
    good += pass;
    det += "; seed+" + std::to_string(k) + ": (log n)^1/2 sup max/min " + fmt(st.ratio, 3) + ", sup/beta " +
           series(ratio, 3) + (pass ? " ok" : " FAIL");
  }
  c.pass = good >= 5 * 0.9;
  c.detail = std::to_string(good) + "/5 seeds pass" + det;
  return c;
}

// ------------------------------------------------------------- criterion 6

CriterionResult crit6(const AcceptanceOptions&) {
  CriterionResult c{6, "monotone envelope", true, "", 0.0, {}};
  double worst = 0.0;
  for (double d : logspace(1e-3, 1.0, 20)) {
    double got = slice_envelope_norm(FunctionClass::monotone_unit(), {0.0, d}).norm;
    double want = d * d * std::log(kE / (d * d));
    c.fingerprint.push_back(got);
    worst = std::max(worst, std::fabs(got * got - want));
  }
  c.pass = worst <= 1e-6;
  c.detail = "20 delta values in [1e-3, 1], largest |difference| " + fmt(worst, 3);
  return c;
}

// ------------------------------------------------------------- criterion 7

CriterionResult crit7(const AcceptanceOptions& o, int workers) {
  CriterionResult c{7, "psi domination", true, "", 0.0, {}};
  long bad = 0, total = 0;
  double worst = kInf;
  for (long n : {1000L, 10000L}) {
    double nd = static_cast<double>(n);
    auto g = build_grid(1.0 / std::sqrt(nd), std::sqrt(0.5), 2.0);
    auto est = estimate_psi_beta(FunctionClass::half_line(), g, NormWeight::power(1.0), n, o.reps,
                                 point_seed(o.seed, n), workers);
    for (int j = 1; j <= g.l; ++j) {
      const auto& s = est.slices[static_cast<size_t>(j - 1)];
      c.fingerprint.insert(c.fingerprint.end(), s.values.begin(), s.values.end());
      double bound = 4.0 * g.hi(j) / std::sqrt(nd) + 3.0 * s.stderr_;
      worst = std::min(worst, bound / s.mean);
      ++total;
      if (!(s.mean <= bound)) ++bad;
    }
  }
  c.pass = bad == 0;
  c.detail = std::to_string(total) + " slices, " + std::to_string(bad) + " violations, smallest bound/estimate " +
             fmt(worst, 3);
  return c;
}

// ------------------------------------------------------------- criterion 8

CriterionResult crit8(const AcceptanceOptions& o, int workers) {
  CriterionResult c{8, "expectation sandwich", true, "", 0.0, {}};
  long bad = 0;
  std::string det;
  for (double sigma : {0.125, 0.25}) {
    auto s = spec(o, workers, "ratio-scaling", "Intervals1D", {10000, 100000});
    s.params["r"] = "0";
    s.params["delta"] = format_double(sigma);
    s.weight = "unit";
    auto r = run_study(s);
    append_rows(c.fingerprint, r);
    std::vector<double> ns;
    auto mean = column(r, "sup", "mean", &ns);
    auto se = column(r, "sup", "stderr");
    auto env = slice_envelope_norm(FunctionClass::intervals(), {0.0, sigma});
    auto model = intervals_entropy_model();
    auto full = fullness_estimate(FunctionClass::intervals(), sigma, 2000, stream_key(o.seed, 31), model);
    for (size_t i = 0; i < ns.size(); ++i) {
      long n = static_cast<long>(ns[i]);
      double mc = ns[i] * mean[i], mse = ns[i] * se[i];
      ExpectationQuery qy;
      qy.n = n;
      qy.sigma = sigma;
      qy.env_norm = env.norm;
      qy.model = model;
      qy.mode = Mode::Explicit;
      double up = expectation_upper(qy).value;
      auto lo = expectation_lower(n, sigma, full.packing_log_sigma, 1.0, model, env.norm);
      bool ok = lo.raw <= mc + 2.0 * mse && mc - 2.0 * mse <= up;
      bad += !ok;
      det += "; sigma=" + fmt(sigma, 3) + " n=" + std::to_string(n) + ": " + fmt(lo.raw) + " <= " + fmt(mc) +
             " (se " + fmt(mse, 2) + ") <= " + fmt(up) + (lo.premises_ok ? "" : " [lower premises fail]") +
             (ok ? "" : " VIOLATED");
    }
  }
  c.pass = bad == 0;
  c.detail = std::to_string(bad) + " violations" + det;
  return c;
}

// ------------------------------------------------------------- criterion 9

CriterionResult crit9(const AcceptanceOptions& o, int workers) {
  CriterionResult c{9, "ERM rates", true, "", 0.0, {}};
  // (a)
  auto a = spec(o, workers, "erm", "ls", {1000, 3000, 10000, 30000});
  a.params["d"] = "4";
  auto ra = run_study(a);
  append_rows(c.fingerprint, ra);
  auto fit = fit_slope(ra, "excess", "mean");
  bool pa = std::fabs(fit.slope + 1.0) <= 0.1;
  // (b)
  auto b = spec(o, workers, "erm", "isotonic", {1000, 10000, 100000});
  b.params["m"] = "3";
  auto rb = run_study(b);
  append_rows(c.fingerprint, rb);
  std::vector<double> ns;
  auto med = column(rb, "excess", "median", &ns);
  auto st = stability_check(
      ns, med, [](double n) { return n / (std::pow(std::log(n), 1.5) * std::log(std::log(n))); }, 2.0);
  // (c)
  bool pc = true;
  std::string dc;
  for (double h : {0.1, 0.3}) {
    auto cs = spec(o, workers, "erm", "classification", {10000});
    cs.params["h"] = format_double(h);
    cs.params["set"] = "intervals";
    cs.params["c_margin"] = "2";
    cs.params["mode"] = "explicit";
    auto rc = run_study(cs);
    append_rows(c.fingerprint, rc);
    double cov = column(rc, "covered_fraction", "value").at(0);
    double cert = column(rc, "certificate", "value").at(0);
    double medx = column(rc, "excess", "median").at(0);
    pc = pc && cov >= 0.95;
    dc += "; h=" + fmt(h, 2) + ": covered " + fmt(cov, 3) + " (certificate " + fmt(cert) + ", median excess " +
          fmt(medx, 3) + ")";
  }
  c.pass = pa && st.pass && pc;
  c.detail = "(a) slope " + fmt(fit.slope) + (pa ? " ok" : " FAIL") + "; (b) normalized median " +
             series(st.normalized) + " max/min " + fmt(st.ratio) + (st.pass ? " ok" : " FAIL") + "; (c)" + dc +
             (pc ? " ok" : " FAIL");
  return c;
}

// ------------------------------------------------------------ criterion 10

CriterionResult crit10(const AcceptanceOptions& o, int workers) {
  CriterionResult c{10, "margin ratios", true, "", 0.0, {}};
  auto s = spec(o, workers, "margin", "identity", {1000, 10000, 100000});
  s.params["D"] = "4";
  s.params["lambda"] = "log-n";
  auto r = run_study(s);
  append_rows(c.fingerprint, r);
  auto med = column(r, "sup_M", "median");
  bool dec = true;
  for (size_t i = 1; i < med.size(); ++i) dec = dec && med[i] < med[i - 1];
  c.pass = dec && med.back() < 0.1;
  c.detail = "median sup-M " + series(med) + (dec ? ", decreasing" : ", not decreasing") + ", last " +
             (med.back() < 0.1 ? "< 0.1" : ">= 0.1");
  return c;
}

// ------------------------------------------------------------ criterion 11

CriterionResult crit11(const AcceptanceOptions& o, int workers) {
  CriterionResult c{11, "CLT premises", true, "", 0.0, {}};
  CltPremiseInput in;
  in.r_n = [](double n) { return radius_rule("clt", n); };
  in.q_n = [](double) { return 2.0; };
  in.n_grid = {1e3, 1e4, 1e5, 1e6};
  in.delta_grid = {0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  in.psi_estimates = clt_psi_estimates(in.n_grid, in.r_n, 0.5, 2.0, o.reps, o.seed, workers);
  for (const auto& rows : in.psi_estimates)
    for (const auto& e : rows) c.fingerprint.insert(c.fingerprint.end(), e.begin(), e.end());
  in.weight = clt_weight(1.0);
  auto good = clt_premise_check(in);
  in.weight = clt_weight(0.25);
  auto weak = clt_premise_check(in);
  c.pass = good.pass && weak.conditions[0].verdict == "fail";
  std::string v1, v2;
  for (const auto& t : good.conditions) v1 += (v1.empty() ? "" : "/") + t.verdict;
  for (const auto& t : weak.conditions) v2 += (v2.empty() ? "" : "/") + t.verdict;
  c.detail = "loglog: " + v1 + (good.dominance_ok ? ", dominance ok" : ", dominance violated") +
             " (radius term " + series(good.conditions[1].values) + "); loglog^1/4: " + v2 + " (local modulus " +
             series(weak.conditions[0].values) + ")";
  return c;
}

CriterionResult run_one(int id, const AcceptanceOptions& o, int workers) {
  switch (id) {
    case 1: return crit1(o);
    case 2: return crit2(o);
    case 3: return crit3(o, workers);
    case 4: return crit4(o, workers);
    case 5: return crit5(o, workers);
    case 6: return crit6(o);
    case 7: return crit7(o, workers);
    case 8: return crit8(o, workers);
    case 9: return crit9(o, workers);
    case 10: return crit10(o, workers);
    case 11: return crit11(o, workers);
  }
  throw DomainError("no criterion " + std::to_string(id));
}

const char* kNames[] = {"",
                        "exact-oracle domination",
                        "gamma machinery",
                        "Eicker rate",
                        "d = 2 cdf rate",
                        "c0 counterexample",
                        "monotone envelope",
                        "psi domination",
                        "expectation sandwich",
                        "ERM rates",
                        "margin ratios",
                        "CLT premises",
                        "determinism"};

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  using clock = std::chrono::steady_clock;
  auto wanted = [&](int id) { return opt.only.empty() || std::count(opt.only.begin(), opt.only.end(), id) > 0; };
  std::vector<CriterionResult> out;
  std::map<int, std::vector<double>> prints;
  auto timed = [&](int id, int workers) {
    auto t0 = clock::now();
    CriterionResult c;
    try {
      c = run_one(id, opt, workers);
    } catch (const std::exception& e) {
      c = CriterionResult{id, kNames[id], false, std::string("error: ") + e.what(), 0.0, {}};
    }
    c.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    return c;
  };
  for (int id = 1; id <= 11; ++id) {
    if (!wanted(id)) continue;
    auto c = timed(id, opt.workers);
    prints[id] = c.fingerprint;
    out.push_back(c);
    if (opt.on_result) opt.on_result(c);
  }
  if (wanted(12)) {
    auto t0 = clock::now();
    CriterionResult d{12, kNames[12], true, "", 0.0, {}};
    std::string diff;
    long values = 0;
    for (int id = 3; id <= 11; ++id) {
      if (!prints.count(id)) prints[id] = timed(id, opt.workers).fingerprint;
      auto again = timed(id, opt.workers).fingerprint;
      auto four = timed(id, 4).fingerprint;
      values += static_cast<long>(prints[id].size());
      bool ok = !prints[id].empty() && same_bits(prints[id], again) && same_bits(prints[id], four);
      if (!ok) {
        d.pass = false;
        diff += " " + std::to_string(id);
      }
    }
    d.detail = "criteria 3-11 rerun with " + std::to_string(opt.workers) + " and 4 workers, " +
               std::to_string(values) + " values compared" +
               (diff.empty() ? ", all bit-identical" : ", differences in criteria" + diff);
    d.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.push_back(d);
    if (opt.on_result) opt.on_result(d);
  }
  return out;
}

std::string format_criterion(const CriterionResult& c) {
  std::ostringstream os;
  os << "criterion " << (c.id < 10 ? " " : "") << c.id << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name
     << "  [" << fmt(c.seconds, 3) << " s]  " << c.detail;
  return os.str();
}

}  // namespace ratiolab
