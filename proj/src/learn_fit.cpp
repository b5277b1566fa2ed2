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
#include <numeric>

#include <Eigen/Dense>

#include "ratiolab/learn.hpp"

namespace ratiolab {

// ------------------------------------------------------ least squares

double eval_cosine_fit(const std::vector<double>& coef, double x) {
  double v = 0.0;
  for (size_t k = 0; k < coef.size(); ++k) v += coef[k] * cosine_basis(static_cast<int>(k), x);
  return v;
}

LsFit fit_finite_dim_ls(const SampleBatch& b, int d) {
  require(b.law.kind == LawKind::RegressionPair, "fit_finite_dim_ls needs a regression batch");
  require(d >= 1 && b.n >= 1, "fit_finite_dim_ls needs d >= 1 and a nonempty batch");
  const long n = b.n;
  Eigen::MatrixXd X(n, d);
  Eigen::VectorXd y(n);
  for (long i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) X(i, k) = cosine_basis(k, b.x[static_cast<size_t>(i)]);
    y(i) = b.y[static_cast<size_t>(i)];
  }
  Eigen::MatrixXd G = X.transpose() * X / static_cast<double>(n);
  Eigen::VectorXd rhs = X.transpose() * y / static_cast<double>(n);
  LsFit out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff(), lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > 1e-12 * std::max(lmax, 1.0))) {
    out.ridge = true;
    G += 1e-10 * Eigen::MatrixXd::Identity(d, d);
  }
  Eigen::VectorXd c = G.ldlt().solve(rhs);
  out.coef.assign(c.data(), c.data() + d);

  // keep g in [0, 1]: shrink toward the constant 1/2 along the segment
  double lam = 1.0;
  auto limit = [&](double v) {
    if (v > 1.0) lam = std::min(lam, 0.5 / (v - 0.5));
    if (v < 0.0) lam = std::min(lam, 0.5 / (0.5 - v));
  };
  for (int i = 0; i <= 4096; ++i) limit(eval_cosine_fit(out.coef, i / 4096.0));
  for (double x : b.x) limit(eval_cosine_fit(out.coef, x));
  if (lam < 1.0) {
    out.projected = true;
    out.shrink = lam;
    for (auto& v : out.coef) v *= lam;
    out.coef[0] += (1.0 - lam) * 0.5;
  }
  double risk = 0.0;
  for (long i = 0; i < n; ++i) {
    double r = b.y[static_cast<size_t>(i)] - eval_cosine_fit(out.coef, b.x[static_cast<size_t>(i)]);
    risk += r * r;
  }
  out.emp_risk = risk / static_cast<double>(n);
  const auto& g0 = b.law.g0;
  out.excess = integrate([&](double x) {
                 double e = eval_cosine_fit(out.coef, x) - g0(x);
                 return e * e;
               }, 0.0, 1.0, 1e-12).value;
  return out;
}

// ------------------------------------------------------------ isotonic

double IsoFit::operator()(double x) const {
  if (values.empty()) return 0.0;
  auto k = std::upper_bound(knots.begin(), knots.end(), x) - knots.begin();
  return values[static_cast<size_t>(std::max<long>(k - 1, 0))];
}

IsoFit fit_isotonic(const SampleBatch& b) {
  require(b.n >= 1 && b.y.size() == static_cast<size_t>(b.n), "fit_isotonic needs paired data");
  require(std::is_sorted(b.x.begin(), b.x.end()), "fit_isotonic needs x sorted");
  const long n = b.n;
  struct Block {
    double sum, cnt;
    long start;
  };
  std::vector<Block> st;
  for (long i = 0; i < n; ++i) {
    st.push_back({b.y[static_cast<size_t>(i)], 1.0, i});
    while (st.size() > 1 && st[st.size() - 2].sum / st[st.size() - 2].cnt >= st.back().sum / st.back().cnt) {
      Block top = st.back();
      st.pop_back();
      st.back().sum += top.sum;
      st.back().cnt += top.cnt;
    }
  }
  IsoFit out;
  double raw_risk = 0.0, risk = 0.0;
  for (size_t k = 0; k < st.size(); ++k) {
    double mean = st[k].sum / st[k].cnt;
    double v = std::clamp(mean, 0.0, 1.0);
    out.knots.push_back(b.x[static_cast<size_t>(st[k].start)]);
    out.values.push_back(v);
    long end = k + 1 < st.size() ? st[k + 1].start : n;
    for (long i = st[k].start; i < end; ++i) {
      double yi = b.y[static_cast<size_t>(i)];
      raw_risk += (yi - mean) * (yi - mean);
      risk += (yi - v) * (yi - v);
    }
  }
  const double nn = static_cast<double>(n);
  out.emp_risk = risk / nn;
  out.clip_gap = (risk - raw_risk) / nn;
  out.tolerance = std::pow(log_e(nn), 1.5) * loglog_e(nn) / (2.0 * nn);
  out.within_tolerance = out.clip_gap <= out.tolerance;
  if (b.law.g0) {
    const auto& g0 = b.law.g0;
    double ex = 0.0;
    for (size_t k = 0; k < out.values.size(); ++k) {
      double lo = k == 0 ? 0.0 : out.knots[k];
      double hi = k + 1 < out.values.size() ? out.knots[k + 1] : 1.0;
      if (hi <= lo) continue;
      double v = out.values[k];
      ex += integrate([&](double x) { return (v - g0(x)) * (v - g0(x)); }, lo, hi, 1e-13).value;
    }
    out.excess = ex;
  }
  return out;
}

// ------------------------------------------------------ classification

namespace {

bool in_set(SetClass cls, const std::vector<double>& p, const double* x) {
  switch (cls) {
    case SetClass::HalfLines: return x[0] <= p[0];
    case SetClass::Intervals: return p[0] <= x[0] && x[0] <= p[1];
    case SetClass::Boxes: return x[0] <= p[0] && x[1] <= p[1];
  }
  return false;
}

double mid(const std::vector<double>& s, long k) {
  // a cut between s[k-1] and s[k]; 0 before the first, 1 after the last
  if (k <= 0) return 0.0;
  if (k >= static_cast<long>(s.size())) return 1.0;
  return 0.5 * (s[static_cast<size_t>(k - 1)] + s[static_cast<size_t>(k)]);
}

}  // namespace

double classification_excess(SetClass cls, const std::vector<double>& params,
                             const std::function<double(double)>& eta1,
                             const std::function<double(double, double)>& eta2) {
  if (cls == SetClass::Boxes) {
    require(static_cast<bool>(eta2) && params.size() == 2, "box excess needs eta2 and {t1, t2}");
    auto inner = [&](double x1) {
      return integrate([&](double x2) {
               double e = eta2(x1, x2);
               double xs[2] = {x1, x2};
               return in_set(cls, params, xs) != (e >= 0.5) ? std::fabs(2.0 * e - 1.0) : 0.0;
             }, 0.0, 1.0, 1e-10, 30).value;
    };
    double cuts[3] = {0.0, std::clamp(params[0], 0.0, 1.0), 1.0};
    double tot = 0.0;
    for (int k = 0; k < 2; ++k)
      if (cuts[k + 1] > cuts[k]) tot += integrate(inner, cuts[k], cuts[k + 1], 1e-9, 30).value;
    return tot;
  }
  require(static_cast<bool>(eta1), "one-dimensional excess needs eta");
  auto f = [&](double x) {
    double e = eta1(x);
    double xs[2] = {x, 0.0};
    return in_set(cls, params, xs) != (e >= 0.5) ? std::fabs(2.0 * e - 1.0) : 0.0;
  };
  std::vector<double> cuts = {0.0, 1.0};
  for (double v : params) cuts.push_back(std::clamp(v, 0.0, 1.0));
  std::sort(cuts.begin(), cuts.end());
  double tot = 0.0;
  for (size_t k = 0; k + 1 < cuts.size(); ++k)
    if (cuts[k + 1] > cuts[k]) tot += integrate(f, cuts[k], cuts[k + 1], 1e-13, 50).value;
  return tot;
}

ClassifierFit fit_margin_classifier(const std::vector<double>& x, const std::vector<double>& y, int dim,
                                    SetClass cls, const std::function<double(double)>& eta1,
                                    const std::function<double(double, double)>& eta2) {
  const long n = static_cast<long>(y.size());
  require(n >= 1 && x.size() == y.size() * static_cast<size_t>(dim), "labels and points disagree");
  const bool box = cls == SetClass::Boxes;
  if (box && dim != 2) throw UnsupportedError("box classifiers are implemented for d = 2");
  if (!box && dim != 1) throw UnsupportedError("half-lines and intervals need d = 1");
  ClassifierFit out;
  out.cls = cls;
  double n1 = 0.0;
  for (double v : y) n1 += v;

  if (!box) {
    std::vector<long> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0L);
    std::stable_sort(idx.begin(), idx.end(), [&](long a, long b) { return x[a] < x[b]; });
    std::vector<double> xs(static_cast<size_t>(n)), w(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
      xs[i] = x[static_cast<size_t>(idx[i])];
      w[i] = 2.0 * y[static_cast<size_t>(idx[i])] - 1.0;  // gain from putting the point inside
    }
    if (cls == SetClass::HalfLines) {
      double best = 0.0, run = 0.0;
      long bk = 0;
      for (long k = 1; k <= n; ++k) {
        run += w[k - 1];
        if (run > best) {
          best = run;
          bk = k;
        }
      }
      out.params = {mid(xs, bk)};
      out.emp_error = (n1 - best) / static_cast<double>(n);
      out.candidates = n + 1;
    } else {
      // best contiguous run, empty allowed; first maximum wins
      double best = 0.0, run = 0.0;
      long bl = 0, br = -1, l = 0;
      for (long k = 0; k < n; ++k) {
        if (run <= 0.0) {
          run = 0.0;
          l = k;
        }
        run += w[k];
        if (run > best) {
          best = run;
          bl = l;
          br = k;
        }
      }
      out.params = br < 0 ? std::vector<double>{0.0, 0.0} : std::vector<double>{mid(xs, bl), mid(xs, br + 1)};
      out.emp_error = (n1 - best) / static_cast<double>(n);
      out.candidates = n * (n + 1) / 2 + 1;
    }
    out.excess = classification_excess(cls, out.params, eta1, eta2);
    return out;
  }

  // anchored boxes [0, t1] x [0, t2]: sweep t1, max prefix over the x2 order
  std::vector<double> x1(static_cast<size_t>(n)), x2(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    x1[i] = x[2 * i];
    x2[i] = x[2 * i + 1];
  }
  std::vector<long> o1(static_cast<size_t>(n)), o2(static_cast<size_t>(n)), rank2(static_cast<size_t>(n));
  std::iota(o1.begin(), o1.end(), 0L);
  std::iota(o2.begin(), o2.end(), 0L);
  std::stable_sort(o1.begin(), o1.end(), [&](long a, long b) { return x1[a] < x1[b]; });
  std::stable_sort(o2.begin(), o2.end(), [&](long a, long b) { return x2[a] < x2[b]; });
  for (long r = 0; r < n; ++r) rank2[o2[r]] = r;
  std::vector<double> s1(static_cast<size_t>(n)), s2(static_cast<size_t>(n));
  for (long r = 0; r < n; ++r) {
    s1[r] = x1[o1[r]];
    s2[r] = x2[o2[r]];
  }
  std::vector<double> col(static_cast<size_t>(n), 0.0);
  double best = 0.0;
  long bk1 = 0, bk2 = 0;
  for (long k1 = 1; k1 <= n; ++k1) {
    long i = o1[k1 - 1];
    col[rank2[i]] = 2.0 * y[static_cast<size_t>(i)] - 1.0;
    double run = 0.0;
    for (long k2 = 1; k2 <= n; ++k2) {
      run += col[k2 - 1];
      if (run > best) {
        best = run;
        bk1 = k1;
        bk2 = k2;
      }
    }
  }
  out.params = {mid(s1, bk1), mid(s2, bk2)};
  out.emp_error = (n1 - best) / static_cast<double>(n);
  out.candidates = (n + 1) * (n + 1);
  out.excess = classification_excess(cls, out.params, eta1, eta2);
  return out;
}

ClassifierFit fit_margin_classifier(const SampleBatch& b, SetClass cls) {
  require(b.law.kind == LawKind::ClassificationPair, "fit_margin_classifier needs a classification batch");
  return fit_margin_classifier(b.x, b.y, 1, cls, b.law.eta);
}

}  // namespace ratiolab
