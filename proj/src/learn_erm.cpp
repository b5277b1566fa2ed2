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
#include <sstream>

#include "ratiolab/learn.hpp"

namespace ratiolab {

std::string to_string(ErmKind k) {
  switch (k) {
    case ErmKind::FiniteDimLS: return "finite-dim-ls";
    case ErmKind::MonotoneLS: return "monotone-ls";
    case ErmKind::MarginClassification: return "margin-classification";
    case ErmKind::FiniteDict: return "finite-dict";
    case ErmKind::Model: return "model";
  }
  return "?";
}

std::string to_string(SetClass k) {
  switch (k) {
    case SetClass::HalfLines: return "halflines";
    case SetClass::Intervals: return "intervals";
    case SetClass::Boxes: return "boxes";
  }
  return "?";
}

SetClass set_class_from_string(const std::string& s) {
  if (s == "halflines" || s == "half-lines") return SetClass::HalfLines;
  if (s == "intervals") return SetClass::Intervals;
  if (s == "boxes") return SetClass::Boxes;
  throw ConfigError("unknown set class: " + s);
}

double gamma_n(double r, double s, long n, double beta, double Delta) {
  require(r > 0.0 && s > 0.0 && n >= 1 && beta >= 0.0 && Delta >= 0.0, "gamma_n: bad inputs");
  const double nr = static_cast<double>(n) * r;
  const double v = Delta + 16.0 * beta;
  const double gauss = 2.0 * std::sqrt(s / nr * v);
  const double arg = v > 0.0 ? std::max(s / (nr * v), 2.0) : 2.0;
  const double poisson = 2.0 * s / (nr * std::log(arg));
  return beta + std::max(gauss, poisson);
}

double gamma_n(double r, double s, long n, const std::function<double(double)>& beta_fn,
               const std::function<double(double)>& Delta_fn) {
  return gamma_n(r, s, n, beta_fn(r), Delta_fn(r));
}

// ------------------------------------------------------------- problems

ErmProblem ErmProblem::finite_dim_ls(int d, double K) {
  require(d >= 1 && K > 0.0, "finite_dim_ls needs d >= 1, K > 0");
  ErmProblem p;
  p.kind = ErmKind::FiniteDimLS;
  p.name = "finite-dim-ls d=" + std::to_string(d);
  p.d = d;
  p.K = K;
  const double L = log_e(std::sqrt(static_cast<double>(d)));
  p.psi_shape = [K, L](double rho, long n) {
    double nn = static_cast<double>(n);
    return K * std::max(std::sqrt(rho * L / nn), L / nn);
  };
  // symmetrization (4) times contraction with Lipschitz constant 2 (x 2 x 2),
  // then Cauchy-Schwarz over the orthonormal coordinates
  p.psi_explicit = [d](double rho, long n) {
    return 16.0 * std::sqrt(static_cast<double>(d) * std::min(rho, 1.0) / static_cast<double>(n));
  };
  p.diam2 = [](double rho) { return std::min(16.0 * rho, 4.0); };
  p.tau = [d](double) { return std::sqrt(static_cast<double>(d)); };
  p.U = 2.0;
  return p;
}

ErmProblem ErmProblem::monotone_ls(int m, double K) {
  require(m >= 0 && K > 0.0, "monotone_ls needs m >= 0, K > 0");
  ErmProblem p;
  p.kind = ErmKind::MonotoneLS;
  p.name = "monotone-ls m=" + std::to_string(m);
  p.m = m;
  p.K = K;
  p.psi_shape = [K](double rho, long n) {
    double nn = static_cast<double>(n);
    double L = log_e(1.0 / rho), LL = loglog_e(1.0 / rho);
    double a = K / std::sqrt(nn) * std::sqrt(rho) * std::pow(L, 0.75) * std::sqrt(LL);
    double b = K / nn * std::pow(L, 1.5) * LL;
    double c = std::sqrt(std::log(nn)) / nn;
    return std::max({a, b, c});
  };
  p.diam2 = [](double rho) { return std::min(16.0 * rho, 4.0); };
  p.U = 2.0;
  return p;
}

ErmProblem ErmProblem::margin_classification(SetClass cls, double h, std::vector<double> bayes, double c_margin,
                                             double K) {
  require(h > 0.0 && h <= 0.5 && c_margin > 0.0 && K > 0.0, "margin_classification needs h in (0, 1/2]");
  ErmProblem p;
  p.kind = ErmKind::MarginClassification;
  p.set_class = cls;
  p.h = h;
  p.c_margin = c_margin;
  p.K = K;
  p.bayes = bayes;
  p.name = "margin-classification " + to_string(cls);
  FunctionClass fc;
  switch (cls) {
    case SetClass::HalfLines:
      require(bayes.size() == 1, "half-line Bayes set is {t0}");
      p.V = 1.0;
      fc = FunctionClass::half_line();
      break;
    case SetClass::Intervals:
      require(bayes.size() == 2 && bayes[0] <= bayes[1], "interval Bayes set is {a0, b0}");
      p.V = 2.0;
      fc = FunctionClass::intervals();
      break;
    case SetClass::Boxes:
      require(bayes.size() == 2, "box Bayes set is {x1, x2}");
      p.V = 2.0;
      fc = FunctionClass::box_cdf(2);
      break;
  }
  Member center{bayes};
  p.tau = [fc, center](double r) { return local_capacity_tau(fc, center, std::min(r, 1.0)).tau; };
  // Pi(g != g0) <= rho / (c h) on F(rho)
  auto u = [h, c_margin](double rho) { return std::min(rho / (c_margin * h), 1.0); };
  p.diam2 = [u](double rho) { return std::min(2.0 * u(rho), 1.0); };
  const double V = p.V;
  auto tau = p.tau;
  p.psi_shape = [K, V, h, tau](double rho, long n) {
    return K * std::sqrt(V * rho * log_e(tau(rho / h)) / (static_cast<double>(n) * h));
  };
  if (cls != SetClass::Boxes) {
    // pair factor 2, symmetrization 2, Doob L2 on each side of each endpoint
    const double ends = cls == SetClass::HalfLines ? 1.0 : 2.0;
    const double width = cls == SetClass::Intervals ? bayes[1] - bayes[0] : 1.0;
    p.psi_explicit = [u, ends, width](double rho, long n) {
      double uu = u(rho);
      if (uu >= width) uu = 1.0;  // sets disjoint from g0 are no longer endpoint moves
      return 2.0 * ends * 2.0 * std::sqrt(8.0 * uu / static_cast<double>(n));
    };
  }
  p.U = 2.0;
  return p;
}

ErmProblem ErmProblem::constant_model(double Delta0) {
  require(Delta0 >= 0.0, "Delta0 must be nonnegative");
  ErmProblem p;
  p.kind = ErmKind::Model;
  p.name = "constant-model";
  p.psi_shape = [](double, long) { return 0.0; };
  p.psi_explicit = p.psi_shape;
  p.diam2 = [Delta0](double rho) { return Delta0 * rho; };
  p.U = 2.0;
  return p;
}

ErmProblem ErmProblem::finite_dict(const FunctionClass& cls) {
  require(cls.kind == ClassKind::FiniteDict, "finite_dict problem needs a FiniteDict class");
  const auto& d = cls.dict;
  const size_t N = d.funcs.size();
  require(N >= 1, "dictionary must be nonempty");
  std::vector<double> pf(N, 0.0);
  for (size_t k = 0; k < N; ++k) {
    for (size_t x = 0; x < d.p.size(); ++x) {
      require(d.funcs[k][x] >= 0.0 && d.funcs[k][x] <= 1.0, "losses must take values in [0, 1]");
      pf[k] += d.p[x] * d.funcs[k][x];
    }
  }
  double best = *std::min_element(pf.begin(), pf.end());
  auto exc = std::make_shared<std::vector<double>>(N);
  for (size_t k = 0; k < N; ++k) (*exc)[k] = pf[k] - best;
  // pairwise variance and sup-deviation of f - g
  auto var = std::make_shared<std::vector<double>>(N * N, 0.0);
  double U = 0.0;
  for (size_t a = 0; a < N; ++a)
    for (size_t b = 0; b < N; ++b) {
      double mean = pf[a] - pf[b], second = 0.0;
      for (size_t x = 0; x < d.p.size(); ++x) {
        double v = d.funcs[a][x] - d.funcs[b][x];
        second += d.p[x] * v * v;
        if (d.p[x] > 0.0) U = std::max(U, std::fabs(v - mean));
      }
      (*var)[a * N + b] = std::max(0.0, second - mean * mean);
    }
  ErmProblem p;
  p.kind = ErmKind::FiniteDict;
  p.name = "finite-dict N=" + std::to_string(N);
  p.U = std::max(U, 1e-12);
  p.diam2 = [exc, var, N](double rho) {
    double m = 0.0;
    for (size_t a = 0; a < N; ++a)
      for (size_t b = 0; b < N; ++b)
        if ((*exc)[a] <= rho && (*exc)[b] <= rho) m = std::max(m, (*var)[a * N + b]);
    return m;
  };
  auto diam2 = p.diam2;
  const double Uc = p.U;
  // Bernstein maximal inequality over the 2 N_rho^2 signed pair differences
  p.psi_explicit = [exc, diam2, Uc](double rho, long n) {
    double cnt = 0.0;
    for (double e : *exc) cnt += e <= rho ? 1.0 : 0.0;
    if (cnt <= 1.0) return 0.0;
    double lg = std::log(2.0 * cnt * cnt), nn = static_cast<double>(n);
    return std::sqrt(2.0 * diam2(rho) * lg / nn) + Uc * lg / (3.0 * nn);
  };
  p.psi_shape = p.psi_explicit;
  return p;
}

// ----------------------------------------------------------- certificate

namespace {

const std::function<double(double, long)>& psi_for(const ErmProblem& p, Mode mode) {
  if (mode == Mode::Explicit) {
    if (!p.psi_explicit) throw UnsupportedError("no explicit psi_n majorant for " + p.name);
    return p.psi_explicit;
  }
  if (!p.psi_shape) throw UnsupportedError("no psi_n model for " + p.name);
  return p.psi_shape;
}

// sup over rho in [r, 1] on a log grid; losses lie in [0, 1], so F(rho) = F(1) beyond 1
template <class Fn>
double sup_ratio(double r, Fn&& fn) {
  if (r >= 1.0) return fn(r) / r;
  double m = 0.0;
  for (double rho : logspace(r, 1.0, 257)) m = std::max(m, fn(rho) / rho);
  return m;
}

struct Shells {
  std::vector<double> rho, s;
};

Shells shells(double r, double s, double q) {
  Shells sh;
  double rho = r;
  int j = 0;
  do {
    rho *= q;
    ++j;
    sh.rho.push_back(rho);
    sh.s.push_back(s * std::pow(q, j));
  } while (rho < 1.0);
  return sh;
}

}  // namespace

double beta_of(const ErmProblem& p, double r, long n, Mode mode) {
  require(r > 0.0 && n >= 1, "beta_n needs r > 0, n >= 1");
  const auto& psi = psi_for(p, mode);
  return sup_ratio(r, [&](double rho) { return psi(rho, n); });
}

double Delta_of(const ErmProblem& p, double r) {
  require(r > 0.0 && static_cast<bool>(p.diam2), "Delta needs r > 0 and a diameter model");
  return sup_ratio(r, p.diam2);
}

double ratio_radius(const ErmProblem& p, long n, double r, double s, double q, Mode mode) {
  require(n >= 1 && r > 0.0 && s > 0.0 && q > 1.0, "ratio_radius: bad inputs");
  if (mode == Mode::Shape) return q * gamma_n(r, s, n, beta_of(p, r, n, mode), Delta_of(p, r));
  const auto& psi = psi_for(p, mode);
  const double nn = static_cast<double>(n);
  double g = 0.0;
  Shells sh = shells(r, s, q);
  for (size_t j = 0; j < sh.rho.size(); ++j) {
    double rho = std::min(sh.rho[j], 1.0);
    double ps = psi(rho, n);
    auto tail = bousquet_tail(n, std::max(p.diam2(rho), 0.0), nn * ps, sh.s[j], p.U);
    g = std::max(g, tail.threshold / (nn * sh.rho[j]));
  }
  return q * g;
}

ExcessCertificate excess_risk_certificate(const ErmProblem& p, long n, double s, double q, Mode mode) {
  require(n >= 1 && s > 0.0 && q > 1.0, "excess_risk_certificate: bad inputs");
  ExcessCertificate c;
  c.mode = mode;
  auto ok = [&](double logr) { return ratio_radius(p, n, std::exp(logr), s, q, mode) < 1.0; };
  const double lo = std::log(1e-12), hi = 0.0;
  if (mode == Mode::Shape) {
    double b1 = beta_of(p, 1.0, n, mode), d1 = Delta_of(p, 1.0);
    if (d1 + 16.0 * b1 == 0.0) c.note = "Delta + 16 beta = 0: log argument clamped to 2";
  }
  if (!ok(hi)) {
    c.feasible = false;
    c.regime = "infeasible: q gamma_n(r, s) >= 1 for every r <= 1";
  } else {
    double lr = ok(lo) ? lo : bisect_predicate(ok, lo, hi, 1e-10);
    c.feasible = true;
    c.r_star = std::exp(lr);
    c.q_gamma = ratio_radius(p, n, c.r_star, s, q, mode);
    c.tolerance = (1.0 - c.q_gamma) * c.r_star;
  }
  if (mode == Mode::Shape) {
    c.raw_prob = p.K * q / (q - 1.0) / s * std::exp(-s / (p.K * q));
    c.regime = c.feasible ? "shape: gamma_n radius" : c.regime;
    c.constants = {{"K", p.K}, {"q", q}, {"s", s}};
  } else {
    double sum = 0.0;
    Shells sh = shells(c.feasible ? c.r_star : 1.0, s, q);
    for (double sj : sh.s) sum += std::exp(-sj);
    c.raw_prob = sum;
    c.regime = c.feasible ? "explicit: Bousquet per shell rho_j = r q^j, s_j = s q^j" : c.regime;
    c.constants = {{"U", p.U}, {"q", q}, {"s", s}, {"shells", static_cast<double>(sh.rho.size())}};
  }
  c.prob = std::min(1.0, c.raw_prob);
  return c;
}

double critical_radius(const std::function<double(double)>& tau, long n) {
  require(static_cast<bool>(tau) && n >= 1, "critical_radius needs tau and n >= 1");
  const double nn = static_cast<double>(n);
  auto f = [&](double lr) {
    double r = std::exp(lr);
    return log_e(tau(r)) / r - nn;
  };
  double lo = std::log(1e-300), hi = 0.0;
  while (f(hi) > 0.0) {
    hi += 1.0;
    require(hi < 700.0, "critical_radius: log tau grows too fast");
  }
  if (f(hi) == 0.0) return std::exp(hi);
  return std::exp(bisect(f, lo, hi, 1e-14));
}

double critical_radius(const ErmProblem& p, long n) {
  if (!p.tau) throw UnsupportedError("no capacity model for " + p.name);
  return critical_radius(p.tau, n);
}

}  // namespace ratiolab
