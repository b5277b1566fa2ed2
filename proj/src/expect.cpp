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


#include "ratiolab/expect.hpp"

#include <algorithm>
#include <cmath>

#include "ratiolab/rng.hpp"

namespace ratiolab {

namespace {

void check_query(const ExpectationQuery& q) {
  require(q.n >= 1, "expectation bounds need n >= 1");
  require(q.sigma > 0.0, "sigma must be positive");
  require(q.env_norm > 0.0 && q.env_norm <= 1.0, "envelope norm must lie in (0, 1]");
  require(q.sigma <= q.env_norm * (1.0 + 1e-12), "sigma exceeds the envelope norm");
}

double H(const EntropyModel& m, double x) { return entropy_eval(m, x); }

// Assembled constants of the expectation chain, for E || sum eps_i f(X_i) ||:
// either E <= 120 D_H, or E <= 360 C_H sqrt n sigma sqrt H, or E <= 8 * 120^2 C_H^2 H.
struct Chain {
  double a = 0.0, b = 0.0, c = 0.0;  // the three alternatives
  double flat = 0.0;                 // the B = ||F|| route
};

Chain chain(const ExpectationQuery& q, const EntropyConstants& k) {
  double sn = std::sqrt(static_cast<double>(q.n));
  double h = H(q.model, 2.0 * q.env_norm / q.sigma);
  Chain ch;
  ch.a = 120.0 * k.D_H;
  ch.b = 360.0 * k.C_H * sn * q.sigma * std::sqrt(h);
  ch.c = 8.0 * 120.0 * 120.0 * k.C_H * k.C_H * h;
  ch.flat = 120.0 * k.C_H * std::sqrt(H(q.model, 2.0)) * sn * q.env_norm + 60.0 * k.D_H;
  return ch;
}

double assembled_C(const EntropyConstants& k) {
  return 2.0 * std::max({120.0 * k.D_H, 360.0 * k.C_H, 8.0 * 120.0 * 120.0 * k.C_H * k.C_H});
}

// J(b) = int_0^{b ^ 2||F||} sqrt H(2||F|| / tau) dtau, substituted u = 2||F|| / tau.
double entropy_integral(const EntropyModel& m, double env, double b) {
  double top = std::min(b, 2.0 * env);
  if (top <= 0.0) return 0.0;
  auto f = [&](double u) { return std::sqrt(H(m, u)) / (u * u); };
  return 2.0 * env * integrate_to_inf(f, 2.0 * env / top, 1e-10).value;
}

// Largest E with E <= 120 sqrt n J(sqrt(sigma^2 + 8 E / n)) + 60 D_H.
double vc_major_fixed_point(const ExpectationQuery& q, const EntropyConstants& k) {
  double n = static_cast<double>(q.n), sn = std::sqrt(n);
  auto rhs = [&](double e) {
    return 120.0 * sn * entropy_integral(q.model, q.env_norm, std::sqrt(q.sigma * q.sigma + 8.0 * e / n)) +
           60.0 * k.D_H;
  };
  double hi = 120.0 * sn * entropy_integral(q.model, q.env_norm, 2.0 * q.env_norm) + 60.0 * k.D_H;
  double g0 = rhs(0.0);
  if (rhs(hi) >= hi) return hi;
  return bisect([&](double e) { return rhs(e) - e; }, 0.0, std::max(hi, g0), 1e-10 * std::max(1.0, hi));
}

}  // namespace

ExpectationBound expectation_upper(const ExpectationQuery& q) {
  check_query(q);
  const EntropyConstants k = entropy_constants(q.model);
  const double n = static_cast<double>(q.n), sn = std::sqrt(n);
  const double x = 2.0 * q.env_norm / q.sigma;
  const double h = H(q.model, x);
  ExpectationBound out;
  out.constants = {{"C_H", k.C_H}, {"D_H", k.D_H}, {"A_H", k.A_H}};

  if (q.mode == Mode::Shape) {
    out.C = q.C > 0.0 ? q.C : 1.0;
    double flat = sn * q.env_norm;
    double gauss, pois, unit;
    if (q.model.kind == EntropyKind::VCMajor) {
      // the VC-major form: H(||F||, sigma) in place of H(2||F|| / sigma), sqrt(log n) floor
      double hm = H(q.model, q.env_norm / q.sigma);
      flat *= 1.0 + std::sqrt(std::max(0.0, std::log(1.0 / (q.model.A * q.env_norm))));
      gauss = sn * q.sigma * std::sqrt(hm);
      pois = hm;
      unit = std::sqrt(std::log(std::max(n, 1.0)));
    } else {
      gauss = sn * q.sigma * std::sqrt(h);
      pois = H(q.model, std::min(x, sn * q.env_norm / (1440.0 * k.C_H)));
      unit = 1.0;
    }
    double inner = std::max({gauss, pois, unit});
    if (flat <= inner) {
      out.value = out.C * flat;
      out.regime = "flat";
    } else {
      out.value = out.C * inner;
      out.regime = inner == gauss ? "gaussian" : (inner == pois ? "poisson" : "unit");
    }
  } else {
    double C = assembled_C(k);
    out.C = q.C > 0.0 ? q.C : C;
    out.constants.push_back({"C(H) assembled", C});
    if (q.model.kind == EntropyKind::VCMajor) {
      double fp = vc_major_fixed_point(q, k);
      double flat = 120.0 * sn * entropy_integral(q.model, q.env_norm, q.env_norm) + 60.0 * k.D_H;
      out.value = 2.0 * std::min(fp, flat);
      out.regime = fp <= flat ? "fixed-point" : "flat";
    } else {
      Chain ch = chain(q, k);
      double inner = std::max({ch.a, ch.b, ch.c});
      if (ch.flat <= inner) {
        out.value = 2.0 * ch.flat;
        out.regime = "flat";
      } else {
        out.value = 2.0 * inner;
        out.regime = inner == ch.b ? "gaussian" : (inner == ch.c ? "poisson" : "unit");
      }
    }
  }

  if (n * q.sigma * q.sigma >= q.c * h) {
    out.large_variance = true;
    double K;
    if (q.K_c > 0.0) {
      K = q.K_c;
    } else if (q.mode == Mode::Shape) {
      K = 1.0;
    } else {
      // under n sigma^2 >= c H: sqrt(H) / (sqrt n sigma) <= 1 / sqrt c and sqrt n sigma sqrt H >= sqrt c H(2)
      double h2 = std::max(H(q.model, 2.0), 1e-300);
      K = 2.0 * std::max({120.0 * k.D_H / (std::sqrt(q.c) * h2), 360.0 * k.C_H,
                          8.0 * 120.0 * 120.0 * k.C_H * k.C_H / std::sqrt(q.c)});
    }
    out.constants.push_back({"K(H,c)", K});
    out.large_variance_value = K * sn * q.sigma * std::sqrt(h);
  }
  return out;
}

ExpectationBound moment_upper(const ExpectationQuery& q, double p) {
  check_query(q);
  require(p >= 1.0, "moment order must be >= 1");
  const EntropyConstants k = entropy_constants(q.model);
  const double n = static_cast<double>(q.n), sn = std::sqrt(n);
  const double x = 2.0 * q.env_norm / q.sigma;
  ExpectationBound out;
  double core;
  if (q.mode == Mode::Shape) {
    out.C = q.C > 0.0 ? q.C : 1.0;
    core = std::max(sn * q.sigma * std::sqrt(H(q.model, x)),
                    H(q.model, std::min(x, sn * q.env_norm / (1440.0 * k.C_H))));
  } else {
    out.C = q.C > 0.0 ? q.C : assembled_C(k);
    core = std::max(sn * q.sigma * std::sqrt(H(q.model, x)), H(q.model, x));
  }
  double a = std::pow(core, p), b = std::pow(p, p / 2.0) * std::pow(sn * q.sigma, p), c = std::pow(p, p);
  double m = std::max({a, b, c});
  out.regime = m == a ? "entropy" : (m == b ? "gaussian" : "unit");
  out.value = std::pow(out.C, p) * m;
  out.constants = {{"C(H)", out.C}, {"p", p}};
  return out;
}

double vc_subgraph_expectation(long n, double sigma_G, double env_G, double A, double v, double K1) {
  require(n >= 1, "n must be >= 1");
  require(sigma_G > 0.0 && sigma_G <= env_G * (1.0 + 1e-12), "need 0 < sigma_G <= ||G||");
  require(A >= kE && v >= 1.0, "need A >= e and v >= 1");
  (void)v;  // enters through K1
  double sn = std::sqrt(static_cast<double>(n));
  double ratio = A * env_G / sigma_G;
  double inner = std::max({sn * sigma_G * std::sqrt(std::log(ratio)), std::log(std::min(ratio, sn * env_G)), 1.0});
  return K1 * std::min(sn * env_G, inner);
}

LowerBound expectation_lower(long n, double sigma, double cover_log, double L, const EntropyModel& model,
                             double env_norm) {
  require(cover_log >= 0.0, "cover_log must be nonnegative");
  require(n >= 1 && sigma > 0.0 && L > 0.0, "need n >= 1, sigma > 0, L > 0");
  const EntropyConstants k = entropy_constants(model);
  double ns2 = static_cast<double>(n) * sigma * sigma;
  LowerBound out;
  PremiseItem p1{"n sigma^2 >= 2500 v 16 A_H / 9", false, ns2, std::max(2500.0, 16.0 * k.A_H / 9.0)};
  p1.pass = p1.lhs >= p1.rhs;
  PremiseItem p2{"n sigma^2 >= (672 L^2 v 1) 1920^2 C_H^2 H(6 ||F|| / sigma)", false, ns2,
                 std::max(672.0 * L * L, 1.0) * 1920.0 * 1920.0 * k.C_H * k.C_H *
                     entropy_eval(model, 6.0 * env_norm / sigma)};
  p2.pass = p2.lhs >= p2.rhs;
  out.premises = {p1, p2};
  out.premises_ok = p1.pass && p2.pass;
  out.raw = std::sqrt(static_cast<double>(n)) * sigma / (32.0 * L) * std::sqrt(cover_log);
  out.value = out.premises_ok ? out.raw : 0.0;
  return out;
}

// ---------------------------------------------------------------- fullness

namespace {

// Farthest-point greedy packing: repeatedly add the candidate farthest from
// the current set while that distance is at least eps.
long greedy_packing(long m, double eps, const std::function<double(long, long)>& dist) {
  if (m == 0) return 0;
  std::vector<double> mind(static_cast<size_t>(m), kInf);
  long count = 0, next = 0;
  while (true) {
    ++count;
    double far = -1.0;
    long arg = -1;
    for (long i = 0; i < m; ++i) {
      double d = dist(next, i);
      if (d < mind[static_cast<size_t>(i)]) mind[static_cast<size_t>(i)] = d;
      if (mind[static_cast<size_t>(i)] > far) {
        far = mind[static_cast<size_t>(i)];
        arg = i;
      }
    }
    if (far < eps) break;
    next = arg;
  }
  return count;
}

}  // namespace

FullnessEstimate fullness_estimate(const FunctionClass& cls, double sigma, long mc_points, std::uint64_t seed,
                                   const EntropyModel& model, double c) {
  require(sigma > 0.0, "sigma must be positive");
  FullnessEstimate out;
  std::function<double(long, long)> dist;
  long m = 0;
  std::vector<double> pts;
  auto mass = [&](double a, double b) {  // P_hat[a, b]
    if (b < a) return 0.0;
    auto lo = std::lower_bound(pts.begin(), pts.end(), a);
    auto hi = std::upper_bound(pts.begin(), pts.end(), b);
    return static_cast<double>(hi - lo) / static_cast<double>(pts.size());
  };
  std::vector<std::pair<double, double>> ivs;
  std::vector<std::vector<double>> tables;
  std::vector<double> probs;

  switch (cls.kind) {
    case ClassKind::HalfLine1D:
    case ClassKind::Intervals1D: {
      require(mc_points >= 1000, "fullness_estimate needs mc_points >= 1000");
      if (cls.sigma != SigmaConvention::SqrtMean) throw UnsupportedError("fullness_estimate uses sqrt-mean sigma");
      CounterRng rng(seed);
      pts.resize(static_cast<size_t>(mc_points));
      for (auto& v : pts) v = rng.uniform();
      std::sort(pts.begin(), pts.end());
      double len_max = sigma * sigma;
      if (cls.kind == ClassKind::HalfLine1D) {
        len_max = std::min(len_max, 0.5);
        const int G = 256;
        for (int i = 1; i <= G; ++i) ivs.emplace_back(0.0, len_max * i / G);
      } else {
        len_max = std::min(len_max, 1.0);
        double step = len_max / 16.0;
        for (int kl = 0; kl <= 16; ++kl) {
          double len = kl * step;
          for (double a = 0.0; a + len <= 1.0 + 1e-12; a += step) ivs.emplace_back(a, std::min(1.0, a + len));
        }
      }
      m = static_cast<long>(ivs.size());
      dist = [&](long i, long j) {
        auto [a, b] = ivs[static_cast<size_t>(i)];
        auto [cc, d] = ivs[static_cast<size_t>(j)];
        double inter = mass(std::max(a, cc), std::min(b, d));
        double sym = mass(a, b) + mass(cc, d) - 2.0 * inter;
        return std::sqrt(std::max(0.0, sym));
      };
      break;
    }
    case ClassKind::FiniteDict: {
      probs = cls.dict.p;
      for (size_t k = 0; k < cls.dict.funcs.size(); ++k)
        if (sigma_of(cls, Member{{static_cast<double>(k)}}) <= sigma) tables.push_back(cls.dict.funcs[k]);
      m = static_cast<long>(tables.size());
      dist = [&](long i, long j) {
        double s = 0.0;
        for (size_t x = 0; x < probs.size(); ++x) {
          double d = tables[static_cast<size_t>(i)][x] - tables[static_cast<size_t>(j)][x];
          s += probs[x] * d * d;
        }
        return std::sqrt(s);
      };
      break;
    }
    default:
      throw UnsupportedError("fullness_estimate has no member enumeration for " + to_string(cls.kind));
  }
  out.candidates = m;
  out.packing = std::max(1L, greedy_packing(m, sigma / 2.0, dist));
  long coarse = std::max(1L, greedy_packing(m, sigma, dist));
  out.packing_log = std::log(static_cast<double>(out.packing));
  out.packing_log_sigma = std::log(static_cast<double>(coarse));
  auto env = slice_envelope_norm(cls, Slice{0.0, sigma});
  double h = entropy_eval(model, env.norm / sigma);
  out.ratio = h > 0.0 ? out.packing_log / (c * h) : kInf;
  return out;
}

}  // namespace ratiolab
