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


#include "ratiolab/classes.hpp"

#include <algorithm>
#include <numeric>

namespace ratiolab {

std::string to_string(ClassKind k) {
  switch (k) {
    case ClassKind::HalfLine1D: return "HalfLine1D";
    case ClassKind::BoxCdf: return "BoxCdf";
    case ClassKind::Intervals1D: return "Intervals1D";
    case ClassKind::MonotoneUnit: return "MonotoneUnit";
    case ClassKind::CoordC0: return "CoordC0";
    case ClassKind::FiniteDict: return "FiniteDict";
    case ClassKind::LinearSpan: return "LinearSpan";
  }
  return "?";
}

ClassKind class_kind_from_string(const std::string& s) {
  for (auto k : {ClassKind::HalfLine1D, ClassKind::BoxCdf, ClassKind::Intervals1D,
                 ClassKind::MonotoneUnit, ClassKind::CoordC0, ClassKind::FiniteDict,
                 ClassKind::LinearSpan})
    if (to_string(k) == s) return k;
  throw DomainError("unknown class '" + s + "'");
}

FunctionClass FunctionClass::half_line(SigmaConvention s) {
  FunctionClass c;
  c.kind = ClassKind::HalfLine1D;
  c.sigma = s;
  return c;
}

FunctionClass FunctionClass::box_cdf(int d) {
  require(d >= 1 && d <= 3, "BoxCdf supports d in {1, 2, 3}");
  FunctionClass c;
  c.kind = ClassKind::BoxCdf;
  c.dim = d;
  return c;
}

FunctionClass FunctionClass::intervals() {
  FunctionClass c;
  c.kind = ClassKind::Intervals1D;
  return c;
}

FunctionClass FunctionClass::monotone_unit() {
  FunctionClass c;
  c.kind = ClassKind::MonotoneUnit;
  c.sigma = SigmaConvention::L2Norm;
  c.cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
  c.density = [](double x) { return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0; };
  return c;
}

FunctionClass FunctionClass::coord_c0() {
  FunctionClass c;
  c.kind = ClassKind::CoordC0;
  return c;
}

FunctionClass FunctionClass::finite_dict(FiniteDict d, SigmaConvention s) {
  require(!d.p.empty(), "FiniteDict needs a nonempty sample space");
  double tot = std::accumulate(d.p.begin(), d.p.end(), 0.0);
  require(std::fabs(tot - 1.0) < 1e-9, "FiniteDict probabilities must sum to 1");
  for (auto& f : d.funcs) require(f.size() == d.p.size(), "FiniteDict function table has wrong size");
  FunctionClass c;
  c.kind = ClassKind::FiniteDict;
  c.sigma = s;
  c.dict = std::move(d);
  return c;
}

FunctionClass FunctionClass::linear_span(int d) {
  require(d >= 1, "LinearSpan needs d >= 1");
  FunctionClass c;
  c.kind = ClassKind::LinearSpan;
  c.sigma = SigmaConvention::L2Norm;
  c.dim = d;
  return c;
}

double cosine_basis(int k, double x) {
  return k == 0 ? 1.0 : std::sqrt(2.0) * std::cos(3.14159265358979323846 * k * x);
}

namespace {

double from_mean_second(SigmaConvention s, double mean, double second) {
  switch (s) {
    case SigmaConvention::SqrtMean: return std::sqrt(std::max(mean, 0.0));
    case SigmaConvention::SqrtVariance: return std::sqrt(std::max(second - mean * mean, 0.0));
    case SigmaConvention::L2Norm: return std::sqrt(std::max(second, 0.0));
  }
  return 0.0;
}

double c0_prob(double j) { return 1.0 / (j * j); }
double c0_value(double j) {
  double l = log_e(j);
  return 1.0 / (l * l);
}

// Largest t in [0, 1/2] whose half-line has sigma <= s.
double halfline_t_of_sigma(SigmaConvention conv, double s) {
  double s2 = s * s;
  if (conv == SigmaConvention::SqrtVariance) {
    if (s2 >= 0.25) return 0.5;
    return std::min(0.5, 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * s2)));
  }
  return std::min(0.5, s2);
}

// P{prod y_i <= s} for y uniform on [0,1]^d.
double prod_uniform_cdf(double s, int d) {
  if (s >= 1.0) return 1.0;
  if (s <= 0.0) return 0.0;
  double L = std::log(1.0 / s), term = 1.0, sum = 0.0;
  for (int k = 0; k < d; ++k) {
    if (k > 0) term *= L / k;
    sum += term;
  }
  return s * sum;
}

}  // namespace

double sigma_of(const FunctionClass& cls, const Member& f) {
  const auto& p = f.params;
  switch (cls.kind) {
    case ClassKind::HalfLine1D: {
      require(p.size() == 1, "HalfLine1D member is {t}");
      double t = p[0];
      require(t >= 0.0 && t <= 0.5, "HalfLine1D needs 0 <= t <= 1/2");
      return from_mean_second(cls.sigma, t, t);
    }
    case ClassKind::BoxCdf: {
      require(static_cast<int>(p.size()) == cls.dim, "BoxCdf member has wrong dimension");
      double prod = 1.0;
      for (double x : p) {
        require(x >= 0.0 && x <= 1.0, "BoxCdf corner must lie in [0,1]^d");
        prod *= x;
      }
      require(prod <= 0.5, "BoxCdf members have product <= 1/2");
      return from_mean_second(cls.sigma, prod, prod);
    }
    case ClassKind::Intervals1D: {
      require(p.size() == 2 && 0.0 <= p[0] && p[0] <= p[1] && p[1] <= 1.0,
              "Intervals1D member is {a, b} with 0 <= a <= b <= 1");
      double len = p[1] - p[0];
      return from_mean_second(cls.sigma, len, len);
    }
    case ClassKind::MonotoneUnit: {
      require(p.size() % 2 == 0, "MonotoneUnit member is a list of (site, increment) pairs");
      std::vector<std::pair<double, double>> jumps;
      double total = 0.0;
      for (size_t i = 0; i < p.size(); i += 2) {
        require(p[i + 1] >= 0.0, "MonotoneUnit increments must be nonnegative");
        jumps.emplace_back(p[i], p[i + 1]);
        total += p[i + 1];
      }
      require(total <= 1.0 + 1e-12, "MonotoneUnit functions take values in [0,1]");
      std::sort(jumps.begin(), jumps.end());
      double mean = 0.0, second = 0.0, level = 0.0;
      for (size_t k = 0; k < jumps.size(); ++k) {
        level += jumps[k].second;
        double right = k + 1 < jumps.size() ? jumps[k + 1].first : 1.0;
        double mass = cls.cdf(right) - cls.cdf(jumps[k].first);
        mean += level * mass;
        second += level * level * mass;
      }
      return from_mean_second(cls.sigma, mean, second);
    }
    case ClassKind::CoordC0: {
      require(p.size() == 1 && p[0] >= 1.0, "CoordC0 member is {j} with j >= 1");
      return 1.0 / (p[0] * log_e(p[0]));
    }
    case ClassKind::FiniteDict: {
      require(p.size() == 1, "FiniteDict member is {index}");
      size_t idx = static_cast<size_t>(p[0]);
      require(idx < cls.dict.funcs.size(), "FiniteDict index out of range");
      double mean = 0.0, second = 0.0;
      for (size_t x = 0; x < cls.dict.p.size(); ++x) {
        double v = cls.dict.funcs[idx][x];
        mean += cls.dict.p[x] * v;
        second += cls.dict.p[x] * v * v;
      }
      return from_mean_second(cls.sigma, mean, second);
    }
    case ClassKind::LinearSpan: {
      require(static_cast<int>(p.size()) == cls.dim, "LinearSpan member has wrong dimension");
      double s = 0.0;
      for (double c : p) s += c * c;
      return std::sqrt(s);
    }
  }
  return 0.0;
}

EnvelopeNorm slice_envelope_norm(const FunctionClass& cls, const Slice& s) {
  require(s.lo >= 0.0 && s.hi > s.lo, "slice needs 0 <= lo < hi");
  EnvelopeNorm out;
  switch (cls.kind) {
    case ClassKind::HalfLine1D: {
      double thi = halfline_t_of_sigma(cls.sigma, s.hi);
      double tlo = halfline_t_of_sigma(cls.sigma, s.lo);
      out.method = "closed-form";
      if (thi <= tlo) { out.empty = true; return out; }
      out.norm = std::sqrt(thi);
      return out;
    }
    case ClassKind::BoxCdf: {
      double top = std::min(s.hi * s.hi, 0.5);
      out.method = "closed-form";
      if (top <= s.lo * s.lo) { out.empty = true; return out; }
      out.norm = std::sqrt(prod_uniform_cdf(top, cls.dim));
      return out;
    }
    case ClassKind::Intervals1D: {
      out.method = "closed-form";
      if (std::min(s.hi * s.hi, 1.0) <= s.lo * s.lo) { out.empty = true; return out; }
      out.norm = 1.0;  // intervals of any admissible length cover [0, 1]
      return out;
    }
    case ClassKind::MonotoneUnit: {
      double hi = std::min(s.hi, 1.0);
      out.method = "quadrature";
      if (hi <= s.lo) { out.empty = true; return out; }
      // F(x) = min(hi / sqrt(P[x,1]), 1); kink where 1 - G(x) = hi^2.
      double h2 = hi * hi;
      auto integrand = [&](double x) {
        double tail = 1.0 - cls.cdf(x);
        double v = tail <= h2 ? 1.0 : h2 / tail;
        return v * cls.density(x);
      };
      double kink = 1.0;
      if (h2 < 1.0) kink = bisect([&](double x) { return 1.0 - cls.cdf(x) - h2; }, 0.0, 1.0, 1e-15);
      auto a = integrate(integrand, 0.0, kink, 1e-11);
      auto b = integrate(integrand, kink, 1.0, 1e-11);
      out.norm = std::sqrt(a.value + b.value);
      out.tolerance = a.error + b.error;
      return out;
    }
    case ClassKind::CoordC0: {
      out.method = "enumeration";
      // sigma_j = 1/(j log j) is nonincreasing in j; collect j with sigma_j in (lo, hi].
      double sum = 0.0, survive = 1.0;
      bool any = false;
      for (long j = 1; j < 50000000; ++j) {
        double sj = 1.0 / (j * log_e(static_cast<double>(j)));
        if (sj <= s.lo) break;
        if (sj <= s.hi) {
          any = true;
          double pj = c0_prob(j), vj = c0_value(j);
          sum += vj * vj * pj * survive;
          survive *= (1.0 - pj);
          if (s.lo == 0.0 && vj * vj * pj * survive < 1e-18 * sum) break;
        }
      }
      if (!any) { out.empty = true; return out; }
      out.norm = std::sqrt(sum);
      return out;
    }
    case ClassKind::FiniteDict: {
      out.method = "enumeration";
      std::vector<double> env(cls.dict.p.size(), 0.0);
      bool any = false;
      for (size_t k = 0; k < cls.dict.funcs.size(); ++k) {
        double sg = sigma_of(cls, Member{{static_cast<double>(k)}});
        if (sg > s.lo && sg <= s.hi) {
          any = true;
          for (size_t x = 0; x < env.size(); ++x)
            env[x] = std::max(env[x], std::fabs(cls.dict.funcs[k][x]));
        }
      }
      if (!any) { out.empty = true; return out; }
      double sum = 0.0;
      for (size_t x = 0; x < env.size(); ++x) sum += cls.dict.p[x] * env[x] * env[x];
      out.norm = std::sqrt(sum);
      return out;
    }
    case ClassKind::LinearSpan: {
      // sup over ||c|| <= hi of |sum c_k e_k(x)| = hi * |e(x)|, and the basis is orthonormal.
      out.method = "closed-form";
      out.norm = s.hi * std::sqrt(static_cast<double>(cls.dim));
      return out;
    }
  }
  return out;
}

double capacity(const FunctionClass& cls, double t, double q, double A, double v) {
  require(t > 0.0 && q > 1.0 && A > 0.0 && v > 0.0, "capacity needs t > 0, q > 1, A > 0, v > 0");
  auto env = slice_envelope_norm(cls, Slice{t / q, t});
  if (env.empty) return 0.0;
  return std::pow(A * env.norm / t, v);
}

double alexander_capacity(const FunctionClass& cls, double delta) {
  require(delta > 0.0, "capacity needs delta > 0");
  double mass = 0.0;
  switch (cls.kind) {
    case ClassKind::HalfLine1D: mass = std::min(delta, 0.5); break;
    case ClassKind::Intervals1D: mass = 1.0; break;
    case ClassKind::BoxCdf: mass = prod_uniform_cdf(std::min(delta, 0.5), cls.dim); break;
    case ClassKind::FiniteDict: {
      std::vector<char> in(cls.dict.p.size(), 0);
      for (const auto& f : cls.dict.funcs) {
        double pc = 0.0;
        for (size_t x = 0; x < f.size(); ++x) {
          require(f[x] == 0.0 || f[x] == 1.0, "capacity of a FiniteDict needs indicator functions");
          pc += cls.dict.p[x] * f[x];
        }
        if (pc <= delta)
          for (size_t x = 0; x < f.size(); ++x) if (f[x] == 1.0) in[x] = 1;
      }
      for (size_t x = 0; x < in.size(); ++x) if (in[x]) mass += cls.dict.p[x];
      break;
    }
    default: throw UnsupportedError("alexander_capacity is defined for classes of indicators");
  }
  return std::max(mass / delta, 1.0);
}

namespace {

double merged_length(std::vector<std::pair<double, double>> iv) {
  std::sort(iv.begin(), iv.end());
  double total = 0.0, cur_a = -kInf, cur_b = -kInf;
  for (auto [a, b] : iv) {
    if (b <= a) continue;
    if (a > cur_b) {
      if (cur_b > cur_a) total += cur_b - cur_a;
      cur_a = a;
      cur_b = b;
    } else {
      cur_b = std::max(cur_b, b);
    }
  }
  if (cur_b > cur_a) total += cur_b - cur_a;
  return total;
}

// Box (d = 2) union membership for points outside C0: minimum over the
// candidate corners x >= y of P(C delta C0); the minimum over each coordinate
// is attained at y_i or x0_i because the objective is piecewise linear.
double box2_min_outside(const double* y, const double* x0) {
  double best = kInf;
  double p0 = x0[0] * x0[1];
  for (int mask = 0; mask < 4; ++mask) {
    double x[2];
    bool skip = false;
    for (int i = 0; i < 2; ++i) {
      bool use_y = (mask >> i) & 1;
      if (y[i] > x0[i]) {
        if (!use_y) { skip = true; break; }
        x[i] = y[i];
      } else {
        x[i] = use_y ? y[i] : x0[i];
      }
    }
    if (skip) continue;
    double d = x[0] * x[1] + p0 - 2.0 * std::min(x[0], x0[0]) * std::min(x[1], x0[1]);
    best = std::min(best, d);
  }
  return best;
}

bool box2_member(double y1, double y2, const double* x0, double delta) {
  double y[2] = {y1, y2};
  double p0 = x0[0] * x0[1];
  bool inside = y1 <= x0[0] && y2 <= x0[1];
  if (inside) {
    double m = std::min(p0 * (1.0 - y1 / x0[0]), p0 * (1.0 - y2 / x0[1]));
    return m <= delta;
  }
  return box2_min_outside(y, x0) <= delta;
}

// Exact measure in y2 of the union slice at fixed y1: every candidate
// objective is affine in y2 between the breakpoints {0, x0_2, 1}, so the
// membership indicator is constant between roots.
double box2_inner(double y1, const double* x0, double delta) {
  std::vector<double> bps = {0.0, x0[1], 1.0};
  double p0 = x0[0] * x0[1];
  auto add_root = [&](double a, double b, const std::function<double(double)>& g) {
    double ga = g(a) - delta, gb = g(b) - delta;
    if ((ga < 0) != (gb < 0) && gb != ga) bps.push_back(a + (b - a) * ga / (ga - gb));
  };
  double pieces[2][2] = {{0.0, x0[1]}, {x0[1], 1.0}};
  for (auto& pc : pieces) {
    if (pc[1] <= pc[0]) continue;
    double ymid = 0.5 * (pc[0] + pc[1]);
    // inside objective for coordinate 2
    add_root(pc[0], pc[1], [&](double y2) { return p0 * (1.0 - y2 / x0[1]); });
    for (int mask = 0; mask < 4; ++mask) {
      auto g = [&, mask](double y2) {
        double y[2] = {y1, y2};
        double x[2];
        for (int i = 0; i < 2; ++i) {
          bool use_y = (mask >> i) & 1;
          bool above = (i == 0) ? (y1 > x0[0]) : (ymid > x0[1]);
          x[i] = (above || use_y) ? y[i] : x0[i];
        }
        return x[0] * x[1] + p0 - 2.0 * std::min(x[0], x0[0]) * std::min(x[1], x0[1]);
      };
      add_root(pc[0], pc[1], g);
    }
  }
  std::sort(bps.begin(), bps.end());
  double len = 0.0;
  for (size_t k = 0; k + 1 < bps.size(); ++k) {
    double a = bps[k], b = bps[k + 1];
    if (b <= a) continue;
    if (box2_member(y1, 0.5 * (a + b), x0, delta)) len += b - a;
  }
  return len;
}

}  // namespace

LocalCapacity local_capacity_tau(const FunctionClass& cls, const Member& center, double delta) {
  require(delta > 0.0, "local capacity needs delta > 0");
  LocalCapacity out;
  const auto& c = center.params;
  switch (cls.kind) {
    case ClassKind::HalfLine1D: {
      require(c.size() == 1, "HalfLine1D center is {t0}");
      out.union_mass = std::min(0.5, c[0] + delta) - std::max(0.0, c[0] - delta);
      out.method = "closed-form";
      break;
    }
    case ClassKind::Intervals1D: {
      require(c.size() == 2 && c[0] <= c[1], "Intervals1D center is {a0, b0}");
      double a0 = c[0], b0 = c[1];
      out.method = "closed-form";
      if (b0 - a0 <= delta) {
        // degenerate intervals anywhere differ from C0 by P(C0) <= delta
        out.union_mass = 1.0;
      } else {
        out.union_mass = merged_length({{std::max(0.0, a0 - delta), std::min(1.0, a0 + delta)},
                                        {std::max(0.0, b0 - delta), std::min(1.0, b0 + delta)}});
      }
      break;
    }
    case ClassKind::BoxCdf: {
      if (cls.dim == 1) {
        return local_capacity_tau(FunctionClass::half_line(), center, delta);
      }
      require(cls.dim == 2, "local capacity for BoxCdf is implemented for d <= 2");
      require(c.size() == 2, "BoxCdf center is {x1, x2}");
      double x0[2] = {c[0], c[1]};
      auto inner = [&](double y1) { return box2_inner(y1, x0, delta); };
      // breakpoints in y1 where the inner structure changes
      std::vector<double> cuts = {0.0, x0[0], 1.0};
      double p0 = x0[0] * x0[1];
      if (p0 > 0) {
        cuts.push_back(std::clamp(x0[0] * (1.0 - delta / p0), 0.0, 1.0));
        cuts.push_back(std::clamp(x0[0] + delta / x0[1], 0.0, 1.0));
        cuts.push_back(std::clamp(2.0 * x0[0], 0.0, 1.0));
      }
      std::sort(cuts.begin(), cuts.end());
      double mass = 0.0, err = 0.0;
      for (size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (cuts[k + 1] <= cuts[k]) continue;
        auto r = integrate(inner, cuts[k], cuts[k + 1], 1e-11);
        mass += r.value;
        err += r.error;
      }
      out.union_mass = mass;
      out.method = "exact-inner/adaptive-outer";
      break;
    }
    case ClassKind::FiniteDict: {
      require(c.size() == 1, "FiniteDict center is {index}");
      const auto& f0 = cls.dict.funcs.at(static_cast<size_t>(c[0]));
      std::vector<char> in(cls.dict.p.size(), 0);
      for (const auto& f : cls.dict.funcs) {
        double d = 0.0;
        for (size_t x = 0; x < f.size(); ++x) if (f[x] != f0[x]) d += cls.dict.p[x];
        if (d <= delta)
          for (size_t x = 0; x < f.size(); ++x) if (f[x] != f0[x]) in[x] = 1;
      }
      for (size_t x = 0; x < in.size(); ++x) if (in[x]) out.union_mass += cls.dict.p[x];
      out.method = "enumeration";
      break;
    }
    default: throw UnsupportedError("local capacity is defined for classes of indicators");
  }
  out.tau = out.union_mass / delta;
  out.capped = out.union_mass >= 1.0 - 1e-15;
  return out;
}

double w_parameter(const std::function<double(double)>& g_q, double r, double delta, double q) {
  require(r > 0.0 && delta > r && q > 1.0, "w_parameter needs 0 < r < delta and q > 1");
  double W = -kInf;
  double rho = r;
  for (int j = 0;; ++j) {
    double rj = std::min(rho, delta);
    double a = std::log(log_base(delta * q / rj, q));
    double g = g_q(rj);
    double b = g > 0.0 ? std::log(g) : -kInf;
    W = std::max({W, a, b});
    if (rj >= delta) break;
    rho *= q;
  }
  return W;
}

// ---------------------------------------------------------------- entropy

EntropyModel EntropyModel::vc_type(double A, double v) {
  require(A >= kE - 1e-12 && v >= 1.0, "VCType needs A >= e and v >= 1");
  EntropyModel m;
  m.kind = EntropyKind::VCType;
  m.A = A;
  m.v = v;
  return m;
}

EntropyModel EntropyModel::reg_varying(double alpha, double c) {
  require(alpha > 0.0 && alpha < 2.0, "RegVarying needs 0 < alpha < 2");
  require(c > 0.0, "RegVarying needs c > 0");
  EntropyModel m;
  m.kind = EntropyKind::RegVarying;
  m.alpha = alpha;
  m.c = c;
  return m;
}

EntropyModel EntropyModel::vc_major(double A, double env_norm) {
  require(A >= kE - 1e-12 && env_norm > 0.0, "VCMajor needs A >= e and ||F|| > 0");
  EntropyModel m;
  m.kind = EntropyKind::VCMajor;
  m.A = A;
  m.env_norm = env_norm;
  return m;
}

double entropy_eval(const EntropyModel& m, double x) {
  if (x < 0.5) return 0.0;
  switch (m.kind) {
    case EntropyKind::VCType: return std::max(0.0, m.v * std::log(m.A * x));
    case EntropyKind::RegVarying: return m.c * std::pow(x, m.alpha);
    case EntropyKind::VCMajor: {
      double L = std::log(m.A * x);
      double h = m.A * x * (L * L + L * std::log(1.0 / (m.A * m.env_norm)));
      return std::max(0.0, h);
    }
  }
  return 0.0;
}

EntropyConstants entropy_constants(const EntropyModel& m) {
  EntropyConstants out;
  if (m.kind == EntropyKind::RegVarying)
    require(m.alpha > 0.0 && m.alpha < 2.0, "RegVarying needs 0 < alpha < 2");
  auto sqrtH = [&](double u) { return std::sqrt(entropy_eval(m, u)); };
  auto tail = [&](double x) {
    return integrate_to_inf([&](double u) { return sqrtH(u) / (u * u); }, x, 1e-12);
  };
  if (m.kind == EntropyKind::VCType) {
    out.C_H = 2.0;
    out.D_H = 2.0 * m.A * std::sqrt(m.v) / kE;
    out.A_H = m.A;
    out.closed_form = true;
  } else {
    const double tol = 1e-9;
    double sup_c = 1.0;
    for (double x : logspace(1.0, 1e8, 400)) {
      double h = sqrtH(x);
      if (h <= 0.0) continue;
      sup_c = std::max(sup_c, tail(x).value / (h / x));
    }
    auto d = tail(1.0);
    out.C_H = sup_c * (1.0 + tol);
    out.D_H = d.value * (1.0 + tol) + d.error;
    out.tolerance = tol;
  }
  double sup_a = 1.0;
  for (double x : logspace(2.0, 1e6, 400)) {
    double h = sqrtH(x);
    if (h <= 0.0) continue;
    sup_a = std::max(sup_a, std::log(out.D_H * x / (4.0 * out.C_H * h)) / (x * x));
  }
  out.A_H = std::max(out.A_H, sup_a);
  out.C_H = std::max(out.C_H, 1.0);
  return out;
}

EntropyModel intervals_entropy_model() {
  return EntropyModel::vc_type(std::pow(384.0 * std::exp(3.0), 0.2), 5.0);
}

}  // namespace ratiolab
