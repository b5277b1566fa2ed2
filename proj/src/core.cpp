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


#include "ratiolab/core.hpp"

#include <algorithm>

namespace ratiolab {

std::string to_string(Mode m) { return m == Mode::Shape ? "shape" : "explicit"; }

Mode mode_from_string(const std::string& s) {
  if (s == "shape") return Mode::Shape;
  if (s == "explicit") return Mode::Explicit;
  throw DomainError("unknown mode '" + s + "' (expected shape|explicit)");
}

NormWeight NormWeight::power(double alpha) {
  require(alpha >= 0.0, "weight exponent must be >= 0");
  NormWeight w;
  w.alpha_ = alpha;
  w.name_ = "t^" + std::to_string(alpha);
  return w;
}

NormWeight NormWeight::power_loglog(double alpha, double beta) {
  NormWeight w = power(alpha);
  w.slow_ = [beta](double t) { return std::pow(loglog_e(1.0 / t), beta); };
  w.name_ += "*(loglog 1/t)^" + std::to_string(beta);
  return w;
}

NormWeight NormWeight::custom(std::string name, std::function<double(double)> fn,
                              double alpha) {
  NormWeight w;
  w.alpha_ = alpha;
  w.full_ = std::move(fn);
  w.name_ = std::move(name);
  return w;
}

double NormWeight::operator()(double t) const {
  if (full_) return full_(t);
  double v = alpha_ == 0.0 ? 1.0 : (alpha_ == 1.0 ? t : (alpha_ == 2.0 ? t * t : std::pow(t, alpha_)));
  if (slow_) v *= slow_(t);
  return v;
}

namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double simpson_step(const std::function<double(double)>& f, const Panel& p,
                    double tol, int depth, long& evals, double& err) {
  double m = 0.5 * (p.a + p.b);
  double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
  double flm = f(lm), frm = f(rm);
  evals += 2;
  double h = p.b - p.a;
  double left = h / 12.0 * (p.fa + 4.0 * flm + p.fm);
  double right = h / 12.0 * (p.fm + 4.0 * frm + p.fb);
  double delta = left + right - p.whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    err += std::fabs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  Panel l{p.a, m, p.fa, flm, p.fm, left};
  Panel r{m, p.b, p.fm, frm, p.fb, right};
  return simpson_step(f, l, 0.5 * tol, depth - 1, evals, err) +
         simpson_step(f, r, 0.5 * tol, depth - 1, evals, err);
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double tol, int max_depth) {
  QuadResult out;
  if (b <= a) return out;
  // Seed with a few panels so that narrow features are not skipped.
  const int seeds = 16;
  double h = (b - a) / seeds;
  for (int k = 0; k < seeds; ++k) {
    double pa = a + k * h, pb = (k + 1 == seeds) ? b : a + (k + 1) * h;
    double fa = f(pa), fb = f(pb), fm = f(0.5 * (pa + pb));
    out.evals += 3;
    Panel p{pa, pb, fa, fm, fb, (pb - pa) / 6.0 * (fa + 4.0 * fm + fb)};
    out.value += simpson_step(f, p, tol / seeds, max_depth, out.evals, out.error);
  }
  return out;
}

QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double tol) {
  require(a > 0.0, "integrate_to_inf needs a positive lower limit");
  // u = a e^y, du = u dy; cut the tail once the integrand has decayed.
  auto g = [&](double y) {
    double u = a * std::exp(y);
    return f(u) * u;
  };
  double ymax = 8.0;
  double g0 = std::fabs(g(0.0)) + 1e-300;
  while (ymax < 4000.0 && std::fabs(g(ymax)) > 1e-17 * g0) ymax *= 1.5;
  return integrate(g, 0.0, ymax, tol);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw DomainError("bisect: no sign change on bracket");
  for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo,
                        double hi, double xtol, int max_iter) {
  if (pred(lo)) return lo;
  if (!pred(hi)) return kInf;
  for (int it = 0; it < max_iter && hi - lo > xtol * std::max(1.0, std::fabs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    if (pred(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i)
    v[i] = count == 1 ? lo : std::exp(a + (b - a) * i / (count - 1));
  return v;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return v;
}

}  // namespace ratiolab
