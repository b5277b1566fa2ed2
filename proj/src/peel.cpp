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


#include "ratiolab/peel.hpp"

#include <algorithm>
#include <sstream>

namespace ratiolab {

double gamma_inverse(double x) {
  require(x >= 0.0, "gamma_inverse needs x >= 0");
  return x * std::log1p(x);
}

double gamma_fn(double y) {
  require(y >= 0.0, "gamma needs y >= 0");
  if (y == 0.0) return 0.0;
  // Bracket: x log(1+x) is increasing; sqrt(y) is a lower bound near 0 and
  // 2y/log(1+y) an upper bound everywhere.
  double lo = 0.0, hi = std::max(1.0, 2.0 * y / std::log1p(y));
  while (gamma_inverse(hi) < y) hi *= 2.0;
  double x = y < 1.0 ? std::sqrt(y) : y / std::log1p(y);
  x = std::clamp(x, lo, hi);
  for (int it = 0; it < 200; ++it) {
    double f = gamma_inverse(x) - y;
    if (std::fabs(f) <= 1e-15 * y) break;
    if (f > 0) hi = x; else lo = x;
    double d = std::log1p(x) + x / (1.0 + x);
    double nx = x - f / d;
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::fabs(nx - x) <= 1e-17 * x) { x = nx; break; }
    x = nx;
  }
  return x;
}

PeelingGrid build_grid(double r, double delta, double q) {
  require(r > 0.0 && r < delta && delta <= 1.0, "grid needs 0 < r < delta <= 1");
  require(q > 1.0 && q <= 2.0, "grid needs 1 < q <= 2");
  PeelingGrid g;
  g.r = r;
  g.delta = delta;
  g.q = q;
  // ceil with a little slack so that exact powers are not pushed up by rounding
  double x = std::log(delta / r) / std::log(q);
  g.l = static_cast<int>(std::ceil(x - 1e-12));
  if (g.l < 1) g.l = 1;
  g.rho.resize(g.l + 1);
  for (int j = 0; j <= g.l; ++j) g.rho[j] = r * std::pow(q, j);
  return g;
}

double variance_proxy(double rho_j, double psi, double env_sq, VarPolicy policy) {
  require(psi >= 0.0 && env_sq >= 0.0, "variance_proxy needs psi, envelope >= 0");
  double b = rho_j * rho_j + 16.0 * psi;
  switch (policy) {
    case VarPolicy::Envelope: return env_sq;
    case VarPolicy::PsiBased: return b;
    case VarPolicy::Min: return std::min(env_sq, b);
  }
  return b;
}

SjResult sj_strategy(const PeelingGrid& g, const std::string& strategy, double param,
                     double alpha, double K, const std::vector<double>& custom) {
  require(g.l >= 1, "sj_strategy needs a nonempty grid");
  require(K > 0.0, "K must be positive");
  SjResult out;
  out.strategy = strategy;
  out.s.resize(g.l);
  if (strategy == "constant-log-l") {
    require(param > 0.0, "K' must be positive");
    double v = param * std::log(static_cast<double>(g.l));
    std::fill(out.s.begin(), out.s.end(), v);
    out.sum_bound = std::pow(static_cast<double>(g.l), 1.0 - param / K);
    out.prob_bound = K * out.sum_bound;
  } else if (strategy == "geometric") {
    require(param > 0.0 && alpha > 0.0, "geometric needs s > 0, alpha > 0");
    double qa = std::pow(g.q, alpha);
    for (int j = 1; j <= g.l; ++j) out.s[j - 1] = param * std::pow(qa, j);
    out.sum_bound = K / (qa - 1.0) / param * std::exp(-param / K);
    out.sum_bound_prime = K * qa / (qa - 1.0) / param * std::exp(-param / (K * qa));
    out.prob_bound = K * out.sum_bound_prime;
  } else if (strategy == "loglog-shift") {
    require(param > 0.0, "s_n must be positive");
    double sum = 0.0;
    for (int j = 1; j <= g.l; ++j) {
      double v = param + K * std::log(log_base(g.q * g.delta / g.hi(j), g.q));
      out.s[j - 1] = v;
      sum += std::exp(-v / K);
    }
    out.sum_bound = sum;
    out.prob_bound = K * sum;
  } else if (strategy == "custom") {
    require(static_cast<int>(custom.size()) == g.l, "custom s_j list must have one entry per slice");
    out.s = custom;
    double sum = 0.0;
    for (double v : custom) sum += std::exp(-v / K);
    out.sum_bound = sum;
    out.prob_bound = K * sum;
  } else {
    throw DomainError("unknown s_j strategy '" + strategy + "'");
  }
  return out;
}

namespace {

// Radius of one slice in shape mode, with its regime.
double slice_tau(double s, double vbar, double phi_rho, long n, bool& poisson) {
  require(s > 0.0, "s_j must be positive");
  if (vbar <= 0.0) {
    poisson = true;
    return 0.0;
  }
  double nv = static_cast<double>(n) * vbar;
  if (s > 2.0 * nv) {
    poisson = true;
    double arg = s / nv;
    if (!(arg > 1.0)) throw std::logic_error("Poisson branch with log argument <= 1");
    return 2.0 * s / (n * phi_rho * std::log(arg));
  }
  poisson = false;
  return 2.0 * std::sqrt(s * vbar / (static_cast<double>(n) * phi_rho * phi_rho));
}

// Upper deviation of ||P_n - P||_class above its mean, from Bousquet's
// inequality at level e^{-s}.
double bousquet_excess(double s, double sigma2, double psi, long n, double U) {
  double nn = static_cast<double>(n);
  return std::sqrt(2.0 * s * (sigma2 + 2.0 * U * psi) / nn) + U * s / (3.0 * nn);
}

void finish(BoundReport& b) {
  b.prob = std::min(b.raw_prob, 1.0);
  b.vacuous = b.raw_prob >= 1.0;
  b.threshold = b.center + b.radius;
}

}  // namespace

TauResult tau_radius(const PeelingGrid& g, const NormWeight& phi, const std::vector<SliceStats>& st,
                     const std::vector<double>& s, long n) {
  require(static_cast<int>(st.size()) == g.l && static_cast<int>(s.size()) == g.l,
          "tau_radius needs one stats entry and one s_j per slice");
  require(n >= 1, "n must be positive");
  TauResult out;
  out.poisson.resize(g.l);
  out.value = 0.0;
  for (int j = 1; j <= g.l; ++j) {
    bool p = false;
    double v = slice_tau(s[j - 1], st[j - 1].vbar, phi(g.rho[j]), n, p);
    out.poisson[j - 1] = p;
    if (v > out.value) {
      out.value = v;
      out.argmax = j;
    }
  }
  return out;
}

BoundReport concentration_certificate_subdivided(const PeelingGrid& g, const NormWeight& phi,
                                                 const std::vector<std::vector<SliceStats>>& st,
                                                 const std::vector<std::vector<double>>& s,
                                                 long n, double K, Mode mode, double U) {
  require(static_cast<int>(st.size()) == g.l && static_cast<int>(s.size()) == g.l,
          "certificate needs stats for every slice");
  require(n >= 1 && K > 0.0, "certificate needs n >= 1, K > 0");
  BoundReport b;
  b.mode = mode;
  double beta = 0.0, rad = 0.0, sum = 0.0;
  int npois = 0, ngauss = 0;
  for (int j = 1; j <= g.l; ++j) {
    require(st[j - 1].size() == s[j - 1].size() && !st[j - 1].empty(),
            "each slice needs matching sub-slice stats and s values");
    double ph = phi(g.rho[j]);
    double hi = g.hi(j);
    for (size_t k = 0; k < st[j - 1].size(); ++k) {
      const SliceStats& x = st[j - 1][k];
      double sj = s[j - 1][k];
      beta = std::max(beta, x.psi / ph);
      if (mode == Mode::Shape) {
        bool p = false;
        rad = std::max(rad, slice_tau(sj, x.vbar, ph, n, p));
        (p ? npois : ngauss)++;
        sum += std::exp(-sj / K);
      } else {
        double s2 = x.sigma2 >= 0.0 ? x.sigma2 : hi * hi;
        if (x.vbar > 0.0) s2 = std::min(s2, x.vbar);
        double top = (x.psi + bousquet_excess(sj, s2, x.psi, n, U)) / ph;
        rad = std::max(rad, top);  // holds the threshold until beta is known
        sum += std::exp(-sj);
      }
    }
  }
  b.center = beta;
  if (mode == Mode::Shape) {
    b.radius = rad;
    b.raw_prob = K * sum;
    std::ostringstream os;
    os << "shape: " << ngauss << " gaussian / " << npois << " poisson sub-slices";
    b.regime = os.str();
    b.constants = {{"K", K}};
  } else {
    b.radius = std::max(0.0, rad - beta);
    b.raw_prob = sum;
    b.one_sided = true;
    b.regime = "explicit: per-slice Bousquet, union bound";
    b.constants = {{"U", U}, {"bousquet_variance_factor", 2.0}, {"bousquet_linear_factor", 1.0 / 3.0}};
  }
  finish(b);
  return b;
}

BoundReport concentration_certificate(const PeelingGrid& g, const NormWeight& phi,
                                      const std::vector<SliceStats>& st,
                                      const CertificateQuery& qy) {
  require(static_cast<int>(st.size()) == g.l && static_cast<int>(qy.s.size()) == g.l,
          "certificate needs one stats entry and one s_j per slice");
  std::vector<std::vector<SliceStats>> sub(g.l);
  std::vector<std::vector<double>> ss(g.l);
  for (int j = 0; j < g.l; ++j) {
    sub[j] = {st[j]};
    ss[j] = {qy.s[j]};
  }
  return concentration_certificate_subdivided(g, phi, sub, ss, qy.n, qy.K, qy.mode, qy.U);
}

BoundReport single_layer_bound(const SingleLayerInput& in) {
  require(in.n >= 1 && in.r > 0.0 && in.delta > in.r && in.q > 1.0, "single_layer_bound: bad grid");
  require(in.lambda >= 0.0 && in.lambda < 1.0, "lambda must lie in [0, 1)");
  require(static_cast<bool>(in.psi_tilde), "psi_tilde majorant is required");
  const auto& phi = in.phi;
  std::vector<double> rho;
  for (double x = in.r; x <= in.delta * (1.0 + 1e-12); x *= in.q) rho.push_back(x);
  // premise: psi~ / phi^lambda nonincreasing, checked on the grid and on a dense log grid
  auto ratio = [&](double t) { return in.psi_tilde(t) / std::pow(phi(t), in.lambda); };
  auto dense = logspace(in.r, in.delta, 400);
  for (const auto* pts : {&rho, &dense}) {
    for (size_t k = 1; k < pts->size(); ++k) {
      double a = ratio((*pts)[k - 1]), b = ratio((*pts)[k]);
      if (b > a * (1.0 + 1e-12) + 1e-300)
        throw PremiseError("psi_tilde / phi^lambda is not nonincreasing on the grid");
    }
  }
  for (size_t k = 1; k < dense.size(); ++k) {
    double a = dense[k - 1] / phi(dense[k - 1]), b = dense[k] / phi(dense[k]);
    bool ok = in.vcase == VarianceCase::FirstCase ? b <= a * (1.0 + 1e-12) : b >= a * (1.0 - 1e-12);
    if (!ok) throw PremiseError("rho / phi(rho) is not monotone in the direction required by the case");
  }
  double pr = phi(in.r);
  double sum = 0.0;
  for (double x : rho) sum += std::pow(phi(x), -(1.0 - in.lambda));
  double c = sum * std::pow(pr, 1.0 - in.lambda);
  double psr = in.psi_tilde(in.r);
  double vbar;
  double c_phi = 0.0;
  if (in.vcase == VarianceCase::FirstCase) {
    vbar = in.r * in.r + 16.0 * c * psr;
  } else {
    for (double x : rho) c_phi = std::max(c_phi, x * x / (phi(x) * phi(x)));
    vbar = c_phi * pr * pr + 16.0 * c * psr;
  }
  BoundReport b;
  b.mode = Mode::Shape;
  bool poisson = false;
  b.radius = slice_tau(in.s, vbar, pr, in.n, poisson);
  b.center = 0.0;  // deviation around E_{n,q,phi}, which the caller supplies
  b.regime = std::string(in.vcase == VarianceCase::FirstCase ? "case 1" : "case 2") +
             (poisson ? ", poisson" : ", gaussian");
  b.raw_prob = in.K * std::exp(-in.s / in.K);
  b.constants = {{"K", in.K}, {"c_q_lambda_phi", c}, {"c_phi", c_phi}, {"vbar", vbar}};
  finish(b);
  return b;
}

namespace {

// Explicit one-sided version of the t^2 ratio bound: on slice j the class
// has P f in (lo_j^2, hi_j^2], psi_j <= beta rho_j^2 and Var f <= hi_j^2.
BoundReport explicit_ratio_t2(long n, const PeelingGrid& g, double beta, double s, double U) {
  BoundReport b;
  b.mode = Mode::Explicit;
  b.one_sided = true;
  double thr = 0.0, sum = 0.0;
  for (int j = 1; j <= g.l; ++j) {
    double sj = s * std::pow(g.q, 2.0 * j);
    double psi = beta * g.rho[j] * g.rho[j];
    double hi = g.hi(j), lo = g.lo(j);
    double top = (psi + bousquet_excess(sj, hi * hi, psi, n, U)) / (lo * lo);
    thr = std::max(thr, top);
    sum += std::exp(-sj);
  }
  b.center = beta;
  b.radius = std::max(0.0, thr - beta);
  b.raw_prob = sum;
  b.regime = "explicit: Bousquet per slice, normalized by the slice lower edge";
  b.constants = {{"U", U}, {"s_j", s}, {"q", g.q}};
  finish(b);
  return b;
}

// Explicit one-sided bound for sup |P_n f - P f| / phi_q(sigma) with
// psi_j <= beta phi(rho_j), Var f <= hi_j^2, s_j supplied.
BoundReport explicit_weighted(long n, const PeelingGrid& g, const NormWeight& phi, double beta,
                              const std::vector<double>& s, double U) {
  BoundReport b;
  b.mode = Mode::Explicit;
  b.one_sided = true;
  double thr = 0.0, sum = 0.0;
  for (int j = 1; j <= g.l; ++j) {
    double ph = phi(g.rho[j]);
    double psi = beta * ph;
    double hi = g.hi(j);
    thr = std::max(thr, (psi + bousquet_excess(s[j - 1], hi * hi, psi, n, U)) / ph);
    sum += std::exp(-s[j - 1]);
  }
  b.center = beta;
  b.radius = std::max(0.0, thr - beta);
  b.raw_prob = sum;
  b.regime = "explicit: Bousquet per slice";
  b.constants = {{"U", U}};
  finish(b);
  return b;
}

}  // namespace

RatioBounds ratio_bound_t2(long n, double r, double delta, double q, double beta, double s,
                           double K, Mode mode) {
  require(n >= 1 && s > 0.0 && beta >= 0.0 && K > 0.0, "ratio_bound_t2: bad inputs");
  PeelingGrid g = build_grid(r, delta, q);
  RatioBounds out;
  if (mode == Mode::Explicit) {
    out.upper = explicit_ratio_t2(n, g, beta, s, 1.0);
    return out;
  }
  double nr2 = static_cast<double>(n) * r * r;
  double x = s / (nr2 * (1.0 + 16.0 * beta));
  double rad;
  std::string regime;
  if (x <= 2.0) {
    rad = 2.0 * std::sqrt(s / nr2 * (1.0 + 16.0 * beta));
    regime = "gaussian";
  } else {
    rad = 2.0 * s / (nr2 * std::log(std::max(x, 2.0)));
    regime = "poisson";
  }
  double prob = K * K / (q * q - 1.0) / s * std::exp(-s / K);
  BoundReport up;
  up.mode = Mode::Shape;
  up.center = beta;
  up.radius = q * (beta + rad) - beta;
  up.raw_prob = prob;
  up.regime = "upper, " + regime;
  up.constants = {{"K", K}, {"q", q}, {"variance_factor", 16.0}};
  finish(up);
  BoundReport low = up;
  low.radius = rad;
  low.regime = "lower, " + regime;
  finish(low);
  low.threshold = beta - rad;
  out.upper = up;
  out.lower = low;
  out.has_lower = true;
  return out;
}

RatioBounds ratio_bound_t1(long n, double r, double delta, double q, double beta, double s,
                           double t, double K, Mode mode) {
  require(n >= 1 && s > 0.0 && t > 0.0 && beta >= 0.0 && K > 0.0, "ratio_bound_t1: bad inputs");
  PeelingGrid g = build_grid(r, delta, q);
  RatioBounds out;
  if (mode == Mode::Explicit) {
    std::vector<double> sj(g.l);
    for (int j = 1; j <= g.l; ++j) sj[j - 1] = s + 2.0 * std::log(static_cast<double>(j));
    out.upper = explicit_weighted(n, g, NormWeight::power(1.0), beta, sj, 1.0);
    return out;
  }
  double nn = static_cast<double>(n);
  double cq = 0.0;
  for (int j = 1; j <= g.l; ++j) cq = std::max(cq, std::log(static_cast<double>(j)) / std::pow(q, j));
  double LL = std::log(log_base(q * delta / r, q));
  double core = s + 2.0 * K * LL;
  double gauss = 2.0 * std::sqrt(17.0) * std::sqrt(core / nn);
  double pois = 10.0 * std::sqrt(s / q + 2.0 * cq * K) * std::sqrt(core) /
                (nn * r * std::log(std::max((5.0 * s / q + 10.0 * cq * K) / (17.0 * nn * r * r), 10.0)));
  double Bn = std::max(pois, gauss);
  bool simplified = std::max(r, beta) >= std::sqrt(core / (34.0 * nn));
  BoundReport b;
  b.mode = Mode::Shape;
  b.center = beta;
  b.constants = {{"K", K}, {"c_q", cq}, {"B_n", Bn}, {"variance_factor", 17.0}};
  if (beta <= r) {
    b.radius = simplified ? gauss : Bn;
    b.raw_prob = 2.0 * K * std::exp(-s);
    b.regime = simplified ? "case (a), poisson term deleted" : "case (a)";
  } else {
    double a1 = 2.0 * t / (nn * r * std::log(std::max(t / (17.0 * nn * r * beta), 2.0)));
    double a2 = 2.0 * std::sqrt(17.0) * std::sqrt(t * beta / (nn * r));
    b.radius = std::max({a1, a2, simplified ? gauss : Bn});
    b.raw_prob = K * K / (q - 1.0) / t * std::exp(-t / K) + 2.0 * K * std::exp(-s);
    b.regime = simplified ? "case (b), poisson term deleted" : "case (b)";
  }
  finish(b);
  out.upper = b;
  out.lower = b;
  out.lower.threshold = beta - b.radius;
  out.has_lower = true;
  return out;
}

double c_q_alpha(double q, double alpha, double delta) {
  require(alpha > 0.0 && alpha < 1.0 && q > 1.0 && delta > 0.0, "c_q_alpha needs alpha in (0,1)");
  auto f = [&](double u) {
    return std::pow(u, 2.0 * (1.0 - alpha)) * std::log(log_base(q * q * delta / u, q));
  };
  double top = delta * q;
  auto grid = logspace(top * 1e-14, top, 20000);
  size_t best = 0;
  for (size_t k = 1; k < grid.size(); ++k) if (f(grid[k]) > f(grid[best])) best = k;
  // golden-section refinement on the bracketing cells
  double a = grid[best > 0 ? best - 1 : 0], b = grid[std::min(best + 1, grid.size() - 1)];
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 200 && b - a > 1e-15 * top; ++it) {
    if (f(c) > f(d)) { b = d; } else { a = c; }
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  return std::max({f(grid[best]), f(0.5 * (a + b)), f(top)});
}

RatioBounds ratio_bound_talpha(long n, double r, double delta, double q, double beta, double s,
                               double alpha, double K, double t) {
  require(n >= 1 && s > 0.0 && beta >= 0.0 && K > 0.0, "ratio_bound_talpha: bad inputs");
  require((alpha > 0.0 && alpha < 1.0) || (alpha > 1.0 && alpha < 2.0), "alpha must lie in (0,1) or (1,2)");
  if (t <= 0.0) t = s;
  build_grid(r, delta, q);  // validates the range
  double nn = static_cast<double>(n);
  double ra = std::pow(r, alpha);
  BoundReport b;
  b.mode = Mode::Shape;
  b.center = beta;
  if (alpha > 1.0) {
    double m = std::max(std::pow(r, 2.0 - alpha), beta);
    double pois = 10.0 * s / (nn * ra * std::log(std::max(s / (17.0 * nn * ra * m), 10.0)));
    double gauss = 2.0 * std::sqrt(17.0) * std::sqrt(s * m / (nn * ra));
    b.radius = std::max(pois, gauss);
    double tau = 2.0 * (alpha - 1.0);
    b.raw_prob = K * K / (std::pow(q, tau) - 1.0) / s * std::exp(-s / K);
    b.regime = std::string(beta > std::pow(r, 2.0 - alpha) ? "beta above r^{2-alpha}" : "r^{2-alpha} dominant") +
               (gauss >= pois ? ", gaussian" : ", poisson");
    b.constants = {{"K", K}, {"tau", tau}};
  } else {
    double LL = std::log(log_base(q * q * delta / r, q));
    double need = std::sqrt((s + 2.0 * K * LL) / nn);
    if (std::max(r, std::pow(beta, 1.0 / (2.0 - alpha))) < need)
      throw PremiseError("range condition r v beta^{1/(2-alpha)} >= sqrt((s + 2K loglog)/n) fails");
    double cqa = c_q_alpha(q, alpha, delta);
    double base = 2.0 * std::sqrt(17.0) *
                  std::sqrt((s * std::pow(delta, 2.0 * (1.0 - alpha)) + 2.0 * K * cqa) / nn);
    b.constants = {{"K", K}, {"c_q_alpha", cqa}};
    if (beta <= std::pow(r, 2.0 - alpha)) {
      b.radius = base;
      b.raw_prob = 2.0 * K * std::exp(-s);
      b.regime = "case (a)";
    } else {
      double a1 = 2.0 * t / (nn * ra * std::log(std::max(t / (17.0 * nn * ra * beta), 2.0)));
      double a2 = 2.0 * std::sqrt(17.0) * std::sqrt(t * beta / (nn * ra));
      b.radius = std::max({base, a1, a2});
      b.raw_prob = K * K / (std::pow(q, alpha) - 1.0) / t * std::exp(-t / K) + 2.0 * K * std::exp(-s);
      b.regime = "case (b)";
    }
  }
  finish(b);
  RatioBounds out;
  out.upper = b;
  out.lower = b;
  out.lower.threshold = beta - b.radius;
  out.has_lower = true;
  return out;
}

TailResult bernstein_tail(long n, double sigma2, double t, double U) {
  require(n >= 0 && sigma2 >= 0.0 && t >= 0.0 && U > 0.0, "bernstein_tail needs nonnegative inputs");
  TailResult out;
  out.threshold = t;
  double V = static_cast<double>(n) * sigma2;
  double den = 2.0 * (V + U * t / 3.0);
  out.probability = den > 0.0 ? std::exp(-t * t / den) : (t > 0.0 ? 0.0 : 1.0);
  return out;
}

TailResult bousquet_tail(long n, double sigma2, double ez, double t, double U) {
  require(n >= 0 && sigma2 >= 0.0 && ez >= 0.0 && t >= 0.0 && U > 0.0,
          "bousquet_tail needs nonnegative inputs");
  TailResult out;
  double v = static_cast<double>(n) * sigma2;
  out.threshold = ez + std::sqrt(2.0 * t * (v + 2.0 * U * ez)) + U * t / 3.0;
  out.probability = std::exp(-t);
  return out;
}

AlexanderPrecheck alexander_precheck(const std::vector<double>& n_grid,
                                     const std::function<double(double)>& c_n,
                                     const std::function<double(double)>& r_n,
                                     const std::function<double(double)>& delta_n,
                                     const std::function<double(double)>& u_n,
                                     const NormWeight& phi) {
  require(n_grid.size() >= 2, "alexander_precheck needs at least two grid points");
  AlexanderPrecheck out;
  auto monotone = [&](const std::string& name, const std::function<double(double)>& f, bool down) {
    AlexanderCheck c;
    c.name = name;
    c.pass = true;
    for (size_t k = 1; k < n_grid.size(); ++k) {
      double a = f(n_grid[k - 1]), b = f(n_grid[k]);
      double tol = 1e-12 * std::max(std::fabs(a), std::fabs(b));
      bool ok = down ? b <= a + tol : b >= a - tol;
      if (!ok) {
        c.pass = false;
        std::ostringstream os;
        os << "violated between n=" << n_grid[k - 1] << " and n=" << n_grid[k];
        c.detail = os.str();
        break;
      }
    }
    out.checks.push_back(c);
  };
  monotone("c_n/n nonincreasing", [&](double n) { return c_n(n) / n; }, true);
  monotone("r_n nonincreasing", r_n, true);
  monotone("sqrt(n) delta_n nondecreasing", [&](double n) { return std::sqrt(n) * delta_n(n); }, false);
  monotone("u_n nonincreasing", u_n, true);
  // inf over n and t of c_n phi(t)/t; a decay of the per-n infimum along the
  // grid is read as the infimum being 0.
  AlexanderCheck inf;
  inf.name = "inf c_n phi(t)/t > 0";
  std::vector<double> m;
  bool positive = true;
  for (double n : n_grid) {
    double lo = r_n(n), hi = delta_n(n);
    double best = kInf;
    for (double t : logspace(lo, std::max(hi, lo), 200)) best = std::min(best, c_n(n) * phi(t) / t);
    m.push_back(best);
    if (!(best > 0.0)) positive = false;
  }
  double slope = 0.0;
  if (positive) {
    double lx0 = std::log(n_grid.front()), lx1 = std::log(n_grid.back());
    slope = (std::log(m.back()) - std::log(m.front())) / (lx1 - lx0);
  }
  inf.pass = positive && slope >= -0.05;
  std::ostringstream os;
  os << "min over grid " << *std::min_element(m.begin(), m.end()) << ", log-log slope " << slope;
  inf.detail = os.str();
  out.checks.push_back(inf);
  out.pass = std::all_of(out.checks.begin(), out.checks.end(), [](const auto& c) { return c.pass; });
  return out;
}

}  // namespace ratiolab
