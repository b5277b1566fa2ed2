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


#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ratiolab/core.hpp"

namespace ratiolab {

// gamma^{-1}(x) = x log(1 + x) and its inverse on [0, inf).
double gamma_inverse(double x);
double gamma_fn(double y);

// Geometric grid rho_j = r q^j, j = 0..l, l = ceil(log_q(delta / r)).
// Slice j (1-based) is (rho_{j-1}, rho_j], the last one clipped to delta.
struct PeelingGrid {
  double r = 0.0, delta = 0.0, q = 2.0;
  int l = 0;
  std::vector<double> rho;  // rho[0] = r, ..., rho[l] = r q^l (unclipped)

  double lo(int j) const { return rho[j - 1]; }
  double hi(int j) const { return std::min(rho[j], delta); }
};

PeelingGrid build_grid(double r, double delta, double q);

enum class VarianceCase { FirstCase, SecondCase };

// Per-slice inputs of the peeling bounds.
struct SliceStats {
  double psi = 0.0;        // E sup over the slice of |P_n f - P f|
  double vbar = 0.0;       // variance proxy, >= V_n
  double sigma2 = -1.0;    // sup Var f over the slice; < 0 means use hi^2
};

enum class VarPolicy { Envelope, PsiBased, Min };

// V-bar for slice j: the envelope second moment, rho_j^2 + 16 psi, or their minimum.
double variance_proxy(double rho_j, double psi, double env_sq, VarPolicy policy);

struct SjResult {
  std::vector<double> s;  // s_1..s_l
  std::string strategy;
  double sum_bound = kInf;         // bound on sum_j exp(-s_j / K)
  double sum_bound_prime = kInf;   // the shifted-index variant, when it applies
  double prob_bound = kInf;        // K times the sum bound
};

// strategy: "constant-log-l" (param = K'), "geometric" (param = s, alpha),
// "loglog-shift" (param = s_n), "custom" (values).
SjResult sj_strategy(const PeelingGrid& g, const std::string& strategy, double param,
                     double alpha = 2.0, double K = 1.0, const std::vector<double>& custom = {});

struct TauResult {
  double value = 0.0;
  std::vector<bool> poisson;  // regime per slice
  int argmax = 0;
};

TauResult tau_radius(const PeelingGrid& g, const NormWeight& phi, const std::vector<SliceStats>& st,
                     const std::vector<double>& s, long n);

struct BoundReport {
  double radius = 0.0;       // deviation above the center
  double center = 0.0;       // beta (or the reported location)
  double threshold = 0.0;    // center + radius, in the statistic's units
  double prob = 1.0;         // failure probability, capped at 1
  double raw_prob = 1.0;     // uncapped value of the probability expression
  bool vacuous = false;
  bool one_sided = false;    // explicit certificates only bound the upper tail
  Mode mode = Mode::Shape;
  std::string regime;
  ConstantList constants;
};

struct CertificateQuery {
  long n = 0;
  double U = 1.0;  // bound on |f - P f| (explicit mode)
  std::vector<double> s;  // one per slice (or per sub-slice)
  double K = 1.0;
  Mode mode = Mode::Shape;
};

// Weighted supremum sup_f |P_n f - P f| / phi_q(sigma f) around beta.
BoundReport concentration_certificate(const PeelingGrid& g, const NormWeight& phi,
                                      const std::vector<SliceStats>& st,
                                      const CertificateQuery& qy);

// Subdivided version: slice j is split into N_j sub-slices with their own
// stats and s values (flattened in slice order, sizes in counts).
BoundReport concentration_certificate_subdivided(const PeelingGrid& g, const NormWeight& phi,
                                                 const std::vector<std::vector<SliceStats>>& st,
                                                 const std::vector<std::vector<double>>& s,
                                                 long n, double K, Mode mode, double U = 1.0);

struct SingleLayerInput {
  NormWeight phi;
  std::function<double(double)> psi_tilde;
  double lambda = 0.0;
  long n = 0;
  double r = 0.0, delta = 0.0, q = 2.0;
  double s = 1.0, K = 1.0;
  VarianceCase vcase = VarianceCase::FirstCase;
};

BoundReport single_layer_bound(const SingleLayerInput& in);

// Ratio |P_n f / P f - 1| over r^2 < P f <= delta^2.
struct RatioBounds {
  BoundReport upper;
  BoundReport lower;
  bool has_lower = false;
};

RatioBounds ratio_bound_t2(long n, double r, double delta, double q, double beta, double s,
                           double K = 1.0, Mode mode = Mode::Shape);
// |P_n f - P f| / sigma over r < sigma <= delta, sigma^2 = P f.
RatioBounds ratio_bound_t1(long n, double r, double delta, double q, double beta, double s,
                           double t, double K = 1.0, Mode mode = Mode::Shape);
// |P_n f - P f| / sigma^alpha, alpha in (0,1) or (1,2). t defaults to s.
RatioBounds ratio_bound_talpha(long n, double r, double delta, double q, double beta, double s,
                               double alpha, double K = 1.0, double t = -1.0);

double c_q_alpha(double q, double alpha, double delta);

struct TailResult {
  double probability = 1.0;
  double threshold = 0.0;
};

// Bernstein, one tail: P{sum (f - P f) >= t} <= exp(-t^2 / (2 (V + U t / 3))), V = n sigma^2.
TailResult bernstein_tail(long n, double sigma2, double t, double U = 1.0);
// Bousquet: P{Z >= E Z + sqrt(2 t (n sigma^2 + 2 U E Z)) + U t / 3} <= exp(-t).
TailResult bousquet_tail(long n, double sigma2, double ez, double t, double U = 1.0);

struct AlexanderCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AlexanderPrecheck {
  bool pass = false;
  std::vector<AlexanderCheck> checks;
};

AlexanderPrecheck alexander_precheck(const std::vector<double>& n_grid,
                                     const std::function<double(double)>& c_n,
                                     const std::function<double(double)>& r_n,
                                     const std::function<double(double)>& delta_n,
                                     const std::function<double(double)>& u_n,
                                     const NormWeight& phi);

}  // namespace ratiolab
