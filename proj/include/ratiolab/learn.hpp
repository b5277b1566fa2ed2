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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ratiolab/classes.hpp"
#include "ratiolab/core.hpp"
#include "ratiolab/sim.hpp"

namespace ratiolab {

// ============================================================ margins

// A distribution function on the line together with its atoms. Empirical
// cdfs list every atom; continuous ones list none and are scanned on a grid.
struct CdfView {
  std::function<double(double)> F;       // right-continuous
  std::function<double(double)> F_left;  // left limit
  std::vector<double> atoms;             // sorted
  std::vector<double> atom_value;        // F at each atom
  std::vector<double> atom_left;         // left limit at each atom

  static CdfView empirical(std::vector<double> sample);  // need not be sorted
  static CdfView continuous(std::function<double(double)> F);
  static CdfView steps(std::vector<double> atoms, std::vector<double> values);  // F = values[k] on [atoms[k], atoms[k+1])
  bool is_continuous() const { return atoms.empty(); }
};

// M_{a,b}(F; G) = log inf{c >= 1 : F(t) <= c G(ct) and G(t) <= c F(ct) on (a, b)}.
// Bisection on log c over the fixed bracket [0, 64] to 1e-6; +inf if even
// c = e^64 fails. An empty range (a >= b) gives 0.
double mult_levy_distance(const CdfView& F, const CdfView& G, double a, double b, int grid = 4096);

// delta_n(f; lambda) = inf{delta >= 1/n : delta^{2a/(2+a)} F(delta) >= lambda n^{-2/(2+a)}};
// +inf when no delta <= 1 qualifies.
double margin_cutoff(const std::function<double(double)>& F, double lambda, long n, double alpha);

struct MarginSetup {
  double D = 1.0;      // log N(F, L2(P_n), eps) <= (D / eps)^alpha
  double alpha = 1.0;  // in (0, 2)
  double lambda = 1.0;
};

// A_n(t) = D n^{1/2} / t^{(2+a)/(2a)} and t_n = 2 K q^2 log n.
double margin_range_cap(const MarginSetup& s, long n, double t);
double margin_t_n(long n, double q, double K);

// Scores f_k(X) with X uniform on [0, 1] and exact margin cdfs.
struct ScoreFamily {
  std::string name;
  int size = 1;
  std::function<double(int, double)> score;
  std::function<double(int, double)> cdf;
  // atoms of F_{f_k}, if any
  std::function<std::vector<double>(int)> atoms;

  static ScoreFamily identity();
  // f_k(x) = x^{a_k}, a_k log-spaced in [1/2, 2]
  static ScoreFamily powers(int members);
  // f = lo on [0, p), hi on [p, 1]
  static ScoreFamily two_point(double p, double lo, double hi);
};

struct MarginExperimentConfig {
  MarginSetup setup;
  long n = 1000;
  double lambda_n = 1.0;
  long reps = 200;
  std::uint64_t seed = 0;
  int workers = 1;
  double B = -1.0;  // upper end of the range; < 0 means A_n(t_n)
  double q = 2.0;
  double K = 1.0;
  int subfamily = 32;  // members used from the family (capped at its size)
  // proof inequalities checked at bracket width sigma and level t (< 0: t_n)
  double sigma = 0.05;
  double t = -1.0;
  double C = 1.0;  // expectation constant feeding the assembled c
};

struct MarginExperimentResult {
  ReplicationSummary sup_m;
  double B = 0.0;
  double t_n = 0.0;
  std::vector<double> cutoffs;  // delta_n(f; lambda_n) per member
  std::string subfamily;
  // companion report on the two proof inequalities
  double c_assembled = 0.0;
  double lower_violation_freq = 0.0;
  double upper_violation_freq = 0.0;
  double prob_bound = 1.0;
  long deltas_checked = 0;
};

MarginExperimentResult margin_experiment(const ScoreFamily& family, const MarginExperimentConfig& cfg);

// ========================================================= excess risk

// beta + (2 sqrt(s (Delta + 16 beta) / (n r)) v 2 s / (n r log(s / (n r (Delta + 16 beta)) v 2))).
// When Delta + 16 beta = 0 the log argument is taken as 2.
double gamma_n(double r, double s, long n, double beta, double Delta);
double gamma_n(double r, double s, long n, const std::function<double(double)>& beta_fn,
               const std::function<double(double)>& Delta_fn);

enum class ErmKind { FiniteDimLS, MonotoneLS, MarginClassification, FiniteDict, Model };
enum class SetClass { HalfLines, Intervals, Boxes };

std::string to_string(ErmKind k);
std::string to_string(SetClass k);
SetClass set_class_from_string(const std::string& s);

struct ErmProblem {
  ErmKind kind = ErmKind::Model;
  std::string name;
  // psi_n(rho) majorants; psi_explicit may be empty (explicit mode unsupported)
  std::function<double(double rho, long n)> psi_shape;
  std::function<double(double rho, long n)> psi_explicit;
  std::function<double(double rho)> diam2;  // D^2(rho) for the declared rho_P
  std::function<double(double r)> tau;      // capacity for critical_radius
  double U = 2.0;   // bound on |h - P h| over differences of losses
  double K = 1.0;   // shape-mode absolute constant
  // descriptive parameters
  int d = 0, m = 0;
  double V = 0.0, h = 0.0, c_margin = 1.0;
  SetClass set_class = SetClass::Intervals;
  std::vector<double> bayes;  // Bayes set parameters (classification)

  // loss (y - g)^2 over an orthonormal d-dimensional span, rho_P = 2 ||g1 - g2||
  static ErmProblem finite_dim_ls(int d, double K = 1.0);
  // monotone step functions; g0 with m jumps
  static ErmProblem monotone_ls(int m, double K = 1.0);
  // |eta - 1/2| >= h, excess >= c h Pi(g != g0), Bayes set given by bayes
  static ErmProblem margin_classification(SetClass cls, double h, std::vector<double> bayes,
                                          double c_margin = 1.0, double K = 1.0);
  // beta = 0 and D^2(rho) = Delta0 rho
  static ErmProblem constant_model(double Delta0);
  // losses given by the dictionary's functions; everything computed exactly
  static ErmProblem finite_dict(const FunctionClass& cls);
};

// sup_{rho >= r} psi(rho) / rho and sup_{rho >= r} D^2(rho) / rho.
double beta_of(const ErmProblem& p, double r, long n, Mode mode);
double Delta_of(const ErmProblem& p, double r);

struct ExcessCertificate {
  bool feasible = false;
  double r_star = kInf;
  double q_gamma = kInf;     // q gamma_n(r*, s)
  double tolerance = 0.0;    // (1 - q gamma) r*
  double prob = 1.0;
  double raw_prob = 1.0;
  Mode mode = Mode::Shape;
  std::string regime;
  std::string note;
  ConstantList constants;
};

// q gamma_n(r, s): the radius of the two-sided ratio statement for a given r.
// In explicit mode gamma is the per-shell Bousquet threshold, max over shells.
double ratio_radius(const ErmProblem& p, long n, double r, double s, double q, Mode mode);

ExcessCertificate excess_risk_certificate(const ErmProblem& p, long n, double s, double q,
                                          Mode mode = Mode::Shape);

// Solves log tau(r) / r = n, with log truncated at 1 (log(x v e)).
double critical_radius(const std::function<double(double)>& tau, long n);
double critical_radius(const ErmProblem& p, long n);

// ================================================================ fits

struct LsFit {
  std::vector<double> coef;  // cosine-basis coefficients
  double emp_risk = 0.0;
  double excess = 0.0;       // ||g_hat - g0||^2 in L2(uniform)
  bool ridge = false;        // Gram was numerically singular
  bool projected = false;    // shrunk toward 1/2 to keep g in [0, 1]
  double shrink = 1.0;
};

double eval_cosine_fit(const std::vector<double>& coef, double x);
LsFit fit_finite_dim_ls(const SampleBatch& b, int d);

struct IsoFit {
  std::vector<double> knots;   // left end of each block (first x in it)
  std::vector<double> values;  // block levels, nondecreasing
  double emp_risk = 0.0;
  double excess = 0.0;
  double clip_gap = 0.0;       // empirical risk increase due to clipping
  double tolerance = 0.0;      // (log n)^{3/2} log log n / (2n)
  bool within_tolerance = true;
  double operator()(double x) const;
};

// Needs b.x sorted (as draw_sample produces).
IsoFit fit_isotonic(const SampleBatch& b);

struct ClassifierFit {
  SetClass cls = SetClass::Intervals;
  std::vector<double> params;  // HalfLines {t}; Intervals {a, b}; Boxes {a1, b1, a2, b2}
  double emp_error = 0.0;
  double excess = 0.0;         // analytic, from eta and the uniform Pi
  long candidates = 0;
};

// One-dimensional classes; eta is taken from the batch law.
ClassifierFit fit_margin_classifier(const SampleBatch& b, SetClass cls);
// General entry: x row-major n x dim, labels in {0, 1}. Boxes need dim = 2
// and eta2; the one-dimensional classes need dim = 1 and eta1.
ClassifierFit fit_margin_classifier(const std::vector<double>& x, const std::vector<double>& y, int dim,
                                    SetClass cls, const std::function<double(double)>& eta1,
                                    const std::function<double(double, double)>& eta2 = {});

// Excess risk of a set with the given parameters under eta, Pi uniform.
double classification_excess(SetClass cls, const std::vector<double>& params,
                             const std::function<double(double)>& eta1,
                             const std::function<double(double, double)>& eta2 = {});

}  // namespace ratiolab
