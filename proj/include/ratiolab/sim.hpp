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

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ratiolab/classes.hpp"
#include "ratiolab/core.hpp"
#include "ratiolab/peel.hpp"
#include "ratiolab/rng.hpp"

namespace ratiolab {

// ------------------------------------------------------------------ laws

enum class LawKind { Uniform1D, UniformBox, CoordC0, RegressionPair, ClassificationPair };

struct Law {
  LawKind kind = LawKind::Uniform1D;
  int dim = 1;                 // UniformBox
  long j_max = 0;              // CoordC0: coordinates 1..j_max
  std::function<double(double)> g0;   // RegressionPair mean
  double noise = 0.0;          // RegressionPair: Y = clip(g0(X) + U[-noise, noise], 0, 1)
  std::function<double(double)> eta;  // ClassificationPair: P(Y = 1 | X)

  static Law uniform1d();
  static Law uniform_box(int d);
  static Law coord_c0(long j_max);
  static Law regression(std::function<double(double)> g0, double noise);
  static Law classification(std::function<double(double)> eta);
};

// One-dimensional draws come back in increasing order (they are generated
// as uniform order statistics); box draws are row-major n x d.
struct SampleBatch {
  Law law;
  long n = 0;
  std::uint64_t seed = 0;
  std::vector<double> x;
  std::vector<double> y;       // responses / labels
  std::vector<long> counts;    // CoordC0: counts[j-1] = #{i : X_ij != 0}
};

SampleBatch draw_sample(const Law& law, long n, std::uint64_t seed);
// Categorical counts of n draws from p, by sequential conditional binomials.
std::vector<int> draw_counts(CounterRng& rng, const std::vector<double>& p, long n);

// Sorted uniform order statistics via normalized exponential spacings.
void uniform_order_stats(CounterRng& rng, long n, std::vector<double>& out);

// -------------------------------------------------------------- suprema

struct SupremumResult {
  double value = 0.0;
  std::vector<double> witness;  // kernel specific, see each kernel
  std::string detail;
  double gap = 0.0;             // optimizer gap (sup_monotone)
  int refinement = 0;
  long nodes = 0;               // branch-and-bound work
};

// With no sample points F_n = 0, and every kernel below reduces to
// sup of u / phi(sqrt u) over cell masses u in (lo, hi].
SupremumResult sup_empty_sample(double lo, double hi, const NormWeight& phi);

// sup over t in (t_lo, t_hi] of |F_n(t) - t| / phi(sqrt t). The range is in
// t-units. Needs sorted x. Witness {t, F_n value}.
SupremumResult sup_halfline(const SampleBatch& b, double t_lo, double t_hi, const NormWeight& phi);
SupremumResult sup_halfline_sorted(const double* x, long n, double t_lo, double t_hi,
                                   const NormWeight& phi);

// sup over boxes [0, x] with r^2 < prod x <= delta^2 of |F_n(x) - prod x| / phi(sqrt prod x).
// Exact: reduces to finitely many cell candidates, searched by branch and
// bound. Witness {u, count, sign}.
SupremumResult sup_box(const SampleBatch& b, double r, double delta, const NormWeight& phi,
                       int refine_m = 8);
// Brute force over all grid cells, for tests (O(n^{d+1})).
SupremumResult sup_box_bruteforce(const SampleBatch& b, double r, double delta, const NormWeight& phi);

// sup over intervals with r^2 < b - a <= delta^2 of |P_n[a,b] - (b - a)| / phi(sqrt(b - a)).
SupremumResult sup_intervals(const SampleBatch& b, double r, double delta, const NormWeight& phi);
SupremumResult sup_intervals_quadratic(const SampleBatch& b, double r, double delta,
                                       const NormWeight& phi);

// sup over j in [j_lo, j_hi] of |P_n f_j - P f_j| / phi(sigma_j), with
// f_j(x) = x_j, P f_j = (j log j)^{-2}. phi = t^2 gives |P_n f / P f - 1|.
SupremumResult sup_c0(const SampleBatch& b, long j_lo, long j_hi, const NormWeight& phi);

// sup over monotone g: [0,1] -> [0,1] with P g^2 <= delta^2 of (P_n - P) g.
// Solved through the Lagrangian dual; gap is the certified duality gap.
SupremumResult sup_monotone(const SampleBatch& b, double delta, int budget = 10000);

// ---------------------------------------------------------- replicates

struct ReplicationSummary {
  std::vector<double> values;
  double mean = 0.0, stderr_ = 0.0, median = 0.0, q90 = 0.0, q95 = 0.0;
  std::uint64_t master_seed = 0;
};

double quantile7(std::vector<double> v, double p);
ReplicationSummary summarize(const std::vector<double>& v, std::uint64_t seed = 0);

using ReplicateFn = std::function<double(long rep, std::uint64_t key)>;
using ReplicateVecFn = std::function<std::vector<double>(long rep, std::uint64_t key)>;

// Replicate i always runs on stream_key(master, i); results are stored by
// index, so both drivers return identical vectors.
std::vector<double> run_replicates_serial(long reps, std::uint64_t master, const ReplicateFn& fn);
std::vector<double> run_replicates(long reps, std::uint64_t master, int workers, const ReplicateFn& fn);
std::vector<std::vector<double>> run_replicates_vec(long reps, std::uint64_t master, int workers,
                                                    const ReplicateVecFn& fn);

int default_workers();

// ------------------------------------------------------- psi / beta MC

struct PsiBetaEstimate {
  std::vector<ReplicationSummary> slices;  // sup over slice j of |P_n f - P f|
  double beta_hat = 0.0;                   // max_j mean_j / phi(rho_j)
  ReplicationSummary weighted;             // the full phi_q-normalized sup
  double e_hat = 0.0;
};

PsiBetaEstimate estimate_psi_beta(const FunctionClass& cls, const PeelingGrid& g, const NormWeight& phi,
                                  long n, long reps, std::uint64_t seed, int workers = 1);

// --------------------------------------------------------- CLT premises

struct CltWeight {
  std::string name;
  std::function<double(double)> psi;
};

struct CltPremiseInput {
  CltWeight weight;
  std::function<double(double)> r_n;
  std::function<double(double)> q_n;
  std::vector<double> n_grid;
  std::vector<double> delta_grid;     // decreasing
  // psi_{n,q_n}(rho) estimates: for each n a list of (rho_j, psi_hat, stderr).
  std::vector<std::vector<std::array<double, 3>>> psi_estimates;
  std::function<double(double)> omega;  // modulus for the dominance check, optional
};

struct TrendSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> values;
  std::string verdict;  // pass | fail | insufficient-evidence
};

struct CltPremiseReport {
  bool weight_ok = false;
  double doubling_constant = 0.0;
  std::vector<TrendSeries> conditions;  // local modulus, radius term, local mean
  bool dominance_ok = true;
  std::string dominance_detail;
  bool pass = false;
};

CltPremiseReport clt_premise_check(const CltPremiseInput& in);

// ------------------------------------------------------------ oracle

using CountStatistic = std::function<double(const std::vector<int>& counts, int n)>;

struct ExactLaw {
  std::vector<double> values;  // sorted distinct values
  std::vector<double> probs;
  double expectation() const;
  double tail_ge(double x) const;  // P{value >= x}
  double tail_le(double x) const;
};

ExactLaw exact_small_oracle(const std::vector<double>& p, int n, const CountStatistic& stat);

// Statistic builders over a FiniteDict: sup over members with sigma in
// (lo, hi] of |P_n f - P f| / w(f), where w is given per member.
CountStatistic dict_weighted_sup(const FunctionClass& cls, const std::vector<double>& weight,
                                 const std::vector<char>& active);

}  // namespace ratiolab
