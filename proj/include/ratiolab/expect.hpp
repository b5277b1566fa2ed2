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
#include <string>
#include <vector>

#include "ratiolab/classes.hpp"
#include "ratiolab/core.hpp"

namespace ratiolab {

// Bounds on E || sum_i f(X_i) ||_F for a P-centered class with values in
// [-1, 1], envelope norm env_norm and sup_f P f^2 <= sigma^2 <= env_norm^2.
struct ExpectationQuery {
  long n = 1;
  double sigma = 1.0;
  double env_norm = 1.0;
  EntropyModel model;
  Mode mode = Mode::Shape;
  double C = -1.0;   // C(H) override; < 0 means 1 (shape) or the assembled value (explicit)
  double K_c = -1.0; // K(H, c) override
  double c = 1.0;    // threshold constant of the large-variance regime
};

struct ExpectationBound {
  double value = 0.0;
  std::string regime;          // flat | gaussian | poisson | unit | fixed-point
  bool large_variance = false; // n sigma^2 >= c H(2 ||F|| / sigma)
  double large_variance_value = kInf;
  double C = 1.0;
  ConstantList constants;
};

ExpectationBound expectation_upper(const ExpectationQuery& q);

// E || sum f(X_i) ||^p <= C^p max(core^p, p^{p/2} (sqrt n sigma)^p, p^p).
ExpectationBound moment_upper(const ExpectationQuery& q, double p);

// K1 [sqrt n ||G|| ^ (sqrt n sigma sqrt(log(A ||G|| / sigma)) v log(A ||G|| / sigma ^ sqrt n ||G||) v 1)]
double vc_subgraph_expectation(long n, double sigma_G, double env_G, double A, double v, double K1);

struct PremiseItem {
  std::string name;
  bool pass = false;
  double lhs = 0.0, rhs = 0.0;
};

struct LowerBound {
  bool premises_ok = false;
  std::vector<PremiseItem> premises;
  double value = 0.0;  // the bound, meaningful only when premises_ok
  double raw = 0.0;    // sqrt n sigma / (32 L) sqrt(cover_log), reported either way
};

// Sudakov-type lower bound. L is the Rademacher minoration constant.
LowerBound expectation_lower(long n, double sigma, double cover_log, double L, const EntropyModel& model,
                             double env_norm);

struct FullnessEstimate {
  double packing_log = 0.0;       // log D(F, L2(P_hat), sigma / 2)
  double packing_log_sigma = 0.0; // log D(F, L2(P_hat), sigma) <= log N(F, L2(P), sigma / 2)
  long packing = 1;
  double ratio = 0.0;             // packing_log / (c H(||F|| / sigma))
  long candidates = 0;
};

// Greedy farthest-point packing of {f : sigma_P f <= sigma} in L2 of an
// mc_points-sample discretization of P (exact P for FiniteDict).
FullnessEstimate fullness_estimate(const FunctionClass& cls, double sigma, long mc_points, std::uint64_t seed,
                                   const EntropyModel& model, double c = 1.0);

}  // namespace ratiolab
