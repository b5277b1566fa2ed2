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
#include <optional>
#include <string>
#include <vector>

#include "ratiolab/core.hpp"

namespace ratiolab {

enum class ClassKind { HalfLine1D, BoxCdf, Intervals1D, MonotoneUnit, CoordC0, FiniteDict, LinearSpan };

// Which scale sigma_P f is attached to each member.
enum class SigmaConvention { SqrtMean, SqrtVariance, L2Norm };

std::string to_string(ClassKind k);
ClassKind class_kind_from_string(const std::string& s);

// Finite sample space {0..m-1} with probabilities p and a finite list of
// functions given by their value tables.
struct FiniteDict {
  std::vector<double> p;
  std::vector<std::vector<double>> funcs;
};

struct FunctionClass {
  ClassKind kind = ClassKind::HalfLine1D;
  SigmaConvention sigma = SigmaConvention::SqrtMean;
  int dim = 1;  // box dimension or span dimension
  // MonotoneUnit: c.d.f. and density of the nonatomic law on [0, 1].
  std::function<double(double)> cdf;
  std::function<double(double)> density;
  FiniteDict dict;

  static FunctionClass half_line(SigmaConvention s = SigmaConvention::SqrtMean);
  static FunctionClass box_cdf(int d);
  static FunctionClass intervals();
  static FunctionClass monotone_unit();  // uniform law
  static FunctionClass coord_c0();
  static FunctionClass finite_dict(FiniteDict d, SigmaConvention s = SigmaConvention::SqrtMean);
  static FunctionClass linear_span(int d);
};

// Member parameters, interpreted per kind:
//   HalfLine1D  {t}            indicator of [0, t]
//   BoxCdf      {x_1..x_d}     indicator of [0, x]
//   Intervals1D {a, b}         indicator of [a, b]
//   MonotoneUnit {s_1,w_1,...} g = sum w_k 1[x >= s_k]
//   CoordC0     {j}            f_j(x) = x_j, j may be real in the sigma formula
//   FiniteDict  {index}
//   LinearSpan  {c_0..c_{d-1}} coefficients in the cosine basis
struct Member {
  std::vector<double> params;
};

double sigma_of(const FunctionClass& cls, const Member& f);

// Slice (lo, hi] of sigma values.
struct Slice {
  double lo = 0.0;
  double hi = 0.0;
};

struct EnvelopeNorm {
  bool empty = false;  // no member falls in the slice
  double norm = 0.0;   // ||F_slice||_{2,P}
  std::string method;  // closed-form | quadrature | enumeration
  double tolerance = 0.0;
};

EnvelopeNorm slice_envelope_norm(const FunctionClass& cls, const Slice& s);

// Probability that the cosine basis is evaluated against; exposed for tests.
double cosine_basis(int k, double x);

// g_q(t) = (A ||F_{t/q, t}|| / t)^v.
double capacity(const FunctionClass& cls, double t, double q, double A, double v);
// Indicator-class capacity P(union of members with P C <= delta) / delta, at least 1.
double alexander_capacity(const FunctionClass& cls, double delta);

// tau(delta) = P(union of C delta C0 over members with P(C delta C0) <= delta) / delta.
// center holds the parameters of C0.
struct LocalCapacity {
  double tau = 0.0;
  double union_mass = 0.0;
  bool capped = false;  // reached 1/delta
  std::string method;
};
LocalCapacity local_capacity_tau(const FunctionClass& cls, const Member& center, double delta);

// W = max_j max(log log_q(delta q / rho_j), log g_q(rho_j)) over the grid rho_j = r q^j.
double w_parameter(const std::function<double(double)>& g_q, double r, double delta, double q);

// ---------------------------------------------------------------- entropy

enum class EntropyKind { VCType, RegVarying, VCMajor };

struct EntropyModel {
  EntropyKind kind = EntropyKind::VCType;
  double A = kE;  // VCType, VCMajor
  double v = 1.0;  // VCType
  double alpha = 1.0;  // RegVarying exponent in (0, 2)
  double c = 1.0;  // RegVarying scale
  double env_norm = 1.0;  // VCMajor depends on ||F|| itself

  static EntropyModel vc_type(double A, double v);
  static EntropyModel reg_varying(double alpha, double c);
  static EntropyModel vc_major(double A, double env_norm);
};

// H(x), x = ||F|| / tau; zero below x = 1/2.
double entropy_eval(const EntropyModel& m, double x);

struct EntropyConstants {
  double C_H = 0.0;
  double D_H = 0.0;
  double A_H = 0.0;
  bool closed_form = false;
  double tolerance = 0.0;
};

EntropyConstants entropy_constants(const EntropyModel& m);

// The model used for Intervals1D in explicit mode: a packing bound for
// a VC class of dimension 2 combined with a length grid gives
// log N(tau) <= 5 log(A / tau) with A = (384 e^3)^{1/5}.
EntropyModel intervals_entropy_model();

}  // namespace ratiolab
