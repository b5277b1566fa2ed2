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

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ratiolab {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kE = 2.718281828459045235360287;

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
// Raised when a stated hypothesis of a bound does not hold on the inputs.
struct PremiseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

// log(x v e) and log log(x v e^e): the truncated logarithms used throughout.
inline double log_e(double x) { return std::log(std::max(x, kE)); }
inline double loglog_e(double x) { return std::log(log_e(x)); }

inline double log_base(double x, double q) { return std::log(x) / std::log(q); }

enum class Mode { Shape, Explicit };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// A named constant recorded alongside every bound so that reports can
// list what was plugged in.
struct Constant {
  std::string name;
  double value;
};
using ConstantList = std::vector<Constant>;

// phi(t) = t^alpha * L(1/t), L slowly varying (defaults to 1).
class NormWeight {
 public:
  NormWeight() = default;
  static NormWeight power(double alpha);
  // t^alpha * (log log (1/t))^beta with the truncated iterated log.
  static NormWeight power_loglog(double alpha, double beta);
  static NormWeight custom(std::string name, std::function<double(double)> fn,
                           double alpha);

  double operator()(double t) const;
  double alpha() const { return alpha_; }
  const std::string& name() const { return name_; }
  bool is_unit() const { return alpha_ == 0.0 && !slow_ && !full_; }
  // Plain t^alpha: |c - u| / phi(sqrt u) is then monotone on either side of
  // u = c whenever alpha <= 2, which the exact supremum kernels rely on.
  bool is_power() const { return !slow_ && !full_; }

 private:
  double alpha_ = 1.0;
  std::function<double(double)> slow_;
  std::function<double(double)> full_;
  std::string name_ = "t^1";
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evals = 0;
};

// Adaptive Simpson with Richardson correction on each accepted panel.
QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double tol = 1e-10, int max_depth = 40);

// Integral over [a, inf) for integrands with at least 1/u^{1+eps} decay,
// mapped through u = a * exp(y).
QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                            double tol = 1e-10);

// Bisection for a sign change of f on [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-13, int max_iter = 200);

// Smallest x in [lo, hi] with pred(x) true, assuming pred is monotone
// (false ... false true ... true).
double bisect_predicate(const std::function<bool(double)>& pred, double lo,
                        double hi, double xtol = 1e-12, int max_iter = 200);

std::vector<double> logspace(double lo, double hi, int count);
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace ratiolab
