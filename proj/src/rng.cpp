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


#include "ratiolab/rng.hpp"

#include <algorithm>

namespace ratiolab {

double CounterRng::normal() {
  // Box-Muller without caching the second variate, to keep draws stateless.
  double u1 = uniform_pos(), u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

long CounterRng::binomial(long n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  double u = uniform();
  double mean = n * p;
  if (mean < 30.0) {
    // plain inversion from zero
    double q = 1.0 - p, r = p / q;
    double pk = std::pow(q, static_cast<double>(n));
    double acc = pk;
    long k = 0;
    while (u >= acc && k < n) {
      pk *= r * static_cast<double>(n - k) / static_cast<double>(k + 1);
      ++k;
      acc += pk;
    }
    return k;
  }
  // Inversion over the support visited outward from the mode:
  // m, m+1, m-1, m+2, m-2, ... Expected work is O(sqrt(npq)).
  long m = static_cast<long>(std::floor((n + 1) * p));
  if (m > n) m = n;
  double lp = std::log(p), lq = std::log1p(-p);
  double pm = std::exp(std::lgamma(n + 1.0) - std::lgamma(m + 1.0) -
                       std::lgamma(n - m + 1.0) + m * lp + (n - m) * lq);
  double acc = pm;
  if (u < acc) return m;
  double up = pm, down = pm;
  long ku = m, kd = m;
  double ratio = p / (1.0 - p);
  while (ku < n || kd > 0) {
    if (ku < n) {
      up *= ratio * static_cast<double>(n - ku) / static_cast<double>(ku + 1);
      ++ku;
      acc += up;
      if (u < acc) return ku;
    }
    if (kd > 0) {
      down *= static_cast<double>(kd) / (ratio * static_cast<double>(n - kd + 1));
      --kd;
      acc += down;
      if (u < acc) return kd;
    }
    if (up < 1e-300 && down < 1e-300) break;
  }
  return m;  // only reachable through rounding of the cumulative sum
}

}  // namespace ratiolab
