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

// Helpers shared by the study runner and the acceptance suite.

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ratiolab/lab.hpp"
#include "ratiolab/sim.hpp"

namespace ratiolab::detail {

// Radius rules, in sigma units: a number, or one of
// inv-sqrt-n | inv-sqrt-nlogn | logn-over-sqrt-n | clt.
double radius_rule(const std::string& rule, double n);

// Indices j with (j log j)^{-1} in (lo, hi].
std::pair<long, long> coord_range(double lo, double hi);

NormWeight parse_weight(const std::string& w, const NormWeight& fallback);

// psi(t) = t (log log 1/t)^beta
CltWeight clt_weight(double beta);

// Half-line slice estimates (rho_j, mean, stderr) for each n, grid r_n..delta at q.
std::vector<std::vector<std::array<double, 3>>> clt_psi_estimates(const std::vector<double>& ns,
                                                                  const std::function<double(double)>& r_n,
                                                                  double delta, double q, long reps,
                                                                  std::uint64_t seed, int workers);

// Replicate rows plus the five summary rows.
void add_replicates(StudyResult& out, long n, const std::string& statistic, const std::vector<double>& values,
                    std::uint64_t seed);
void add_value(StudyResult& out, long n, const std::string& statistic, const std::string& rep, double value,
               std::uint64_t seed);

std::uint64_t point_seed(std::uint64_t master, long n);

// Mean functions used by the ERM studies.
std::function<double(double)> ls_truth();
std::function<double(double)> isotonic_truth(int m);

}  // namespace ratiolab::detail
