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
#include <map>
#include <string>
#include <vector>

#include "ratiolab/core.hpp"

namespace ratiolab {

// Study kinds: ratio-scaling | clt-premise | margin | erm | bound-table | verify | oracle.
struct StudySpec {
  std::string kind;
  std::string cls;  // class, family or problem, depending on kind
  std::vector<long> n_grid;
  long reps = 200;
  std::uint64_t seed = 20240601;
  std::string weight = "default";
  int workers = 0;  // 0 means default_workers()
  std::map<std::string, std::string> params;
  std::string csv, json, plot;

  bool operator==(const StudySpec&) const = default;
};

// Flat sections of `key = value` lines, '#' comments. Sections: [study],
// [params], [output]. Errors carry the line number.
StudySpec parse_config(const std::string& text);
StudySpec load_config(const std::string& path);
std::string emit_config(const StudySpec& s);
// Throws ConfigError on an unknown kind, an unsupported class or a bad grid.
void validate(const StudySpec& s);

struct Row {
  std::string study, cls;
  long n = 0;
  std::string rep;  // replicate index, or a summary name (mean, stderr, median, q90, q95)
  std::string statistic;
  double value = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const Row&) const = default;
};

struct StudyResult {
  StudySpec spec;
  std::vector<Row> rows;
  ConstantList constants;
  std::vector<std::string> notes;
  bool checks_ok = true;
};

StudyResult run_study(const StudySpec& s);

// Values of `statistic` rows whose rep field equals `rep`, in n order.
std::vector<double> column(const StudyResult& r, const std::string& statistic, const std::string& rep,
                           std::vector<double>* ns = nullptr);

struct SlopeFit {
  double slope = 0.0, intercept = 0.0, rms = 0.0;
  int points = 0;
};

// Least squares on (log x, log y); needs 3 or more positive points.
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);
SlopeFit fit_slope(const StudyResult& r, const std::string& statistic, const std::string& rep = "median");

struct Stability {
  bool pass = false;
  double ratio = 0.0;  // max / min of the normalized series
  double band = 0.0;
  std::vector<double> normalized;
};

// normalized_i = normalizer(n_i) * q_i; pass iff max / min < band (a series
// that spans exactly the band fails).
Stability stability_check(const std::vector<double>& n, const std::vector<double>& q,
                          const std::function<double(double)>& normalizer, double band);

std::string format_double(double v);  // shortest round-trip
std::string emit_csv(const StudyResult& r);
std::vector<Row> parse_csv(const std::string& text);
std::string emit_json(const StudyResult& r);
StudySpec spec_from_json(const std::string& text);
std::vector<Row> rows_from_json(const std::string& text);
std::string emit_gnuplot(const std::vector<double>& x, const std::vector<double>& y, const std::string& title);
std::string build_id();

// Writes whichever of csv / json / plot the spec names.
void write_outputs(const StudyResult& r);

// ---------------------------------------------------------- acceptance

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<double> fingerprint;  // raw replicate values, for the determinism check
};

struct AcceptanceOptions {
  long reps = 200;
  std::uint64_t seed = 20240601;
  int workers = 1;
  std::vector<int> only;  // empty: all twelve
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt);
std::string format_criterion(const CriterionResult& c);

}  // namespace ratiolab
