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


// ratiolab command line. Every subcommand builds a StudySpec from flags (or
// from --config, whose values flags then override) and runs it.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratiolab/lab.hpp"

namespace {

using ratiolab::StudySpec;

struct Flags {
  std::string config;
  std::string cls;
  std::vector<long> n;
  long reps = -1;
  long long seed = -1;
  std::string weight;
  int workers = -1;
  std::vector<std::string> params;
  std::string csv, json, plot;
  bool quiet = false;
  // rates
  std::string normalizer = "none";
  double band = 1.5;
  std::string statistic;
  // verify
  std::vector<int> only;
};

void add_common(CLI::App* sc, Flags& f, bool with_class = true) {
  sc->add_option("--config", f.config, "study config file");
  if (with_class) sc->add_option("--class", f.cls, "class, family or problem");
  sc->add_option("-n,--n", f.n, "n grid")->delimiter(',');
  sc->add_option("--reps", f.reps, "replicates per n");
  sc->add_option("--seed", f.seed, "master seed");
  sc->add_option("--weight", f.weight, "normalizing weight");
  sc->add_option("--workers", f.workers, "worker threads (0: default)");
  sc->add_option("-p,--param", f.params, "study parameter key=value (repeatable)");
  sc->add_option("--csv", f.csv, "write the table as CSV");
  sc->add_option("--json", f.json, "write the JSON report");
  sc->add_option("--plot", f.plot, "write median vs n as gnuplot data");
  sc->add_flag("-q,--quiet", f.quiet, "only print notes");
}

StudySpec build_spec(const Flags& f, const std::string& kind, const std::string& cls_default,
                     const std::vector<long>& n_default) {
  StudySpec s;
  if (!f.config.empty()) {
    s = ratiolab::load_config(f.config);
  } else {
    s.kind = kind;
    s.cls = cls_default;
    s.n_grid = n_default;
  }
  if (!f.cls.empty()) s.cls = f.cls;
  if (!f.n.empty()) s.n_grid = f.n;
  if (f.reps >= 0) s.reps = f.reps;
  if (f.seed >= 0) s.seed = static_cast<std::uint64_t>(f.seed);
  if (!f.weight.empty()) s.weight = f.weight;
  if (f.workers >= 0) s.workers = f.workers;
  for (const auto& kv : f.params) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ratiolab::ConfigError("parameter '" + kv + "' is not key=value");
    s.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (!f.csv.empty()) s.csv = f.csv;
  if (!f.json.empty()) s.json = f.json;
  if (!f.plot.empty()) s.plot = f.plot;
  return s;
}

void print_table(const ratiolab::StudyResult& r) {
  // summary rows and single values; per-replicate rows are left to the CSV
  std::set<std::pair<long, std::string>> summarized;
  for (const auto& row : r.rows)
    if (row.rep == "mean") summarized.insert({row.n, row.statistic});
  std::printf("%-10s %-22s %-10s %s\n", "n", "statistic", "row", "value");
  for (const auto& row : r.rows) {
    bool rep_index = !row.rep.empty() && std::isdigit(static_cast<unsigned char>(row.rep[0]));
    if (rep_index && summarized.count({row.n, row.statistic})) continue;
    std::printf("%-10ld %-22s %-10s %s\n", row.n, row.statistic.c_str(), row.rep.c_str(),
                ratiolab::format_double(row.value).c_str());
  }
}

std::function<double(double)> normalizer(const std::string& name) {
  static const std::map<std::string, std::function<double(double)>> m{
      {"none", [](double) { return 1.0; }},
      {"sqrt-n", [](double n) { return std::sqrt(n); }},
      {"sqrt-n-over-loglog", [](double n) { return std::sqrt(n / std::log(std::log(n))); }},
      {"sqrt-n-over-log", [](double n) { return std::sqrt(n / std::log(n)); }},
      {"sqrt-log", [](double n) { return std::sqrt(std::log(n)); }},
      {"n", [](double n) { return n; }},
      {"isotonic", [](double n) { return n / (std::pow(std::log(n), 1.5) * std::log(std::log(n))); }},
  };
  auto it = m.find(name);
  if (it == m.end()) throw ratiolab::ConfigError("unknown normalizer '" + name + "'");
  return it->second;
}

int finish(const ratiolab::StudyResult& r, const Flags& f) {
  if (!f.quiet) print_table(r);
  for (const auto& note : r.notes) std::printf("# %s\n", note.c_str());
  ratiolab::write_outputs(r);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ratiolab: ratio-type empirical process toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* bound = app.add_subcommand("bound", "tabulate a bound over n (ratio-t2 | expectation | excess)");
  add_common(bound, f);
  auto* expect = app.add_subcommand("expect", "explicit expectation bound for the intervals class");
  add_common(expect, f, false);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ratio-type suprema over an n grid");
  add_common(simulate, f);
  auto* rates = app.add_subcommand("rates", "simulate, then fit log-log slope and check stability");
  add_common(rates, f);
  rates->add_option("--normalizer", f.normalizer,
                    "none | sqrt-n | sqrt-n-over-loglog | sqrt-n-over-log | sqrt-log | n | isotonic");
  rates->add_option("--band", f.band, "stability band");
  rates->add_option("--statistic", f.statistic, "statistic column (default: the study's first)");
  auto* margin = app.add_subcommand("margin", "margin sup-M experiment (identity | powers | two-point)");
  add_common(margin, f);
  auto* erm = app.add_subcommand("erm", "empirical risk minimization study (ls | isotonic | classification)");
  add_common(erm, f);
  auto* oracle = app.add_subcommand("oracle", "exact law of the sup over a small finite dictionary");
  add_common(oracle, f, false);
  auto* verify = app.add_subcommand("verify", "run the acceptance suite; exit 0 iff all criteria pass");
  verify->add_option("--reps", f.reps, "replicates per n");
  verify->add_option("--seed", f.seed, "master seed");
  verify->add_option("--workers", f.workers, "worker threads");
  verify->add_option("--only", f.only, "criteria to run")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      ratiolab::AcceptanceOptions opt;
      if (f.reps > 0) opt.reps = f.reps;
      if (f.seed >= 0) opt.seed = static_cast<std::uint64_t>(f.seed);
      if (f.workers > 0) opt.workers = f.workers;
      opt.only = f.only;
      opt.on_result = [](const ratiolab::CriterionResult& c) {
        std::cout << ratiolab::format_criterion(c) << std::endl;
      };
      auto res = ratiolab::run_acceptance(opt);
      bool ok = true;
      for (const auto& c : res) ok = ok && c.pass;
      return ok ? 0 : 1;
    }
    StudySpec s;
    if (bound->parsed()) s = build_spec(f, "bound-table", "ratio-t2", {1000, 10000, 100000});
    else if (expect->parsed()) s = build_spec(f, "bound-table", "expectation", {10000, 100000});
    else if (simulate->parsed() || rates->parsed())
      s = build_spec(f, "ratio-scaling", "HalfLine1D", {1000, 10000, 100000});
    else if (margin->parsed()) s = build_spec(f, "margin", "identity", {1000, 10000});
    else if (erm->parsed()) s = build_spec(f, "erm", "ls", {1000, 10000});
    else s = build_spec(f, "oracle", "FiniteDict", {2});

    auto r = ratiolab::run_study(s);
    int rc = finish(r, f);
    if (rates->parsed()) {
      std::string stat = f.statistic;
      if (stat.empty())
        for (const auto& row : r.rows)
          if (row.rep == "median") {
            stat = row.statistic;
            break;
          }
      std::vector<double> ns;
      auto med = ratiolab::column(r, stat, "median", &ns);
      if (ns.size() >= 3) {
        auto fit = ratiolab::fit_slope(ns, med);
        std::printf("slope of median %s: %.6g (intercept %.6g, rms %.3g, %d points)\n", stat.c_str(), fit.slope,
                    fit.intercept, fit.rms, fit.points);
      } else {
        std::printf("slope needs at least 3 n values\n");
      }
      auto st = ratiolab::stability_check(ns, med, normalizer(f.normalizer), f.band);
      std::printf("stability (%s, band %g): max/min %.4g -> %s\n", f.normalizer.c_str(), f.band, st.ratio,
                  st.pass ? "pass" : "fail");
      rc = st.pass ? 0 : 1;
    }
    return r.checks_ok ? rc : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
