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


#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "lab_internal.hpp"
#include "ratiolab/expect.hpp"
#include "ratiolab/lab.hpp"
#include "ratiolab/learn.hpp"
#include "ratiolab/peel.hpp"
#include "ratiolab/sim.hpp"

namespace ratiolab {

namespace detail {

double radius_rule(const std::string& rule, double n) {
  if (rule == "inv-sqrt-n") return 1.0 / std::sqrt(n);
  if (rule == "inv-sqrt-nlogn") return 1.0 / std::sqrt(n * std::log(n));
  if (rule == "logn-over-sqrt-n") return std::log(n) / std::sqrt(n);
  if (rule == "clt") {
    double ll = std::log(std::log(n));
    return std::log(ll) / (std::sqrt(n) * ll);
  }
  double v = 0.0;
  auto [p, ec] = std::from_chars(rule.data(), rule.data() + rule.size(), v);
  if (ec != std::errc() || p != rule.data() + rule.size() || v < 0.0)
    throw ConfigError("unknown radius rule '" + rule + "'");
  return v;
}

std::pair<long, long> coord_range(double lo, double hi) {
  auto sig = [](long j) {
    double jd = static_cast<double>(j);
    return 1.0 / (jd * log_e(jd));
  };
  long first = 1;
  while (sig(first) > hi) ++first;
  long last = first - 1;
  while (sig(last + 1) > lo) ++last;
  return {first, last};
}

NormWeight parse_weight(const std::string& w, const NormWeight& fallback) {
  if (w.empty() || w == "default") return fallback;
  if (w == "unit") return NormWeight::power(0.0);
  std::vector<double> args;
  std::string head = w;
  auto colon = w.find(':');
  if (colon != std::string::npos) {
    head = w.substr(0, colon);
    std::string rest = w.substr(colon + 1);
    std::istringstream is(rest);
    std::string tok;
    while (std::getline(is, tok, ':')) {
      double v = 0.0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size()) throw ConfigError("bad weight argument '" + tok + "'");
      args.push_back(v);
    }
  }
  if (head == "power" && args.size() == 1) return NormWeight::power(args[0]);
  if (head == "power_loglog" && args.size() == 2) return NormWeight::power_loglog(args[0], args[1]);
  throw ConfigError("unknown weight '" + w + "' (default | unit | power:a | power_loglog:a:b)");
}

CltWeight clt_weight(double beta) {
  std::ostringstream name;
  name << "t (log log 1/t)^" << beta;
  return {name.str(), [beta](double t) { return t * std::pow(loglog_e(1.0 / t), beta); }};
}

std::vector<std::vector<std::array<double, 3>>> clt_psi_estimates(const std::vector<double>& ns,
                                                                  const std::function<double(double)>& r_n,
                                                                  double delta, double q, long reps,
                                                                  std::uint64_t seed, int workers) {
  std::vector<std::vector<std::array<double, 3>>> out;
  for (double n : ns) {
    auto g = build_grid(r_n(n), delta, q);
    auto est = estimate_psi_beta(FunctionClass::half_line(), g, NormWeight::power(1.0), static_cast<long>(n),
                                 reps, point_seed(seed, static_cast<long>(n)), workers);
    std::vector<std::array<double, 3>> rows;
    for (int j = 1; j <= g.l; ++j) {
      const auto& s = est.slices[static_cast<size_t>(j - 1)];
      rows.push_back({g.hi(j), s.mean, s.stderr_});
    }
    out.push_back(rows);
  }
  return out;
}

std::uint64_t point_seed(std::uint64_t master, long n) { return stream_key(master, static_cast<std::uint64_t>(n)); }

void add_value(StudyResult& out, long n, const std::string& statistic, const std::string& rep, double value,
               std::uint64_t seed) {
  out.rows.push_back({out.spec.kind, out.spec.cls, n, rep, statistic, value, seed});
}

void add_replicates(StudyResult& out, long n, const std::string& statistic, const std::vector<double>& values,
                    std::uint64_t seed) {
  for (size_t i = 0; i < values.size(); ++i)
    add_value(out, n, statistic, std::to_string(i), values[i], stream_key(seed, i));
  auto s = summarize(values, seed);
  add_value(out, n, statistic, "mean", s.mean, seed);
  add_value(out, n, statistic, "stderr", s.stderr_, seed);
  add_value(out, n, statistic, "median", s.median, seed);
  add_value(out, n, statistic, "q90", s.q90, seed);
  add_value(out, n, statistic, "q95", s.q95, seed);
}

std::function<double(double)> ls_truth() {
  return [](double x) { return 0.5 + 0.15 * cosine_basis(1, x) + 0.1 * cosine_basis(2, x); };
}

std::function<double(double)> isotonic_truth(int m) {
  return [m](double x) {
    int k = std::min(m, static_cast<int>(std::floor(x * (m + 1))));
    return 0.2 + 0.6 * k / m;
  };
}

}  // namespace detail

namespace {

using namespace detail;

struct Params {
  const StudySpec& s;
  std::string str(const std::string& key, const std::string& dflt) const {
    auto it = s.params.find(key);
    return it == s.params.end() ? dflt : it->second;
  }
  double num(const std::string& key, double dflt) const {
    auto it = s.params.find(key);
    if (it == s.params.end()) return dflt;
    const auto& v = it->second;
    double x = 0.0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
      throw ConfigError("parameter " + key + " = '" + v + "' is not a number");
    return x;
  }
  std::vector<double> list(const std::string& key, const std::vector<double>& dflt, char sep = ',') const {
    auto it = s.params.find(key);
    if (it == s.params.end()) return dflt;
    std::vector<double> out;
    std::istringstream is(it->second);
    std::string tok;
    while (std::getline(is, tok, sep)) {
      auto a = tok.find_first_not_of(" \t"), b = tok.find_last_not_of(" \t");
      if (a == std::string::npos) continue;
      tok = tok.substr(a, b - a + 1);
      double x = 0.0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (ec != std::errc() || p != tok.data() + tok.size())
        throw ConfigError("parameter " + key + ": '" + tok + "' is not a number");
      out.push_back(x);
    }
    return out;
  }
};

int workers_of(const StudySpec& s) { return s.workers > 0 ? s.workers : default_workers(); }

void ratio_scaling(StudyResult& out) {
  const auto& s = out.spec;
  Params P{s};
  const int workers = workers_of(s);
  std::string rule;
  double delta = 0.0;
  NormWeight phi;
  if (s.cls == "HalfLine1D") {
    rule = P.str("r", "inv-sqrt-n");
    delta = P.num("delta", std::sqrt(0.5));
    phi = parse_weight(s.weight, NormWeight::power(1.0));
  } else if (s.cls == "BoxCdf") {
    rule = P.str("r", "inv-sqrt-nlogn");
    delta = P.num("delta", 0.5);
    phi = parse_weight(s.weight, NormWeight::power(1.0));
  } else if (s.cls == "Intervals1D") {
    rule = P.str("r", "0");
    delta = P.num("delta", 0.25);
    phi = parse_weight(s.weight, NormWeight::power(0.0));
  } else if (s.cls == "CoordC0") {
    rule = P.str("r", "logn-over-sqrt-n");
    delta = P.num("delta", 0.5);
    phi = parse_weight(s.weight, NormWeight::power(2.0));
  } else {
    rule = "0";
    delta = P.num("delta", 0.25);
  }
  const int d = static_cast<int>(P.num("d", 2));
  const int M = static_cast<int>(P.num("M", 8));
  if (s.cls == "BoxCdf" && (d < 1 || d > 3)) throw ConfigError("BoxCdf needs d in {1, 2, 3}");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  for (long n : s.n_grid) (void)radius_rule(rule, static_cast<double>(n));

  out.constants.push_back({"delta", delta});
  out.notes.push_back("weight " + phi.name() + ", radius rule " + rule);
  for (long n : s.n_grid) {
    const double nd = static_cast<double>(n);
    const double r = radius_rule(rule, nd);
    const std::uint64_t seed = point_seed(s.seed, n);
    ReplicateFn fn;
    if (s.cls == "HalfLine1D") {
      fn = [=](long, std::uint64_t key) {
        auto b = draw_sample(Law::uniform1d(), n, key);
        return sup_halfline(b, r * r, delta * delta, phi).value;
      };
    } else if (s.cls == "BoxCdf") {
      fn = [=](long, std::uint64_t key) {
        auto b = draw_sample(Law::uniform_box(d), n, key);
        return sup_box(b, r, delta, phi, M).value;
      };
    } else if (s.cls == "Intervals1D") {
      fn = [=](long, std::uint64_t key) {
        auto b = draw_sample(Law::uniform1d(), n, key);
        return sup_intervals(b, r, delta, phi).value;
      };
    } else if (s.cls == "CoordC0") {
      auto [ja, jb] = coord_range(r, delta);
      if (ja > jb) {
        out.notes.push_back("n=" + std::to_string(n) + ": no coordinate in the range");
        continue;
      }
      fn = [=, ja = ja, jb = jb](long, std::uint64_t key) {
        auto b = draw_sample(Law::coord_c0(jb), n, key);
        return sup_c0(b, ja, jb, phi).value;
      };
    } else {
      fn = [=](long, std::uint64_t key) {
        auto b = draw_sample(Law::uniform1d(), n, key);
        return sup_monotone(b, delta).value;
      };
    }
    add_replicates(out, n, "sup", run_replicates(s.reps, seed, workers, fn), seed);
    out.constants.push_back({"r(n=" + std::to_string(n) + ")", r});
  }
}

void clt_premise(StudyResult& out) {
  const auto& s = out.spec;
  Params P{s};
  double beta = 1.0;
  if (s.weight != "default" && s.weight != "loglog") {
    if (s.weight.rfind("loglog:", 0) != 0) throw ConfigError("clt-premise weight is loglog or loglog:<power>");
    std::string arg = s.weight.substr(7);
    auto [p, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), beta);
    if (ec != std::errc() || p != arg.data() + arg.size()) throw ConfigError("bad loglog power '" + arg + "'");
  }
  const double q = P.num("q", 2.0);
  const double est_delta = P.num("est_delta", 0.5);
  auto deltas = P.list("deltas", {0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001});
  const std::string rule = P.str("r", "clt");
  if (!(q > 1.0 && q <= 2.0)) throw ConfigError("q must lie in (1, 2]");
  std::vector<double> ns(s.n_grid.begin(), s.n_grid.end());
  auto r_n = [rule](double n) { return radius_rule(rule, n); };
  for (double n : ns)
    if (!(r_n(n) > 0.0 && r_n(n) < est_delta)) throw ConfigError("radius rule gives r_n outside (0, est_delta)");

  CltPremiseInput in;
  in.weight = clt_weight(beta);
  in.r_n = r_n;
  in.q_n = [q](double) { return q; };
  in.n_grid = ns;
  in.delta_grid = deltas;
  in.psi_estimates = clt_psi_estimates(ns, r_n, est_delta, q, s.reps, s.seed, workers_of(s));
  for (size_t i = 0; i < ns.size(); ++i) {
    long n = s.n_grid[i];
    auto seed = point_seed(s.seed, n);
    for (size_t j = 0; j < in.psi_estimates[i].size(); ++j) {
      const auto& e = in.psi_estimates[i][j];
      std::string tag = "slice" + std::to_string(j + 1);
      add_value(out, n, "rho", tag, e[0], seed);
      add_value(out, n, "psi_hat", tag, e[1], seed);
      add_value(out, n, "psi_stderr", tag, e[2], seed);
    }
  }
  auto rep = clt_premise_check(in);
  const char* names[3] = {"premise_local_modulus", "premise_radius_term", "premise_local_mean"};
  for (size_t c = 0; c < rep.conditions.size(); ++c) {
    const auto& t = rep.conditions[c];
    for (size_t k = 0; k < t.values.size(); ++k) {
      long n = c == 1 ? s.n_grid[k] : 0;
      std::string tag = c == 1 ? "value" : "delta=" + format_double(t.x[k]);
      add_value(out, n, names[c], tag, t.values[k], s.seed);
    }
    out.notes.push_back(std::string(names[c]) + " (" + t.name + "): " + t.verdict);
  }
  out.notes.push_back("dominance: " + std::string(rep.dominance_ok ? "ok, " : "violated, ") + rep.dominance_detail);
  out.constants.push_back({"doubling_constant", rep.doubling_constant});
  out.constants.push_back({"q", q});
  out.checks_ok = rep.pass;
}

void margin(StudyResult& out) {
  const auto& s = out.spec;
  Params P{s};
  ScoreFamily fam;
  if (s.cls == "identity") fam = ScoreFamily::identity();
  else if (s.cls == "powers") fam = ScoreFamily::powers(static_cast<int>(P.num("members", 8)));
  else fam = ScoreFamily::two_point(P.num("p", 0.4), P.num("lo", 0.0), P.num("hi", 1.0));
  MarginExperimentConfig cfg;
  cfg.setup.D = P.num("D", 4.0);
  cfg.setup.alpha = P.num("alpha", 1.0);
  cfg.q = P.num("q", 2.0);
  cfg.K = P.num("K", 1.0);
  cfg.subfamily = static_cast<int>(P.num("subfamily", 32));
  cfg.sigma = P.num("sigma", 0.05);
  cfg.C = P.num("C", 1.0);
  const std::string lambda = P.str("lambda", "log-n");
  if (!(cfg.setup.alpha > 0.0 && cfg.setup.alpha < 2.0)) throw ConfigError("alpha must lie in (0, 2)");
  if (lambda != "log-n") (void)P.num("lambda", 0.0);
  cfg.reps = s.reps;
  cfg.workers = workers_of(s);
  for (long n : s.n_grid) {
    cfg.n = n;
    cfg.lambda_n = lambda == "log-n" ? std::log(static_cast<double>(n)) : P.num("lambda", 1.0);
    cfg.seed = point_seed(s.seed, n);
    cfg.setup.lambda = cfg.lambda_n;
    auto r = margin_experiment(fam, cfg);
    add_replicates(out, n, "sup_M", r.sup_m.values, cfg.seed);
    add_value(out, n, "B", "value", r.B, cfg.seed);
    add_value(out, n, "t_n", "value", r.t_n, cfg.seed);
    add_value(out, n, "companion_c", "value", r.c_assembled, cfg.seed);
    add_value(out, n, "lower_violation_freq", "value", r.lower_violation_freq, cfg.seed);
    add_value(out, n, "upper_violation_freq", "value", r.upper_violation_freq, cfg.seed);
    add_value(out, n, "companion_prob_bound", "value", r.prob_bound, cfg.seed);
    out.notes.push_back("n=" + std::to_string(n) + ": " + r.subfamily);
  }
}

void erm(StudyResult& out) {
  const auto& s = out.spec;
  Params P{s};
  const int workers = workers_of(s);
  if (s.cls == "ls") {
    const int d = static_cast<int>(P.num("d", 4));
    const double noise = P.num("noise", 0.1);
    if (d < 3) throw ConfigError("ls needs d >= 3 (the truth uses the first three basis functions)");
    auto law = Law::regression(ls_truth(), noise);
    for (long n : s.n_grid) {
      auto seed = point_seed(s.seed, n);
      auto v = run_replicates(s.reps, seed, workers, [=](long, std::uint64_t key) {
        return fit_finite_dim_ls(draw_sample(law, n, key), d).excess;
      });
      add_replicates(out, n, "excess", v, seed);
    }
    out.constants.push_back({"d", static_cast<double>(d)});
    out.constants.push_back({"noise", noise});
  } else if (s.cls == "isotonic") {
    const int m = static_cast<int>(P.num("m", 3));
    const double noise = P.num("noise", 0.15);
    if (m < 1) throw ConfigError("isotonic needs m >= 1");
    auto law = Law::regression(isotonic_truth(m), noise);
    for (long n : s.n_grid) {
      auto seed = point_seed(s.seed, n);
      auto v = run_replicates(s.reps, seed, workers, [=](long, std::uint64_t key) {
        return fit_isotonic(draw_sample(law, n, key)).excess;
      });
      add_replicates(out, n, "excess", v, seed);
    }
    out.constants.push_back({"m", static_cast<double>(m)});
    out.constants.push_back({"noise", noise});
  } else {
    const std::string set = P.str("set", "intervals");
    SetClass cls = SetClass::Intervals;
    try {
      cls = set_class_from_string(set);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    if (cls == SetClass::Boxes) throw ConfigError("the classification study draws one-dimensional samples; use HalfLines or Intervals");
    const double h = P.num("h", 0.1), c = P.num("c_margin", 2.0), sv = P.num("s", 3.0), q = P.num("q", 2.0);
    const Mode mode = mode_from_string(P.str("mode", "explicit"));
    if (!(h > 0.0 && h <= 0.5)) throw ConfigError("h must lie in (0, 1/2]");
    std::vector<double> bayes = cls == SetClass::HalfLines ? std::vector<double>{0.5} : std::vector<double>{0.3, 0.7};
    auto eta = [cls, h, bayes](double x) {
      bool in = cls == SetClass::HalfLines ? x <= bayes[0] : (x >= bayes[0] && x <= bayes[1]);
      return in ? 0.5 + h : 0.5 - h;
    };
    auto prob = ErmProblem::margin_classification(cls, h, bayes, c);
    auto law = Law::classification(eta);
    for (long n : s.n_grid) {
      auto seed = point_seed(s.seed, n);
      auto cert = excess_risk_certificate(prob, n, sv, q, mode);
      auto v = run_replicates(s.reps, seed, workers, [=](long, std::uint64_t key) {
        return fit_margin_classifier(draw_sample(law, n, key), cls).excess;
      });
      add_replicates(out, n, "excess", v, seed);
      const double bound = cert.feasible ? cert.r_star : kInf;
      long covered = std::count_if(v.begin(), v.end(), [&](double e) { return e <= bound; });
      add_value(out, n, "certificate", "value", bound, seed);
      add_value(out, n, "certificate_prob", "value", cert.prob, seed);
      add_value(out, n, "covered_fraction", "value", static_cast<double>(covered) / static_cast<double>(v.size()),
                seed);
      out.notes.push_back("n=" + std::to_string(n) + ": certificate regime " + cert.regime +
                          (cert.note.empty() ? "" : ", " + cert.note));
      for (const auto& k : cert.constants) out.constants.push_back(k);
    }
  }
}

void bound_table(StudyResult& out) {
  const auto& s = out.spec;
  Params P{s};
  if (s.cls == "ratio-t2") {
    const double delta = P.num("delta", 0.5), q = P.num("q", 2.0), beta = P.num("beta", 1.0), sv = P.num("s", 1.0);
    const std::string rule = P.str("r", "inv-sqrt-n");
    const Mode mode = mode_from_string(P.str("mode", "shape"));
    for (long n : s.n_grid) {
      double r = radius_rule(rule, static_cast<double>(n));
      auto b = ratio_bound_t2(n, r, delta, q, beta, sv, 1.0, mode);
      add_value(out, n, "threshold", "value", b.upper.threshold, s.seed);
      add_value(out, n, "prob", "value", b.upper.prob, s.seed);
      if (b.has_lower) add_value(out, n, "lower_threshold", "value", b.lower.threshold, s.seed);
    }
  } else if (s.cls == "expectation") {
    const double sigma = P.num("sigma", 0.25);
    const Mode mode = mode_from_string(P.str("mode", "explicit"));
    auto env = slice_envelope_norm(FunctionClass::intervals(), {0.0, sigma});
    for (long n : s.n_grid) {
      ExpectationQuery qy;
      qy.n = n;
      qy.sigma = sigma;
      qy.env_norm = env.norm;
      qy.model = intervals_entropy_model();
      qy.mode = mode;
      auto u = expectation_upper(qy);
      add_value(out, n, "upper", "value", u.value, s.seed);
      out.notes.push_back("n=" + std::to_string(n) + ": regime " + u.regime);
    }
  } else {
    const std::string problem = P.str("problem", "ls");
    const double sv = P.num("s", 3.0), q = P.num("q", 2.0);
    const Mode mode = mode_from_string(P.str("mode", "shape"));
    ErmProblem p;
    if (problem == "ls") p = ErmProblem::finite_dim_ls(static_cast<int>(P.num("d", 4)));
    else if (problem == "isotonic") p = ErmProblem::monotone_ls(static_cast<int>(P.num("m", 3)));
    else if (problem == "classification")
      p = ErmProblem::margin_classification(SetClass::Intervals, P.num("h", 0.1), {0.3, 0.7}, P.num("c_margin", 2.0));
    else if (problem == "constant") p = ErmProblem::constant_model(P.num("Delta0", 1.0));
    else throw ConfigError("unknown problem '" + problem + "' (ls | isotonic | classification | constant)");
    for (long n : s.n_grid) {
      auto c = excess_risk_certificate(p, n, sv, q, mode);
      add_value(out, n, "r_star", "value", c.feasible ? c.r_star : kInf, s.seed);
      add_value(out, n, "prob", "value", c.prob, s.seed);
    }
  }
}

void oracle(StudyResult& out) {
  const auto& s = out.spec;
  Params P{s};
  auto p = P.list("p", {0.5, 0.5});
  FiniteDict dict;
  dict.p = p;
  auto it = s.params.find("funcs");
  if (it == s.params.end()) {
    for (size_t k = 0; k < p.size(); ++k) {
      std::vector<double> f(p.size(), 0.0);
      f[k] = 1.0;
      dict.funcs.push_back(f);
    }
  } else {
    std::istringstream is(it->second);
    std::string tok;
    while (std::getline(is, tok, ';')) {
      StudySpec tmp;
      tmp.params["f"] = tok;
      dict.funcs.push_back(Params{tmp}.list("f", {}));
      if (dict.funcs.back().size() != p.size()) throw ConfigError("each function needs one value per point");
    }
  }
  FunctionClass cls;
  try {
    cls = FunctionClass::finite_dict(dict);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  std::vector<double> w(dict.funcs.size(), 1.0);
  std::vector<char> active(dict.funcs.size(), 1);
  auto stat = dict_weighted_sup(cls, w, active);
  for (long n : s.n_grid) {
    if (n > 1000) throw ConfigError("oracle n is limited to 1000");
    auto law = exact_small_oracle(p, static_cast<int>(n), stat);
    for (size_t k = 0; k < law.values.size(); ++k) {
      add_value(out, n, "support", std::to_string(k), law.values[k], s.seed);
      add_value(out, n, "prob", std::to_string(k), law.probs[k], s.seed);
    }
    add_value(out, n, "expectation", "value", law.expectation(), s.seed);
  }
}

void verify(StudyResult& out) {
  AcceptanceOptions opt;
  opt.reps = out.spec.reps;
  opt.seed = out.spec.seed;
  opt.workers = workers_of(out.spec);
  auto res = run_acceptance(opt);
  for (const auto& c : res) {
    add_value(out, 0, "criterion" + std::to_string(c.id), "pass", c.pass ? 1.0 : 0.0, out.spec.seed);
    out.notes.push_back(format_criterion(c));
    out.checks_ok = out.checks_ok && c.pass;
  }
}

}  // namespace

StudyResult run_study(const StudySpec& s) {
  validate(s);
  StudyResult out;
  out.spec = s;
  if (s.kind == "ratio-scaling") ratio_scaling(out);
  else if (s.kind == "clt-premise") clt_premise(out);
  else if (s.kind == "margin") margin(out);
  else if (s.kind == "erm") erm(out);
  else if (s.kind == "bound-table") bound_table(out);
  else if (s.kind == "oracle") oracle(out);
  else verify(out);
  out.notes.push_back("quantiles: type-7");
  return out;
}

}  // namespace ratiolab
