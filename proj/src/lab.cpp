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


#include "ratiolab/lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#ifndef RATIOLAB_BUILD_ID
#define RATIOLAB_BUILD_ID "unknown"
#endif

namespace ratiolab {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(where + ": '" + s + "' is not a number");
  return v;
}

long parse_count(const std::string& s, const std::string& where) {
  double v = parse_number(s, where);
  if (v != std::floor(v) || std::fabs(v) > 9e15) throw ConfigError(where + ": '" + s + "' is not an integer");
  return static_cast<long>(v);
}

std::uint64_t parse_seed(const std::string& s, const std::string& where) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError(where + ": bad seed '" + s + "'");
  return v;
}

const std::vector<std::string>& kinds() {
  static const std::vector<std::string> k{"ratio-scaling", "clt-premise", "margin", "erm",
                                          "bound-table", "verify", "oracle"};
  return k;
}

const std::vector<std::string>& classes_for(const std::string& kind) {
  static const std::map<std::string, std::vector<std::string>> m{
      {"ratio-scaling", {"HalfLine1D", "BoxCdf", "Intervals1D", "CoordC0", "MonotoneUnit"}},
      {"clt-premise", {"HalfLine1D"}},
      {"margin", {"identity", "powers", "two-point"}},
      {"erm", {"ls", "isotonic", "classification"}},
      {"bound-table", {"ratio-t2", "expectation", "excess"}},
      {"verify", {"", "all"}},
      {"oracle", {"FiniteDict"}},
  };
  return m.at(kind);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double_field(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::nan("");
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("bad number '" + s + "' in table");
  return v;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double json_double(const nlohmann::json& j) {
  if (j.is_string()) return parse_double_field(j.get<std::string>());
  return j.get<double>();
}

}  // namespace

// ----------------------------------------------------------------- config

StudySpec parse_config(const std::string& text) {
  StudySpec s;
  bool have_kind = false;
  std::string section;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "study" && section != "params" && section != "output")
        throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (section.empty()) throw ConfigError(where + ": '" + key + "' outside a section");
    if (section == "params") {
      s.params[key] = val;
    } else if (section == "output") {
      if (key == "csv") s.csv = val;
      else if (key == "json") s.json = val;
      else if (key == "plot") s.plot = val;
      else throw ConfigError(where + ": unknown output key '" + key + "'");
    } else if (key == "kind") {
      s.kind = val;
      have_kind = !val.empty();
    } else if (key == "class") {
      s.cls = val;
    } else if (key == "n") {
      s.n_grid.clear();
      for (const auto& item : split(val, ',')) s.n_grid.push_back(parse_count(item, where));
    } else if (key == "reps") {
      s.reps = parse_count(val, where);
    } else if (key == "seed") {
      s.seed = parse_seed(val, where);
    } else if (key == "weight") {
      s.weight = val;
    } else if (key == "workers") {
      s.workers = static_cast<int>(parse_count(val, where));
    } else {
      throw ConfigError(where + ": unknown study key '" + key + "'");
    }
  }
  if (!have_kind) throw ConfigError("no study specified");
  return s;
}

StudySpec load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const StudySpec& s) {
  std::ostringstream os;
  os << "[study]\n";
  os << "kind = " << s.kind << "\n";
  os << "class = " << s.cls << "\n";
  os << "n = ";
  for (size_t i = 0; i < s.n_grid.size(); ++i) os << (i ? ", " : "") << s.n_grid[i];
  os << "\nreps = " << s.reps << "\n";
  os << "seed = " << s.seed << "\n";
  os << "weight = " << s.weight << "\n";
  os << "workers = " << s.workers << "\n";
  if (!s.params.empty()) {
    os << "\n[params]\n";
    for (const auto& [k, v] : s.params) os << k << " = " << v << "\n";
  }
  os << "\n[output]\n";
  if (!s.csv.empty()) os << "csv = " << s.csv << "\n";
  if (!s.json.empty()) os << "json = " << s.json << "\n";
  if (!s.plot.empty()) os << "plot = " << s.plot << "\n";
  return os.str();
}

void validate(const StudySpec& s) {
  if (s.kind.empty()) throw ConfigError("no study specified");
  if (std::find(kinds().begin(), kinds().end(), s.kind) == kinds().end())
    throw ConfigError("unknown study kind '" + s.kind + "'");
  const auto& ok = classes_for(s.kind);
  if (std::find(ok.begin(), ok.end(), s.cls) == ok.end()) {
    std::string list;
    for (const auto& c : ok)
      if (!c.empty()) list += (list.empty() ? "" : ", ") + c;
    throw ConfigError("class '" + s.cls + "' is not supported by " + s.kind + " (supported: " + list + ")");
  }
  if (s.reps < 1) throw ConfigError("reps must be >= 1");
  if (s.workers < 0) throw ConfigError("workers must be >= 0");
  if (s.kind != "verify" && s.n_grid.empty()) throw ConfigError("empty n grid");
  for (size_t i = 0; i < s.n_grid.size(); ++i) {
    if (s.n_grid[i] < 1) throw ConfigError("n grid values must be >= 1");
    if (i > 0 && s.n_grid[i] <= s.n_grid[i - 1]) throw ConfigError("n grid must be strictly increasing");
  }
}

// ------------------------------------------------------------ diagnostics

std::vector<double> column(const StudyResult& r, const std::string& statistic, const std::string& rep,
                           std::vector<double>* ns) {
  std::vector<double> out;
  if (ns) ns->clear();
  for (const auto& row : r.rows)
    if (row.statistic == statistic && row.rep == rep) {
      out.push_back(row.value);
      if (ns) ns->push_back(static_cast<double>(row.n));
    }
  return out;
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "fit_slope needs paired columns");
  require(x.size() >= 3, "fit_slope needs at least 3 points");
  const size_t m = x.size();
  std::vector<double> lx(m), ly(m);
  for (size_t i = 0; i < m; ++i) {
    require(x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i]),
            "fit_slope needs positive finite values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  require(sxx > 0.0, "fit_slope needs distinct x values");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (size_t i = 0; i < m; ++i) {
    double e = ly[i] - f.intercept - f.slope * lx[i];
    ss += e * e;
  }
  f.rms = std::sqrt(ss / static_cast<double>(m));
  f.points = static_cast<int>(m);
  return f;
}

SlopeFit fit_slope(const StudyResult& r, const std::string& statistic, const std::string& rep) {
  std::vector<double> ns;
  auto y = column(r, statistic, rep, &ns);
  return fit_slope(ns, y);
}

Stability stability_check(const std::vector<double>& n, const std::vector<double>& q,
                          const std::function<double(double)>& normalizer, double band) {
  Stability s;
  s.band = band;
  if (n.size() != q.size() || n.empty()) return s;
  double lo = kInf, hi = -kInf;
  for (size_t i = 0; i < n.size(); ++i) {
    double v = normalizer(n[i]) * q[i];
    s.normalized.push_back(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  s.ratio = lo > 0.0 ? hi / lo : kInf;
  s.pass = std::isfinite(s.ratio) && s.ratio < band;
  return s;
}

// --------------------------------------------------------------------- io

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string emit_csv(const StudyResult& r) {
  std::ostringstream os;
  os << "study,class,n,rep,statistic,value,seed\n";
  for (const auto& row : r.rows)
    os << csv_field(row.study) << ',' << csv_field(row.cls) << ',' << row.n << ',' << csv_field(row.rep) << ','
       << csv_field(row.statistic) << ',' << format_double(row.value) << ',' << row.seed << '\n';
  return os.str();
}

std::vector<Row> parse_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<Row> rows;
  if (!std::getline(is, line) || trim(line) != "study,class,n,rep,statistic,value,seed")
    throw ConfigError("table header missing");
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto f = csv_split(line);
    if (f.size() != 7) throw ConfigError("line " + std::to_string(line_no) + ": expected 7 fields");
    Row r;
    r.study = f[0];
    r.cls = f[1];
    r.n = parse_count(f[2], "line " + std::to_string(line_no));
    r.rep = f[3];
    r.statistic = f[4];
    r.value = parse_double_field(f[5]);
    r.seed = parse_seed(f[6], "line " + std::to_string(line_no));
    rows.push_back(r);
  }
  return rows;
}

std::string build_id() { return RATIOLAB_BUILD_ID; }

std::string emit_json(const StudyResult& r) {
  nlohmann::ordered_json j;
  const auto& s = r.spec;
  j["spec"] = {{"kind", s.kind},     {"class", s.cls},       {"n", s.n_grid},
               {"reps", s.reps},     {"seed", s.seed},       {"weight", s.weight},
               {"workers", s.workers}, {"params", s.params}, {"csv", s.csv},
               {"json", s.json},     {"plot", s.plot}};
  j["build"] = build_id();
  j["quantile"] = "type-7";
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"study", row.study}, {"class", row.cls}, {"n", row.n}, {"rep", row.rep},
                    {"statistic", row.statistic}, {"value", json_number(row.value)}, {"seed", row.seed}});
  j["rows"] = rows;
  auto cons = nlohmann::ordered_json::array();
  for (const auto& c : r.constants) cons.push_back({{"name", c.name}, {"value", json_number(c.value)}});
  j["constants_used"] = cons;
  j["notes"] = r.notes;
  j["checks_ok"] = r.checks_ok;
  return j.dump(2);
}

StudySpec spec_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  const auto& e = j.at("spec");
  StudySpec s;
  s.kind = e.at("kind").get<std::string>();
  s.cls = e.at("class").get<std::string>();
  s.n_grid = e.at("n").get<std::vector<long>>();
  s.reps = e.at("reps").get<long>();
  s.seed = e.at("seed").get<std::uint64_t>();
  s.weight = e.at("weight").get<std::string>();
  s.workers = e.at("workers").get<int>();
  s.params = e.at("params").get<std::map<std::string, std::string>>();
  s.csv = e.at("csv").get<std::string>();
  s.json = e.at("json").get<std::string>();
  s.plot = e.at("plot").get<std::string>();
  return s;
}

std::vector<Row> rows_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  std::vector<Row> rows;
  for (const auto& e : j.at("rows")) {
    Row r;
    r.study = e.at("study").get<std::string>();
    r.cls = e.at("class").get<std::string>();
    r.n = e.at("n").get<long>();
    r.rep = e.at("rep").get<std::string>();
    r.statistic = e.at("statistic").get<std::string>();
    r.value = json_double(e.at("value"));
    r.seed = e.at("seed").get<std::uint64_t>();
    rows.push_back(r);
  }
  return rows;
}

std::string emit_gnuplot(const std::vector<double>& x, const std::vector<double>& y, const std::string& title) {
  require(x.size() == y.size(), "plot columns differ in length");
  std::ostringstream os;
  os << "# " << title << "\n";
  for (size_t i = 0; i < x.size(); ++i) os << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
  return os.str();
}

void write_outputs(const StudyResult& r) {
  auto put = [](const std::string& path, const std::string& body) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << body;
  };
  if (!r.spec.csv.empty()) put(r.spec.csv, emit_csv(r));
  if (!r.spec.json.empty()) put(r.spec.json, emit_json(r));
  if (!r.spec.plot.empty()) {
    // first statistic's medians against n
    std::string stat;
    for (const auto& row : r.rows)
      if (row.rep == "median") {
        stat = row.statistic;
        break;
      }
    std::vector<double> ns;
    auto y = column(r, stat, "median", &ns);
    put(r.spec.plot, emit_gnuplot(ns, y, r.spec.kind + " " + r.spec.cls + " median " + stat));
  }
}

}  // namespace ratiolab
