// drgf: feasibility checks, odd-girth bounds and classification runs for
// distance-regular graph intersection arrays.
//
// Exit status: 0 success / pass, 1 semantic failure, 2 usage error.

#include "drgf/drgf.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace drgf;
using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

IntersectionArray read_array(const std::string& text) {
  if (text.find('"') != std::string::npos) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad JSON array: ") + e.what());
    }
    return array_from_json(j);
  }
  return parse_array(text);
}

std::string short_real(const HighReal& x, int digits = 15) { return x.str(digits, std::ios_base::fmtflags{}); }

std::string fixed(double x, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << x;
  return os.str();
}

// ---- check ---------------------------------------------------------------

int cmd_check(const std::string& text, bool as_json, const std::string& ratio_text) {
  const auto arr = read_array(text);
  ReportOptions opts;
  if (!ratio_text.empty()) opts.theta_ratio = parse_rational(ratio_text);
  const auto report = full_report<HighReal>(arr, opts);
  if (as_json) {
    std::cout << report.to_json().dump(2) << '\n';
  } else {
    std::cout << "array " << report.array << '\n';
    for (const auto& c : report.checks) {
      std::cout << "  " << std::left << std::setw(28) << c.name << std::setw(16) << to_string(c.verdict);
      if (c.name != "spectrum") std::cout << c.witness.dump();
      std::cout << '\n';
      if (c.name == "spectrum") {
        for (const auto& e : c.witness["eigenvalues"]) {
          std::cout << "      theta " << e["theta"].get<std::string>() << "  m " << e["multiplicity"].get<std::string>()
                    << '\n';
        }
      }
    }
    std::cout << "overall " << to_string(report.overall()) << '\n';
  }
  return report.overall() == Verdict::pass ? kOk : kFail;
}

// ---- enumerate -----------------------------------------------------------

struct EnumerateFlags {
  std::string spec_file;
  int diameter = 0;
  int k_min = 5;
  int k_max = 0;
  std::string a_pattern;
  std::vector<int> c2{1, 2};
  std::string theta_ratio;
  std::vector<std::string> checks;
  std::string csv;
  std::string json_out;
  unsigned threads = 0;
};

SearchSpec spec_from_flags(const EnumerateFlags& f) {
  if (!f.spec_file.empty()) {
    std::ifstream in(f.spec_file);
    if (!in) throw UsageError("cannot read spec file " + f.spec_file);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("bad spec file: ") + e.what());
    }
    return SearchSpec::from_json(j);
  }
  if (f.diameter == 0) throw UsageError("enumerate needs --spec FILE or --diameter");
  SearchSpec s = (f.diameter == 4 || f.diameter == 5) ? default_search_spec(f.diameter) : SearchSpec{};
  s.diameter = f.diameter;
  s.k_min = f.k_min;
  if (f.k_max) s.k_max = f.k_max;
  if (!f.a_pattern.empty()) s.a_pattern = parse_a_pattern(f.a_pattern);
  s.c2_set = f.c2;
  s.theta_ratio = f.theta_ratio.empty() ? Rational(-(s.diameter - 1), s.diameter) : parse_rational(f.theta_ratio);
  if (!f.checks.empty()) s.checks = f.checks;
  s.validate();
  return s;
}

std::string theta_min_text(const IntersectionArray& arr) {
  const auto spec = spectrum<HighReal>(arr);
  const auto& e = spec.min();
  return e.exact_theta ? e.exact_theta->str() : to_decimal_string(e.theta);
}

void print_stats_table(std::ostream& out, const PruningStats& st) {
  out << std::left << std::setw(24) << "check" << std::right << std::setw(12) << "killed" << '\n';
  for (std::size_t i = 0; i < st.killed.size(); ++i) {
    out << std::left << std::setw(24) << search_check_names()[i] << std::right << std::setw(12) << st.killed[i] << '\n';
  }
  out << std::left << std::setw(24) << "generated" << std::right << std::setw(12) << st.generated << '\n';
  out << std::left << std::setw(24) << "survived" << std::right << std::setw(12) << st.survived << '\n';
  out << std::left << std::setw(24) << "inconclusive" << std::right << std::setw(12) << st.inconclusive << '\n';
}

int cmd_enumerate(const EnumerateFlags& f) {
  const auto spec = spec_from_flags(f);
  const auto res = enumerate(spec, f.threads);
  for (const auto& arr : res.survivors) std::cout << arr.str() << '\n';
  std::cout << '\n';
  print_stats_table(std::cout, res.stats);
  for (const auto& d : res.discrepancies) std::cerr << "discrepancy: " << d << '\n';

  if (!f.csv.empty()) {
    std::ofstream out(f.csv);
    if (!out) throw UsageError("cannot write " + f.csv);
    out << "array,diameter,k,v,theta_min\n";
    for (const auto& arr : res.survivors) {
      out << '"' << arr.str() << "\"," << arr.diameter() << ',' << arr.valency() << ','
          << to_decimal_string(derive_parameters(arr).v) << ',' << theta_min_text(arr) << '\n';
    }
  }
  if (!f.json_out.empty()) {
    std::ofstream out(f.json_out);
    if (!out) throw UsageError("cannot write " + f.json_out);
    json j;
    j["spec"] = spec.to_json();
    json rows = json::array();
    for (const auto& arr : res.survivors) {
      json r = arr.to_json();
      r["array"] = arr.str();
      r["v"] = to_decimal_string(derive_parameters(arr).v);
      r["theta_min"] = theta_min_text(arr);
      rows.push_back(std::move(r));
    }
    j["survivors"] = std::move(rows);
    j["statistics"] = res.stats.to_json();
    json inc = json::array();
    for (const auto& arr : res.inconclusive) inc.push_back(arr.str());
    j["inconclusive"] = std::move(inc);
    j["discrepancies"] = res.discrepancies;
    out << j.dump(2) << '\n';
  }
  return res.discrepancies.empty() && res.inconclusive.empty() ? kOk : kFail;
}

// ---- theorem2 ------------------------------------------------------------

void print_stage(std::ostream& out, const Stage& st) {
  out << "[" << st.name << "] " << st.summary << '\n';
  if (st.data.contains("constants")) {
    for (const auto& c : st.data["constants"]) {
      out << "    " << std::left << std::setw(12) << c["name"].get<std::string>() << std::right
          << fixed(c["rounded"].get<double>(), 4) << "  (computed " << fixed(c["value"].get<double>(), 6) << ")\n";
    }
    out << "    cap k <= " << st.data["cap"].get<int>() << " (anchor " << st.data["anchor"].get<int>() << ")\n";
  }
  if (st.data.contains("chain")) {
    const auto& chain = st.data["chain"];
    for (const auto& c : chain["constants"]) {
      out << "    " << std::left << std::setw(12) << c["name"].get<std::string>() << std::right
          << fixed(c["rounded"].get<double>(), 4) << "  (computed " << fixed(c["value"].get<double>(), 6) << ")\n";
    }
    out << "    chain cap k <= " << chain["cap"].get<int>() << " (anchor " << chain["anchor"].get<int>() << ")\n";
  }
  for (const auto& key : {"closed_form_k_max", "scan", "scan_c2_1", "scan_c2_2"}) {
    if (!st.data.contains(key)) continue;
    const auto& v = st.data[key];
    if (v.is_object()) {
      out << "    " << key << ": max feasible k "
          << (v["max_feasible_k"].is_null() ? std::string("none") : std::to_string(v["max_feasible_k"].get<int>()))
          << ", k -> infinity " << (v["limit_negative"].get<bool>() ? "excluded" : "NOT excluded") << '\n';
    } else {
      out << "    " << key << ": " << v.dump() << '\n';
    }
  }
  if (st.data.contains("enumeration")) {
    const auto& spec = st.data["enumeration"]["spec"];
    out << "    enumerated k in [" << spec["k_min"].get<int>() << ", " << spec["k_max"].get<int>() << "], a pattern "
        << spec["a_pattern"].get<std::string>() << ", c2 in " << spec["c2"].dump() << '\n';
  } else if (st.data.contains("spec")) {
    const auto& spec = st.data["spec"];
    out << "    enumerated k in [" << spec["k_min"].get<int>() << ", " << spec["k_max"].get<int>() << "], a pattern "
        << spec["a_pattern"].get<std::string>() << ", c2 in " << spec["c2"].dump() << '\n';
  }
  if (st.stats) {
    out << "    generated " << st.stats->generated << ", killed " << st.stats->total_killed() << ", survived "
        << st.stats->survived << ", inconclusive " << st.stats->inconclusive << '\n';
  }
  if (st.data.contains("catalog_excluded")) {
    out << "    excluded by catalog fact (D = 5, k = 5, c2 = 2, a3 != 0): " << st.data["catalog_excluded"].get<int>()
        << '\n';
  }
  for (const auto& a : st.arrays) out << "    " << a.str() << '\n';
}

int cmd_theorem2(int diameter, const std::vector<std::string>& disabled, bool as_json, unsigned threads) {
  if (diameter != 4 && diameter != 5) throw UsageError("--diameter must be 4 or 5");
  for (const auto& name : disabled) {
    const auto& all = search_check_names();
    if (std::find(all.begin(), all.end(), name) == all.end()) throw UsageError("unknown check '" + name + "'");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto result = reproduce_theorem2(diameter, {disabled, threads});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (as_json) {
    json j;
    j["diameter"] = diameter;
    json stages = json::array();
    for (const auto& st : result.stages) {
      json s;
      s["name"] = st.name;
      s["summary"] = st.summary;
      s["data"] = st.data;
      json arrays = json::array();
      for (const auto& a : st.arrays) arrays.push_back(a.str());
      s["arrays"] = std::move(arrays);
      if (st.stats) s["statistics"] = st.stats->to_json();
      stages.push_back(std::move(s));
    }
    j["stages"] = std::move(stages);
    json cls = json::array();
    for (const auto& e : result.classification) cls.push_back({{"name", e.name}, {"array", e.array.str()}});
    j["classification"] = std::move(cls);
    j["discrepancies"] = result.discrepancies;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "classification, D = " << diameter << ", theta_min <= -" << diameter - 1 << "k/" << diameter
              << "\n\n";
    for (const auto& st : result.stages) print_stage(std::cout, st);
    std::cout << "\nresult (" << result.classification.size() << " arrays):\n";
    for (const auto& e : result.classification) std::cout << "  " << e.array.str() << "  " << e.name << '\n';
  }
  for (const auto& d : result.discrepancies) std::cerr << "discrepancy: " << d << '\n';
  std::cerr << "elapsed " << std::fixed << std::setprecision(2) << seconds << " s\n";
  return result.ok() ? kOk : kFail;
}

// ---- bound ---------------------------------------------------------------

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("--table expects gmin..gmax");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
    const int lo = std::stoi(a, &u1), hi = std::stoi(b, &u2);
    if (u1 != a.size() || u2 != b.size() || lo > hi) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::exception&) {
    throw UsageError("--table expects gmin..gmax, got '" + text + "'");
  }
}

int cmd_bound_table(const std::string& range, ScheduleMode mode) {
  const auto [lo, hi] = parse_range(range);
  require_odd_girth(lo % 2 ? lo : lo + 1, 5);
  if (mode == ScheduleMode::sharp_g5 && hi > 5) throw UsageError("sharp-g5 mode applies to g = 5 only");
  std::cout << "g,t,zeta_star,epsilon1,theta_bound,polygon_upper\n";
  for (int g = lo % 2 ? lo : lo + 1; g <= hi; g += 2) {
    const auto bp = epsilon1<HighReal>(g, mode);
    std::cout << g << ',' << bp.t << ',' << short_real(bp.zeta) << ',' << short_real(*bp.epsilon1) << ','
              << short_real(*bp.root) << ',' << short_real(polygon_epsilon_upper<HighReal>(g)) << '\n';
  }
  return kOk;
}

int cmd_bound(int girth, const std::string& zeta_text, const std::string& mode_text, const std::string& table) {
  ScheduleMode mode;
  try {
    mode = parse_schedule_mode(mode_text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!table.empty()) return cmd_bound_table(table, mode);
  if (girth == 0) throw UsageError("bound needs --girth or --table");
  try {
    require_odd_girth(girth, 5);
    if (mode == ScheduleMode::sharp_g5 && girth != 5) throw std::invalid_argument("sharp-g5 mode applies to g = 5 only");
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto bp = epsilon1<HighReal>(girth, mode);
  const HighReal zeta = zeta_text.empty() ? bp.zeta : HighReal(to_real<HighReal>(parse_rational(zeta_text)));
  if (!(zeta > 0 && zeta <= HighReal(0.5))) throw UsageError("--zeta must lie in (0, 1/2]");
  const auto at = bound_parameters<HighReal>(girth, zeta, mode);
  const auto root = theta_bound_given_zeta<HighReal>(girth, zeta, mode);

  auto row = [](const std::string& k, const std::string& v) { std::cout << std::left << std::setw(16) << k << v << '\n'; };
  row("girth", std::to_string(girth));
  row("t", std::to_string(bp.t));
  row("mode", std::string(to_string(mode)));
  row("zeta*", short_real(bp.zeta));
  row("epsilon1", short_real(*bp.epsilon1));
  row("zeta", short_real(zeta));
  row("M1", short_real(at.M1));
  row("M2", short_real(at.M2));
  row("eta", short_real(at.eta));
  if (root) {
    row("theta/k root", short_real(*root));
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << floor_decimals(to_double(*root), 2);
    row("theta/k >=", os.str());
  } else {
    row("theta/k root", "none in (-1, 0)");
  }
  row("polygon bound", short_real(polygon_epsilon_upper<HighReal>(girth)));
  row("diameter bound", diameter_bound<HighReal>(bp.t, zeta).str());
  std::cout << "note: epsilon1 covers c_t <= zeta k; the remaining cases need finite sets that are not computable here\n";
  return root ? kOk : kFail;
}

// ---- verify --------------------------------------------------------------

int cmd_verify(const std::string& name, const std::string& edges_file) {
  std::optional<oracle::Graph> graph;
  try {
    graph = oracle::build(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!edges_file.empty()) {
    std::ofstream out(edges_file);
    if (!out) throw UsageError("cannot write " + edges_file);
    graph->write_edge_list(out);
  }
  const auto cmp = oracle::compare_with_array(*graph);
  std::cout << "graph " << name << " (" << graph->order() << " vertices, " << graph->edge_count() << " edges)\n";
  if (!cmp.regularity.ok()) {
    const auto& v = *cmp.regularity.violation;
    std::cout << "not distance-regular: x = " << v.x << ", y = " << v.y << ", i = " << v.distance << ": " << v.what
              << '\n';
    return kFail;
  }
  std::cout << "array " << cmp.regularity.array->str() << '\n';
  const auto og = oracle::odd_girth_bruteforce(*graph);
  std::cout << "odd girth " << (og ? std::to_string(*og) : std::string("bipartite")) << '\n';
  std::cout << std::left << std::setw(20) << "quantity" << std::setw(8) << "agree" << "oracle | derived\n";
  for (const auto& r : cmp.rows) {
    std::cout << std::left << std::setw(20) << r.quantity << std::setw(8) << (r.agree ? "yes" : "NO") << r.oracle
              << " | " << r.derived << '\n';
  }
  return cmp.all_agree() ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance-regular graph intersection array toolkit"};
  app.require_subcommand(1);

  std::string array_text, ratio_text;
  bool check_json = false;
  auto* check = app.add_subcommand("check", "Run every feasibility check on an intersection array");
  check->add_option("array", array_text, "{b0,...;c1,...} or {\"b\":[...],\"c\":[...]}")->required();
  check->add_flag("--json", check_json, "JSON report");
  check->add_option("--theta-ratio", ratio_text, "also require theta_min <= r k (r as p/q or decimal)");

  EnumerateFlags ef;
  auto* en = app.add_subcommand("enumerate", "Pruned enumeration of intersection arrays");
  auto* spec_opt = en->add_option("--spec", ef.spec_file, "search spec JSON file");
  en->add_option("--diameter", ef.diameter, "D")->excludes(spec_opt);
  en->add_option("--k-min", ef.k_min, "smallest valency")->excludes(spec_opt);
  en->add_option("--k-max", ef.k_max, "largest valency")->excludes(spec_opt);
  en->add_option("--a-pattern", ef.a_pattern, "one of z/n/f per a_1..a_D")->excludes(spec_opt);
  en->add_option("--c2", ef.c2, "allowed c_2 values")->delimiter(',')->excludes(spec_opt);
  en->add_option("--theta-ratio", ef.theta_ratio, "keep theta_min <= r k")->excludes(spec_opt);
  en->add_option("--checks", ef.checks, "enabled checks")->delimiter(',')->excludes(spec_opt);
  en->add_option("--csv", ef.csv, "write survivors as CSV");
  en->add_option("--json", ef.json_out, "write results as JSON");
  en->add_option("--threads", ef.threads, "worker threads (0 = hardware)");

  int t2_diameter = 0;
  bool t2_json = false;
  unsigned t2_threads = 0;
  std::vector<std::string> t2_disabled;
  auto* t2 = app.add_subcommand("theorem2", "Classification for D = 4 or 5 with a per-stage audit trail");
  t2->add_option("--diameter", t2_diameter, "4 or 5")->required();
  t2->add_flag("--json", t2_json, "JSON output");
  t2->add_option("--threads", t2_threads, "worker threads (0 = hardware)");
  t2->add_option("--disable-check", t2_disabled, "drop a check from every enumeration")->group("");

  int girth = 0;
  std::string zeta_text, mode_text = "paper-general", table;
  auto* bound = app.add_subcommand("bound", "Odd-girth eigenvalue bound");
  bound->add_option("--girth", girth, "odd girth g >= 5");
  bound->add_option("--zeta", zeta_text, "c_t / k bound (default zeta*)");
  bound->add_option("--mode", mode_text, "paper-general or sharp-g5");
  bound->add_option("--table", table, "CSV table over gmin..gmax");

  std::string graph_name, edges_file;
  auto* verify = app.add_subcommand("verify", "Brute-force check of a named graph against its array");
  verify->add_option("graph", graph_name, "cycle:n, odd_graph:m, folded_cube:n, path:n or coxeter")->required();
  verify->add_option("--edges", edges_file, "write the edge list to FILE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    apply_precision_from_env();
    if (*check) return cmd_check(array_text, check_json, ratio_text);
    if (*en) return cmd_enumerate(ef);
    if (*t2) return cmd_theorem2(t2_diameter, t2_disabled, t2_json, t2_threads);
    if (*bound) return cmd_bound(girth, zeta_text, mode_text, table);
    if (*verify) return cmd_verify(graph_name, edges_file);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
