#pragma once

#include "drgf/core.hpp"
#include "drgf/feasibility.hpp"
#include "drgf/numeric.hpp"
#include "drgf/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace drgf {

// Constraint on one a_i during generation.
enum class APattern : char { zero = 'z', nonzero = 'n', free = 'f' };

inline std::vector<APattern> parse_a_pattern(std::string_view text) {
  std::vector<APattern> out;
  for (char ch : text) {
    if (ch != 'z' && ch != 'n' && ch != 'f') {
      throw std::invalid_argument("a_pattern characters must be z, n or f, got '" + std::string(text) + "'");
    }
    out.push_back(static_cast<APattern>(ch));
  }
  return out;
}

inline std::string to_string(const std::vector<APattern>& pattern) {
  std::string out;
  for (auto p : pattern) out.push_back(static_cast<char>(p));
  return out;
}

// Checks applied by the enumerator, in application order.
inline const std::vector<std::string>& search_check_names() {
  static const std::vector<std::string> kNames{
      "c_monotone", "b_monotone",   "a1_zero",          "c2_bound",
      "k_integral", "theta_ratio",  "multiplicity_integral", "sum_rules",
      "odd_girth_inequality", "trace_square"};
  return kNames;
}

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// What to enumerate. a_pattern lists a_1..a_D; a_D = k - c_D.
struct SearchSpec {
  int diameter = 4;
  int k_min = 5;
  int k_max = 35;
  std::vector<APattern> a_pattern;
  std::vector<int> c2_set{1, 2};
  Rational theta_ratio{-3, 4};  // keep arrays with theta_min <= ratio * k
  std::vector<std::string> checks = search_check_names();

  void validate() const {
    if (diameter < 1) throw SpecError("diameter must be >= 1");
    if (k_min < 2) throw SpecError("k_min must be >= 2");
    if (k_max < k_min) throw SpecError("k_max must be >= k_min");
    if (static_cast<int>(a_pattern.size()) != diameter) {
      throw SpecError("a_pattern must have D = " + std::to_string(diameter) + " entries (a_1..a_D)");
    }
    if (diameter >= 2 && c2_set.empty()) throw SpecError("c2 set is empty");
    for (int c2 : c2_set) {
      if (c2 < 1) throw SpecError("c2 values must be positive");
    }
    if (theta_ratio < -1 || theta_ratio > 1) throw SpecError("theta_ratio must lie in [-1, 1]");
    for (const auto& name : checks) {
      const auto& all = search_check_names();
      if (std::find(all.begin(), all.end(), name) == all.end()) throw SpecError("unknown check '" + name + "'");
    }
  }

  bool enabled(std::string_view name) const { return std::find(checks.begin(), checks.end(), name) != checks.end(); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["diameter"] = diameter;
    j["k_min"] = k_min;
    j["k_max"] = k_max;
    j["a_pattern"] = to_string(a_pattern);
    j["c2"] = c2_set;
    j["theta_ratio"] = to_decimal_string(theta_ratio);
    j["checks"] = checks;
    return j;
  }

  static SearchSpec from_json(const nlohmann::json& j) {
    SearchSpec s;
    try {
      s.diameter = j.at("diameter").get<int>();
      s.k_min = j.value("k_min", 5);
      s.k_max = j.at("k_max").get<int>();
      s.a_pattern = parse_a_pattern(j.at("a_pattern").get<std::string>());
      if (j.contains("c2")) s.c2_set = j.at("c2").get<std::vector<int>>();
      if (j.contains("theta_ratio")) {
        const auto& r = j.at("theta_ratio");
        s.theta_ratio = r.is_string() ? parse_rational(r.get<std::string>()) : rational_from_double(r.get<double>());
      } else {
        s.theta_ratio = Rational(-(s.diameter - 1), std::max(1, s.diameter));
      }
      if (j.contains("checks")) s.checks = j.at("checks").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw SpecError(std::string("search spec: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw SpecError(std::string("search spec: ") + e.what());
    }
    s.validate();
    return s;
  }
};

// The main enumeration of the D = 4 / D = 5 classification.
inline SearchSpec default_search_spec(int diameter) {
  SearchSpec s;
  s.diameter = diameter;
  s.k_min = 5;
  if (diameter == 4) {
    s.k_max = 35;
  } else if (diameter == 5) {
    s.k_max = 71;
  } else {
    throw SpecError("default specs exist for D = 4 and D = 5 only");
  }
  s.a_pattern.assign(static_cast<std::size_t>(diameter - 1), APattern::zero);
  s.a_pattern.push_back(APattern::nonzero);
  s.theta_ratio = Rational(-(diameter - 1), diameter);
  return s;
}

struct PruningStats {
  std::uint64_t generated = 0;
  std::vector<std::uint64_t> killed = std::vector<std::uint64_t>(search_check_names().size(), 0);
  std::uint64_t survived = 0;
  std::uint64_t inconclusive = 0;

  void merge(const PruningStats& other) {
    generated += other.generated;
    for (std::size_t i = 0; i < killed.size(); ++i) killed[i] += other.killed[i];
    survived += other.survived;
    inconclusive += other.inconclusive;
  }

  std::uint64_t total_killed() const {
    std::uint64_t s = 0;
    for (auto k : killed) s += k;
    return s;
  }

  bool consistent() const { return generated == total_killed() + survived + inconclusive; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["generated"] = generated;
    nlohmann::ordered_json k;
    for (std::size_t i = 0; i < killed.size(); ++i) k[search_check_names()[i]] = killed[i];
    j["killed"] = std::move(k);
    j["survived"] = survived;
    j["inconclusive"] = inconclusive;
    return j;
  }
};

struct ClassificationResult {
  std::vector<IntersectionArray> survivors;  // sorted
  std::vector<FeasibilityReport> reports;    // one per survivor
  std::vector<IntersectionArray> inconclusive;
  PruningStats stats;
  std::vector<std::string> discrepancies;
};

/// Calls fn for every array with 1 = c_1 <= ... <= c_D <= k, nonincreasing b
/// and a_i matching the pattern, valency k. Generation order is
/// lexicographic in (c, a).
inline void for_each_array(const SearchSpec& spec, int k, const std::function<void(const IntersectionArray&)>& fn) {
  const int d = spec.diameter;
  std::vector<int> b(static_cast<std::size_t>(d)), c(static_cast<std::size_t>(d));
  b[0] = k;
  auto pattern_allows = [&](int i, int a) {
    switch (spec.a_pattern[static_cast<std::size_t>(i - 1)]) {
      case APattern::zero: return a == 0;
      case APattern::nonzero: return a != 0;
      case APattern::free: return true;
    }
    return false;
  };
  std::function<void(int)> rec = [&](int i) {
    const int c_prev = i == 1 ? 1 : c[static_cast<std::size_t>(i - 2)];
    if (i == d) {
      for (int cd = std::max(c_prev, i == 1 ? 1 : c_prev); cd <= k; ++cd) {
        if (d == 1 && cd != 1) break;
        if (!pattern_allows(d, k - cd)) continue;
        c[static_cast<std::size_t>(d - 1)] = cd;
        fn(IntersectionArray(b, c));
      }
      return;
    }
    const int c_lo = i == 1 ? 1 : c_prev;
    const int c_hi = i == 1 ? 1 : k - 1;
    for (int ci = c_lo; ci <= c_hi; ++ci) {
      if (i == 2 && std::find(spec.c2_set.begin(), spec.c2_set.end(), ci) == spec.c2_set.end()) continue;
      c[static_cast<std::size_t>(i - 1)] = ci;
      const int b_prev = b[static_cast<std::size_t>(i - 1)];
      for (int ai = 0; ai <= k - ci - 1; ++ai) {
        if (!pattern_allows(i, ai)) continue;
        const int bi = k - ci - ai;
        if (bi > b_prev) continue;
        b[static_cast<std::size_t>(i)] = bi;
        rec(i + 1);
      }
    }
  };
  rec(1);
}

struct CandidateOutcome {
  int killed_by = -1;  // index into search_check_names(), -1 if not killed
  bool inconclusive = false;
};

namespace detail {

inline int check_index(std::string_view name) {
  const auto& names = search_check_names();
  return static_cast<int>(std::find(names.begin(), names.end(), name) - names.begin());
}

// Multiplicity integrality with an escalation band around the tolerance.
template <class Real>
Verdict multiplicity_verdict(const SpectrumEntry<Real>& e) {
  if (e.exact_multiplicity) {
    return denominator(*e.exact_multiplicity) == 1 && *e.exact_multiplicity >= 1 ? Verdict::pass : Verdict::fail;
  }
  using std::abs;
  using std::round;
  const Real m = e.multiplicity;
  const Real r = round(m);
  const Real scale = m > 1 ? m : Real(1);
  const Real dist = abs(m - r) / scale;
  if (r < 1) return Verdict::fail;
  if (dist < Real(kMultiplicityTolerance / 10)) return Verdict::pass;
  if (dist < Real(kMultiplicityTolerance * 10)) return Verdict::inconclusive;
  return Verdict::fail;
}

}  // namespace detail

/**
 * Applies the enumeration checks to one candidate, cheapest first. The a1
 * and c2 checks use the search hypothesis theta_min <= ratio*k, so no
 * eigenvalue work is needed before the k_i integrality test.
 */
template <class Real>
CandidateOutcome evaluate_candidate(const IntersectionArray& arr, const SearchSpec& spec) {
  using detail::check_index;
  const int k = arr.valency();
  const Rational limit = spec.theta_ratio * k;
  auto kill = [](std::string_view name) { return CandidateOutcome{check_index(name), false}; };
  auto escalate = [] { return CandidateOutcome{-1, true}; };

  if (spec.enabled("c_monotone") || spec.enabled("b_monotone")) {
    const auto mono = check_monotonicity(arr);
    if (spec.enabled("c_monotone") && mono[0].verdict == Verdict::fail) return kill("c_monotone");
    if (spec.enabled("b_monotone") && mono[1].verdict == Verdict::fail) return kill("b_monotone");
  }
  if (spec.enabled("a1_zero") && spec.theta_ratio * 2 < -1 && arr.a(1) != 0) return kill("a1_zero");
  if (spec.enabled("c2_bound") && arr.diameter() >= 2 && arr.a(1) == 0) {
    // The bound (2k - 2x)/(4 - 3x - k) increases with x, so its value at
    // x = ratio*k caps it for every admissible theta_min.
    if (limit < Rational(12 - 5 * k, 7)) {
      const Rational bound = (Rational(2 * k) - 2 * limit) / (Rational(4 - k) - 3 * limit);
      if (arr.c(2) > bound) return kill("c2_bound");
    }
  }
  const auto params = derive_parameters(arr);
  if (spec.enabled("k_integral") && !params.k_integral) return kill("k_integral");

  const bool needs_spectrum = spec.enabled("theta_ratio") || spec.enabled("multiplicity_integral") ||
                              spec.enabled("sum_rules") || spec.enabled("odd_girth_inequality") ||
                              spec.enabled("trace_square");
  if (!needs_spectrum) return {};
  if (spec.enabled("theta_ratio")) {
    const Real theta_min = smallest_eigenvalue<Real>(arr);
    const Verdict v = classify_nonnegative<Real>(to_real<Real>(limit) - theta_min);
    if (v == Verdict::fail) return kill("theta_ratio");
  }
  std::optional<Spectrum<Real>> spec_values;
  try {
    spec_values = spectrum<Real>(arr, params);
  } catch (const NumericalError&) {
    return escalate();
  }
  bool inconclusive = false;
  const auto& min_entry = spec_values->min();
  if (spec.enabled("theta_ratio")) {
    const Verdict v = check_theta_ratio(arr, min_entry, spec.theta_ratio).verdict;
    if (v == Verdict::fail) return kill("theta_ratio");
    inconclusive |= v == Verdict::inconclusive;
  }
  if (spec.enabled("multiplicity_integral")) {
    for (const auto& e : spec_values->entries) {
      const Verdict v = detail::multiplicity_verdict(e);
      if (v == Verdict::fail) return kill("multiplicity_integral");
      inconclusive |= v == Verdict::inconclusive;
    }
  }
  if (spec.enabled("sum_rules") && check_sum_rules(arr, params, *spec_values).verdict == Verdict::fail) {
    return kill("sum_rules");
  }
  if (spec.enabled("odd_girth_inequality")) {
    StandardSequence<Real> seq{min_entry.theta, {}};
    if (min_entry.exact_theta) {
      for (const auto& u : standard_sequence(arr, Rational(*min_entry.exact_theta)).u) seq.u.push_back(to_real<Real>(u));
    } else {
      seq = standard_sequence(arr, min_entry.theta);
    }
    for (const auto& e : check_odd_girth_inequality(arr, seq)) {
      if (e.verdict == Verdict::fail) return kill("odd_girth_inequality");
      inconclusive |= e.verdict == Verdict::inconclusive;
    }
  }
  if (spec.enabled("trace_square")) {
    const Verdict v = check_trace_square(arr, min_entry.theta).verdict;
    if (v == Verdict::fail) return kill("trace_square");
    inconclusive |= v == Verdict::inconclusive;
  }
  return {-1, inconclusive};
}

/**
 * Exhaustive pruned enumeration. Work is partitioned by valency across
 * threads (double precision); inconclusive candidates are re-evaluated at the
 * working precision and every survivor is re-verified with full_report.
 * Output is sorted by (k, c, b).
 */
inline ClassificationResult enumerate(const SearchSpec& spec, unsigned threads = 0) {
  spec.validate();
  struct Bucket {
    std::vector<IntersectionArray> survivors;
    std::vector<IntersectionArray> escalate;
    PruningStats stats;
  };
  const int span = spec.k_max - spec.k_min + 1;
  std::vector<Bucket> buckets(static_cast<std::size_t>(span));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int idx = next++; idx < span; idx = next++) {
      auto& bucket = buckets[static_cast<std::size_t>(idx)];
      for_each_array(spec, spec.k_min + idx, [&](const IntersectionArray& arr) {
        ++bucket.stats.generated;
        const auto outcome = evaluate_candidate<double>(arr, spec);
        if (outcome.killed_by >= 0) {
          ++bucket.stats.killed[static_cast<std::size_t>(outcome.killed_by)];
        } else if (outcome.inconclusive) {
          bucket.escalate.push_back(arr);
        } else {
          bucket.survivors.push_back(arr);
        }
      });
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(span));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  ClassificationResult result;
  for (auto& bucket : buckets) {
    result.stats.merge(bucket.stats);
    result.survivors.insert(result.survivors.end(), bucket.survivors.begin(), bucket.survivors.end());
    for (const auto& arr : bucket.escalate) {
      const auto outcome = evaluate_candidate<HighReal>(arr, spec);
      if (outcome.killed_by >= 0) {
        ++result.stats.killed[static_cast<std::size_t>(outcome.killed_by)];
      } else if (outcome.inconclusive) {
        ++result.stats.inconclusive;
        result.inconclusive.push_back(arr);
      } else {
        result.survivors.push_back(arr);
      }
    }
  }
  std::sort(result.survivors.begin(), result.survivors.end());
  result.stats.survived = result.survivors.size();
  ReportOptions opts{spec.theta_ratio};
  for (const auto& arr : result.survivors) {
    auto report = full_report<HighReal>(arr, opts);
    if (report.overall() != Verdict::pass) {
      result.discrepancies.push_back("survivor " + arr.str() + " does not pass the full report");
    }
    result.reports.push_back(std::move(report));
  }
  return result;
}

/// One named constant of a valency-cap derivation: the computed value and
/// the 4-decimal value handed to the next step, rounded in the safe
/// direction.
struct ChainConstant {
  std::string name;
  double value = 0;
  double rounded = 0;
};

struct ValencyCap {
  int anchor = 0;  // the argument assumes k >= anchor
  int cap = -1;    // resulting bound on k; -1 when the chain does not close
  bool closed = false;
  double multiplicity_bound = 0;
  std::vector<ChainConstant> constants;
  std::vector<std::string> notes;

  const ChainConstant* find(std::string_view name) const {
    for (const auto& c : constants) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["anchor"] = anchor;
    j["cap"] = cap;
    j["closed"] = closed;
    j["multiplicity_bound"] = multiplicity_bound;
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (const auto& c : constants) cs.push_back({{"name", c.name}, {"value", c.value}, {"rounded", c.rounded}});
    j["constants"] = std::move(cs);
    j["notes"] = notes;
    return j;
  }
};

enum class CapBranch { main, a4_nonzero };

namespace detail {

inline constexpr int kChainDecimals = 4;

// Given k <= m <= B and the assumption k >= anchor: every such graph has
// k <= floor(B); the cap is anchor - 1 when floor(B) < anchor.
inline void close_chain(ValencyCap& cap, double bound) {
  cap.multiplicity_bound = bound;
  const auto fb = static_cast<int>(std::floor(bound));
  if (fb <= cap.anchor) {
    cap.closed = true;
    cap.cap = std::max(cap.anchor - 1, fb);
  } else {
    cap.closed = false;
    cap.notes.push_back("multiplicity bound " + std::to_string(bound) + " exceeds the anchor valency " +
                        std::to_string(cap.anchor) + "; chain does not close");
  }
}

// Minimum of implied_last_c_ratio over k >= k_min and theta/k in [-1, ratio].
inline double min_implied_last_c(int k_min, double ratio, const TraceCap& tc) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> ks;
  for (int k = k_min; k < k_min + 64; ++k) ks.push_back(k);
  for (double k = k_min + 64; k < 1e7; k *= 1.5) ks.push_back(k);
  ks.push_back(std::numeric_limits<double>::infinity());
  for (double k : ks) {
    for (int g = 0; g < 1024; ++g) {
      const double y = -1.0 + (ratio + 1.0) * g / 1023.0;
      best = std::min(best, implied_last_c_ratio(k, y, tc));
    }
  }
  return best;
}

inline AbsUBounds chain_abs_u(int anchor, double ratio, int depth, int c2_max, std::optional<double> c3_per_k) {
  AbsUQuery q;
  q.k_min = anchor;
  q.ratio_lo = -1.0;
  q.ratio_hi = ratio;
  q.depth = depth;
  q.a.assign(static_cast<std::size_t>(depth), 0);
  q.c_upper.assign(static_cast<std::size_t>(std::max(depth, 3)), CUpperBound{});
  q.c_upper[2] = CUpperBound{static_cast<double>(c2_max), 0.0};
  if (depth >= 4) q.c_upper[3] = c3_per_k ? CUpperBound{0.0, *c3_per_k} : CUpperBound{0.0, 1.0};
  return abs_u_lower_bounds(q);
}

}  // namespace detail

/**
 * Replays the valency-cap argument for D = 4 (anchor 36) or D = 5 (anchor
 * 71; or anchor 24 for the a_4 != 0 branch with the c_3 = 0.375k split):
 * |u_i| lower bounds, the trace bound on the last c, and the multiplicity
 * bound, each constant rounded to 4 decimals in the safe direction before
 * it is used downstream.
 */
inline ValencyCap valency_cap(int diameter, const Rational& theta_ratio, int c2_max,
                              CapBranch branch = CapBranch::main) {
  const double ratio = theta_ratio.convert_to<double>();
  ValencyCap cap;
  auto add = [&](std::string name, double value, bool lower) {
    const double r = lower ? floor_decimals(value, detail::kChainDecimals) : ceil_decimals(value, detail::kChainDecimals);
    cap.constants.push_back({std::move(name), value, r});
    return r;
  };
  auto note_monotone = [&](const AbsUBounds& b) {
    for (const auto& n : b.notes) cap.notes.push_back(n);
  };
  const double u1 = std::abs(ratio);

  if (diameter == 4 && branch == CapBranch::main) {
    cap.anchor = 36;
    const auto ub = detail::chain_abs_u(cap.anchor, ratio, 3, c2_max, std::nullopt);
    note_monotone(ub);
    const double u2 = add("u2", ub.lower[2], true);
    const double u3 = add("u3", ub.lower[3], true);
    const double c4 = add("c4/k", detail::min_implied_last_c(cap.anchor, ratio, trace_cap_for_diameter(4)), true);
    const std::vector<double> us{1.0, u1, u2, u3};
    const double bound = multiplicity_bound_from_constants(us, 1.0 + 1.0 / c4);
    cap.constants.push_back({"m_bound", bound, bound});
    detail::close_chain(cap, bound);
    return cap;
  }
  if (diameter == 5 && branch == CapBranch::main) {
    cap.anchor = 71;
    const auto ub = detail::chain_abs_u(cap.anchor, ratio, 3, c2_max, std::nullopt);
    note_monotone(ub);
    const double u2 = add("u2", ub.lower[2], true);
    const double u3 = add("u3", ub.lower[3], true);
    // m >= k >= anchor with m <= max{1/u1^2, 1/u2^2, (1 + r + r^2)/u3^2},
    // r = (k - c3)/c3, forces r^2 + r + 1 >= anchor u3^2.
    if (1.0 / (u1 * u1) >= cap.anchor || 1.0 / (u2 * u2) >= cap.anchor) {
      cap.notes.push_back("1/u1^2 or 1/u2^2 reaches the anchor; no cap on c3");
      return cap;
    }
    const double target = cap.anchor * u3 * u3;
    const double r = (-1.0 + std::sqrt(std::max(0.0, 4.0 * target - 3.0))) / 2.0;
    const double c3 = add("c3/k", 1.0 / (1.0 + r), false);
    const auto ub4 = detail::chain_abs_u(cap.anchor, ratio, 4, c2_max, c3);
    note_monotone(ub4);
    const double u4 = add("u4", ub4.lower[4], true);
    const double c5 = add("c5/k", detail::min_implied_last_c(cap.anchor, ratio, trace_cap_for_diameter(5)), true);
    const std::vector<double> us{1.0, u1, u2, u3, u4};
    const double bound = multiplicity_bound_from_constants(us, 1.0 + 1.0 / c5);
    cap.constants.push_back({"m_bound", bound, bound});
    detail::close_chain(cap, bound);
    return cap;
  }
  if (diameter == 5 && branch == CapBranch::a4_nonzero) {
    cap.anchor = 24;
    constexpr double split = 0.375;
    cap.constants.push_back({"c3/k split", split, split});
    const auto ub = detail::chain_abs_u(cap.anchor, ratio, 3, c2_max, std::nullopt);
    note_monotone(ub);
    const double u2 = add("u2", ub.lower[2], true);
    const double u3 = add("u3", ub.lower[3], true);
    // c3 >= split*k: k4/k3 <= r and k5/k3 <= r^2 with r = (k - c3)/c3.
    const double r = (1.0 - split) / split;
    const std::vector<double> us{1.0, u1, u2, u3};
    const double bound = multiplicity_bound_from_constants(us, 1.0 + r + r * r);
    cap.constants.push_back({"m_bound", bound, bound});
    detail::close_chain(cap, bound);
    return cap;
  }
  throw std::invalid_argument("valency cap defined for D = 4 (main) and D = 5 (main, a4_nonzero)");
}

/// Scan of the odd-girth inequality sum_{i<=t} p_i(eta) u_i >= 0 over arrays
/// with a_1 = ... = a_{t-1} = 0 and theta_min / k in [-1, ratio]; reports the
/// valencies where it can hold. u_0..u_t depend only on k, theta and
/// c_2..c_{t-1}.
struct BranchScanSpec {
  int t = 3;
  double eta = 2.0;
  double ratio = -0.75;
  std::vector<int> c2_values{1, 2};
  std::optional<double> c3_split;  // c_3 <= split * k
  int k_lo = 2;
  int k_hi = 200;
  int grid = 2001;
};

struct BranchScanResult {
  std::vector<int> feasible;           // valencies where the inequality can hold
  std::optional<int> max_feasible;
  double limit_max = 0;                // sup of the sum as k -> infinity
  bool limit_negative = false;
};

namespace detail {

inline double scan_sum(const BranchScanSpec& s, double kinv, double y, const std::vector<double>& c_scaled) {
  // c_scaled[i] = c_i / k for i = 1..t-1; quantities scaled by 1/k.
  std::vector<double> u{1.0, y};
  for (int i = 1; i < s.t; ++i) {
    const double ci = c_scaled[static_cast<std::size_t>(i)];
    const double bi = 1.0 - ci;
    if (bi <= 0) return -std::numeric_limits<double>::infinity();
    u.push_back((y * u[static_cast<std::size_t>(i)] - ci * u[static_cast<std::size_t>(i - 1)]) / bi);
  }
  (void)kinv;
  const auto p = p_polynomials(s.t, s.eta);
  double sum = 0;
  for (int i = 0; i <= s.t; ++i) sum += p[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
  return sum;
}

}  // namespace detail

inline BranchScanResult scan_odd_girth_branch(const BranchScanSpec& s) {
  if (s.t < 2 || s.t > 4) throw std::invalid_argument("branch scan supports t in [2, 4]");
  BranchScanResult out;
  auto grid_y = [&](int g) { return -1.0 + (s.ratio + 1.0) * g / (s.grid - 1); };
  for (int k = s.k_lo; k <= s.k_hi; ++k) {
    const double kinv = 1.0 / k;
    bool feasible = false;
    std::vector<double> c(static_cast<std::size_t>(std::max(s.t, 2)), 0.0);
    c[1] = kinv;
    auto try_point = [&]() {
      for (int g = 0; g < s.grid && !feasible; ++g) {
        if (detail::scan_sum(s, kinv, grid_y(g), c) >= -1e-12) feasible = true;
      }
    };
    if (s.t <= 2) {
      try_point();
    } else {
      for (int c2 : s.c2_values) {
        if (c2 >= k || feasible) continue;
        c[2] = c2 * kinv;
        if (s.t == 3) {
          try_point();
        } else {
          const int c3_hi = s.c3_split ? static_cast<int>(std::floor(*s.c3_split * k + 1e-9)) : k - 1;
          for (int c3 = c2; c3 <= std::min(c3_hi, k - 1) && !feasible; ++c3) {
            c[3] = c3 * kinv;
            try_point();
          }
        }
      }
    }
    if (feasible) out.feasible.push_back(k);
  }
  if (!out.feasible.empty()) out.max_feasible = out.feasible.back();

  // k -> infinity: c_1/k, c_2/k -> 0; c_3/k ranges over [0, split].
  out.limit_max = -std::numeric_limits<double>::infinity();
  std::vector<double> c(static_cast<std::size_t>(std::max(s.t, 2)), 0.0);
  const int gamma_steps = s.t >= 4 ? 256 : 1;
  const double gamma_hi = s.c3_split.value_or(1.0 - 1e-9);
  for (int gi = 0; gi < gamma_steps; ++gi) {
    if (s.t >= 4) c[3] = gamma_hi * gi / std::max(1, gamma_steps - 1);
    for (int g = 0; g < s.grid; ++g) out.limit_max = std::max(out.limit_max, detail::scan_sum(s, 0.0, grid_y(g), c));
  }
  out.limit_negative = out.limit_max < 0;
  return out;
}

// a_2 != 0 (pentagon, t = 2) forces theta >= (-2k - sqrt5 + 1)/(sqrt5 + 1);
// with theta <= ratio*k this bounds k. Empty when k is unbounded.
inline std::optional<int> pentagon_valency_limit(double ratio) {
  const double s5 = std::sqrt(5.0);
  const double denom = -(ratio * (s5 + 1.0) + 2.0);
  if (denom <= 0) return std::nullopt;
  return static_cast<int>(std::floor((s5 - 1.0) / denom + 1e-12));
}

struct CatalogEntry {
  std::string name;
  IntersectionArray array;
};

/// Graphs of valency at most 4 admitted by the known small-valency
/// classifications, for D = 4 and D = 5.
inline std::vector<CatalogEntry> small_valency_catalog_entries(int diameter) {
  if (diameter == 4) {
    return {{"9-gon", parse_array("{2,1,1,1;1,1,1,1}")}, {"Coxeter graph", parse_array("{3,2,2,1;1,1,1,2}")}};
  }
  if (diameter == 5) return {{"11-gon", parse_array("{2,1,1,1,1;1,1,1,1,1}")}};
  throw std::invalid_argument("catalog exists for D = 4 and D = 5 only");
}

struct CatalogVerification {
  CatalogEntry entry;
  FeasibilityReport report;
  bool gate_ok = false;  // theta_min <= -(D-1)k/D
};

// Catalog entries re-verified by full_report and the theta_min gate.
inline std::vector<CatalogVerification> small_valency_catalog(int diameter) {
  std::vector<CatalogVerification> out;
  const Rational ratio(-(diameter - 1), diameter);
  for (auto& e : small_valency_catalog_entries(diameter)) {
    auto report = full_report<HighReal>(e.array, {ratio});
    const auto* gate = report.find("theta_ratio");
    const bool gate_ok = gate && gate->verdict == Verdict::pass;
    out.push_back({std::move(e), std::move(report), gate_ok});
  }
  return out;
}

/// Excluded by a cited nonexistence result rather than re-derived: no
/// distance-regular graph with D = 5, k = 5, c_2 = 2 and a_3 != 0 survives
/// the theta_min gate (known from the classification of such graphs).
inline bool catalog_excludes(const IntersectionArray& arr) {
  return arr.diameter() == 5 && arr.valency() == 5 && arr.c(2) == 2 && arr.a(3) != 0;
}

inline std::vector<CatalogEntry> theorem2_expected(int diameter) {
  if (diameter == 4) {
    return {{"Coxeter graph", parse_array("{3,2,2,1;1,1,1,2}")},
            {"9-gon", parse_array("{2,1,1,1;1,1,1,1}")},
            {"Odd graph O5", parse_array("{5,4,4,3;1,1,2,2}")},
            {"folded 9-cube", parse_array("{9,8,7,6;1,2,3,4}")}};
  }
  if (diameter == 5) {
    return {{"11-gon", parse_array("{2,1,1,1,1;1,1,1,1,1}")},
            {"Odd graph O6", parse_array("{6,5,5,4,4;1,1,2,2,3}")},
            {"folded 11-cube", parse_array("{11,10,9,8,7;1,2,3,4,5}")}};
  }
  throw std::invalid_argument("classification defined for D = 4 and D = 5 only");
}

struct Stage {
  std::string name;
  std::string summary;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  std::vector<IntersectionArray> arrays;  // arrays this stage contributes
  std::optional<PruningStats> stats;
};

struct Theorem2Options {
  std::vector<std::string> disabled_checks;  // test hook
  unsigned threads = 0;
};

struct Theorem2Result {
  int diameter = 0;
  std::vector<Stage> stages;
  std::vector<CatalogEntry> classification;  // sorted by (k, c, b)
  std::vector<std::string> discrepancies;

  bool ok() const { return discrepancies.empty(); }
};

namespace detail {

inline SearchSpec branch_spec(int diameter, int k_lo, int k_hi, std::string_view pattern, std::vector<int> c2,
                              const Theorem2Options& opts) {
  SearchSpec s;
  s.diameter = diameter;
  s.k_min = k_lo;
  s.k_max = k_hi;
  s.a_pattern = parse_a_pattern(pattern);
  s.c2_set = std::move(c2);
  s.theta_ratio = Rational(-(diameter - 1), diameter);
  s.checks.erase(std::remove_if(s.checks.begin(), s.checks.end(),
                                [&](const std::string& n) {
                                  return std::find(opts.disabled_checks.begin(), opts.disabled_checks.end(), n) !=
                                         opts.disabled_checks.end();
                                }),
                 s.checks.end());
  return s;
}

inline nlohmann::ordered_json scan_json(const BranchScanResult& r) {
  nlohmann::ordered_json j;
  j["max_feasible_k"] = r.max_feasible ? nlohmann::ordered_json(*r.max_feasible) : nlohmann::ordered_json(nullptr);
  j["limit_max"] = r.limit_max;
  j["limit_negative"] = r.limit_negative;
  return j;
}

inline Stage enumeration_stage(std::string name, std::string summary, const SearchSpec& spec,
                               std::vector<std::string>& discrepancies, unsigned threads) {
  Stage st{std::move(name), std::move(summary), {}, {}, std::nullopt};
  auto res = enumerate(spec, threads);
  st.data["spec"] = spec.to_json();
  st.arrays = res.survivors;
  st.stats = res.stats;
  for (const auto& d : res.discrepancies) discrepancies.push_back(st.name + ": " + d);
  for (const auto& a : res.inconclusive) discrepancies.push_back(st.name + ": inconclusive " + a.str());
  return st;
}

}  // namespace detail

/**
 * Full case analysis of the classification of non-bipartite distance-regular
 * graphs with theta_min <= -(D-1)k/D for D = 4, 5. Every stage is recorded;
 * arrays outside the expected list, or expected arrays not produced, are
 * reported as discrepancies.
 */
inline Theorem2Result reproduce_theorem2(int diameter, const Theorem2Options& opts = {}) {
  if (diameter != 4 && diameter != 5) throw std::invalid_argument("reproduce_theorem2 needs D in {4, 5}");
  Theorem2Result out;
  out.diameter = diameter;
  const Rational ratio_q(-(diameter - 1), diameter);
  const double ratio = ratio_q.convert_to<double>();
  const auto pattern = [&](std::string p) { return p; };
  std::vector<IntersectionArray> found;

  {
    Stage st{"small_valency_catalog", "k <= 4: arrays from the known small-valency classifications", {}, {}, {}};
    for (auto& cv : small_valency_catalog(diameter)) {
      if (cv.report.overall() != Verdict::pass || !cv.gate_ok) {
        out.discrepancies.push_back("catalog entry " + cv.entry.array.str() + " fails re-verification");
        continue;
      }
      st.arrays.push_back(cv.entry.array);
    }
    found.insert(found.end(), st.arrays.begin(), st.arrays.end());
    out.stages.push_back(std::move(st));
  }
  out.stages.push_back({"a1_zero", "theta_min <= ratio*k < -k/2 forces a_1 = 0", {{"ratio", to_decimal_string(ratio_q)}}, {}, {}});
  {
    Stage st{"a2_nonzero_excluded", "pentagon inequality at eta = 2cos(2pi/5) bounds k when a_2 != 0", {}, {}, {}};
    const auto closed = pentagon_valency_limit(ratio);
    BranchScanSpec s;
    s.t = 2;
    s.eta = 2.0 * std::cos(2.0 * pi<double>() / 5.0);
    s.ratio = ratio;
    s.k_hi = 100;
    const auto scan = scan_odd_girth_branch(s);
    st.data["closed_form_k_max"] = closed ? nlohmann::ordered_json(*closed) : nlohmann::ordered_json(nullptr);
    st.data["scan"] = detail::scan_json(scan);
    if (!closed || *closed >= 5 || (scan.max_feasible && *scan.max_feasible >= 5) || !scan.limit_negative) {
      out.discrepancies.push_back("a_2 != 0 branch not excluded for k >= 5");
    }
    out.stages.push_back(std::move(st));
  }
  {
    const bool gate = ratio_q * 7 + 5 < 0 || Rational(12, 1) > (ratio_q * 7 + 5) * 5;
    Stage st{"c2_at_most_2", "a_1 = 0 and theta_min < (12-5k)/7 give c_2 <= 2", {{"gate_holds_for_k_ge_5", gate}}, {}, {}};
    if (!gate) out.discrepancies.push_back("c_2 <= 2 gate does not hold for all k >= 5");
    out.stages.push_back(std::move(st));
  }
  {
    Stage st{"a3_nonzero", "eta = 2 bounds k per c_2 when a_3 != 0; remaining valencies enumerated", {}, {}, {}};
    std::vector<int> c2_open;
    int k_hi = 4;
    for (int c2 : {1, 2}) {
      BranchScanSpec s;
      s.t = 3;
      s.eta = 2.0;
      s.ratio = ratio;
      s.c2_values = {c2};
      s.k_hi = 100;
      const auto scan = scan_odd_girth_branch(s);
      st.data["scan_c2_" + std::to_string(c2)] = detail::scan_json(scan);
      if (!scan.limit_negative) out.discrepancies.push_back("a_3 != 0 scan: inequality holds as k -> infinity");
      if (scan.max_feasible && *scan.max_feasible >= 5) {
        c2_open.push_back(c2);
        k_hi = std::max(k_hi, *scan.max_feasible);
      }
    }
    if (!c2_open.empty()) {
      const std::string pat = diameter == 4 ? "zznf" : "zznff";
      auto spec = detail::branch_spec(diameter, 5, k_hi, pattern(pat), c2_open, opts);
      auto es = detail::enumeration_stage("a3_nonzero", "", spec, out.discrepancies, opts.threads);
      st.data["enumeration"] = es.data;
      st.stats = es.stats;
      std::size_t excluded = 0;
      for (const auto& a : es.arrays) {
        if (catalog_excludes(a)) {
          ++excluded;
        } else {
          st.arrays.push_back(a);
        }
      }
      if (diameter == 5) st.data["catalog_excluded"] = excluded;
    }
    found.insert(found.end(), st.arrays.begin(), st.arrays.end());
    out.stages.push_back(std::move(st));
  }
  if (diameter == 5) {
    Stage st{"a4_nonzero", "c_3 <= 0.375k side bounded by eta = -1; c_3 >= 0.375k side by the multiplicity chain", {}, {}, {}};
    BranchScanSpec s;
    s.t = 4;
    s.eta = -1.0;
    s.ratio = ratio;
    s.c2_values = {1, 2};
    s.c3_split = 0.375;
    s.k_hi = 120;
    const auto scan = scan_odd_girth_branch(s);
    const auto cap = valency_cap(5, ratio_q, 2, CapBranch::a4_nonzero);
    st.data["scan"] = detail::scan_json(scan);
    st.data["chain"] = cap.to_json();
    if (!scan.limit_negative || !cap.closed) out.discrepancies.push_back("a_4 != 0 branch: valency not bounded");
    const int k_hi = std::max(cap.cap, scan.max_feasible.value_or(4));
    auto spec = detail::branch_spec(5, 5, k_hi, "zzznf", {1, 2}, opts);
    auto es = detail::enumeration_stage("a4_nonzero", "", spec, out.discrepancies, opts.threads);
    st.data["enumeration"] = es.data;
    st.stats = es.stats;
    st.arrays = es.arrays;
    found.insert(found.end(), st.arrays.begin(), st.arrays.end());
    out.stages.push_back(std::move(st));
  }
  {
    Stage st{"valency_cap", "|u_i| bounds, trace bound and multiplicity bound at the anchor valency", {}, {}, {}};
    const auto cap = valency_cap(diameter, ratio_q, 2, CapBranch::main);
    st.data = cap.to_json();
    if (!cap.closed) out.discrepancies.push_back("valency cap chain does not close");
    out.stages.push_back(std::move(st));
    const int k_hi = cap.closed ? cap.cap : (diameter == 4 ? 35 : 71);
    auto spec = detail::branch_spec(diameter, 5, k_hi, std::string(static_cast<std::size_t>(diameter - 1), 'z') + "n",
                                    {1, 2}, opts);
    auto es = detail::enumeration_stage("main_enumeration", "a_1 = ... = a_{D-1} = 0 != a_D", spec, out.discrepancies,
                                        opts.threads);
    es.summary = "a_1 = ... = a_{D-1} = 0 != a_D, 5 <= k <= " + std::to_string(k_hi);
    found.insert(found.end(), es.arrays.begin(), es.arrays.end());
    out.stages.push_back(std::move(es));
  }

  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  const auto expected = theorem2_expected(diameter);
  for (const auto& arr : found) {
    auto it = std::find_if(expected.begin(), expected.end(), [&](const CatalogEntry& e) { return e.array == arr; });
    if (it == expected.end()) {
      out.discrepancies.push_back("unexpected array " + arr.str());
      out.classification.push_back({"unexpected", arr});
    } else {
      out.classification.push_back(*it);
    }
  }
  for (const auto& e : expected) {
    if (std::find(found.begin(), found.end(), e.array) == found.end()) {
      out.discrepancies.push_back("missing expected array " + e.array.str() + " (" + e.name + ")");
    }
  }
  return out;
}

}  // namespace drgf
