#pragma once

#include "drgf/core.hpp"
#include "drgf/numeric.hpp"
#include "drgf/spectral.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace drgf {

enum class Verdict { pass, fail, not_applicable, inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not-applicable";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

// Inequalities "value >= 0": pass at >= -1e-9, inconclusive down to -1e-6.
inline constexpr double kPassTolerance = 1e-9;
inline constexpr double kInconclusiveTolerance = 1e-6;

template <class Real>
Verdict classify_nonnegative(const Real& value) {
  if (value >= Real(-kPassTolerance)) return Verdict::pass;
  if (value > Real(-kInconclusiveTolerance)) return Verdict::inconclusive;
  return Verdict::fail;
}

struct CheckEntry {
  std::string name;
  Verdict verdict = Verdict::not_applicable;
  nlohmann::ordered_json witness = nlohmann::ordered_json::object();
};

struct FeasibilityReport {
  std::string array;
  std::vector<CheckEntry> checks;

  // fail if any applicable check fails; otherwise inconclusive if any check
  // is; otherwise pass.
  Verdict overall() const {
    bool inconclusive = false;
    for (const auto& c : checks) {
      if (c.verdict == Verdict::fail) return Verdict::fail;
      if (c.verdict == Verdict::inconclusive) inconclusive = true;
    }
    return inconclusive ? Verdict::inconclusive : Verdict::pass;
  }

  const CheckEntry* find(std::string_view name) const {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  std::vector<std::string> failing() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
      if (c.verdict == Verdict::fail) out.push_back(c.name);
    }
    return out;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["array"] = array;
    auto list = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
      nlohmann::ordered_json e;
      e["name"] = c.name;
      e["verdict"] = std::string(to_string(c.verdict));
      e["witness"] = c.witness;
      list.push_back(std::move(e));
    }
    j["checks"] = std::move(list);
    j["overall"] = std::string(to_string(overall()));
    return j;
  }
};

namespace detail {

template <class Real>
std::string num(const Real& x) {
  return to_decimal_string(x);
}

}  // namespace detail

// Conditions i) and ii): 1 = c_1 <= ... <= c_D and k = b_0 >= ... >= b_{D-1}.
inline std::vector<CheckEntry> check_monotonicity(const IntersectionArray& arr) {
  CheckEntry c_entry{"c_monotone", Verdict::pass, nlohmann::ordered_json::object()};
  CheckEntry b_entry{"b_monotone", Verdict::pass, nlohmann::ordered_json::object()};
  for (int i = 2; i <= arr.diameter(); ++i) {
    if (arr.c(i) < arr.c(i - 1)) {
      c_entry.verdict = Verdict::fail;
      c_entry.witness = {{"index", i}, {"c_prev", arr.c(i - 1)}, {"c", arr.c(i)}};
      break;
    }
  }
  for (int i = 1; i < arr.diameter(); ++i) {
    if (arr.b(i) > arr.b(i - 1)) {
      b_entry.verdict = Verdict::fail;
      b_entry.witness = {{"index", i}, {"b_prev", arr.b(i - 1)}, {"b", arr.b(i)}};
      break;
    }
  }
  return {c_entry, b_entry};
}

// Condition iii): every k_i a positive integer.
inline CheckEntry check_k_integrality(const DerivedParameters& params) {
  CheckEntry e{"k_integral", params.k_integral ? Verdict::pass : Verdict::fail, nlohmann::ordered_json::object()};
  auto ks = nlohmann::ordered_json::array();
  for (const auto& k : params.kseq) ks.push_back(to_decimal_string(k));
  e.witness["k"] = std::move(ks);
  e.witness["v"] = to_decimal_string(params.v);
  return e;
}

// Condition iv): every Biggs multiplicity a positive integer.
template <class Real>
CheckEntry check_multiplicity_integrality(const Spectrum<Real>& spec) {
  CheckEntry e{"multiplicity_integral", Verdict::pass, nlohmann::ordered_json::object()};
  auto ms = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < spec.entries.size(); ++i) {
    const auto& entry = spec.entries[i];
    ms.push_back(entry.exact_multiplicity ? to_decimal_string(*entry.exact_multiplicity)
                                          : detail::num(entry.multiplicity));
    if (!multiplicity_is_positive_integer(entry) && e.verdict == Verdict::pass) {
      e.verdict = Verdict::fail;
      e.witness["index"] = i;
    }
  }
  e.witness["multiplicities"] = std::move(ms);
  return e;
}

// All four conditions of the classical feasibility lemma.
template <class Real>
std::vector<CheckEntry> check_monotonicity_and_integrality(const IntersectionArray& arr) {
  auto out = check_monotonicity(arr);
  const auto params = derive_parameters(arr);
  out.push_back(check_k_integrality(params));
  try {
    out.push_back(check_multiplicity_integrality(spectrum<Real>(arr, params)));
  } catch (const NumericalError& err) {
    out.push_back({"multiplicity_integral", Verdict::inconclusive, {{"error", err.what()}}});
  }
  return out;
}

// sum m_i = v, sum m_i theta_i = 0, sum m_i theta_i^2 = v k.
template <class Real>
CheckEntry check_sum_rules(const IntersectionArray& arr, const DerivedParameters& params, const Spectrum<Real>& spec) {
  CheckEntry e{"sum_rules", Verdict::pass, nlohmann::ordered_json::object()};
  using std::abs;
  using std::round;
  Real s0 = 0, s1 = 0, s2 = 0;
  Integer rounded_sum = 0;
  for (const auto& entry : spec.entries) {
    s0 += entry.multiplicity;
    s1 += entry.multiplicity * entry.theta;
    s2 += entry.multiplicity * entry.theta * entry.theta;
    rounded_sum += Integer(std::llround(to_double(entry.multiplicity)));
  }
  const Real v = to_real<Real>(params.v);
  const Real vk = v * Real(arr.valency());
  const Real tol(kMultiplicityTolerance);
  e.witness = {{"sum_m", detail::num(s0)}, {"sum_m_theta", detail::num(s1)}, {"sum_m_theta2", detail::num(s2)},
               {"v", to_decimal_string(params.v)}};
  const bool ok = abs(s0 - v) <= tol * v && abs(s1) <= tol * vk && abs(s2 - vk) <= tol * vk &&
                  (!params.k_integral || Rational(rounded_sum) == params.v);
  if (!ok) e.verdict = Verdict::fail;
  return e;
}

// theta_min <= ratio * k, when a ratio is requested.
template <class Real>
CheckEntry check_theta_ratio(const IntersectionArray& arr, const SpectrumEntry<Real>& theta_min,
                             const std::optional<Rational>& ratio) {
  CheckEntry e{"theta_ratio", Verdict::not_applicable, nlohmann::ordered_json::object()};
  if (!ratio) return e;
  const Rational limit = *ratio * arr.valency();
  e.witness = {{"theta_min", theta_min.exact_theta ? theta_min.exact_theta->str() : detail::num(theta_min.theta)},
               {"limit", to_decimal_string(limit)}};
  if (theta_min.exact_theta) {
    e.verdict = Rational(*theta_min.exact_theta) <= limit ? Verdict::pass : Verdict::fail;
  } else {
    e.verdict = classify_nonnegative<Real>(to_real<Real>(limit) - theta_min.theta);
  }
  return e;
}

// theta_min < -k/2 forces a_1 = 0.
template <class Real>
CheckEntry check_a1_zero(const IntersectionArray& arr, const Real& theta_min) {
  CheckEntry e{"a1_zero", Verdict::not_applicable, nlohmann::ordered_json::object()};
  if (arr.diameter() < 1) return e;
  e.witness = {{"theta_min", detail::num(theta_min)}, {"a1", arr.a(1)}};
  if (!(theta_min * 2 < -Real(arr.valency()))) return e;
  e.verdict = arr.a(1) == 0 ? Verdict::pass : Verdict::fail;
  return e;
}

// With a_1 = 0 and theta_min < (12 - 5k)/7: c_2 <= (2k - 2 theta)/(4 - 3 theta - k).
template <class Real>
CheckEntry check_c2_bound(const IntersectionArray& arr, const Real& theta_min) {
  CheckEntry e{"c2_bound", Verdict::not_applicable, nlohmann::ordered_json::object()};
  if (arr.diameter() < 2 || arr.a(1) != 0) return e;
  const Real k(arr.valency());
  const Real gate = (Real(12) - Real(5) * k) / Real(7);
  if (!(theta_min < gate)) return e;
  const Real bound = (Real(2) * k - Real(2) * theta_min) / (Real(4) - Real(3) * theta_min - k);
  e.witness = {{"theta_min", detail::num(theta_min)}, {"bound", detail::num(bound)}, {"c2", arr.c(2)}};
  e.verdict = classify_nonnegative<Real>(bound - Real(arr.c(2)));
  return e;
}

// p_0 = 1, p_1 = x, p_2 = x^2 - 2, p_i = x p_{i-1} - p_{i-2}; p_i(2cos phi) = 2cos(i phi).
template <class T>
std::vector<T> p_polynomials(int t, const T& x) {
  std::vector<T> p;
  p.push_back(T(1));
  if (t >= 1) p.push_back(x);
  if (t >= 2) p.push_back(x * x - T(2));
  for (int i = 3; i <= t; ++i) p.push_back(x * p[static_cast<std::size_t>(i - 1)] - p[static_cast<std::size_t>(i - 2)]);
  return p;
}

// Eigenvalues 2cos(2 pi j / g), j = 0..(g-1)/2, of the g-gon.
template <class Real>
std::vector<Real> polygon_eigenvalues(int g) {
  using std::cos;
  std::vector<Real> out;
  for (int j = 0; j <= (g - 1) / 2; ++j) out.push_back(Real(2) * cos(Real(2) * pi<Real>() * Real(j) / Real(g)));
  return out;
}

// sum_{i=0}^t p_i(eta) u_i for the standard sequence u of theta_min.
template <class Real>
Real odd_girth_sum(int t, const Real& eta, std::span<const Real> u) {
  const auto p = p_polynomials(t, eta);
  Real s = 0;
  for (int i = 0; i <= t; ++i) s += p[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(i)];
  return s;
}

// One entry per g-gon eigenvalue: sum_{i<=t} p_i(eta) u_i >= 0.
template <class Real>
std::vector<CheckEntry> check_odd_girth_inequality(const IntersectionArray& arr, const StandardSequence<Real>& seq) {
  const auto girth = odd_girth_of_array(arr);
  if (!girth) return {{"odd_girth_inequality", Verdict::not_applicable, {{"reason", "bipartite"}}}};
  const int g = *girth;
  const int t = (g - 1) / 2;
  std::vector<CheckEntry> out;
  const auto etas = polygon_eigenvalues<Real>(g);
  for (std::size_t j = 0; j < etas.size(); ++j) {
    const Real value = odd_girth_sum<Real>(t, etas[j], seq.u);
    CheckEntry e{"odd_girth_inequality[j=" + std::to_string(j) + "]", classify_nonnegative(value),
                 {{"g", g}, {"eta", detail::num(etas[j])}, {"value", detail::num(value)}}};
    out.push_back(std::move(e));
  }
  return out;
}

template <class Real>
CheckEntry check_trace_square(const IntersectionArray& arr, const Real& theta_min) {
  const auto tc = trace_square_check(arr, theta_min);
  return {"trace_square", classify_nonnegative(tc.slack),
          {{"trace", tc.trace.str()}, {"k2_plus_theta2", detail::num(tc.lhs)}, {"slack", detail::num(tc.slack)}}};
}

struct ReportOptions {
  std::optional<Rational> theta_ratio;  // adds the theta_min <= ratio*k check
};

/**
 * Runs every check in a fixed order:
 * c_monotone, b_monotone, k_integral, spectrum, multiplicity_integral,
 * sum_rules, theta_ratio, a1_zero, c2_bound, odd_girth_inequality[j=..],
 * trace_square. Numerical failures surface as inconclusive entries.
 */
template <class Real>
FeasibilityReport full_report(const IntersectionArray& arr, const ReportOptions& opts = {}) {
  FeasibilityReport report;
  report.array = arr.str();
  auto mono = check_monotonicity(arr);
  report.checks.insert(report.checks.end(), mono.begin(), mono.end());
  const auto params = derive_parameters(arr);
  report.checks.push_back(check_k_integrality(params));

  std::optional<Spectrum<Real>> spec;
  try {
    spec = spectrum<Real>(arr, params);
  } catch (const NumericalError& err) {
    report.checks.push_back({"spectrum", Verdict::inconclusive, {{"error", err.what()}}});
    return report;
  }
  {
    CheckEntry e{"spectrum", Verdict::pass, nlohmann::ordered_json::object()};
    e.witness["eigenvalues"] = spec->to_json();
    report.checks.push_back(std::move(e));
  }
  report.checks.push_back(check_multiplicity_integrality(*spec));
  report.checks.push_back(check_sum_rules(arr, params, *spec));

  const auto& min_entry = spec->min();
  report.checks.push_back(check_theta_ratio(arr, min_entry, opts.theta_ratio));
  report.checks.push_back(check_a1_zero(arr, min_entry.theta));
  report.checks.push_back(check_c2_bound(arr, min_entry.theta));

  if (min_entry.exact_theta) {
    const auto exact = standard_sequence(arr, Rational(*min_entry.exact_theta));
    StandardSequence<Real> seq{min_entry.theta, {}};
    for (const auto& u : exact.u) seq.u.push_back(to_real<Real>(u));
    auto og = check_odd_girth_inequality(arr, seq);
    report.checks.insert(report.checks.end(), og.begin(), og.end());
  } else {
    auto og = check_odd_girth_inequality(arr, standard_sequence(arr, min_entry.theta));
    report.checks.insert(report.checks.end(), og.begin(), og.end());
  }
  report.checks.push_back(check_trace_square(arr, min_entry.theta));
  return report;
}

}  // namespace drgf
