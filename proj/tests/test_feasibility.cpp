#include "drgf/feasibility.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace drgf;

namespace {

std::set<std::string> failing_set(const FeasibilityReport& r) {
  const auto f = r.failing();
  return {f.begin(), f.end()};
}

const char* const kCatalog[] = {"{2,1,1,1;1,1,1,1}",     "{3,2,2,1;1,1,1,2}",       "{5,4,4,3;1,1,2,2}",
                                "{9,8,7,6;1,2,3,4}",     "{2,1,1,1,1;1,1,1,1,1}",   "{6,5,5,4,4;1,1,2,2,3}",
                                "{11,10,9,8,7;1,2,3,4,5}"};

}  // namespace

TEST(Verdicts, Tolerances) {
  EXPECT_EQ(classify_nonnegative(0.0), Verdict::pass);
  EXPECT_EQ(classify_nonnegative(-1e-10), Verdict::pass);
  EXPECT_EQ(classify_nonnegative(-1e-8), Verdict::inconclusive);
  EXPECT_EQ(classify_nonnegative(-1e-5), Verdict::fail);
  EXPECT_EQ(to_string(Verdict::not_applicable), "not-applicable");
}

TEST(Monotonicity, Examples) {
  auto m = check_monotonicity(parse_array("{3,2,1;1,2,1}"));
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].name, "c_monotone");
  EXPECT_EQ(m[0].verdict, Verdict::fail);
  EXPECT_EQ(m[0].witness["index"], 3);
  EXPECT_EQ(m[1].verdict, Verdict::pass);

  m = check_monotonicity(parse_array("{5,1,2;1,1,1}"));
  EXPECT_EQ(m[0].verdict, Verdict::pass);
  EXPECT_EQ(m[1].verdict, Verdict::fail);
  EXPECT_EQ(m[1].witness["index"], 2);
}

TEST(KIntegrality, Examples) {
  EXPECT_EQ(check_k_integrality(derive_parameters(parse_array("{5,4;1,3}"))).verdict, Verdict::fail);
  const auto e = check_k_integrality(derive_parameters(parse_array("{5,4,4,3;1,1,2,2}")));
  EXPECT_EQ(e.verdict, Verdict::pass);
  EXPECT_EQ(e.witness["v"], "126");
}

TEST(Report, CatalogGraphsPassEveryCheck) {
  for (const char* text : kCatalog) {
    const auto r = full_report<HighReal>(parse_array(text));
    EXPECT_EQ(r.overall(), Verdict::pass) << text << " " << r.to_json().dump();
  }
}

TEST(Report, DoublePrecisionAgreesOnCatalog) {
  for (const char* text : kCatalog) EXPECT_EQ(full_report<double>(parse_array(text)).overall(), Verdict::pass) << text;
}

// Expected failures come from an independent high-precision evaluation of the
// spectrum and of the odd-girth sums.
TEST(Report, NonIntegralMultiplicityArrays) {
  auto r = full_report<HighReal>(parse_array("{4,3,3;1,1,3}"));
  EXPECT_EQ(failing_set(r), (std::set<std::string>{"multiplicity_integral", "sum_rules", "odd_girth_inequality[j=0]",
                                                   "odd_girth_inequality[j=2]"}));
  r = full_report<HighReal>(parse_array("{5,4,4,3;1,1,2,3}"));
  EXPECT_EQ(failing_set(r), (std::set<std::string>{"multiplicity_integral", "odd_girth_inequality[j=1]"}));
  EXPECT_NEAR(std::stod(r.find("odd_girth_inequality[j=1]")->witness["value"].get<std::string>()), -0.026955858,
              1e-8);
}

TEST(Report, MonotonicityFailureStillRunsLaterChecks) {
  const auto r = full_report<HighReal>(parse_array("{3,2,1;1,2,1}"));
  EXPECT_EQ(r.find("c_monotone")->verdict, Verdict::fail);
  EXPECT_EQ(r.find("c2_bound")->verdict, Verdict::fail);
  EXPECT_EQ(r.find("sum_rules")->verdict, Verdict::pass);
  EXPECT_EQ(r.overall(), Verdict::fail);
}

TEST(Report, NonIntegralK) {
  const auto r = full_report<HighReal>(parse_array("{5,4;1,3}"));
  EXPECT_EQ(r.find("k_integral")->verdict, Verdict::fail);
  EXPECT_EQ(r.find("sum_rules")->verdict, Verdict::pass);
}

TEST(Report, ThetaRatio) {
  const auto arr = parse_array("{9,8,7,6;1,2,3,4}");
  // theta_min = -7 = -(7/9) k.
  EXPECT_EQ(full_report<HighReal>(arr, {Rational(-3, 4)}).find("theta_ratio")->verdict, Verdict::pass);
  EXPECT_EQ(full_report<HighReal>(arr, {Rational(-7, 9)}).find("theta_ratio")->verdict, Verdict::pass);
  EXPECT_EQ(full_report<HighReal>(arr, {Rational(-4, 5)}).find("theta_ratio")->verdict, Verdict::fail);
  EXPECT_EQ(full_report<HighReal>(arr).find("theta_ratio")->verdict, Verdict::not_applicable);
}

TEST(Report, JsonFieldOrder) {
  const auto j = full_report<HighReal>(parse_array("{5,4,4,3;1,1,2,2}")).to_json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"array", "checks", "overall"}));
  std::vector<std::string> names;
  for (const auto& c : j["checks"]) names.push_back(c["name"]);
  const std::vector<std::string> expected{"c_monotone",
                                          "b_monotone",
                                          "k_integral",
                                          "spectrum",
                                          "multiplicity_integral",
                                          "sum_rules",
                                          "theta_ratio",
                                          "a1_zero",
                                          "c2_bound",
                                          "odd_girth_inequality[j=0]",
                                          "odd_girth_inequality[j=1]",
                                          "odd_girth_inequality[j=2]",
                                          "odd_girth_inequality[j=3]",
                                          "odd_girth_inequality[j=4]",
                                          "trace_square"};
  EXPECT_EQ(names, expected);
  auto entry_keys = std::vector<std::string>{};
  for (auto it = j["checks"][0].begin(); it != j["checks"][0].end(); ++it) entry_keys.push_back(it.key());
  EXPECT_EQ(entry_keys, (std::vector<std::string>{"name", "verdict", "witness"}));
  EXPECT_EQ(j["checks"][3]["witness"]["eigenvalues"][4]["theta"], "-4");
  EXPECT_EQ(j["checks"][3]["witness"]["eigenvalues"][4]["multiplicity"], "8");
}

TEST(A1Zero, Examples) {
  const auto ok = parse_array("{9,8,7,6;1,2,3,4}");
  EXPECT_EQ(check_a1_zero(ok, -7.0).verdict, Verdict::pass);
  // a_1 = 1 with theta_min < -k/2
  const auto bad = parse_array("{4,2;1,2}");
  EXPECT_EQ(check_a1_zero(bad, -2.5).verdict, Verdict::fail);
  EXPECT_EQ(check_a1_zero(bad, -2.0).verdict, Verdict::not_applicable);
}

TEST(C2Bound, Examples) {
  // k = 9, theta = -7: bound (18 + 14)/(4 + 21 - 9) = 2.
  auto e = check_c2_bound(parse_array("{9,8,7,6;1,2,3,4}"), -7.0);
  EXPECT_EQ(e.verdict, Verdict::pass);
  EXPECT_EQ(e.witness["bound"], "2");
  // k = 5, theta = -4: bound 18/11 < c_2 = 3.
  e = check_c2_bound(parse_array("{5,4,2;1,3,5}"), -4.0);
  EXPECT_EQ(e.verdict, Verdict::fail);
  // Gate: theta must be below (12 - 5k)/7.
  EXPECT_EQ(check_c2_bound(parse_array("{9,8,7,6;1,2,3,4}"), -4.0).verdict, Verdict::not_applicable);
  // a_1 != 0: not applicable.
  EXPECT_EQ(check_c2_bound(parse_array("{4,2;1,2}"), -3.5).verdict, Verdict::not_applicable);
}

TEST(PPolynomials, Recurrence) {
  const auto p = p_polynomials(4, 3.0);
  EXPECT_EQ(p, (std::vector<double>{1, 3, 7, 18, 47}));
  const auto at2 = p_polynomials(12, 2.0);
  EXPECT_EQ(at2[0], 1.0);
  for (std::size_t i = 1; i < at2.size(); ++i) EXPECT_EQ(at2[i], 2.0) << i;
}

// p_i(2 cos x) = 2 cos(i x) for i >= 1: values lie in [-2, 2] on [-2, 2].
TEST(PPolynomials, ChebyshevBoundOnGrid) {
  for (int g = 0; g <= 1000; ++g) {
    const double eta = -2.0 + 4.0 * g / 1000;
    const auto p = p_polynomials(10, eta);
    const double x = std::acos(eta / 2);
    for (std::size_t i = 1; i < p.size(); ++i) {
      EXPECT_LE(std::abs(p[i]), 2.0 + 1e-9);
      EXPECT_NEAR(p[i], 2 * std::cos(static_cast<double>(i) * x), 1e-9);
    }
  }
}

TEST(PolygonEigenvalues, Pentagon) {
  const auto e = polygon_eigenvalues<double>(5);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_NEAR(e[0], 2.0, 1e-15);
  EXPECT_NEAR(e[1], (std::sqrt(5.0) - 1) / 2, 1e-15);
  EXPECT_NEAR(e[2], -(std::sqrt(5.0) + 1) / 2, 1e-15);
}

TEST(OddGirthInequality, O5AllEta) {
  const auto arr = parse_array("{5,4,4,3;1,1,2,2}");
  const auto seq = standard_sequence(arr, HighReal(-4));
  const auto entries = check_odd_girth_inequality(arr, seq);
  ASSERT_EQ(entries.size(), 5u);
  const double expected[] = {0.0, 0.12740336, 0.19170992, 0.45, 3.7308867162};
  for (std::size_t j = 0; j < entries.size(); ++j) {
    EXPECT_EQ(entries[j].verdict, Verdict::pass) << j;
    EXPECT_NEAR(std::stod(entries[j].witness["value"].get<std::string>()), expected[j], 1e-8) << j;
  }
}

TEST(OddGirthInequality, BipartiteIsNotApplicable) {
  const auto arr = parse_array("{3,2,1;1,2,3}");
  const auto e = check_odd_girth_inequality(arr, standard_sequence(arr, -3.0));
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].verdict, Verdict::not_applicable);
}

TEST(TraceSquareCheck, O5) {
  const auto e = check_trace_square(parse_array("{5,4,4,3;1,1,2,2}"), -4.0);
  EXPECT_EQ(e.verdict, Verdict::pass);
  EXPECT_EQ(e.witness["trace"], "55");
}
