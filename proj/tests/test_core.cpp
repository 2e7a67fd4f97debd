#include "drgf/core.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace drgf;

TEST(ParseArray, OddGraphO5) {
  const auto arr = parse_array("{5,4,4,3;1,1,2,2}");
  EXPECT_EQ(arr.diameter(), 4);
  EXPECT_EQ(arr.valency(), 5);
  EXPECT_EQ(arr.b(3), 3);
  EXPECT_EQ(arr.b(4), 0);
  EXPECT_EQ(arr.c(0), 0);
  EXPECT_EQ(arr.c(4), 2);
  EXPECT_EQ(arr.a(4), 3);
}

TEST(ParseArray, Triangle) {
  const auto arr = parse_array("{2;1}");
  EXPECT_EQ(arr.diameter(), 1);
  EXPECT_EQ(arr.a(1), 1);
}

TEST(ParseArray, WhitespaceNormalizes) {
  EXPECT_EQ(parse_array(" { 9, 8,7,6 ; 1,2, 3,4 } ").str(), "{9,8,7,6;1,2,3,4}");
}

TEST(ParseArray, ParserChecksOnlyTypeInvariants) {
  // c is not monotone, but every a_i >= 0: the parser accepts it.
  EXPECT_NO_THROW(parse_array("{3,2,1;1,2,1}"));
  // a_2 = 3 - 2 - 2 < 0
  EXPECT_THROW(parse_array("{3,2,2;1,2,1}"), InvalidArray);
  EXPECT_THROW(parse_array("{3,2,2,1;1,2,1,2}"), InvalidArray);
}

TEST(ParseArray, RejectsMalformed) {
  for (const char* bad : {"", "{}", "{5,4;1}", "{5,4;1,1", "5,4;1,1}", "{5,4;1,1;2}", "{5,x;1,1}", "{5,4;2,1}",
                          "{5,0;1,1}", "{5,4;1,0}", "{5,4,;1,1}", "{-5;1}"}) {
    EXPECT_THROW(parse_array(bad), std::invalid_argument) << bad;
  }
}

TEST(ParseArray, JsonRoundTrip) {
  const auto arr = parse_array("{6,5,5,4,4;1,1,2,2,3}");
  const auto j = arr.to_json();
  EXPECT_EQ(j.dump(), R"({"b":[6,5,5,4,4],"c":[1,1,2,2,3]})");
  EXPECT_EQ(array_from_json(nlohmann::json::parse(j.dump())), arr);
  EXPECT_THROW(array_from_json(nlohmann::json::parse(R"({"b":[2]})")), std::invalid_argument);
}

TEST(ParseArray, OrderingIsDiameterValencyThenC) {
  const auto a = parse_array("{2,1,1,1;1,1,1,1}");
  const auto b = parse_array("{5,4,4,3;1,1,2,2}");
  const auto c = parse_array("{5,4,4,3;1,1,2,3}");
  const auto d = parse_array("{2,1,1,1,1;1,1,1,1,1}");
  EXPECT_LT(a, b);
  EXPECT_LT(b, c);
  EXPECT_LT(c, d);
}

TEST(DeriveParameters, O5) {
  const auto p = derive_parameters(parse_array("{5,4,4,3;1,1,2,2}"));
  EXPECT_EQ(p.a, (std::vector<int>{0, 0, 0, 0, 3}));
  EXPECT_EQ(p.kseq, (std::vector<Rational>{1, 5, 20, 40, 60}));
  EXPECT_EQ(p.v, 126);
  EXPECT_TRUE(p.k_integral);
  ASSERT_TRUE(p.t);
  EXPECT_EQ(*p.t, 4);
  EXPECT_EQ(*p.odd_girth, 9);
}

TEST(DeriveParameters, FoldedNineCube) {
  const auto p = derive_parameters(parse_array("{9,8,7,6;1,2,3,4}"));
  EXPECT_EQ(p.a, (std::vector<int>{0, 0, 0, 0, 5}));
  EXPECT_EQ(p.kseq, (std::vector<Rational>{1, 9, 36, 84, 126}));
  EXPECT_EQ(p.v, 256);
  EXPECT_EQ(*p.odd_girth, 9);
}

TEST(DeriveParameters, NineGon) {
  const auto p = derive_parameters(parse_array("{2,1,1,1;1,1,1,1}"));
  EXPECT_EQ(p.a, (std::vector<int>{0, 0, 0, 0, 1}));
  EXPECT_EQ(p.v, 9);
  EXPECT_EQ(*p.odd_girth, 9);
}

TEST(DeriveParameters, NonIntegralKIsReportedNotThrown) {
  const auto p = derive_parameters(parse_array("{5,4;1,3}"));
  EXPECT_FALSE(p.k_integral);
  EXPECT_EQ(p.kseq[2], Rational(20, 3));
}

TEST(OddGirth, FromArray) {
  EXPECT_EQ(odd_girth_of_array(parse_array("{5,4,4,3;1,1,2,2}")), 9);
  EXPECT_EQ(odd_girth_of_array(parse_array("{2,1;1,1}")), 5);
  EXPECT_EQ(odd_girth_of_array(parse_array("{3,2,1;1,2,3}")), std::nullopt);
  EXPECT_EQ(odd_girth_of_array(parse_array("{2;1}")), 3);
}

// Random valid arrays: printing round-trips, sum k_i = v, and odd girth is
// odd and >= 3 whenever defined.
TEST(CoreProperties, RandomArrays) {
  std::mt19937 rng(20240601);
  int made = 0;
  for (int trial = 0; trial < 4000 && made < 500; ++trial) {
    const int d = std::uniform_int_distribution<>(1, 6)(rng);
    const int k = std::uniform_int_distribution<>(2, 20)(rng);
    std::vector<int> b{k}, c{1};
    for (int i = 1; i < d; ++i) {
      c.push_back(std::uniform_int_distribution<>(c.back(), k)(rng));
      b.push_back(std::uniform_int_distribution<>(1, k)(rng));
    }
    std::optional<IntersectionArray> arr;
    try {
      arr.emplace(b, c);
    } catch (const InvalidArray&) {
      continue;
    }
    ++made;
    EXPECT_EQ(parse_array(arr->str()), *arr);
    EXPECT_EQ(parse_array(arr->str()).str(), arr->str());
    const auto p = derive_parameters(*arr);
    Rational sum = 0;
    for (const auto& x : p.kseq) sum += x;
    EXPECT_EQ(sum, p.v);
    if (auto g = odd_girth_of_array(*arr)) {
      EXPECT_EQ(*g % 2, 1);
      EXPECT_GE(*g, 3);
    }
  }
  EXPECT_GE(made, 100);
}
