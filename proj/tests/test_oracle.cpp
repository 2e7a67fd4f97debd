#include "drgf/oracle.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace drgf;
using namespace drgf::oracle;

TEST(Builders, OrdersAndEdges) {
  // Vertex and edge counts from an independent networkx construction.
  struct Case {
    const char* name;
    int order;
    std::size_t edges;
  };
  for (const auto& c : {Case{"odd_graph:5", 126, 315}, Case{"odd_graph:6", 462, 1386},
                        Case{"folded_cube:9", 256, 1152}, Case{"folded_cube:11", 1024, 5632}, Case{"coxeter", 28, 42},
                        Case{"cycle:9", 9, 9}, Case{"path:4", 4, 3}}) {
    const auto g = build(c.name);
    EXPECT_EQ(g.name(), c.name);
    EXPECT_EQ(g.order(), c.order) << c.name;
    EXPECT_EQ(g.edge_count(), c.edges) << c.name;
  }
}

TEST(Builders, Regularity) {
  for (const char* name : {"odd_graph:5", "folded_cube:9", "coxeter"}) {
    const auto g = build(name);
    const auto deg = g.neighbors(0).size();
    for (int v = 0; v < g.order(); ++v) EXPECT_EQ(g.neighbors(v).size(), deg) << name;
  }
}

TEST(Builders, BadNames) {
  for (const char* bad : {"foo", "cycle:", "cycle:x", "cycle:2", "odd_graph:9", "heawood:1", "path:1"}) {
    EXPECT_THROW(build(bad), std::invalid_argument) << bad;
  }
}

TEST(Builders, GraphRejectsBadEdges) {
  EXPECT_THROW(Graph("g", 3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(Graph("g", 3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(Graph("g", 3, {{0, 1}, {1, 0}}), std::invalid_argument);
}

TEST(DistanceRegular, CatalogArrays) {
  const std::pair<const char*, const char*> cases[] = {
      {"cycle:9", "{2,1,1,1;1,1,1,1}"},         {"coxeter", "{3,2,2,1;1,1,1,2}"},
      {"odd_graph:5", "{5,4,4,3;1,1,2,2}"},     {"folded_cube:9", "{9,8,7,6;1,2,3,4}"},
      {"cycle:11", "{2,1,1,1,1;1,1,1,1,1}"},    {"odd_graph:6", "{6,5,5,4,4;1,1,2,2,3}"},
      {"folded_cube:11", "{11,10,9,8,7;1,2,3,4,5}"}, {"odd_graph:2", "{2;1}"}, {"cycle:10", "{2,1,1,1,1;1,1,1,1,2}"}};
  for (const auto& [name, text] : cases) {
    const auto r = verify_distance_regular(build(name));
    ASSERT_TRUE(r.ok()) << name;
    EXPECT_EQ(r.array->str(), text) << name;
  }
}

TEST(DistanceRegular, PathIsNot) {
  const auto r = verify_distance_regular(build("path:4"));
  EXPECT_FALSE(r.ok());
  ASSERT_TRUE(r.violation);
  EXPECT_FALSE(r.violation->what.empty());
}

TEST(DistanceRegular, DisconnectedIsNot) {
  EXPECT_FALSE(verify_distance_regular(Graph("two edges", 4, {{0, 1}, {2, 3}})).ok());
  EXPECT_FALSE(verify_distance_regular(Graph("empty", 3, {})).ok());
}

TEST(BruteSpectrum, O5) {
  const auto s = spectrum_bruteforce(build("odd_graph:5"));
  EXPECT_FALSE(s.ambiguous);
  ASSERT_EQ(s.values.size(), 5u);
  const double theta[] = {5, 3, 1, -2, -4};
  const int mult[] = {1, 27, 42, 48, 8};
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(s.values[i].theta, theta[i], 1e-9);
    EXPECT_EQ(s.values[i].multiplicity, mult[i]);
  }
}

TEST(BruteSpectrum, Coxeter) {
  const auto s = spectrum_bruteforce(build("coxeter"));
  ASSERT_EQ(s.values.size(), 5u);
  const int mult[] = {1, 8, 6, 7, 6};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(s.values[i].multiplicity, mult[i]);
  EXPECT_NEAR(s.values[2].theta, std::sqrt(2.0) - 1, 1e-9);
}

TEST(OddGirth, Bruteforce) {
  EXPECT_EQ(odd_girth_bruteforce(build("odd_graph:5")), 9);
  EXPECT_EQ(odd_girth_bruteforce(build("folded_cube:11")), 11);
  EXPECT_EQ(odd_girth_bruteforce(build("coxeter")), 7);
  EXPECT_EQ(odd_girth_bruteforce(build("cycle:9")), 9);
  EXPECT_EQ(odd_girth_bruteforce(build("cycle:10")), std::nullopt);
  EXPECT_EQ(odd_girth_bruteforce(build("odd_graph:2")), 3);
}

TEST(Compare, CatalogGraphsAgree) {
  for (const char* name : {"cycle:9", "coxeter", "odd_graph:5", "folded_cube:9", "cycle:11", "odd_graph:6"}) {
    const auto cmp = compare_with_array(build(name));
    EXPECT_TRUE(cmp.all_agree()) << name;
    ASSERT_EQ(cmp.rows.size(), 4u);
    EXPECT_EQ(cmp.rows[0].quantity, "intersection_array");
    EXPECT_EQ(cmp.rows[3].quantity, "odd_girth");
  }
}

TEST(Compare, WrongExpectedArrayDisagrees) {
  const auto cmp = compare_with_array(build("odd_graph:5"), parse_array("{5,4,4,3;1,1,2,3}"));
  EXPECT_FALSE(cmp.all_agree());
  EXPECT_FALSE(cmp.rows[0].agree);
  EXPECT_TRUE(cmp.rows[1].agree);
}

TEST(Compare, NotDistanceRegular) {
  const auto cmp = compare_with_array(build("path:5"));
  EXPECT_FALSE(cmp.all_agree());
  EXPECT_TRUE(cmp.rows.empty());
}

TEST(EdgeList, SortedPairs) {
  std::ostringstream os;
  build("cycle:4").write_edge_list(os);
  EXPECT_EQ(os.str(), "0 1\n0 3\n1 2\n2 3\n");
  std::ostringstream big;
  build("odd_graph:5").write_edge_list(big);
  std::istringstream in(big.str());
  std::pair<int, int> prev{-1, -1}, cur;
  std::size_t lines = 0;
  while (in >> cur.first >> cur.second) {
    EXPECT_LT(cur.first, cur.second);
    EXPECT_LT(prev, cur);
    prev = cur;
    ++lines;
  }
  EXPECT_EQ(lines, 315u);
}
