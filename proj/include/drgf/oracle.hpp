#pragma once

#include "drgf/core.hpp"
#include "drgf/numeric.hpp"
#include "drgf/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace drgf::oracle {

/**
 * Simple undirected graph, immutable once built. Adjacency lists are sorted.
 */
class Graph {
 public:
  Graph(std::string name, int n, const std::vector<std::pair<int, int>>& edges) : name_(std::move(name)), adj_(n) {
    for (auto [u, v] : edges) {
      if (u == v) throw std::invalid_argument("loop at vertex " + std::to_string(u));
      if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
      adj_[static_cast<std::size_t>(u)].push_back(v);
      adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (auto& row : adj_) {
      std::sort(row.begin(), row.end());
      if (std::adjacent_find(row.begin(), row.end()) != row.end()) throw std::invalid_argument("repeated edge");
    }
  }

  const std::string& name() const { return name_; }
  int order() const { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }

  std::size_t edge_count() const {
    std::size_t twice = 0;
    for (const auto& row : adj_) twice += row.size();
    return twice / 2;
  }

  // Edge list, one "u v" pair per line with u < v, sorted.
  void write_edge_list(std::ostream& out) const {
    for (int u = 0; u < order(); ++u) {
      for (int v : neighbors(u)) {
        if (u < v) out << u << ' ' << v << '\n';
      }
    }
  }

  Eigen::MatrixXd adjacency_matrix() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(order(), order());
    for (int u = 0; u < order(); ++u) {
      for (int v : neighbors(u)) a(u, v) = 1.0;
    }
    return a;
  }

 private:
  std::string name_;
  std::vector<std::vector<int>> adj_;
};

inline Graph cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph("cycle:" + std::to_string(n), n, edges);
}

// Odd graph O_m: (m-1)-subsets of a (2m-1)-set, adjacent when disjoint.
inline Graph odd_graph(int m) {
  if (m < 2 || m > 8) throw std::invalid_argument("odd_graph supports 2 <= m <= 8");
  const int ground = 2 * m - 1;
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t mask = 0; mask < (1u << ground); ++mask) {
    if (std::popcount(mask) == m - 1) subsets.push_back(mask);
  }
  std::vector<std::pair<int, int>> edges;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    for (std::size_t j = i + 1; j < subsets.size(); ++j) {
      if ((subsets[i] & subsets[j]) == 0) edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return Graph("odd_graph:" + std::to_string(m), static_cast<int>(subsets.size()), edges);
}

// Folded n-cube: (n-1)-bit words; neighbours flip one bit or all bits.
inline Graph folded_cube(int n) {
  if (n < 3 || n > 16) throw std::invalid_argument("folded_cube supports 3 <= n <= 16");
  const int bits = n - 1;
  const int order = 1 << bits;
  const int all = order - 1;
  std::vector<std::pair<int, int>> edges;
  for (int x = 0; x < order; ++x) {
    for (int b = 0; b < bits; ++b) {
      const int y = x ^ (1 << b);
      if (x < y) edges.emplace_back(x, y);
    }
    const int y = x ^ all;
    if (x < y) edges.emplace_back(x, y);
  }
  return Graph("folded_cube:" + std::to_string(n), order, edges);
}

// Path on n vertices; not distance-regular for n >= 3.
inline Graph path(int n) {
  if (n < 2) throw std::invalid_argument("path needs n >= 2");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph("path:" + std::to_string(n), n, edges);
}

// Coxeter graph. Vertices a_i = i, b_i = 7 + i, c_i = 14 + i, d_i = 21 + i
// (i mod 7); edges a_i a_{i+1}, b_i b_{i+2}, c_i c_{i+3}, d_i a_i, d_i b_i,
// d_i c_i. Distance-regularity is checked by verify_distance_regular, not
// assumed.
inline Graph coxeter() {
  static constexpr std::array<std::pair<int, int>, 42> kEdges{{
      {0, 1},   {0, 6},   {0, 21},  {1, 2},   {1, 22},  {2, 3},   {2, 23},  {3, 4},   {3, 24},  {4, 5},   {4, 25},
      {5, 6},   {5, 26},  {6, 27},  {7, 9},   {7, 12},  {7, 21},  {8, 10},  {8, 13},  {8, 22},  {9, 11},  {9, 23},
      {10, 12}, {10, 24}, {11, 13}, {11, 25}, {12, 26}, {13, 27}, {14, 17}, {14, 18}, {14, 21}, {15, 18}, {15, 19},
      {15, 22}, {16, 19}, {16, 20}, {16, 23}, {17, 20}, {17, 24}, {18, 25}, {19, 26}, {20, 27},
  }};
  return Graph("coxeter", 28, {kEdges.begin(), kEdges.end()});
}

/// Builds "cycle:n", "odd_graph:m", "folded_cube:n", "path:n" or "coxeter".
inline Graph build(std::string_view spec) {
  if (spec == "coxeter") return coxeter();
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("unknown graph '" + std::string(spec) + "'");
  const std::string family(spec.substr(0, colon));
  const std::string arg(spec.substr(colon + 1));
  int param = 0;
  try {
    std::size_t used = 0;
    param = std::stoi(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad graph parameter in '" + std::string(spec) + "'");
  }
  if (family == "cycle") return cycle(param);
  if (family == "odd_graph") return odd_graph(param);
  if (family == "folded_cube") return folded_cube(param);
  if (family == "path") return path(param);
  throw std::invalid_argument("unknown graph family '" + family + "'");
}

inline std::vector<int> bfs_distances(const Graph& g, int root) {
  std::vector<int> dist(static_cast<std::size_t>(g.order()), -1);
  std::queue<int> todo;
  dist[static_cast<std::size_t>(root)] = 0;
  todo.push(root);
  while (!todo.empty()) {
    const int x = todo.front();
    todo.pop();
    for (int y : g.neighbors(x)) {
      if (dist[static_cast<std::size_t>(y)] < 0) {
        dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
        todo.push(y);
      }
    }
  }
  return dist;
}

struct RegularityViolation {
  int x = -1;
  int y = -1;
  int distance = -1;
  std::string what;
};

struct DistanceRegularity {
  std::optional<IntersectionArray> array;
  std::optional<RegularityViolation> violation;

  bool ok() const { return array.has_value(); }
};

/**
 * Brute-force distance-regularity test: BFS from every vertex x, and for every
 * y at distance i count neighbours of y at distance i-1 and i+1 from x. The
 * counts must depend on i only.
 */
inline DistanceRegularity verify_distance_regular(const Graph& g) {
  DistanceRegularity out;
  std::vector<int> b_of, c_of;  // indexed by distance, -1 = unset
  int diameter = -1;
  for (int x = 0; x < g.order(); ++x) {
    const auto dist = bfs_distances(g, x);
    const int ecc = *std::max_element(dist.begin(), dist.end());
    if (std::find(dist.begin(), dist.end(), -1) != dist.end()) {
      const int y = static_cast<int>(std::find(dist.begin(), dist.end(), -1) - dist.begin());
      out.violation = RegularityViolation{x, y, -1, "graph is disconnected"};
      return out;
    }
    if (ecc > diameter) {
      diameter = ecc;
      b_of.resize(static_cast<std::size_t>(diameter + 1), -1);
      c_of.resize(static_cast<std::size_t>(diameter + 1), -1);
    }
    for (int y = 0; y < g.order(); ++y) {
      const int i = dist[static_cast<std::size_t>(y)];
      int closer = 0, farther = 0;
      for (int z : g.neighbors(y)) {
        const int dz = dist[static_cast<std::size_t>(z)];
        if (dz == i - 1) ++closer;
        if (dz == i + 1) ++farther;
      }
      auto& bi = b_of[static_cast<std::size_t>(i)];
      auto& ci = c_of[static_cast<std::size_t>(i)];
      if (bi < 0) {
        bi = farther;
        ci = closer;
      } else if (bi != farther || ci != closer) {
        out.violation = RegularityViolation{
            x, y, i,
            "b_" + std::to_string(i) + "/c_" + std::to_string(i) + " counts " + std::to_string(farther) + "/" +
                std::to_string(closer) + " differ from " + std::to_string(bi) + "/" + std::to_string(ci)};
        return out;
      }
    }
  }
  if (diameter < 1) {
    out.violation = RegularityViolation{0, 0, 0, "graph has no edges"};
    return out;
  }
  std::vector<int> b(b_of.begin(), b_of.end() - 1);
  std::vector<int> c(c_of.begin() + 1, c_of.end());
  try {
    out.array = IntersectionArray(std::move(b), std::move(c));
  } catch (const InvalidArray& e) {
    out.violation = RegularityViolation{0, 0, -1, e.what()};
  }
  return out;
}

struct DistinctEigenvalue {
  double theta = 0;
  int multiplicity = 0;
};

struct BruteforceSpectrum {
  std::vector<DistinctEigenvalue> values;  // decreasing
  bool ambiguous = false;                  // some gap close to the cluster tolerance
  std::string note;
};

inline constexpr double kClusterTolerance = 1e-7;

/**
 * Dense symmetric eigendecomposition of the adjacency matrix; eigenvalues
 * within 1e-7 of their neighbour are merged. A gap in (1e-7, 1e-5] is
 * flagged as ambiguous.
 */
inline BruteforceSpectrum spectrum_bruteforce(const Graph& g) {
  if (g.order() > 4096) throw std::invalid_argument("spectrum_bruteforce limited to 4096 vertices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.adjacency_matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed on " + g.name());
  std::vector<double> eig(solver.eigenvalues().data(), solver.eigenvalues().data() + g.order());
  std::sort(eig.begin(), eig.end(), std::greater<>());
  BruteforceSpectrum out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= eig.size(); ++i) {
    if (i < eig.size()) {
      const double gap = eig[i - 1] - eig[i];
      if (gap <= kClusterTolerance) continue;
      if (gap <= 1e-5) {
        out.ambiguous = true;
        out.note = "eigenvalue gap " + std::to_string(gap) + " near cluster tolerance";
      }
    }
    double sum = 0;
    for (std::size_t j = start; j < i; ++j) sum += eig[j];
    out.values.push_back({sum / static_cast<double>(i - start), static_cast<int>(i - start)});
    start = i;
  }
  return out;
}

/// Length of a shortest odd cycle, or empty when the graph is bipartite.
/// Uses: min over roots r and edges uw with d(r,u) = d(r,w) of 2 d(r,u) + 1.
inline std::optional<int> odd_girth_bruteforce(const Graph& g) {
  std::optional<int> best;
  for (int r = 0; r < g.order(); ++r) {
    const auto dist = bfs_distances(g, r);
    for (int u = 0; u < g.order(); ++u) {
      const int du = dist[static_cast<std::size_t>(u)];
      if (du < 0 || (best && 2 * du + 1 >= *best)) continue;
      for (int w : g.neighbors(u)) {
        if (dist[static_cast<std::size_t>(w)] == du) {
          best = 2 * du + 1;
          break;
        }
      }
    }
  }
  return best;
}

struct AgreementRow {
  std::string quantity;
  std::string oracle;
  std::string derived;
  bool agree = false;
};

struct OracleComparison {
  std::string graph;
  DistanceRegularity regularity;
  std::vector<AgreementRow> rows;

  bool all_agree() const {
    return regularity.ok() && std::all_of(rows.begin(), rows.end(), [](const AgreementRow& r) { return r.agree; });
  }
};

/**
 * Cross-checks a graph against values derived from its intersection array:
 * the array itself (against `expected` when given), eigenvalues to 1e-7,
 * multiplicities as exact integers, and odd girth.
 */
inline OracleComparison compare_with_array(const Graph& g, const std::optional<IntersectionArray>& expected = {}) {
  OracleComparison out;
  out.graph = g.name();
  out.regularity = verify_distance_regular(g);
  if (!out.regularity.ok()) return out;
  const IntersectionArray& arr = *out.regularity.array;
  out.rows.push_back({"intersection_array", arr.str(), expected ? expected->str() : arr.str(), !expected || *expected == arr});

  const auto brute = spectrum_bruteforce(g);
  const auto derived = spectrum<HighReal>(arr);
  std::ostringstream os, ds, om, dm;
  bool thetas_agree = !brute.ambiguous && brute.values.size() == derived.size();
  bool mults_agree = thetas_agree;
  for (std::size_t i = 0; i < derived.size(); ++i) {
    const auto& e = derived.entries[i];
    const double theta = to_double(e.theta);
    ds << (i ? " " : "") << theta;
    dm << (i ? " " : "") << (e.exact_multiplicity ? to_decimal_string(*e.exact_multiplicity) : to_decimal_string(e.multiplicity));
    if (i < brute.values.size() && thetas_agree) {
      thetas_agree = std::abs(brute.values[i].theta - theta) <= kClusterTolerance;
      mults_agree = mults_agree && multiplicity_is_positive_integer(e) &&
                    std::llround(to_double(e.multiplicity)) == brute.values[i].multiplicity;
    }
  }
  for (std::size_t i = 0; i < brute.values.size(); ++i) {
    os << (i ? " " : "") << brute.values[i].theta;
    om << (i ? " " : "") << brute.values[i].multiplicity;
  }
  out.rows.push_back({"eigenvalues", os.str(), ds.str(), thetas_agree});
  out.rows.push_back({"multiplicities", om.str(), dm.str(), thetas_agree && mults_agree});

  auto girth_text = [](const std::optional<int>& g) { return g ? std::to_string(*g) : std::string("bipartite"); };
  const auto og = odd_girth_bruteforce(g);
  const auto oa = odd_girth_of_array(arr);
  out.rows.push_back({"odd_girth", girth_text(og), girth_text(oa), og == oa});
  return out;
}

}  // namespace drgf::oracle
