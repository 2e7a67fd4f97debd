#pragma once

#include "drgf/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <compare>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace drgf {

class InvalidArray : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Intersection array {b_0,...,b_{D-1}; c_1,...,c_D} of a putative
 * distance-regular graph.
 *
 * Construction enforces c_1 = 1, b_i >= 1, c_i >= 1 and
 * a_i = k - b_i - c_i >= 0. Monotonicity of b and c is NOT enforced here;
 * it is one of the feasibility conditions.
 */
class IntersectionArray {
 public:
  IntersectionArray(std::vector<int> b, std::vector<int> c) : b_(std::move(b)), c_(std::move(c)) {
    validate();
  }

  int diameter() const { return static_cast<int>(b_.size()); }
  int valency() const { return b_.front(); }

  // b_i for 0 <= i <= D, with b_D = 0.
  int b(int i) const { return i < diameter() ? b_[static_cast<std::size_t>(i)] : 0; }
  // c_i for 0 <= i <= D, with c_0 = 0.
  int c(int i) const { return i == 0 ? 0 : c_[static_cast<std::size_t>(i - 1)]; }
  int a(int i) const { return valency() - b(i) - c(i); }

  std::span<const int> b_values() const { return b_; }
  std::span<const int> c_values() const { return c_; }

  // Canonical text form, no spaces.
  std::string str() const {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < b_.size(); ++i) out << (i ? "," : "") << b_[i];
    out << ';';
    for (std::size_t i = 0; i < c_.size(); ++i) out << (i ? "," : "") << c_[i];
    out << '}';
    return out.str();
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["b"] = b_;
    j["c"] = c_;
    return j;
  }

  friend bool operator==(const IntersectionArray&, const IntersectionArray&) = default;

  // Ordered by (k, c-sequence, b-sequence), the enumeration output order.
  friend std::strong_ordering operator<=>(const IntersectionArray& x, const IntersectionArray& y) {
    if (auto cmp = x.diameter() <=> y.diameter(); cmp != 0) return cmp;
    if (auto cmp = x.valency() <=> y.valency(); cmp != 0) return cmp;
    if (auto cmp = x.c_ <=> y.c_; cmp != 0) return cmp;
    return x.b_ <=> y.b_;
  }

 private:
  void validate() const {
    if (b_.empty() || b_.size() != c_.size()) {
      throw InvalidArray("intersection array needs D >= 1 entries in both b and c, got " +
                         std::to_string(b_.size()) + " and " + std::to_string(c_.size()));
    }
    if (c_.front() != 1) throw InvalidArray("c_1 must be 1, got " + std::to_string(c_.front()));
    for (int i = 0; i < diameter(); ++i) {
      if (b(i) < 1) throw InvalidArray("b_" + std::to_string(i) + " must be positive");
      if (c(i + 1) < 1) throw InvalidArray("c_" + std::to_string(i + 1) + " must be positive");
    }
    for (int i = 0; i <= diameter(); ++i) {
      if (a(i) < 0) {
        throw InvalidArray("a_" + std::to_string(i) + " = " + std::to_string(a(i)) + " is negative");
      }
    }
  }

  std::vector<int> b_;
  std::vector<int> c_;
};

namespace detail {

inline std::vector<int> parse_int_list(std::string_view text, std::string_view whole) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (true) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc{}) {
      throw InvalidArray("malformed intersection array '" + std::string(whole) + "'");
    }
    out.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos == text.size()) break;
    if (text[pos] != ',') throw InvalidArray("malformed intersection array '" + std::string(whole) + "'");
    ++pos;
  }
  return out;
}

}  // namespace detail

// Parses "{b0,...,b_{D-1};c1,...,cD}"; spaces and tabs are tolerated.
inline IntersectionArray parse_array(std::string_view text) {
  std::string compact;
  for (char ch : text) {
    if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
    compact.push_back(ch);
  }
  std::string_view s(compact);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') {
    throw InvalidArray("intersection array must be enclosed in braces: '" + std::string(text) + "'");
  }
  s = s.substr(1, s.size() - 2);
  auto semi = s.find(';');
  if (semi == std::string_view::npos || s.find(';', semi + 1) != std::string_view::npos) {
    throw InvalidArray("intersection array needs exactly one ';': '" + std::string(text) + "'");
  }
  return IntersectionArray(detail::parse_int_list(s.substr(0, semi), text),
                           detail::parse_int_list(s.substr(semi + 1), text));
}

inline IntersectionArray array_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("b") || !j.contains("c")) {
    throw InvalidArray("intersection array JSON needs fields \"b\" and \"c\"");
  }
  try {
    return IntersectionArray(j.at("b").get<std::vector<int>>(), j.at("c").get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArray(std::string("intersection array JSON: ") + e.what());
  }
}

struct DerivedParameters {
  std::vector<int> a;            // a_0..a_D
  std::vector<Rational> kseq;    // k_0..k_D, exact
  Rational v;                    // sum of k_i
  bool k_integral = true;        // every k_i is an integer
  std::optional<int> t;          // min{i : a_i != 0}; empty when bipartite
  std::optional<int> odd_girth;  // 2t + 1

  bool bipartite() const { return !t.has_value(); }
};

inline DerivedParameters derive_parameters(const IntersectionArray& arr) {
  DerivedParameters p;
  const int d = arr.diameter();
  p.a.reserve(static_cast<std::size_t>(d + 1));
  p.kseq.reserve(static_cast<std::size_t>(d + 1));
  p.kseq.emplace_back(1);
  p.v = 1;
  for (int i = 0; i <= d; ++i) {
    p.a.push_back(arr.a(i));
    if (!p.t && arr.a(i) != 0) p.t = i;
  }
  for (int i = 1; i <= d; ++i) {
    Rational ki = p.kseq.back() * arr.b(i - 1) / arr.c(i);
    if (denominator(ki) != 1) p.k_integral = false;
    p.v += ki;
    p.kseq.push_back(std::move(ki));
  }
  if (p.t) p.odd_girth = 2 * *p.t + 1;
  return p;
}

// Odd girth read off the array (g = 2t + 1, t the first index with a_t != 0);
// empty for bipartite arrays.
inline std::optional<int> odd_girth_of_array(const IntersectionArray& arr) {
  for (int i = 1; i <= arr.diameter(); ++i) {
    if (arr.a(i) != 0) return 2 * i + 1;
  }
  return std::nullopt;
}

}  // namespace drgf
