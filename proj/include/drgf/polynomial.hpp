#pragma once

#include "drgf/numeric.hpp"

#include <numeric>
#include <vector>

namespace drgf {

// Dense univariate polynomial, coefficients from the constant term upward.
template <class Coeff>
struct Polynomial {
  std::vector<Coeff> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool is_zero() const { return coeffs.empty(); }
  const Coeff& leading() const { return coeffs.back(); }

  void trim() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  }

  template <class T>
  T operator()(const T& x) const {
    T acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + T(*it);
    return acc;
  }

  Polynomial derivative() const {
    Polynomial d;
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(coeffs[i] * static_cast<int>(i));
    d.trim();
    return d;
  }
};

using IntPolynomial = Polynomial<Integer>;

// Horner evaluation of an integer polynomial in floating arithmetic, with
// coefficients converted once.
template <class Real>
class RealPolynomial {
 public:
  explicit RealPolynomial(const IntPolynomial& p) {
    coeffs_.reserve(p.coeffs.size());
    for (const auto& c : p.coeffs) coeffs_.push_back(to_real<Real>(c));
    for (std::size_t i = 1; i < coeffs_.size(); ++i) deriv_.push_back(coeffs_[i] * Real(static_cast<int>(i)));
  }

  Real value(const Real& x) const { return horner(coeffs_, x); }
  Real slope(const Real& x) const { return horner(deriv_, x); }

 private:
  static Real horner(const std::vector<Real>& c, const Real& x) {
    Real acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  std::vector<Real> coeffs_;
  std::vector<Real> deriv_;
};

namespace detail {

inline Polynomial<Rational> to_rational(const IntPolynomial& p) {
  Polynomial<Rational> r;
  for (const auto& c : p.coeffs) r.coeffs.emplace_back(c);
  return r;
}

// Remainder of num / den over the rationals.
inline Polynomial<Rational> remainder(Polynomial<Rational> num, const Polynomial<Rational>& den) {
  const int dd = den.degree();
  while (!num.is_zero() && num.degree() >= dd) {
    Rational factor = num.leading() / den.leading();
    const int shift = num.degree() - dd;
    for (int i = 0; i <= dd; ++i) {
      num.coeffs[static_cast<std::size_t>(i + shift)] -= factor * den.coeffs[static_cast<std::size_t>(i)];
    }
    num.coeffs.pop_back();
    num.trim();
  }
  return num;
}

// Positive multiple of p with coprime integer coefficients; signs preserved.
inline IntPolynomial primitive_part(const Polynomial<Rational>& p) {
  Integer lcm_den = 1;
  for (const auto& c : p.coeffs) lcm_den = boost::multiprecision::lcm(lcm_den, denominator(c));
  IntPolynomial out;
  Integer g = 0;
  for (const auto& c : p.coeffs) {
    Integer v = numerator(c) * (lcm_den / denominator(c));
    g = boost::multiprecision::gcd(g, v);
    out.coeffs.push_back(std::move(v));
  }
  if (g > 1) {
    for (auto& c : out.coeffs) c /= g;
  }
  return out;
}

}  // namespace detail

// Classical Sturm chain p, p', -rem(...), ... scaled to integer coefficients.
inline std::vector<IntPolynomial> sturm_chain(const IntPolynomial& p) {
  std::vector<Polynomial<Rational>> chain;
  chain.push_back(detail::to_rational(p));
  chain.push_back(detail::to_rational(p.derivative()));
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    auto r = detail::remainder(chain[chain.size() - 2], chain.back());
    for (auto& c : r.coeffs) c = -c;
    if (r.is_zero()) break;
    chain.push_back(std::move(r));
  }
  std::vector<IntPolynomial> out;
  for (const auto& q : chain) {
    if (!q.is_zero()) out.push_back(detail::primitive_part(q));
  }
  return out;
}

}  // namespace drgf
