#pragma once

#include "drgf/core.hpp"
#include "drgf/numeric.hpp"
#include "drgf/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace drgf {

// Tridiagonal intersection matrix L: diagonal a_i, superdiagonal b_i,
// subdiagonal c_{i+1}.
struct IntersectionMatrix {
  std::vector<int> diag;   // a_0..a_D
  std::vector<int> super;  // b_0..b_{D-1}
  std::vector<int> sub;    // c_1..c_D

  int order() const { return static_cast<int>(diag.size()); }

  int at(int row, int col) const {
    if (row == col) return diag[static_cast<std::size_t>(row)];
    if (col == row + 1) return super[static_cast<std::size_t>(row)];
    if (row == col + 1) return sub[static_cast<std::size_t>(col)];
    return 0;
  }
};

inline IntersectionMatrix intersection_matrix(const IntersectionArray& arr) {
  IntersectionMatrix m;
  const int d = arr.diameter();
  for (int i = 0; i <= d; ++i) m.diag.push_back(arr.a(i));
  for (int i = 0; i < d; ++i) {
    m.super.push_back(arr.b(i));
    m.sub.push_back(arr.c(i + 1));
  }
  return m;
}

// det(xI - L), exact.
inline IntPolynomial characteristic_polynomial(const IntersectionArray& arr) {
  IntPolynomial prev{{Integer(1)}};
  IntPolynomial cur{{Integer(-arr.a(0)), Integer(1)}};
  for (int i = 1; i <= arr.diameter(); ++i) {
    const Integer coupling = Integer(arr.b(i - 1)) * arr.c(i);
    IntPolynomial next;
    next.coeffs.assign(cur.coeffs.size() + 1, Integer(0));
    for (std::size_t j = 0; j < cur.coeffs.size(); ++j) {
      next.coeffs[j + 1] += cur.coeffs[j];
      next.coeffs[j] -= cur.coeffs[j] * arr.a(i);
    }
    for (std::size_t j = 0; j < prev.coeffs.size(); ++j) next.coeffs[j] -= coupling * prev.coeffs[j];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// tr(L^2) = sum a_i^2 + 2 sum b_i c_{i+1}.
inline Integer trace_of_square(const IntersectionArray& arr) {
  Integer tr = 0;
  for (int i = 0; i <= arr.diameter(); ++i) tr += Integer(arr.a(i)) * arr.a(i);
  for (int i = 0; i < arr.diameter(); ++i) tr += 2 * Integer(arr.b(i)) * arr.c(i + 1);
  return tr;
}

namespace detail {

template <class Real>
Real bisection_tolerance(int valency) {
  if constexpr (std::is_floating_point_v<Real>) {
    return Real(1e-12) * std::max(1, valency / 16);
  } else {
    // A few guard digits below the working precision.
    return pow(Real(10), -Real(static_cast<int>(HighReal::default_precision()) - 5)) * valency;
  }
}

// Number of eigenvalues of L strictly below x, from the pivots of the
// LDL^T factorisation of T - xI, T the symmetric tridiagonal matrix
// diagonally similar to L (off-diagonal sqrt(b_i c_{i+1})).
template <class Real>
int tridiagonal_count_below(const std::vector<Real>& diag, const std::vector<Real>& offdiag_sq, const Real& x) {
  int count = 0;
  Real q = diag[0] - x;
  const Real tiny = epsilon<Real>() * epsilon<Real>();
  for (std::size_t i = 0;; ++i) {
    if (q == 0) q = -tiny;
    if (q < 0) ++count;
    if (i + 1 == diag.size()) break;
    q = (diag[i + 1] - x) - offdiag_sq[i] / q;
  }
  return count;
}

// Sign changes of a Sturm chain at x (zeros skipped).
template <class Real>
int sign_changes(const std::vector<RealPolynomial<Real>>& chain, const Real& x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : chain) {
    const Real value = p.value(x);
    const int s = value > 0 ? 1 : (value < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

// Bisection for the eigenvalue with `index` eigenvalues strictly below it,
// given count_below(x). Returns the final enclosure [lo, hi].
template <class Real, class CountBelow>
std::pair<Real, Real> bisect_eigenvalue(int index, Real lo, Real hi, const Real& tol, CountBelow&& count_below) {
  while (hi - lo > tol) {
    Real mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    if (count_below(mid) <= index) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

// Newton steps on the characteristic polynomial, kept inside [lo, hi].
template <class Real>
Real newton_polish(const RealPolynomial<Real>& p, Real x, const Real& lo, const Real& hi) {
  for (int iter = 0; iter < 8; ++iter) {
    const Real slope = p.slope(x);
    if (slope == 0) break;
    Real next = x - p.value(x) / slope;
    if (!(next >= lo && next <= hi)) break;
    if (next == x) break;
    x = next;
  }
  return x;
}

}  // namespace detail

template <class Real>
struct EigenvalueEnclosure {
  Real value;
  Real lower;
  Real upper;
};

/**
 * Eigenvalues of L, strictly decreasing, by Sturm-count bisection on the
 * symmetrised tridiagonal form followed by Newton polish on the exact
 * characteristic polynomial. Throws NumericalError if two eigenvalues cannot
 * be separated at the working precision.
 */
template <class Real>
std::vector<EigenvalueEnclosure<Real>> eigenvalue_enclosures(const IntersectionArray& arr) {
  const int n = arr.diameter() + 1;
  const int k = arr.valency();
  std::vector<Real> diag;
  std::vector<Real> offdiag_sq;
  for (int i = 0; i < n; ++i) diag.push_back(Real(arr.a(i)));
  for (int i = 0; i + 1 < n; ++i) offdiag_sq.push_back(Real(arr.b(i)) * Real(arr.c(i + 1)));
  const RealPolynomial<Real> charpoly(characteristic_polynomial(arr));
  const Real tol = detail::bisection_tolerance<Real>(k);
  auto count = [&](const Real& x) { return detail::tridiagonal_count_below(diag, offdiag_sq, x); };

  std::vector<EigenvalueEnclosure<Real>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int index = n - 1 - j;  // eigenvalues below theta_j
    auto [lo, hi] = detail::bisect_eigenvalue<Real>(index, Real(-k - 1), Real(k + 1), tol, count);
    Real value = detail::newton_polish(charpoly, Real((lo + hi) / 2), lo, hi);
    out.push_back({value, lo, hi});
  }
  for (std::size_t j = 1; j < out.size(); ++j) {
    if (!(out[j].upper < out[j - 1].lower) && !(out[j].value < out[j - 1].value - tol)) {
      throw NumericalError("eigenvalues " + std::to_string(j - 1) + " and " + std::to_string(j) + " of " +
                           arr.str() + " not separated at working precision");
    }
  }
  return out;
}

template <class Real>
std::vector<Real> eigenvalues(const IntersectionArray& arr) {
  std::vector<Real> out;
  for (auto& e : eigenvalue_enclosures<Real>(arr)) out.push_back(std::move(e.value));
  return out;
}

// Second route: bisection driven by the classical Sturm chain of the
// characteristic polynomial. Independent of the tridiagonal pivots.
template <class Real>
std::vector<Real> eigenvalues_by_sturm_chain(const IntersectionArray& arr) {
  const int n = arr.diameter() + 1;
  const int k = arr.valency();
  std::vector<RealPolynomial<Real>> chain;
  for (const auto& p : sturm_chain(characteristic_polynomial(arr))) chain.emplace_back(p);
  const Real left(-k - 1);
  const int changes_left = detail::sign_changes(chain, left);
  auto count = [&](const Real& x) { return changes_left - detail::sign_changes(chain, x); };
  const Real tol = detail::bisection_tolerance<Real>(k);
  std::vector<Real> out;
  for (int j = 0; j < n; ++j) {
    auto [lo, hi] = detail::bisect_eigenvalue<Real>(n - 1 - j, left, Real(k + 1), tol, count);
    out.push_back((lo + hi) / 2);
  }
  return out;
}

// Smallest eigenvalue only; the hot path of the enumeration.
template <class Real>
Real smallest_eigenvalue(const IntersectionArray& arr) {
  const int n = arr.diameter() + 1;
  std::vector<Real> diag;
  std::vector<Real> offdiag_sq;
  for (int i = 0; i < n; ++i) diag.push_back(Real(arr.a(i)));
  for (int i = 0; i + 1 < n; ++i) offdiag_sq.push_back(Real(arr.b(i)) * Real(arr.c(i + 1)));
  auto count = [&](const Real& x) { return detail::tridiagonal_count_below(diag, offdiag_sq, x); };
  const int k = arr.valency();
  auto [lo, hi] = detail::bisect_eigenvalue<Real>(0, Real(-k - 1), Real(k + 1), detail::bisection_tolerance<Real>(k), count);
  return (lo + hi) / 2;
}

/// Standard (cosine) sequence u_0..u_D of theta. T is a floating type or
/// Rational.
template <class T>
struct StandardSequence {
  T theta;
  std::vector<T> u;
};

template <class T>
StandardSequence<T> standard_sequence(const IntersectionArray& arr, const T& theta) {
  const int k = arr.valency();
  if (theta > T(k) || theta < T(-k)) {
    throw std::invalid_argument("theta outside [-k, k] for " + arr.str());
  }
  StandardSequence<T> seq{theta, {}};
  seq.u.reserve(static_cast<std::size_t>(arr.diameter() + 1));
  seq.u.push_back(T(1));
  seq.u.push_back(theta / T(k));
  for (int j = 1; j < arr.diameter(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    seq.u.push_back(((theta - T(arr.a(j))) * seq.u[uj] - T(arr.c(j)) * seq.u[uj - 1]) / T(arr.b(j)));
  }
  return seq;
}

// c_D u_{D-1} + a_D u_D - theta u_D; zero exactly at eigenvalues.
template <class T>
T terminal_residual(const IntersectionArray& arr, const StandardSequence<T>& seq) {
  const int d = arr.diameter();
  const auto ud = static_cast<std::size_t>(d);
  return T(arr.c(d)) * seq.u[ud - 1] + (T(arr.a(d)) - seq.theta) * seq.u[ud];
}

inline constexpr double kEigenResidualTolerance = 1e-8;

// Biggs: m = v / sum k_i u_i^2.
template <class T>
T biggs_multiplicity(const DerivedParameters& params, const StandardSequence<T>& seq) {
  T denom = 0;
  for (std::size_t i = 0; i < seq.u.size(); ++i) {
    if constexpr (std::is_same_v<T, Rational>) {
      denom += params.kseq[i] * seq.u[i] * seq.u[i];
    } else {
      denom += to_real<T>(params.kseq[i]) * seq.u[i] * seq.u[i];
    }
  }
  if constexpr (std::is_same_v<T, Rational>) {
    return params.v / denom;
  } else {
    return to_real<T>(params.v) / denom;
  }
}

template <class T>
T multiplicity(const IntersectionArray& arr, const T& theta) {
  auto seq = standard_sequence(arr, theta);
  using std::abs;
  const T residual = terminal_residual(arr, seq);
  if constexpr (std::is_same_v<T, Rational>) {
    if (residual != 0) throw std::invalid_argument(to_decimal_string(theta) + " is not an eigenvalue of " + arr.str());
  } else {
    if (abs(residual) > T(kEigenResidualTolerance)) {
      throw std::invalid_argument(to_decimal_string(theta) + " is not an eigenvalue of " + arr.str());
    }
  }
  return biggs_multiplicity(derive_parameters(arr), seq);
}

template <class Real>
struct SpectrumEntry {
  Real theta;
  Real lower;  // certified enclosure of theta
  Real upper;
  std::optional<Integer> exact_theta;  // set when theta is an integer
  Real multiplicity;
  std::optional<Rational> exact_multiplicity;

  bool exact() const { return exact_theta.has_value(); }
};

/// Distinct eigenvalues theta_0 > ... > theta_D of L with Biggs multiplicities.
template <class Real>
struct Spectrum {
  std::vector<SpectrumEntry<Real>> entries;

  const SpectrumEntry<Real>& max() const { return entries.front(); }
  const SpectrumEntry<Real>& min() const { return entries.back(); }
  std::size_t size() const { return entries.size(); }

  std::vector<Real> thetas() const {
    std::vector<Real> out;
    for (const auto& e : entries) out.push_back(e.theta);
    return out;
  }

  nlohmann::ordered_json to_json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
      nlohmann::ordered_json j;
      j["theta"] = e.exact_theta ? e.exact_theta->str() : to_decimal_string(e.theta);
      j["multiplicity"] = e.exact_multiplicity ? to_decimal_string(*e.exact_multiplicity)
                                               : to_decimal_string(e.multiplicity);
      j["exact"] = e.exact();
      arr.push_back(std::move(j));
    }
    return arr;
  }
};

/**
 * Full spectrum of L. Integer eigenvalues (the only rational ones, L having a
 * monic integer characteristic polynomial) are detected exactly and receive
 * exact standard sequences and multiplicities.
 */
template <class Real>
Spectrum<Real> spectrum(const IntersectionArray& arr, const DerivedParameters& params) {
  const IntPolynomial charpoly = characteristic_polynomial(arr);
  Spectrum<Real> out;
  using std::abs;
  using std::round;
  for (auto& enc : eigenvalue_enclosures<Real>(arr)) {
    SpectrumEntry<Real> entry{enc.value, enc.lower, enc.upper, std::nullopt, Real(0), std::nullopt};
    const long long nearest = std::llround(to_double(enc.value));
    if (abs(enc.value - Real(nearest)) < Real(1e-6)) {
      const Integer candidate(nearest);
      if (charpoly(candidate) == 0) entry.exact_theta = candidate;
    }
    if (entry.exact_theta) {
      entry.theta = to_real<Real>(*entry.exact_theta);
      auto seq = standard_sequence(arr, Rational(*entry.exact_theta));
      entry.exact_multiplicity = biggs_multiplicity(params, seq);
      entry.multiplicity = to_real<Real>(*entry.exact_multiplicity);
    } else {
      entry.multiplicity = biggs_multiplicity(params, standard_sequence(arr, entry.theta));
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

template <class Real>
Spectrum<Real> spectrum(const IntersectionArray& arr) {
  return spectrum<Real>(arr, derive_parameters(arr));
}

inline constexpr double kMultiplicityTolerance = 1e-6;

// |m - round(m)| < 1e-6 max(1, m) and round(m) >= 1.
template <class Real>
bool multiplicity_is_positive_integer(const SpectrumEntry<Real>& e) {
  if (e.exact_multiplicity) return denominator(*e.exact_multiplicity) == 1 && *e.exact_multiplicity >= 1;
  using std::abs;
  using std::round;
  const Real m = e.multiplicity;
  const Real r = round(m);
  return r >= 1 && abs(m - r) < Real(kMultiplicityTolerance) * (m > 1 ? m : Real(1));
}

/**
 * Upper bound on the multiplicity of theta from its standard sequence:
 *
 *   max{ 1/u_1^2, ..., 1/u_{j-1}^2, (k_j + ... + k_D) / (k_j u_j^2) }.
 *
 * Requires 1 <= j <= D and u_j != 0.
 */
template <class Real>
Real multiplicity_upper_bound(const IntersectionArray& arr, const StandardSequence<Real>& seq, int j) {
  if (j < 1 || j > arr.diameter()) throw std::invalid_argument("index j out of range [1, D]");
  const auto uj = static_cast<std::size_t>(j);
  if (seq.u[uj] == 0) throw std::invalid_argument("u_j is zero");
  const auto params = derive_parameters(arr);
  Real best = 0;
  for (std::size_t i = 1; i < uj; ++i) {
    if (seq.u[i] == 0) return std::numeric_limits<Real>::infinity();
    best = std::max<Real>(best, Real(1) / (seq.u[i] * seq.u[i]));
  }
  Rational tail = 0;
  for (std::size_t i = uj; i < params.kseq.size(); ++i) tail += params.kseq[i];
  const Real tail_term = to_real<Real>(tail / params.kseq[uj]) / (seq.u[uj] * seq.u[uj]);
  return std::max<Real>(best, tail_term);
}

// Same bound from lower bounds on |u_1|..|u_j| (abs_u[0] = |u_0| is ignored)
// and an upper bound on (k_j + ... + k_D) / k_j.
inline double multiplicity_bound_from_constants(std::span<const double> abs_u, double tail_factor) {
  if (abs_u.size() < 2) throw std::invalid_argument("need |u_1| at least");
  double best = 0;
  const std::size_t j = abs_u.size() - 1;
  for (std::size_t i = 1; i < j; ++i) best = std::max(best, 1.0 / (abs_u[i] * abs_u[i]));
  return std::max(best, tail_factor / (abs_u[j] * abs_u[j]));
}

/// Upper bound c_i <= constant + per_valency * k.
struct CUpperBound {
  double constant = 0;
  double per_valency = 0;
};

struct AbsUQuery {
  int k_min = 2;
  double ratio_lo = -1.0;  // theta/k ranges over [ratio_lo, ratio_hi]
  double ratio_hi = -0.5;
  std::vector<int> a;                // a_0..a_{depth-1}
  std::vector<CUpperBound> c_upper;  // entry i bounds c_i, i = 1..depth-1; entry 0 unused
  int depth = 3;                     // bounds |u_0|..|u_depth|
  int grid = 1024;
};

struct AbsUBounds {
  std::vector<double> lower;  // |u_0|..|u_depth|
  bool monotone = true;       // minimum at (k_min, ratio_hi) for every index
  std::vector<std::string> notes;
};

namespace detail {

// Lower bounds on |u_i| at one (k, theta/k) point for theta = theta_min. kinv
// is 1/k, zero for the k -> infinity limit. Everything is scaled by 1/k.
inline std::vector<double> abs_u_pointwise(const AbsUQuery& q, double kinv, double ratio) {
  const double y = std::abs(ratio);
  auto a_at = [&](int i) { return i < static_cast<int>(q.a.size()) ? q.a[static_cast<std::size_t>(i)] : 0; };
  std::vector<double> lower{1.0, y};
  std::vector<double> upper{1.0, y};
  for (int i = 1; i < q.depth; ++i) {
    const double shift = y + a_at(i) * kinv;  // |theta - a_i| / k
    double c_lo = kinv;                       // c_i >= 1
    double c_hi = kinv;
    if (i >= 2 && i < static_cast<int>(q.c_upper.size())) {
      const auto& cu = q.c_upper[static_cast<std::size_t>(i)];
      c_hi = std::max(c_lo, cu.constant * kinv + cu.per_valency);
    } else if (i >= 2) {
      c_hi = 1.0;
    }
    const double prev_upper = upper[static_cast<std::size_t>(i - 1)];
    const double cur_lower = lower[static_cast<std::size_t>(i)];
    auto at_c = [&](double c) {
      const double b = 1.0 - c - a_at(i) * kinv;
      if (b <= 0) return 0.0;
      return std::max(0.0, (shift * cur_lower - c * prev_upper) / b);
    };
    // The bound is a Moebius function of c: extremes at the endpoints.
    const double next = std::min(at_c(c_lo), at_c(c_hi));
    lower.push_back(next);
    // |u_2| is exact (c_1 = 1 known); beyond that only |u| <= 1 is used.
    upper.push_back(i == 1 ? next : 1.0);
  }
  return lower;
}

}  // namespace detail

/**
 * Worst-case lower bounds on |u_i| for the standard sequence of theta_min,
 * by the recursion |u_{i+1}| >= (|theta - a_i||u_i| - c_i|u_{i-1}|) / b_i.
 * Minimised over a grid of theta/k and of k >= k_min including the
 * k -> infinity limit; `monotone` reports whether the minimum sits at
 * (k_min, ratio_hi) as assumed by evaluating at the boundary.
 */
inline AbsUBounds abs_u_lower_bounds(const AbsUQuery& q) {
  if (q.depth < 1) throw std::invalid_argument("depth must be positive");
  if (q.ratio_lo > q.ratio_hi || q.ratio_lo < -1.0) throw std::invalid_argument("bad theta ratio range");
  std::vector<double> kinvs;
  for (int k = q.k_min; k < q.k_min + 64; ++k) kinvs.push_back(1.0 / k);
  for (double k = q.k_min + 64; k < 1e7; k *= 1.5) kinvs.push_back(1.0 / k);
  kinvs.push_back(0.0);

  AbsUBounds out;
  const auto anchor = detail::abs_u_pointwise(q, 1.0 / q.k_min, q.ratio_hi);
  out.lower = anchor;
  const int grid = std::max(2, q.grid);
  for (double kinv : kinvs) {
    for (int g = 0; g < grid; ++g) {
      const double ratio = q.ratio_lo + (q.ratio_hi - q.ratio_lo) * g / (grid - 1);
      const auto point = detail::abs_u_pointwise(q, kinv, ratio);
      for (std::size_t i = 0; i < point.size(); ++i) {
        if (point[i] < out.lower[i]) {
          if (point[i] < anchor[i] - 1e-12 && out.monotone) {
            out.monotone = false;
            out.notes.push_back("|u_" + std::to_string(i) + "| bound smaller away from the boundary point (k=" +
                                (kinv == 0 ? std::string("inf") : std::to_string(1.0 / kinv)) +
                                ", theta/k=" + std::to_string(ratio) + ")");
          }
          out.lower[i] = point[i];
        }
      }
    }
  }
  return out;
}

template <class Real>
struct TraceCheck {
  Integer trace;  // tr(L^2)
  Real lhs;       // k^2 + theta^2
  Real slack;     // trace - lhs
};

// k^2 + theta_min^2 <= tr(L^2).
template <class Real>
TraceCheck<Real> trace_square_check(const IntersectionArray& arr, const Real& theta_min) {
  TraceCheck<Real> out;
  out.trace = trace_of_square(arr);
  const Real k(arr.valency());
  out.lhs = k * k + theta_min * theta_min;
  out.slack = to_real<Real>(out.trace) - out.lhs;
  return out;
}

/// Cap on tr(L^2) of the form k^2 + linear*k + cross*k*c - square*c^2,
/// c the last intersection number c_D.
struct TraceCap {
  double linear = 6;
  double cross = 2;
  double square = 1;

  double value(double k, double c) const { return k * k + linear * k + cross * k * c - square * c * c; }
};

// Caps for a_1 = ... = a_{D-1} = 0, c_2 <= 2 and monotone c.
inline TraceCap trace_cap_for_diameter(int diameter) {
  if (diameter == 4) return {6, 2, 1};
  if (diameter == 5) return {6, 4, 1};
  throw std::invalid_argument("trace cap known only for D = 4, 5");
}

/**
 * Smallest c_D/k compatible with k^2 + theta^2 <= cap(k, c_D) when
 * theta = ratio*k. Returns +infinity when no c_D works, 0 when every c_D does.
 */
inline double implied_last_c_ratio(double k, double theta_ratio, const TraceCap& cap) {
  const double constant = theta_ratio * theta_ratio - cap.linear / k;
  if (constant <= 0) return 0.0;
  const double disc = cap.cross * cap.cross - 4 * cap.square * constant;
  if (disc < 0) return std::numeric_limits<double>::infinity();
  return (cap.cross - std::sqrt(disc)) / (2 * cap.square);
}

}  // namespace drgf
