#pragma once

#include "drgf/feasibility.hpp"
#include "drgf/numeric.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace drgf {

// How the constants N_i in |u_i - (theta/k)^i| <= N_i zeta are chosen.
enum class ScheduleMode {
  paper_general,  // N_0 = N_1 = 0, N_i = 2 N_{i-1} + 4
  sharp_g5,       // g = 5 only: N_2 = 2 / (1 - zeta)
};

inline std::string_view to_string(ScheduleMode m) {
  return m == ScheduleMode::paper_general ? "paper-general" : "sharp-g5";
}

inline ScheduleMode parse_schedule_mode(std::string_view text) {
  if (text == "paper-general") return ScheduleMode::paper_general;
  if (text == "sharp-g5") return ScheduleMode::sharp_g5;
  throw std::invalid_argument("unknown schedule mode '" + std::string(text) + "'");
}

inline void require_odd_girth(int g, int minimum) {
  if (g < minimum || g % 2 == 0) {
    throw std::invalid_argument("odd girth must be odd and >= " + std::to_string(minimum) + ", got " +
                                std::to_string(g));
  }
}

/// f(x, y) = sum_{i=0}^t p_i(x) y^i, evaluated through the p_i recurrence.
template <class Real>
Real f_poly(const Real& x, const Real& y, int t) {
  const auto p = p_polynomials(t, x);
  Real acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * y + *it;
  return acc;
}

// d/dy f(x, y).
template <class Real>
Real f_poly_dy(const Real& x, const Real& y, int t) {
  const auto p = p_polynomials(t, x);
  Real acc = 0;
  for (int i = t; i >= 1; --i) acc = acc * y + Real(i) * p[static_cast<std::size_t>(i)];
  return acc;
}

// f(2cos(2 pi j/g), -1) in closed form: (-1)^{t+j} / cos(j pi / g).
template <class Real>
Real f_closed_form_at_minus_one(int g, int j) {
  using std::cos;
  const int t = (g - 1) / 2;
  const Real sign = (t + j) % 2 == 0 ? Real(1) : Real(-1);
  return sign / cos(Real(j) * pi<Real>() / Real(g));
}

template <class Real>
struct BoundParameters {
  int g = 0;
  int t = 0;
  Real zeta = 0;
  ScheduleMode mode = ScheduleMode::paper_general;
  std::vector<Real> N;  // N_0..N_t
  Real M1 = 0;          // sum 2 N_i
  Real M2 = 0;          // 1 / cos((t-1) pi / g)
  Real eta = 0;         // 2 cos(2 pi (t-1) / g)
  std::optional<Real> root;      // smallest root of f(eta, y) + M1 zeta in (-1, 0)
  std::optional<Real> epsilon1;  // 1 - |root|
};

template <class Real>
std::vector<Real> n_schedule(int t, ScheduleMode mode, const Real& zeta) {
  std::vector<Real> n(static_cast<std::size_t>(t + 1), Real(0));
  if (mode == ScheduleMode::sharp_g5) {
    if (t != 2) throw std::invalid_argument("sharp-g5 schedule applies to g = 5 only");
    n[2] = Real(2) / (Real(1) - zeta);
    return n;
  }
  for (int i = 2; i <= t; ++i) n[static_cast<std::size_t>(i)] = Real(2) * n[static_cast<std::size_t>(i - 1)] + Real(4);
  return n;
}

template <class Real>
BoundParameters<Real> bound_parameters(int g, const Real& zeta, ScheduleMode mode) {
  require_odd_girth(g, 5);
  if (!(zeta >= Real(0) && zeta <= Real(0.5))) throw std::invalid_argument("zeta must lie in [0, 1/2]");
  using std::cos;
  BoundParameters<Real> bp;
  bp.g = g;
  bp.t = (g - 1) / 2;
  bp.zeta = zeta;
  bp.mode = mode;
  bp.N = n_schedule(bp.t, mode, zeta);
  for (const auto& n : bp.N) bp.M1 += Real(2) * n;
  bp.M2 = Real(1) / cos(Real(bp.t - 1) * pi<Real>() / Real(g));
  bp.eta = Real(2) * cos(Real(2) * pi<Real>() * Real(bp.t - 1) / Real(g));
  return bp;
}

/// zeta* = min{M2 / (2 M1), 1/2}. In sharp-g5 mode M1 depends on zeta and
/// zeta* is the fixed point zeta = M2 (1 - zeta) / 8, i.e. M2 / (8 + M2).
template <class Real>
Real zeta_star(int g, ScheduleMode mode) {
  require_odd_girth(g, 5);
  const Real half(0.5);
  auto bp = bound_parameters<Real>(g, Real(0), mode);
  if (mode == ScheduleMode::sharp_g5) return std::min<Real>(bp.M2 / (Real(8) + bp.M2), half);
  if (bp.M1 == 0) return half;
  return std::min<Real>(bp.M2 / (Real(2) * bp.M1), half);
}

namespace detail {

template <class Real>
Real root_tolerance() {
  if constexpr (std::is_floating_point_v<Real>) {
    return Real(1e-12);
  } else {
    return std::min<Real>(Real(1e-12), epsilon<Real>() * Real(64));
  }
}

// Smallest root in (-1, 0) of h: leftmost sign change on a grid, then
// bisection and Newton polish.
template <class Real, class H, class DH>
std::optional<Real> smallest_root_in_open_unit(const H& h, const DH& dh, int grid = 4096) {
  Real prev_y(-1);
  Real prev_v = h(prev_y);
  for (int i = 1; i <= grid; ++i) {
    const Real y = Real(-1) + Real(i) / Real(grid);
    const Real v = h(y);
    if ((prev_v < 0 && v >= 0) || (prev_v > 0 && v <= 0)) {
      Real lo = prev_y, hi = y;
      const bool rising = prev_v < 0;
      const Real tol = root_tolerance<Real>();
      while (hi - lo > tol) {
        const Real mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        if ((h(mid) < 0) == rising) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      Real x = (lo + hi) / 2;
      for (int it = 0; it < 6; ++it) {
        const Real d = dh(x);
        if (d == 0) break;
        const Real next = x - h(x) / d;
        if (!(next >= lo && next <= hi)) break;
        x = next;
      }
      return x;
    }
    prev_y = y;
    prev_v = v;
  }
  return std::nullopt;
}

}  // namespace detail

/**
 * Lower bound on theta_min / k for odd girth g under c_t <= zeta k: the
 * smallest root of f(eta, y) + M1 zeta = 0 in (-1, 0). Empty when there is
 * no root there (no information).
 */
template <class Real>
std::optional<Real> theta_bound_given_zeta(int g, const Real& zeta, ScheduleMode mode) {
  auto bp = bound_parameters<Real>(g, zeta, mode);
  const Real shift = bp.M1 * zeta;
  auto h = [&](const Real& y) { return f_poly(bp.eta, y, bp.t) + shift; };
  auto dh = [&](const Real& y) { return f_poly_dy(bp.eta, y, bp.t); };
  return detail::smallest_root_in_open_unit<Real>(h, dh);
}

/// epsilon_1 at zeta = zeta*, after asserting f(eta,-1) + M1 zeta <= -M2/2
/// and f(eta, 0) + M1 zeta > 0.
template <class Real>
BoundParameters<Real> epsilon1(int g, ScheduleMode mode = ScheduleMode::paper_general) {
  const Real zeta = zeta_star<Real>(g, mode);
  auto bp = bound_parameters<Real>(g, zeta, mode);
  const Real shift = bp.M1 * zeta;
  const Real left = f_poly(bp.eta, Real(-1), bp.t) + shift;
  const Real right = f_poly(bp.eta, Real(0), bp.t) + shift;
  const Real slack = Real(1e-9) * (bp.M2 > 1 ? bp.M2 : Real(1));
  if (!(left <= -bp.M2 / Real(2) + slack) || !(right > 0)) {
    throw NumericalError("bracketing failed for g = " + std::to_string(g));
  }
  bp.root = theta_bound_given_zeta<Real>(g, zeta, mode);
  if (!bp.root) throw NumericalError("no root in (-1, 0) for g = " + std::to_string(g));
  using std::abs;
  bp.epsilon1 = Real(1) - abs(*bp.root);
  return bp;
}

// 2cos^2(t pi / (2t + 1)) = 1 + theta_min/k of the g-gon.
template <class Real>
Real polygon_epsilon_upper(int g) {
  require_odd_girth(g, 3);
  using std::cos;
  const int t = (g - 1) / 2;
  const Real c = cos(Real(t) * pi<Real>() / Real(g));
  return Real(2) * c * c;
}

// ceil(4t / zeta^2).
template <class Real>
Integer diameter_bound(int t, const Real& zeta) {
  if (!(zeta > Real(0) && zeta <= Real(0.5))) throw std::invalid_argument("zeta must lie in (0, 1/2]");
  using std::ceil;
  const Real value = ceil(Real(4 * t) / (zeta * zeta));
  if constexpr (std::is_floating_point_v<Real>) {
    return Integer(value);
  } else {
    return value.template convert_to<Integer>();
  }
}

}  // namespace drgf
