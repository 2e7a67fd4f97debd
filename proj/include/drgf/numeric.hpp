#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace drgf {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Variable-precision float; working precision is process-wide.
using HighReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                               boost::multiprecision::et_off>;

inline constexpr unsigned kDefaultDigits = 50;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decimal digits requested through DRGF_PRECISION, or the default.
inline unsigned precision_from_env() {
  const char* env = std::getenv("DRGF_PRECISION");
  if (env == nullptr || *env == '\0') return kDefaultDigits;
  std::string_view text(env);
  unsigned digits = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), digits);
  if (ec != std::errc{} || ptr != text.data() + text.size() || digits < 20 || digits > 10000) {
    throw std::invalid_argument("DRGF_PRECISION must be an integer in [20, 10000], got '" +
                                std::string(text) + "'");
  }
  return digits;
}

inline void set_working_precision(unsigned digits) { HighReal::default_precision(digits); }

inline void apply_precision_from_env() { set_working_precision(precision_from_env()); }

namespace detail {
inline const bool kDefaultPrecisionSet = (set_working_precision(kDefaultDigits), true);
}

template <class Real>
inline constexpr bool is_high_precision_v = !std::is_floating_point_v<Real>;

template <class Real>
Real to_real(const Integer& x) {
  if constexpr (std::is_floating_point_v<Real>) {
    return x.convert_to<Real>();
  } else {
    // Boost 1.74 drops low bits converting large cpp_int to mpfr; go
    // through the decimal string (exact at sufficient precision).
    if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max()) {
      return Real(x.convert_to<long long>());
    }
    return Real(x.str());
  }
}

template <class Real>
Real to_real(const Rational& x) {
  if constexpr (std::is_floating_point_v<Real>) {
    return x.convert_to<Real>();
  } else {
    // Direct construction from cpp_rational loses bits in Boost 1.74.
    return to_real<Real>(Integer(numerator(x))) / to_real<Real>(Integer(denominator(x)));
  }
}

template <class Real>
double to_double(const Real& x) {
  if constexpr (std::is_floating_point_v<Real>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

template <class Real>
Real pi() {
  return boost::math::constants::pi<Real>();
}

// Machine epsilon of Real at the current working precision.
template <class Real>
Real epsilon() {
  return std::numeric_limits<Real>::epsilon();
}

// Full-precision decimal rendering.
template <class Real>
std::string to_decimal_string(const Real& x) {
  if constexpr (std::is_floating_point_v<Real>) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general,
                                   std::numeric_limits<Real>::max_digits10);
    (void)ec;
    return std::string(buf, ptr);
  } else {
    return x.str(static_cast<std::streamsize>(HighReal::default_precision()),
                 std::ios_base::fmtflags{});
  }
}

inline std::string to_decimal_string(const Rational& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

// Exact value of a decimal or "p/q" literal, e.g. "-0.75" or "-3/4".
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (den == 0) fail();
    return num / den;
  }
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  Integer mantissa = 0;
  Integer scale = 1;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      mantissa = mantissa * 10 + (ch - '0');
      if (seen_point) scale *= 10;
      seen_digit = true;
    } else {
      fail();
    }
  }
  if (!seen_digit) fail();
  Rational value(mantissa, scale);
  return negative ? Rational(-value) : value;
}

// Exact rational equal to the shortest decimal that round-trips x.
inline Rational rational_from_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed);
  if (ec != std::errc{}) throw std::invalid_argument("cannot represent value as rational");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

// Rounding to a fixed number of decimals, in the safe direction for a
// lower (resp. upper) bound. The slack absorbs binary representation error
// in values that are exact decimals, e.g. 0.55.
inline double floor_decimals(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::floor(x * scale + 1e-7) / scale;
}

inline double ceil_decimals(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::ceil(x * scale - 1e-7) / scale;
}

}  // namespace drgf
