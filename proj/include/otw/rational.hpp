#pragma once

#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

#include "otw/error.hpp"

// Boost 1.74's mixed rational/integer operator== recurses forever under C++20
// rewritten comparisons. Exact non-template overloads win overload resolution.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) {
  return a == static_cast<std::int64_t>(b);
}
}  // namespace boost

namespace otw {

// Every time, distance and reward is an exact rational.
using Rational = boost::rational<std::int64_t>;

inline bool is_integer(const Rational& x) { return x.denominator() == 1; }

inline Rational floor(const Rational& x) {
  std::int64_t q = x.numerator() / x.denominator();
  if (x.numerator() < 0 && q * x.denominator() != x.numerator()) --q;
  return Rational(q);
}

inline Rational ceil(const Rational& x) {
  std::int64_t q = x.numerator() / x.denominator();
  if (x.numerator() > 0 && q * x.denominator() != x.numerator()) ++q;
  return Rational(q);
}

/// 2^exponent, exponent may be negative.
inline Rational pow2(int exponent) {
  if (exponent >= 0) return Rational(std::int64_t{1} << exponent);
  return Rational(1, std::int64_t{1} << (-exponent));
}

/// Smallest k with 2^k >= x, for x > 0.
inline int ceil_log2(const Rational& x) {
  int k = 0;
  while (pow2(k) < x) ++k;
  while (k > -62 && pow2(k - 1) >= x) --k;
  return k;
}

/// Largest k with 2^k <= x, for x > 0.
inline int floor_log2(const Rational& x) {
  int k = 0;
  while (pow2(k) > x) --k;
  while (pow2(k + 1) <= x) ++k;
  return k;
}

/// Largest g such that a/g and b/g are both integers (for nonzero inputs).
inline Rational rational_gcd(const Rational& a, const Rational& b) {
  if (a == 0) return b < 0 ? -b : b;
  if (b == 0) return a < 0 ? -a : a;
  std::int64_t num = std::gcd(a.numerator(), b.numerator());
  std::int64_t den = std::lcm(a.denominator(), b.denominator());
  return Rational(num, den);
}

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& x) {
  if (x.denominator() == 1) return std::to_string(x.numerator());
  return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

inline double to_double(const Rational& x) {
  return static_cast<double>(x.numerator()) / static_cast<double>(x.denominator());
}

namespace detail {

inline std::optional<std::int64_t> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) return std::nullopt;
  std::int64_t value = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    if (value > (INT64_MAX - (s[i] - '0')) / 10) return std::nullopt;
    value = value * 10 + (s[i] - '0');
  }
  return negative ? -value : value;
}

}  // namespace detail

/// Parses "p", "p/q" or a decimal literal with at most `max_fraction_digits`
/// fractional digits. Returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(std::string_view text,
                                              int max_fraction_digits = 6) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = detail::parse_int(text.substr(0, slash));
    auto den = detail::parse_int(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }

  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view fraction = text.substr(dot + 1);
    if (fraction.empty() || static_cast<int>(fraction.size()) > max_fraction_digits)
      return std::nullopt;
    bool negative = !whole.empty() && whole.front() == '-';
    std::string digits(whole);
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    auto integral = detail::parse_int(digits);
    auto frac = detail::parse_int(fraction);
    if (!integral || !frac || fraction.front() == '-' || fraction.front() == '+')
      return std::nullopt;
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < fraction.size(); ++i) scale *= 10;
    Rational magnitude = Rational(negative ? -*integral : *integral) + Rational(*frac, scale);
    return negative ? -magnitude : magnitude;
  }

  auto value = detail::parse_int(text);
  if (!value) return std::nullopt;
  return Rational(*value);
}

/// Recovers the exact decimal a JSON float literal was written as, provided it
/// has at most `max_fraction_digits` fractional digits.
inline std::optional<Rational> rational_from_decimal(double value, int max_fraction_digits = 6) {
  if (!std::isfinite(value)) return std::nullopt;
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", max_fraction_digits, value);
  auto parsed = parse_rational(buffer, max_fraction_digits);
  if (!parsed) return std::nullopt;
  if (std::fabs(to_double(*parsed) - value) > 1e-9 * std::max(1.0, std::fabs(value)))
    return std::nullopt;
  return parsed;
}

}  // namespace otw
