#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "ssframe/config.hpp"

namespace ssframe {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Thin value type over boost's arbitrary-precision rational. All map
/// algebra, digits, weights and fixed points are carried in this type so
/// that coincidences between composed maps are decided exactly.
class Rational {
 public:
  using Integer = boost::multiprecision::cpp_int;

  Rational() = default;
  Rational(int value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(long long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  explicit Rational(const Integer& value) : value_(value) {}

  Rational(const Integer& numerator, const Integer& denominator) {
    if (denominator == 0) throw InputError("rational with zero denominator");
    value_ = boost::multiprecision::cpp_rational(numerator, denominator);
  }

  /// Parses "p/q" or "p" (optional leading sign). Decimal points, exponents
  /// and symbolic values are rejected.
  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    const auto slash = text.find('/');
    const std::string_view num_text = trim(text.substr(0, slash));
    const std::string_view den_text =
        slash == std::string_view::npos ? std::string_view("1") : trim(text.substr(slash + 1));
    auto parse_integer = [&](std::string_view s, bool allow_sign) {
      std::size_t start = 0;
      if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) start = 1;
      if (s.size() == start) {
        throw InputError("not a rational \"p/q\": \"" + std::string(text) + "\"");
      }
      for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
          throw InputError("not a rational \"p/q\": \"" + std::string(text) + "\"");
        }
      }
      return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    const Integer num = parse_integer(num_text, true);
    const Integer den = parse_integer(den_text, false);
    if (den == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
    return Rational(num, den);
  }

  Integer numerator() const { return boost::multiprecision::numerator(value_); }
  Integer denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_integer() const { return denominator() == 1; }
  bool is_zero() const { return value_ == 0; }
  int sign() const { return value_.sign(); }

  /// "p/q", or "p" when the denominator is 1.
  std::string str() const {
    const Integer den = denominator();
    if (den == 1) return numerator().str();
    return numerator().str() + "/" + den.str();
  }

  /// Correctly scaled conversion that survives huge numerators/denominators.
  double to_double() const {
    Integer num = numerator();
    Integer den = denominator();
    if (num == 0) return 0.0;
    const bool negative = num < 0;
    if (negative) num = -num;
    const long num_bits = static_cast<long>(boost::multiprecision::msb(num));
    const long den_bits = static_cast<long>(boost::multiprecision::msb(den));
    // Scale so the integer quotient carries at least 64 significant bits.
    const long shift = 64 - (num_bits - den_bits);
    if (shift > 0) {
      num <<= static_cast<unsigned>(shift);
    } else if (shift < 0) {
      den <<= static_cast<unsigned>(-shift);
    }
    const Integer quotient = num / den;
    const double q = quotient.convert_to<double>();
    const double result = std::ldexp(q, static_cast<int>(-shift));
    return negative ? -result : result;
  }

  Rational abs() const { return value_ < 0 ? Rational(-value_) : *this; }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.value_ == 0) throw InputError("division by zero rational");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(-a.value_); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  explicit Rational(boost::multiprecision::cpp_rational v) : value_(std::move(v)) {}

  boost::multiprecision::cpp_rational value_{0};
};

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace ssframe
