#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include "kanlift/error.hpp"

namespace kanlift {

// Expression templates off: values are plain and safe to use with std algorithms.
using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Canonical text form: "p/q" in lowest terms, or "p" when q = 1.
inline std::string to_string(const Rational& r) {
  const Integer num = boost::multiprecision::numerator(r);
  const Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace detail {
inline bool is_decimal_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}
}  // namespace detail

/// Parses "p/q" or "p". Throws Error(InvalidRational) on anything else,
/// including a zero denominator.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                               : text.substr(slash + 1);
  if (!detail::is_decimal_integer(num) || !detail::is_decimal_integer(den) ||
      (!den.empty() && (den.front() == '-' || den.front() == '+'))) {
    throw Error(ErrorKind::InvalidRational, "invalid rational \"" + std::string(text) + "\"");
  }
  const Integer d{std::string(den)};
  if (d == 0) {
    throw Error(ErrorKind::InvalidRational, "invalid rational \"" + std::string(text) + "\"");
  }
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  return Rational(Integer(n), d);
}

/// Nonnegative rational extended with +infinity; infinity absorbs addition.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(Rational value) : value_(std::move(value)) {}  // NOLINT(implicit)
  ExtRational(int value) : value_(value) {}                  // NOLINT(implicit)

  static ExtRational infinity() {
    ExtRational r;
    r.infinite_ = true;
    return r;
  }

  bool is_infinite() const noexcept { return infinite_; }
  const Rational& value() const {
    require(!infinite_, ErrorKind::InvalidStructure, "value() of infinite distance");
    return value_;
  }

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtRational(a.value_ + b.value_);
  }

  friend bool operator==(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtRational& r) {
    return os << to_string(r);
  }

  friend std::string to_string(const ExtRational& r) {
    return r.infinite_ ? std::string("inf") : kanlift::to_string(r.value_);
  }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

inline ExtRational parse_ext_rational(std::string_view text) {
  if (text == "inf") return ExtRational::infinity();
  Rational r = parse_rational(text);
  require(r >= 0, ErrorKind::InvalidRational, "negative distance \"" + std::string(text) + "\"");
  return ExtRational(std::move(r));
}

}  // namespace kanlift
