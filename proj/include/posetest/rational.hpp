#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "posetest/error.hpp"

namespace posetest {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw ParameterError("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

/// Parses "a/b" or a bare integer "a". Decimal notation is rejected so that
/// parameters never pass through floating point.
inline Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto to_big = [](std::string_view s) {
    if (!s.empty() && s[0] == '+') s.remove_prefix(1);
    return BigInt(std::string(s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    if (!is_int(text)) throw ParameterError("not a rational: '" + std::string(text) + "'");
    return Rational(to_big(text));
  }
  auto num = text.substr(0, slash);
  auto den = text.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den[0] == '-' || den[0] == '+')
    throw ParameterError("not a rational: '" + std::string(text) + "'");
  BigInt d = to_big(den);
  if (d == 0) throw ParameterError("zero denominator in '" + std::string(text) + "'");
  return Rational(to_big(num), d);
}

inline std::string to_string(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

inline BigInt ceil(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);  // truncates toward zero
  if (q * denominator(r) < numerator(r)) ++q;
  return q;
}

inline BigInt floor(const Rational& r) {
  BigInt q = numerator(r) / denominator(r);
  if (q * denominator(r) > numerator(r)) --q;
  return q;
}

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace posetest
