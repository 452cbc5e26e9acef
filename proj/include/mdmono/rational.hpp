#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "mdmono/error.hpp"

namespace mdmono {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) { return Rational(num, den); }

// "num/den" in lowest terms; integers render without a denominator.
inline std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    if (part.empty()) throw Error(ErrorCode::BadInput, "malformed rational '" + std::string(text) + "'");
    std::size_t start = (part.front() == '-' || part.front() == '+') ? 1 : 0;
    if (start == part.size()) throw Error(ErrorCode::BadInput, "malformed rational '" + std::string(text) + "'");
    for (std::size_t i = start; i < part.size(); ++i) {
      if (part[i] < '0' || part[i] > '9') {
        throw Error(ErrorCode::BadInput, "malformed rational '" + std::string(text) + "'");
      }
    }
    return BigInt(std::string(part[0] == '+' ? part.substr(1) : part));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const BigInt num = parse_int(text.substr(0, slash));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::BadInput, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

}  // namespace mdmono
