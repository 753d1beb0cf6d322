#include "schedlift/rational.hpp"

#include <cstdlib>

namespace schedlift {

std::string rational_to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::optional<Rational> rational_from_string(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto slash = text.find('/');
  const std::string num_part = text.substr(0, slash);
  const std::string den_part =
      slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (num_part.empty() || den_part.empty()) return std::nullopt;
  auto is_integer = [](const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  if (!is_integer(num_part, true) || !is_integer(den_part, false))
    return std::nullopt;
  BigInt num(num_part);
  BigInt den(den_part);
  if (den == 0) return std::nullopt;
  return Rational(num, den);
}

long long rational_floor(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q.convert_to<long long>();
}

long long rational_ceil(const Rational& value) {
  return -rational_floor(-value);
}

}  // namespace schedlift
