#include "bltk/rational.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>

namespace bltk {

namespace {

// Base-10 only; the cpp_int string constructor would read a leading zero as
// octal.
Integer parse_decimal_integer(const std::string& s) {
  size_t i = 0;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  if (i == s.size()) throw std::invalid_argument("bad integer literal '" + s + "'");
  Integer v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return negative ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Integer num = parse_decimal_integer(s.substr(0, slash));
    Integer den = parse_decimal_integer(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    return Rational(num, den);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_digits = s.size() - dot - 1;
    Integer num = parse_decimal_integer(digits);
    Integer den = 1;
    for (size_t i = 0; i < frac_digits; ++i) den *= 10;
    return Rational(num, den);
  }
  return Rational(parse_decimal_integer(s));
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer num = numerator(q), den = denominator(q);
  Integer rn = boost::multiprecision::sqrt(num);
  Integer rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return std::nullopt;
  return Rational(rn, rd);
}

Exponent parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "oo") return Exponent::infinity();
  return Exponent(parse_rational(s));
}

std::string to_string(const Exponent& p) {
  return p.is_infinite() ? "inf" : to_string(p.value());
}

}  // namespace bltk
