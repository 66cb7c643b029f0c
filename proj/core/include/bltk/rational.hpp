#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace bltk {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Parses "a", "-a/b" or a decimal like "0.25" into an exact rational.
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& q);

double to_double(const Rational& q);

// Exact square root, if the rational is a perfect square of a rational.
std::optional<Rational> rational_sqrt(const Rational& q);

// A Lebesgue exponent p in [1, infinity].  Stored exactly; infinity is a
// first-class value so that 1/p = 0 arithmetic stays exact.
class Exponent {
 public:
  Exponent() : inf_(true) {}
  explicit Exponent(Rational p) : inf_(false), value_(std::move(p)) {
    if (value_ < 1) throw std::invalid_argument("exponent must satisfy p >= 1");
  }
  static Exponent infinity() { return Exponent(); }

  bool is_infinite() const { return inf_; }
  const Rational& value() const {
    if (inf_) throw std::logic_error("infinite exponent has no finite value");
    return value_;
  }

  // 1/p, with 1/infinity = 0.
  Rational reciprocal() const { return inf_ ? Rational(0) : Rational(1) / value_; }

  // Conjugate p' with 1/p + 1/p' = 1; 1' = infinity and infinity' = 1.
  Exponent conjugate() const {
    if (inf_) return Exponent(Rational(1));
    if (value_ == 1) return infinity();
    return Exponent(value_ / (value_ - 1));
  }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.value_ == b.value_;
  }

 private:
  bool inf_;
  Rational value_;
};

Exponent parse_exponent(const std::string& s);
std::string to_string(const Exponent& p);

}  // namespace bltk
