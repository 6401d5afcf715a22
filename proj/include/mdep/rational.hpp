#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace mdep {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Thrown when an input is valid but a formula is applied outside the regime
// where it is defined (e.g. k=2 with J=0).
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::domain_error("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

// Accepts "p", "p/q", optional leading sign on p.
inline Rational parse_rational(std::string_view s) {
  auto parse_int = [](std::string_view t) {
    if (t.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) throw std::invalid_argument("bad integer");
    for (std::size_t j = i; j < t.size(); ++j)
      if (t[j] < '0' || t[j] > '9') throw std::invalid_argument("bad integer: " + std::string(t));
    return BigInt(std::string(t[0] == '+' ? t.substr(1) : t));
  };
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(s));
  BigInt den = parse_int(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator");
  BigInt num = parse_int(s.substr(0, slash));
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

// Fixed 12 significant digits, %g style. Stable across runs.
inline std::string to_decimal(const Rational& q, int digits = 12) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  if (q == 0) return "0";
  Dec v = Dec(numerator(q)) / Dec(denominator(q));
  return v.str(digits, std::ios_base::fmtflags(0));
}

inline std::string to_decimal(double x, int digits = 12) {
  using Dec = boost::multiprecision::cpp_dec_float_50;
  if (x == 0) return "0";
  return Dec(x).str(digits, std::ios_base::fmtflags(0));
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational rpow(const Rational& base, unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

inline BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace mdep
