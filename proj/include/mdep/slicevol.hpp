#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "arith.hpp"
#include "rational.hpp"

namespace mdep {

// Every Q below is Vol_{n-1}(section) / ||alpha||; the irrational norm never
// has to be formed because consumers multiply by gcd(alpha)/||alpha||.

enum class BoxKind { unit, half, scaled_positive, scaled_symmetric };

struct SliceQuery {
  std::vector<std::int64_t> alpha;
  BoxKind box = BoxKind::half;
  Rational level = 0;  // r for unit/half, J for the scaled boxes
  std::int64_t H = 1;  // used by the scaled boxes only
};

namespace detail {

inline void require_nonzero(std::span<const std::int64_t> a) {
  if (a.empty()) throw std::domain_error("empty coefficient vector");
  for (auto x : a)
    if (x == 0) throw std::domain_error("zero coefficient; reduce the vector first");
}

inline Rational point_section(std::int64_t a, const Rational& r, const Rational& lo, const Rational& hi) {
  Rational x = r / a;
  return (x >= lo && x <= hi) ? Rational(1) / Rational(uabs(a)) : Rational(0);
}

// sum over c in {0,1}^n of (-1)^{|c|} max(r - alpha.c, 0)^{n-1}, walking c in
// Gray-code order so each step moves alpha.c by one coefficient.
inline Rational signed_vertex_sum(std::span<const std::int64_t> a, const Rational& r, std::int64_t step_scale,
                                  const Rational& start_dot) {
  const std::size_t n = a.size();
  Rational dot = start_dot, sum = 0;
  int parity = 0;
  std::uint64_t gray = 0;
  for (std::uint64_t t = 0; t < (std::uint64_t(1) << n); ++t) {
    if (t) {
      unsigned bit = unsigned(std::countr_zero(t));
      gray ^= std::uint64_t(1) << bit;
      bool on = gray >> bit & 1;
      dot += on ? Rational(step_scale * a[bit]) : Rational(-step_scale * a[bit]);
      parity ^= 1;
    }
    Rational d = r - dot;
    if (d > 0) {
      Rational term = rpow(d, unsigned(n - 1));
      if (parity)
        sum -= term;
      else
        sum += term;
    }
  }
  return sum;
}

inline BigInt signed_product(std::span<const std::int64_t> a) {
  BigInt p = 1;
  for (auto x : a) p *= x;
  return p;
}

}  // namespace detail

inline Rational mm_unit_cube_Q(std::span<const std::int64_t> alpha, const Rational& r) {
  detail::require_nonzero(alpha);
  const std::size_t n = alpha.size();
  if (n > 40) throw std::domain_error("dimension too large for the 2^n sum");
  if (n == 1) return detail::point_section(alpha[0], r, 0, 1);
  Rational s = detail::signed_vertex_sum(alpha, r, 1, 0);
  return s / Rational(factorial(unsigned(n - 1)) * detail::signed_product(alpha));
}

inline Rational mm_half_cube_Q(std::span<const std::int64_t> alpha, const Rational& r) {
  detail::require_nonzero(alpha);
  const std::size_t n = alpha.size();
  if (n > 40) throw std::domain_error("dimension too large for the 2^n sum");
  if (n == 1) return detail::point_section(alpha[0], r, Rational(-1, 2), Rational(1, 2));
  Rational start = 0;
  for (auto x : alpha) start -= x;
  Rational s = detail::signed_vertex_sum(alpha, 2 * r, 2, start);
  BigInt den = factorial(unsigned(n - 1)) * detail::signed_product(alpha);
  den <<= (n - 1);
  return s / Rational(den);
}

inline Rational simplex_Q(std::span<const std::int64_t> alpha, const Rational& r) {
  if (alpha.empty()) throw std::domain_error("empty coefficient vector");
  for (auto x : alpha)
    if (x <= 0) throw std::domain_error("simplex volume needs positive coefficients");
  const std::size_t n = alpha.size();
  if (n == 1) return r >= 0 ? Rational(1) / alpha[0] : Rational(0);
  if (r <= 0) return 0;
  return rpow(r, unsigned(n - 1)) / Rational(factorial(unsigned(n - 1)) * detail::signed_product(alpha));
}

// gcd(alpha) * Vol_{n-1}(B ∩ {alpha.v = level}) / ||alpha||
inline Rational V_alpha(const SliceQuery& q) {
  std::vector<std::int64_t> red;
  for (auto x : q.alpha)
    if (x != 0) red.push_back(x);
  if (red.empty()) throw std::domain_error("V_alpha needs a nonzero coefficient vector");
  const std::size_t n = q.alpha.size();
  const Rational g = gcd_vec(red);
  switch (q.box) {
    case BoxKind::unit:
      return g * mm_unit_cube_Q(red, q.level);
    case BoxKind::half:
      return g * mm_half_cube_Q(red, q.level);
    case BoxKind::scaled_positive: {
      if (q.H < 1) throw std::domain_error("H must be positive");
      Rational s = q.H;
      return g * rpow(s, unsigned(n - 1)) * mm_unit_cube_Q(red, q.level / s);
    }
    case BoxKind::scaled_symmetric: {
      if (q.H < 1) throw std::domain_error("H must be positive");
      Rational s = 2 * q.H;
      return g * rpow(s, unsigned(n - 1)) * mm_half_cube_Q(red, q.level / s);
    }
  }
  throw std::domain_error("unknown box");
}

inline Rational V_alpha_positive(std::span<const std::int64_t> alpha, std::int64_t J, std::int64_t H) {
  if (H < 1) throw std::domain_error("H must be positive");
  if (J < 0) throw std::domain_error("J must be nonnegative");
  if (J > H) throw std::domain_error("formula needs J <= H");
  Rational g = gcd_vec(alpha);
  return g * simplex_Q(alpha, J);
}

}  // namespace mdep
