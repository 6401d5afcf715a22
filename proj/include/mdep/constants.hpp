#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "multdep.hpp"
#include "rational.hpp"
#include "slicevol.hpp"

namespace mdep {

struct ConstantBreakdown {
  std::size_t k = 0;  // nonzero entries of alpha
  Rational c0 = 0, c1 = 0, c1_correction = 0, c2 = 0, total = 0;
  int exponent = 0;         // total multiplies variable^exponent
  std::string variable = "H";
  std::string regime;
  bool degenerate = false;
  std::optional<std::int64_t> log_floor;  // k = 1: total = c0 + c1 * log_floor
  bool caveat = false;                    // k = 3 inputs outside the extra divisibility conditions
  std::uint64_t s2prime_count = 0;        // k = 2
};

using Vec = std::vector<std::int64_t>;

inline Vec alpha_star(std::span<const std::int64_t> alpha, std::size_t i) {
  if (i < 1 || i > alpha.size()) throw std::out_of_range("alpha_star index out of range");
  Vec out;
  for (std::size_t j = 0; j < alpha.size(); ++j)
    if (j + 1 != i) out.push_back(alpha[j]);
  return out;
}

enum class PmSign { minus, plus };

inline Vec alpha_pm(std::span<const std::int64_t> alpha, std::size_t i1, std::size_t i2, PmSign s) {
  if (!(1 <= i1 && i1 < i2 && i2 <= alpha.size())) throw std::out_of_range("alpha_pm needs 1 <= i1 < i2 <= n");
  Vec out;
  for (std::size_t j = 0; j < alpha.size(); ++j)
    if (j + 1 != i1 && j + 1 != i2) out.push_back(alpha[j]);
  out.push_back(s == PmSign::minus ? alpha[i1 - 1] - alpha[i2 - 1] : alpha[i1 - 1] + alpha[i2 - 1]);
  return out;
}

inline int delta(std::span<const std::int64_t> alpha, std::int64_t J) {
  std::int64_t g = gcd_vec(alpha);
  if (g == 0) return J == 0 ? 1 : 0;
  return J % g == 0 ? 1 : 0;
}

namespace detail {

inline std::size_t nnz(std::span<const std::int64_t> a) {
  return std::size_t(std::count_if(a.begin(), a.end(), [](auto x) { return x != 0; }));
}

inline Rational pow2(int e) {
  return e >= 0 ? Rational(BigInt(1) << e) : Rational(BigInt(1), BigInt(1) << -e);
}

// delta * V(box; 0); the all-zero sub-vector only arises with delta = 1 when
// the level is 0, where no (n-2)-volume exists.
inline Rational weighted_volume(const Vec& sub, std::int64_t level, BoxKind box) {
  if (!delta(sub, level)) return 0;
  if (nnz(sub) == 0) throw RegimeError("constant needs a sub-vector with a nonzero entry");
  return V_alpha(SliceQuery{sub, box, 0, 1});
}

inline std::vector<std::size_t> nonzero_indices(std::span<const std::int64_t> a) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) idx.push_back(i);
  return idx;
}

// u^s = v^t for positive integers s, t (u, v > 1): exponent vectors proportional.
inline bool is_rational_power(std::int64_t u, std::int64_t v) {
  auto fu = factorize(u).exponents, fv = factorize(v).exponents;
  if (fu.size() != fv.size()) return false;
  std::int64_t num = 0, den = 0;
  for (auto iu = fu.begin(), iv = fv.begin(); iu != fu.end(); ++iu, ++iv) {
    if (iu->first != iv->first) return false;
    if (den == 0) {
      num = iu->second;
      den = iv->second;
    } else if (std::int64_t(iu->second) * den != num * std::int64_t(iv->second)) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

inline Rational C0(std::span<const std::int64_t> alpha, std::int64_t J) {
  const std::size_t n = alpha.size();
  if (n < 2) throw std::domain_error("C0 needs n >= 2");
  Rational s = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    Vec sub = alpha_star(alpha, i);
    s += detail::weighted_volume(sub, J - alpha[i - 1], BoxKind::half);
    s += detail::weighted_volume(sub, J + alpha[i - 1], BoxKind::half);
  }
  return detail::pow2(int(n) - 2) * s;
}

inline Rational C1(std::span<const std::int64_t> alpha, std::int64_t J) {
  const std::size_t n = alpha.size();
  if (n < 2) throw std::domain_error("C1 needs n >= 2");
  Rational s = 0;
  for (std::size_t i1 = 1; i1 <= n; ++i1)
    for (std::size_t i2 = i1 + 1; i2 <= n; ++i2) {
      s += detail::weighted_volume(alpha_pm(alpha, i1, i2, PmSign::minus), J, BoxKind::half);
      s += detail::weighted_volume(alpha_pm(alpha, i1, i2, PmSign::plus), J, BoxKind::half);
    }
  return detail::pow2(int(n) - 2) * s;
}

inline Rational C2_k3(std::span<const std::int64_t> alpha, std::int64_t J) {
  auto idx = detail::nonzero_indices(alpha);
  if (idx.size() != 3) throw RegimeError("C2_k3 needs exactly three nonzero entries");
  if (J == 0) throw RegimeError("C2_k3 needs J != 0");
  Rational s = 0;
  const std::int64_t aj_perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (auto& p : aj_perm) {
    std::uint64_t aj = uabs(alpha[idx[p[0]]]), a1 = uabs(alpha[idx[p[1]]]), a2 = uabs(alpha[idx[p[2]]]);
    std::uint64_t jj = uabs(J);
    if (jj % aj != 0 || jj / aj <= 1) continue;
    if (a1 % a2 != 0 || a1 / a2 <= 1) continue;
    if (!detail::is_rational_power(std::int64_t(a1 / a2), std::int64_t(jj / aj))) continue;
    s += Rational(BigInt(a2), BigInt(a1));
  }
  return detail::pow2(int(alpha.size()) - 2) * s;
}

// Size of the index set X: |alpha_j| = |J| and the other two nonzero entries
// have equal absolute value.
inline int k3_x_count(std::span<const std::int64_t> alpha, std::int64_t J) {
  auto idx = detail::nonzero_indices(alpha);
  if (idx.size() != 3) throw RegimeError("needs exactly three nonzero entries");
  int x = 0;
  for (int j = 0; j < 3; ++j) {
    std::uint64_t o1 = uabs(alpha[idx[(j + 1) % 3]]), o2 = uabs(alpha[idx[(j + 2) % 3]]);
    if (uabs(alpha[idx[j]]) == uabs(J) && o1 == o2) ++x;
  }
  if (x != 0 && x != 1 && x != 3) throw std::logic_error("#X outside {0,1,3}");
  return x;
}

inline Rational C1_k3(std::span<const std::int64_t> alpha, std::int64_t J) {
  if (detail::nnz(alpha) != 3) throw RegimeError("C1_k3 needs exactly three nonzero entries");
  if (J == 0) throw RegimeError("C1_k3 needs J != 0");
  return C1(alpha, J) - detail::pow2(int(alpha.size()) - 2) * k3_x_count(alpha, J);
}

// Ordered pairs (x, y) with a1 x + a2 y = J, |x|,|y| > 1, |x| != |y|, and
// (x, y) multiplicatively dependent, i.e. |x| = w^a, |y| = w^b with a != b.
// Then w^min(a,b) divides J, which bounds the search.
inline std::vector<std::pair<std::int64_t, std::int64_t>> S2prime(std::int64_t J, std::int64_t a1, std::int64_t a2) {
  if (J == 0 || a1 == 0 || a2 == 0) throw std::domain_error("S2prime needs nonzero J, a1, a2");
  const std::int64_t aj = std::int64_t(uabs(J));
  auto power_of = [](std::uint64_t v, std::uint64_t w) -> int {
    if (v < w) return -1;
    int b = 0;
    while (v % w == 0) v /= w, ++b;
    return v == 1 ? b : -1;
  };
  std::set<std::pair<std::int64_t, std::int64_t>> out;
  for (std::int64_t w = 2; w <= aj; ++w) {
    if (aj % w) continue;
    std::int64_t wm = w;
    for (int m = 1; aj % wm == 0; ++m) {
      for (int role = 0; role < 2; ++role)
        for (int sg : {1, -1}) {
          const std::int64_t fixed = sg * wm;
          // role 0: x = fixed; role 1: y = fixed
          const std::int64_t cf = role == 0 ? a1 : a2, co = role == 0 ? a2 : a1;
          const __int128 rem = __int128(J) - __int128(cf) * fixed;
          if (rem % co != 0) continue;
          const __int128 other = rem / co;
          if (other == 0 || other > INT64_MAX || other < -INT64_MAX) continue;
          int b = power_of(uabs(std::int64_t(other)), std::uint64_t(w));
          if (b < 1 || b == m) continue;
          std::int64_t x = role == 0 ? fixed : std::int64_t(other), y = role == 0 ? std::int64_t(other) : fixed;
          if (!is_dependent(IntVector{x, y})) throw std::logic_error("S2prime produced an independent pair");
          out.emplace(x, y);
        }
      if (wm > aj / w) break;
      wm *= w;
    }
  }
  return {out.begin(), out.end()};
}

inline ConstantBreakdown C_k2(std::span<const std::int64_t> alpha, std::int64_t J) {
  auto idx = detail::nonzero_indices(alpha);
  if (idx.size() != 2) throw RegimeError("C_k2 needs exactly two nonzero entries");
  if (J == 0) throw RegimeError("k = 2 requires J != 0");
  const std::int64_t a1 = alpha[idx[0]], a2 = alpha[idx[1]];
  const Rational w = detail::pow2(int(alpha.size()) - 2);
  ConstantBreakdown b;
  b.k = 2;
  b.exponent = int(alpha.size()) - 2;
  b.regime = "J != 0, H -> infinity";
  const bool hit = J == a1 + a2 || J == -(a1 + a2) || J == a1 - a2 || J == -(a1 - a2);
  b.s2prime_count = S2prime(J, a1, a2).size();
  b.c0 = C0(alpha, J) - (hit ? w : Rational(0));
  b.c1 = C1(alpha, J);
  b.c2 = w * Rational(b.s2prime_count);
  b.c1_correction = hit ? w : Rational(0);
  b.total = b.c0 + b.c1 + b.c2 - b.c1_correction;
  return b;
}

// Largest t with f^t <= H.
inline std::int64_t floor_log(std::int64_t H, std::int64_t f) {
  if (f < 2 || H < 1) throw std::domain_error("floor_log needs f >= 2 and H >= 1");
  std::int64_t t = 0;
  for (__int128 p = f; p <= H; p *= f) ++t;
  return t;
}

inline ConstantBreakdown C_e1_breakdown(std::int64_t J, std::int64_t H, std::int64_t n) {
  if (uabs(J) <= 1) throw std::domain_error("C_e1 needs |J| > 1; |J| = 1 is the exact (2H)^(n-1) law");
  if (H < 1) throw std::domain_error("C_e1 needs H >= 1");
  if (n < 2) throw std::domain_error("C_e1 needs n >= 2");
  const std::int64_t f = f_base(std::int64_t(uabs(J)));
  ConstantBreakdown b;
  b.k = 1;
  b.exponent = int(n) - 2;
  b.regime = "|J| > 1, affine in floor(log H / log f(|J|))";
  b.log_floor = floor_log(H, f);
  const Rational w = detail::pow2(int(n) - 2) * (n - 1);
  b.c0 = w * (Rational(n) + Rational(2 * (n - 2), f - 1));
  b.c1 = 2 * w;
  b.total = b.c0 + b.c1 * *b.log_floor;
  return b;
}

inline Rational C_e1(std::int64_t J, std::int64_t H, std::int64_t n) { return C_e1_breakdown(J, H, n).total; }

inline ConstantBreakdown C_total(std::span<const std::int64_t> alpha, std::int64_t J,
                                 std::optional<std::int64_t> H = std::nullopt) {
  const std::size_t n = alpha.size(), k = detail::nnz(alpha);
  if (n < 1) throw std::domain_error("alpha must be nonempty");
  ConstantBreakdown b;
  b.k = k;
  if (k >= 4) {
    if (k == 4 && J == 0) throw RegimeError("k = 4 requires J != 0");
    b.c0 = C0(alpha, J);
    b.c1 = C1(alpha, J);
    b.total = b.c0 + b.c1;
    b.exponent = int(n) - 2;
    b.regime = "H >> |J|";
    return b;
  }
  if (k == 3) {
    if (J == 0) throw RegimeError("k = 3 requires J != 0");
    b.c0 = C0(alpha, J);
    b.c1 = C1(alpha, J);
    b.c1_correction = detail::pow2(int(n) - 2) * k3_x_count(alpha, J);
    b.c2 = C2_k3(alpha, J);
    b.total = b.c0 + b.c1 - b.c1_correction + b.c2;
    b.exponent = int(n) - 2;
    b.regime = "J != 0, H >> |J|";
    // the rank-2 error bound is argued under either of two extra conditions
    auto idx = detail::nonzero_indices(alpha);
    bool divides_other = false, divides_J = false;
    for (auto i : idx) {
      if (J % alpha[i] == 0) divides_J = true;
      for (auto j : idx)
        if (i != j && uabs(alpha[j]) % uabs(alpha[i]) == 0) divides_other = true;
    }
    b.caveat = divides_other && divides_J;
    return b;
  }
  if (k == 2) return C_k2(alpha, J);
  if (k == 1) {
    if (!H) throw RegimeError("k = 1 constant depends on H; pass H");
    if (n < 3) throw RegimeError("k = 1 law needs n >= 3");
    if (J == 0) throw RegimeError("k = 1 requires J != 0");
    const std::int64_t a = alpha[detail::nonzero_indices(alpha)[0]];
    if (J % a != 0) {
      b.exponent = int(n) - 2;
      b.regime = "no lattice points: the nonzero coefficient does not divide J";
      return b;
    }
    const std::int64_t Jr = J / a;
    if (uabs(Jr) == 1) {
      b.c0 = b.total = detail::pow2(int(n) - 1);
      b.exponent = int(n) - 1;
      b.regime = "|J| = 1: count is exactly (2H)^(n-1)";
      return b;
    }
    return C_e1_breakdown(Jr, *H, std::int64_t(n));
  }
  // k = 0
  b.exponent = int(n) - 1;
  if (J != 0) {
    b.degenerate = true;
    b.regime = "empty hyperplane: alpha = 0 and J != 0";
    return b;
  }
  b.c0 = b.total = detail::pow2(int(n) - 1) * Rational(n * (n + 1));
  b.regime = "alpha = 0, J = 0: unconstrained count";
  return b;
}

inline ConstantBreakdown C_positive(std::span<const std::int64_t> alpha, std::int64_t J) {
  const std::size_t n = alpha.size();
  const auto pos = std::size_t(std::count_if(alpha.begin(), alpha.end(), [](auto x) { return x > 0; }));
  const auto neg = std::size_t(std::count_if(alpha.begin(), alpha.end(), [](auto x) { return x < 0; }));
  ConstantBreakdown b;
  b.k = pos + neg;
  b.exponent = int(n) - 2;
  if (pos == n) {
    if (n < 3) throw RegimeError("positive-coefficient law needs n >= 3");
    const std::int64_t mx = *std::max_element(alpha.begin(), alpha.end());
    if (J <= mx) throw RegimeError("positive-coefficient law needs J > max alpha_i");
    const Rational inv_fact = Rational(BigInt(1), factorial(unsigned(n - 2)));
    for (std::size_t i = 1; i <= n; ++i) {
      Vec s = alpha_star(alpha, i);
      if (!delta(s, J - alpha[i - 1])) continue;
      BigInt prod = 1;
      for (auto x : s) prod *= x;
      b.c0 += Rational(BigInt(gcd_vec(s)), prod);
    }
    for (std::size_t i1 = 1; i1 <= n; ++i1)
      for (std::size_t i2 = i1 + 1; i2 <= n; ++i2) {
        Vec s = alpha_pm(alpha, i1, i2, PmSign::plus);
        if (!delta(s, J)) continue;
        BigInt prod = 1;
        for (auto x : s) prod *= x;  // last entry is alpha_i1 + alpha_i2
        b.c1 += Rational(BigInt(gcd_vec(s)), prod);
      }
    b.c0 *= inv_fact;
    b.c1 *= inv_fact;
    b.total = b.c0 + b.c1;
    b.variable = "J";
    b.regime = "all coefficients positive, J > max alpha_i";
    return b;
  }
  if (pos >= 2 && neg >= 2) {
    if (b.k == 4 && J == 0) throw RegimeError("k = 4 requires J != 0");
    for (std::size_t i = 1; i <= n; ++i)
      b.c0 += detail::weighted_volume(alpha_star(alpha, i), J - alpha[i - 1], BoxKind::unit);
    for (std::size_t i1 = 1; i1 <= n; ++i1)
      for (std::size_t i2 = i1 + 1; i2 <= n; ++i2)
        b.c1 += detail::weighted_volume(alpha_pm(alpha, i1, i2, PmSign::plus), J, BoxKind::unit);
    b.total = b.c0 + b.c1;
    b.regime = "at least two positive and two negative coefficients, H >> |J|";
    return b;
  }
  throw RegimeError("positive-orthant constant is only defined for all-positive alpha or for alpha with at least "
                    "two positive and two negative entries");
}

}  // namespace mdep
