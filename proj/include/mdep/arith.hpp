#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#ifndef MDEP_SIEVE_LIMIT
#define MDEP_SIEVE_LIMIT 10000000
#endif

namespace mdep {

struct SignedFactorization {
  int sign = 1;
  std::map<std::uint64_t, unsigned> exponents;

  // Throws std::overflow_error if the value does not fit in int64.
  std::int64_t rebuild() const {
    __int128 v = 1;
    for (auto [p, e] : exponents)
      for (unsigned i = 0; i < e; ++i) {
        v *= p;
        if (v > INT64_MAX) throw std::overflow_error("factorization exceeds int64");
      }
    return static_cast<std::int64_t>(sign * v);
  }
  bool operator==(const SignedFactorization&) const = default;
};

// Smallest-prime-factor table, built once.
class Sieve {
 public:
  explicit Sieve(std::uint32_t limit) : spf_(std::size_t(std::max<std::uint32_t>(limit, 2)) + 1, 0) {
    const std::uint32_t n = static_cast<std::uint32_t>(spf_.size() - 1);
    for (std::uint32_t i = 2; i <= n; ++i) {
      if (spf_[i] == 0) {
        spf_[i] = i;
        primes_.push_back(i);
      }
      for (std::uint32_t p : primes_) {
        if (p > spf_[i] || std::uint64_t(p) * i > n) break;
        spf_[p * i] = p;
      }
    }
  }

  std::uint64_t limit() const { return spf_.size() - 1; }
  std::uint32_t spf(std::uint64_t m) const { return spf_[m]; }
  const std::vector<std::uint32_t>& primes() const { return primes_; }

 private:
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

namespace detail {
struct SieveSlot {
  std::once_flag once;
  std::mutex mu;
  std::uint64_t requested = 0;
  bool built = false;
  const Sieve* sieve = nullptr;
};
inline SieveSlot& sieve_slot() {
  static SieveSlot slot;
  return slot;
}
inline std::uint64_t env_sieve_limit() {
  if (const char* s = std::getenv("MDEP_SIEVE_LIMIT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v >= 2 && v <= 2000000000ULL) return v;
  }
  return MDEP_SIEVE_LIMIT;
}
}  // namespace detail

// Must be called before the first factorization; later calls with a different
// limit are rejected because the table is already shared.
inline void set_sieve_limit(std::uint64_t limit) {
  auto& slot = detail::sieve_slot();
  std::lock_guard lock(slot.mu);
  if (limit < 2 || limit > 2000000000ULL) throw std::domain_error("sieve limit out of range");
  if (slot.built) {
    if (slot.sieve->limit() != std::max<std::uint64_t>(limit, 2))
      throw std::logic_error("sieve already built with a different limit");
    return;
  }
  slot.requested = limit;
}

inline const Sieve& sieve() {
  auto& slot = detail::sieve_slot();
  std::call_once(slot.once, [&] {
    std::lock_guard lock(slot.mu);
    std::uint64_t lim = slot.requested ? slot.requested : detail::env_sieve_limit();
    slot.sieve = new Sieve(static_cast<std::uint32_t>(lim));
    slot.built = true;
  });
  return *slot.sieve;
}

// Calls f(p, e) for each prime power exactly dividing m, primes ascending.
template <class F>
void for_each_prime_power(std::uint64_t m, F&& f) {
  const Sieve& sv = sieve();
  if (m > sv.limit()) {
    for (std::uint64_t d = 2; d * d <= m && m > sv.limit(); d += (d == 2 ? 1 : 2)) {
      if (m % d) continue;
      unsigned e = 0;
      while (m % d == 0) m /= d, ++e;
      f(d, e);
    }
    if (m > sv.limit()) {
      f(m, 1u);
      return;
    }
  }
  while (m > 1) {
    std::uint32_t p = sv.spf(m);
    unsigned e = 0;
    while (m % p == 0) m /= p, ++e;
    f(std::uint64_t(p), e);
  }
}

inline std::uint64_t uabs(std::int64_t m) {
  return m < 0 ? std::uint64_t(0) - std::uint64_t(m) : std::uint64_t(m);
}

inline SignedFactorization factorize(std::int64_t m) {
  if (m == 0) throw std::domain_error("zero has no factorization");
  SignedFactorization out;
  out.sign = m < 0 ? -1 : 1;
  for_each_prime_power(uabs(m), [&](std::uint64_t p, unsigned e) { out.exponents.emplace(p, e); });
  return out;
}

inline std::uint64_t radical(std::int64_t m) {
  if (m == 0) throw std::domain_error("radical of zero is undefined");
  std::uint64_t r = 1;
  for_each_prime_power(uabs(m), [&](std::uint64_t p, unsigned) { r *= p; });
  return r;
}

namespace detail {
inline std::uint64_t psi0_rec(const std::vector<std::uint64_t>& ps, std::size_t i, std::uint64_t cur,
                              std::uint64_t x) {
  if (i == ps.size()) return 1;
  std::uint64_t total = 0;
  for (std::uint64_t v = cur;;) {
    total += psi0_rec(ps, i + 1, v, x);
    if (v > x / ps[i]) break;
    v *= ps[i];
  }
  return total;
}
}  // namespace detail

// #{1 <= m <= x : every prime factor of m divides y}
inline std::uint64_t psi0(std::uint64_t x, std::uint64_t y) {
  if (x < 1 || y < 1) throw std::domain_error("psi0 needs x >= 1 and y >= 1");
  std::vector<std::uint64_t> ps;
  for_each_prime_power(y, [&](std::uint64_t p, unsigned) { ps.push_back(p); });
  return detail::psi0_rec(ps, 0, 1, x);
}

// Smallest B with A = B^t.
inline std::int64_t f_base(std::int64_t A) {
  if (A <= 1) throw std::domain_error("f_base needs A > 1");
  std::vector<std::pair<std::uint64_t, unsigned>> pe;
  unsigned g = 0;
  for_each_prime_power(std::uint64_t(A), [&](std::uint64_t p, unsigned e) {
    pe.emplace_back(p, e);
    g = std::gcd(g, e);
  });
  std::int64_t b = 1;
  for (auto [p, e] : pe)
    for (unsigned i = 0; i < e / g; ++i) b *= std::int64_t(p);
  return b;
}

inline std::int64_t gcd_vec(std::span<const std::int64_t> v) {
  std::uint64_t g = 0;
  for (auto x : v) g = std::gcd(g, uabs(x));
  return std::int64_t(g);
}

inline std::int64_t gcd_vec(std::initializer_list<std::int64_t> v) {
  return gcd_vec(std::span<const std::int64_t>(v.begin(), v.size()));
}

// Overflow-checked helpers used throughout.
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int64 overflow");
  return r;
}
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int64 overflow");
  return r;
}

// floor division for signed integers.
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b, r = a % b;
  return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}
inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace mdep
