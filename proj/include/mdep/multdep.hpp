#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"
#include "rational.hpp"

namespace mdep {

// Nonempty vector of nonzero integers.
class IntVector {
 public:
  IntVector(std::vector<std::int64_t> coords) : c_(std::move(coords)) { check(); }
  IntVector(std::initializer_list<std::int64_t> coords) : c_(coords) { check(); }

  std::size_t size() const { return c_.size(); }
  std::int64_t operator[](std::size_t i) const { return c_[i]; }
  const std::vector<std::int64_t>& coords() const { return c_; }
  std::uint64_t height() const {
    std::uint64_t h = 0;
    for (auto x : c_) h = std::max(h, uabs(x));
    return h;
  }

 private:
  void check() const {
    if (c_.empty()) throw std::domain_error("vector must have dimension >= 1");
    for (auto x : c_)
      if (x == 0) throw std::domain_error("vector coordinates must be nonzero");
  }
  std::vector<std::int64_t> c_;
};

struct ExponentMatrix {
  std::vector<std::uint64_t> primes;
  std::vector<std::vector<int>> rows;
  std::vector<int> signs;
};

struct Relation {
  std::vector<BigInt> k;
  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + k[i].str();
    return s + ")";
  }
};

inline ExponentMatrix exponent_matrix(const IntVector& v) {
  ExponentMatrix m;
  std::vector<SignedFactorization> fs;
  fs.reserve(v.size());
  for (auto x : v.coords()) {
    fs.push_back(factorize(x));
    m.signs.push_back(fs.back().sign);
    for (auto& [p, e] : fs.back().exponents) m.primes.push_back(p);
  }
  std::sort(m.primes.begin(), m.primes.end());
  m.primes.erase(std::unique(m.primes.begin(), m.primes.end()), m.primes.end());
  for (auto& f : fs) {
    std::vector<int> row(m.primes.size(), 0);
    for (auto& [p, e] : f.exponents)
      row[std::lower_bound(m.primes.begin(), m.primes.end(), p) - m.primes.begin()] = int(e);
    m.rows.push_back(std::move(row));
  }
  return m;
}

namespace detail {

// Fraction-free elimination; a is rows x cols row-major and is destroyed.
template <class Int, class Wide>
int bareiss_rank(Int* a, int rows, int cols) {
  int rank = 0;
  Int prev = 1;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r * cols + c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < cols; ++j) std::swap(a[piv * cols + j], a[rank * cols + j]);
    const Int pv = a[rank * cols + c];
    for (int r = rank + 1; r < rows; ++r) {
      const Int f = a[r * cols + c];
      for (int j = c + 1; j < cols; ++j)
        a[r * cols + j] = static_cast<Int>((Wide(pv) * Wide(a[r * cols + j]) - Wide(f) * Wide(a[rank * cols + j])) /
                                           Wide(prev));
      a[r * cols + c] = 0;
    }
    prev = pv;
    ++rank;
  }
  return rank;
}

struct PrimePower {
  std::uint64_t p;
  std::uint32_t e;
};

// Dependence and rank of a vector given the factorizations of its absolute
// values. Reuses scratch buffers; one instance per thread.
class DependenceKernel {
 public:
  // rows[i] lists the prime powers of |v_i| (empty for |v_i| = 1).
  void load(std::span<const std::span<const PrimePower>> rows) {
    n_ = int(rows.size());
    has_unit_ = false;
    primes_.clear();
    for (auto r : rows) {
      if (r.empty()) has_unit_ = true;
      for (auto& pp : r) primes_.push_back(pp.p);
    }
    if (has_unit_) return;
    std::sort(primes_.begin(), primes_.end());
    primes_.erase(std::unique(primes_.begin(), primes_.end()), primes_.end());
    m_ = int(primes_.size());
    mat_.assign(std::size_t(n_) * m_, 0);
    for (int i = 0; i < n_; ++i)
      for (auto& pp : rows[i]) {
        int c = int(std::lower_bound(primes_.begin(), primes_.end(), pp.p) - primes_.begin());
        mat_[std::size_t(i) * m_ + c] = pp.e;
      }
    active_ = prune((n_ >= 64) ? ~0ULL : ((1ULL << n_) - 1));
  }

  bool dependent() {
    if (has_unit_) return true;
    if (active_ == 0) return false;
    return subset_dependent(active_);
  }

  // Definition of rank: 0 with a unit coordinate, else (smallest dependent
  // subset size) - 1, or n when independent.
  int rank() {
    if (has_unit_) return 0;
    if (!dependent()) return n_;
    std::vector<int> idx;
    for (int i = 0; i < n_; ++i)
      if (active_ >> i & 1) idx.push_back(i);
    const int a = int(idx.size());
    for (int s = 2; s <= a; ++s) {
      // all s-subsets of idx, via index combinations
      std::vector<int> comb(s);
      for (int i = 0; i < s; ++i) comb[i] = i;
      while (true) {
        std::uint64_t mask = 0;
        for (int i : comb) mask |= 1ULL << idx[i];
        std::uint64_t pruned = prune(mask);
        if (pruned == mask && subset_dependent(mask)) return s - 1;
        int i = s - 1;
        while (i >= 0 && comb[i] == a - s + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
      }
    }
    return n_;  // unreachable when dependent() holds
  }

 private:
  // Drop rows that own a prime no other kept row has; such rows cannot take
  // part in any relation.
  std::uint64_t prune(std::uint64_t mask) {
    cnt_.assign(m_, 0);
    bool changed = true;
    while (changed && mask) {
      changed = false;
      std::fill(cnt_.begin(), cnt_.end(), 0);
      for (int i = 0; i < n_; ++i)
        if (mask >> i & 1)
          for (int c = 0; c < m_; ++c) cnt_[c] += mat_[std::size_t(i) * m_ + c] != 0;
      for (int i = 0; i < n_; ++i) {
        if (!(mask >> i & 1)) continue;
        for (int c = 0; c < m_; ++c)
          if (mat_[std::size_t(i) * m_ + c] != 0 && cnt_[c] == 1) {
            mask &= ~(1ULL << i);
            changed = true;
            break;
          }
      }
    }
    return mask;
  }

  bool subset_dependent(std::uint64_t mask) {
    const int r = std::popcount(mask);
    if (r == 0) return false;
    if (r > m_) return true;
    if (r <= 10) {
      work_.clear();
      for (int i = 0; i < n_; ++i)
        if (mask >> i & 1)
          work_.insert(work_.end(), mat_.begin() + std::ptrdiff_t(i) * m_, mat_.begin() + std::ptrdiff_t(i + 1) * m_);
      return bareiss_rank<std::int64_t, __int128>(work_.data(), r, m_) < r;
    }
    std::vector<BigInt> big;
    for (int i = 0; i < n_; ++i)
      if (mask >> i & 1)
        for (int c = 0; c < m_; ++c) big.emplace_back(mat_[std::size_t(i) * m_ + c]);
    return bareiss_rank<BigInt, BigInt>(big.data(), r, m_) < r;
  }

  int n_ = 0, m_ = 0;
  bool has_unit_ = false;
  std::uint64_t active_ = 0;
  std::vector<std::uint64_t> primes_;
  std::vector<std::int64_t> mat_, work_;
  std::vector<int> cnt_;
};

inline DependenceKernel& thread_kernel() {
  thread_local DependenceKernel k;
  return k;
}

inline void load_vector(DependenceKernel& k, const IntVector& v) {
  if (v.size() > 64) throw std::domain_error("dimension above 64 is not supported");
  std::vector<std::vector<PrimePower>> store(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for_each_prime_power(uabs(v[i]), [&](std::uint64_t p, unsigned e) { store[i].push_back({p, e}); });
  std::vector<std::span<const PrimePower>> rows(store.begin(), store.end());
  k.load(rows);
}

// Integer basis of {k : sum_i k_i * row_i = 0}, each primitive with first
// nonzero entry positive, from the reduced row echelon form of E^T.
inline std::vector<std::vector<BigInt>> relation_basis(const ExponentMatrix& em) {
  const std::size_t n = em.rows.size(), m = em.primes.size();
  std::vector<std::vector<Rational>> a(m, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < m; ++c) a[c][i] = em.rows[i][c];
  std::vector<std::size_t> pivcol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t piv = r;
    while (piv < m && a[piv][c] == 0) ++piv;
    if (piv == m) continue;
    std::swap(a[piv], a[r]);
    Rational inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t rr = 0; rr < m; ++rr)
      if (rr != r && a[rr][c] != 0) {
        Rational f = a[rr][c];
        for (std::size_t j = 0; j < n; ++j) a[rr][j] -= f * a[r][j];
      }
    pivcol.push_back(c);
    ++r;
  }
  std::vector<std::vector<BigInt>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (std::find(pivcol.begin(), pivcol.end(), f) != pivcol.end()) continue;
    std::vector<Rational> k(n, 0);
    k[f] = 1;
    for (std::size_t i = 0; i < pivcol.size(); ++i) k[pivcol[i]] = -a[i][f];
    BigInt l = 1;
    for (auto& x : k) l = boost::multiprecision::lcm(l, denominator(x));
    std::vector<BigInt> ki(n);
    BigInt g = 0;
    for (std::size_t i = 0; i < n; ++i) {
      ki[i] = numerator(Rational(k[i] * l));
      g = boost::multiprecision::gcd(g, ki[i]);
    }
    bool flip = false;
    for (auto& x : ki)
      if (x != 0) {
        flip = x < 0;
        break;
      }
    for (auto& x : ki) x = (flip ? -x : x) / g;
    basis.push_back(std::move(ki));
  }
  return basis;
}

inline bool sign_product_positive(const IntVector& v, const std::vector<BigInt>& k) {
  BigInt odd = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < 0) odd += k[i];
  return (odd % 2) == 0;
}

}  // namespace detail

// Checks prod v_i^{k_i} = 1 in factorization space; no powers are evaluated.
inline bool verify_relation(const IntVector& v, const Relation& r) {
  if (r.k.size() != v.size()) return false;
  if (std::all_of(r.k.begin(), r.k.end(), [](const BigInt& x) { return x == 0; })) return false;
  ExponentMatrix em = exponent_matrix(v);
  for (std::size_t c = 0; c < em.primes.size(); ++c) {
    BigInt s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += r.k[i] * em.rows[i][c];
    if (s != 0) return false;
  }
  return detail::sign_product_positive(v, r.k);
}

inline bool is_dependent(const IntVector& v) {
  auto& k = detail::thread_kernel();
  detail::load_vector(k, v);
  return k.dependent();
}

inline int mult_rank(const IntVector& v) {
  auto& k = detail::thread_kernel();
  detail::load_vector(k, v);
  return k.rank();
}

inline std::optional<Relation> relation(const IntVector& v) {
  const std::size_t n = v.size();
  auto unit = [&](std::size_t i, int c) {
    Relation r{std::vector<BigInt>(n, 0)};
    r.k[i] = c;
    return r;
  };
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] == 1) return unit(i, 1);
  for (std::size_t i = 0; i < n; ++i)
    if (v[i] == -1) return unit(i, 2);
  auto basis = detail::relation_basis(exponent_matrix(v));
  if (basis.empty()) return std::nullopt;
  Relation r{basis.front()};
  if (!detail::sign_product_positive(v, r.k))
    for (auto& x : r.k) x *= 2;
  if (!verify_relation(v, r)) throw std::logic_error("relation failed verification");
  return r;
}

inline std::optional<Relation> full_support_witness(const IntVector& v) {
  const std::size_t n = v.size();
  auto basis = detail::relation_basis(exponent_matrix(v));
  for (std::size_t i = 0; i < n; ++i)
    if (std::none_of(basis.begin(), basis.end(), [&](const auto& b) { return b[i] != 0; })) return std::nullopt;
  BigInt maxabs = 0;
  for (auto& b : basis)
    for (auto& x : b) maxabs = std::max(maxabs, BigInt(abs(x)));
  BigInt L = 1 + maxabs * BigInt(n);
  for (int attempt = 0; attempt < 64; ++attempt, L *= 2) {
    std::vector<BigInt> w(n, 0);
    BigInt c = 1;
    for (auto& b : basis) {
      for (std::size_t i = 0; i < n; ++i) w[i] += c * b[i];
      c *= L;
    }
    if (std::any_of(w.begin(), w.end(), [](const BigInt& x) { return x == 0; })) continue;
    BigInt g = 0;
    for (auto& x : w) g = boost::multiprecision::gcd(g, x);
    for (auto& x : w) x /= g;
    Relation r{w};
    if (!detail::sign_product_positive(v, r.k))
      for (auto& x : r.k) x *= 2;
    if (verify_relation(v, r)) return r;
  }
  throw std::logic_error("full-support witness construction failed");
}

inline bool has_full_support_relation(const IntVector& v) { return full_support_witness(v).has_value(); }

}  // namespace mdep
