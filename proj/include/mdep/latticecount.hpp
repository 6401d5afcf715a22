#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "multdep.hpp"
#include "rational.hpp"

namespace mdep {

class HyperplaneSpec {
 public:
  HyperplaneSpec() : HyperplaneSpec({0}, 0) {}
  HyperplaneSpec(std::vector<std::int64_t> alpha, std::int64_t J) : alpha_(std::move(alpha)), J_(J) {
    if (alpha_.empty()) throw std::domain_error("alpha must have dimension >= 1");
    nnz_ = std::size_t(std::count_if(alpha_.begin(), alpha_.end(), [](auto x) { return x != 0; }));
  }
  const std::vector<std::int64_t>& alpha() const { return alpha_; }
  std::int64_t J() const { return J_; }
  std::size_t n() const { return alpha_.size(); }
  std::size_t nnz() const { return nnz_; }

 private:
  std::vector<std::int64_t> alpha_;
  std::int64_t J_;
  std::size_t nnz_;
};

enum class DomainKind { signed_box, positive };

struct DomainSpec {
  DomainKind kind = DomainKind::signed_box;
  std::int64_t H = 1;
};

struct CountReport {
  HyperplaneSpec spec;
  DomainSpec domain;
  std::uint64_t total_on_plane = 0;
  std::uint64_t dependent_total = 0;
  std::map<int, std::uint64_t> by_rank;
  bool stratified = false;
  bool degenerate = false;
  double wall_seconds = 0;

  void merge(const CountReport& o) {
    total_on_plane += o.total_on_plane;
    dependent_total += o.dependent_total;
    for (auto [r, c] : o.by_rank) by_rank[r] += c;
  }
};

// Closed integer interval per coordinate.
using Box = std::vector<std::pair<std::int64_t, std::int64_t>>;

// ||alpha||^2 / gcd(alpha)^2
inline Rational covolume_ratio(std::span<const std::int64_t> alpha) {
  std::int64_t g = gcd_vec(alpha);
  if (g == 0) throw std::domain_error("covolume needs a nonzero coefficient vector");
  BigInt s = 0;
  for (auto a : alpha) s += BigInt(a) * a;
  return Rational(s, BigInt(g) * g);
}

namespace detail {

inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  // a and m coprime, m >= 1
  std::int64_t r0 = m, r1 = ((a % m) + m) % m, x0 = 0, x1 = 1;
  while (r1) {
    std::int64_t q = r0 / r1, t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
  }
  return ((x0 % m) + m) % m;
}

// Solutions t of a*t ≡ b (mod m) as (t0, step); step = 0 means none.
inline std::pair<std::int64_t, std::int64_t> solve_linear_congruence(std::int64_t a, std::int64_t b, std::int64_t m) {
  const std::int64_t g = std::int64_t(std::gcd(uabs(a), std::uint64_t(m)));
  if (b % g != 0) return {0, 0};
  const std::int64_t mm = m / g;
  if (mm == 1) return {0, 1};
  std::int64_t aa = ((a / g) % mm + mm) % mm, bb = ((b / g) % mm + mm) % mm;
  __int128 t = __int128(bb) * mod_inverse(aa, mm) % mm;
  return {std::int64_t(t), mm};
}

// Count of t in [lo, hi] with t ≡ t0 (mod step).
inline std::uint64_t count_in_class(std::int64_t lo, std::int64_t hi, std::int64_t t0, std::int64_t step) {
  if (lo > hi) return 0;
  return std::uint64_t(floor_div(hi - t0, step) - floor_div(lo - 1 - t0, step));
}

struct CoordRange {
  std::int64_t lo = 0, hi = -1;
  bool skip_zero = false;
};

// Visits the integer points of alpha.v = J inside per-coordinate ranges;
// one nonzero-alpha coordinate (the pivot) is solved from the others.
// visit(const int64_t* v) is called in lexicographic order of the free
// coordinates.
class PlaneWalker {
 public:
  PlaneWalker(const std::vector<std::int64_t>& alpha, std::int64_t J, std::vector<CoordRange> ranges)
      : a_(alpha), J_(J), r_(std::move(ranges)), v_(alpha.size(), 0) {
    const std::size_t n = a_.size();
    pivot_ = -1;
    for (std::size_t i = 0; i < n; ++i)
      if (a_[i] != 0 && (pivot_ < 0 || uabs(a_[i]) >= uabs(a_[std::size_t(pivot_)]))) pivot_ = int(i);
    for (std::size_t i = 0; i < n; ++i)
      if (int(i) != pivot_) free_.push_back(i);
  }

  int pivot() const { return pivot_; }
  const std::vector<std::size_t>& free_coords() const { return free_; }

  // Restrict the first free coordinate (used for chunking).
  void restrict_first(std::int64_t lo, std::int64_t hi) {
    if (free_.empty()) return;
    auto& rg = r_[free_[0]];
    rg.lo = std::max(rg.lo, lo);
    rg.hi = std::min(rg.hi, hi);
  }

  template <class Visit>
  void run(Visit&& visit) {
    if (pivot_ < 0 && J_ != 0) return;
    rec(0, 0, visit);
  }

 private:
  bool pivot_ok(std::int64_t rem) {
    const std::size_t p = std::size_t(pivot_);
    if (rem % a_[p] != 0) return false;
    std::int64_t x = rem / a_[p];
    const auto& rg = r_[p];
    if (x < rg.lo || x > rg.hi || (rg.skip_zero && x == 0)) return false;
    v_[p] = x;
    return true;
  }

  template <class Visit>
  void rec(std::size_t level, std::int64_t partial, Visit& visit) {
    if (level == free_.size()) {
      if (pivot_ < 0) {
        visit(v_.data());
      } else if (pivot_ok(J_ - partial)) {
        visit(v_.data());
      }
      return;
    }
    const std::size_t i = free_[level];
    const auto& rg = r_[i];
    const std::int64_t ai = a_[i];
    if (level + 1 == free_.size() && pivot_ >= 0 && ai != 0) {
      // innermost: step through the residue class that makes the pivot integral
      const std::int64_t m = std::int64_t(uabs(a_[std::size_t(pivot_)]));
      const std::int64_t rem0 = J_ - partial;
      auto [t0, step] = solve_linear_congruence(ai, rem0, m);
      if (step == 0) return;
      std::int64_t t = rg.lo + ((t0 - rg.lo) % step + step) % step;
      for (; t <= rg.hi; t += step) {
        if (rg.skip_zero && t == 0) continue;
        v_[i] = t;
        if (pivot_ok(rem0 - ai * t)) visit(v_.data());
      }
      return;
    }
    for (std::int64_t t = rg.lo; t <= rg.hi; ++t) {
      if (rg.skip_zero && t == 0) continue;
      v_[i] = t;
      rec(level + 1, partial + ai * t, visit);
    }
  }

  std::vector<std::int64_t> a_;
  std::int64_t J_;
  std::vector<CoordRange> r_;
  std::vector<std::int64_t> v_;
  int pivot_;
  std::vector<std::size_t> free_;
};

inline CoordRange domain_range(const DomainSpec& d) {
  if (d.H < 1) throw std::domain_error("H must be positive");
  if (d.kind == DomainKind::positive) return {1, d.H, false};
  return {-d.H, d.H, true};
}

// Prime powers of every integer in 1..H, laid out flat.
class FactorTable {
 public:
  explicit FactorTable(std::int64_t H) : off_(std::size_t(H) + 2, 0) {
    for (std::int64_t m = 1; m <= H; ++m) {
      off_[std::size_t(m)] = std::uint32_t(pp_.size());
      for_each_prime_power(std::uint64_t(m), [&](std::uint64_t p, unsigned e) { pp_.push_back({p, e}); });
    }
    off_[std::size_t(H) + 1] = std::uint32_t(pp_.size());
  }
  std::span<const PrimePower> operator[](std::uint64_t m) const {
    return {pp_.data() + off_[m], pp_.data() + off_[m + 1]};
  }

 private:
  std::vector<std::uint32_t> off_;
  std::vector<PrimePower> pp_;
};

}  // namespace detail

inline std::uint64_t hyperplane_lattice_count(const HyperplaneSpec& spec, const Box& box) {
  const auto& a = spec.alpha();
  if (box.size() != a.size()) throw std::domain_error("box dimension does not match alpha");
  for (auto [lo, hi] : box)
    if (lo > hi) return 0;
  const std::int64_t g = gcd_vec(a);
  auto len = [&](std::size_t i) { return std::uint64_t(box[i].second - box[i].first + 1); };
  std::uint64_t zero_factor = 1;
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) {
      if (__builtin_mul_overflow(zero_factor, len(i), &zero_factor)) throw std::overflow_error("count overflow");
    } else {
      nz.push_back(i);
    }
  }
  if (g == 0) return spec.J() == 0 ? zero_factor : 0;
  if (spec.J() % g != 0) return 0;

  std::size_t p = nz[0];
  for (auto i : nz)
    if (uabs(a[i]) >= uabs(a[p])) p = i;
  std::vector<std::size_t> fr;
  for (auto i : nz)
    if (i != p) fr.push_back(i);
  const std::int64_t ap = a[p], m = std::int64_t(uabs(ap));
  const auto [plo, phi] = box[p];

  std::uint64_t total = 0;
  std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t level, std::int64_t partial) {
    const std::int64_t rem0 = spec.J() - partial;
    if (fr.empty()) {
      if (rem0 % ap == 0 && rem0 / ap >= plo && rem0 / ap <= phi) ++total;
      return;
    }
    const std::size_t i = fr[level];
    const std::int64_t ai = a[i];
    if (level + 1 < fr.size()) {
      for (std::int64_t t = box[i].first; t <= box[i].second; ++t) rec(level + 1, partial + ai * t);
      return;
    }
    // ap*x = rem0 - ai*t with x in [plo, phi]  =>  ai*t in [L, U]
    std::int64_t e1 = rem0 - ap * plo, e2 = rem0 - ap * phi;
    std::int64_t L = std::min(e1, e2), U = std::max(e1, e2);
    std::int64_t tlo, thi;
    if (ai > 0) {
      tlo = ceil_div(L, ai);
      thi = floor_div(U, ai);
    } else {
      tlo = ceil_div(U, ai);
      thi = floor_div(L, ai);
    }
    tlo = std::max(tlo, box[i].first);
    thi = std::min(thi, box[i].second);
    auto [t0, step] = detail::solve_linear_congruence(ai, rem0, m);
    if (step == 0) return;
    total += detail::count_in_class(tlo, thi, t0, step);
  };
  rec(0, 0);
  std::uint64_t out;
  if (__builtin_mul_overflow(total, zero_factor, &out)) throw std::overflow_error("count overflow");
  return out;
}

// Visits every solution with nonzero coordinates in the domain exactly once.
template <class Visitor>
void enumerate_solutions(const HyperplaneSpec& spec, const DomainSpec& domain, Visitor&& visit) {
  std::vector<detail::CoordRange> ranges(spec.n(), detail::domain_range(domain));
  detail::PlaneWalker w(spec.alpha(), spec.J(), ranges);
  w.run([&](const std::int64_t* v) { visit(IntVector(std::vector<std::int64_t>(v, v + spec.n()))); });
}

namespace detail {

inline std::vector<std::pair<std::int64_t, std::int64_t>> split_range(std::int64_t lo, std::int64_t hi, unsigned parts) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  const std::int64_t len = hi - lo + 1;
  if (len <= 0) return out;
  parts = unsigned(std::min<std::int64_t>(parts, len));
  std::int64_t start = lo;
  for (unsigned k = 0; k < parts; ++k) {
    std::int64_t sz = len / parts + (std::int64_t(k) < len % parts ? 1 : 0);
    out.emplace_back(start, start + sz - 1);
    start += sz;
  }
  return out;
}

}  // namespace detail

// Chunked variant: the first free coordinate's range is split into disjoint
// pieces processed on separate threads. visit must be thread-safe.
template <class Visitor>
void enumerate_solutions_chunked(const HyperplaneSpec& spec, const DomainSpec& domain, unsigned threads,
                                 Visitor&& visit) {
  std::vector<detail::CoordRange> ranges(spec.n(), detail::domain_range(domain));
  detail::PlaneWalker probe(spec.alpha(), spec.J(), ranges);
  if (threads <= 1 || probe.free_coords().empty()) {
    enumerate_solutions(spec, domain, visit);
    return;
  }
  const auto& r0 = ranges[probe.free_coords()[0]];
  std::vector<std::thread> pool;
  for (auto [lo, hi] : detail::split_range(r0.lo, r0.hi, threads))
    pool.emplace_back([&, lo = lo, hi = hi] {
      detail::PlaneWalker w(spec.alpha(), spec.J(), ranges);
      w.restrict_first(lo, hi);
      w.run([&](const std::int64_t* v) { visit(IntVector(std::vector<std::int64_t>(v, v + spec.n()))); });
    });
  for (auto& t : pool) t.join();
}

namespace detail {

// Coordinates with alpha_i = 0 do not touch the linear constraint, and
// dependence and rank only see absolute values, so those coordinates run over
// 1..H with weight 2 each in the signed domain. All other coordinates are
// enumerated in full.
inline CountReport count_chunk(const HyperplaneSpec& spec, const DomainSpec& domain, bool stratify,
                               const FactorTable& table, std::int64_t lo, std::int64_t hi, bool restrict) {
  const std::size_t n = spec.n();
  std::vector<CoordRange> ranges(n, domain_range(domain));
  std::uint64_t weight = 1;
  for (std::size_t i = 0; i < n; ++i)
    if (spec.alpha()[i] == 0) {
      ranges[i] = {1, domain.H, false};
      if (domain.kind == DomainKind::signed_box) weight *= 2;
    }
  PlaneWalker w(spec.alpha(), spec.J(), ranges);
  if (restrict) w.restrict_first(lo, hi);
  CountReport rep;
  DependenceKernel kernel;
  std::vector<std::span<const PrimePower>> rows(n);
  std::vector<std::uint64_t> rank_count(n + 1, 0);
  w.run([&](const std::int64_t* v) {
    rep.total_on_plane += weight;
    for (std::size_t i = 0; i < n; ++i) rows[i] = table[uabs(v[i])];
    kernel.load(rows);
    if (stratify) {
      int r = kernel.rank();
      if (r < int(n)) rank_count[std::size_t(r)] += weight;
    } else if (kernel.dependent()) {
      rep.dependent_total += weight;
    }
  });
  if (stratify)
    for (std::size_t r = 0; r < n; ++r)
      if (rank_count[r]) {
        rep.by_rank[int(r)] = rank_count[r];
        rep.dependent_total += rank_count[r];
      }
  return rep;
}

}  // namespace detail

inline CountReport count_S(const HyperplaneSpec& spec, const DomainSpec& domain, bool stratify,
                           unsigned threads = 1) {
  auto t0 = std::chrono::steady_clock::now();
  CountReport rep;
  rep.spec = spec;
  rep.domain = domain;
  rep.stratified = stratify;
  (void)detail::domain_range(domain);
  if (spec.n() > 64) throw std::domain_error("dimension above 64 is not supported");
  if (spec.nnz() == 0 && spec.J() != 0) {
    rep.degenerate = true;
    return rep;
  }
  detail::FactorTable table(domain.H);
  std::vector<detail::CoordRange> probe_ranges(spec.n(), detail::domain_range(domain));
  for (std::size_t i = 0; i < spec.n(); ++i)
    if (spec.alpha()[i] == 0) probe_ranges[i] = {1, domain.H, false};
  detail::PlaneWalker probe(spec.alpha(), spec.J(), probe_ranges);
  if (threads <= 1 || probe.free_coords().empty()) {
    rep.merge(detail::count_chunk(spec, domain, stratify, table, 0, 0, false));
  } else {
    const auto& r0 = probe_ranges[probe.free_coords()[0]];
    auto chunks = detail::split_range(r0.lo, r0.hi, threads);
    std::vector<CountReport> parts(chunks.size());
    std::vector<std::thread> pool;
    for (std::size_t c = 0; c < chunks.size(); ++c)
      pool.emplace_back([&, c] {
        parts[c] = detail::count_chunk(spec, domain, stratify, table, chunks[c].first, chunks[c].second, true);
      });
    for (auto& t : pool) t.join();
    for (auto& p : parts) rep.merge(p);
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---------------------------------------------------------------------------
// Curve systems

enum class CurveVariant { two_var_a, two_var_b, three_var, four_var };

struct CurveSystemSpec {
  CurveVariant variant = CurveVariant::two_var_a;
  std::int64_t A = 1, B = 1;
  std::vector<std::int64_t> k;
  std::vector<std::int64_t> alpha;
  std::int64_t J = 0;
};

struct CurveCount {
  std::uint64_t count = 0;
  std::uint64_t excluded = 0;  // 3var: solutions dropped by alpha_1 v_1 = J or alpha_2 v_2 = J
};

namespace detail {

// sign and prime exponents of a product of integer powers
class Monomial {
 public:
  void clear() {
    sign_ = 1;
    pe_.clear();
  }
  void mul(std::int64_t x, std::int64_t k) {
    if (x < 0 && (k & 1)) sign_ = -sign_;
    for_each_prime_power(uabs(x), [&](std::uint64_t p, unsigned e) { pe_.emplace_back(p, std::int64_t(e) * k); });
  }
  void normalize() {
    std::sort(pe_.begin(), pe_.end());
    std::size_t w = 0;
    for (std::size_t i = 0; i < pe_.size();) {
      auto p = pe_[i].first;
      std::int64_t s = 0;
      for (; i < pe_.size() && pe_[i].first == p; ++i) s += pe_[i].second;
      if (s) pe_[w++] = {p, s};
    }
    pe_.resize(w);
  }
  int sign() const { return sign_; }
  const std::vector<std::pair<std::uint64_t, std::int64_t>>& terms() const { return pe_; }

 private:
  int sign_ = 1;
  std::vector<std::pair<std::uint64_t, std::int64_t>> pe_;
};

// Integer x with x^k = m (m normalized), |x| <= H; returns the count of such x
// (0, 1 or 2) and writes nothing else.
inline unsigned count_kth_roots(const Monomial& m, std::int64_t k, std::int64_t H) {
  std::uint64_t root = 1;
  for (auto [p, e] : m.terms()) {
    if (e < 0 || e % k != 0) return 0;
    for (std::int64_t i = 0; i < e / k; ++i) {
      if (root > std::uint64_t(H) / p) return 0;
      root *= p;
    }
  }
  if (root > std::uint64_t(H)) return 0;
  if (k % 2 == 0) return m.sign() > 0 ? 2 : 0;
  return 1;
}

inline void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace detail

inline void validate_curve_system(const CurveSystemSpec& s) {
  using detail::require;
  auto positive = [](const std::vector<std::int64_t>& v) {
    return std::all_of(v.begin(), v.end(), [](auto x) { return x > 0; });
  };
  auto nonzero = [](const std::vector<std::int64_t>& v) {
    return std::all_of(v.begin(), v.end(), [](auto x) { return x != 0; });
  };
  switch (s.variant) {
    case CurveVariant::two_var_a:
    case CurveVariant::two_var_b:
      require(s.k.size() == 3 && s.alpha.size() == 2, "two-variable system needs k of length 3 and alpha of length 2");
      require(positive(s.k), "two-variable system needs positive exponents k");
      require(s.A != 0 && s.B != 0 && nonzero(s.alpha) && s.J != 0,
              "two-variable system needs nonzero A, B, alpha_1, alpha_2 and J");
      break;
    case CurveVariant::three_var:
      require(s.k.size() == 3 && s.alpha.size() == 3, "three-variable system needs k and alpha of length 3");
      require(positive(s.k), "three-variable system needs positive exponents k");
      require(s.A != 0 && s.B != 0 && nonzero(s.alpha) && s.J != 0,
              "three-variable system needs nonzero A, B, alpha_1..alpha_3 and J");
      break;
    case CurveVariant::four_var:
      require(s.k.size() == 4 && s.alpha.size() == 4, "four-variable system needs k and alpha of length 4");
      require(positive(s.k), "four-variable system needs positive exponents k");
      require(s.A == 1 && s.B == 1, "four-variable system has A = B = 1");
      require(std::count(s.alpha.begin(), s.alpha.end(), 0) <= 1 && s.J != 0,
              "four-variable system needs at most one zero coefficient and J != 0");
      break;
  }
}

inline CurveCount count_curve_system(const CurveSystemSpec& s, std::int64_t H) {
  validate_curve_system(s);
  if (H < 1) throw std::domain_error("H must be positive");
  CurveCount out;
  detail::Monomial lhs, rhs;
  auto in_box = [&](std::int64_t x) { return x != 0 && x >= -H && x <= H; };

  if (s.variant == CurveVariant::two_var_a || s.variant == CurveVariant::two_var_b) {
    const std::int64_t a1 = s.alpha[0], a2 = s.alpha[1];
    for (std::int64_t v1 = -H; v1 <= H; ++v1) {
      if (v1 == 0) continue;
      std::int64_t rem = s.J - a1 * v1;
      if (rem % a2) continue;
      std::int64_t v2 = rem / a2;
      if (!in_box(v2)) continue;
      // solve for v3^{k3}
      lhs.clear();
      if (s.variant == CurveVariant::two_var_a) {  // A v1^k1 v2^k2 = B v3^k3
        lhs.mul(s.A, 1);
        lhs.mul(v1, s.k[0]);
        lhs.mul(v2, s.k[1]);
        lhs.mul(s.B, -1);
      } else {  // A v1^k1 v3^k3 = B v2^k2
        lhs.mul(s.B, 1);
        lhs.mul(v2, s.k[1]);
        lhs.mul(s.A, -1);
        lhs.mul(v1, -s.k[0]);
      }
      lhs.normalize();
      out.count += detail::count_kth_roots(lhs, s.k[2], H);
    }
    return out;
  }

  auto equal = [&](const detail::Monomial& x, const detail::Monomial& y) {
    return x.sign() == y.sign() && x.terms() == y.terms();
  };

  if (s.variant == CurveVariant::three_var) {
    const auto& a = s.alpha;
    for (std::int64_t v1 = -H; v1 <= H; ++v1) {
      if (v1 == 0) continue;
      for (std::int64_t v2 = -H; v2 <= H; ++v2) {
        if (v2 == 0) continue;
        std::int64_t rem = s.J - a[0] * v1 - a[1] * v2;
        if (rem % a[2]) continue;
        std::int64_t v3 = rem / a[2];
        if (!in_box(v3)) continue;
        lhs.clear();
        lhs.mul(s.A, 1);
        lhs.mul(v1, s.k[0]);
        lhs.mul(v2, s.k[1]);
        lhs.normalize();
        rhs.clear();
        rhs.mul(s.B, 1);
        rhs.mul(v3, s.k[2]);
        rhs.normalize();
        if (!equal(lhs, rhs)) continue;
        if (a[0] * v1 == s.J || a[1] * v2 == s.J)
          ++out.excluded;
        else
          ++out.count;
      }
    }
    return out;
  }

  // four_var: v1^k1 v2^k2 = v3^k3 v4^k4
  HyperplaneSpec plane(s.alpha, s.J);
  enumerate_solutions(plane, DomainSpec{DomainKind::signed_box, H}, [&](const IntVector& v) {
    lhs.clear();
    lhs.mul(v[0], s.k[0]);
    lhs.mul(v[1], s.k[1]);
    lhs.normalize();
    rhs.clear();
    rhs.mul(v[2], s.k[2]);
    rhs.mul(v[3], s.k[3]);
    rhs.normalize();
    if (equal(lhs, rhs)) ++out.count;
  });
  return out;
}

}  // namespace mdep
