#include <gtest/gtest.h>

#include <random>

#include <boost/multiprecision/cpp_int.hpp>

#include <mdep/latticecount.hpp>

#include "oracles.hpp"

using namespace mdep;
using V = std::vector<std::int64_t>;

namespace {

std::vector<V> visits(const HyperplaneSpec& s, const DomainSpec& d) {
  std::vector<V> out;
  enumerate_solutions(s, d, [&](const IntVector& v) { out.push_back(v.coords()); });
  return out;
}

BigInt ipow(std::int64_t b, std::int64_t e) {
  BigInt r = 1;
  for (std::int64_t i = 0; i < e; ++i) r *= b;
  return r;
}

// direct evaluation with big integers
std::uint64_t curve_brute(const CurveSystemSpec& s, std::int64_t H, bool exclude = true) {
  std::uint64_t c = 0;
  const auto& k = s.k;
  const auto& a = s.alpha;
  for (std::int64_t x = -H; x <= H; ++x)
    for (std::int64_t y = -H; y <= H; ++y)
      for (std::int64_t z = -H; z <= H; ++z) {
        if (!x || !y || !z) continue;
        switch (s.variant) {
          case CurveVariant::two_var_a:
            c += a[0] * x + a[1] * y == s.J && s.A * ipow(x, k[0]) * ipow(y, k[1]) == s.B * ipow(z, k[2]);
            break;
          case CurveVariant::two_var_b:
            c += a[0] * x + a[1] * y == s.J && s.A * ipow(x, k[0]) * ipow(z, k[2]) == s.B * ipow(y, k[1]);
            break;
          case CurveVariant::three_var:
            c += a[0] * x + a[1] * y + a[2] * z == s.J && (!exclude || (a[0] * x != s.J && a[1] * y != s.J)) &&
                 s.A * ipow(x, k[0]) * ipow(y, k[1]) == s.B * ipow(z, k[2]);
            break;
          case CurveVariant::four_var:
            for (std::int64_t w = -H; w <= H; ++w)
              c += w && a[0] * x + a[1] * y + a[2] * z + a[3] * w == s.J &&
                   ipow(x, k[0]) * ipow(y, k[1]) == ipow(z, k[2]) * ipow(w, k[3]);
            break;
        }
      }
  return c;
}

}  // namespace

TEST(Covolume, Examples) {
  EXPECT_EQ(covolume_ratio(V{1, 1}), make_rational(2));
  EXPECT_EQ(covolume_ratio(V{2, 2}), make_rational(2));
  EXPECT_EQ(covolume_ratio(V{3, 0, 0}), make_rational(1));
  EXPECT_THROW(covolume_ratio(V{0, 0}), std::domain_error);
}

TEST(HyperplaneCount, Examples) {
  EXPECT_EQ(hyperplane_lattice_count(HyperplaneSpec({2, 2}, 1), Box(2, {-9, 9})), 0u);
  for (std::int64_t H : {1, 7, 30})
    EXPECT_EQ(hyperplane_lattice_count(HyperplaneSpec({1, 1}, 0), Box(2, {-H, H})), std::uint64_t(2 * H + 1));
  EXPECT_EQ(hyperplane_lattice_count(HyperplaneSpec({1, 1, 1}, 0), Box(3, {-1, 1})), 7u);
}

TEST(HyperplaneCount, MatchesNestedLoops) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::int64_t> d(-4, 4);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = 1 + t % 4;
    V a(n);
    Box box(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = d(rng);
      std::int64_t lo = d(rng) - 2, hi = lo + std::int64_t(rng() % 7);
      box[i] = {lo, hi};
    }
    std::int64_t J = d(rng) * 2;
    ASSERT_EQ(hyperplane_lattice_count(HyperplaneSpec(a, J), box), oracle::lattice_count(a, J, box))
        << ::testing::PrintToString(a) << " J=" << J;
  }
}

TEST(Enumerate, VisitOrderExamples) {
  EXPECT_EQ(visits(HyperplaneSpec({1, 0}, 1), {DomainKind::signed_box, 3}),
            (std::vector<V>{{1, -3}, {1, -2}, {1, -1}, {1, 1}, {1, 2}, {1, 3}}));
  EXPECT_EQ(visits(HyperplaneSpec({1, 1}, 0), {DomainKind::signed_box, 1}), (std::vector<V>{{-1, 1}, {1, -1}}));
  EXPECT_EQ(visits(HyperplaneSpec({1, 1, 1}, 3), {DomainKind::positive, 1}), (std::vector<V>{{1, 1, 1}}));
}

TEST(Enumerate, ExactlyTheSolutionSet) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::int64_t> d(-3, 3);
  for (int t = 0; t < 100; ++t) {
    V a(1 + t % 3);
    for (auto& x : a) x = d(rng);
    std::int64_t J = d(rng);
    bool pos = t % 2;
    std::vector<V> want;
    oracle::for_each_solution(a, J, 4, pos, [&](const V& x) { want.push_back(x); });
    auto got = visits(HyperplaneSpec(a, J), {pos ? DomainKind::positive : DomainKind::signed_box, 4});
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want) << ::testing::PrintToString(a) << " J=" << J;
  }
}

TEST(CountS, Examples) {
  EXPECT_EQ(count_S(HyperplaneSpec({1, 0, 0}, 1), {DomainKind::signed_box, 5}, false).dependent_total, 100u);
  auto r = count_S(HyperplaneSpec({1, 1, 1}, 6), {DomainKind::positive, 6}, true);
  EXPECT_EQ(r.dependent_total, 10u);
  EXPECT_EQ(r.by_rank, (std::map<int, std::uint64_t>{{0, 9}, {1, 1}}));
  EXPECT_EQ(count_S(HyperplaneSpec({0, 0}, 0), {DomainKind::signed_box, 1}, false).dependent_total, 4u);
  EXPECT_TRUE(count_S(HyperplaneSpec({0, 0}, 3), {DomainKind::signed_box, 4}, false).degenerate);
}

TEST(CountS, MatchesBruteForce) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::int64_t> d(-3, 3);
  for (int t = 0; t < 60; ++t) {
    V a(2 + t % 2);
    for (auto& x : a) x = d(rng);
    std::int64_t J = d(rng) * 2;
    bool pos = t % 3 == 0;
    std::int64_t H = a.size() == 2 ? 40 : 12;
    if (std::all_of(a.begin(), a.end(), [](auto x) { return x == 0; }) && J != 0) continue;
    auto rep = count_S(HyperplaneSpec(a, J), {pos ? DomainKind::positive : DomainKind::signed_box, H}, true);
    ASSERT_EQ(rep.dependent_total, oracle::dependent_count(a, J, H, pos)) << ::testing::PrintToString(a) << " J=" << J;
    std::uint64_t sum = 0;
    for (auto [rank, c] : rep.by_rank) {
      if (rank < int(a.size())) sum += c;
    }
    EXPECT_EQ(sum, rep.dependent_total);
    std::uint64_t on_plane = 0;
    oracle::for_each_solution(a, J, H, pos, [&](const V&) { ++on_plane; });
    EXPECT_EQ(rep.total_on_plane, on_plane);
  }
}

TEST(CountS, StratifiedMatchesRankOracle) {
  const V a{1, -2, 3};
  std::map<int, std::uint64_t> want;
  // only dependent vectors are stratified, so rank 3 never appears
  oracle::for_each_solution(a, 5, 10, false, [&](const V& x) {
    if (oracle::dependent(x)) ++want[oracle::mult_rank(x)];
  });
  auto rep = count_S(HyperplaneSpec(a, 5), {DomainKind::signed_box, 10}, true);
  EXPECT_EQ(rep.by_rank, want);
}

TEST(CountS, ThreadCountDoesNotChangeResult) {
  HyperplaneSpec s({1, 1, 1}, 1);
  auto one = count_S(s, {DomainKind::signed_box, 60}, true, 1);
  for (unsigned t : {2u, 3u, 7u}) {
    auto many = count_S(s, {DomainKind::signed_box, 60}, true, t);
    EXPECT_EQ(many.dependent_total, one.dependent_total);
    EXPECT_EQ(many.total_on_plane, one.total_on_plane);
    EXPECT_EQ(many.by_rank, one.by_rank);
  }
}

// coordinates with a zero coefficient are free; (1,0,0), J=1 gives (2H)^2
TEST(CountS, ZeroCoefficientSignFold) {
  for (std::int64_t H : {5, 17}) {
    auto signed_rep = count_S(HyperplaneSpec({1, 0, 0}, 1), {DomainKind::signed_box, H}, false);
    EXPECT_EQ(signed_rep.dependent_total, std::uint64_t(4 * H * H));
    auto pos = count_S(HyperplaneSpec({1, 0, 0}, 1), {DomainKind::positive, H}, false);
    EXPECT_EQ(pos.dependent_total, std::uint64_t(H * H));
  }
  EXPECT_EQ(count_S(HyperplaneSpec({2, 0, 3}, 5), {DomainKind::signed_box, 9}, false).dependent_total,
            oracle::dependent_count({2, 0, 3}, 5, 9, false));
}

TEST(CountS, RejectsBadDomain) {
  EXPECT_THROW(count_S(HyperplaneSpec({1, 1}, 1), {DomainKind::signed_box, 0}, false), std::domain_error);
}

TEST(Curve, Examples) {
  EXPECT_EQ(count_curve_system({CurveVariant::two_var_a, 1, 1, {1, 1, 1}, {1, 1}, 2}, 1).count, 1u);
  EXPECT_EQ(count_curve_system({CurveVariant::three_var, 1, 1, {1, 1, 1}, {1, 1, 1}, 50}, 5).count, 0u);
  EXPECT_EQ(count_curve_system({CurveVariant::four_var, 1, 1, {1, 1, 1, 1}, {1, 1, 1, 1}, 4}, 1).count, 1u);
}

TEST(Curve, Preconditions) {
  EXPECT_THROW(count_curve_system({CurveVariant::two_var_a, 1, 1, {1, 1, 1}, {1, 1}, 0}, 5), std::domain_error);
  EXPECT_THROW(count_curve_system({CurveVariant::two_var_a, 0, 1, {1, 1, 1}, {1, 1}, 2}, 5), std::domain_error);
  EXPECT_THROW(count_curve_system({CurveVariant::three_var, 1, 1, {1, 0, 1}, {1, 1, 1}, 2}, 5), std::domain_error);
  EXPECT_THROW(count_curve_system({CurveVariant::four_var, 2, 1, {1, 1, 1, 1}, {1, 1, 1, 1}, 2}, 5),
               std::domain_error);
  EXPECT_THROW(count_curve_system({CurveVariant::four_var, 1, 1, {1, 1, 1, 1}, {0, 0, 1, 1}, 2}, 5),
               std::domain_error);
}

TEST(Curve, MatchesBruteForce) {
  std::vector<CurveSystemSpec> cases{
      {CurveVariant::two_var_a, 1, 1, {1, 1, 1}, {1, 1}, 2},
      {CurveVariant::two_var_a, 2, -3, {2, 1, 3}, {1, -2}, 3},
      {CurveVariant::two_var_a, -1, 4, {1, 2, 2}, {3, 1}, -5},
      {CurveVariant::two_var_b, 1, 1, {2, 1, 1}, {1, 1}, 6},
      {CurveVariant::two_var_b, 3, 1, {1, 3, 2}, {2, -1}, 4},
      {CurveVariant::three_var, 1, 1, {1, 1, 1}, {1, 1, 1}, 3},
      {CurveVariant::three_var, 2, 1, {1, 2, 1}, {1, -1, 2}, 5},
      {CurveVariant::four_var, 1, 1, {1, 1, 1, 1}, {1, 1, 1, 1}, 4},
      {CurveVariant::four_var, 1, 1, {2, 1, 1, 2}, {1, -1, 0, 2}, 3},
  };
  for (auto& c : cases) {
    const std::int64_t H = c.variant == CurveVariant::four_var ? 8 : 14;
    EXPECT_EQ(count_curve_system(c, H).count, curve_brute(c, H))
        << int(c.variant) << " " << ::testing::PrintToString(c.alpha);
  }
}

TEST(Curve, ThreeVarExclusionsReported) {
  std::uint64_t total_excluded = 0;
  for (std::int64_t J : {2, 4, 6, -3}) {
    CurveSystemSpec c{CurveVariant::three_var, 1, 1, {1, 1, 1}, {2, 1, -1}, J};
    auto r = count_curve_system(c, 10);
    EXPECT_EQ(r.count, curve_brute(c, 10));
    EXPECT_EQ(r.count + r.excluded, curve_brute(c, 10, false));
    total_excluded += r.excluded;
  }
  EXPECT_GT(total_excluded, 0u);
}
