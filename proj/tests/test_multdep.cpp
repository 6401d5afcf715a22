#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <thread>

#include <mdep/multdep.hpp>

#include "oracles.hpp"

using namespace mdep;

namespace {

std::vector<std::int64_t> to_i64(const Relation& r) {
  std::vector<std::int64_t> k;
  for (auto& x : r.k) k.push_back(x.convert_to<std::int64_t>());
  return k;
}

std::vector<std::int64_t> random_vector(std::mt19937_64& rng, int n, std::int64_t h) {
  std::uniform_int_distribution<std::int64_t> d(-h, h);
  std::vector<std::int64_t> v;
  while (int(v.size()) < n) {
    auto x = d(rng);
    if (x) v.push_back(x);
  }
  return v;
}

}  // namespace

TEST(IntVector, RejectsZeroAndEmpty) {
  EXPECT_THROW(IntVector({1, 0}), std::domain_error);
  EXPECT_THROW(IntVector(std::vector<std::int64_t>{}), std::domain_error);
}

TEST(ExponentMatrix, Examples) {
  auto m = exponent_matrix({2, 3, 12});
  EXPECT_EQ(m.primes, (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(m.rows, (std::vector<std::vector<int>>{{1, 0}, {0, 1}, {2, 1}}));
  EXPECT_EQ(m.signs, (std::vector<int>{1, 1, 1}));
  m = exponent_matrix({-2});
  EXPECT_EQ(m.primes, (std::vector<std::uint64_t>{2}));
  EXPECT_EQ(m.rows, (std::vector<std::vector<int>>{{1}}));
  EXPECT_EQ(m.signs, (std::vector<int>{-1}));
  m = exponent_matrix({1, 1});
  EXPECT_TRUE(m.primes.empty());
  EXPECT_EQ(m.rows, (std::vector<std::vector<int>>{{}, {}}));
  EXPECT_EQ(m.signs, (std::vector<int>{1, 1}));
}

TEST(IsDependent, Examples) {
  EXPECT_TRUE(is_dependent({2, 3, 12}));
  EXPECT_FALSE(is_dependent({2, 3, 5}));
  EXPECT_TRUE(is_dependent({-2, 4, 9}));
}

TEST(Relation, Examples) {
  EXPECT_EQ(relation({2, 3, 12})->str(), "(2,1,-1)");
  EXPECT_EQ(relation({4, 8})->str(), "(3,-2)");
  EXPECT_EQ(relation({-1, 7})->str(), "(2,0)");
  EXPECT_FALSE(relation({2, 3, 5}).has_value());
  auto r = relation({-2, 4, 9});
  ASSERT_TRUE(r);
  EXPECT_TRUE(oracle::is_relation({-2, 4, 9}, to_i64(*r)));
}

TEST(MultRank, Examples) {
  EXPECT_EQ(mult_rank({1, 2, 3}), 0);
  EXPECT_EQ(mult_rank({2, 3, 12}), 2);
  EXPECT_EQ(mult_rank({2, 3, 5}), 3);
}

TEST(FullSupport, Examples) {
  EXPECT_TRUE(has_full_support_relation({2, 3, 12}));
  EXPECT_TRUE(has_full_support_relation({1, 4, 16}));
  EXPECT_FALSE(has_full_support_relation({1, 2, 3}));
  auto w = full_support_witness({1, 4, 16});
  ASSERT_TRUE(w);
  auto k = to_i64(*w);
  EXPECT_TRUE(std::none_of(k.begin(), k.end(), [](auto x) { return x == 0; }));
  EXPECT_TRUE(oracle::is_relation({1, 4, 16}, k));
}

TEST(VerifyRelation, RejectsBadWitnesses) {
  EXPECT_TRUE(verify_relation({2, 3, 12}, Relation{{2, 1, -1}}));
  EXPECT_FALSE(verify_relation({2, 3, 12}, Relation{{0, 0, 0}}));
  EXPECT_FALSE(verify_relation({2, 3, 12}, Relation{{1, 1, -1}}));
  EXPECT_FALSE(verify_relation({-2, 4}, Relation{{1, 0}}));
  EXPECT_FALSE(verify_relation({-2, 4}, Relation{{2, -1, 0}}));
  EXPECT_TRUE(verify_relation({-8, 4}, Relation{{2, -3}}));
}

// Random vectors checked against the mod-p rank oracle over every subset.
TEST(MultRank, MatchesSubsetOracle) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 400; ++t) {
    int n = 1 + int(rng() % 6);
    auto v = random_vector(rng, n, 50);
    IntVector iv(v);
    int r = mult_rank(iv);
    ASSERT_EQ(r, oracle::mult_rank(v)) << ::testing::PrintToString(v);
    ASSERT_EQ(is_dependent(iv), oracle::dependent(v)) << ::testing::PrintToString(v);
    if (is_dependent(iv)) {
      EXPECT_LE(r, n - 1);
    } else {
      EXPECT_EQ(r, n);
    }
  }
}

TEST(Relation, SoundOnRandomVectors) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 400; ++t) {
    auto v = random_vector(rng, 1 + int(rng() % 5), 64);
    auto r = relation(IntVector(v));
    ASSERT_EQ(r.has_value(), oracle::dependent(v));
    if (r) {
      EXPECT_TRUE(oracle::is_relation(v, to_i64(*r))) << ::testing::PrintToString(v) << r->str();
    }
  }
}

TEST(FullSupport, ImpliesDependentAndVerifies) {
  std::mt19937_64 rng(5);
  int found = 0;
  for (int t = 0; t < 400; ++t) {
    auto v = random_vector(rng, 2 + int(rng() % 3), 40);
    auto w = full_support_witness(IntVector(v));
    if (!w) continue;
    ++found;
    EXPECT_TRUE(is_dependent(IntVector(v)));
    auto k = to_i64(*w);
    EXPECT_TRUE(std::none_of(k.begin(), k.end(), [](auto x) { return x == 0; }));
    EXPECT_TRUE(oracle::is_relation(v, k));
  }
  EXPECT_GT(found, 0);
}

// Products over a shared base list are dependent by construction once there
// are more coordinates than bases.
TEST(IsDependent, BuiltFromCommonBases) {
  std::mt19937_64 rng(17);
  const std::vector<std::int64_t> bases{2, 3, 5};
  for (int t = 0; t < 200; ++t) {
    std::vector<std::int64_t> v;
    for (int i = 0; i < 4; ++i) {
      std::int64_t x = (rng() & 1) ? -1 : 1;
      for (auto b : bases)
        for (unsigned e = rng() % 4; e; --e) x *= b;
      if (x == 1 || x == -1) x *= 2;
      v.push_back(x);
    }
    EXPECT_TRUE(is_dependent(IntVector(v))) << ::testing::PrintToString(v);
  }
  EXPECT_FALSE(is_dependent({2, 3, 5, 7, 11, 13, 17, 19}));
  EXPECT_FALSE(is_dependent({-2, 3, -5, 7}));
}

TEST(Invariance, PermutationAndAbsoluteValue) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    auto v = random_vector(rng, 1 + int(rng() % 5), 30);
    auto w = v;
    std::shuffle(w.begin(), w.end(), rng);
    EXPECT_EQ(is_dependent(IntVector(v)), is_dependent(IntVector(w)));
    EXPECT_EQ(mult_rank(IntVector(v)), mult_rank(IntVector(w)));
    EXPECT_EQ(has_full_support_relation(IntVector(v)), has_full_support_relation(IntVector(w)));
    if (std::find(v.begin(), v.end(), -1) == v.end()) {
      auto a = v;
      for (auto& x : a) x = x < 0 ? -x : x;
      EXPECT_EQ(is_dependent(IntVector(v)), is_dependent(IntVector(a)));
    }
  }
}

TEST(Kernel, LargeExponentsAndManyRows) {
  // 2^62 against 2^31; 11 and 12 coordinates take the big-integer path
  EXPECT_TRUE(is_dependent({std::int64_t(1) << 62, std::int64_t(1) << 31}));
  EXPECT_EQ(relation({std::int64_t(1) << 62, std::int64_t(1) << 31})->str(), "(1,-2)");
  std::vector<std::int64_t> p{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
  EXPECT_EQ(mult_rank(IntVector(p)), 11);
  p.push_back(2 * 3 * 5 * 7 * 11 * 13 * 17 * 19 * 23 * std::int64_t(29) * 31);
  EXPECT_EQ(mult_rank(IntVector(p)), 11);
}

TEST(Kernel, ThreadSafe) {
  std::vector<std::vector<std::int64_t>> vs;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) vs.push_back(random_vector(rng, 4, 40));
  std::vector<int> serial, a(vs.size()), b(vs.size());
  for (auto& v : vs) serial.push_back(mult_rank(IntVector(v)));
  std::thread t1([&] {
    for (std::size_t i = 0; i < vs.size(); ++i) a[i] = mult_rank(IntVector(vs[i]));
  });
  std::thread t2([&] {
    for (std::size_t i = vs.size(); i-- > 0;) b[i] = mult_rank(IntVector(vs[i]));
  });
  t1.join();
  t2.join();
  EXPECT_EQ(a, serial);
  EXPECT_EQ(b, serial);
}
