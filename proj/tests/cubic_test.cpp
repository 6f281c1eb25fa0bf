#include <random>

#include <gtest/gtest.h>

#include "llab/cubic.hpp"
#include "oracles.hpp"

namespace llab {
namespace {

std::optional<u64> brute_least_sqrt(i64 a, u64 m) {
  for (u64 n = 0; n < m; ++n)
    if (mul_mod(n, n, m) == reduce(a, m)) return n;
  return std::nullopt;
}

TEST(Reduction, Examples) {
  const auto r = build_reduction(0, 2);
  EXPECT_EQ(r.delta, -8);
  EXPECT_EQ(r.k, 6);
  EXPECT_EQ(r.y, 2);
  EXPECT_EQ(r.t1, -4);
  EXPECT_EQ(r.t2, -2);
  EXPECT_EQ(r.n0, 2);

  // y = 0 here, so the Vieta roots coincide; the shift set still has 3 values.
  const auto r11 = build_reduction(1, 1);
  EXPECT_EQ(r11.delta, -3);
  EXPECT_EQ(r11.k, 6);
  EXPECT_EQ(r11.y, 0);
  EXPECT_EQ(r11.t1, -3);
  EXPECT_EQ(r11.t2, -3);
  EXPECT_EQ(r11.n0, 3);
  EXPECT_EQ(four_term_product(r11).distinct, 3u);

  try {
    build_reduction(0, -1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SquareDiscriminant);
  }
}

TEST(Reduction, GridOfSmallCoefficients) {
  for (i64 b = 0; b <= 10; ++b)
    for (i64 c = -10; c <= 10; ++c) {
      const i64 delta = b * b - 4 * c;
      if (delta >= 0 && is_square(BigInt(delta))) {
        EXPECT_THROW(build_reduction(b, c), Error);
        continue;
      }
      const auto r = build_reduction(b, c);
      EXPECT_GT(r.k, 0);
      EXPECT_TRUE(r.k == 2 * b + 2 * c + 2 || r.k == 2 * b - 2 * c - 2);
      EXPECT_EQ(r.k * r.k - 4 * b * r.k + 4 * r.delta, r.y * r.y);
      EXPECT_EQ(r.t1 + r.t2, -r.k);
      EXPECT_EQ(r.t1 * r.t2, b * r.k - r.delta);
      const u64 m = static_cast<u64>(2 * r.k);
      EXPECT_EQ(reduce(BigInt(r.n0 * r.n0 - r.delta), BigInt(m)), 0);
      EXPECT_EQ(r.n0, *brute_least_sqrt(delta, m)) << b << " " << c;
      const auto four = four_term_product(r);
      EXPECT_GE(four.distinct, 3u);
      EXPECT_EQ(four.product.degree(), 4u);
      EXPECT_GT(four.product.leading(), 0);
      EXPECT_TRUE(is_non_square(four.product));
    }
}

TEST(Reduction, FourTermProductFromZeroTwo) {
  const auto four = four_term_product(build_reduction(0, 2));
  EXPECT_EQ(four.shifts, (std::vector<BigInt>{-4, -2, 0, 6}));
  EXPECT_EQ(four.distinct, 4u);
  EXPECT_TRUE(is_non_square(four.product));
  EXPECT_EQ(four.product(BigInt(1)), BigInt(12 - 2) * (12 - 0) * (12 + 2) * (12 + 8));
}

TEST(LeastSqrt, MatchesSearchOnSmallModuli) {
  for (u64 m = 1; m <= 2000; ++m)
    for (i64 a : {-8, -3, -7, 5, 12, 0, 1}) {
      const auto got = least_sqrt_mod(a, m);
      const auto want = brute_least_sqrt(a, m);
      ASSERT_EQ(got.has_value(), want.has_value()) << a << " mod " << m;
      if (got) ASSERT_EQ(*got, *want) << a << " mod " << m;
    }
  for (u64 m = 2000; m <= 10000; m += 2) {
    const auto got = least_sqrt_mod(-3, m);
    const auto want = brute_least_sqrt(-3, m);
    ASSERT_EQ(got.has_value(), want.has_value()) << m;
    if (got) ASSERT_EQ(*got, *want);
  }
}

TEST(NormIdentity, ExamplesAndRandom) {
  EXPECT_TRUE(verify_norm_identity(1, 2, 3));
  EXPECT_TRUE(verify_norm_identity(5, 6, -8));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10000; ++i) {
    const BigInt n = static_cast<i64>(rng() % 2000001) - 1000000;
    const BigInt k = static_cast<i64>(rng() % 2001) - 1000;
    const BigInt d = static_cast<i64>(rng() % 20001) - 10000;
    ASSERT_TRUE(verify_norm_identity(n, k, d));
  }
}

TEST(Census, Examples) {
  const auto small = cubic_sign_census(0, 2, 10);
  // lambda of 3, 12, 33, 72, 135, 228, 357, 528, 747, 1020.
  i64 plus = 0;
  for (i64 n = 1; n <= 10; ++n) plus += oracle::trial_lambda(n * n * n + 2 * n) > 0;
  EXPECT_EQ(small.all.plus, static_cast<u64>(plus));
  EXPECT_EQ(small.all, (SignCounts{4, 6}));

  const auto mid = cubic_sign_census(0, 2, 10000);
  EXPECT_GE(mid.all.plus, 100u);
  EXPECT_GE(mid.all.minus, 100u);
  ASSERT_TRUE(mid.progression);
  EXPECT_GT(mid.progression->plus + mid.progression->minus, 0u);

  const auto other = cubic_sign_census(1, 5, 1000);
  EXPECT_GT(other.all.plus, 0u);
  EXPECT_GT(other.all.minus, 0u);
}

TEST(Census, MatchesTrialDivision) {
  for (auto [b, c] : {std::pair<i64, i64>{0, 2}, {1, 1}, {3, -4}, {2, 7}}) {
    const auto census = cubic_sign_census(b, c, 3000);
    SignCounts want;
    for (i64 n = 1; n <= 3000; ++n) {
      const BigInt v = BigInt(n) * (n * n - b * n + c);
      (liouville(v) > 0 ? want.plus : want.minus)++;
    }
    EXPECT_EQ(census.all, want) << b << " " << c;
  }
}

TEST(Census, SqrtScaleRegression) {
  // Regression values; both signs clear sqrt(X) comfortably.
  for (auto [b, c] : {std::pair<i64, i64>{0, 2}, {1, 1}, {1, 5}}) {
    const auto census = cubic_sign_census(b, c, 1'000'000);
    EXPECT_EQ(census.all.plus + census.all.minus, 1'000'000u);
    EXPECT_GE(census.all.plus, 1000u);
    EXPECT_GE(census.all.minus, 1000u);
  }
}

}  // namespace
}  // namespace llab
