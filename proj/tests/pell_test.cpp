#include <gtest/gtest.h>

#include "llab/pell.hpp"

namespace llab {
namespace {

// Smallest y >= 1 with D y^2 + sign a perfect square, by search.
std::optional<std::pair<u64, u64>> brute_pell(u64 d, int sign, u64 ymax) {
  for (u64 y = 1; y <= ymax; ++y) {
    const i64 v = static_cast<i64>(d * y * y) + sign;
    if (v <= 0) continue;
    const u64 x = isqrt(static_cast<u64>(v));
    if (x * x == static_cast<u64>(v)) return std::make_pair(x, y);
  }
  return std::nullopt;
}

TEST(SqrtCf, Examples) {
  EXPECT_EQ(sqrt_cf(2), (ContinuedFraction{1, {2}}));
  EXPECT_EQ(sqrt_cf(5), (ContinuedFraction{2, {4}}));
  EXPECT_EQ(sqrt_cf(7), (ContinuedFraction{2, {1, 1, 1, 4}}));
  try {
    sqrt_cf(49);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PerfectSquare);
  }
}

TEST(Fundamental, Examples) {
  EXPECT_EQ(fundamental_solution(5, -1), (PellSolution{2, 1, -1}));
  EXPECT_EQ(fundamental_solution(17, -1), (PellSolution{4, 1, -1}));
  EXPECT_FALSE(fundamental_solution(3, -1).has_value());
  const auto big = fundamental_solution(61, 1);
  ASSERT_TRUE(big);
  EXPECT_EQ(big->x, BigInt("1766319049"));
  EXPECT_EQ(big->y, 226153980);
}

TEST(Fundamental, AllNonsquareDUpTo500) {
  for (u64 d = 2; d <= 500; ++d) {
    if (isqrt(d) * isqrt(d) == d) continue;
    const auto ctx = make_pell_context(d);
    const auto& u = ctx.fundamental_plus;
    ASSERT_EQ(u.x * u.x - BigInt(d) * u.y * u.y, 1) << d;
    EXPECT_EQ(ctx.fundamental_minus.has_value(), ctx.cf.period.size() % 2 == 1) << d;
    if (ctx.fundamental_minus) {
      const auto sq = compose(*ctx.fundamental_minus, *ctx.fundamental_minus, d);
      EXPECT_EQ(sq, u) << d;
    }
    // Minimality against search where the answer is small.
    if (u.y < 100000) {
      const auto b = brute_pell(d, 1, 100000);
      ASSERT_TRUE(b);
      EXPECT_EQ(u.y, b->second) << d;
    }
    if (ctx.fundamental_minus && ctx.fundamental_minus->y < 100000) {
      EXPECT_EQ(ctx.fundamental_minus->y, brute_pell(d, -1, 100000)->second) << d;
    } else if (!ctx.fundamental_minus) {
      EXPECT_FALSE(brute_pell(d, -1, 2000).has_value()) << d;
    }
  }
}

TEST(Generate, Examples) {
  const auto ctx17 = make_pell_context(17);
  EXPECT_EQ(ctx17.fundamental_plus, (PellSolution{33, 8, 1}));
  const auto next = generate_solutions(PellSolution{4, 1, -1}, ctx17, 3);
  EXPECT_EQ(next[0], (PellSolution{268, 65, -1}));
  // X = 4n: 268 = 4 * 67 and 16 * 67^2 + 1 = 17 * 65^2.
  EXPECT_EQ(16 * 67 * 67 + 1, 17 * 65 * 65);
  const auto ctx65 = make_pell_context(65);
  const auto n65 = generate_solutions(PellSolution{8, 1, -1}, ctx65, 2);
  EXPECT_EQ(n65[0], (PellSolution{2072, 257, -1}));
  const auto powers = generate_solutions(ctx17.fundamental_plus, ctx17, 3);
  PellSolution u = ctx17.fundamental_plus;
  for (const auto& s : powers) {
    u = compose(u, ctx17.fundamental_plus, 17);
    EXPECT_EQ(s, u);
  }
  EXPECT_THROW(generate_solutions(PellSolution{4, 1, 1}, ctx17, 1), Error);
}

TEST(Generate, StrictlyIncreasingAndExact) {
  for (u64 d : {2, 13, 61, 109, 181}) {
    const auto ctx = make_pell_context(d);
    const PellSolution base = ctx.fundamental_minus ? *ctx.fundamental_minus : ctx.fundamental_plus;
    const auto sols = generate_solutions(base, ctx, 8);
    BigInt last = base.y;
    for (const auto& s : sols) {
      EXPECT_EQ(s.x * s.x - BigInt(d) * s.y * s.y, base.n);
      EXPECT_GT(s.y, last);
      last = s.y;
    }
  }
}

TEST(Census, Examples) {
  const auto rows = negative_pell_census(13);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].p, 5u);
  EXPECT_EQ(rows[0].x, 2);
  EXPECT_EQ(rows[0].y, 1);
  EXPECT_EQ(rows[0].n, 1);
  EXPECT_EQ(rows[1].p, 13u);
  EXPECT_EQ(rows[1].x, 18);
  EXPECT_EQ(rows[1].y, 5);
  EXPECT_EQ(rows[1].n, 9);
  EXPECT_TRUE(negative_pell_census(4).empty());
  const auto r73 = negative_pell_census(73).back();
  EXPECT_EQ(r73.p, 73u);
  EXPECT_EQ(r73.x, 1068);
  EXPECT_EQ(r73.y, 125);
}

TEST(Census, EveryPrimeOneModFourUpTo10000) {
  const auto rows = negative_pell_census(10000);
  std::size_t expected = 0;
  for (u64 p : primes_up_to(10000)) expected += p % 4 == 1;
  ASSERT_EQ(rows.size(), expected);
  for (const auto& r : rows) {
    EXPECT_EQ(r.x % 2, 0);
    EXPECT_EQ(4 * r.n * r.n + 1, BigInt(r.p) * r.y * r.y);
  }
}

}  // namespace
}  // namespace llab
