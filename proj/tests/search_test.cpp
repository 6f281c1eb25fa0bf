#include <gtest/gtest.h>

#include "llab/search.hpp"
#include "oracles.hpp"

namespace llab {
namespace {

const WitnessCell& cell(const WitnessTable& t, u64 a, u64 b) { return t.cells[(a - 1) * t.bmax + (b - 1)]; }

std::optional<u64> oracle_least(u64 a, u64 b, unsigned e, u64 mbound, int sign) {
  for (u64 m = 1; m <= mbound; ++m) {
    u64 v = a;
    for (unsigned i = 0; i < e; ++i) v *= m;
    if (oracle::trial_lambda(static_cast<i64>(v + b)) == sign) return m;
  }
  return std::nullopt;
}

TEST(WitnessTable, Examples) {
  const auto cubic = multivariate_cubic_table(1, 1, 20);
  EXPECT_EQ(cell(cubic, 1, 1).m_minus, 1u);
  EXPECT_EQ(cell(cubic, 1, 1).m_plus, 2u);
  EXPECT_TRUE(cubic.complete());

  const auto quad = multivariate_quadratic_table(2, 3, 30);
  EXPECT_EQ(cell(quad, 1, 1).m_minus, 1u);
  EXPECT_EQ(cell(quad, 1, 1).m_plus, 3u);
  // Regression fixture: (m_plus, m_minus) for (a, b) = (2, 3).
  EXPECT_EQ(cell(quad, 2, 3).m_plus, 3u);
  EXPECT_EQ(cell(quad, 2, 3).m_minus, 1u);
  EXPECT_TRUE(quad.complete());

  const auto tiny = multivariate_cubic_table(1, 1, 1);
  ASSERT_EQ(tiny.misses.size(), 1u);
  EXPECT_EQ(tiny.misses[0].sign, 1);
  EXPECT_FALSE(tiny.complete());
}

TEST(WitnessTable, FullGridsAreComplete) {
  const auto cubic = multivariate_cubic_table(100, 100, 20);
  const auto quad = multivariate_quadratic_table(100, 100, 30);
  EXPECT_TRUE(cubic.complete());
  EXPECT_TRUE(quad.complete());
  EXPECT_EQ(cubic.cells.size(), 10000u);
  EXPECT_EQ(quad.cells.size(), 10000u);
}

TEST(WitnessTable, MatchesTrialDivision) {
  for (unsigned e : {2u, 3u}) {
    const auto t = witness_table(e, 30, 30, 12);
    for (const auto& c : t.cells) {
      ASSERT_EQ(c.m_plus, oracle_least(c.a, c.b, e, 12, 1)) << c.a << " " << c.b;
      ASSERT_EQ(c.m_minus, oracle_least(c.a, c.b, e, 12, -1)) << c.a << " " << c.b;
    }
  }
}

TEST(WitnessTable, Reproducible) {
  const auto a = multivariate_cubic_table(40, 40, 20);
  const auto b = multivariate_cubic_table(40, 40, 20, 3);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].m_plus, b.cells[i].m_plus);
    EXPECT_EQ(a.cells[i].m_minus, b.cells[i].m_minus);
  }
}

TEST(Beukers, Examples) {
  EXPECT_TRUE(beukers_precondition(2, 3, 4));
  for (u64 k = 1; k <= 1000; ++k) EXPECT_TRUE(beukers_precondition(2, 2, k));
  EXPECT_FALSE(beukers_precondition(2, 3, 7));
  EXPECT_FALSE(beukers_precondition(3, 3, 3));
  EXPECT_TRUE(beukers_precondition(2, 3, 5));
  EXPECT_THROW(beukers_precondition(0, 2, 2), Error);
}

TEST(CoprimeLift, Examples) {
  const auto one = coprime_witness_lift(1, 1, 3, 4, 1);
  EXPECT_EQ(one.h, 2);
  EXPECT_EQ(one.z, 1);
  EXPECT_EQ(one.lambda_h, -1);
  EXPECT_TRUE(one.coprime);

  const auto nine = coprime_witness_lift(1, 1, 3, 4, 2);
  EXPECT_EQ(nine.value, 9);
  EXPECT_EQ(nine.h, 1);
  EXPECT_EQ(nine.z, 3);
  EXPECT_EQ(nine.lambda_h, 1);

  const auto neg = coprime_witness_lift(-5, 1, 2, 7, 3);
  EXPECT_EQ(neg.value, -44);
  EXPECT_EQ(neg.h, -11);
  EXPECT_EQ(neg.z, 2);
}

TEST(CoprimeLift, LambdaOfKernelMatchesValue) {
  const auto table = multivariate_cubic_table(20, 20, 20);
  for (const auto& c : table.cells)
    for (auto [m, sign] : {std::pair{*c.m_plus, 1}, std::pair{*c.m_minus, -1}}) {
      const auto lift = coprime_witness_lift(c.a, c.b, 3, 4, m);
      EXPECT_EQ(lift.h * lift.z * lift.z, lift.value);
      EXPECT_EQ(lift.lambda_h, sign);
      EXPECT_TRUE(lift.coprime);
    }
}

TEST(AlmostAll, Examples) {
  const auto lam = MultFn::liouville();
  const auto lin = almost_all_experiment(1, 5, 50, lam, 1);
  EXPECT_EQ(lin.polynomials, 55u);
  EXPECT_EQ(lin.fraction(), (Fraction{0, 1}));

  // Regression fixture. The two misses are 2x^2 and 3x^2, which are always -1.
  const auto quad = almost_all_experiment(2, 3, 100, lam, 0);
  EXPECT_EQ(quad.polynomials, 147u);
  EXPECT_EQ(quad.without_witness, 2u);

  const auto none = almost_all_experiment(3, 2, 0, lam, 0);
  EXPECT_EQ(none.fraction(), (Fraction{1, 1}));
  EXPECT_THROW(almost_all_experiment(6, 50, 1000, lam, 0), Error);
}

TEST(AlmostAll, WitnessesMatchTrialDivision) {
  const auto lam = MultFn::liouville();
  const auto r = almost_all_experiment(2, 3, 20, lam, 0);
  for (const auto& row : r.rows) {
    std::optional<u64> want;
    for (u64 n = 1; n <= 20 && !want; ++n)
      if (oracle::trial_lambda(static_cast<i64>(row.poly(BigInt(n)))) == 1) want = n;
    EXPECT_EQ(row.n, want);
  }
}

TEST(AlmostAll, MonotoneInH) {
  const auto lam = MultFn::liouville();
  for (u64 samples : {0u, 400u}) {
    Fraction prev{1, 1};
    for (u64 h : {0u, 1u, 2u, 5u, 10u, 40u}) {
      const auto r = almost_all_experiment(2, 3, h, lam, 0, samples, 99);
      EXPECT_LE(static_cast<u128>(r.without_witness) * prev.den, static_cast<u128>(prev.num) * r.polynomials);
      prev = r.fraction();
    }
  }
}

}  // namespace
}  // namespace llab
