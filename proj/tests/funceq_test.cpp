#include <random>
#include <set>

#include <gtest/gtest.h>

#include "llab/funceq.hpp"
#include "oracles.hpp"

namespace llab {
namespace {

// Independent check: inverse found by search, integer arithmetic only.
bool oracle_satisfies(const std::vector<std::int8_t>& psi) {
  const i64 q = static_cast<i64>(psi.size());
  for (i64 x = 0; x < q; ++x)
    for (i64 y = 0; y < q; ++y)
      for (i64 z = 0; z < q; ++z) {
        const i64 den = ((4 * (x * y + y * z + z * x) - 1) % q + q) % q;
        i64 inv = -1;
        for (i64 t = 0; t < q; ++t)
          if (den * t % q == 1 % q) inv = t;
        if (inv < 0) continue;
        const i64 num = ((4 * x * y * z - x - y - z) % q + q) % q;
        if (psi[x] * psi[y] * psi[z] != psi[num * inv % q]) return false;
      }
  return true;
}

std::set<std::vector<std::int8_t>> oracle_solutions(u64 q) {
  std::set<std::vector<std::int8_t>> out;
  for (u64 mask = 0; mask < (u64(1) << q); mask += 2) {  // psi(0) = +1
    std::vector<std::int8_t> psi(q);
    for (u64 x = 0; x < q; ++x) psi[x] = (mask >> x) & 1 ? -1 : 1;
    if (oracle_satisfies(psi)) out.insert(psi);
  }
  return out;
}

std::set<std::vector<std::int8_t>> as_set(const std::vector<Solution>& sols) {
  std::set<std::vector<std::int8_t>> out;
  for (const auto& s : sols) out.insert(s.psi.values);
  return out;
}

bool has_prime_factor_1_mod_4(u64 q) {
  for (const auto& [p, e] : factorize_u64(q))
    if (p % 4 == 1) return true;
  return false;
}

TEST(FunctionalEquation, Examples) {
  for (u64 q = 1; q <= 12; ++q) EXPECT_TRUE(satisfies_functional_equation(PsiTable{q, std::vector<std::int8_t>(q, 1)}));
  EXPECT_TRUE(satisfies_functional_equation(character_family_psi(3, 0, 1)));
  const auto bad = satisfies_functional_equation(PsiTable{3, {1, 1, -1}});
  EXPECT_FALSE(bad);
  ASSERT_TRUE(bad.violation.has_value());
  const auto [x, y, z] = *bad.violation;
  const auto den_inv = inv_mod(static_cast<i64>(4 * (x * y + y * z + z * x)) - 1, 3);
  ASSERT_TRUE(den_inv.has_value());
  const u64 w = mul_mod(reduce(static_cast<i64>(4 * x * y * z - x - y - z), 3), *den_inv, 3);
  const std::vector<std::int8_t> psi{1, 1, -1};
  EXPECT_NE(psi[x] * psi[y] * psi[z], psi[w]);
  EXPECT_FALSE(oracle_satisfies({1, 1, -1}));
}

TEST(Enumerate, Examples) {
  const auto q1 = enumerate_solutions(1);
  ASSERT_EQ(q1.size(), 1u);
  EXPECT_EQ(q1[0].psi.values, (std::vector<std::int8_t>{1}));
  const auto q3 = enumerate_solutions(3);
  ASSERT_EQ(q3.size(), 2u);
  EXPECT_EQ(q3[0].psi.values, (std::vector<std::int8_t>{1, 1, 1}));
  EXPECT_EQ(q3[1].psi.values, (std::vector<std::int8_t>{1, -1, -1}));
  EXPECT_TRUE(q3[1].primitive);
  EXPECT_EQ(q3[1].character, (CharacterMatch{3, 0, 1}));
  for (const auto& s : enumerate_solutions(5)) EXPECT_FALSE(s.primitive) << s.psi.to_string();
  try {
    enumerate_solutions(25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ModulusTooLarge);
  }
}

TEST(Enumerate, MatchesBruteForceOverAllTables) {
  for (u64 q = 1; q <= 14; ++q) EXPECT_EQ(as_set(enumerate_solutions(q)), oracle_solutions(q)) << "q=" << q;
}

TEST(Enumerate, CharacterFamilyModuliGiveExactlyThePredictedSet) {
  for (u64 q = 1; q <= 21; ++q) {
    if (!is_character_family_modulus(q)) continue;
    std::set<std::vector<std::int8_t>> predicted;
    for (u64 d = 1; d <= q; ++d)
      if (q % d == 0 && is_character_family_modulus(d)) predicted.insert(character_family_psi(d, 0, 1, q).values);
    EXPECT_EQ(as_set(enumerate_solutions(q)), predicted) << "q=" << q;
  }
}

TEST(Enumerate, StructuralPropertiesUpTo24) {
  for (u64 q = 1; q <= 24; ++q) {
    const auto sols = enumerate_solutions(q);
    for (const auto& s : sols) {
      ASSERT_TRUE(satisfies_functional_equation(s.psi));
      EXPECT_TRUE(s.character.has_value()) << "unclassified solution q=" << q << " " << s.psi.to_string();
      if (!s.primitive) continue;
      EXPECT_FALSE(has_prime_factor_1_mod_4(q)) << "q=" << q;
      for (u64 x = 0; x < q; ++x) EXPECT_EQ(s.psi(static_cast<i64>(x)), s.psi(-static_cast<i64>(x)));
      if (q % 2 == 0) {
        // (-1)^x psi(x) is (q/2)-periodic.
        for (u64 x = 0; x + q / 2 < q; ++x) {
          const int a = (x % 2 ? -1 : 1) * s.psi.values[x];
          const int b = ((x + q / 2) % 2 ? -1 : 1) * s.psi.values[x + q / 2];
          EXPECT_EQ(a, b) << "q=" << q;
        }
      }
    }
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify_solution(PsiTable{4, {1, 1, 1, 1}}), (CharacterMatch{1, 0, 1}));
  EXPECT_EQ(classify_solution(PsiTable{3, {1, -1, -1}}), (CharacterMatch{3, 0, 1}));
  EXPECT_EQ(classify_solution(character_family_psi(7, 0, 1)), (CharacterMatch{7, 0, 1}));
  EXPECT_EQ(classify_solution(character_family_psi(21, 1, -1)), (CharacterMatch{21, 1, -1}));
  try {
    classify_solution(PsiTable{3, {1, 1, -1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolated);
  }
}

TEST(CharacterFamily, EverySuchTableSolvesTheEquation) {
  for (u64 q = 1; q <= 19; ++q) {
    if (!is_character_family_modulus(q)) continue;
    for (int r : {0, 1})
      for (int sign : {1, -1}) {
        const auto psi = character_family_psi(q, r, sign);
        EXPECT_TRUE(satisfies_functional_equation(psi)) << q << " " << r << " " << sign;
      }
  }
}

void expect_valid(const DivisibilitySolution& s, u64 q, std::array<i64, 3> a, const BigInt& c) {
  const auto& x = s.x;
  for (int i = 0; i < 3; ++i) {
    EXPECT_GE(abs(x[i]), c);
    EXPECT_EQ(reduce(BigInt(x[i] - a[i]), BigInt(q)), 0);
  }
  const BigInt den = 4 * (x[0] * x[1] + x[1] * x[2] + x[2] * x[0]) - 1;
  const BigInt num = 4 * x[0] * x[1] * x[2] - x[0] - x[1] - x[2];
  ASSERT_NE(den, 0);
  EXPECT_EQ(num % den, 0);
  EXPECT_EQ(den, s.divisor);
}

TEST(Divisibility, Examples) {
  expect_valid(solve_divisibility(3, {1, 1, 1}, 10), 3, {1, 1, 1}, 10);
  expect_valid(solve_divisibility(5, {1, 2, 3}, 100), 5, {1, 2, 3}, 100);
  expect_valid(solve_divisibility(7, {2, -2, 0}, 50), 7, {2, -2, 0}, 50);
  expect_valid(solve_divisibility(6, {16, 0, 0}, 10), 6, {16, 0, 0}, 10);
  expect_valid(solve_divisibility(1, {0, 0, 0}, 5), 1, {0, 0, 0}, 5);
  try {
    solve_divisibility(3, {1, 1, 0}, 10);  // 4*1 - 1 = 3
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolated);
  }
  try {
    solve_divisibility(19, {9, 10, 18}, 10, 1000);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SearchExhausted);
  }
}

TEST(Divisibility, RandomAdmissibleInputs) {
  std::mt19937_64 rng(77);
  for (u64 q : {3, 7, 11, 15, 19, 21}) {
    int done = 0;
    while (done < 100) {
      std::array<i64, 3> a{};
      for (auto& v : a) v = static_cast<i64>(rng() % (3 * q)) - static_cast<i64>(q);
      const i64 big = 4 * (a[0] * a[1] + a[1] * a[2] + a[2] * a[0]) - 1;
      if (std::gcd(static_cast<u64>(reduce(big, q)), q) != 1) continue;
      const BigInt c = 1 + static_cast<i64>(rng() % 1000);
      expect_valid(solve_divisibility(q, a, c), q, a, c);
      ++done;
    }
  }
}

TEST(Hyperbola, Examples) {
  EXPECT_EQ(hyperbola_point_count(3), 1u);
  EXPECT_EQ(hyperbola_point_count(7), 3u);
  EXPECT_EQ(hyperbola_point_count(11), 5u);
  try {
    hyperbola_point_count(13);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WrongResidueClass);
  }
}

TEST(Hyperbola, HalfOfResiduesBelow10000) {
  for (u64 p : primes_up_to(10000))
    if (p % 4 == 3) ASSERT_EQ(hyperbola_point_count(p), (p - 1) / 2) << p;
}

TEST(Recurrence, Examples) {
  std::vector<std::int8_t> alt;
  for (int i = 0; i < 40; ++i) alt.push_back(i % 2 ? -1 : 1);
  const auto a = detect_recurrence_periodicity(alt, 1);
  ASSERT_TRUE(a.has_value());
  EXPECT_EQ(a->period, 2u);

  std::vector<std::int8_t> f{1, -1};
  while (f.size() < 40) f.push_back(static_cast<std::int8_t>(f[f.size() - 1] * f[f.size() - 2]));
  const auto b = detect_recurrence_periodicity(f, 2);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->period, 3u);
  EXPECT_EQ(b->preperiod, 0u);

  std::vector<std::int8_t> pre{-1, -1, -1, 1, 1, -1, 1, 1, -1, 1, 1, -1, 1, 1, -1, 1, 1, -1, 1, 1};
  const auto c = detect_recurrence_periodicity(pre, 2);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, (Periodicity{2, 3}));

  try {
    detect_recurrence_periodicity(std::vector<std::int8_t>(5, 1), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
}

TEST(Recurrence, LambdaOfNSquaredPlusOneHasNoPeriodicTail) {
  const auto signs = lambda_poly_range(IntPolynomial{1, 0, 1}, 1, 10000);
  EXPECT_FALSE(detect_recurrence_periodicity(signs, 5).has_value());
  for (std::size_t period = 1; period <= 100; ++period) {
    bool periodic_tail = true;
    for (std::size_t i = 5000; i + period < signs.size() && periodic_tail; ++i)
      periodic_tail = signs[i] == signs[i + period];
    EXPECT_FALSE(periodic_tail) << period;
  }
}

TEST(Falsify, Examples) {
  const auto table = falsify_periodicity(IntPolynomial{1, 0, 1}, 2, 10);
  ASSERT_EQ(table.size(), 3u);
  EXPECT_EQ(table[0].q, 1u);
  EXPECT_EQ(table[0].pair, std::make_optional(std::make_pair<u64, u64>(1, 3)));
  EXPECT_EQ(table[1].q, 2u);
  EXPECT_EQ(table[1].phase, 0u);
  EXPECT_EQ(table[1].pair, std::make_optional(std::make_pair<u64, u64>(2, 8)));
  for (const auto& w : falsify_periodicity(IntPolynomial{0, 0, 1}, 5, 100)) EXPECT_FALSE(w.pair.has_value());
}

TEST(Falsify, WitnessesAreLeastPairs) {
  const IntPolynomial p{1, 0, 1};
  const auto table = falsify_periodicity(p, 12, 400);
  for (const auto& w : table) {
    ASSERT_TRUE(w.pair.has_value()) << w.q << " " << w.phase;
    const auto [n1, n2] = *w.pair;
    EXPECT_EQ(n1 % w.q, w.phase);
    EXPECT_EQ(n2 % w.q, w.phase);
    EXPECT_NE(oracle::trial_lambda(static_cast<i64>(n1 * n1 + 1)), oracle::trial_lambda(static_cast<i64>(n2 * n2 + 1)));
    for (u64 m = n1 + w.q; m < n2; m += w.q)
      EXPECT_EQ(oracle::trial_lambda(static_cast<i64>(m * m + 1)), oracle::trial_lambda(static_cast<i64>(n1 * n1 + 1)));
  }
}

}  // namespace
}  // namespace llab
