#include <random>

#include <gtest/gtest.h>

#include "llab/correlation.hpp"
#include "oracles.hpp"

namespace llab {
namespace {

constexpr double kPi = std::numbers::pi;

// Gowers sum by direct enumeration over Z with f zero outside [0, N).
double brute_u_sum(const std::vector<cd>& f, unsigned k) {
  const i64 n = static_cast<i64>(f.size());
  auto at = [&](i64 i) { return (i < 0 || i >= n) ? cd(0, 0) : f[static_cast<std::size_t>(i)]; };
  cd total = 0;
  std::vector<i64> h(k, -n + 1);
  while (true) {
    for (i64 x = 0; x < n; ++x) {
      cd prod = 1;
      for (unsigned mask = 0; mask < (1u << k); ++mask) {
        i64 pos = x;
        for (unsigned b = 0; b < k; ++b)
          if ((mask >> b) & 1) pos += h[b];
        const cd v = at(pos);
        prod *= (std::popcount(mask) % 2) ? std::conj(v) : v;
      }
      total += prod;
    }
    unsigned b = 0;
    while (b < k && ++h[b] == n) h[b++] = -n + 1;
    if (b == k) break;
  }
  return total.real();
}

double brute_gowers(const std::vector<cd>& f, unsigned k) {
  return std::pow(brute_u_sum(f, k) / brute_u_sum(std::vector<cd>(f.size(), 1.0), k), 1.0 / (1u << k));
}

std::vector<cd> random_unit_sequence(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cd> f(n);
  for (auto& v : f) v = std::polar(u(rng), 2 * kPi * u(rng));
  return f;
}

TEST(Correlation, Examples) {
  const auto lam = MultFn::liouville();
  const auto mean = correlation_average({{{lam, 1, 0}}, 1'000'000});
  EXPECT_LT(std::abs(mean.cesaro), 0.01);
  EXPECT_EQ(static_cast<i64>(mean.class_counts[0]) - static_cast<i64>(mean.class_counts[1]), -530);
  const auto pair = correlation_average({{{lam, 1, 0}, {lam, 1, 1}}, 1'000'000});
  EXPECT_LT(std::abs(pair.cesaro), 0.05);
  EXPECT_EQ(pair.class_counts[0], 499'446u);
  EXPECT_TRUE(pair.independent);
  const auto one = correlation_average({{{MultFn::one(), 3, -7}, {MultFn::one(), 2, 5}}, 1000});
  EXPECT_EQ(one.cesaro, cd(1.0, 0.0));
  EXPECT_EQ(one.logarithmic, cd(1.0, 0.0));
}

TEST(Correlation, MatchesDirectEvaluation) {
  const MultFn g3(3, 1, {{2, 2}, {7, 0}});
  const MultFn lam = MultFn::liouville();
  const CorrelationSpec spec{{{g3, 2, -5}, {lam, 3, 1}, {g3, 1, 4}}, 5000};
  const auto r = correlation_average(spec, 3);
  EXPECT_EQ(r.order, 6u);
  cd direct = 0, direct_log = 0;
  double h = 0;
  for (i64 n = 1; n <= 5000; ++n) {
    const auto e1 = eval_multfn(g3, BigInt(2 * n - 5)).exponent;
    const auto e2 = eval_multfn(lam, BigInt(3 * n + 1)).exponent;
    const auto e3 = eval_multfn(g3, BigInt(n + 4)).exponent;
    const cd z = std::polar(1.0, 2 * kPi * ((e1 + e3) / 3.0 + e2 / 2.0));
    direct += z;
    direct_log += z / static_cast<double>(n);
    h += 1.0 / static_cast<double>(n);
  }
  EXPECT_NEAR(std::abs(r.cesaro - direct / 5000.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.logarithmic - direct_log / h), 0.0, 1e-12);
  EXPECT_LE(std::abs(r.cesaro), 1.0);
  EXPECT_FALSE(forms_independent(std::vector<LinearForm>{{lam, 1, 1}, {lam, 2, 2}}));
}

TEST(Correlation, ThreeTermLiouvilleMarginAgainstDelta) {
  const auto lam = MultFn::liouville();
  const auto r = correlation_average({{{lam, 1, 0}, {lam, 1, 1}, {lam, 1, 2}}, 1'000'000});
  EXPECT_EQ(static_cast<i64>(r.class_counts[0]) - static_cast<i64>(r.class_counts[1]), -198);
  EXPECT_LE(std::abs(r.cesaro), 1.0 - 2.0 * delta_for_q(2));
}

TEST(Gowers, Examples) {
  const std::vector<cd> one(300, 1.0);
  for (unsigned k = 1; k <= 3; ++k) EXPECT_NEAR(gowers_norm(one, k), 1.0, 1e-9);
  std::vector<cd> phase(512);
  for (std::size_t n = 0; n < phase.size(); ++n) phase[n] = std::polar(1.0, 2 * kPi * std::sqrt(2.0) * n);
  EXPECT_NEAR(gowers_norm(phase, 2), 1.0, 1e-6);
  const auto lam = lambda_range(1, 4096).lambda;
  const double u2 = gowers_norm(std::span<const std::int8_t>(lam), 2);
  EXPECT_NEAR(u2, 0.162043708198, 1e-9);  // regression fixture
  EXPECT_NEAR(gowers_norm(std::span<const std::int8_t>(lam), 1), 64.0 / 4096, 1e-15);
  try {
    gowers_norm(std::vector<cd>(10001, 1.0), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CostGuard);
  }
}

TEST(Gowers, MatchesBruteForceOnSmallInputs) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    const auto f = random_unit_sequence(rng, 9 + t);
    for (unsigned k = 1; k <= 3; ++k) EXPECT_NEAR(gowers_norm(f, k), brute_gowers(f, k), 1e-10) << k;
  }
}

TEST(Gowers, ModulationInvarianceAndMonotonicity) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const auto f = random_unit_sequence(rng, 256);
    const double a = u(rng), b = u(rng);
    std::vector<cd> lin(f), quad(f);
    for (std::size_t n = 0; n < f.size(); ++n) {
      const double x = static_cast<double>(n);
      lin[n] *= std::polar(1.0, 2 * kPi * (a * x + b));
      quad[n] *= std::polar(1.0, 2 * kPi * (b * x * x + a * x));
    }
    EXPECT_NEAR(gowers_norm(lin, 2), gowers_norm(f, 2), 1e-6);
    EXPECT_NEAR(gowers_norm(quad, 3), gowers_norm(f, 3), 1e-6);
    EXPECT_LE(gowers_norm(f, 1), gowers_norm(f, 2) + 1e-9);
    EXPECT_LE(gowers_norm(f, 2), gowers_norm(f, 3) + 1e-9);
  }
}

TEST(ErdosTuran, Examples) {
  std::vector<double> grid;
  for (int j = 0; j < 100; ++j) grid.push_back(j / 100.0);
  const auto g = erdos_turan_discrepancy(grid, 10);
  EXPECT_NEAR(g.actual, 0.01, 1e-12);
  EXPECT_GE(g.bound, g.actual);

  const auto c = erdos_turan_discrepancy(std::vector<double>(50, 0.3), 5);
  EXPECT_NEAR(c.actual, 1.0, 1e-12);
  EXPECT_GE(c.bound, 1.0);

  std::vector<double> kron;
  const double phi = (1 + std::sqrt(5.0)) / 2;
  for (int n = 1; n <= 1000; ++n) kron.push_back(std::fmod(n * phi, 1.0));
  const auto k = erdos_turan_discrepancy(kron, 40);
  EXPECT_GE(k.bound, k.actual);
  EXPECT_LT(k.actual, 0.01);
}

TEST(ErdosTuran, BoundDominatesOnRandomSequences) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> pts(1 + rng() % 200);
    const double squeeze = u(rng);
    for (auto& p : pts) p = u(rng) * squeeze;
    const auto r = erdos_turan_discrepancy(pts, 1 + rng() % 30);
    EXPECT_GE(r.bound, r.actual);
  }
}

TEST(ExpSum, Examples) {
  EXPECT_NEAR(exp_sum_rhs(4, 2), std::sqrt(2.0), 1e-12);
  const auto r = max_exp_sum_check(4, 2, 20000);
  EXPECT_TRUE(r.holds());
  EXPECT_LE(r.max_lhs, std::sqrt(2.0) + 1e-12);
  EXPECT_NEAR(r.max_lhs, std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(is_cyclic_block(r.witness, 2));
  const auto full = max_exp_sum_check(7, 7, 100);
  EXPECT_TRUE(full.holds());
  EXPECT_NEAR(full.max_lhs, 0.0, 1e-12);
}

TEST(ExpSum, ProjectionLandsOnTheCappedSimplex) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = 1 + rng() % 24;
    const double m = static_cast<double>(1 + rng() % n);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    const auto w = project_capped_simplex(v, m);
    double sum = 0;
    for (double x : w) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
      sum += x;
    }
    EXPECT_NEAR(sum, m, 1e-9);
  }
}

TEST(ExpSum, GridNoViolations) {
  for (u64 n = 1; n <= 24; ++n)
    for (u64 m = 1; m <= n; ++m) {
      const auto r = max_exp_sum_check(n, m, 4000, n * 100 + m);
      EXPECT_EQ(r.violations, 0u) << n << " " << m;
      EXPECT_EQ(r.equality_mismatches, 0u) << n << " " << m;
    }
}

TEST(Delta, ClosedForm) {
  EXPECT_NEAR(delta_for_q(2), (1 - 2 / kPi) / 2, 1e-15);
  EXPECT_NEAR(delta_for_q(2), 0.18169011, 1e-8);
  EXPECT_NEAR(delta_for_q(4), 0.04984184, 1e-8);
  EXPECT_NEAR(delta_for_q(100) / (kPi * kPi / (12.0 * 100 * 100)), 1.0, 0.01);
  for (u64 q = 2; q < 1000; ++q) {
    EXPECT_GT(delta_for_q(q), 0.0);
    EXPECT_GT(delta_for_q(q), delta_for_q(q + 1));
  }
}

TEST(FourierIndicator, ExamplesAndRandom) {
  const std::vector<std::uint32_t> same(10, 3);
  EXPECT_EQ(fourier_indicator_expand(4, 3, same).expanded, (Fraction{0, 1}));
  EXPECT_TRUE(fourier_indicator_expand(4, 3, same).agree);
  const std::vector<std::uint32_t> none(10, 1);
  EXPECT_EQ(fourier_indicator_expand(4, 3, none).expanded, (Fraction{1, 1}));
  std::mt19937_64 rng(1);
  for (std::uint32_t q : {2u, 3u, 4u, 6u, 12u}) {
    std::vector<std::uint32_t> s(1000);
    for (auto& v : s) v = static_cast<std::uint32_t>(rng() % q);
    const auto r = fourier_indicator_expand(q, 1, s);
    EXPECT_TRUE(r.agree) << q;
  }
  EXPECT_THROW(fourier_indicator_expand(4, 1, std::vector<std::uint32_t>{5}), Error);
}

}  // namespace
}  // namespace llab
