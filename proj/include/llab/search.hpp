#pragma once

// Witness searches for lambda(a m^e + b) = +-1, the generalized Fermat
// precondition, and the almost-all-polynomials experiment.

#include <numeric>
#include <optional>
#include <vector>

#include "llab/arith.hpp"
#include "llab/multfn.hpp"
#include "llab/polynomial.hpp"
#include "llab/sieve.hpp"

namespace llab {

struct WitnessCell {
  u64 a = 1;
  u64 b = 1;
  std::optional<u64> m_plus;   // least m with lambda(a m^e + b) = +1
  std::optional<u64> m_minus;  // least m with lambda(a m^e + b) = -1
};

struct WitnessMiss {
  u64 a = 1;
  u64 b = 1;
  int sign = 1;
};

struct WitnessTable {
  unsigned exponent = 3;
  u64 amax = 0, bmax = 0, mbound = 0;
  std::vector<WitnessCell> cells;  // row-major in (a, b)
  std::vector<WitnessMiss> misses;
  bool complete() const { return misses.empty(); }
};

namespace detail {

inline u64 checked_power(u64 m, unsigned e) {
  u128 v = 1;
  for (unsigned i = 0; i < e; ++i) v *= m;
  if (v > (u128(1) << 62)) fail(ErrorKind::CostGuard, "a m^e + b exceeds 2^62");
  return static_cast<u64>(v);
}

}  // namespace detail

/// Least m in [1, mbound] with lambda(a m^e + b) = +-1 for every 1 <= a <= amax,
/// 1 <= b <= bmax. Signs come from one sieve over [1, amax mbound^e + bmax];
/// each witness is re-checked by factorization.
inline WitnessTable witness_table(unsigned exponent, u64 amax, u64 bmax, u64 mbound, unsigned threads = 1) {
  if (amax < 1 || bmax < 1 || mbound < 1) fail(ErrorKind::PreconditionViolated, "amax, bmax, mbound must be >= 1");
  if (exponent < 1) fail(ErrorKind::PreconditionViolated, "exponent must be >= 1");
  const u64 top = static_cast<u64>(static_cast<u128>(amax) * detail::checked_power(mbound, exponent) + bmax);
  if (top > kMaxLambdaRange) fail(ErrorKind::CostGuard, "values exceed the sieve range");
  const auto lam = lambda_range(1, top, threads).lambda;
  std::vector<u64> powers(mbound + 1);
  for (u64 m = 1; m <= mbound; ++m) powers[m] = detail::checked_power(m, exponent);
  WitnessTable t{exponent, amax, bmax, mbound, {}, {}};
  t.cells.reserve(amax * bmax);
  for (u64 a = 1; a <= amax; ++a) {
    for (u64 b = 1; b <= bmax; ++b) {
      WitnessCell cell{a, b, std::nullopt, std::nullopt};
      for (u64 m = 1; m <= mbound && !(cell.m_plus && cell.m_minus); ++m) {
        const int s = lam[a * powers[m] + b - 1];
        auto& slot = s > 0 ? cell.m_plus : cell.m_minus;
        if (!slot) slot = m;
      }
      for (int sign : {1, -1}) {
        const auto& slot = sign > 0 ? cell.m_plus : cell.m_minus;
        if (!slot) {
          t.misses.push_back({a, b, sign});
          continue;
        }
        if (factorize(BigInt(a * powers[*slot] + b)).liouville() != sign)
          fail(ErrorKind::PreconditionViolated, "witness failed re-verification");
      }
      t.cells.push_back(cell);
    }
  }
  return t;
}

inline WitnessTable multivariate_cubic_table(u64 amax, u64 bmax, u64 mbound, unsigned threads = 1) {
  return witness_table(3, amax, bmax, mbound, threads);
}

inline WitnessTable multivariate_quadratic_table(u64 amax, u64 bmax, u64 mbound, unsigned threads = 1) {
  return witness_table(2, amax, bmax, mbound, threads);
}

/// 1/p + 1/q + 1/r > 1, compared as qr + pr + pq > pqr.
inline bool beukers_precondition(u64 p, u64 q, u64 r) {
  if (p < 1 || q < 1 || r < 1) fail(ErrorKind::PreconditionViolated, "exponents must be >= 1");
  const u128 pp = p, qq = q, rr = r;
  return qq * rr + pp * rr + pp * qq > pp * qq * rr;
}

struct CoprimeLift {
  BigInt value;  // a m^e1 + b n^e2 = h z^2
  BigInt h;      // signed squarefree part
  BigInt z;
  int lambda_h = 1;
  bool coprime = true;  // gcd(m, n, z) = 1
};

inline CoprimeLift coprime_witness_lift(const BigInt& a, const BigInt& b, unsigned e1, unsigned e2, u64 m, u64 n = 1) {
  CoprimeLift out;
  out.value = a * boost::multiprecision::pow(BigInt(m), e1) + b * boost::multiprecision::pow(BigInt(n), e2);
  if (out.value == 0) fail(ErrorKind::ZeroArgument, "a m^e1 + b n^e2 vanishes");
  out.h = out.value < 0 ? -1 : 1;
  out.z = 1;
  for (const auto& f : factorize(out.value).factors) {
    if (f.exponent % 2) out.h *= f.prime;
    out.z *= boost::multiprecision::pow(f.prime, f.exponent / 2);
  }
  if (out.h * out.z * out.z != out.value) fail(ErrorKind::PreconditionViolated, "square part extraction failed");
  out.lambda_h = liouville(out.h);
  const BigInt g = boost::multiprecision::gcd(boost::multiprecision::gcd(BigInt(m), BigInt(n)), out.z);
  out.coprime = g == 1;
  return out;
}

// ---------------------------------------------------------------------------
// Almost all polynomials
// ---------------------------------------------------------------------------

inline constexpr u64 kMaxAlmostAllWork = 200'000'000;  // H * #polynomials
inline constexpr u64 kMaxAlmostAllTable = 50'000'000;

struct PolyWitness {
  IntPolynomial poly;
  std::optional<u64> n;  // least n <= H with g(P(n)) = v
};

struct AlmostAllResult {
  u64 polynomials = 0;
  u64 without_witness = 0;
  bool exhaustive = true;
  std::vector<PolyWitness> rows;
  Fraction fraction() const { return {without_witness, polynomials}; }
};

/// Degree-d polynomials with lead in [1, N] and other coefficients in [-N, N]:
/// the share with no n <= H such that g(P(n)) = e(v/q). Exhaustive when
/// samples == 0, otherwise `samples` polynomials drawn with the seed.
inline AlmostAllResult almost_all_experiment(unsigned d, u64 height, u64 h, const MultFn& g, std::uint32_t v,
                                             u64 samples = 0, u64 seed = kDefaultSeed) {
  if (d < 1 || height < 1) fail(ErrorKind::PreconditionViolated, "need d >= 1 and N >= 1");
  if (v >= g.order()) fail(ErrorKind::PreconditionViolated, "v must lie in Z_q");
  const u64 side = 2 * height + 1;
  u128 total = height;
  for (unsigned i = 0; i < d; ++i) {
    total *= side;
    if (total > (u128(1) << 62)) fail(ErrorKind::CostGuard, "polynomial grid too large");
  }
  const bool exhaustive = samples == 0;
  const u64 count = exhaustive ? static_cast<u64>(total) : samples;
  if (static_cast<u128>(count) * std::max<u64>(h, 1) > kMaxAlmostAllWork)
    fail(ErrorKind::CostGuard, "H times #polynomials above 2e8");

  // |P(n)| <= N (1 + H + ... + H^d) for n <= H.
  u128 bound = 0, hp = 1;
  for (unsigned i = 0; i <= d; ++i) {
    bound += static_cast<u128>(height) * hp;
    hp *= std::max<u64>(h, 1);
    if (bound > (u128(1) << 100)) break;
  }
  std::vector<std::uint32_t> table;
  if (h > 0 && bound <= kMaxAlmostAllTable)
    table = exponent_range(1, static_cast<u64>(bound), g.order(), [&](u64 p) { return g.exponent_at_prime(p); });
  auto exponent_at = [&](const BigInt& value) -> std::uint32_t {
    if (value == 0) return 0;
    if (!table.empty()) return table[static_cast<u64>(abs(value)) - 1];
    return eval_multfn(g, value).exponent;
  };

  AlmostAllResult out;
  out.exhaustive = exhaustive;
  SplitMix64 rng(seed);
  std::vector<BigInt> coeffs(d + 1);
  for (u64 idx = 0; idx < count; ++idx) {
    u64 code = exhaustive ? idx : static_cast<u64>(static_cast<u128>(rng.next()) * total >> 64);
    coeffs[d] = 1 + static_cast<i64>(code % height);
    code /= height;
    for (unsigned i = 0; i < d; ++i) {
      coeffs[i] = static_cast<i64>(code % side) - static_cast<i64>(height);
      code /= side;
    }
    PolyWitness row{IntPolynomial(coeffs), std::nullopt};
    for (u64 n = 1; n <= h; ++n) {
      if (exponent_at(row.poly(BigInt(n))) == v) {
        row.n = n;
        break;
      }
    }
    ++out.polynomials;
    out.without_witness += !row.n;
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace llab
