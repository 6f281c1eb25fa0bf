#pragma once

// P(x) = x(x^2 - Bx + C): the reduction to a four-term product of shifted
// linear forms, and sign censuses of lambda(P(n)).

#include <algorithm>
#include <set>
#include <vector>

#include "llab/arith.hpp"
#include "llab/polynomial.hpp"
#include "llab/sieve.hpp"

namespace llab {

struct CubicReduction {
  BigInt b;
  BigInt c;
  BigInt delta;  // B^2 - 4C
  BigInt k;      // 2B + 2C + 2 if C >= 0, else 2B - 2C - 2
  BigInt y;      // y^2 = k^2 - 4Bk + 4 delta
  BigInt n0;     // least n0 >= 0 with n0^2 = delta (mod 2k)
  BigInt t1;     // roots of x^2 + kx + (Bk - delta), t1 <= t2
  BigInt t2;
  unsigned v2_k = 0;
  int lambda_k = 1;
};

/// Least residue n with n^2 = a (mod m), by CRT over the prime-power roots of m.
inline std::optional<BigInt> least_sqrt_mod(const BigInt& a, u64 m) {
  if (m == 0) fail(ErrorKind::PreconditionViolated, "modulus must be positive");
  if (m == 1) return BigInt(0);
  std::vector<std::vector<u64>> roots;
  std::vector<u64> moduli;
  for (const auto& [p, e] : factorize_u64(m)) {
    auto r = sqrt_mod_prime_power_roots(a, p, e);
    if (r.empty()) return std::nullopt;
    roots.push_back(std::move(r));
    u64 pe = 1;
    for (unsigned i = 0; i < e; ++i) pe *= p;
    moduli.push_back(pe);
  }
  std::optional<BigInt> best;
  std::vector<std::size_t> idx(roots.size(), 0);
  while (true) {
    std::vector<Congruence> system;
    for (std::size_t i = 0; i < roots.size(); ++i) system.push_back({BigInt(roots[i][idx[i]]), BigInt(moduli[i])});
    const auto c = crt_combine(system);
    if (!best || c.residue < *best) best = c.residue;
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == roots[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return best;
}

inline CubicReduction build_reduction(const BigInt& b, const BigInt& c) {
  if (b < 0) fail(ErrorKind::PreconditionViolated, "B must be >= 0");
  CubicReduction red;
  red.b = b;
  red.c = c;
  red.delta = b * b - 4 * c;
  if (red.delta >= 0 && is_square(red.delta))
    fail(ErrorKind::SquareDiscriminant, "B^2 - 4C = " + red.delta.str() + " is a perfect square");
  red.k = c >= 0 ? BigInt(2 * b + 2 * c + 2) : BigInt(2 * b - 2 * c - 2);
  if (red.k <= 0) fail(ErrorKind::PreconditionViolated, "k must be positive");
  const BigInt disc = red.k * red.k - 4 * b * red.k + 4 * red.delta;
  if (disc < 0 || !is_square(disc)) fail(ErrorKind::PreconditionViolated, "k^2 - 4Bk + 4 delta is not a square");
  red.y = boost::multiprecision::sqrt(disc);
  red.t1 = (-red.k - red.y) / 2;
  red.t2 = (-red.k + red.y) / 2;
  if (red.t1 + red.t2 != -red.k || red.t1 * red.t2 != b * red.k - red.delta)
    fail(ErrorKind::PreconditionViolated, "Vieta check failed");
  const BigInt two_k = 2 * red.k;
  if (two_k > BigInt(u64(1) << 62)) fail(ErrorKind::CostGuard, "2k above 2^62");
  const auto n0 = least_sqrt_mod(red.delta, static_cast<u64>(two_k));
  if (!n0) fail(ErrorKind::PreconditionViolated, "delta is not a square mod 2k");
  red.n0 = *n0;
  red.v2_k = vp(red.k, 2);
  red.lambda_k = liouville(red.k);
  return red;
}

/// (n^2 - D)((n+k)^2 - D) == (n(n+k) - D)^2 - D k^2, checked exactly.
inline bool verify_norm_identity(const BigInt& n, const BigInt& k, const BigInt& delta) {
  const BigInt m = n + k;
  return (n * n - delta) * (m * m - delta) == (n * m - delta) * (n * m - delta) - delta * k * k;
}

struct FourTermProduct {
  IntPolynomial product;      // prod over shifts s of (2k x + n0 + s)
  std::vector<BigInt> shifts;  // t1, t2, B, B + k
  std::size_t distinct = 0;
};

inline FourTermProduct four_term_product(const CubicReduction& red) {
  FourTermProduct out{IntPolynomial::constant(1), {red.t1, red.t2, red.b, red.b + red.k}, 0};
  for (const auto& s : out.shifts) out.product = out.product * IntPolynomial({red.n0 + s, 2 * red.k});
  out.distinct = std::set<BigInt>(out.shifts.begin(), out.shifts.end()).size();
  if (out.distinct <= 2) fail(ErrorKind::DegenerateShifts, "at most two distinct shifts");
  return out;
}

struct SignCounts {
  u64 plus = 0;
  u64 minus = 0;
  friend bool operator==(const SignCounts&, const SignCounts&) = default;
};

struct CubicCensus {
  SignCounts all;
  std::optional<SignCounts> progression;  // n = n0 (mod 2k), when the reduction exists
  std::optional<CubicReduction> reduction;
};

inline IntPolynomial cubic_polynomial(const BigInt& b, const BigInt& c) { return IntPolynomial({0, c, -b, 1}); }

/// Counts of lambda(n(n^2 - Bn + C)) = +-1 for 1 <= n <= X.
inline CubicCensus cubic_sign_census(const BigInt& b, const BigInt& c, u64 x, const SieveOptions& opts = {}) {
  if (b < 0) fail(ErrorKind::PreconditionViolated, "B must be >= 0");
  if (x < 1) fail(ErrorKind::PreconditionViolated, "X must be >= 1");
  const IntPolynomial quad({c, -b, 1});
  const IntPolynomial lin({0, 1});
  const auto signs = lambda_poly_range(lin * quad, 1, static_cast<i64>(x), {lin, quad}, opts);
  CubicCensus out;
  for (auto s : signs) (s > 0 ? out.all.plus : out.all.minus)++;
  try {
    out.reduction = build_reduction(b, c);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SquareDiscriminant) throw;
  }
  if (out.reduction) {
    const u64 m = static_cast<u64>(2 * out.reduction->k);
    const u64 r = static_cast<u64>(out.reduction->n0);
    SignCounts pc;
    for (u64 n = (r == 0 ? m : r); n <= x; n += m) (signs[n - 1] > 0 ? pc.plus : pc.minus)++;
    out.progression = pc;
  }
  return out;
}

}  // namespace llab
