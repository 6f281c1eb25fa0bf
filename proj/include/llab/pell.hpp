#pragma once

// Continued fractions of sqrt(D) and Pell equations x^2 - D y^2 = +-1, N.

#include <optional>
#include <vector>

#include "llab/arith.hpp"

namespace llab {

inline constexpr u64 kMaxPellD = u64(1) << 60;

struct ContinuedFraction {
  u64 a0 = 0;
  std::vector<u64> period;
  friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;
};

struct PellSolution {
  BigInt x;
  BigInt y;
  BigInt n;  // right-hand side
  friend bool operator==(const PellSolution&, const PellSolution&) = default;
};

struct PellContext {
  u64 d = 2;
  ContinuedFraction cf;
  PellSolution fundamental_plus;
  std::optional<PellSolution> fundamental_minus;
};

namespace detail {

inline void require_nonsquare(u64 d) {
  if (d < 2) fail(ErrorKind::PreconditionViolated, "D must be >= 2");
  if (d > kMaxPellD) fail(ErrorKind::CostGuard, "D above 2^60");
  const u64 r = isqrt(d);
  if (r * r == d) fail(ErrorKind::PerfectSquare, std::to_string(d) + " is a perfect square");
}

inline BigInt pell_norm(const BigInt& x, const BigInt& y, u64 d) { return x * x - BigInt(d) * y * y; }

}  // namespace detail

/// sqrt(D) = [a0; period...], via m' = a d - m, d' = (D - m'^2)/d, a' = (a0 + m')/d'.
/// The period closes at the first a = 2 a0.
inline ContinuedFraction sqrt_cf(u64 d) {
  detail::require_nonsquare(d);
  ContinuedFraction cf;
  cf.a0 = isqrt(d);
  u128 m = 0, den = 1, a = cf.a0;
  do {
    m = den * a - m;
    den = (d - m * m) / den;
    a = (cf.a0 + m) / den;
    cf.period.push_back(static_cast<u64>(a));
  } while (a != 2 * cf.a0);
  return cf;
}

/// Convergent p_k / q_k for k = 0, 1, ..., using the periodic quotients.
inline std::pair<BigInt, BigInt> cf_convergent(const ContinuedFraction& cf, std::size_t k) {
  BigInt p_prev = 1, p = cf.a0, q_prev = 0, q = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const BigInt a = cf.period[(i - 1) % cf.period.size()];
    BigInt p_next = a * p + p_prev, q_next = a * q + q_prev;
    p_prev = std::move(p);
    p = std::move(p_next);
    q_prev = std::move(q);
    q = std::move(q_next);
  }
  return {p, q};
}

/// Minimal positive solution of x^2 - D y^2 = sign. For period length L it is
/// the convergent L-1 (norm (-1)^L) or 2L-1.
inline std::optional<PellSolution> fundamental_solution(u64 d, int sign) {
  if (sign != 1 && sign != -1) fail(ErrorKind::PreconditionViolated, "sign must be +-1");
  const auto cf = sqrt_cf(d);
  const std::size_t len = cf.period.size();
  if (sign == -1 && len % 2 == 0) return std::nullopt;
  const std::size_t k = (sign == 1 && len % 2 == 1) ? 2 * len - 1 : len - 1;
  auto [x, y] = cf_convergent(cf, k);
  PellSolution s{x, y, sign};
  if (detail::pell_norm(s.x, s.y, d) != sign) fail(ErrorKind::PreconditionViolated, "convergent failed to verify");
  return s;
}

inline PellContext make_pell_context(u64 d) {
  PellContext ctx;
  ctx.d = d;
  ctx.cf = sqrt_cf(d);
  ctx.fundamental_plus = *fundamental_solution(d, 1);
  ctx.fundamental_minus = fundamental_solution(d, -1);
  return ctx;
}

/// (x1 + y1 sqrt D)(x2 + y2 sqrt D); norms multiply.
inline PellSolution compose(const PellSolution& a, const PellSolution& b, u64 d) {
  return PellSolution{a.x * b.x + BigInt(d) * a.y * b.y, a.x * b.y + a.y * b.x, a.n * b.n};
}

/// The next `count` solutions after base, each obtained by one more
/// multiplication with the fundamental +1 unit.
inline std::vector<PellSolution> generate_solutions(const PellSolution& base, const PellContext& ctx,
                                                    std::size_t count) {
  if (count < 1) fail(ErrorKind::PreconditionViolated, "count must be >= 1");
  if (base.x < 0 || base.y < 0 || detail::pell_norm(base.x, base.y, ctx.d) != base.n)
    fail(ErrorKind::PreconditionViolated, "base is not a nonnegative solution for this D");
  std::vector<PellSolution> out;
  PellSolution cur = base;
  for (std::size_t i = 0; i < count; ++i) {
    cur = compose(cur, ctx.fundamental_plus, ctx.d);
    if (detail::pell_norm(cur.x, cur.y, ctx.d) != cur.n || (!out.empty() && cur.y <= out.back().y))
      fail(ErrorKind::PreconditionViolated, "composition failed to verify");
    out.push_back(cur);
  }
  return out;
}

struct NegativePellRow {
  u64 p = 0;
  BigInt x;
  BigInt y;
  BigInt n;  // x = 2n, 4n^2 + 1 = p y^2
};

/// Fundamental solutions of x^2 - p y^2 = -1 for primes p = 1 (mod 4), p <= bound.
inline std::vector<NegativePellRow> negative_pell_census(u64 bound) {
  std::vector<NegativePellRow> rows;
  if (bound < 5) return rows;
  for (u64 p : primes_up_to(bound)) {
    if (p % 4 != 1) continue;
    const auto s = fundamental_solution(p, -1);
    if (!s) fail(ErrorKind::PreconditionViolated, "no solution of x^2 - " + std::to_string(p) + " y^2 = -1");
    if (s->x % 2 != 0) fail(ErrorKind::PreconditionViolated, "odd x for p = " + std::to_string(p));
    rows.push_back(NegativePellRow{p, s->x, s->y, s->x / 2});
  }
  return rows;
}

}  // namespace llab
