#pragma once

// The functional equation
//
//   psi(x) psi(y) psi(z) = psi((4xyz - x - y - z) / (4(xy + yz + zx) - 1))
//
// for psi: Z_q -> {-1, +1}, whenever 4(xy + yz + zx) - 1 is a unit mod q,
// together with the constructive divisibility solver behind it, hyperbola
// point counts and the periodicity falsifiers for lambda(P(n)).

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <vector>

#include "llab/arith.hpp"
#include "llab/multfn.hpp"
#include "llab/polynomial.hpp"
#include "llab/sieve.hpp"

namespace llab {

inline constexpr u64 kMaxEnumerationModulus = 24;
inline constexpr u64 kDefaultDivisibilityPrimeBound = 10'000'000;
inline constexpr u64 kDivisibilityRCandidates = 4096;  // members of the r class tried per p

struct Triple {
  u64 x = 0;
  u64 y = 0;
  u64 z = 0;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct EquationCheck {
  bool satisfied = true;
  std::optional<Triple> violation;  // first violating (x, y, z) in lexicographic order
  explicit operator bool() const { return satisfied; }
};

namespace detail {

/// Calls visit(x, y, z, w) for every admissible triple, w the right-hand argument.
template <class Visit>
void for_each_admissible_triple(u64 q, Visit&& visit) {
  for (u64 x = 0; x < q; ++x)
    for (u64 y = 0; y < q; ++y)
      for (u64 z = 0; z < q; ++z) {
        const i64 xi = static_cast<i64>(x), yi = static_cast<i64>(y), zi = static_cast<i64>(z);
        const i64 den = 4 * (xi * yi + yi * zi + zi * xi) - 1;
        const auto inv = inv_mod(den, q);
        if (!inv) continue;
        const u64 num = reduce(4 * xi * yi * zi - xi - yi - zi, q);
        if (!visit(x, y, z, mul_mod(num, *inv, q))) return;
      }
}

}  // namespace detail

/// Exhaustive check over Z_q^3.
inline EquationCheck satisfies_functional_equation(const PsiTable& psi) {
  if (psi.values.size() != psi.q || psi.q == 0) fail(ErrorKind::PreconditionViolated, "table length must equal q");
  EquationCheck result;
  detail::for_each_admissible_triple(psi.q, [&](u64 x, u64 y, u64 z, u64 w) {
    if (psi.values[x] * psi.values[y] * psi.values[z] != psi.values[w]) {
      result.satisfied = false;
      result.violation = Triple{x, y, z};
      return false;
    }
    return true;
  });
  return result;
}

/// Smallest d | q with psi(x + d) = psi(x) for all x.
inline u64 minimal_period(const PsiTable& psi) {
  for (u64 d = 1; d < psi.q; ++d) {
    if (psi.q % d != 0) continue;
    bool periodic = true;
    for (u64 x = 0; x + d < psi.q && periodic; ++x) periodic = psi.values[x] == psi.values[x + d];
    if (periodic) return d;
  }
  return psi.q;
}

inline bool is_primitive(const PsiTable& psi) { return minimal_period(psi) == psi.q; }

struct CharacterMatch {
  u64 character_q = 1;
  int r = 0;
  int sign = 1;
  friend bool operator==(const CharacterMatch&, const CharacterMatch&) = default;
};

/// Finds (q', r, sign) with psi(x) = sign (-1)^{rx} jacobi(4x^2+1, q'), q' | q.
/// Absent means psi solves the equation but is outside the character family.
inline std::optional<CharacterMatch> classify_solution(const PsiTable& psi) {
  if (!satisfies_functional_equation(psi))
    fail(ErrorKind::PreconditionViolated, "table does not satisfy the functional equation");
  for (u64 d = 1; d <= psi.q; ++d) {
    if (psi.q % d != 0 || !is_character_family_modulus(d)) continue;
    for (int r = 0; r <= (psi.q % 2 == 0 ? 1 : 0); ++r)
      for (int sign : {1, -1})
        if (character_family_psi(d, r, sign, psi.q) == psi) return CharacterMatch{d, r, sign};
  }
  return std::nullopt;
}

struct Solution {
  PsiTable psi;
  bool primitive = false;
  u64 induced_from = 1;  // minimal period
  std::optional<CharacterMatch> character;
};

/// All psi on Z_q with psi(0) = +1 solving the equation, sorted by table.
///
/// Writing psi = (-1)^s, every admissible triple gives the GF(2) relation
/// s_x + s_y + s_z + s_w = 0, so the solutions form the null space of a
/// q-column binary system; it is reduced by elimination and enumerated.
inline std::vector<Solution> enumerate_solutions(u64 q) {
  if (q < 1) fail(ErrorKind::PreconditionViolated, "q must be >= 1");
  if (q > kMaxEnumerationModulus) fail(ErrorKind::ModulusTooLarge, "enumeration is limited to q <= 24");
  std::array<u64, 64> pivot_row{};  // pivot_row[c] has lowest set bit c, or 0
  auto insert = [&](u64 row) {
    for (int c = 0; c < static_cast<int>(q) && row; ++c) {
      if (!((row >> c) & 1)) continue;
      if (pivot_row[c] == 0) {
        pivot_row[c] = row;
        return;
      }
      row ^= pivot_row[c];
    }
  };
  insert(1);  // s_0 = 0
  detail::for_each_admissible_triple(q, [&](u64 x, u64 y, u64 z, u64 w) {
    insert((u64(1) << x) ^ (u64(1) << y) ^ (u64(1) << z) ^ (u64(1) << w));
    return true;
  });
  // Back-substitute to reduced row echelon form.
  for (int c = static_cast<int>(q) - 1; c >= 0; --c) {
    if (!pivot_row[c]) continue;
    for (int c2 = 0; c2 < c; ++c2)
      if (pivot_row[c2] && ((pivot_row[c2] >> c) & 1)) pivot_row[c2] ^= pivot_row[c];
  }
  std::vector<int> free_cols;
  for (int c = 0; c < static_cast<int>(q); ++c)
    if (!pivot_row[c]) free_cols.push_back(c);
  std::vector<Solution> out;
  for (u64 mask = 0; mask < (u64(1) << free_cols.size()); ++mask) {
    u64 s = 0;
    for (std::size_t i = 0; i < free_cols.size(); ++i)
      if ((mask >> i) & 1) s |= u64(1) << free_cols[i];
    for (int c = 0; c < static_cast<int>(q); ++c) {
      if (!pivot_row[c]) continue;
      // Row c reads s_c + sum_{free f in row} s_f = 0.
      const u64 others = pivot_row[c] & ~(u64(1) << c);
      if (std::popcount(others & s) % 2) s |= u64(1) << c;
    }
    PsiTable psi{q, std::vector<std::int8_t>(q)};
    for (u64 x = 0; x < q; ++x) psi.values[x] = (s >> x) & 1 ? -1 : 1;
    Solution sol;
    sol.induced_from = minimal_period(psi);
    sol.primitive = sol.induced_from == q;
    sol.character = classify_solution(psi);
    sol.psi = std::move(psi);
    out.push_back(std::move(sol));
  }
  std::sort(out.begin(), out.end(), [](const Solution& a, const Solution& b) { return a.psi > b.psi; });
  return out;
}

// ---------------------------------------------------------------------------
// Divisibility solver
// ---------------------------------------------------------------------------

struct DivisibilitySolution {
  std::array<BigInt, 3> x;
  BigInt divisor;    // 4(x1x2 + x2x3 + x3x1) - 1, equals -r
  BigInt numerator;  // 4x1x2x3 - x1 - x2 - x3
  u64 p = 0;
  u64 r = 0;
  u64 d = 1;
};

/// Integers x_i = a_i (mod q), |x_i| >= min_abs, with
/// 4(x1x2 + x2x3 + x3x1) - 1 | 4x1x2x3 - x1 - x2 - x3.
///
/// Construction: with s = a1 + a2 != 0 (after permuting or shifting a
/// representative), d the q-primary part of s, pick primes p = s/d (mod qd)
/// and r = 1 - A (mod 4qd) with (r - 1)/4 a square mod p; take
/// x1 = a1 (mod 4qd), x1^2 = (r-1)/4 (mod p), 4x1^2 = -1 (mod r), then
/// x2 = dp - x1 and x3 = ((1 - r)/4 - x1 x2) / (dp). The divisor is then -r.
/// p runs up to prime_bound; each p gets kDivisibilityRCandidates tries at r.
inline DivisibilitySolution solve_divisibility(u64 q, std::array<i64, 3> a, const BigInt& min_abs,
                                               u64 prime_bound = kDefaultDivisibilityPrimeBound) {
  if (q < 1) fail(ErrorKind::PreconditionViolated, "q must be >= 1");
  if (min_abs < 1) fail(ErrorKind::PreconditionViolated, "C must be >= 1");
  const i64 qi = static_cast<i64>(q);
  for (auto& v : a) v = static_cast<i64>(reduce(v, q));
  const i64 big_a = 4 * (a[0] * a[1] + a[1] * a[2] + a[2] * a[0]);
  if (std::gcd(static_cast<u64>(reduce(big_a - 1, q)), q) != 1 && q != 1)
    fail(ErrorKind::PreconditionViolated, "4(a1a2 + a2a3 + a3a1) - 1 is not a unit mod q");

  // Order (i, j, k) so that a_i + a_j != 0; shift a representative if needed.
  std::array<int, 3> order{0, 1, 2};
  std::array<i64, 3> rep = a;
  if (rep[0] + rep[1] == 0) {
    if (rep[0] + rep[2] != 0) order = {0, 2, 1};
    else if (rep[1] + rep[2] != 0) order = {1, 2, 0};
    else rep[0] += qi;
  }
  const i64 a1 = rep[order[0]], a2 = rep[order[1]];
  const i64 s = a1 + a2;

  u64 d = 1;
  for (const auto& [ell, e] : factorize_u64(q)) {
    (void)e;
    i64 rest = s;
    while (rest % static_cast<i64>(ell) == 0) {
      rest /= static_cast<i64>(ell);
      d *= ell;
    }
  }
  const u64 s0 = static_cast<u64>(s) / d;
  const u64 qd = q * d;
  if (qd > (u64(1) << 30)) fail(ErrorKind::CostGuard, "q * d too large for the prime search");
  const u64 mod4qd = 4 * qd;
  const u64 r_class = reduce(1 - big_a, mod4qd);

  for (u64 p = s0 % qd; p <= prime_bound; p += qd) {
    if (p < 3 || !is_probable_prime(p)) continue;
    // r = -2 (mod p) needs -3 to be a square mod p; otherwise r = 1 (mod p)
    // keeps (r - 1)/4 = 0 a square.
    const u64 r_mod_p = (p == 3 || jacobi(-3, static_cast<i64>(p)) == 1) ? p - 2 : 1;
    const auto r_start = crt_combine({{BigInt(r_class), BigInt(mod4qd)}, {BigInt(r_mod_p), BigInt(p)}});
    const u64 r_step = static_cast<u64>(r_start.modulus);
    u64 r = static_cast<u64>(r_start.residue);
    for (u64 tried = 0; tried < kDivisibilityRCandidates; ++tried, r += r_step) {
      if (r < 5 || r == p || !is_probable_prime(r)) continue;
      const u64 inv4 = *inv_mod(4, p);
      const u64 target_p = mul_mod((r - 1) % p, inv4, p);
      const auto root_p = sqrt_mod_prime(static_cast<i64>(target_p), p, true);
      const auto i_r = sqrt_mod_prime(static_cast<i64>(r - 1), r, true);  // sqrt(-1) mod r
      if (!root_p || !i_r) continue;
      const u64 x1_mod_r = mul_mod(*i_r, *inv_mod(2, r), r);
      const auto base = crt_combine({{BigInt(a1), BigInt(mod4qd)}, {BigInt(*root_p), BigInt(p)},
                                     {BigInt(x1_mod_r), BigInt(r)}});
      const BigInt dp = BigInt(d) * p;
      const BigInt quarter = (BigInt(1) - BigInt(r)) / 4;
      BigInt x1 = base.residue;
      const BigInt floor_x1 = min_abs + dp + dp * r;
      if (x1 < floor_x1) x1 += ((floor_x1 - x1) / base.modulus + 1) * base.modulus;
      for (int attempt = 0; attempt < 64; ++attempt, x1 += base.modulus) {
        const BigInt x2 = dp - x1;
        const BigInt num3 = quarter - x1 * x2;
        if (num3 % dp != 0) break;  // construction broken for this (p, r)
        const BigInt x3 = num3 / dp;
        std::array<BigInt, 3> xs{x1, x2, x3};
        bool ok = true;
        for (const auto& v : xs) ok = ok && abs(v) >= min_abs;
        if (!ok) continue;
        std::array<BigInt, 3> out;
        out[order[0]] = x1;
        out[order[1]] = x2;
        out[order[2]] = x3;
        const BigInt divisor = 4 * (out[0] * out[1] + out[1] * out[2] + out[2] * out[0]) - 1;
        const BigInt numerator = 4 * out[0] * out[1] * out[2] - out[0] - out[1] - out[2];
        bool congruent = true;
        for (int i = 0; i < 3; ++i) congruent = congruent && reduce(BigInt(out[i] - a[i]), BigInt(q)) == 0;
        if (!congruent || divisor == 0 || numerator % divisor != 0) break;
        return DivisibilitySolution{out, divisor, numerator, p, r, d};
      }
    }
  }
  fail(ErrorKind::SearchExhausted, "no prime pair (p, r) below the bound");
}

/// #{x in Z_p : 4x^2 + 1 is a square mod p} for a prime p = 3 (mod 4).
inline u64 hyperbola_point_count(u64 p) {
  if (!is_probable_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (p % 4 != 3) fail(ErrorKind::WrongResidueClass, "p must be 3 mod 4");
  std::vector<bool> square(p, false);
  for (u64 y = 0; y < p; ++y) square[mul_mod(y, y, p)] = true;
  u64 count = 0;
  for (u64 x = 0; x < p; ++x) count += square[(4 * mul_mod(x, x, p) + 1) % p];
  return count;
}

// ---------------------------------------------------------------------------
// Periodicity
// ---------------------------------------------------------------------------

struct Periodicity {
  std::size_t preperiod = 0;  // first index of the periodic tail (0-based)
  std::size_t period = 1;
  friend bool operator==(const Periodicity&, const Periodicity&) = default;
};

namespace detail {

inline bool tail_periodic(std::span<const std::int8_t> seq, std::size_t from, std::size_t period) {
  for (std::size_t i = from; i + period < seq.size(); ++i)
    if (seq[i] != seq[i + period]) return false;
  return true;
}

}  // namespace detail

/// Scans the windows u(n) = (F(n), ..., F(n+K)); on the first repeat
/// u(n1) = u(n2) checks that the data is (n2 - n1)-periodic from n1, then
/// shrinks period and preperiod to their minima. Absent when the tail is not
/// periodic, which refutes an order-K recurrence.
inline std::optional<Periodicity> detect_recurrence_periodicity(std::span<const std::int8_t> seq, unsigned order) {
  if (order > 24) fail(ErrorKind::CostGuard, "recurrence order limited to 24");
  const std::size_t width = order + 1;
  const std::size_t needed = (std::size_t(1) << width) + width;
  if (seq.size() < needed) fail(ErrorKind::InsufficientData, "need at least 2^(K+1) + K + 1 terms");
  std::vector<std::int64_t> first_seen(std::size_t(1) << width, -1);
  for (std::size_t n = 0; n + width <= seq.size(); ++n) {
    std::size_t code = 0;
    for (std::size_t j = 0; j < width; ++j) code = (code << 1) | (seq[n + j] < 0 ? 1 : 0);
    if (first_seen[code] < 0) {
      first_seen[code] = static_cast<std::int64_t>(n);
      continue;
    }
    const std::size_t n1 = static_cast<std::size_t>(first_seen[code]);
    const std::size_t period = n - n1;
    if (!detail::tail_periodic(seq, n1, period)) return std::nullopt;
    std::size_t best = period;
    for (std::size_t d = 1; d < period; ++d) {
      if (period % d == 0 && detail::tail_periodic(seq, n1, d)) {
        best = d;
        break;
      }
    }
    std::size_t start = n1;
    while (start > 0 && start - 1 + best < seq.size() && seq[start - 1] == seq[start - 1 + best]) --start;
    return Periodicity{start, best};
  }
  return std::nullopt;
}

struct PeriodicityWitness {
  u64 q = 1;
  u64 phase = 0;
  std::optional<std::pair<u64, u64>> pair;  // least n1 < n2 <= X in the class with different signs
};

/// For every q <= qmax and phase b < q, the least pair n1 < n2 <= X with
/// n1 = n2 = b (mod q) and lambda(P(n1)) != lambda(P(n2)).
inline std::vector<PeriodicityWitness> falsify_periodicity(const IntPolynomial& p, u64 qmax, u64 x,
                                                           std::span<const IntPolynomial> factors = {},
                                                           const SieveOptions& opts = {}) {
  if (qmax < 1 || x < 2 * qmax) fail(ErrorKind::PreconditionViolated, "need X >= 2 qmax");
  const auto signs = lambda_poly_range(p, 1, static_cast<i64>(x), factors, opts);
  std::vector<PeriodicityWitness> table;
  for (u64 q = 1; q <= qmax; ++q) {
    for (u64 b = 0; b < q; ++b) {
      PeriodicityWitness w{q, b, std::nullopt};
      const u64 n1 = b == 0 ? q : b;
      for (u64 n2 = n1 + q; n2 <= x; n2 += q) {
        if (signs[n2 - 1] != signs[n1 - 1]) {
          w.pair = std::make_pair(n1, n2);
          break;
        }
      }
      table.push_back(w);
    }
  }
  return table;
}

}  // namespace llab
