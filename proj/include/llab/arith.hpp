#pragma once

// Exact integer and modular arithmetic shared by every other header.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "llab/error.hpp"

namespace llab {

using BigInt = boost::multiprecision::cpp_int;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 kDefaultSeed = 0x4c4c4142'5345'4544ULL;

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Least nonnegative residue of a modulo m (m > 0).
inline u64 reduce(i64 a, u64 m) {
  const i128 r = static_cast<i128>(a) % static_cast<i128>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i128>(m) : r);
}

inline u64 reduce(const BigInt& a, u64 m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

inline BigInt reduce(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline bool is_square(const BigInt& n) {
  if (n < 0) return false;
  const BigInt r = boost::multiprecision::sqrt(n);
  return r * r == n;
}

inline BigInt abs(const BigInt& n) { return n < 0 ? BigInt(-n) : n; }

/// Fast splitmix64 stream; used wherever a deterministic pseudo-random
/// sequence is needed inside otherwise pure functions.
class SplitMix64 {
 public:
  explicit SplitMix64(u64 seed) : state_(seed) {}
  u64 next() {
    u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  using result_type = u64;
  static constexpr u64 min() { return 0; }
  static constexpr u64 max() { return ~u64(0); }
  u64 operator()() { return next(); }

 private:
  u64 state_;
};

/// All primes <= limit (plain Eratosthenes; callers keep limit modest).
inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    if (i <= limit / i) {
      for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
  }
  return primes;
}

namespace detail {

inline const std::vector<u64>& small_primes() {
  static const std::vector<u64> primes = primes_up_to(1 << 12);
  return primes;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// gcd / CRT
// ---------------------------------------------------------------------------

template <class Int>
struct ExtendedGcd {
  Int g;
  Int s;
  Int t;
};

/// g = s*a + t*b with g = gcd(a, b) >= 0.
template <class Int>
ExtendedGcd<Int> egcd(Int a, Int b) {
  if (a == 0 && b == 0) return {Int(0), Int(0), Int(0)};
  Int old_r = a, r = b;
  Int old_s = 1, s = 0;
  Int old_t = 0, t = 1;
  while (r != 0) {
    const Int quotient = old_r / r;
    Int tmp = old_r - quotient * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quotient * s;
    old_s = s;
    s = tmp;
    tmp = old_t - quotient * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

/// Modular inverse of a modulo m, if gcd(a, m) = 1.
inline std::optional<u64> inv_mod(i64 a, u64 m) {
  if (m == 1) return 0;
  const auto [g, s, t] = egcd<i128>(static_cast<i128>(reduce(a, m)), static_cast<i128>(m));
  if (g != 1) return std::nullopt;
  i128 r = s % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

inline std::optional<BigInt> inv_mod(const BigInt& a, const BigInt& m) {
  if (m == 1) return BigInt(0);
  const auto [g, s, t] = egcd<BigInt>(reduce(a, m), m);
  if (g != 1) return std::nullopt;
  return reduce(s, m);
}

struct Congruence {
  BigInt residue;
  BigInt modulus;
};

/// Combines pairwise-coprime congruences into r mod M, 0 <= r < M.
inline Congruence crt_combine(std::span<const Congruence> system) {
  BigInt r = 0;
  BigInt m = 1;
  for (const auto& c : system) {
    if (c.modulus < 1) fail(ErrorKind::PreconditionViolated, "modulus must be >= 1");
    const auto [g, s, t] = egcd<BigInt>(m, c.modulus);
    if (g != 1) fail(ErrorKind::NonCoprimeModuli, "moduli are not pairwise coprime");
    // r' = r + m * ((c - r) * s mod c.modulus), where s = m^{-1} mod c.modulus.
    const BigInt lift = reduce((c.residue - r) * s, c.modulus);
    r = r + m * lift;
    m *= c.modulus;
    r = reduce(r, m);
  }
  return {r, m};
}

inline Congruence crt_combine(std::initializer_list<Congruence> system) {
  return crt_combine(std::span<const Congruence>(system.begin(), system.size()));
}

// ---------------------------------------------------------------------------
// Jacobi symbol
// ---------------------------------------------------------------------------

/// Jacobi symbol (a/n) for odd n >= 1.
template <class Int>
int jacobi(Int a, Int n) {
  if (n <= 0 || n % 2 == 0) fail(ErrorKind::EvenModulus, "jacobi needs an odd positive modulus");
  a %= n;
  if (a < 0) a += n;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const Int r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

inline int jacobi(i64 a, i64 n) { return jacobi<i64>(a, n); }

// ---------------------------------------------------------------------------
// Primality and factorization
// ---------------------------------------------------------------------------

namespace detail {

inline bool miller_rabin_round(u64 n, u64 base, u64 d, int s) {
  base %= n;
  if (base == 0) return true;
  u64 x = pow_mod(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

inline bool miller_rabin_round(const BigInt& n, const BigInt& base, const BigInt& d, int s) {
  BigInt x = boost::multiprecision::powm(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n - 1) return true;
  }
  return false;
}

inline constexpr u64 kMillerRabinBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

}  // namespace detail

/// Deterministic for every 64-bit input (first twelve prime bases).
inline bool is_probable_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (int i = 0; i < 12; ++i) {
    if (!detail::miller_rabin_round(n, detail::kMillerRabinBases[i], d, s)) return false;
  }
  return true;
}

/// Deterministic below 3.317e24 (first thirteen prime bases); above that,
/// 30 rounds with bases drawn from a fixed-seed generator.
inline bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n <= std::numeric_limits<u64>::max()) return is_probable_prime(static_cast<u64>(n));
  for (u64 p : detail::small_primes()) {
    if (n % p == 0) return false;
  }
  BigInt d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  static const BigInt kDeterministicBound("3317044064679887385961981");
  if (n < kDeterministicBound) {
    for (u64 base : detail::kMillerRabinBases) {
      if (!detail::miller_rabin_round(n, BigInt(base), d, s)) return false;
    }
    return true;
  }
  SplitMix64 rng(kDefaultSeed);
  const BigInt span = n - 3;
  for (int round = 0; round < 30; ++round) {
    BigInt base = 0;
    for (int limb = 0; limb < 4; ++limb) base = (base << 64) + rng.next();
    base = base % span + 2;
    if (!detail::miller_rabin_round(n, base, d, s)) return false;
  }
  return true;
}

struct PrimePower {
  BigInt prime;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// |n| = prod p^e, primes strictly increasing.
struct Factorization {
  BigInt n;
  std::vector<PrimePower> factors;

  unsigned big_omega() const {
    unsigned total = 0;
    for (const auto& f : factors) total += f.exponent;
    return total;
  }
  int liouville() const { return big_omega() % 2 == 0 ? 1 : -1; }
  BigInt product() const {
    BigInt prod = 1;
    for (const auto& f : factors) prod *= boost::multiprecision::pow(f.prime, f.exponent);
    return prod;
  }
};

using SmallFactorization = std::vector<std::pair<u64, unsigned>>;

namespace detail {

inline u64 pollard_brent(u64 n, u64 seed) {
  if (n % 2 == 0) return 2;
  SplitMix64 rng(seed);
  constexpr u64 kBatch = 128;
  for (;;) {
    const u64 c = rng.next() % (n - 1) + 1;
    u64 y = rng.next() % n;
    u64 g = 1, q = 1, x = 0, ys = 0;
    u64 r = 1;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(kBatch, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline BigInt pollard_brent(const BigInt& n, u64 seed) {
  if (n % 2 == 0) return 2;
  SplitMix64 rng(seed);
  constexpr unsigned kBatch = 64;
  for (;;) {
    const BigInt c = BigInt(rng.next()) % (n - 1) + 1;
    BigInt y = BigInt(rng.next()) % n;
    BigInt g = 1, q = 1, x = 0, ys = 0;
    u64 r = 1;
    auto f = [&](const BigInt& v) { return (v * v + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min<u64>(kBatch, r - k); ++i) {
          y = f(y);
          q = q * abs(BigInt(x - y)) % n;
        }
        g = boost::multiprecision::gcd(q, n);
        k += kBatch;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = boost::multiprecision::gcd(abs(BigInt(x - ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_rec(u64 n, u64 seed, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++out[n];
    return;
  }
  const u64 d = pollard_brent(n, seed);
  factor_rec(d, seed + 1, out);
  factor_rec(n / d, seed + 2, out);
}

inline void factor_rec(const BigInt& n, u64 seed, std::map<BigInt, unsigned>& out) {
  if (n == 1) return;
  if (n <= std::numeric_limits<u64>::max()) {
    std::map<u64, unsigned> small;
    factor_rec(static_cast<u64>(n), seed, small);
    for (const auto& [p, e] : small) out[BigInt(p)] += e;
    return;
  }
  if (is_probable_prime(n)) {
    ++out[n];
    return;
  }
  const BigInt d = pollard_brent(n, seed);
  factor_rec(d, seed + 1, out);
  factor_rec(BigInt(n / d), seed + 2, out);
}

}  // namespace detail

/// Factorization of a nonzero 64-bit value (trial division + Pollard-Brent).
inline SmallFactorization factorize_u64(u64 n, u64 seed = kDefaultSeed) {
  if (n == 0) fail(ErrorKind::ZeroArgument, "cannot factor 0");
  SmallFactorization result;
  for (u64 p : detail::small_primes()) {
    if (p * p > n) break;
    if (n % p != 0) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    result.emplace_back(p, e);
  }
  if (n > 1) {
    std::map<u64, unsigned> rest;
    detail::factor_rec(n, seed, rest);
    for (const auto& [p, e] : rest) result.emplace_back(p, e);
  }
  return result;
}

inline Factorization factorize(const BigInt& n, u64 seed = kDefaultSeed) {
  if (n == 0) fail(ErrorKind::ZeroArgument, "cannot factor 0");
  Factorization out{n, {}};
  BigInt m = abs(n);
  if (m <= std::numeric_limits<u64>::max()) {
    for (const auto& [p, e] : factorize_u64(static_cast<u64>(m), seed)) out.factors.push_back({BigInt(p), e});
    return out;
  }
  std::map<BigInt, unsigned> found;
  for (u64 p : detail::small_primes()) {
    if (m % p != 0) continue;
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    found[BigInt(p)] = e;
  }
  detail::factor_rec(m, seed, found);
  for (const auto& [p, e] : found) out.factors.push_back({p, e});
  return out;
}

/// Omega(|n|), the number of prime factors counted with multiplicity.
inline unsigned big_omega(u64 n) {
  unsigned total = 0;
  for (const auto& [p, e] : factorize_u64(n)) total += e;
  return total;
}

/// lambda(n) = (-1)^Omega(|n|), extended evenly with lambda(0) = 1.
inline int liouville(i64 n) {
  if (n == 0) return 1;
  const u64 m = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
  return big_omega(m) % 2 == 0 ? 1 : -1;
}

inline int liouville(const BigInt& n) {
  if (n == 0) return 1;
  return factorize(n).liouville();
}

/// p-adic valuation of a nonzero integer.
inline unsigned vp(const BigInt& n, u64 p) {
  if (n == 0) fail(ErrorKind::ZeroArgument, "valuation of 0 is undefined");
  if (p < 2) fail(ErrorKind::NotPrime, "valuation needs a prime");
  BigInt m = abs(n);
  unsigned v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Square roots modulo primes and prime powers
// ---------------------------------------------------------------------------

namespace detail {

/// Tonelli-Shanks for odd prime p and a quadratic residue a != 0.
inline u64 tonelli_shanks(u64 a, u64 p) {
  if (p % 4 == 3) return pow_mod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = s;
  u64 c = pow_mod(z, q, p);
  u64 t = pow_mod(a, q, p);
  u64 r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0;
    u64 t2 = t;
    while (t2 != 1) {
      t2 = mul_mod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return r;
}

}  // namespace detail

/// Smallest x in [0, p) with x^2 = a (mod p), or nothing when a is a
/// non-residue. The primality check is skipped when the caller vouches for p.
inline std::optional<u64> sqrt_mod_prime(i64 a, u64 p, bool trusted_prime = false) {
  if (!trusted_prime && !is_probable_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  const u64 r = reduce(a, p);
  if (r == 0 || p == 2) return r;
  if (pow_mod(r, (p - 1) / 2, p) != 1) return std::nullopt;
  const u64 root = detail::tonelli_shanks(r, p);
  return std::min(root, p - root);
}

inline std::optional<u64> sqrt_mod_prime(const BigInt& a, u64 p) {
  if (!is_probable_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  return sqrt_mod_prime(static_cast<i64>(reduce(a, p)), p, true);
}

namespace detail {

inline u64 checked_prime_power(u64 p, unsigned alpha) {
  u128 pk = 1;
  for (unsigned i = 0; i < alpha; ++i) {
    pk *= p;
    if (pk > (u128(1) << 62)) fail(ErrorKind::CostGuard, "prime power exceeds 2^62");
  }
  return static_cast<u64>(pk);
}

// Roots of x^2 = b (mod p^alpha) for a unit b.
inline std::vector<u64> unit_sqrt_roots(u64 b, u64 p, unsigned alpha) {
  const u64 pk = checked_prime_power(p, alpha);
  b %= pk;
  std::vector<u64> roots;
  if (p == 2) {
    if (alpha == 1) return {1};
    if (alpha == 2) return b % 4 == 1 ? std::vector<u64>{1, 3} : std::vector<u64>{};
    if (b % 8 != 1) return {};
    // Every odd square is 1 mod 8; lift one root bit by bit from 2^3.
    u64 r = 1;
    for (unsigned j = 3; j < alpha; ++j) {
      const u64 next_mod = u64(1) << (j + 1);
      if ((mul_mod(r, r, next_mod) + next_mod - b % next_mod) % next_mod != 0) r += u64(1) << (j - 1);
    }
    const u64 half = pk >> 1;
    roots = {r % pk, (pk - r) % pk, (r + half) % pk, (2 * pk - r - half) % pk};
  } else {
    const auto base = sqrt_mod_prime(static_cast<i64>(b % p), p, true);
    if (!base) return {};
    u64 r = *base;
    u64 mod = p;
    for (unsigned j = 1; j < alpha; ++j) {
      mod *= p;
      // Newton step r <- r - (r^2 - b) / (2r) modulo the next power.
      const u64 f = (mul_mod(r, r, mod) + mod - b % mod) % mod;
      const u64 inv = *inv_mod(static_cast<i64>(2 * r % mod), mod);
      r = (r + mod - mul_mod(f, inv, mod)) % mod;
    }
    roots = {r, (pk - r) % pk};
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace detail

/// All x in [0, p^alpha) with x^2 = a (mod p^alpha), sorted. Odd-p unit roots
/// are Hensel-lifted from Tonelli-Shanks; 2-adic unit roots are lifted from
/// mod 8; non-units are reduced to the unit case by stripping p^v.
inline std::vector<u64> sqrt_mod_prime_power_roots(const BigInt& a, u64 p, unsigned alpha) {
  if (alpha == 0) fail(ErrorKind::PreconditionViolated, "exponent must be >= 1");
  if (!is_probable_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  const u64 pk = detail::checked_prime_power(p, alpha);
  const u64 r = reduce(a, pk);
  std::vector<u64> roots;
  if (r == 0) {
    const u64 step = detail::checked_prime_power(p, (alpha + 1) / 2);
    for (u64 x = 0; x < pk; x += step) roots.push_back(x);
    return roots;
  }
  unsigned v = 0;
  u64 unit = r;
  while (unit % p == 0) {
    unit /= p;
    ++v;
  }
  if (v % 2 == 1) return {};
  if (v == 0) return detail::unit_sqrt_roots(unit, p, alpha);
  const u64 scale = detail::checked_prime_power(p, v / 2);
  const u64 inner = detail::checked_prime_power(p, alpha - v);
  if (scale > (u64(1) << 20)) fail(ErrorKind::CostGuard, "too many square roots to list");
  for (u64 y : detail::unit_sqrt_roots(unit, p, alpha - v)) {
    for (u64 t = 0; t < scale; ++t) roots.push_back(static_cast<u64>(static_cast<u128>(scale) * (y + t * inner) % pk));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

/// Smallest square root of a modulo p^alpha, if one exists.
inline std::optional<u64> sqrt_mod_prime_power(const BigInt& a, u64 p, unsigned alpha) {
  const auto roots = sqrt_mod_prime_power_roots(a, p, alpha);
  if (roots.empty()) return std::nullopt;
  return roots.front();
}

}  // namespace llab
