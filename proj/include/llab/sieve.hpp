#pragma once

// Segmented sieves: lambda(n) over ranges, bulk lambda(P(n)), smoothness.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "llab/arith.hpp"
#include "llab/polynomial.hpp"

namespace llab {

inline constexpr u64 kMaxLambdaRange = 1'000'000'000ULL;
inline constexpr u64 kMaxPerValueRange = 100'000ULL;
/// Largest |factor value| handled by the sieve path (sieving primes <= 1e8).
inline constexpr u64 kMaxSieveValue = 10'000'000'000'000'000ULL;
inline constexpr u64 kBlockSize = u64(1) << 16;

struct SieveOptions {
  unsigned threads = 1;
  /// Check every nontrivial residual with is_probable_prime.
  bool verify_residuals = false;
};

struct SieveSegment {
  u64 start = 1;
  std::vector<std::int8_t> lambda;  // lambda[i] = lambda(start + i)

  u64 length() const { return lambda.size(); }
};

namespace detail {

/// Memory guard in bytes from LLAB_MAX_MEM, if set.
inline std::optional<u64> max_mem_from_env() {
  const char* env = std::getenv("LLAB_MAX_MEM");
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    return std::stoull(env);
  } catch (...) {
    fail(ErrorKind::ParseError, "LLAB_MAX_MEM must be a byte count");
  }
}

/// Runs body(block_lo, block_hi) over [lo, hi] split in fixed blocks; blocks are
/// distributed round-robin over worker threads. Each block owns its output slice.
template <class Body>
void for_each_block(u64 lo, u64 hi, unsigned threads, Body&& body) {
  const u64 count = (hi - lo) / kBlockSize + 1;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<u64>(count, 64))));
  auto worker = [&](unsigned id) {
    for (u64 b = id; b < count; b += threads) {
      const u64 blo = lo + b * kBlockSize;
      const u64 bhi = std::min(hi, blo + kBlockSize - 1);
      body(blo, bhi);
    }
  };
  if (threads == 1) {
    worker(0);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Sum over prime powers of v_p(n) * exponent(p) modulo q, for n in [x1, x2].
/// exponent(p) is queried for sieving primes and for the single large prime
/// left over in each cofactor.
template <class ExponentOf>
std::vector<std::uint32_t> exponent_range(u64 x1, u64 x2, std::uint32_t q, ExponentOf&& exponent, unsigned threads = 1) {
  if (x1 < 1 || x2 < x1) fail(ErrorKind::PreconditionViolated, "range must satisfy 1 <= X1 <= X2");
  if (x2 - x1 > kMaxLambdaRange) fail(ErrorKind::RangeTooLarge, "range exceeds 1e9 values");
  if (q == 0) fail(ErrorKind::PreconditionViolated, "order must be >= 1");
  const auto primes = primes_up_to(isqrt(x2));
  std::vector<std::uint32_t> prime_exp(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) prime_exp[i] = static_cast<std::uint32_t>(exponent(primes[i]) % q);
  std::vector<std::uint32_t> out(x2 - x1 + 1);
  detail::for_each_block(x1, x2, threads, [&](u64 lo, u64 hi) {
    std::vector<u64> smooth_part(hi - lo + 1, 1);
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const u64 p = primes[i];
      for (u64 pk = p;; pk *= p) {
        u64 n = (lo + pk - 1) / pk * pk;
        for (; n <= hi; n += pk) {
          auto& slot = out[n - x1];
          slot = (slot + prime_exp[i]) % q;
          smooth_part[n - lo] *= p;
        }
        if (pk > hi / p) break;
      }
    }
    for (u64 n = lo; n <= hi; ++n) {
      if (smooth_part[n - lo] != n) {
        auto& slot = out[n - x1];
        slot = static_cast<std::uint32_t>((slot + exponent(n / smooth_part[n - lo]) % q) % q);
      }
    }
  });
  return out;
}

/// Exact lambda on [x1, x2] by a segmented prime-power sieve.
inline SieveSegment lambda_range(u64 x1, u64 x2, unsigned threads = 1) {
  if (x1 < 1 || x2 < x1) fail(ErrorKind::PreconditionViolated, "range must satisfy 1 <= X1 <= X2");
  if (x2 - x1 > kMaxLambdaRange) fail(ErrorKind::RangeTooLarge, "range exceeds 1e9 values");
  if (const auto limit = detail::max_mem_from_env(); limit && x2 - x1 + 1 > *limit)
    fail(ErrorKind::RangeTooLarge, "range exceeds LLAB_MAX_MEM");
  const auto parity = exponent_range(x1, x2, 2, [](u64) { return 1u; }, threads);
  SieveSegment seg{x1, std::vector<std::int8_t>(parity.size())};
  for (std::size_t i = 0; i < parity.size(); ++i) seg.lambda[i] = parity[i] ? -1 : 1;
  return seg;
}

/// Sieve state for the values of one polynomial factor over [a, b].
struct PolyValueSieve {
  IntPolynomial poly;
  i64 a = 0;
  i64 b = 0;
  std::vector<u64> residual;          // cofactor left after removing p <= sqrt(max value)
  std::vector<std::uint32_t> omega_acc;  // prime factors removed, with multiplicity
  std::vector<bool> is_zero;          // poly(n) == 0

  unsigned omega(i64 n) const {
    const std::size_t i = static_cast<std::size_t>(n - a);
    return omega_acc[i] + (residual[i] > 1 ? 1 : 0);
  }
};

namespace detail {

struct RootTable {
  std::vector<std::uint32_t> primes;
  std::vector<std::uint32_t> roots;  // two slots per prime
  std::vector<std::uint8_t> counts;
};

inline u64 checked_abs_value(const IntPolynomial& f, i64 n) {
  const BigInt v = abs(f(BigInt(n)));
  if (v > kMaxSieveValue) fail(ErrorKind::RangeTooLarge, "polynomial value too large for the sieve path");
  return static_cast<u64>(v);
}

/// Largest |f(n)| over [a, b] for deg f <= 2: attained at an endpoint or the vertex.
inline u64 max_abs_value(const IntPolynomial& f, i64 a, i64 b) {
  u64 best = std::max(checked_abs_value(f, a), checked_abs_value(f, b));
  if (f.degree() == 2) {
    const BigInt num = -f.coefficient(1);
    const BigInt den = 2 * f.coefficient(2);
    BigInt vertex = num / den;
    for (BigInt v = vertex - 1; v <= vertex + 1; ++v) {
      if (v >= a && v <= b) best = std::max(best, checked_abs_value(f, static_cast<i64>(v)));
    }
  }
  return best;
}

inline RootTable build_root_table(const IntPolynomial& f, u64 limit) {
  RootTable table;
  for (u64 p : primes_up_to(limit)) {
    const auto roots = *low_degree_roots_mod_p(f, p);
    if (roots.empty()) continue;
    table.primes.push_back(static_cast<std::uint32_t>(p));
    table.counts.push_back(static_cast<std::uint8_t>(roots.size()));
    table.roots.push_back(static_cast<std::uint32_t>(roots[0]));
    table.roots.push_back(static_cast<std::uint32_t>(roots.size() > 1 ? roots[1] : roots[0]));
  }
  return table;
}

inline void sieve_block(const IntPolynomial& f, const RootTable& table, i64 lo, i64 hi, std::span<u64> residual,
                        std::span<std::uint32_t> omega, std::vector<bool>& zero, std::size_t zero_offset) {
  // Values of a degree <= 2 polynomial fit in i128 under the sieve bound.
  const i128 c0 = static_cast<i128>(f.coefficient(0));
  const i128 c1 = static_cast<i128>(f.coefficient(1));
  const i128 c2 = static_cast<i128>(f.coefficient(2));
  for (i64 n = lo; n <= hi; ++n) {
    const i128 v = (c2 * n + c1) * n + c0;
    const std::size_t i = static_cast<std::size_t>(n - lo);
    residual[i] = static_cast<u64>(v < 0 ? -v : v);
    omega[i] = 0;
    zero[zero_offset + i] = (v == 0);
  }
  for (std::size_t j = 0; j < table.primes.size(); ++j) {
    const u64 p = table.primes[j];
    for (unsigned k = 0; k < table.counts[j]; ++k) {
      const u64 r = table.roots[2 * j + k];
      const u64 offset = (r + p - reduce(lo, p)) % p;
      for (u64 i = offset; i < residual.size(); i += p) {
        u64 v = residual[i];
        if (v == 0) continue;
        unsigned e = 0;
        do {
          v /= p;
          ++e;
        } while (v % p == 0);
        residual[i] = v;
        omega[i] += e;
      }
    }
  }
}

}  // namespace detail

/// Sieves the values of a content-free factor of degree <= 2 over [a, b]:
/// every prime p <= sqrt(max |f(n)|) is removed at its roots with full
/// valuation, leaving a residual that is 1 or a single prime.
inline PolyValueSieve sieve_poly_values(const IntPolynomial& f, i64 a, i64 b, const SieveOptions& opts = {}) {
  if (f.is_zero() || f.degree() > 2) fail(ErrorKind::UnsupportedDegree, "sieve path needs degree <= 2");
  if (b < a) fail(ErrorKind::PreconditionViolated, "empty range");
  if (static_cast<u64>(b - a) > kMaxLambdaRange) fail(ErrorKind::RangeTooLarge, "range exceeds 1e9 values");
  if (f.content() != 1) fail(ErrorKind::PreconditionViolated, "sieve factor must be primitive");
  const u64 limit = isqrt(detail::max_abs_value(f, a, b)) + 1;
  const auto table = detail::build_root_table(f, limit);
  PolyValueSieve out{f, a, b, std::vector<u64>(static_cast<std::size_t>(b - a) + 1),
                     std::vector<std::uint32_t>(static_cast<std::size_t>(b - a) + 1),
                     std::vector<bool>(static_cast<std::size_t>(b - a) + 1)};
  // vector<bool> is not safe to write from several threads; zero flags are
  // collected per block and merged afterwards.
  std::vector<std::vector<bool>> zero_blocks(static_cast<std::size_t>((b - a) / kBlockSize + 1));
  detail::for_each_block(0, static_cast<u64>(b - a), opts.threads, [&](u64 lo, u64 hi) {
    const std::size_t len = hi - lo + 1;
    auto& zeros = zero_blocks[lo / kBlockSize];
    zeros.assign(len, false);
    detail::sieve_block(f, table, a + static_cast<i64>(lo), a + static_cast<i64>(hi),
                        std::span<u64>(out.residual.data() + lo, len),
                        std::span<std::uint32_t>(out.omega_acc.data() + lo, len), zeros, 0);
    if (opts.verify_residuals) {
      for (std::size_t i = 0; i < len; ++i) {
        const u64 r = out.residual[lo + i];
        if (r > 1 && !is_probable_prime(r)) fail(ErrorKind::PreconditionViolated, "sieve residual is composite");
      }
    }
  });
  for (std::size_t blk = 0; blk < zero_blocks.size(); ++blk)
    for (std::size_t i = 0; i < zero_blocks[blk].size(); ++i) out.is_zero[blk * kBlockSize + i] = zero_blocks[blk][i];
  return out;
}

namespace detail {

inline std::vector<std::uint8_t> per_value_parity(const IntPolynomial& f, i64 a, i64 b, std::vector<bool>& zero) {
  if (static_cast<u64>(b - a) > kMaxPerValueRange)
    fail(ErrorKind::RangeTooLarge, "per-value factorization path is limited to 1e5 values");
  std::vector<std::uint8_t> parity(static_cast<std::size_t>(b - a) + 1);
  for (i64 n = a; n <= b; ++n) {
    const BigInt v = f(BigInt(n));
    const std::size_t i = static_cast<std::size_t>(n - a);
    if (v == 0) {
      zero[i] = true;
      continue;
    }
    parity[i] = factorize(v).big_omega() & 1;
  }
  return parity;
}

}  // namespace detail

/// lambda(P(n)) for n in [a, b]. P may be declared as a product of integer
/// factors; factors of degree <= 2 go through the sieve, others through
/// per-value factorization (at most 1e5 values).
inline std::vector<std::int8_t> lambda_poly_range(const IntPolynomial& p, i64 a, i64 b,
                                                  std::span<const IntPolynomial> declared_factors = {},
                                                  const SieveOptions& opts = {}) {
  if (p.is_zero()) fail(ErrorKind::PreconditionViolated, "zero polynomial");
  if (b < a) fail(ErrorKind::PreconditionViolated, "empty range");
  std::vector<IntPolynomial> factors(declared_factors.begin(), declared_factors.end());
  if (factors.empty()) {
    factors.push_back(p);
  } else {
    IntPolynomial product{1};
    for (const auto& f : factors) product = product * f;
    if (product != p) fail(ErrorKind::FactorizationMismatch, "declared factors do not multiply to P");
  }
  const std::size_t len = static_cast<std::size_t>(b - a) + 1;
  std::vector<std::uint8_t> parity(len, 0);
  std::vector<bool> zero(len, false);
  unsigned constant_omega = 0;
  for (const auto& f : factors) {
    const BigInt content = f.content();
    if (content != 1) constant_omega += factorize(content).big_omega();
    std::vector<BigInt> coeffs = f.coefficients();
    for (auto& c : coeffs) c /= content;
    const IntPolynomial primitive(coeffs);
    if (primitive.degree() == 0) continue;
    bool sieve_ok = primitive.degree() <= 2;
    if (sieve_ok) {
      try {
        detail::max_abs_value(primitive, a, b);
      } catch (const Error&) {
        sieve_ok = false;
      }
    }
    if (sieve_ok) {
      const auto s = sieve_poly_values(primitive, a, b, opts);
      for (std::size_t i = 0; i < len; ++i) {
        if (s.is_zero[i]) zero[i] = true;
        parity[i] ^= (s.omega_acc[i] + (s.residual[i] > 1 ? 1 : 0)) & 1;
      }
    } else {
      std::vector<bool> z(len, false);
      const auto par = detail::per_value_parity(primitive, a, b, z);
      for (std::size_t i = 0; i < len; ++i) {
        if (z[i]) zero[i] = true;
        parity[i] ^= par[i];
      }
    }
  }
  std::vector<std::int8_t> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = zero[i] ? 1 : (((parity[i] + constant_omega) & 1) ? -1 : 1);
  return out;
}

inline std::vector<std::int8_t> lambda_poly_range(const IntPolynomial& p, i64 a, i64 b,
                                                  std::initializer_list<IntPolynomial> declared_factors,
                                                  const SieveOptions& opts = {}) {
  return lambda_poly_range(p, a, b, std::span<const IntPolynomial>(declared_factors.begin(), declared_factors.size()),
                           opts);
}

/// True iff every prime factor of n is <= bound (1 is smooth for every bound).
inline bool is_smooth(const BigInt& n, u64 bound) {
  if (n < 1) fail(ErrorKind::PreconditionViolated, "smoothness needs n >= 1");
  if (bound < 2) return n == 1;
  if (bound <= (u64(1) << 20)) {
    BigInt m = n;
    for (u64 p : primes_up_to(bound)) {
      while (m % p == 0) m /= p;
      if (m == 1) return true;
    }
    return m == 1;
  }
  for (const auto& f : factorize(n).factors)
    if (f.prime > bound) return false;
  return true;
}

struct Fraction {
  u64 num = 0;
  u64 den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Fraction& a, const Fraction& b) {
    return static_cast<u128>(a.num) * b.den == static_cast<u128>(b.num) * a.den;
  }
};

/// (1/X) #{n <= X : n = b (mod q), |P(n)| is n-smooth}. At n = 1 only the
/// value 1 counts as smooth; P(n) = 0 never does.
inline Fraction property_s_density(const IntPolynomial& p, u64 q, u64 b, u64 x) {
  if (q < 1 || b < 1 || b > q || x < q) fail(ErrorKind::PreconditionViolated, "need q >= 1, 1 <= b <= q, X >= q");
  u64 count = 0;
  for (u64 n = b; n <= x; n += q) {
    const BigInt v = abs(p(BigInt(n)));
    if (v == 0) continue;
    if (n == 1 ? v == 1 : is_smooth(v, n)) ++count;
  }
  return {count, x};
}

/// Run-length encoding of a sign string: "3+1-2+" for + + + - + +.
inline std::string rle_signs(std::span<const std::int8_t> signs) {
  std::string out;
  std::size_t i = 0;
  while (i < signs.size()) {
    std::size_t j = i;
    while (j < signs.size() && signs[j] == signs[i]) ++j;
    out += std::to_string(j - i);
    out.push_back(signs[i] > 0 ? '+' : '-');
    i = j;
  }
  return out;
}

}  // namespace llab
