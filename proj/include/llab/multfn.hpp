#pragma once

// mu_q-valued completely multiplicative functions, real characters and the
// pretentious distance.

#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "llab/arith.hpp"

namespace llab {

/// exp(2 pi i * exponent / order), kept as an exact exponent in Z_order.
struct RootOfUnity {
  std::uint32_t order = 1;
  std::uint32_t exponent = 0;

  std::complex<double> value() const {
    const double angle = 2.0 * std::numbers::pi * exponent / order;
    return {std::cos(angle), std::sin(angle)};
  }
  /// Real sign when the value is +-1.
  int sign() const {
    if (exponent == 0) return 1;
    if (2 * exponent == order) return -1;
    fail(ErrorKind::PreconditionViolated, "root of unity is not real");
  }
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

/// Completely multiplicative g with g(p) = e(exponent(p) / order); extended
/// evenly to Z with g(0) = 1.
class MultFn {
 public:
  MultFn(std::uint32_t order, std::uint32_t default_exponent, std::map<u64, std::uint32_t> overrides = {},
         std::string name = "custom")
      : order_(order), default_(default_exponent % std::max(order, 1u)), overrides_(std::move(overrides)),
        name_(std::move(name)) {
    if (order_ == 0) fail(ErrorKind::PreconditionViolated, "order must be >= 1");
    for (auto& [p, e] : overrides_) {
      if (!is_probable_prime(p)) fail(ErrorKind::NotPrime, "override at non-prime " + std::to_string(p));
      e %= order_;
    }
  }

  static MultFn liouville() { return MultFn(2, 1, {}, "liouville"); }
  static MultFn omega_mod(std::uint32_t q) { return MultFn(q, 1, {}, "omega-mod:" + std::to_string(q)); }
  static MultFn one() { return MultFn(1, 0, {}, "one"); }

  std::uint32_t order() const { return order_; }
  std::uint32_t default_exponent() const { return default_; }
  const std::map<u64, std::uint32_t>& overrides() const { return overrides_; }
  const std::string& name() const { return name_; }

  std::uint32_t exponent_at_prime(u64 p) const {
    const auto it = overrides_.find(p);
    return it == overrides_.end() ? default_ : it->second;
  }

  std::uint32_t exponent_at_prime(const BigInt& p) const {
    if (p <= std::numeric_limits<u64>::max()) return exponent_at_prime(static_cast<u64>(p));
    return default_;
  }

 private:
  std::uint32_t order_;
  std::uint32_t default_;
  std::map<u64, std::uint32_t> overrides_;
  std::string name_;
};

/// g(n) as an exponent in Z_q: sum of v_p(n) * e(p), with g(0) = g(+-1) = 1.
inline RootOfUnity eval_multfn(const MultFn& g, const BigInt& n) {
  RootOfUnity out{g.order(), 0};
  if (n == 0) return out;
  u64 acc = 0;
  for (const auto& f : factorize(n).factors) acc += static_cast<u64>(f.exponent) * g.exponent_at_prime(f.prime);
  out.exponent = static_cast<std::uint32_t>(acc % g.order());
  return out;
}

/// n -> jacobi(n, modulus) for an odd squarefree modulus.
class RealCharacter {
 public:
  explicit RealCharacter(u64 modulus) : modulus_(modulus) {
    if (modulus == 0 || modulus % 2 == 0) fail(ErrorKind::BadModulus, "character modulus must be odd");
    for (const auto& [p, e] : factorize_u64(modulus))
      if (e > 1) fail(ErrorKind::BadModulus, "character modulus must be squarefree");
  }

  u64 modulus() const { return modulus_; }
  int operator()(i64 n) const { return jacobi(n, static_cast<i64>(modulus_)); }
  int operator()(const BigInt& n) const { return jacobi<BigInt>(n, BigInt(modulus_)); }

 private:
  u64 modulus_;
};

using PrimeFunction = std::variant<MultFn, RealCharacter>;

/// f(p) as a phase num/den of a full turn; nullopt when f(p) = 0.
struct PrimePhase {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

inline std::optional<PrimePhase> phase_at_prime(const PrimeFunction& f, u64 p) {
  if (const auto* g = std::get_if<MultFn>(&f)) return PrimePhase{g->exponent_at_prime(p), g->order()};
  const int v = std::get<RealCharacter>(f)(static_cast<i64>(p));
  if (v == 0) return std::nullopt;
  return PrimePhase{v < 0 ? 1 : 0, 2};
}

inline std::complex<double> value_at_prime(const PrimeFunction& f, u64 p) {
  const auto ph = phase_at_prime(f, p);
  if (!ph) return {0.0, 0.0};
  if (ph->num == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(ph->num) / static_cast<double>(ph->den));
}

inline std::string function_name(const PrimeFunction& f) {
  if (const auto* g = std::get_if<MultFn>(&f)) return g->name();
  return "jacobi:" + std::to_string(std::get<RealCharacter>(f).modulus());
}

namespace detail {

/// Pairwise (cascade) summation for a reproducible, low-error total.
inline double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace detail

/// D(f, g; x) with D^2 = sum_{p <= x} (1 - Re f(p) conj(g(p)) p^{-it}) / p.
inline double pretentious_distance(const PrimeFunction& f, const PrimeFunction& g, u64 x, double t = 0.0) {
  if (x < 2) fail(ErrorKind::PreconditionViolated, "pretentious distance needs x >= 2");
  const auto primes = primes_up_to(x);
  constexpr std::size_t kPrimeBlock = 4096;
  std::vector<double> block_sums;
  std::vector<double> terms;
  terms.reserve(kPrimeBlock);
  for (std::size_t i = 0; i < primes.size(); i += kPrimeBlock) {
    terms.clear();
    for (std::size_t j = i; j < std::min(primes.size(), i + kPrimeBlock); ++j) {
      const double p = static_cast<double>(primes[j]);
      const auto pf = phase_at_prime(f, primes[j]), pg = phase_at_prime(g, primes[j]);
      if (!pf || !pg) {
        terms.push_back(1.0 / p);
        continue;
      }
      // 1 - cos(theta) = 2 sin^2(theta / 2), with the rational part of theta reduced exactly.
      const std::int64_t den = pf->den * pg->den;
      const std::int64_t num = ((pf->num * pg->den - pg->num * pf->den) % den + den) % den;
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den) - t * std::log(p);
      const double half = std::sin(theta / 2.0);
      terms.push_back(2.0 * half * half / p);
    }
    block_sums.push_back(detail::pairwise_sum(terms));
  }
  const double d2 = detail::pairwise_sum(block_sums);
  return std::sqrt(std::max(0.0, d2));
}

/// A function psi: Z_q -> {-1, +1} stored as a length-q table.
struct PsiTable {
  u64 q = 1;
  std::vector<std::int8_t> values;

  int operator()(i64 x) const { return values[reduce(x, q)]; }
  friend bool operator==(const PsiTable&, const PsiTable&) = default;
  friend auto operator<=>(const PsiTable& a, const PsiTable& b) {
    if (a.q != b.q) return a.q <=> b.q;
    return a.values <=> b.values;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) s.push_back(',');
      s.push_back(values[i] > 0 ? '+' : '-');
    }
    return s;
  }
};

/// True iff q is odd, squarefree and every prime factor is 3 mod 4.
inline bool is_character_family_modulus(u64 q) {
  if (q == 0 || q % 2 == 0) return false;
  for (const auto& [p, e] : factorize_u64(q))
    if (e > 1 || p % 4 != 3) return false;
  return true;
}

/// psi(x) = sign * (-1)^{r x} * jacobi(4x^2 + 1, char_modulus) on Z_period.
/// period defaults to char_modulus (r = 0) or 2 * char_modulus (r = 1).
inline PsiTable character_family_psi(u64 char_modulus, int r, int sign, u64 period = 0) {
  if (!is_character_family_modulus(char_modulus))
    fail(ErrorKind::BadModulus, std::to_string(char_modulus) + " must be odd, squarefree, primes = 3 mod 4");
  if (r != 0 && r != 1) fail(ErrorKind::PreconditionViolated, "r must be 0 or 1");
  if (sign != 1 && sign != -1) fail(ErrorKind::PreconditionViolated, "sign must be +-1");
  if (period == 0) period = char_modulus * (r == 1 ? 2 : 1);
  if (period % char_modulus != 0) fail(ErrorKind::PreconditionViolated, "period must be a multiple of the modulus");
  if (r == 1 && period % 2 != 0) fail(ErrorKind::PreconditionViolated, "(-1)^x needs an even period");
  PsiTable psi{period, std::vector<std::int8_t>(period)};
  const i64 m = static_cast<i64>(char_modulus);
  for (u64 x = 0; x < period; ++x) {
    const i64 xr = static_cast<i64>(x % char_modulus);
    const int chi = jacobi(4 * xr * xr + 1, m);
    psi.values[x] = static_cast<std::int8_t>(sign * ((r == 1 && x % 2 == 1) ? -1 : 1) * chi);
  }
  return psi;
}

/// Reads "order <q>", "default <e>" and "<prime> <exponent>" lines; '#' starts a comment.
inline MultFn load_multfn(std::istream& in, std::string name = "custom") {
  std::uint32_t order = 0;
  std::uint32_t def = 0;
  std::map<u64, std::uint32_t> overrides;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;
    u64 value = 0;
    if (!(fields >> value)) fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": missing value");
    if (key == "order") order = static_cast<std::uint32_t>(value);
    else if (key == "default") def = static_cast<std::uint32_t>(value);
    else {
      try {
        overrides[std::stoull(key)] = static_cast<std::uint32_t>(value);
      } catch (const std::exception&) {
        fail(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad prime '" + key + "'");
      }
    }
  }
  if (order == 0) fail(ErrorKind::ParseError, "missing 'order' line");
  return MultFn(order, def, std::move(overrides), std::move(name));
}

/// "liouville", "one", "omega-mod:<q>" or "jacobi:<q>".
inline PrimeFunction parse_function_name(const std::string& name) {
  if (name == "liouville") return MultFn::liouville();
  if (name == "one") return MultFn::one();
  auto suffix = [&](const std::string& prefix) -> std::optional<u64> {
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    try {
      return std::stoull(name.substr(prefix.size()));
    } catch (const std::exception&) {
      fail(ErrorKind::ParseError, "bad modulus in '" + name + "'");
    }
  };
  if (auto q = suffix("omega-mod:")) return MultFn::omega_mod(static_cast<std::uint32_t>(*q));
  if (auto q = suffix("jacobi:")) return RealCharacter(*q);
  fail(ErrorKind::ParseError, "unknown function '" + name + "'");
}

}  // namespace llab
