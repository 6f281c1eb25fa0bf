#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "llab/arith.hpp"

namespace llab {

/// Integer polynomial, coefficients stored constant term first.
class IntPolynomial {
 public:
  IntPolynomial() = default;  // zero polynomial

  explicit IntPolynomial(std::vector<BigInt> coefficients) : coeffs_(std::move(coefficients)) {
    trim();
    if (coeffs_.empty()) fail(ErrorKind::PreconditionViolated, "zero polynomial needs IntPolynomial::zero()");
  }

  IntPolynomial(std::initializer_list<long long> coefficients) {
    for (long long c : coefficients) coeffs_.emplace_back(c);
    trim();
    if (coeffs_.empty()) fail(ErrorKind::PreconditionViolated, "zero polynomial needs IntPolynomial::zero()");
  }

  static IntPolynomial zero() { return IntPolynomial(); }
  static IntPolynomial constant(const BigInt& c) { return c == 0 ? zero() : IntPolynomial(std::vector<BigInt>{c}); }
  static IntPolynomial x() { return IntPolynomial{0, 1}; }

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const BigInt& leading() const { return coeffs_.back(); }
  const std::vector<BigInt>& coefficients() const { return coeffs_; }
  BigInt coefficient(int i) const { return i >= 0 && i <= degree() ? coeffs_[i] : BigInt(0); }

  BigInt content() const {
    BigInt g = 0;
    for (const auto& c : coeffs_) g = boost::multiprecision::gcd(g, abs(c));
    return g;
  }

  /// Exact Horner evaluation.
  BigInt operator()(const BigInt& n) const {
    BigInt acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * n + *it;
    return acc;
  }

  /// P(n) mod m for a 64-bit modulus.
  u64 eval_mod(i64 n, u64 m) const {
    const u64 r = reduce(n, m);
    u64 acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (mul_mod(acc, r, m) + reduce(*it, m)) % m;
    return acc;
  }

  friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    IntPolynomial out;
    out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < out.coeffs_.size(); ++i) out.coeffs_[i] = a.coefficient(int(i)) + b.coefficient(int(i));
    out.trim();
    return out;
  }

  friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) { return a + b * IntPolynomial{-1}; }

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return zero();
    IntPolynomial out;
    out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    out.trim();
    return out;
  }

  /// P(scale*x + shift).
  IntPolynomial compose_linear(const BigInt& scale, const BigInt& shift) const {
    IntPolynomial result = zero();
    const IntPolynomial inner(std::vector<BigInt>{shift, scale});
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) result = result * inner + constant(*it);
    return result;
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const BigInt& c = coeffs_[i];
      if (c == 0) continue;
      const bool negative = c < 0;
      const BigInt mag = abs(c);
      if (first) {
        if (negative) out << '-';
      } else {
        out << (negative ? '-' : '+');
      }
      first = false;
      if (i == 0 || mag != 1) out << mag;
      if (i >= 1) out << 'x';
      if (i >= 2) out << '^' << i;
    }
    return out.str();
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<BigInt> coeffs_;
};

inline BigInt eval(const IntPolynomial& p, const BigInt& n) { return p(n); }

/// Exact square root over Z of a polynomial with positive leading
/// coefficient, if it has one (top-down coefficient recursion).
inline std::optional<IntPolynomial> polynomial_sqrt(const IntPolynomial& p) {
  if (p.is_zero()) return IntPolynomial::zero();
  const int d = p.degree();
  if (d % 2 != 0 || p.leading() < 0 || !is_square(p.leading())) return std::nullopt;
  const int m = d / 2;
  std::vector<BigInt> q(m + 1, BigInt(0));
  q[m] = boost::multiprecision::sqrt(p.leading());
  for (int k = m - 1; k >= 0; --k) {
    // Coefficient of x^{m+k} in Q^2 is 2 q_m q_k + sum_{i+j=m+k, k<i,j<m} q_i q_j.
    BigInt rest = p.coefficient(m + k);
    for (int i = k + 1; i < m; ++i) {
      const int j = m + k - i;
      if (j > k && j < m) rest -= q[i] * q[j];
    }
    const BigInt denom = 2 * q[m];
    if (rest % denom != 0) return std::nullopt;
    q[k] = rest / denom;
  }
  IntPolynomial root(q);
  if (root * root != p) return std::nullopt;
  return root;
}

/// True iff lead > 0 and P is not of the form c*Q(x)^2 with c in Z, Q in Z[x].
inline bool is_non_square(const IntPolynomial& p) {
  if (p.is_zero()) fail(ErrorKind::PreconditionViolated, "zero polynomial");
  if (p.leading() <= 0) return false;
  const BigInt c = p.content();
  std::vector<BigInt> primitive = p.coefficients();
  for (auto& coeff : primitive) coeff /= c;
  return !polynomial_sqrt(IntPolynomial(primitive)).has_value();
}

inline BigInt quadratic_discriminant(const BigInt& a, const BigInt& b, const BigInt& c) {
  if (a == 0) fail(ErrorKind::DegenerateQuadratic, "leading coefficient is 0");
  return b * b - 4 * a * c;
}

inline constexpr u64 kExhaustiveRootBound = u64(1) << 16;

namespace detail {

/// Roots of a polynomial of degree <= 2 after reduction mod an odd prime p
/// (or p = 2, handled by evaluation). Returns nullopt for degree >= 3.
inline std::optional<std::vector<u64>> low_degree_roots_mod_p(const IntPolynomial& poly, u64 p) {
  std::vector<u64> c(3, 0);
  int deg = -1;
  for (int i = 0; i <= poly.degree(); ++i) {
    const u64 r = reduce(poly.coefficients()[i], p);
    if (r == 0) continue;
    if (i > 2) return std::nullopt;
    c[i] = r;
    deg = std::max(deg, i);
  }
  std::vector<u64> roots;
  if (deg == -1) {
    if (p > kExhaustiveRootBound) fail(ErrorKind::CostGuard, "polynomial vanishes identically mod p");
    for (u64 r = 0; r < p; ++r) roots.push_back(r);
    return roots;
  }
  if (p == 2) {
    for (u64 r = 0; r < 2; ++r)
      if ((c[0] + c[1] * r + c[2] * r) % 2 == 0) roots.push_back(r);
    return roots;
  }
  if (deg == 0) return roots;
  if (deg == 1) {
    roots.push_back(mul_mod(p - c[0], *inv_mod(static_cast<i64>(c[1]), p), p));
    return roots;
  }
  const u64 disc = (mul_mod(c[1], c[1], p) + p - mul_mod(4 % p, mul_mod(c[2], c[0], p), p)) % p;
  const auto s = sqrt_mod_prime(static_cast<i64>(disc), p, true);
  if (!s) return roots;
  const u64 inv2a = *inv_mod(static_cast<i64>(mul_mod(2, c[2], p)), p);
  const u64 neg_b = (p - c[1]) % p;
  roots.push_back(mul_mod((neg_b + *s) % p, inv2a, p));
  roots.push_back(mul_mod((neg_b + p - *s) % p, inv2a, p));
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace detail

/// Sorted residues r in [0, p) with P(r) = 0 (mod p). Exhaustive for
/// p <= 2^16; above that the reduced polynomial must have degree <= 2.
inline std::vector<u64> roots_mod_p(const IntPolynomial& poly, u64 p) {
  if (!is_probable_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (p <= kExhaustiveRootBound) {
    std::vector<u64> roots;
    for (u64 r = 0; r < p; ++r)
      if (poly.eval_mod(static_cast<i64>(r), p) == 0) roots.push_back(r);
    return roots;
  }
  auto roots = detail::low_degree_roots_mod_p(poly, p);
  if (!roots) fail(ErrorKind::UnsupportedDegree, "degree >= 3 modulo a large prime");
  return *roots;
}

/// Parses "c0,c1,...,cd" or a sum of integer monomials such as "x^2+1",
/// "3x^3-2*x+7", "-x^4 + 2".
inline IntPolynomial parse_polynomial(std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) fail(ErrorKind::ParseError, "empty polynomial");
  auto parse_int = [&](std::string_view digits) -> BigInt {
    if (digits.empty()) fail(ErrorKind::ParseError, "missing integer in '" + std::string(text) + "'");
    for (char ch : digits)
      if (!std::isdigit(static_cast<unsigned char>(ch)))
        fail(ErrorKind::ParseError, "non-integer coefficient in '" + std::string(text) + "'");
    return BigInt(std::string(digits));
  };
  std::vector<BigInt> coeffs;
  auto add = [&](std::size_t power, const BigInt& value) {
    if (coeffs.size() <= power) coeffs.resize(power + 1, BigInt(0));
    coeffs[power] += value;
  };
  if (s.find('x') == std::string::npos && s.find(',') != std::string::npos) {
    std::size_t power = 0, start = 0;
    while (start <= s.size()) {
      const std::size_t end = std::min(s.find(',', start), s.size());
      std::string_view item(s.data() + start, end - start);
      bool negative = false;
      if (!item.empty() && (item[0] == '-' || item[0] == '+')) {
        negative = item[0] == '-';
        item.remove_prefix(1);
      }
      const BigInt v = parse_int(item);
      add(power++, negative ? BigInt(-v) : v);
      start = end + 1;
    }
  } else {
    std::size_t i = 0;
    while (i < s.size()) {
      bool negative = false;
      if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
      } else if (i != 0) {
        fail(ErrorKind::ParseError, "expected '+' or '-' in '" + std::string(text) + "'");
      }
      std::size_t j = i;
      while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
      std::string_view term(s.data() + i, j - i);
      if (term.empty()) fail(ErrorKind::ParseError, "empty term in '" + std::string(text) + "'");
      const std::size_t xpos = term.find('x');
      BigInt coeff = 1;
      std::size_t power = 0;
      if (xpos == std::string_view::npos) {
        coeff = parse_int(term);
      } else {
        std::string_view head = term.substr(0, xpos);
        if (!head.empty() && head.back() == '*') head.remove_suffix(1);
        if (!head.empty()) coeff = parse_int(head);
        std::string_view tail = term.substr(xpos + 1);
        power = 1;
        if (!tail.empty()) {
          if (tail[0] != '^') fail(ErrorKind::ParseError, "bad exponent in '" + std::string(text) + "'");
          power = static_cast<std::size_t>(parse_int(tail.substr(1)));
        }
      }
      add(power, negative ? BigInt(-coeff) : coeff);
      i = j;
    }
  }
  std::vector<BigInt> trimmed = coeffs;
  while (!trimmed.empty() && trimmed.back() == 0) trimmed.pop_back();
  if (trimmed.empty()) fail(ErrorKind::ParseError, "polynomial is identically zero");
  return IntPolynomial(trimmed);
}

}  // namespace llab
