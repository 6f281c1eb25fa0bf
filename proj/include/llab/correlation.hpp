#pragma once

// Correlation averages of multiplicative functions along linear forms, Gowers
// uniformity norms, Erdos-Turan discrepancy bounds, the exponential-sum
// maximization inequality and delta(q).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "llab/arith.hpp"
#include "llab/multfn.hpp"
#include "llab/sieve.hpp"

namespace llab {

using cd = std::complex<double>;

struct LinearForm {
  MultFn g;
  u64 a = 1;
  i64 h = 0;
};

enum class AverageKind { Cesaro, Logarithmic };

struct CorrelationSpec {
  std::vector<LinearForm> forms;
  u64 x = 1;
};

struct CorrelationResult {
  cd cesaro;
  cd logarithmic;
  std::uint32_t order = 1;            // common order L of the product's values
  std::vector<u64> class_counts;      // #{n <= x : product = e(j/L)}
  bool independent = true;            // a_i h_j != a_j h_i for all i != j
  cd value(AverageKind kind) const { return kind == AverageKind::Cesaro ? cesaro : logarithmic; }
};

inline bool forms_independent(std::span<const LinearForm> forms) {
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (std::size_t j = i + 1; j < forms.size(); ++j)
      if (static_cast<i128>(forms[i].a) * forms[j].h == static_cast<i128>(forms[j].a) * forms[i].h) return false;
  return true;
}

inline cd root_of_unity(u64 j, u64 order) {
  if (j % order == 0) return {1.0, 0.0};
  if (2 * (j % order) == order) return {-1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j % order) / static_cast<double>(order));
}

/// (1/x) sum_{n<=x} prod_i g_i(a_i n + h_i) and its logarithmic analogue.
/// Values are tallied per class of mu_L exactly and rendered to complex at the end.
inline CorrelationResult correlation_average(const CorrelationSpec& spec, unsigned threads = 1) {
  if (spec.forms.empty()) fail(ErrorKind::PreconditionViolated, "need at least one linear form");
  if (spec.x < 1) fail(ErrorKind::PreconditionViolated, "x must be >= 1");
  CorrelationResult out;
  for (const auto& f : spec.forms) {
    if (f.a < 1) fail(ErrorKind::PreconditionViolated, "coefficients must be positive");
    out.order = std::lcm(out.order, f.g.order());
  }
  out.independent = forms_independent(spec.forms);
  const u64 x = spec.x;
  std::vector<std::uint32_t> total(x, 0);
  for (const auto& f : spec.forms) {
    // Arguments m = a n + h, n in [1, x]; g is even with g(0) = 1.
    const i128 first = static_cast<i128>(f.a) + f.h;
    const i128 last = static_cast<i128>(f.a) * x + f.h;
    const i128 lo_abs = (first <= 0 && last >= 0) ? 1 : std::min(first < 0 ? -first : first, last < 0 ? -last : last);
    const i128 hi_abs = std::max(first < 0 ? -first : first, last < 0 ? -last : last);
    if (hi_abs > static_cast<i128>(kMaxSieveValue)) fail(ErrorKind::RangeTooLarge, "linear form values too large");
    const u64 lo = static_cast<u64>(std::max<i128>(lo_abs, 1)), hi = static_cast<u64>(std::max<i128>(hi_abs, 1));
    const auto table = exponent_range(lo, hi, f.g.order(), [&](u64 p) { return f.g.exponent_at_prime(p); }, threads);
    const std::uint32_t scale = out.order / f.g.order();
    for (u64 n = 1; n <= x; ++n) {
      const i128 m = static_cast<i128>(f.a) * n + f.h;
      if (m == 0) continue;
      const u64 am = static_cast<u64>(m < 0 ? -m : m);
      total[n - 1] = (total[n - 1] + table[am - lo] * scale) % out.order;
    }
  }
  out.class_counts.assign(out.order, 0);
  std::vector<double> log_weight(out.order, 0.0);
  double harmonic = 0.0;
  for (u64 n = x; n >= 1; --n) {  // small terms first
    ++out.class_counts[total[n - 1]];
    log_weight[total[n - 1]] += 1.0 / static_cast<double>(n);
    harmonic += 1.0 / static_cast<double>(n);
  }
  for (std::uint32_t j = 0; j < out.order; ++j) {
    const cd z = root_of_unity(j, out.order);
    out.cesaro += z * static_cast<double>(out.class_counts[j]);
    out.logarithmic += z * log_weight[j];
  }
  out.cesaro /= static_cast<double>(x);
  out.logarithmic /= harmonic;
  if (out.order == 1) out.logarithmic = 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// Gowers norms
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMaxGowersU3Length = 10'000;
inline constexpr std::size_t kMaxGowersLength = 10'000'000;

namespace detail {

inline void fft(std::vector<cd>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1 : -1);
    const cd wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cd w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cd u = a[i + j], v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

/// sum_{x, h1, h2 in Z} of the U^2 product for f supported on [0, len): equal
/// to (1/M) sum_xi |F(xi)|^4 for any DFT length M >= 2 len - 1.
inline double u2_sum(std::span<const cd> f) {
  std::size_t m = 1;
  while (m < 2 * f.size()) m <<= 1;
  std::vector<cd> a(m);
  std::copy(f.begin(), f.end(), a.begin());
  fft(a, false);
  double s = 0;
  for (const auto& z : a) {
    const double p = std::norm(z);
    s += p * p;
  }
  return s / static_cast<double>(m);
}

inline double u_sum(std::span<const cd> f, unsigned k) {
  if (k == 1) {
    cd s = 0;
    for (const auto& v : f) s += v;
    return std::norm(s);
  }
  if (k == 2) return u2_sum(f);
  // U^3: sum over h of U^2(f(. + h) conj f), using the h <-> -h symmetry.
  double s = 0;
  std::vector<cd> diff;
  for (std::size_t h = 0; h < f.size(); ++h) {
    diff.resize(f.size() - h);
    for (std::size_t x = 0; x + h < f.size(); ++x) diff[x] = f[x + h] * std::conj(f[x]);
    s += (h == 0 ? 1.0 : 2.0) * u2_sum(diff);
  }
  return s;
}

}  // namespace detail

/// ||f||_{U^k[N]} = (S_k(f 1_[N]) / S_k(1_[N]))^{1/2^k}, S_k the unnormalized
/// Gowers sum over Z. Equals the Z_M-embedded norm for any M >= 2^k N, since
/// no wrap-around occurs and the 1/M^{k+1} factors cancel.
inline double gowers_norm(std::span<const cd> f, unsigned k) {
  if (k < 1 || k > 3) fail(ErrorKind::PreconditionViolated, "k must be 1, 2 or 3");
  if (f.empty()) fail(ErrorKind::PreconditionViolated, "empty sequence");
  if (k == 3 && f.size() > kMaxGowersU3Length) fail(ErrorKind::CostGuard, "U^3 limited to N <= 10^4");
  if (f.size() > kMaxGowersLength) fail(ErrorKind::CostGuard, "N above 10^7");
  for (const auto& v : f)
    if (std::abs(v) > 1.0 + 1e-12) fail(ErrorKind::PreconditionViolated, "f must be bounded by 1");
  const std::vector<cd> one(f.size(), cd(1.0, 0.0));
  const double ratio = detail::u_sum(f, k) / detail::u_sum(one, k);
  return std::pow(std::max(ratio, 0.0), 1.0 / static_cast<double>(1u << k));
}

inline double gowers_norm(std::span<const std::int8_t> signs, unsigned k) {
  std::vector<cd> f(signs.begin(), signs.end());
  return gowers_norm(f, k);
}

// ---------------------------------------------------------------------------
// Discrepancy
// ---------------------------------------------------------------------------

struct DiscrepancyReport {
  double bound = 0;  // 3 (1/M0 + sum_{j <= M0} |E e(j x)| / j)
  double actual = 0; // extreme discrepancy over intervals, from the sorted points
};

/// Extreme discrepancy 1/N + max(i/N - x_(i)) - min(i/N - x_(i)).
inline double interval_discrepancy(std::span<const double> points) {
  std::vector<double> x;
  x.reserve(points.size());
  for (double p : points) x.push_back(p - std::floor(p));
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double hi = -2, lo = 2;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(i + 1) / n - x[i];
    hi = std::max(hi, d);
    lo = std::min(lo, d);
  }
  return 1.0 / n + hi - lo;
}

inline DiscrepancyReport erdos_turan_discrepancy(std::span<const double> points, u64 m0) {
  if (m0 < 1) fail(ErrorKind::PreconditionViolated, "M0 must be >= 1");
  if (points.empty()) fail(ErrorKind::PreconditionViolated, "no points");
  DiscrepancyReport r;
  double s = 1.0 / static_cast<double>(m0);
  for (u64 j = 1; j <= m0; ++j) {
    cd e = 0;
    for (double p : points) e += std::polar(1.0, 2.0 * std::numbers::pi * std::fmod(static_cast<double>(j) * p, 1.0));
    s += std::abs(e) / static_cast<double>(points.size()) / static_cast<double>(j);
  }
  r.bound = 3.0 * s;
  r.actual = interval_discrepancy(points);
  return r;
}

// ---------------------------------------------------------------------------
// |sum w_j e(j/n)| <= |sum_{j<=m} e(j/n)| for w in [0,1]^n with sum m
// ---------------------------------------------------------------------------

struct ExpSumReport {
  u64 trials = 0;
  u64 violations = 0;
  u64 equality_mismatches = 0;  // equality without a cyclic block, or a block missing equality
  double rhs = 0;
  double max_lhs = 0;
  std::vector<double> witness;  // weights attaining max_lhs
  bool holds() const { return violations == 0 && equality_mismatches == 0; }
};

inline double weighted_exp_sum(std::span<const double> w, std::span<const cd> roots) {
  cd s = 0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * roots[j];
  return std::abs(s);
}

/// e(j/n) for j = 1..n.
inline std::vector<cd> roots_table(u64 n) {
  std::vector<cd> out;
  for (u64 j = 1; j <= n; ++j) out.push_back(root_of_unity(j, n));
  return out;
}

inline double weighted_exp_sum(std::span<const double> w) { return weighted_exp_sum(w, roots_table(w.size())); }

inline double exp_sum_rhs(u64 n, u64 m) {
  if (n == 1) return 1.0;
  if (m == n) return 0.0;
  return std::abs(std::sin(std::numbers::pi * static_cast<double>(m) / static_cast<double>(n)) /
                  std::sin(std::numbers::pi / static_cast<double>(n)));
}

/// Euclidean projection onto {w in [0,1]^n : sum w = m}: w_i = clamp(v_i - tau).
/// The mass sum clamp(v_i - tau) grows piecewise linearly as tau decreases,
/// with slope +1 at each v_i and -1 at each v_i - 1; a sorted sweep finds tau.
inline void project_capped_simplex(std::span<const double> v, double m, std::span<double> w,
                                   std::vector<std::pair<double, int>>& events) {
  events.clear();
  for (double x : v) {
    events.emplace_back(x, 1);
    events.emplace_back(x - 1.0, -1);
  }
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double mass = 0, tau = events.back().first;
  int slope = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i > 0 && slope > 0) {
      const double gained = slope * (events[i - 1].first - events[i].first);
      if (mass + gained >= m) {
        tau = events[i - 1].first - (m - mass) / slope;
        break;
      }
      mass += gained;
    }
    slope += events[i].second;
  }
  for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::clamp(v[i] - tau, 0.0, 1.0);
}

inline std::vector<double> project_capped_simplex(std::span<const double> v, double m) {
  std::vector<double> w(v.size());
  std::vector<std::pair<double, int>> events;
  project_capped_simplex(v, m, w, events);
  return w;
}

/// w is within tol of the indicator of m cyclically consecutive positions.
inline bool is_cyclic_block(std::span<const double> w, u64 m, double tol = 1e-9) {
  const std::size_t n = w.size();
  std::size_t ones = 0, rises = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool one = std::abs(w[i] - 1.0) <= tol;
    if (!one && std::abs(w[i]) > tol) return false;
    ones += one;
    const bool prev_one = std::abs(w[(i + n - 1) % n] - 1.0) <= tol;
    rises += one && !prev_one;
  }
  return ones == m && (m == 0 || m == n || rises == 1);
}

inline ExpSumReport max_exp_sum_check(u64 n, u64 m, u64 trials, u64 seed = kDefaultSeed) {
  if (n < 1 || m < 1 || m > n) fail(ErrorKind::PreconditionViolated, "need 1 <= m <= n");
  constexpr double kTol = 1e-9, kEq = 1e-12;
  ExpSumReport r;
  r.rhs = exp_sum_rhs(n, m);
  const auto roots = roots_table(n);
  auto record = [&](std::span<const double> w) {
    const double lhs = weighted_exp_sum(w, roots);
    ++r.trials;
    if (lhs > r.rhs + kTol) ++r.violations;
    if (lhs > r.max_lhs || r.witness.empty()) {
      r.max_lhs = lhs;
      r.witness.assign(w.begin(), w.end());
    }
    return lhs;
  };
  // Every cyclic block attains equality.
  for (u64 start = 0; start < n; ++start) {
    std::vector<double> block(n, 0.0);
    for (u64 i = 0; i < m; ++i) block[(start + i) % n] = 1.0;
    if (std::abs(record(block) - r.rhs) > kEq) ++r.equality_mismatches;
  }
  SplitMix64 rng(seed);
  std::vector<double> v(n), w(n);
  std::vector<std::pair<double, int>> events;
  std::vector<u64> idx(n);
  for (u64 t = 0; t < trials; ++t) {
    if (t % 4 == 3 && m < n) {
      // Random 0/1 vector with m ones: equality exactly on cyclic blocks.
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      std::fill(w.begin(), w.end(), 0.0);
      for (u64 i = 0; i < m; ++i) w[idx[i]] = 1.0;
      const double lhs = record(w);
      if ((std::abs(lhs - r.rhs) <= kEq) != is_cyclic_block(w, m)) ++r.equality_mismatches;
      continue;
    }
    for (auto& x : v) x = rng.uniform() * 2.0 - 0.5;
    project_capped_simplex(v, static_cast<double>(m), w, events);
    record(w);
  }
  return r;
}

/// delta with (q/pi) sin(pi/q) = 1 - 2 delta.
inline double delta_for_q(u64 q) {
  if (q < 2) fail(ErrorKind::PreconditionViolated, "q must be >= 2");
  const double qd = static_cast<double>(q);
  return (1.0 - qd / std::numbers::pi * std::sin(std::numbers::pi / qd)) / 2.0;
}

// ---------------------------------------------------------------------------
// 1_{g != v} = 1 - (1/q) sum_j (conj(v) g)^j, evaluated exactly in Z[zeta_q]
// ---------------------------------------------------------------------------

namespace detail {

using ZPoly = std::vector<BigInt>;  // constant term first

inline void trim(ZPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

/// Remainder of a modulo a monic b.
inline ZPoly rem_monic(ZPoly a, const ZPoly& b) {
  const std::size_t db = b.size() - 1;
  for (std::size_t i = a.size(); i-- > db;) {
    const BigInt c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  a.resize(std::max<std::size_t>(db, 1));
  trim(a);
  return a;
}

/// Quotient of a by a monic b (exact division assumed).
inline ZPoly div_monic(ZPoly a, const ZPoly& b) {
  const std::size_t db = b.size() - 1;
  ZPoly q(a.size() - db, 0);
  for (std::size_t i = a.size(); i-- > db;) {
    const BigInt c = a[i];
    q[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
  }
  return q;
}

inline ZPoly cyclotomic(u64 q) {
  ZPoly p(q + 1, 0);
  p[0] = -1;
  p[q] = 1;
  for (u64 d = 1; d < q; ++d)
    if (q % d == 0) p = div_monic(p, cyclotomic(d));
  return p;
}

}  // namespace detail

struct IndicatorMean {
  Fraction direct;
  Fraction expanded;
  bool agree = false;
};

/// Mean of 1_{g(n) != v} over samples given as exponents in Z_q, by counting
/// and by the character expansion reduced modulo the q-th cyclotomic polynomial.
inline IndicatorMean fourier_indicator_expand(std::uint32_t q, std::uint32_t v, std::span<const std::uint32_t> samples) {
  if (q < 1) fail(ErrorKind::PreconditionViolated, "q must be >= 1");
  if (v >= q) fail(ErrorKind::PreconditionViolated, "v must lie in Z_q");
  if (samples.empty()) fail(ErrorKind::PreconditionViolated, "no samples");
  u64 differ = 0;
  detail::ZPoly total(q, 0);
  for (auto s : samples) {
    if (s >= q) fail(ErrorKind::PreconditionViolated, "sample outside mu_q");
    differ += s != v;
    const u64 t = (s + q - v) % q;
    for (u64 j = 0; j < q; ++j) total[j * t % q] += 1;
  }
  const auto r = detail::rem_monic(total, detail::cyclotomic(q));
  if (r.size() != 1) fail(ErrorKind::PreconditionViolated, "expansion did not reduce to a rational");
  // mean = 1 - r / (q N)
  const BigInt den = BigInt(q) * samples.size();
  const BigInt num = den - r[0];
  IndicatorMean out;
  out.direct = Fraction{differ, samples.size()};
  out.expanded = Fraction{static_cast<u64>(num), static_cast<u64>(den)};
  out.agree = out.direct == out.expanded;
  return out;
}

}  // namespace llab
