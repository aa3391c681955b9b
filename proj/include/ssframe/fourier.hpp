#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ssframe/config.hpp"
#include "ssframe/ifs.hpp"
#include "ssframe/rational.hpp"
#include "ssframe/tiling.hpp"

namespace ssframe {

using Complex = std::complex<double>;

/// m(xi) = sum_j c_j exp(2 pi i d_j xi).
struct MaskPolynomial {
  std::vector<Rational> digits;
  std::vector<Rational> coefficients;

  Rational value_at_zero() const {
    Rational s(0);
    for (const auto& c : coefficients) s += c;
    return s;
  }
};

/// Mask of mu: digits b_j / ratio, coefficients p_j, so that
/// mu^(xi) = m(-ratio xi) mu^(ratio xi).
inline MaskPolynomial mask_of(const IfsSpec& ifs) {
  MaskPolynomial m;
  for (const auto& b : ifs.digits()) m.digits.push_back(b / ifs.ratio());
  m.coefficients = ifs.weights();
  return m;
}

namespace detail {

inline Complex unit(double turns) {
  // exp(2 pi i turns), reducing to [-1/2, 1/2] first to keep the phase accurate.
  const double r = turns - std::nearbyint(turns);
  const double a = 2.0 * std::numbers::pi * r;
  return {std::cos(a), std::sin(a)};
}

}  // namespace detail

inline Complex mask_eval(const MaskPolynomial& mask, double xi) {
  Complex s(0.0, 0.0);
  for (std::size_t j = 0; j < mask.digits.size(); ++j) {
    s += mask.coefficients[j].to_double() * detail::unit(mask.digits[j].to_double() * xi);
  }
  return s;
}

/// Truncated product for mu^(xi) = int exp(-2 pi i xi x) dmu(x).
///
/// The digits are centred at c = (d_1 + d_N)/2 before multiplying; the
/// centring phase exp(-2 pi i c xi ratio/(1-ratio)) is exact for the full
/// product and is applied separately. With D = max |d_j - c| the tail
/// satisfies |prod_{k>K} m_c(-ratio^k xi) - 1| <= exp(2 pi |xi| D ratio^(K+1)/(1-ratio)) - 1,
/// and since |m_c| <= 1 this bounds |value - mu^(xi)|.
struct FtEstimate {
  Complex value;
  double tail_bound = 0.0;
  int truncation_depth = 0;
};

namespace detail {

struct CenteredMask {
  std::vector<double> digits;   // d_j - c
  std::vector<double> weights;
  double center = 0.0;
  double radius = 0.0;  // max |d_j - c|
  double ratio = 0.0;
};

inline CenteredMask centered_mask(const IfsSpec& ifs) {
  const MaskPolynomial m = mask_of(ifs);
  const Rational c = (m.digits.front() + m.digits.back()) / Rational(2);
  CenteredMask out;
  out.center = c.to_double();
  out.ratio = ifs.ratio().to_double();
  for (std::size_t j = 0; j < m.digits.size(); ++j) {
    const Rational d = m.digits[j] - c;
    out.digits.push_back(d.to_double());
    out.weights.push_back(m.coefficients[j].to_double());
  }
  out.radius = ((m.digits.back() - m.digits.front()) / Rational(2)).to_double();
  return out;
}

inline FtEstimate mu_hat(const CenteredMask& cm, double xi, int depth) {
  FtEstimate est;
  est.truncation_depth = depth;
  const double lam = cm.ratio;
  Complex prod(1.0, 0.0);
  double eta = xi;
  for (int k = 1; k <= depth; ++k) {
    eta *= lam;
    Complex m(0.0, 0.0);
    for (std::size_t j = 0; j < cm.digits.size(); ++j) m += cm.weights[j] * unit(-cm.digits[j] * eta);
    prod *= m;
  }
  const Complex phase = unit(-cm.center * xi * lam / (1.0 - lam));
  est.value = phase * prod;
  const double expo = 2.0 * std::numbers::pi * std::abs(xi) * cm.radius * std::pow(lam, depth + 1) / (1.0 - lam);
  est.tail_bound = std::expm1(expo);
  return est;
}

}  // namespace detail

inline FtEstimate mu_hat(const IfsSpec& ifs, double xi, int depth, const Config& cfg = {}) {
  if (depth < 1) throw InputError("truncation depth must be at least 1");
  if (depth > cfg.max_product_depth) {
    throw ResourceError("truncation depth " + std::to_string(depth) + " exceeds the cap of " +
                        std::to_string(cfg.max_product_depth));
  }
  return detail::mu_hat(detail::centered_mask(ifs), xi, depth);
}

struct JpPoint {
  double x = 0.0;
  double q = 0.0;
  double budget = 0.0;  // |Q_true - q| <= budget for the same finite Lambda
};

/// Q(x) = sum_{l in Lambda} |mu^(x + l)|^2 over the grid.
inline std::vector<JpPoint> jp_sum(const IfsSpec& ifs, const std::vector<double>& lambda,
                                   const std::vector<double>& grid, int depth, const Config& cfg = {}) {
  if (depth < 1) throw InputError("truncation depth must be at least 1");
  if (depth > cfg.max_product_depth) {
    throw ResourceError("truncation depth " + std::to_string(depth) + " exceeds the cap of " +
                        std::to_string(cfg.max_product_depth));
  }
  const auto cm = detail::centered_mask(ifs);
  std::vector<JpPoint> out;
  out.reserve(grid.size());
  for (double x : grid) {
    JpPoint p{x, 0.0, 0.0};
    for (double l : lambda) {
      const FtEstimate e = detail::mu_hat(cm, x + l, depth);
      const double a = std::abs(e.value);
      p.q += a * a;
      p.budget += e.tail_bound * (2.0 * a + e.tail_bound);
    }
    out.push_back(p);
  }
  return out;
}

/// Lambda_n = { sum_{k<n} base^k l_k : l_k in digits }.
inline std::vector<double> radix_spectrum(std::int64_t base, const std::vector<std::int64_t>& digits, int n) {
  std::vector<double> out{0.0};
  double scale = 1.0;
  for (int k = 0; k < n; ++k) {
    std::vector<double> next;
    for (double v : out) {
      for (auto l : digits) next.push_back(v + scale * static_cast<double>(l));
    }
    out = std::move(next);
    scale *= static_cast<double>(base);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

using IntPoly = std::vector<Rational::Integer>;  // coefficient of x^i at index i

inline void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division of a monic-divisor polynomial; the remainder must vanish.
inline IntPoly exact_divide(IntPoly num, const IntPoly& den) {
  trim(num);
  const std::size_t dn = den.size() - 1;
  if (num.size() < den.size()) return {};
  IntPoly q(num.size() - dn, 0);
  for (std::size_t i = num.size(); i-- > dn;) {
    const Rational::Integer c = num[i];
    if (c == 0) continue;
    q[i - dn] = c;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  return q;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

// Phi_n for squarefree n, via Phi_{np}(x) = Phi_n(x^p) / Phi_n(x).
inline IntPoly cyclotomic_squarefree(const std::vector<std::uint64_t>& primes) {
  IntPoly phi{-1, 1};  // Phi_1 = x - 1
  for (auto p : primes) {
    IntPoly raised((phi.size() - 1) * p + 1, 0);
    for (std::size_t i = 0; i < phi.size(); ++i) raised[i * p] = phi[i];
    phi = exact_divide(std::move(raised), phi);
  }
  return phi;
}

}  // namespace detail

/// Cyclotomic polynomial Phi_m with integer coefficients, as
/// Phi_rad(m)(x^(m/rad(m))).
inline std::vector<Rational::Integer> cyclotomic(std::uint64_t m) {
  if (m == 0) throw InputError("cyclotomic index must be positive");
  const auto primes = detail::prime_factors(m);
  std::uint64_t rad = 1;
  for (auto p : primes) rad *= p;
  const auto base = detail::cyclotomic_squarefree(primes);
  const std::uint64_t stretch = m / rad;
  std::vector<Rational::Integer> out((base.size() - 1) * stretch + 1, 0);
  for (std::size_t i = 0; i < base.size(); ++i) out[i * stretch] = base[i];
  return out;
}

/// Exact test of sum_j c_j omega^(e_j) = 0 with omega = exp(2 pi i / m):
/// reduce sum c_j x^(e_j mod m) modulo Phi_m over the rationals.
inline bool root_of_unity_sum_vanishes(const std::vector<Rational>& coefficients,
                                       const std::vector<std::uint64_t>& exponents, std::uint64_t m) {
  std::vector<Rational> poly(m, Rational(0));
  for (std::size_t j = 0; j < coefficients.size(); ++j) poly[exponents[j] % m] += coefficients[j];
  const auto phi = cyclotomic(m);
  const std::size_t deg = phi.size() - 1;
  // phi is monic; reduce from the top.
  for (std::size_t i = poly.size(); i-- > deg;) {
    const Rational c = poly[i];
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j <= deg; ++j) poly[i - deg + j] -= c * Rational(phi[j]);
  }
  for (std::size_t i = 0; i < std::min(deg, poly.size()); ++i) {
    if (!poly[i].is_zero()) return false;
  }
  return true;
}

struct MaskZero {
  std::int64_t n = 0;
  int k = 0;
  Rational point;       // N^-k n, reduced
  double float_abs = 0; // |m(point)| in double precision
};

struct AcCheckResult {
  bool certified = false;
  std::int64_t n_range = 0;
  int k_max = 0;
  std::int64_t base = 0;          // N with ratio = 1/N
  Integerization digits;          // D = alpha (B - b_1)
  std::vector<MaskZero> zeros;    // one per n, ascending |n|, positive n first
  std::optional<std::int64_t> first_failure;
  std::string wording;
};

/// For each 1 <= |n| <= n_range, looks for k <= k_max with m(N^-k n) = 0
/// where m(xi) = sum p_j exp(2 pi i d_j xi) over the integerized digits.
/// A float screen at the zero tolerance proposes k; the zero is then
/// confirmed exactly as a vanishing root-of-unity sum.
inline AcCheckResult ac_mask_zero_check(const IfsSpec& ifs, std::int64_t n_range, int k_max, const Config& cfg = {}) {
  if (n_range < 1) throw InputError("n_range must be at least 1");
  if (k_max < 1) throw InputError("k_max must be at least 1");
  const Rational inv = Rational(1) / ifs.ratio();
  if (!inv.is_integer()) throw InputError("ratio " + ifs.ratio().str() + " is not of the form 1/N");
  AcCheckResult out;
  out.n_range = n_range;
  out.k_max = k_max;
  out.base = inv.numerator().convert_to<std::int64_t>();
  out.digits = integerize_digits(ifs);
  const auto& d = out.digits.digits.elements();
  // integerize preserves digit order, so weights line up with d.
  const auto& p = ifs.weights();
  std::vector<double> pd;
  for (const auto& w : p) pd.push_back(w.to_double());

  auto check = [&](std::int64_t n) -> std::optional<MaskZero> {
    Rational::Integer denom = 1;
    for (int k = 1; k <= k_max; ++k) {
      denom *= out.base;
      const Rational point(Rational::Integer(n), denom);
      if (point.is_integer()) continue;  // m(integer) = 1
      const auto q = point.denominator();
      const auto s = point.numerator();
      // Float screen with the exact fractional phase d*s mod q.
      Complex v(0.0, 0.0);
      std::vector<std::uint64_t> exps;
      const std::uint64_t qq = q.convert_to<std::uint64_t>();
      for (std::size_t j = 0; j < d.size(); ++j) {
        Rational::Integer e = (Rational::Integer(d[j]) * s) % q;
        if (e < 0) e += q;
        const auto eu = e.convert_to<std::uint64_t>();
        exps.push_back(eu);
        v += pd[j] * detail::unit(static_cast<double>(eu) / static_cast<double>(qq));
      }
      if (std::abs(v) >= cfg.zero_tolerance) continue;
      if (root_of_unity_sum_vanishes(p, exps, qq)) return MaskZero{n, k, point, std::abs(v)};
    }
    return std::nullopt;
  };
  for (std::int64_t a = 1; a <= n_range; ++a) {
    for (std::int64_t n : {a, -a}) {
      auto z = check(n);
      if (!z) {
        out.first_failure = n;
        out.wording = "not certified: no exact mask zero at N^-k * " + std::to_string(n) + " for k <= " +
                      std::to_string(k_max);
        return out;
      }
      out.zeros.push_back(*z);
    }
  }
  out.certified = true;
  out.wording = "certified up to n_range = " + std::to_string(n_range) +
                ": every 1 <= |n| <= n_range has an exact mask zero (finite-range evidence, not a proof)";
  return out;
}

inline int valuation(std::int64_t n, std::int64_t p) {
  int v = 0;
  if (n == 0) return 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

}  // namespace ssframe
