#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ssframe/config.hpp"
#include "ssframe/format.hpp"
#include "ssframe/interval.hpp"
#include "ssframe/rational.hpp"

namespace ssframe {

struct WindowPiece {
  Interval interval;
  double value = 0.0;
};

/// Non-negative piecewise-constant window g on finitely many rational
/// intervals.
class WindowFunction {
 public:
  explicit WindowFunction(std::vector<WindowPiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw InputError("window has no pieces");
    std::sort(pieces_.begin(), pieces_.end(),
              [](const WindowPiece& a, const WindowPiece& b) { return a.interval.lo < b.interval.lo; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const auto& p = pieces_[i];
      if (!(p.interval.lo < p.interval.hi)) throw InputError("window piece " + std::to_string(i) + " is empty");
      if (!(p.value >= 0.0) || !std::isfinite(p.value)) {
        throw InputError("window piece " + std::to_string(i) + " has a negative or non-finite value");
      }
      if (i > 0 && p.interval.lo < pieces_[i - 1].interval.hi) {
        throw InputError("window pieces " + std::to_string(i - 1) + " and " + std::to_string(i) + " overlap");
      }
    }
  }

  static WindowFunction indicator(Rational lo, Rational hi, double value = 1.0) {
    return WindowFunction({{{std::move(lo), std::move(hi)}, value}});
  }

  const std::vector<WindowPiece>& pieces() const { return pieces_; }

  /// Omega as sorted components (positive-value pieces, touching ones merged).
  std::vector<Interval> support() const {
    std::vector<Interval> parts;
    for (const auto& p : pieces_) {
      if (p.value > 0.0) parts.push_back(p.interval);
    }
    return merge_union(std::move(parts));
  }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& p : pieces_) s += p.value * p.value * p.interval.length().to_double();
    return s;
  }

  Rational support_measure() const {
    Rational m(0);
    for (const auto& c : support()) m += c.length();
    return m;
  }

 private:
  std::vector<WindowPiece> pieces_;
};

struct GaborSystemSpec {
  WindowFunction window;
  std::vector<Rational> lambda;  // frequencies, sorted and duplicate-free
  std::vector<Rational> shifts;  // J, sorted and duplicate-free

  GaborSystemSpec(WindowFunction g, std::vector<Rational> l, std::vector<Rational> j)
      : window(std::move(g)), lambda(std::move(l)), shifts(std::move(j)) {
    for (auto* v : {&lambda, &shifts}) {
      std::sort(v->begin(), v->end());
      if (std::adjacent_find(v->begin(), v->end()) != v->end()) {
        throw InputError("duplicate element " + std::adjacent_find(v->begin(), v->end())->str() +
                         (v == &lambda ? " in Lambda" : " in J"));
      }
    }
    if (lambda.empty() || shifts.empty()) throw InputError("Lambda and J must be non-empty");
  }

  std::size_t size() const { return lambda.size() * shifts.size(); }
  bool contains_origin() const {
    return std::binary_search(lambda.begin(), lambda.end(), Rational(0)) &&
           std::binary_search(shifts.begin(), shifts.end(), Rational(0));
  }
};

namespace detail {

// exp(2 pi i * r) for exact rational r, reduced mod 1 before conversion.
inline std::complex<double> unit_exact(const Rational& r) {
  const auto num = r.numerator();
  const auto den = r.denominator();
  Rational::Integer rem = num % den;
  if (rem < 0) rem += den;
  const double t = Rational(rem, den).to_double();
  const double a = 2.0 * std::numbers::pi * t;
  return {std::cos(a), std::sin(a)};
}

// int_a^b exp(2 pi i nu x) dx with exact rational nu, a, b.
inline std::complex<double> exp_integral_exact(const Rational& a, const Rational& b, const Rational& nu) {
  const Rational w = b - a;
  if (nu.is_zero()) return {w.to_double(), 0.0};
  const double t = std::numbers::pi * (nu * w).to_double();
  const double sinc = std::sin(t) / t;
  return w.to_double() * sinc * unit_exact(nu * (a + b) / Rational(2));
}

}  // namespace detail

/// <g_{l,p}, g_{l',p'}> with g_{l,p}(x) = exp(2 pi i l x) g(x - p).
inline std::complex<double> gabor_inner(const WindowFunction& g, const Rational& l, const Rational& p,
                                        const Rational& l2, const Rational& p2) {
  const Rational nu = l - l2;
  std::complex<double> s(0.0, 0.0);
  for (const auto& a : g.pieces()) {
    if (a.value == 0.0) continue;
    const Interval ia{a.interval.lo + p, a.interval.hi + p};
    for (const auto& b : g.pieces()) {
      if (b.value == 0.0) continue;
      const Interval ib{b.interval.lo + p2, b.interval.hi + p2};
      if (auto r = interior_overlap(ia, ib)) s += a.value * b.value * detail::exp_integral_exact(r->lo, r->hi, nu);
    }
  }
  return s;
}

/// Gram matrix ordered by (lambda, p) lexicographically.
inline Eigen::MatrixXcd gabor_gram(const GaborSystemSpec& spec, const Config& cfg = {}) {
  if (spec.size() > cfg.gabor_size_cap) {
    throw ResourceError("Gabor system of size " + std::to_string(spec.size()) + " exceeds the cap of " +
                        std::to_string(cfg.gabor_size_cap));
  }
  const auto n = static_cast<Eigen::Index>(spec.size());
  const std::size_t nj = spec.shifts.size();
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& lr = spec.lambda[static_cast<std::size_t>(r) / nj];
    const auto& pr = spec.shifts[static_cast<std::size_t>(r) % nj];
    for (Eigen::Index c = r; c < n; ++c) {
      const auto& lc = spec.lambda[static_cast<std::size_t>(c) / nj];
      const auto& pc = spec.shifts[static_cast<std::size_t>(c) % nj];
      const auto v = gabor_inner(spec.window, lr, pr, lc, pc);
      g(r, c) = v;
      g(c, r) = std::conj(v);
    }
  }
  return g;
}

struct CoveringResult {
  bool covered = false;
  std::optional<Interval> gap;
};

/// Is the box covered by the union of Omega + p, p in J (up to points)?
inline CoveringResult claim1_covering(const GaborSystemSpec& spec, const Interval& box) {
  std::vector<Interval> parts;
  for (const auto& c : spec.window.support()) {
    for (const auto& p : spec.shifts) parts.push_back({c.lo + p, c.hi + p});
  }
  const auto gaps = uncovered_parts(box, merge_union(std::move(parts)));
  if (gaps.empty()) return {true, std::nullopt};
  return {false, gaps.front()};
}

struct PackingResult {
  bool packing = true;
  std::optional<Rational> p;
  std::optional<Rational> p2;
  std::optional<Interval> overlap;
};

/// Do the translates Omega + p meet only in null sets?
inline PackingResult claim2_disjointness(const GaborSystemSpec& spec) {
  const auto omega = spec.window.support();
  for (std::size_t i = 0; i < spec.shifts.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.shifts.size(); ++j) {
      const auto& p = spec.shifts[i];
      const auto& q = spec.shifts[j];
      for (const auto& a : omega) {
        for (const auto& b : omega) {
          if (auto r = interior_overlap({a.lo + p, a.hi + p}, {b.lo + q, b.hi + q})) {
            return {false, p, q, *r};
          }
        }
      }
    }
  }
  return {};
}

struct SpectrumPoint {
  double x = 0.0;
  double q = 0.0;
};

struct SpectrumReport {
  std::vector<SpectrumPoint> points;
  double min_q = 0.0;
  double max_q = 0.0;
};

/// Q(x) = sum_l |(g^2 dx)^(x + l)|^2 / ||g||^4 over Lambda and any extra
/// frequencies. Finite Lambda can only undershoot 1.
inline SpectrumReport claim3_spectrum(const GaborSystemSpec& spec, const std::vector<double>& grid,
                                      const std::vector<Rational>& extension = {}) {
  std::vector<Rational> freqs = spec.lambda;
  freqs.insert(freqs.end(), extension.begin(), extension.end());
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());
  const double norm2 = spec.window.norm_squared();
  if (norm2 <= 0.0) throw InputError("window has zero norm");
  struct P {
    double a, b, v;
  };
  std::vector<P> ps;
  for (const auto& p : spec.window.pieces()) {
    if (p.value > 0.0) ps.push_back({p.interval.lo.to_double(), p.interval.hi.to_double(), p.value * p.value});
  }
  SpectrumReport out;
  for (double x : grid) {
    double q = 0.0;
    for (const auto& l : freqs) {
      const double nu = x + l.to_double();
      std::complex<double> f(0.0, 0.0);
      for (const auto& p : ps) {
        const double w = p.b - p.a;
        const double t = std::numbers::pi * nu * w;
        const double sinc = std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t;
        const double phase = -std::numbers::pi * nu * (p.a + p.b);
        f += p.v * w * sinc * std::complex<double>(std::cos(phase), std::sin(phase));
      }
      q += std::norm(f);
    }
    q /= norm2 * norm2;
    out.points.push_back({x, q});
  }
  if (!out.points.empty()) {
    auto [lo, hi] = std::minmax_element(out.points.begin(), out.points.end(),
                                        [](const SpectrumPoint& a, const SpectrumPoint& b) { return a.q < b.q; });
    out.min_q = lo->q;
    out.max_q = hi->q;
  }
  return out;
}

struct ModulusCheck {
  bool constant = false;
  double value = 0.0;     // common value of g on Omega when constant
  double expected = 0.0;  // ||g|| * L(Omega)^(-1/2)
  double max_deviation = 0.0;
};

/// |g| = c * chi_Omega with c = ||g|| L(Omega)^(-1/2).
inline ModulusCheck constant_modulus_check(const WindowFunction& g, const Config& cfg = {}) {
  ModulusCheck out;
  const double measure = g.support_measure().to_double();
  out.expected = std::sqrt(g.norm_squared() / measure);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& p : g.pieces()) {
    if (p.value <= 0.0) continue;
    lo = std::min(lo, p.value);
    hi = std::max(hi, p.value);
    out.max_deviation = std::max(out.max_deviation, std::abs(p.value - out.expected));
  }
  out.value = hi;
  out.constant = hi - lo <= cfg.window_value_tolerance && out.max_deviation <= cfg.window_value_tolerance;
  return out;
}

struct GaborCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct GaborVerdict {
  double max_offdiag = 0.0;
  double max_diag_deviation = 0.0;
  CoveringResult covering;
  PackingResult packing;
  SpectrumReport spectrum;
  ModulusCheck modulus;
  std::vector<GaborCheck> checks;  // gram, claim1, claim2, claim3, modulus
  // Structure (i)-(ii) with the spectrum condition implies orthonormality;
  // orthonormality implies the structure (non-negative g).
  bool forward_consistent = false;
  bool converse_consistent = false;
  std::string summary;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const GaborCheck& c) { return c.pass; });
  }
};

inline GaborVerdict gabor_onb_verdict(const GaborSystemSpec& spec, const Interval& box, const std::vector<double>& grid,
                                      const Config& cfg = {}) {
  GaborVerdict v;
  const Eigen::MatrixXcd gram = gabor_gram(spec, cfg);
  for (Eigen::Index r = 0; r < gram.rows(); ++r) {
    for (Eigen::Index c = 0; c < gram.cols(); ++c) {
      if (r == c) {
        v.max_diag_deviation = std::max(v.max_diag_deviation, std::abs(gram(r, c) - 1.0));
      } else {
        v.max_offdiag = std::max(v.max_offdiag, std::abs(gram(r, c)));
      }
    }
  }
  const bool gram_ok = v.max_offdiag < cfg.gram_tolerance && v.max_diag_deviation < cfg.gram_tolerance;
  v.checks.push_back({"gram", gram_ok,
                      "max |off-diagonal| = " + format_double(v.max_offdiag) +
                          ", max |diagonal - 1| = " + format_double(v.max_diag_deviation)});
  v.covering = claim1_covering(spec, box);
  v.checks.push_back({"claim1", v.covering.covered,
                      v.covering.covered ? "box [" + box.lo.str() + ", " + box.hi.str() + "] covered by Omega + J"
                                         : "gap [" + v.covering.gap->lo.str() + ", " + v.covering.gap->hi.str() + "]"});
  v.packing = claim2_disjointness(spec);
  v.checks.push_back({"claim2", v.packing.packing,
                      v.packing.packing ? "translates of Omega meet in null sets"
                                        : "Omega + " + v.packing.p->str() + " and Omega + " + v.packing.p2->str() +
                                              " share [" + v.packing.overlap->lo.str() + ", " +
                                              v.packing.overlap->hi.str() + "]"});
  v.spectrum = claim3_spectrum(spec, grid);
  v.checks.push_back({"claim3", !grid.empty() && v.spectrum.min_q >= cfg.jp_threshold,
                      "min Q = " + format_double(v.spectrum.min_q) + " over " + std::to_string(grid.size()) +
                          " grid points (threshold " + format_double(cfg.jp_threshold) + ")"});
  v.modulus = constant_modulus_check(spec.window, cfg);
  v.checks.push_back({"modulus", v.modulus.constant,
                      v.modulus.constant ? "|g| = " + format_double(v.modulus.value) + " on Omega"
                                         : "g deviates from ||g|| L(Omega)^(-1/2) = " +
                                               format_double(v.modulus.expected) + " by " +
                                               format_double(v.modulus.max_deviation)});
  const bool structure = v.covering.covered && v.packing.packing && v.modulus.constant &&
                         v.checks[3].pass;
  v.forward_consistent = !structure || gram_ok;
  v.converse_consistent = !gram_ok || structure;
  if (v.all_pass()) {
    v.summary = "consistent with Gabor orthonormal basis structure on the window";
  } else if (!gram_ok) {
    v.summary = "not orthonormal on the window";
  } else {
    v.summary = "orthonormal on the window but the structural checks fail";
  }
  return v;
}

}  // namespace ssframe
