#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <tuple>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ssframe/config.hpp"
#include "ssframe/ifs.hpp"
#include "ssframe/interval.hpp"
#include "ssframe/rational.hpp"

namespace ssframe {

/// Absolutely continuous measure g dx with g piecewise constant.
class StepMeasure {
 public:
  StepMeasure(std::vector<Rational> breakpoints, std::vector<Rational> densities)
      : breakpoints_(std::move(breakpoints)), densities_(std::move(densities)) {
    if (breakpoints_.size() < 2) throw InputError("a step measure needs at least two breakpoints");
    if (densities_.size() + 1 != breakpoints_.size()) {
      throw InputError("expected " + std::to_string(breakpoints_.size() - 1) + " densities, got " +
                       std::to_string(densities_.size()));
    }
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
      if (!(breakpoints_[i - 1] < breakpoints_[i])) {
        throw InputError("breakpoints must be strictly increasing (breakpoints[" + std::to_string(i) + "])");
      }
    }
    for (std::size_t i = 0; i < densities_.size(); ++i) {
      if (densities_[i].sign() < 0) {
        throw InputError("densities[" + std::to_string(i) + "] = " + densities_[i].str() + " is negative");
      }
    }
  }

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& densities() const { return densities_; }
  std::size_t pieces() const { return densities_.size(); }
  Interval piece(std::size_t i) const { return {breakpoints_[i], breakpoints_[i + 1]}; }

  Rational total_mass() const {
    Rational m(0);
    for (std::size_t i = 0; i < pieces(); ++i) m += densities_[i] * piece(i).length();
    return m;
  }

  /// int_piece exp(-2 pi i nu x) g dx summed over pieces.
  std::complex<double> fourier(double nu) const;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<Rational> densities_;
};

namespace detail {

// int_a^b exp(-2 pi i nu x) dx in a form that stays accurate for small nu.
inline std::complex<double> exp_integral(double a, double b, double nu) {
  const double w = b - a;
  const double t = std::numbers::pi * nu * w;
  const double sinc = std::abs(t) < 1e-8 ? 1.0 - t * t / 6.0 : std::sin(t) / t;
  const double phase = -std::numbers::pi * nu * (a + b);
  return w * sinc * std::complex<double>(std::cos(phase), std::sin(phase));
}

}  // namespace detail

inline std::complex<double> StepMeasure::fourier(double nu) const {
  std::complex<double> s(0.0, 0.0);
  for (std::size_t i = 0; i < pieces(); ++i) {
    if (densities_[i].is_zero()) continue;
    s += densities_[i].to_double() *
         detail::exp_integral(breakpoints_[i].to_double(), breakpoints_[i + 1].to_double(), nu);
  }
  return s;
}

struct EssentialBounds {
  Rational sup;
  Rational inf;
};

/// Max and min density over the support (positive-density pieces).
inline EssentialBounds esssup_essinf(const StepMeasure& mu) {
  std::optional<Rational> hi;
  std::optional<Rational> lo;
  for (const auto& g : mu.densities()) {
    if (g.is_zero()) continue;
    if (!hi || *hi < g) hi = g;
    if (!lo || g < *lo) lo = g;
  }
  if (!hi) throw InputError("step measure has zero mass");
  return {*hi, *lo};
}

/// Frame-bound estimate for {e_l : l in Lambda} in L^2(g dx).
///
/// lower and upper are the extreme eigenvalues of the Gram matrix
/// G[l][l'] = int exp(-2 pi i (l - l') x) g dx, that is of T T* for the
/// analysis operator T f = (<f, e_l>_mu)_l. upper is the optimal Bessel
/// bound over all of L^2(mu); lower is the lower bound on span{e_l}.
/// Enlarging Lambda widens [lower, upper] (interlacing), and as Lambda
/// grows to a frame the two approach the frame bounds A and B.
///
/// subspace_lower/upper compress T T* to the depth-n dyadic step subspace
/// of the support (eigenvalues of Phi D^-1 Phi*, D the diagonal L^2(mu)
/// Gram of the cell indicators). They increase with n towards lower/upper.
struct FrameEstimate {
  double lower = 0.0;
  double upper = 0.0;
  double subspace_lower = 0.0;
  double subspace_upper = 0.0;
  int subspace_depth = 0;
  std::size_t subspace_dimension = 0;
  std::size_t dropped_cells = 0;  // zero-density cells left out of the subspace
  std::vector<double> lambda;
};

namespace detail {

inline std::pair<double, double> hermitian_extremes(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace detail

inline FrameEstimate frame_bounds_estimate(const StepMeasure& mu, const std::vector<double>& lambda, int depth,
                                           const Config& cfg = {}) {
  if (lambda.empty()) throw InputError("frequency set is empty");
  if (depth < 0) throw InputError("subspace depth must be non-negative");
  if (mu.total_mass().sign() <= 0) throw InputError("step measure has zero mass");
  if (lambda.size() > cfg.frame_dimension_cap) {
    throw ResourceError("|Lambda| = " + std::to_string(lambda.size()) + " exceeds the frame dimension cap of " +
                        std::to_string(cfg.frame_dimension_cap));
  }
  const std::uint64_t per_piece = detail::bounded_power(2, depth, cfg.frame_dimension_cap);
  if (per_piece * mu.pieces() > cfg.frame_dimension_cap) {
    throw ResourceError("step subspace of dimension 2^" + std::to_string(depth) + " * " +
                        std::to_string(mu.pieces()) + " exceeds the frame dimension cap of " +
                        std::to_string(cfg.frame_dimension_cap));
  }
  FrameEstimate est;
  est.lambda = lambda;
  est.subspace_depth = depth;
  const auto n = static_cast<Eigen::Index>(lambda.size());

  Eigen::MatrixXcd gram(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = r; c < n; ++c) {
      const auto v = mu.fourier(lambda[static_cast<std::size_t>(r)] - lambda[static_cast<std::size_t>(c)]);
      gram(r, c) = v;
      gram(c, r) = std::conj(v);
    }
  }
  std::tie(est.lower, est.upper) = detail::hermitian_extremes(gram);

  // Depth-n cells of each positive-density piece.
  struct Cell {
    double a, b, g;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < mu.pieces(); ++i) {
    const Interval p = mu.piece(i);
    const Rational step = p.length() / Rational(static_cast<long long>(per_piece));
    for (std::uint64_t j = 0; j < per_piece; ++j) {
      if (mu.densities()[i].is_zero()) {
        ++est.dropped_cells;
        continue;
      }
      const Rational a = p.lo + step * Rational(static_cast<long long>(j));
      cells.push_back({a.to_double(), (a + step).to_double(), mu.densities()[i].to_double()});
    }
  }
  est.subspace_dimension = cells.size();
  const auto m = static_cast<Eigen::Index>(cells.size());
  // Phi D^-1/2 with Phi[l][c] = g_c int_c e_{-l}, D[c] = g_c |c|.
  Eigen::MatrixXcd scaled(n, m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const Cell& cell = cells[static_cast<std::size_t>(c)];
    const double norm = std::sqrt(cell.g * (cell.b - cell.a));
    for (Eigen::Index r = 0; r < n; ++r) {
      scaled(r, c) = cell.g * detail::exp_integral(cell.a, cell.b, lambda[static_cast<std::size_t>(r)]) / norm;
    }
  }
  const Eigen::MatrixXcd compressed = scaled * scaled.adjoint();
  std::tie(est.subspace_lower, est.subspace_upper) = detail::hermitian_extremes(compressed);
  est.subspace_lower = std::max(0.0, est.subspace_lower);
  est.lower = std::max(0.0, est.lower);
  return est;
}

/// Integer frequencies -M..M.
inline std::vector<double> symmetric_range(long long m) {
  std::vector<double> out;
  for (long long k = -m; k <= m; ++k) out.push_back(static_cast<double>(k));
  return out;
}

struct GapCheck {
  FrameEstimate estimate;
  double estimate_ratio = 0.0;  // upper / lower
  EssentialBounds density;
  Rational density_ratio;
  // upper/lower does not exceed esssup/essinf by more than the tolerance.
  bool inner_estimate_consistent = false;
  // upper/lower is within the relative tolerance of esssup/essinf.
  bool density_ratio_attained = false;
  // g is not a constant multiple of a characteristic function, so no
  // tight frame measure exists.
  bool tight_frame_excluded = false;
};

/// Compares the observed bound ratio with esssup g / essinf g.
inline GapCheck theorem13_gap_check(const StepMeasure& mu, const std::vector<double>& lambda, int depth,
                                    const Config& cfg = {}) {
  GapCheck out;
  out.estimate = frame_bounds_estimate(mu, lambda, depth, cfg);
  out.estimate_ratio = out.estimate.lower > 0 ? out.estimate.upper / out.estimate.lower
                                              : std::numeric_limits<double>::infinity();
  out.density = esssup_essinf(mu);
  out.density_ratio = out.density.sup / out.density.inf;
  const double dr = out.density_ratio.to_double();
  out.inner_estimate_consistent = out.estimate_ratio <= dr + cfg.ratio_tolerance;
  out.density_ratio_attained = std::abs(out.estimate_ratio - dr) <= cfg.ratio_tolerance * dr;
  out.tight_frame_excluded = out.density.sup != out.density.inf;
  return out;
}

struct DifferenceCover {
  int depth = 0;
  std::vector<Interval> cover_c;       // depth-n cover of C - C
  std::vector<Interval> cover_d;       // depth-n cover of D - D
  std::vector<Interval> intersection;  // sorted components
};

namespace detail {

inline std::vector<Interval> difference_cover(const std::vector<std::int64_t>& digits, std::int64_t base, int depth,
                                              const Config& cfg) {
  std::vector<std::int64_t> diff;
  for (auto a : digits) {
    for (auto b : digits) diff.push_back(a - b);
  }
  std::sort(diff.begin(), diff.end());
  diff.erase(std::unique(diff.begin(), diff.end()), diff.end());
  if (diff.size() == 1) return {{Rational(0), Rational(0)}};
  std::vector<Rational> b;
  for (auto d : diff) b.push_back(Rational(static_cast<long long>(d)) / Rational(static_cast<long long>(base)));
  const IfsSpec ifs = IfsSpec::uniform(Rational(1) / Rational(static_cast<long long>(base)), std::move(b));
  return cylinder_cover(ifs, depth, cfg).components();
}

}  // namespace detail

/// Depth-n interval covers of C - C and D - D for the digit Cantor sets
/// { sum_k c_k base^-k : c_k in C } and their exact intersection.
inline DifferenceCover cantor_difference_cover(const std::vector<std::int64_t>& c, const std::vector<std::int64_t>& d,
                                               std::int64_t base, int depth, const Config& cfg = {}) {
  if (base < 2) throw InputError("base must be at least 2");
  if (depth < 0) throw InputError("depth must be non-negative");
  for (const auto* set : {&c, &d}) {
    if (set->empty()) throw InputError("digit set is empty");
    for (auto x : *set) {
      if (x < 0 || x >= base) {
        throw InputError("digit " + std::to_string(x) + " is outside 0.." + std::to_string(base - 1));
      }
    }
  }
  DifferenceCover out;
  out.depth = depth;
  out.cover_c = detail::difference_cover(c, base, depth, cfg);
  out.cover_d = detail::difference_cover(d, base, depth, cfg);
  out.intersection = intersect_unions(out.cover_c, out.cover_d);
  return out;
}

}  // namespace ssframe
