#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ssframe/config.hpp"
#include "ssframe/ifs.hpp"
#include "ssframe/interval.hpp"
#include "ssframe/rational.hpp"

namespace ssframe {

/// Finite set of integers normalized to min = 0 and gcd 1.
class DigitSet {
 public:
  DigitSet() = default;

  /// Sorts, removes duplicates and normalizes. Throws on an empty set.
  explicit DigitSet(std::vector<std::int64_t> raw) {
    if (raw.empty()) throw InputError("digit set is empty");
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    const std::int64_t lo = raw.front();
    std::int64_t g = 0;
    for (auto& d : raw) {
      d -= lo;
      g = std::gcd(g, d);
    }
    if (g > 1) {
      for (auto& d : raw) d /= g;
    }
    elements_ = std::move(raw);
  }

  const std::vector<std::int64_t>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::int64_t diameter() const { return elements_.empty() ? 0 : elements_.back(); }

  friend bool operator==(const DigitSet&, const DigitSet&) = default;

 private:
  std::vector<std::int64_t> elements_;
};

inline std::string digits_str(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

/// D = scale * (B - shift) with D a normalized integer digit set.
struct Integerization {
  Rational scale;
  Rational shift;
  DigitSet digits;
};

inline Integerization integerize_digits(const std::vector<Rational>& digits) {
  if (digits.empty()) throw InputError("no digits to integerize");
  const Rational lo = *std::min_element(digits.begin(), digits.end());
  using Integer = Rational::Integer;
  Integer den_lcm = 1;
  for (const auto& b : digits) {
    den_lcm = boost::multiprecision::lcm(den_lcm, (b - lo).denominator());
  }
  Integer num_gcd = 0;
  for (const auto& b : digits) {
    const Rational scaled = (b - lo) * Rational(den_lcm);
    num_gcd = boost::multiprecision::gcd(num_gcd, scaled.numerator());
  }
  if (num_gcd == 0) throw InputError("all digits are equal; nothing to integerize");
  const Rational scale = Rational(den_lcm) / Rational(num_gcd);
  std::vector<std::int64_t> out;
  for (const auto& b : digits) {
    const Rational d = scale * (b - lo);
    if (d.numerator() > Integer(INT64_MAX)) {
      throw InputError("integerized digit " + d.str() + " does not fit in 64 bits");
    }
    out.push_back(d.numerator().convert_to<std::int64_t>());
  }
  return {scale, lo, DigitSet(std::move(out))};
}

inline Integerization integerize_digits(const IfsSpec& ifs) { return integerize_digits(ifs.digits()); }

/// IFS x -> (x + d) / N over an integer digit set, uniform weights.
inline IfsSpec ifs_from_digit_set(std::int64_t n, const std::vector<std::int64_t>& digits) {
  if (n < 2) throw InputError("base N must be at least 2");
  std::vector<Rational> b;
  for (auto d : digits) b.emplace_back(Rational(static_cast<long long>(d)) / Rational(static_cast<long long>(n)));
  std::sort(b.begin(), b.end());
  return IfsSpec::uniform(Rational(1) / Rational(static_cast<long long>(n)), std::move(b));
}

struct TilingWitness {
  std::uint64_t period = 0;
  std::vector<std::uint64_t> complement;  // E_0, sorted
};

struct TilingResult {
  std::optional<TilingWitness> witness;
  std::uint64_t search_bound = 0;       // largest period allowed
  std::uint64_t largest_period_tried = 0;
  std::uint64_t nodes = 0;
  bool budget_exhausted = false;
  std::string basis;
};

/// Exhaustive residue count: every residue of Z_n is hit exactly once by D + E.
inline bool verify_tiling_witness(const DigitSet& d, const TilingWitness& w) {
  if (w.period == 0 || d.size() * w.complement.size() != w.period) return false;
  std::vector<int> hits(w.period, 0);
  for (auto e : w.complement) {
    if (e >= w.period) return false;
    for (auto x : d.elements()) {
      const auto r = (static_cast<std::uint64_t>(x) + e) % w.period;
      if (++hits[r] > 1) return false;
    }
  }
  return std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
}

namespace detail {

// Greedy fill of Z_n: cover the smallest uncovered residue r by some
// translate D + e with e = r - d, trying e in ascending order.
class ComplementSearch {
 public:
  ComplementSearch(const DigitSet& d, std::uint64_t n, std::uint64_t& nodes, std::uint64_t budget)
      : digits_(d.elements()), n_(n), covered_(n, false), nodes_(nodes), budget_(budget) {}

  bool run() { return fill(0); }
  bool out_of_budget() const { return out_of_budget_; }
  std::vector<std::uint64_t> complement() const {
    auto e = chosen_;
    std::sort(e.begin(), e.end());
    return e;
  }

 private:
  bool fill(std::uint64_t from) {
    std::uint64_t r = from;
    while (r < n_ && covered_[r]) ++r;
    if (r == n_) return true;
    if (++nodes_ > budget_) {
      out_of_budget_ = true;
      return false;
    }
    std::vector<std::uint64_t> candidates;
    for (auto d : digits_) candidates.push_back((r + n_ - static_cast<std::uint64_t>(d) % n_) % n_);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    for (auto e : candidates) {
      if (!fits(e)) continue;
      mark(e, true);
      chosen_.push_back(e);
      if (fill(r + 1)) return true;
      chosen_.pop_back();
      mark(e, false);
      if (out_of_budget_) return false;
    }
    return false;
  }

  bool fits(std::uint64_t e) const {
    return std::none_of(digits_.begin(), digits_.end(), [&](std::int64_t d) {
      return covered_[(static_cast<std::uint64_t>(d) + e) % n_];
    });
  }
  void mark(std::uint64_t e, bool value) {
    for (auto d : digits_) covered_[(static_cast<std::uint64_t>(d) + e) % n_] = value;
  }

  const std::vector<std::int64_t>& digits_;
  std::uint64_t n_;
  std::vector<bool> covered_;
  std::vector<std::uint64_t> chosen_;
  std::uint64_t& nodes_;
  std::uint64_t budget_;
  bool out_of_budget_ = false;
};

}  // namespace detail

/// Searches periods n = |D|, 2|D|, ... up to min(2^diam(D), period_cap,
/// cfg.period_cap) for E_0 with D + E_0 = Z_n as a direct sum. A missing
/// witness means no tiling up to the recorded bound, nothing more.
inline TilingResult tiles_Z(const DigitSet& d, std::optional<std::uint64_t> period_cap = std::nullopt,
                            const Config& cfg = {}) {
  if (d.size() == 0) throw InputError("tiles_Z needs a non-empty digit set");
  TilingResult result;
  std::uint64_t bound = cfg.period_cap;
  if (period_cap) bound = std::min(bound, *period_cap);
  if (d.diameter() < 63) {
    bound = std::min(bound, std::uint64_t{1} << static_cast<unsigned>(d.diameter()));
  }
  // The bound must at least admit the trivial candidate period |D|.
  bound = std::max<std::uint64_t>(bound, d.size());
  result.search_bound = bound;
  const std::uint64_t step = d.size();
  for (std::uint64_t n = step; n <= bound; n += step) {
    result.largest_period_tried = n;
    // D must inject into Z_n.
    std::set<std::uint64_t> residues;
    for (auto x : d.elements()) residues.insert(static_cast<std::uint64_t>(x) % n);
    if (residues.size() != d.size()) continue;
    detail::ComplementSearch search(d, n, result.nodes, cfg.tiling_node_budget);
    if (search.run()) {
      TilingWitness w{n, search.complement()};
      if (!verify_tiling_witness(d, w)) {
        throw std::logic_error("tiling search produced an invalid witness");
      }
      result.witness = std::move(w);
      result.basis = "D + E_0 = Z_" + std::to_string(n) + " verified by residue count";
      return result;
    }
    if (search.out_of_budget()) {
      result.budget_exhausted = true;
      result.basis = "node budget exhausted at period " + std::to_string(n);
      return result;
    }
  }
  result.basis = "no complement for any period up to " + std::to_string(bound);
  return result;
}

/// A finite piece of an integer set: its members inside [lo, hi], with
/// nothing known outside the window.
struct WindowedSet {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  std::set<std::int64_t> members;

  bool in_window(std::int64_t x) const { return lo <= x && x <= hi; }
  bool contains(std::int64_t x) const { return members.count(x) != 0; }

  static WindowedSet arithmetic(std::int64_t lo, std::int64_t hi, std::int64_t step, std::int64_t residue = 0) {
    if (step <= 0) throw InputError("arithmetic progression step must be positive");
    WindowedSet s{lo, hi, {}};
    for (std::int64_t x = lo; x <= hi; ++x) {
      if (((x - residue) % step + step) % step == 0) s.members.insert(x);
    }
    return s;
  }
};

enum class WindowStatus { Consistent, Violation };

inline const char* to_string(WindowStatus s) {
  return s == WindowStatus::Consistent ? "ConsistentOnWindow" : "Violation";
}

struct WindowCheck {
  WindowStatus status = WindowStatus::Consistent;
  std::optional<std::int64_t> element;
  std::string reason;
  std::uint64_t checked = 0;
  std::uint64_t boundary_skipped = 0;
};

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Checks J = N J (+) D on the window in both directions. Elements whose
/// decomposition would need J outside the window are skipped and counted.
inline WindowCheck verify_self_replicating(const WindowedSet& j, std::int64_t n, const std::vector<std::int64_t>& digits) {
  if (n < 2) throw InputError("N must be at least 2");
  if (digits.empty()) throw InputError("digit set is empty");
  WindowCheck out;
  auto fail = [&](std::int64_t x, std::string why) {
    out.status = WindowStatus::Violation;
    out.element = x;
    out.reason = std::move(why);
    return out;
  };
  for (std::int64_t x : j.members) {
    if (!j.in_window(x)) continue;
    int known = 0;
    bool unknown = false;
    for (auto d : digits) {
      if ((x - d) % n != 0) continue;
      const std::int64_t pre = (x - d) / n;
      if (!j.in_window(pre)) {
        unknown = true;
      } else if (j.contains(pre)) {
        ++known;
      }
    }
    if (known > 1) return fail(x, std::to_string(x) + " has " + std::to_string(known) + " decompositions N*j'+d");
    if (known == 0 && !unknown) return fail(x, std::to_string(x) + " is not of the form N*j'+d with j' in J");
    if (known == 0) {
      ++out.boundary_skipped;
    } else {
      ++out.checked;
    }
  }
  for (std::int64_t pre : j.members) {
    if (!j.in_window(pre)) continue;
    for (auto d : digits) {
      const std::int64_t x = n * pre + d;
      if (!j.in_window(x)) {
        ++out.boundary_skipped;
        continue;
      }
      if (!j.contains(x)) {
        return fail(x, std::to_string(n) + "*" + std::to_string(pre) + "+" + std::to_string(d) + " = " +
                           std::to_string(x) + " is missing from J");
      }
    }
  }
  return out;
}

/// Every integer of the window has exactly one representation g + j with
/// g in G and j in J. Representations needing J outside its window are
/// skipped and counted.
inline WindowCheck verify_tiling_complement(const std::vector<std::int64_t>& g, const WindowedSet& j,
                                            std::int64_t lo, std::int64_t hi) {
  if (g.empty()) throw InputError("G is empty");
  WindowCheck out;
  for (std::int64_t x = lo; x <= hi; ++x) {
    int known = 0;
    bool unknown = false;
    for (auto gi : g) {
      const std::int64_t t = x - gi;
      if (!j.in_window(t)) {
        unknown = true;
      } else if (j.contains(t)) {
        ++known;
      }
    }
    if (known > 1) {
      out.status = WindowStatus::Violation;
      out.element = x;
      out.reason = std::to_string(x) + " is covered " + std::to_string(known) + " times";
      return out;
    }
    if (known == 0 && !unknown) {
      out.status = WindowStatus::Violation;
      out.element = x;
      out.reason = std::to_string(x) + " is not covered";
      return out;
    }
    if (known == 0) {
      ++out.boundary_skipped;
    } else {
      ++out.checked;
    }
  }
  return out;
}

struct GClass {
  std::vector<std::int64_t> g;
  std::vector<Interval> cells;  // disjoint, sorted, uncertain slivers removed
  std::uint64_t grid_points = 0;
};

struct GClassification {
  int refine = 0;
  Rational tolerance;
  std::vector<GClass> classes;        // non-empty G only
  std::vector<Interval> empty_cells;  // t with G(t) empty
  std::vector<Interval> uncertain;    // slivers around cover boundaries
  std::uint64_t grid = 0;
  std::uint64_t grid_uncertain = 0;
  std::uint64_t grid_mismatches = 0;  // sampled cross-check against exact cells

  Rational uncertain_length() const {
    Rational t(0);
    for (const auto& s : uncertain) t += s.length();
    return t;
  }
};

namespace detail {

inline Rational tolerance_rational(double tol) {
  if (!(tol > 0)) return Rational(0);
  const double inv = 1.0 / tol;
  return Rational(1) / Rational(static_cast<long long>(std::llround(inv)));
}

inline bool in_components(const std::vector<Interval>& comps, const Rational& x) {
  auto it = std::upper_bound(comps.begin(), comps.end(), x,
                             [](const Rational& v, const Interval& c) { return v < c.lo; });
  if (it == comps.begin()) return false;
  return std::prev(it)->contains(x);
}

inline std::vector<std::int64_t> g_of(const std::vector<Interval>& comps, const Rational& t, std::int64_t jlo,
                                      std::int64_t jhi) {
  std::vector<std::int64_t> g;
  for (std::int64_t j = jlo; j <= jhi; ++j) {
    if (in_components(comps, t + Rational(static_cast<long long>(j)))) g.push_back(j);
  }
  return g;
}

}  // namespace detail

/// G(t) = { j : t + j in X } for t in [0,1), with X over-approximated by
/// the depth-m cylinder cover. Breakpoints of the cover are exact, so each
/// elementary t-interval carries a single G; a sliver of the boundary
/// tolerance around every breakpoint is reported as uncertain.
inline GClassification classify_G_sets(const IfsSpec& ifs, std::uint64_t grid, int refine, const Config& cfg = {}) {
  if (Rational(static_cast<long long>(ifs.size())) * ifs.ratio() != Rational(1)) {
    throw InputError("G-set classification needs ratio = 1/N with N = number of digits");
  }
  if (grid == 0) throw InputError("grid resolution must be positive");
  const auto comps = cover_union(ifs, refine, cfg);
  GClassification out;
  out.refine = refine;
  out.grid = grid;
  out.tolerance = detail::tolerance_rational(cfg.boundary_tolerance);
  const Rational& tol = out.tolerance;

  auto floor_int = [](const Rational& x) {
    Rational::Integer q = x.numerator() / x.denominator();
    if (x.sign() < 0 && Rational(q) != x) q -= 1;
    return q.convert_to<std::int64_t>();
  };
  const std::int64_t jlo = floor_int(comps.front().lo) - 1;
  const std::int64_t jhi = floor_int(comps.back().hi) + 1;

  std::set<Rational> cuts{Rational(0), Rational(1)};
  std::set<Rational> boundaries;
  for (const auto& c : comps) {
    for (const Rational* e : {&c.lo, &c.hi}) {
      const Rational frac = *e - Rational(static_cast<long long>(floor_int(*e)));
      cuts.insert(frac);
      boundaries.insert(frac);
      if (frac == Rational(0)) boundaries.insert(Rational(1));
    }
  }
  std::vector<Rational> pts(cuts.begin(), cuts.end());
  std::map<std::vector<std::int64_t>, std::size_t> index;
  auto add_cell = [&](const std::vector<std::int64_t>& g, Interval cell) {
    if (!(cell.lo < cell.hi)) return;
    if (g.empty()) {
      if (!out.empty_cells.empty() && out.empty_cells.back().hi == cell.lo) {
        out.empty_cells.back().hi = cell.hi;
      } else {
        out.empty_cells.push_back(cell);
      }
      return;
    }
    auto [it, inserted] = index.try_emplace(g, out.classes.size());
    if (inserted) out.classes.push_back({g, {}, 0});
    auto& cells = out.classes[it->second].cells;
    if (!cells.empty() && cells.back().hi == cell.lo) {
      cells.back().hi = cell.hi;
    } else {
      cells.push_back(cell);
    }
  };
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Rational a = pts[i];
    const Rational b = pts[i + 1];
    const Rational mid = (a + b) / Rational(2);
    const auto g = detail::g_of(comps, mid, jlo, jhi);
    Rational lo = boundaries.count(a) != 0 ? a + tol : a;
    Rational hi = boundaries.count(b) != 0 ? b - tol : b;
    if (hi <= lo) {
      out.uncertain.push_back({a, b});
      continue;
    }
    add_cell(g, {lo, hi});
    if (lo != a) out.uncertain.push_back({a, lo});
    if (hi != b) out.uncertain.push_back({hi, b});
  }
  out.uncertain = merge_union(std::move(out.uncertain));

  auto class_of = [&](const Rational& t) -> std::optional<std::size_t> {
    for (std::size_t c = 0; c < out.classes.size(); ++c) {
      for (const auto& cell : out.classes[c].cells) {
        if (cell.contains(t)) return c;
      }
    }
    return std::nullopt;
  };
  for (std::uint64_t i = 0; i < grid; ++i) {
    const Rational t = Rational(static_cast<long long>(2 * i + 1)) / Rational(static_cast<long long>(2 * grid));
    if (detail::in_components(out.uncertain, t)) {
      ++out.grid_uncertain;
      continue;
    }
    const auto g = detail::g_of(comps, t, jlo, jhi);
    const auto c = class_of(t);
    if (c) {
      ++out.classes[*c].grid_points;
      if (out.classes[*c].g != g) ++out.grid_mismatches;
    } else if (!g.empty()) {
      ++out.grid_mismatches;
    }
  }
  return out;
}

}  // namespace ssframe
