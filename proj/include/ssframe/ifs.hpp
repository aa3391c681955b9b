#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssframe/config.hpp"
#include "ssframe/interval.hpp"
#include "ssframe/rational.hpp"

namespace ssframe {

/// A word i_1 ... i_n over the alphabet {1, ..., N}.
using Word = std::vector<int>;

inline std::string word_str(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i != 0) s += ',';
    s += std::to_string(w[i]);
  }
  return s;
}

/// One-dimensional affine IFS tau_j(x) = ratio * x + digit_j with
/// probability weights.
///
/// Digits are strictly increasing, weights lie in (0,1) and sum to 1
/// exactly. The constructor enforces all of this and throws InputError.
class IfsSpec {
 public:
  IfsSpec(Rational ratio, std::vector<Rational> digits, std::vector<Rational> weights)
      : ratio_(std::move(ratio)), digits_(std::move(digits)), weights_(std::move(weights)) {
    if (ratio_ <= Rational(0) || ratio_ >= Rational(1)) {
      throw InputError("ratio must lie in (0,1), got " + ratio_.str());
    }
    if (digits_.size() < 2) throw InputError("an IFS needs at least two digits");
    if (digits_.size() != weights_.size()) {
      throw InputError("digits and weights differ in length (" + std::to_string(digits_.size()) +
                       " vs " + std::to_string(weights_.size()) + ")");
    }
    for (std::size_t i = 1; i < digits_.size(); ++i) {
      if (!(digits_[i - 1] < digits_[i])) {
        throw InputError("digits must be strictly increasing (digits[" + std::to_string(i) + "] = " +
                         digits_[i].str() + ")");
      }
    }
    Rational total(0);
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (weights_[i] <= Rational(0) || weights_[i] >= Rational(1)) {
        throw InputError("weights[" + std::to_string(i) + "] = " + weights_[i].str() +
                         " is not in (0,1)");
      }
      total += weights_[i];
    }
    if (total != Rational(1)) throw InputError("weights sum to " + total.str() + ", not 1");
  }

  static IfsSpec uniform(Rational ratio, std::vector<Rational> digits) {
    const auto n = static_cast<long long>(digits.size());
    std::vector<Rational> weights(digits.size(), n == 0 ? Rational(0) : Rational(1) / Rational(n));
    return IfsSpec(std::move(ratio), std::move(digits), std::move(weights));
  }

  /// Accepts (digit, weight) pairs in any order and sorts them by digit.
  static IfsSpec from_pairs(Rational ratio, std::vector<std::pair<Rational, Rational>> pairs) {
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Rational> digits;
    std::vector<Rational> weights;
    for (auto& [d, w] : pairs) {
      digits.push_back(std::move(d));
      weights.push_back(std::move(w));
    }
    return IfsSpec(std::move(ratio), std::move(digits), std::move(weights));
  }

  const Rational& ratio() const { return ratio_; }
  const std::vector<Rational>& digits() const { return digits_; }
  const std::vector<Rational>& weights() const { return weights_; }
  int size() const { return static_cast<int>(digits_.size()); }

  /// 1-based accessors matching word letters.
  const Rational& digit(int letter) const { return digits_.at(static_cast<std::size_t>(letter - 1)); }
  const Rational& weight(int letter) const { return weights_.at(static_cast<std::size_t>(letter - 1)); }

  /// Convex hull of the attractor: [b_1/(1-ratio), b_N/(1-ratio)].
  Interval hull() const {
    const Rational one_minus = Rational(1) - ratio_;
    return {digits_.front() / one_minus, digits_.back() / one_minus};
  }

  bool uniform_weights() const {
    return std::all_of(weights_.begin(), weights_.end(),
                       [&](const Rational& w) { return w == weights_.front(); });
  }

  /// b_1 = 0 and b_N = 1 - ratio, so that the hull is [0,1].
  bool is_canonical() const {
    return digits_.front() == Rational(0) && digits_.back() == Rational(1) - ratio_;
  }

  friend bool operator==(const IfsSpec&, const IfsSpec&) = default;

 private:
  Rational ratio_;
  std::vector<Rational> digits_;
  std::vector<Rational> weights_;
};

/// Canonical form of an IFS and the conjugating change of variable
/// y = scale * (x - shift), which maps hull(X) onto [0,1].
struct Normalization {
  IfsSpec spec;
  Rational shift;
  Rational scale;
  bool changed = false;
};

inline Normalization normalize(const IfsSpec& ifs) {
  const Rational one_minus = Rational(1) - ifs.ratio();
  const Rational b1 = ifs.digits().front();
  const Rational scale = one_minus / (ifs.digits().back() - b1);
  std::vector<Rational> digits;
  digits.reserve(ifs.digits().size());
  for (const auto& b : ifs.digits()) digits.push_back(scale * (b - b1));
  Normalization n{IfsSpec(ifs.ratio(), std::move(digits), ifs.weights()), b1 / one_minus, scale,
                  !ifs.is_canonical()};
  return n;
}

/// Composed word map x -> scale * x + offset with scale = ratio^power.
///
/// Equality compares (power, offset) only; within one IFS this is exactly
/// the identification of coinciding compositions.
struct AffineMap {
  int power = 0;
  Rational offset;
  Rational scale{1};

  Rational apply(const Rational& x) const { return scale * x + offset; }
  Interval apply(const Interval& i) const { return affine_image(i, scale, offset); }

  friend bool operator==(const AffineMap& a, const AffineMap& b) {
    return a.power == b.power && a.offset == b.offset;
  }
};

inline void check_word(const IfsSpec& ifs, const Word& word) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 1 || word[i] > ifs.size()) {
      throw InputError("letter " + std::to_string(word[i]) + " at position " + std::to_string(i + 1) +
                       " is outside 1.." + std::to_string(ifs.size()));
    }
  }
}

/// tau_{i_1} o ... o tau_{i_n}; offset = sum_j ratio^(j-1) * b_{i_j}.
inline AffineMap compose_word(const IfsSpec& ifs, const Word& word) {
  check_word(ifs, word);
  AffineMap map;
  for (int letter : word) {
    map.offset += map.scale * ifs.digit(letter);
    map.scale *= ifs.ratio();
    ++map.power;
  }
  return map;
}

inline Rational word_weight(const IfsSpec& ifs, const Word& word) {
  check_word(ifs, word);
  Rational w(1);
  for (int letter : word) w *= ifs.weight(letter);
  return w;
}

/// The unique x with map(x) = x.
inline Rational fixed_point(const AffineMap& map) {
  return map.offset / (Rational(1) - map.scale);
}

inline Rational fixed_point(const AffineMap& map, const IfsSpec& ifs) {
  const Rational scale = pow(ifs.ratio(), static_cast<unsigned>(map.power));
  return map.offset / (Rational(1) - scale);
}

namespace detail {

// Visits every word of length `depth` in lexicographic order together with
// its exact offset and weight, accumulated prefix by prefix.
template <class Visitor>
void for_each_word(const IfsSpec& ifs, int depth, Visitor&& visit) {
  const int n = ifs.size();
  Word word(static_cast<std::size_t>(depth), 1);
  std::vector<Rational> offsets(static_cast<std::size_t>(depth) + 1, Rational(0));
  std::vector<Rational> weights(static_cast<std::size_t>(depth) + 1, Rational(1));
  std::vector<Rational> scales(static_cast<std::size_t>(depth) + 1, Rational(1));
  for (int j = 1; j <= depth; ++j) scales[static_cast<std::size_t>(j)] = scales[static_cast<std::size_t>(j - 1)] * ifs.ratio();
  auto fill_from = [&](int pos) {
    for (int j = pos; j < depth; ++j) {
      const auto u = static_cast<std::size_t>(j);
      offsets[u + 1] = offsets[u] + scales[u] * ifs.digit(word[u]);
      weights[u + 1] = weights[u] * ifs.weight(word[u]);
    }
  };
  if (depth == 0) {
    visit(word, offsets[0], weights[0]);
    return;
  }
  fill_from(0);
  while (true) {
    visit(word, offsets.back(), weights.back());
    int pos = depth - 1;
    while (pos >= 0 && word[static_cast<std::size_t>(pos)] == n) {
      word[static_cast<std::size_t>(pos)] = 1;
      --pos;
    }
    if (pos < 0) return;
    ++word[static_cast<std::size_t>(pos)];
    fill_from(pos);
  }
}

}  // namespace detail

/// One class of A_k: a distinct composed map, its merged weight and the
/// words that realize it (in lexicographic order).
struct EquivClass {
  AffineMap map;
  Rational weight;
  std::vector<Word> words;
};

/// Classes are ordered by their lexicographically first word.
struct EquivClassTable {
  int depth = 0;
  std::vector<EquivClass> classes;

  Rational total_weight() const {
    Rational t(0);
    for (const auto& c : classes) t += c.weight;
    return t;
  }

  /// Index of the class containing `word`, if any.
  std::optional<std::size_t> find(const Word& word) const {
    for (std::size_t i = 0; i < classes.size(); ++i) {
      for (const auto& w : classes[i].words) {
        if (w == word) return i;
      }
    }
    return std::nullopt;
  }
};

inline EquivClassTable equivalence_classes(const IfsSpec& ifs, int depth, const Config& cfg = {}) {
  if (depth < 1) throw InputError("equivalence classes need depth >= 1");
  detail::require_enumerable(static_cast<std::uint64_t>(ifs.size()), depth, cfg, "equivalence_classes");
  EquivClassTable table;
  table.depth = depth;
  const Rational scale = pow(ifs.ratio(), static_cast<unsigned>(depth));
  std::map<Rational, std::size_t> by_offset;
  detail::for_each_word(ifs, depth, [&](const Word& w, const Rational& offset, const Rational& weight) {
    auto [it, inserted] = by_offset.try_emplace(offset, table.classes.size());
    if (inserted) {
      table.classes.push_back({AffineMap{depth, offset, scale}, weight, {w}});
    } else {
      auto& cls = table.classes[it->second];
      cls.weight += weight;
      cls.words.push_back(w);
    }
  });
  return table;
}

struct CylinderCell {
  Interval interval;
  Rational measure;
  Word word;
};

/// Depth-n cover of the attractor by images of its hull, sorted by lower
/// endpoint (ties by word).
struct CylinderCover {
  int depth = 0;
  std::vector<CylinderCell> cells;

  Rational total_measure() const {
    Rational t(0);
    for (const auto& c : cells) t += c.measure;
    return t;
  }

  std::vector<Interval> components() const {
    std::vector<Interval> parts;
    parts.reserve(cells.size());
    for (const auto& c : cells) parts.push_back(c.interval);
    return merge_union(std::move(parts));
  }
};

inline CylinderCover cylinder_cover(const IfsSpec& ifs, int depth, const Config& cfg = {}) {
  if (depth < 0) throw InputError("cover depth must be non-negative");
  detail::require_enumerable(static_cast<std::uint64_t>(ifs.size()), depth, cfg, "cylinder_cover");
  CylinderCover cover;
  cover.depth = depth;
  const Interval h = ifs.hull();
  const Rational scale = pow(ifs.ratio(), static_cast<unsigned>(depth));
  detail::for_each_word(ifs, depth, [&](const Word& w, const Rational& offset, const Rational& weight) {
    cover.cells.push_back({affine_image(h, scale, offset), weight, w});
  });
  std::stable_sort(cover.cells.begin(), cover.cells.end(),
                   [](const CylinderCell& a, const CylinderCell& b) { return a.interval.lo < b.interval.lo; });
  return cover;
}

/// Components of the depth-n cover, built level by level as the merged
/// union of tau_b(previous level). Same set as cylinder_cover(...).components()
/// but only as costly as the component count, not N^n.
inline std::vector<Interval> cover_union(const IfsSpec& ifs, int depth, const Config& cfg = {}) {
  if (depth < 0) throw InputError("cover depth must be non-negative");
  std::vector<Interval> comps{ifs.hull()};
  for (int level = 0; level < depth; ++level) {
    if (comps.size() * ifs.size() > cfg.enumeration_cap) {
      throw ResourceError("cover_union: " + std::to_string(comps.size() * ifs.size()) + " intervals at depth " +
                          std::to_string(level + 1) + " exceed the enumeration cap of " +
                          std::to_string(cfg.enumeration_cap));
    }
    std::vector<Interval> next;
    next.reserve(comps.size() * ifs.size());
    for (const auto& b : ifs.digits()) {
      for (const auto& c : comps) next.push_back(affine_image(c, ifs.ratio(), b));
    }
    comps = merge_union(std::move(next));
  }
  return comps;
}

/// True when the depth-1 images of the hull cover the hull without gaps;
/// then the hull is invariant and X equals the hull exactly.
inline bool attractor_is_interval(const IfsSpec& ifs) {
  const Interval h = ifs.hull();
  std::vector<Interval> parts;
  for (const auto& b : ifs.digits()) parts.push_back(affine_image(h, ifs.ratio(), b));
  const auto comps = merge_union(std::move(parts));
  return comps.size() == 1 && comps.front() == h;
}

enum class OverlapStatus { NoOverlap, OverlapWitness, Inconclusive };

inline const char* to_string(OverlapStatus s) {
  switch (s) {
    case OverlapStatus::NoOverlap: return "NoOverlap";
    case OverlapStatus::OverlapWitness: return "OverlapWitness";
    case OverlapStatus::Inconclusive: return "Inconclusive";
  }
  return "?";
}

/// Two depth-n cells from distinct first letters whose interiors meet.
struct OverlapCandidate {
  int letter_a = 0;
  int letter_b = 0;
  Word word_a;
  Word word_b;
  Interval intersection;
};

struct OverlapReport {
  OverlapStatus status = OverlapStatus::Inconclusive;
  int depth = 0;
  // One candidate per overlapping pair of first letters, ordered by pair.
  std::vector<OverlapCandidate> candidates;
  std::string basis;

  bool has_pair(int a, int b) const {
    return std::any_of(candidates.begin(), candidates.end(), [&](const OverlapCandidate& c) {
      return (c.letter_a == a && c.letter_b == b) || (c.letter_a == b && c.letter_b == a);
    });
  }
};

/// One-sided overlap test.
///
/// NoOverlap is exact: the depth-1 hull images (or the depth-n covers of the
/// first-letter branches) meet in finitely many points, which carry no mass
/// for a non-atomic invariant measure. OverlapWitness lists positive-length
/// intersections of depth-n cells from distinct branches; all weights are
/// positive so both branches charge the cells, but the cover over-approximates
/// X, hence these are candidates only. Inconclusive when N^n exceeds the cap.
inline OverlapReport no_overlap_check(const IfsSpec& ifs, int depth, const Config& cfg = {}) {
  if (depth < 1) throw InputError("overlap check needs depth >= 1");
  OverlapReport report;
  report.depth = depth;
  const Interval h = ifs.hull();
  bool hull_overlap = false;
  for (int i = 1; i <= ifs.size() && !hull_overlap; ++i) {
    for (int j = i + 1; j <= ifs.size(); ++j) {
      if (interior_overlap(affine_image(h, ifs.ratio(), ifs.digit(i)),
                           affine_image(h, ifs.ratio(), ifs.digit(j)))) {
        hull_overlap = true;
        break;
      }
    }
  }
  if (!hull_overlap) {
    report.status = OverlapStatus::NoOverlap;
    report.depth = 1;
    report.basis = "depth-1 hull images meet in at most single points";
    return report;
  }
  if (detail::bounded_power(static_cast<std::uint64_t>(ifs.size()), depth, cfg.enumeration_cap) >
      cfg.enumeration_cap) {
    report.status = OverlapStatus::Inconclusive;
    report.basis = "depth-" + std::to_string(depth) + " cover exceeds the enumeration cap";
    return report;
  }
  const CylinderCover cover = cylinder_cover(ifs, depth, cfg);
  std::map<std::pair<int, int>, OverlapCandidate> found;
  const auto& cells = cover.cells;
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      if (!(cells[b].interval.lo < cells[a].interval.hi)) break;
      const int la = cells[a].word.front();
      const int lb = cells[b].word.front();
      if (la == lb) continue;
      auto key = std::minmax(la, lb);
      if (found.count(key) != 0) continue;
      if (auto r = interior_overlap(cells[a].interval, cells[b].interval)) {
        const bool a_first = la < lb;
        found.emplace(key, OverlapCandidate{key.first, key.second, a_first ? cells[a].word : cells[b].word,
                                            a_first ? cells[b].word : cells[a].word, *r});
      }
    }
  }
  if (found.empty()) {
    report.status = OverlapStatus::NoOverlap;
    report.basis = "depth-" + std::to_string(depth) + " branch covers meet in at most single points";
    return report;
  }
  report.status = OverlapStatus::OverlapWitness;
  report.basis = "positive-length intersection of depth-" + std::to_string(depth) +
                 " cylinder covers from distinct branches (candidate overlap)";
  for (auto& [key, c] : found) report.candidates.push_back(std::move(c));
  return report;
}

enum class FixedPointStatus { Holds, Fails, Unknown };

inline const char* to_string(FixedPointStatus s) {
  switch (s) {
    case FixedPointStatus::Holds: return "Holds";
    case FixedPointStatus::Fails: return "Fails";
    case FixedPointStatus::Unknown: return "Unknown";
  }
  return "?";
}

/// A cover component of another class image, with the class it belongs to.
struct ClassInterval {
  std::size_t class_index = 0;
  Interval interval;
};

struct ClassFixedPoint {
  Rational fixed_point;
  FixedPointStatus status = FixedPointStatus::Unknown;
  // Nearest excluded pieces of the other class images on either side.
  std::optional<ClassInterval> nearest_left;
  std::optional<ClassInterval> nearest_right;
  // For Fails/Unknown: a covering piece of another class image.
  std::optional<ClassInterval> blocking;
};

struct FixedPointReport {
  int depth = 0;
  int refine = 0;
  bool attractor_is_interval = false;
  EquivClassTable table;
  std::vector<ClassFixedPoint> per_class;  // parallel to table.classes
  FixedPointStatus overall = FixedPointStatus::Unknown;
  // Preferred Holds class: the first whose weight differs from ratio^depth,
  // otherwise the first Holds class.
  std::optional<std::size_t> witness;
};

/// Fixed point condition at depth k with the other class images
/// over-approximated through the depth-m cylinder cover of X.
///
/// Holds is sound: x_tau lies outside every cover piece of every other
/// class. When the attractor is certified to be its hull the cover is exact
/// and membership yields Fails; otherwise membership yields Unknown.
inline FixedPointReport fixed_point_condition(const IfsSpec& ifs, int depth, int refine,
                                              const Config& cfg = {}) {
  if (refine < 0) throw InputError("cover refinement must be non-negative");
  FixedPointReport report;
  report.depth = depth;
  report.refine = refine;
  report.table = equivalence_classes(ifs, depth, cfg);
  report.attractor_is_interval = attractor_is_interval(ifs);
  const std::vector<Interval> shape = report.attractor_is_interval
                                          ? std::vector<Interval>{ifs.hull()}
                                          : cylinder_cover(ifs, refine, cfg).components();
  const auto& classes = report.table.classes;
  const Rational scale = pow(ifs.ratio(), static_cast<unsigned>(depth));
  const Rational shape_lo = shape.front().lo;
  const Rational shape_hi = shape.back().hi;

  std::vector<std::size_t> by_offset(classes.size());
  for (std::size_t i = 0; i < by_offset.size(); ++i) by_offset[i] = i;
  std::sort(by_offset.begin(), by_offset.end(), [&](std::size_t a, std::size_t b) {
    return classes[a].map.offset < classes[b].map.offset;
  });
  auto offset_at = [&](std::size_t pos) -> const Rational& { return classes[by_offset[pos]].map.offset; };

  report.per_class.resize(classes.size());
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    ClassFixedPoint& out = report.per_class[ci];
    const Rational x = fixed_point(classes[ci].map);
    out.fixed_point = x;
    // Images offset + scale*[shape_lo, shape_hi] reach x only for offsets
    // in [x - scale*shape_hi, x - scale*shape_lo].
    const Rational reach_lo = x - scale * shape_hi;
    const Rational reach_hi = x - scale * shape_lo;
    const auto first = static_cast<std::size_t>(
        std::lower_bound(by_offset.begin(), by_offset.end(), reach_lo,
                         [&](std::size_t idx, const Rational& v) { return classes[idx].map.offset < v; }) -
        by_offset.begin());
    std::size_t last = first;
    while (last < by_offset.size() && offset_at(last) <= reach_hi) ++last;

    auto consider = [&](std::size_t other) {
      if (other == ci) return;
      for (const auto& piece : shape) {
        const Interval img = affine_image(piece, scale, classes[other].map.offset);
        if (img.contains(x)) {
          if (!out.blocking) out.blocking = ClassInterval{other, img};
        } else if (img.hi < x) {
          if (!out.nearest_left || out.nearest_left->interval.hi < img.hi) out.nearest_left = ClassInterval{other, img};
        } else if (!out.nearest_right || img.lo < out.nearest_right->interval.lo) {
          out.nearest_right = ClassInterval{other, img};
        }
      }
    };
    for (std::size_t pos = first; pos < last; ++pos) consider(by_offset[pos]);
    // Nearest images lying entirely on one side of x.
    for (std::size_t pos = first; pos-- > 0;) {
      if (by_offset[pos] != ci) {
        consider(by_offset[pos]);
        break;
      }
    }
    for (std::size_t pos = last; pos < by_offset.size(); ++pos) {
      if (by_offset[pos] != ci) {
        consider(by_offset[pos]);
        break;
      }
    }
    if (!out.blocking) {
      out.status = FixedPointStatus::Holds;
    } else {
      out.status = report.attractor_is_interval ? FixedPointStatus::Fails : FixedPointStatus::Unknown;
    }
  }

  bool any_unknown = false;
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const auto s = report.per_class[ci].status;
    if (s == FixedPointStatus::Unknown) any_unknown = true;
    if (s != FixedPointStatus::Holds) continue;
    if (!report.witness) report.witness = ci;
    if (classes[ci].weight != scale) {
      const auto current = *report.witness;
      if (classes[current].weight == scale) report.witness = ci;
      break;
    }
  }
  if (report.witness) {
    report.overall = FixedPointStatus::Holds;
  } else {
    report.overall = any_unknown ? FixedPointStatus::Unknown : FixedPointStatus::Fails;
  }
  return report;
}

}  // namespace ssframe
