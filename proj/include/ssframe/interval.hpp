#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ssframe/rational.hpp"

namespace ssframe {

/// Closed interval [lo, hi] with exact endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Image of an interval under x -> scale * x + offset (scale > 0).
inline Interval affine_image(const Interval& i, const Rational& scale, const Rational& offset) {
  return {scale * i.lo + offset, scale * i.hi + offset};
}

/// Closed intersection, possibly a single point.
inline std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  Interval r{max(a.lo, b.lo), min(a.hi, b.hi)};
  if (r.hi < r.lo) return std::nullopt;
  return r;
}

/// Intersection of positive length only (the interiors meet).
inline std::optional<Interval> interior_overlap(const Interval& a, const Interval& b) {
  auto r = intersect(a, b);
  if (!r || r->hi == r->lo) return std::nullopt;
  return r;
}

/// Sorted connected components of a union of closed intervals. Touching
/// intervals are merged.
inline std::vector<Interval> merge_union(std::vector<Interval> parts) {
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  for (auto& p : parts) {
    if (!out.empty() && p.lo <= out.back().hi) {
      if (out.back().hi < p.hi) out.back().hi = p.hi;
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

/// Intersection of two sorted component lists (as produced by merge_union).
inline std::vector<Interval> intersect_unions(const std::vector<Interval>& a,
                                              const std::vector<Interval>& b) {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (auto r = intersect(a[i], b[j])) out.push_back(*r);
    if (a[i].hi < b[j].hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

/// Subintervals of `box` of positive length not covered by `components`.
inline std::vector<Interval> uncovered_parts(const Interval& box,
                                             const std::vector<Interval>& components) {
  std::vector<Interval> gaps;
  Rational cursor = box.lo;
  for (const auto& c : components) {
    if (c.hi <= cursor) continue;
    if (box.hi <= c.lo) break;
    if (cursor < c.lo) gaps.push_back({cursor, c.lo});
    cursor = c.hi;
    if (box.hi <= cursor) break;
  }
  if (cursor < box.hi) gaps.push_back({cursor, box.hi});
  return gaps;
}

}  // namespace ssframe
