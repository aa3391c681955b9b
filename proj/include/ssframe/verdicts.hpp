#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ssframe/config.hpp"
#include "ssframe/frame.hpp"
#include "ssframe/ifs.hpp"
#include "ssframe/rational.hpp"
#include "ssframe/tiling.hpp"

namespace ssframe {

/// p_c^n / p_b^n together with the translation a taking F = tau_b^n(hull)
/// onto tau_c^n(hull).
struct TranslationRatio {
  int b = 0;
  int c = 0;
  int n = 0;
  Rational ratio;
  Interval f;
  Rational a;
};

/// Refuses (InputError) unless the IFS is certified to have no overlap,
/// since the constancy of the derivative needs it.
inline TranslationRatio translation_ratio(const IfsSpec& ifs, int b, int c, int n, const Config& cfg = {}) {
  if (b == c) throw InputError("translation ratio needs two distinct digits");
  if (n < 1) throw InputError("translation ratio needs n >= 1");
  check_word(ifs, {b, c});
  const auto overlap = no_overlap_check(ifs, cfg.overlap_depth, cfg);
  if (overlap.status != OverlapStatus::NoOverlap) {
    throw InputError(std::string("translation ratio needs a no-overlap IFS; overlap check returned ") +
                     to_string(overlap.status) + " (" + overlap.basis + ")");
  }
  const Word wb(static_cast<std::size_t>(n), b);
  const Word wc(static_cast<std::size_t>(n), c);
  const AffineMap tb = compose_word(ifs, wb);
  const AffineMap tc = compose_word(ifs, wc);
  TranslationRatio out;
  out.b = b;
  out.c = c;
  out.n = n;
  out.ratio = pow(ifs.weight(c) / ifs.weight(b), static_cast<unsigned>(n));
  out.f = tb.apply(ifs.hull());
  out.a = tc.offset - tb.offset;
  return out;
}

enum class VerdictKind { TranslationRatio, UnequalWeightsNoOverlap, FixedPointWeightMismatch, BoundaryWeights, TightFrameDensity };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::TranslationRatio: return "TranslationRatio";
    case VerdictKind::UnequalWeightsNoOverlap: return "UnequalWeightsNoOverlap";
    case VerdictKind::FixedPointWeightMismatch: return "FixedPointWeightMismatch";
    case VerdictKind::BoundaryWeights: return "BoundaryWeights";
    case VerdictKind::TightFrameDensity: return "TightFrameDensity";
  }
  return "?";
}

/// The ratios (p_max/p_min)^n grow without bound.
struct UnequalWeightsWitness {
  TranslationRatio sample;  // n = 1
  Rational base;            // p_max / p_min
  std::string overlap_basis;
};

struct WeightMismatch {
  std::size_t class_index = 0;
  Word first_word;
  Rational weight;     // p_tau
  Rational expected;   // ratio^k
};

struct FixedPointWitness {
  int k = 0;
  int refine = 0;
  std::size_t class_index = 0;
  Word first_word;
  std::vector<Word> words;
  Rational fixed_point;
  Rational weight;
  Rational expected;
  std::optional<ClassInterval> nearest_left;
  std::optional<ClassInterval> nearest_right;
  std::vector<Word> nearest_words;  // first words of the two neighbours
  // Every Holds class with p_tau != ratio^k, in class order.
  std::vector<WeightMismatch> mismatches;
  // Classes with p_tau > ratio^k, which contradict the upper bound directly.
  std::vector<WeightMismatch> upper_bound_violations;
  // The witness word is a singleton class containing every letter: all
  // weights are then forced to equal the ratio and ratio = 1/N.
  bool all_digits_forcing = false;
  bool weights_equal_ratio = false;
  bool ratio_is_one_over_n = false;
};

struct BoundaryWitness {
  Normalization normalization;
  bool lebesgue = false;
  std::vector<std::string> violations;  // e.g. "p_1 = 1/2 != 2/3 = ratio"
};

struct DensityWitness {
  Rational esssup;
  Rational essinf;
  double estimate_ratio = 0.0;
};

using VerdictWitness = std::variant<UnequalWeightsWitness, FixedPointWitness, BoundaryWitness, DensityWitness, TranslationRatio>;

struct ObstructionVerdict {
  VerdictKind kind = VerdictKind::UnequalWeightsNoOverlap;
  std::string conclusion;
  // Whether the hypotheses of the underlying theorem were asserted by the
  // caller (absolute continuity etc.); otherwise the conclusion is conditional.
  bool hypotheses_asserted = true;
  VerdictWitness witness;
};

inline std::optional<ObstructionVerdict> verdict_no_overlap_unequal(const IfsSpec& ifs, const Config& cfg = {}) {
  if (ifs.uniform_weights()) return std::nullopt;
  const auto overlap = no_overlap_check(ifs, cfg.overlap_depth, cfg);
  if (overlap.status != OverlapStatus::NoOverlap) return std::nullopt;
  const auto& w = ifs.weights();
  const auto lo = static_cast<int>(std::min_element(w.begin(), w.end()) - w.begin()) + 1;
  const auto hi = static_cast<int>(std::max_element(w.begin(), w.end()) - w.begin()) + 1;
  UnequalWeightsWitness witness{translation_ratio(ifs, lo, hi, 1, cfg), ifs.weight(hi) / ifs.weight(lo), overlap.basis};
  ObstructionVerdict v;
  v.kind = VerdictKind::UnequalWeightsNoOverlap;
  v.conclusion = "no frame measure: the IFS has no overlap but the weights are unequal; translation ratios (" +
                 witness.base.str() + ")^n are unbounded";
  v.witness = std::move(witness);
  return v;
}

inline std::optional<ObstructionVerdict> verdict_fixed_point(const IfsSpec& ifs, int k, int refine, bool assume_ac,
                                                             const Config& cfg = {}) {
  const FixedPointReport fp = fixed_point_condition(ifs, k, refine, cfg);
  const Rational expected = pow(ifs.ratio(), static_cast<unsigned>(k));
  const auto& classes = fp.table.classes;
  FixedPointWitness w;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    if (expected < c.weight) w.upper_bound_violations.push_back({i, c.words.front(), c.weight, expected});
    if (fp.per_class[i].status == FixedPointStatus::Holds && c.weight != expected) {
      w.mismatches.push_back({i, c.words.front(), c.weight, expected});
    }
  }
  if (w.mismatches.empty() && w.upper_bound_violations.empty()) return std::nullopt;
  std::size_t idx = 0;
  if (!w.mismatches.empty()) {
    idx = w.mismatches.front().class_index;
  } else if (fp.witness) {
    idx = *fp.witness;
  } else {
    idx = w.upper_bound_violations.front().class_index;
  }
  const auto& cls = classes[idx];
  const auto& pc = fp.per_class[idx];
  w.k = k;
  w.refine = refine;
  w.class_index = idx;
  w.first_word = cls.words.front();
  w.words = cls.words;
  w.fixed_point = pc.fixed_point;
  w.weight = cls.weight;
  w.expected = expected;
  w.nearest_left = pc.nearest_left;
  w.nearest_right = pc.nearest_right;
  if (pc.nearest_left) w.nearest_words.push_back(classes[pc.nearest_left->class_index].words.front());
  if (pc.nearest_right) w.nearest_words.push_back(classes[pc.nearest_right->class_index].words.front());

  const Word& word = cls.words.front();
  bool all_letters = cls.words.size() == 1 && pc.status == FixedPointStatus::Holds;
  for (int l = 1; l <= ifs.size() && all_letters; ++l) {
    all_letters = std::find(word.begin(), word.end(), l) != word.end();
  }
  w.all_digits_forcing = all_letters;
  w.weights_equal_ratio =
      std::all_of(ifs.weights().begin(), ifs.weights().end(), [&](const Rational& p) { return p == ifs.ratio(); });
  w.ratio_is_one_over_n = ifs.ratio() * Rational(ifs.size()) == Rational(1);

  ObstructionVerdict v;
  v.kind = VerdictKind::FixedPointWeightMismatch;
  v.hypotheses_asserted = assume_ac;
  std::string text;
  if (!w.mismatches.empty()) {
    text = "fixed point condition holds for tau_" + word_str(word) + " with p_tau = " + w.weight.str() +
           " != " + expected.str() + " = ratio^" + std::to_string(k);
  } else {
    const auto& u = w.upper_bound_violations.front();
    text = "p_tau = " + u.weight.str() + " > " + expected.str() + " = ratio^" + std::to_string(k) + " for tau_" +
           word_str(u.first_word);
  }
  if (w.all_digits_forcing && !(w.weights_equal_ratio && w.ratio_is_one_over_n)) {
    text += "; the witness word contains every digit, forcing all weights = ratio and ratio = 1/N";
  }
  v.conclusion = (assume_ac ? "no frame measure: " : "no frame measure if mu is absolutely continuous: ") + text;
  v.witness = std::move(w);
  return v;
}

enum class BoundaryHypothesis { None, HausdorffAc, LebesgueAc };

inline const char* to_string(BoundaryHypothesis h) {
  switch (h) {
    case BoundaryHypothesis::None: return "none";
    case BoundaryHypothesis::HausdorffAc: return "hausdorff-ac";
    case BoundaryHypothesis::LebesgueAc: return "lebesgue-ac";
  }
  return "?";
}

/// Boundary weights under absolute continuity: p_1 = p_N, and for
/// Lebesgue AC also p_j <= ratio and p_1 = p_N = ratio. The IFS is
/// normalized first; normalization leaves the weights unchanged.
inline std::optional<ObstructionVerdict> verdict_boundary_weights(const IfsSpec& ifs, BoundaryHypothesis hyp) {
  if (hyp == BoundaryHypothesis::None) return std::nullopt;
  BoundaryWitness w{normalize(ifs), hyp == BoundaryHypothesis::LebesgueAc, {}};
  const IfsSpec& s = w.normalization.spec;
  const Rational& p1 = s.weights().front();
  const Rational& pn = s.weights().back();
  const Rational& lam = s.ratio();
  const std::string last = std::to_string(s.size());
  if (p1 != pn) w.violations.push_back("p_1 = " + p1.str() + " != " + pn.str() + " = p_" + last);
  if (w.lebesgue) {
    if (p1 != lam) w.violations.push_back("p_1 = " + p1.str() + " != " + lam.str() + " = ratio");
    if (pn != lam) w.violations.push_back("p_" + last + " = " + pn.str() + " != " + lam.str() + " = ratio");
    for (int j = 1; j <= s.size(); ++j) {
      if (lam < s.weight(j)) {
        w.violations.push_back("p_" + std::to_string(j) + " = " + s.weight(j).str() + " > " + lam.str() + " = ratio");
      }
    }
  }
  if (w.violations.empty()) return std::nullopt;
  ObstructionVerdict v;
  v.kind = VerdictKind::BoundaryWeights;
  v.conclusion = "no frame measure under " + std::string(to_string(hyp)) + ": " + w.violations.front();
  v.witness = std::move(w);
  return v;
}

struct TightFrameConsequence {
  std::string name;
  bool holds = false;
  std::string detail;
};

struct TightFrameReport {
  std::vector<TightFrameConsequence> consequences;  // (i), (ii), (iii)
  std::optional<Integerization> digits;
  std::optional<TilingResult> tiling;
  bool consistent = false;
};

/// Consequences forced by absolute continuity plus a tight frame measure:
/// all weights equal the ratio, ratio = 1/N, and alpha*B tiles Z.
inline TightFrameReport verdict_tight_frame_structure(const IfsSpec& ifs, const Config& cfg = {}) {
  TightFrameReport out;
  const IfsSpec s = normalize(ifs).spec;
  const bool equal = std::all_of(s.weights().begin(), s.weights().end(), [&](const Rational& p) { return p == s.ratio(); });
  std::string unequal;
  for (int j = 1; j <= s.size() && !equal; ++j) {
    if (s.weight(j) != s.ratio()) {
      unequal = "p_" + std::to_string(j) + " = " + s.weight(j).str() + " != " + s.ratio().str();
      break;
    }
  }
  out.consequences.push_back({"(i) all weights equal the ratio", equal, equal ? "all p_j = " + s.ratio().str() : unequal});
  const bool one_over_n = s.ratio() * Rational(s.size()) == Rational(1);
  out.consequences.push_back(
      {"(ii) ratio = 1/N", one_over_n, "ratio = " + s.ratio().str() + ", N = " + std::to_string(s.size())});
  out.digits = integerize_digits(s);
  out.tiling = tiles_Z(out.digits->digits, std::nullopt, cfg);
  const bool tiles = out.tiling->witness.has_value();
  std::string detail = "D = {" + digits_str(out.digits->digits.elements()) + "}, alpha = " + out.digits->scale.str();
  if (tiles) {
    detail += ", period " + std::to_string(out.tiling->witness->period);
  } else {
    detail += ", " + out.tiling->basis;
  }
  out.consequences.push_back({"(iii) alpha*B is an integer set tiling Z", tiles, detail});
  out.consistent = equal && one_over_n && tiles;
  return out;
}

/// g is not a constant multiple of a characteristic function.
inline std::optional<ObstructionVerdict> verdict_tight_frame_density(const EssentialBounds& b, double estimate_ratio) {
  if (b.sup == b.inf) return std::nullopt;
  ObstructionVerdict v;
  v.kind = VerdictKind::TightFrameDensity;
  v.conclusion = "no tight frame measure: esssup g / essinf g = " + (b.sup / b.inf).str() + " > 1";
  v.witness = DensityWitness{b.sup, b.inf, estimate_ratio};
  return v;
}

}  // namespace ssframe
