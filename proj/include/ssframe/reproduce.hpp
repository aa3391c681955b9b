#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ssframe/report.hpp"

namespace ssframe {

struct ReproRow {
  std::string quantity;
  std::string expected;
  std::string observed;
  bool pass = false;
};

struct ReproResult {
  std::string id;
  std::string description;
  std::vector<ReproRow> rows;
  json report;

  bool all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const ReproRow& r) { return r.pass; });
  }
};

inline json to_json(const ReproResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"quantity", row.quantity}, {"expected", row.expected}, {"observed", row.observed}, {"pass", row.pass}});
  }
  return {{"id", r.id}, {"description", r.description}, {"rows", rows}, {"all_pass", r.all_pass()}, {"report", r.report}};
}

inline IfsSpec example_eq44() {
  auto q = [](const char* s) { return Rational::parse(s); };
  return IfsSpec(q("1/3"), {q("0"), q("4/21"), q("10/21"), q("2/3")}, {q("1/3"), q("1/6"), q("1/6"), q("1/3")});
}

inline IfsSpec example_bernoulli_biased() {
  return IfsSpec(Rational(1) / Rational(3), {Rational(0), Rational(2) / Rational(3)},
                 {Rational(1) / Rational(3), Rational(2) / Rational(3)});
}

namespace detail {

inline ReproRow row(std::string q, std::string expected, std::string observed) {
  const bool pass = expected == observed;
  return {std::move(q), std::move(expected), std::move(observed), pass};
}

inline ReproRow row_if(std::string q, std::string expected, std::string observed, bool pass) {
  return {std::move(q), std::move(expected), std::move(observed), pass};
}

inline std::string interval_str(const Interval& i) { return "[" + i.lo.str() + ", " + i.hi.str() + "]"; }

inline ReproResult repro_eq44(const Config& cfg) {
  ReproResult r{"eq4.4", "16-map iterate of a 4-map IFS with overlap; fixed point obstruction", {}, {}};
  const IfsSpec ifs = example_eq44();
  const AffineMap t23 = compose_word(ifs, {2, 3});
  r.rows.push_back(row("offset of tau_23", "22/63", t23.offset.str()));
  r.rows.push_back(row("x_23", "11/28", fixed_point(t23, ifs).str()));
  const auto table = equivalence_classes(ifs, 2, cfg);
  const auto singles = std::count_if(table.classes.begin(), table.classes.end(),
                                     [](const EquivClass& c) { return c.words.size() == 1; });
  r.rows.push_back(row("|A_2|", "16", std::to_string(table.classes.size())));
  r.rows.push_back(row("singleton classes", "16", std::to_string(singles)));
  const auto fp = fixed_point_condition(ifs, 2, 1, cfg);
  const auto idx = table.find({2, 3});
  const auto& c23 = fp.per_class[*idx];
  r.rows.push_back(row("fixed point condition for tau_23", "Holds", to_string(c23.status)));
  r.rows.push_back(row("excluded interval tau_22(X)", "[16/63, 23/63]",
                       c23.nearest_left ? interval_str(c23.nearest_left->interval) : "none"));
  // tau_24(X) = 26/63 + [0,1]/9, so the right end is 33/63, not 31/63.
  r.rows.push_back(row("excluded interval tau_24(X)", "[26/63, 11/21]",
                       c23.nearest_right ? interval_str(c23.nearest_right->interval) : "none"));
  const auto v = verdict_fixed_point(ifs, 2, 1, true, cfg);
  std::string mism = "none";
  if (v) {
    for (const auto& m : std::get<FixedPointWitness>(v->witness).mismatches) {
      if (m.first_word == Word{2, 3}) mism = m.weight.str() + " vs " + m.expected.str();
    }
  }
  r.rows.push_back(row("p_2 p_3 vs ratio^2", "1/36 vs 1/9", mism));
  const auto ac = ac_mask_zero_check(ifs, 100, 10, cfg);
  bool valuation_rule = ac.certified;
  for (const auto& z : ac.zeros) valuation_rule = valuation_rule && z.k == valuation(z.n, 3) + 1;
  r.rows.push_back(row_if("mask zeros, 1 <= |n| <= 100", "k = v_3(n) + 1", ac.wording, valuation_rule));
  AnalyzeOptions opt;
  r.report = run_analyze(ifs, opt, cfg);
  return r;
}

inline ReproResult repro_bernoulli(const Config& cfg) {
  ReproResult r{"bernoulli-biased", "ratio 1/3, weights (1/3, 2/3): no overlap with unequal weights", {}, {}};
  const IfsSpec ifs = example_bernoulli_biased();
  const auto v = verdict_no_overlap_unequal(ifs, cfg);
  r.rows.push_back(row("verdict", "UnequalWeightsNoOverlap", v ? to_string(v->kind) : "none"));
  r.rows.push_back(row("translation ratio, n = 3", "8", translation_ratio(ifs, 1, 2, 3, cfg).ratio.str()));
  const auto cover = cylinder_cover(ifs, 3, cfg);
  Rational m111(0);
  Rational m222(0);
  for (const auto& c : cover.cells) {
    if (c.word == Word{1, 1, 1}) m111 = c.measure;
    if (c.word == Word{2, 2, 2}) m222 = c.measure;
  }
  r.rows.push_back(row("mu(tau_2^3 X) / mu(tau_1^3 X)", "8/27 / 1/27", m222.str() + " / " + m111.str()));
  r.report = run_analyze(ifs, AnalyzeOptions{}, cfg);
  return r;
}

inline ReproResult repro_tiling(const Config& cfg) {
  ReproResult r{"digits-0257-tiling", "integer tiling of the rescaled digit set {0,2,5,7}", {}, {}};
  const auto ig = integerize_digits(example_eq44());
  r.rows.push_back(row("integerized digits", "0,2,5,7", digits_str(ig.digits.elements())));
  const auto t = tiles_Z(ig.digits, std::nullopt, cfg);
  r.rows.push_back(row("period", "4", t.witness ? std::to_string(t.witness->period) : "none"));
  r.rows.push_back(row_if("witness verified", "true", t.witness ? "true" : "false",
                          t.witness && verify_tiling_witness(ig.digits, *t.witness)));
  const auto t013 = tiles_Z(DigitSet({0, 1, 3}), std::nullopt, cfg);
  r.rows.push_back(row_if("{0,1,3}", "NoTiling, bound >= 8",
                          std::string(t013.witness ? "Tiles" : "NoTiling") + ", bound " + std::to_string(t013.search_bound),
                          !t013.witness && t013.search_bound >= 8));
  r.report = make_report("tiles-z", {{"digits", ig.digits.elements()}}, to_json(t), cfg);
  return r;
}

inline ReproResult repro_cantor_diff(const Config& cfg) {
  ReproResult r{"cantor-diff", "base-10 Cantor sets with digits {0,1} and {0,2}: (C-C) and (D-D) meet only at 0", {}, {}};
  DifferenceCover prev;
  bool nested = true;
  for (int n = 1; n <= 3; ++n) {
    auto d = cantor_difference_cover({0, 1}, {0, 2}, 10, n, cfg);
    if (n > 1) {
      for (const auto& piece : d.intersection) {
        nested = nested && std::any_of(prev.intersection.begin(), prev.intersection.end(),
                                       [&](const Interval& p) { return p.contains(piece); });
      }
    }
    prev = std::move(d);
  }
  const Interval bound{Rational(-1) / Rational(300), Rational(1) / Rational(300)};
  bool within = !prev.intersection.empty();
  bool has_zero = false;
  std::string observed;
  for (const auto& i : prev.intersection) {
    within = within && bound.contains(i);
    has_zero = has_zero || i.contains(Rational(0));
    observed += interval_str(i);
  }
  r.rows.push_back(row_if("depth-3 intersection within [-1/300, 1/300]", "true", observed, within));
  r.rows.push_back(row_if("contains 0", "true", has_zero ? "true" : "false", has_zero));
  r.rows.push_back(row_if("nested for depths 1 to 3", "true", nested ? "true" : "false", nested));
  r.report = make_report("diff-cover", {{"c", {0, 1}}, {"d", {0, 2}}, {"base", 10}, {"depth", 3}}, to_json(prev), cfg);
  return r;
}

inline ReproResult repro_gabor(const Config& cfg) {
  ReproResult r{"gabor-unit", "chi_[0,1] with Lambda = -10..10 and J = -5..5", {}, {}};
  std::vector<Rational> lambda;
  std::vector<Rational> shifts;
  for (int k = -10; k <= 10; ++k) lambda.emplace_back(k);
  for (int k = -5; k <= 5; ++k) shifts.emplace_back(k);
  const GaborSystemSpec spec(WindowFunction::indicator(0, 1), lambda, shifts);
  std::vector<double> grid;
  for (int i = 0; i < 64; ++i) grid.push_back((i + 0.5) / 64.0);
  const auto v = gabor_onb_verdict(spec, {Rational(-5), Rational(6)}, grid, cfg);
  for (const auto& c : v.checks) r.rows.push_back(row_if(c.name, "pass", c.detail, c.pass));
  r.report = make_report("gabor", {{"window", to_json(spec.window)}, {"lambdas", "-10:10"}, {"trans", "-5:5"}, {"box", "-5:6"}},
                         to_json(v), cfg);
  return r;
}

inline ReproResult repro_lebesgue_step(const Config& cfg) {
  ReproResult r{"lebesgue-step", "frame bounds for g = 1 on [0,1/2], 2 on (1/2,1], and for g = 1", {}, {}};
  const StepMeasure mu({Rational(0), Rational(1) / Rational(2), Rational(1)}, {Rational(1), Rational(2)});
  const auto gap = theorem13_gap_check(mu, symmetric_range(20), 6, cfg);
  const auto& e = gap.estimate;
  r.rows.push_back(row_if("lower", "in [0.95, 1.0]", format_double(e.lower), e.lower >= 0.95 && e.lower <= 1.0 + 1e-9));
  r.rows.push_back(row_if("upper", "in [1.9, 2.0]", format_double(e.upper), e.upper >= 1.9 && e.upper <= 2.0 + 1e-9));
  r.rows.push_back(row_if("upper / lower", "in [1.8, 2.0]", format_double(gap.estimate_ratio),
                          gap.estimate_ratio >= 1.8 && gap.estimate_ratio <= 2.0 + 1e-6));
  r.rows.push_back(row("esssup / essinf", "2", gap.density_ratio.str()));
  const StepMeasure flat({Rational(0), Rational(1)}, {Rational(1)});
  const auto flat_gap = theorem13_gap_check(flat, symmetric_range(20), 6, cfg);
  r.rows.push_back(row_if("g = 1: upper / lower", "<= 1.1", format_double(flat_gap.estimate_ratio),
                          flat_gap.estimate_ratio <= 1.1));
  r.report = make_report("frame-bounds", {{"measure", to_json(mu)}, {"lambda_range", 20}, {"depth", 6}}, to_json(gap), cfg);
  return r;
}

}  // namespace detail

inline std::vector<std::string> gallery_ids() {
  return {"eq4.4", "bernoulli-biased", "digits-0257-tiling", "cantor-diff", "gabor-unit", "lebesgue-step"};
}

inline ReproResult run_reproduce(const std::string& id, const Config& cfg = {}) {
  if (id == "eq4.4") return detail::repro_eq44(cfg);
  if (id == "bernoulli-biased") return detail::repro_bernoulli(cfg);
  if (id == "digits-0257-tiling") return detail::repro_tiling(cfg);
  if (id == "cantor-diff") return detail::repro_cantor_diff(cfg);
  if (id == "gabor-unit") return detail::repro_gabor(cfg);
  if (id == "lebesgue-step") return detail::repro_lebesgue_step(cfg);
  std::string known;
  for (const auto& g : gallery_ids()) known += (known.empty() ? "" : ", ") + g;
  throw InputError("unknown example id '" + id + "' (known: " + known + ")");
}

inline std::string render_table(const ReproResult& r) {
  std::size_t wq = 8;
  std::size_t we = 8;
  for (const auto& row : r.rows) {
    wq = std::max(wq, row.quantity.size());
    we = std::max(we, row.expected.size());
  }
  std::string out = r.id + ": " + r.description + "\n";
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w > s.size() ? w - s.size() : 0, ' '); };
  out += pad("quantity", wq) + "  " + pad("expected", we) + "  observed  [status]\n";
  for (const auto& row : r.rows) {
    out += pad(row.quantity, wq) + "  " + pad(row.expected, we) + "  " + row.observed + "  [" +
           (row.pass ? "PASS" : "FAIL") + "]\n";
  }
  return out;
}

}  // namespace ssframe
