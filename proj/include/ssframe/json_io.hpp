#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ssframe/config.hpp"
#include "ssframe/fourier.hpp"
#include "ssframe/frame.hpp"
#include "ssframe/gabor.hpp"
#include "ssframe/ifs.hpp"
#include "ssframe/tiling.hpp"
#include "ssframe/verdicts.hpp"

namespace ssframe {

using nlohmann::json;

// ---- reading -------------------------------------------------------------

/// Parses text as JSON; syntax errors name the source, line and column.
inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
  }
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

namespace detail {

inline const json& field(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

inline Rational rational_field(const json& v, const std::string& where) {
  if (v.is_string()) {
    try {
      return Rational::parse(v.get<std::string>());
    } catch (const InputError& e) {
      throw InputError(where + ": " + e.what());
    }
  }
  if (v.is_number_integer()) return Rational(v.get<long long>());
  throw InputError(where + ": expected a rational string \"p/q\"");
}

inline std::vector<Rational> rational_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw InputError(where + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(rational_field(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::string with_source(const std::string& source, const char* what) { return source + ": " + what; }

}  // namespace detail

/// {"ratio": "p/q", "digits": [...], "weights": [...]}; weights default to
/// uniform when omitted. Digits need not be sorted.
inline IfsSpec ifs_from_json(const json& j, const std::string& source = "ifs") {
  const Rational ratio = detail::rational_field(detail::field(j, "ratio", source), source + ": field 'ratio'");
  const auto digits = detail::rational_list(detail::field(j, "digits", source), source + ": field 'digits'");
  try {
    if (!j.contains("weights")) return IfsSpec::uniform(ratio, digits);
    const auto weights = detail::rational_list(j.at("weights"), source + ": field 'weights'");
    if (weights.size() != digits.size()) {
      throw InputError("digits and weights differ in length (" + std::to_string(digits.size()) + " vs " +
                       std::to_string(weights.size()) + ")");
    }
    std::vector<std::pair<Rational, Rational>> pairs;
    for (std::size_t i = 0; i < digits.size(); ++i) pairs.emplace_back(digits[i], weights[i]);
    return IfsSpec::from_pairs(ratio, std::move(pairs));
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(source, 0) == 0) throw;
    throw InputError(detail::with_source(source, e.what()));
  }
}

/// {"breakpoints": [...], "densities": [...]}
inline StepMeasure step_measure_from_json(const json& j, const std::string& source = "measure") {
  const auto bp = detail::rational_list(detail::field(j, "breakpoints", source), source + ": field 'breakpoints'");
  const auto g = detail::rational_list(detail::field(j, "densities", source), source + ": field 'densities'");
  try {
    return StepMeasure(bp, g);
  } catch (const InputError& e) {
    throw InputError(detail::with_source(source, e.what()));
  }
}

/// {"pieces": [{"lo": "p/q", "hi": "p/q", "value": 1.0}, ...]}
inline WindowFunction window_from_json(const json& j, const std::string& source = "window") {
  const json& pieces = detail::field(j, "pieces", source);
  if (!pieces.is_array()) throw InputError(source + ": field 'pieces': expected an array");
  std::vector<WindowPiece> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string where = source + ": pieces[" + std::to_string(i) + "]";
    const Rational lo = detail::rational_field(detail::field(pieces[i], "lo", where), where + ".lo");
    const Rational hi = detail::rational_field(detail::field(pieces[i], "hi", where), where + ".hi");
    const json& v = detail::field(pieces[i], "value", where);
    if (!v.is_number()) throw InputError(where + ".value: expected a number");
    out.push_back({{lo, hi}, v.get<double>()});
  }
  try {
    return WindowFunction(std::move(out));
  } catch (const InputError& e) {
    throw InputError(detail::with_source(source, e.what()));
  }
}

/// Applies any known fields of a config object over `cfg`.
inline void apply_config_json(const json& j, Config& cfg, const std::string& source = "config") {
  if (!j.is_object()) throw InputError(source + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    const std::string where = source + ": field '" + k + "'";
    auto need_uint = [&]() {
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw InputError(where + ": expected a non-negative integer");
      }
      return v.get<std::uint64_t>();
    };
    auto need_double = [&]() {
      if (!v.is_number()) throw InputError(where + ": expected a number");
      return v.get<double>();
    };
    if (k == "enumeration_cap") cfg.enumeration_cap = need_uint();
    else if (k == "max_product_depth") cfg.max_product_depth = static_cast<int>(need_uint());
    else if (k == "zero_tolerance") cfg.zero_tolerance = need_double();
    else if (k == "identity_tolerance") cfg.identity_tolerance = need_double();
    else if (k == "period_cap") cfg.period_cap = need_uint();
    else if (k == "tiling_node_budget") cfg.tiling_node_budget = need_uint();
    else if (k == "boundary_tolerance") cfg.boundary_tolerance = need_double();
    else if (k == "frame_dimension_cap") cfg.frame_dimension_cap = need_uint();
    else if (k == "gabor_size_cap") cfg.gabor_size_cap = need_uint();
    else if (k == "overlap_depth") cfg.overlap_depth = static_cast<int>(need_uint());
    else if (k == "gram_tolerance") cfg.gram_tolerance = need_double();
    else if (k == "jp_threshold") cfg.jp_threshold = need_double();
    else if (k == "window_value_tolerance") cfg.window_value_tolerance = need_double();
    else if (k == "ratio_tolerance") cfg.ratio_tolerance = need_double();
    else throw InputError(source + ": unknown field '" + k + "'");
  }
}

// ---- list specs ----------------------------------------------------------

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline long long parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(what + ": \"" + s + "\" is not an integer");
  }
}

}  // namespace detail

/// "a:b" for the integers a..b, or a comma list of rationals.
inline std::vector<Rational> parse_rational_set(const std::string& spec, const std::string& what) {
  std::vector<Rational> out;
  if (spec.find(':') != std::string::npos) {
    const auto parts = detail::split(spec, ':');
    if (parts.size() != 2) throw InputError(what + ": range must be \"a:b\"");
    const long long a = detail::parse_int(parts[0], what);
    const long long b = detail::parse_int(parts[1], what);
    if (b < a) throw InputError(what + ": empty range " + spec);
    if (b - a > 1'000'000) throw InputError(what + ": range " + spec + " is too long");
    for (long long k = a; k <= b; ++k) out.emplace_back(k);
    return out;
  }
  for (const auto& item : detail::split(spec, ',')) {
    try {
      out.push_back(Rational::parse(item));
    } catch (const InputError& e) {
      throw InputError(what + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<std::int64_t> parse_int_list(const std::string& spec, const std::string& what) {
  std::vector<std::int64_t> out;
  for (const auto& item : detail::split(spec, ',')) out.push_back(detail::parse_int(item, what));
  return out;
}

/// "lo:hi:n" gives the n interior points lo + i (hi - lo)/(n + 1); a comma
/// list gives explicit points.
inline std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
  std::vector<double> out;
  const auto parts = detail::split(spec, ':');
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw InputError(what + ": \"" + s + "\" is not a number");
    }
  };
  if (parts.size() == 3) {
    const double lo = num(parts[0]);
    const double hi = num(parts[1]);
    const long long n = detail::parse_int(parts[2], what);
    if (n < 1) throw InputError(what + ": point count must be positive");
    for (long long i = 1; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n + 1));
    return out;
  }
  if (parts.size() != 1) throw InputError(what + ": expected \"lo:hi:n\" or a comma list");
  for (const auto& item : detail::split(spec, ',')) out.push_back(num(item));
  return out;
}

inline std::pair<std::int64_t, std::int64_t> parse_int_window(const std::string& spec, const std::string& what) {
  const auto parts = detail::split(spec, ':');
  if (parts.size() != 2) throw InputError(what + ": expected \"lo:hi\"");
  const auto lo = detail::parse_int(parts[0], what);
  const auto hi = detail::parse_int(parts[1], what);
  if (hi < lo) throw InputError(what + ": empty window " + spec);
  return {lo, hi};
}

inline Interval parse_box(const std::string& spec, const std::string& what) {
  const auto parts = detail::split(spec, ':');
  if (parts.size() != 2) throw InputError(what + ": expected \"lo:hi\"");
  Interval box{Rational::parse(parts[0]), Rational::parse(parts[1])};
  if (box.hi < box.lo) throw InputError(what + ": empty box " + spec);
  return box;
}

// ---- writing -------------------------------------------------------------

inline json to_json(const Rational& r) { return r.str(); }
inline json to_json(const Interval& i) { return {{"lo", i.lo.str()}, {"hi", i.hi.str()}}; }
inline json to_json(const Word& w) { return json(w); }
inline json to_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

template <class T>
json list_json(const std::vector<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline json to_json(const IfsSpec& ifs) {
  json d = json::array();
  json w = json::array();
  for (const auto& b : ifs.digits()) d.push_back(b.str());
  for (const auto& p : ifs.weights()) w.push_back(p.str());
  return {{"ratio", ifs.ratio().str()}, {"digits", d}, {"weights", w}};
}

inline json to_json(const Normalization& n) {
  return {{"spec", to_json(n.spec)}, {"shift", n.shift.str()}, {"scale", n.scale.str()}, {"changed", n.changed},
          {"change_of_variable", "y = scale * (x - shift)"}};
}

inline json to_json(const AffineMap& m) {
  return {{"power", m.power}, {"offset", m.offset.str()}, {"scale", m.scale.str()}};
}

inline json to_json(const EquivClassTable& t) {
  json classes = json::array();
  for (const auto& c : t.classes) {
    json words = json::array();
    for (const auto& w : c.words) words.push_back(w);
    classes.push_back({{"map", to_json(c.map)}, {"weight", c.weight.str()}, {"words", words}});
  }
  std::size_t singletons = 0;
  for (const auto& c : t.classes) singletons += c.words.size() == 1 ? 1 : 0;
  return {{"depth", t.depth}, {"count", t.classes.size()}, {"singletons", singletons},
          {"total_weight", t.total_weight().str()}, {"classes", classes}};
}

inline json to_json(const CylinderCover& c) {
  json cells = json::array();
  for (const auto& cell : c.cells) {
    cells.push_back({{"interval", to_json(cell.interval)}, {"measure", cell.measure.str()}, {"word", cell.word}});
  }
  return {{"depth", c.depth}, {"cells", cells}, {"components", list_json(c.components())},
          {"total_measure", c.total_measure().str()}};
}

inline json to_json(const OverlapReport& r) {
  json cands = json::array();
  for (const auto& c : r.candidates) {
    cands.push_back({{"letters", {c.letter_a, c.letter_b}}, {"word_a", c.word_a}, {"word_b", c.word_b},
                     {"intersection", to_json(c.intersection)}});
  }
  return {{"status", to_string(r.status)}, {"depth", r.depth}, {"basis", r.basis}, {"candidates", cands}};
}

inline json to_json(const std::optional<ClassInterval>& ci, const EquivClassTable& t) {
  if (!ci) return nullptr;
  return {{"word", t.classes[ci->class_index].words.front()}, {"interval", to_json(ci->interval)}};
}

inline json to_json(const FixedPointReport& r) {
  json per = json::array();
  for (std::size_t i = 0; i < r.per_class.size(); ++i) {
    const auto& c = r.per_class[i];
    per.push_back({{"word", r.table.classes[i].words.front()},
                   {"weight", r.table.classes[i].weight.str()},
                   {"fixed_point", c.fixed_point.str()},
                   {"status", to_string(c.status)},
                   {"nearest_left", to_json(c.nearest_left, r.table)},
                   {"nearest_right", to_json(c.nearest_right, r.table)},
                   {"blocking", to_json(c.blocking, r.table)}});
  }
  json out = {{"k", r.depth},
              {"refine", r.refine},
              {"attractor_is_interval", r.attractor_is_interval},
              {"overall", to_string(r.overall)},
              {"classes", per}};
  if (r.witness) {
    out["witness"] = {{"word", r.table.classes[*r.witness].words.front()},
                      {"fixed_point", r.per_class[*r.witness].fixed_point.str()}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}

inline json to_json(const FtEstimate& e) {
  return {{"value", to_json(e.value)}, {"abs", std::abs(e.value)}, {"tail_bound", e.tail_bound},
          {"truncation_depth", e.truncation_depth}};
}

inline json to_json(const JpPoint& p) { return {{"x", p.x}, {"q", p.q}, {"budget", p.budget}}; }

inline json to_json(const AcCheckResult& r) {
  json zeros = json::array();
  for (const auto& z : r.zeros) {
    zeros.push_back({{"n", z.n}, {"k", z.k}, {"point", z.point.str()}, {"float_abs", z.float_abs}});
  }
  return {{"certified", r.certified},
          {"status", r.certified ? "Certified" : "NotCertified"},
          {"wording", r.wording},
          {"n_range", r.n_range},
          {"k_max", r.k_max},
          {"base", r.base},
          {"integer_digits", r.digits.digits.elements()},
          {"alpha", r.digits.scale.str()},
          {"first_failure", r.first_failure ? json(*r.first_failure) : json(nullptr)},
          {"zeros", zeros}};
}

inline json to_json(const FrameEstimate& e) {
  return {{"lower", e.lower},
          {"upper", e.upper},
          {"subspace_lower", e.subspace_lower},
          {"subspace_upper", e.subspace_upper},
          {"subspace_depth", e.subspace_depth},
          {"subspace_dimension", e.subspace_dimension},
          {"dropped_cells", e.dropped_cells},
          {"lambda_size", e.lambda.size()},
          {"semantics", "inner estimate: upper/lower is a lower bound for B/A"}};
}

inline json to_json(const GapCheck& g) {
  return {{"estimate", to_json(g.estimate)},
          {"estimate_ratio", g.estimate_ratio},
          {"esssup", g.density.sup.str()},
          {"essinf", g.density.inf.str()},
          {"density_ratio", g.density_ratio.str()},
          {"inner_estimate_consistent", g.inner_estimate_consistent},
          {"density_ratio_attained", g.density_ratio_attained},
          {"tight_frame_excluded", g.tight_frame_excluded}};
}

inline json to_json(const DifferenceCover& d) {
  return {{"depth", d.depth}, {"cover_c", list_json(d.cover_c)}, {"cover_d", list_json(d.cover_d)},
          {"intersection", list_json(d.intersection)}};
}

inline json to_json(const TilingResult& r) {
  json w = nullptr;
  if (r.witness) w = {{"period", r.witness->period}, {"complement", r.witness->complement}};
  return {{"status", r.witness ? "Tiles" : "NoTiling"},
          {"witness", w},
          {"search_bound", r.search_bound},
          {"largest_period_tried", r.largest_period_tried},
          {"nodes", r.nodes},
          {"budget_exhausted", r.budget_exhausted},
          {"basis", r.basis}};
}

inline json to_json(const WindowCheck& c) {
  return {{"status", to_string(c.status)},
          {"element", c.element ? json(*c.element) : json(nullptr)},
          {"reason", c.reason},
          {"checked", c.checked},
          {"boundary_skipped", c.boundary_skipped}};
}

inline json to_json(const GClassification& g) {
  json classes = json::array();
  for (const auto& c : g.classes) {
    classes.push_back({{"G", c.g}, {"cells", list_json(c.cells)}, {"grid_points", c.grid_points}});
  }
  return {{"refine", g.refine},
          {"tolerance", g.tolerance.str()},
          {"classes", classes},
          {"empty_cells", list_json(g.empty_cells)},
          {"uncertain", list_json(g.uncertain)},
          {"uncertain_length", g.uncertain_length().str()},
          {"grid", g.grid},
          {"grid_uncertain", g.grid_uncertain},
          {"grid_mismatches", g.grid_mismatches}};
}

inline json to_json(const GaborVerdict& v) {
  json checks = json::array();
  for (const auto& c : v.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  json spectrum = json::array();
  for (const auto& p : v.spectrum.points) spectrum.push_back({{"x", p.x}, {"q", p.q}});
  return {{"checks", checks},
          {"all_pass", v.all_pass()},
          {"max_offdiag", v.max_offdiag},
          {"max_diag_deviation", v.max_diag_deviation},
          {"min_q", v.spectrum.min_q},
          {"max_q", v.spectrum.max_q},
          {"spectrum", spectrum},
          {"forward_consistent", v.forward_consistent},
          {"converse_consistent", v.converse_consistent},
          {"summary", v.summary}};
}

inline json to_json(const TranslationRatio& t) {
  return {{"b", t.b}, {"c", t.c}, {"n", t.n}, {"ratio", t.ratio.str()}, {"F", to_json(t.f)}, {"a", t.a.str()}};
}

inline json to_json(const WeightMismatch& m) {
  return {{"word", m.first_word}, {"weight", m.weight.str()}, {"expected", m.expected.str()}};
}

inline json witness_json(const VerdictWitness& w) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, UnequalWeightsWitness>) {
          return {{"translation", to_json(x.sample)}, {"ratio_base", x.base.str()}, {"overlap_basis", x.overlap_basis}};
        } else if constexpr (std::is_same_v<T, FixedPointWitness>) {
          json nearest = json::array();
          json neigh = json::array();
          if (x.nearest_left) nearest.push_back(to_json(x.nearest_left->interval));
          if (x.nearest_right) nearest.push_back(to_json(x.nearest_right->interval));
          for (const auto& w : x.nearest_words) neigh.push_back(w);
          json words = json::array();
          for (const auto& w : x.words) words.push_back(w);
          json mism = json::array();
          for (const auto& m : x.mismatches) mism.push_back(to_json(m));
          json upper = json::array();
          for (const auto& m : x.upper_bound_violations) upper.push_back(to_json(m));
          return {{"k", x.k},
                  {"refine", x.refine},
                  {"word", x.first_word},
                  {"words", words},
                  {"fixed_point", x.fixed_point.str()},
                  {"weight", x.weight.str()},
                  {"expected", x.expected.str()},
                  {"excluded_intervals", nearest},
                  {"excluded_by", neigh},
                  {"mismatches", mism},
                  {"upper_bound_violations", upper},
                  {"all_digits_forcing", x.all_digits_forcing},
                  {"weights_equal_ratio", x.weights_equal_ratio},
                  {"ratio_is_one_over_n", x.ratio_is_one_over_n}};
        } else if constexpr (std::is_same_v<T, BoundaryWitness>) {
          return {{"normalization", to_json(x.normalization)}, {"lebesgue", x.lebesgue}, {"violations", x.violations}};
        } else if constexpr (std::is_same_v<T, DensityWitness>) {
          return {{"esssup", x.esssup.str()}, {"essinf", x.essinf.str()}, {"estimate_ratio", x.estimate_ratio}};
        } else {
          return to_json(x);
        }
      },
      w);
}

inline json to_json(const ObstructionVerdict& v) {
  return {{"kind", to_string(v.kind)},
          {"conclusion", v.conclusion},
          {"hypotheses_asserted", v.hypotheses_asserted},
          {"witness", witness_json(v.witness)}};
}

inline json to_json(const TightFrameReport& r) {
  json cons = json::array();
  for (const auto& c : r.consequences) cons.push_back({{"name", c.name}, {"holds", c.holds}, {"detail", c.detail}});
  json out = {{"consequences", cons}, {"consistent", r.consistent}};
  if (r.digits) out["integer_digits"] = r.digits->digits.elements();
  if (r.tiling) out["tiling"] = to_json(*r.tiling);
  return out;
}

inline json to_json(const Config& c) {
  return {{"enumeration_cap", c.enumeration_cap},
          {"max_product_depth", c.max_product_depth},
          {"zero_tolerance", c.zero_tolerance},
          {"identity_tolerance", c.identity_tolerance},
          {"period_cap", c.period_cap},
          {"tiling_node_budget", c.tiling_node_budget},
          {"boundary_tolerance", c.boundary_tolerance},
          {"frame_dimension_cap", c.frame_dimension_cap},
          {"gabor_size_cap", c.gabor_size_cap},
          {"overlap_depth", c.overlap_depth},
          {"gram_tolerance", c.gram_tolerance},
          {"jp_threshold", c.jp_threshold},
          {"window_value_tolerance", c.window_value_tolerance},
          {"ratio_tolerance", c.ratio_tolerance}};
}

inline json to_json(const WindowFunction& g) {
  json pieces = json::array();
  for (const auto& p : g.pieces()) {
    pieces.push_back({{"lo", p.interval.lo.str()}, {"hi", p.interval.hi.str()}, {"value", p.value}});
  }
  return {{"pieces", pieces}};
}

inline json to_json(const StepMeasure& m) {
  json bp = json::array();
  json g = json::array();
  for (const auto& b : m.breakpoints()) bp.push_back(b.str());
  for (const auto& d : m.densities()) g.push_back(d.str());
  return {{"breakpoints", bp}, {"densities", g}};
}

}  // namespace ssframe
