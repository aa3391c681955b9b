#pragma once

#include <optional>
#include <sstream>
#include <string>

#include "ssframe/json_io.hpp"

namespace ssframe {

inline constexpr const char* kToolName = "ssframe";
inline constexpr const char* kToolVersion = "0.1.0";

inline json provenance(const Config& cfg) {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"config", to_json(cfg)}};
}

/// Common envelope for every command: the input echo, the command's result
/// and the effective configuration.
inline json make_report(const std::string& command, json input, json result, const Config& cfg) {
  return {{"command", command},
          {"input", std::move(input)},
          {"result", std::move(result)},
          {"verdicts", json::array()},
          {"estimates", json::object()},
          {"witnesses", json::object()},
          {"provenance", provenance(cfg)}};
}

struct AnalyzeOptions {
  int k = 2;
  int refine = 1;
  bool assume_ac = false;
  bool assume_hausdorff = false;
  bool tight_frame = false;
  bool ac_check = true;
  std::int64_t n_range = 100;
  int k_max = 10;
};

inline json to_json(const AnalyzeOptions& o) {
  return {{"k", o.k},
          {"refine", o.refine},
          {"assume_ac", o.assume_ac},
          {"assume_hausdorff", o.assume_hausdorff},
          {"tight_frame", o.tight_frame},
          {"ac_check", o.ac_check},
          {"n_range", o.n_range},
          {"k_max", o.k_max}};
}

/// no-overlap check, equivalence classes, fixed point condition, optional
/// mask-zero evidence, then every verdict whose hypotheses are met.
/// Verdicts that need absolute continuity when it is neither asserted nor
/// supported by the mask-zero check are listed as conditional. Cap
/// exhaustion in one stage is recorded and the remaining stages still run.
inline json run_analyze(const IfsSpec& ifs, const AnalyzeOptions& opt, const Config& cfg) {
  json report = make_report("analyze", {{"ifs", to_json(ifs)}, {"options", to_json(opt)}}, json::object(), cfg);
  json& result = report["result"];
  json errors = json::array();
  auto stage = [&](const char* name, auto&& body) {
    try {
      body();
    } catch (const ResourceError& e) {
      errors.push_back({{"stage", name}, {"error", e.what()}});
    }
  };

  result["normalization"] = to_json(normalize(ifs));
  stage("overlap", [&] { report["witnesses"]["overlap"] = to_json(no_overlap_check(ifs, cfg.overlap_depth, cfg)); });
  stage("classes", [&] {
    const auto table = equivalence_classes(ifs, opt.k, cfg);
    std::size_t singletons = 0;
    for (const auto& c : table.classes) singletons += c.words.size() == 1 ? 1 : 0;
    result["classes"] = {{"k", opt.k}, {"count", table.classes.size()}, {"singletons", singletons},
                         {"total_weight", table.total_weight().str()}};
  });
  stage("fixed_point", [&] {
    const auto fp = fixed_point_condition(ifs, opt.k, opt.refine, cfg);
    json summary = {{"overall", to_string(fp.overall)}, {"attractor_is_interval", fp.attractor_is_interval}};
    std::size_t holds = 0;
    for (const auto& c : fp.per_class) holds += c.status == FixedPointStatus::Holds ? 1 : 0;
    summary["holds"] = holds;
    summary["witness"] = fp.witness ? json(fp.table.classes[*fp.witness].words.front()) : json(nullptr);
    result["fixed_point"] = summary;
  });

  std::string ac_basis = opt.assume_ac ? "asserted by caller" : "";
  const bool one_over_n = (Rational(1) / ifs.ratio()).is_integer();
  if (opt.ac_check && one_over_n) {
    stage("ac_check", [&] {
      const auto ac = ac_mask_zero_check(ifs, opt.n_range, opt.k_max, cfg);
      json e = {{"certified", ac.certified}, {"wording", ac.wording}, {"n_range", ac.n_range}, {"k_max", ac.k_max},
                {"first_failure", ac.first_failure ? json(*ac.first_failure) : json(nullptr)}};
      report["estimates"]["ac_check"] = e;
      if (ac.certified && ac_basis.empty()) ac_basis = "mask zeros " + ac.wording;
    });
  }
  const bool ac = !ac_basis.empty();
  result["absolute_continuity"] = ac ? json(ac_basis) : json(nullptr);

  json conditional = json::array();
  auto add = [&](const std::optional<ObstructionVerdict>& v, bool hypotheses_met) {
    if (!v) return;
    json j = to_json(*v);
    j["hypotheses_asserted"] = hypotheses_met;
    (hypotheses_met ? report["verdicts"] : conditional).push_back(std::move(j));
  };
  stage("no_overlap_unequal", [&] { add(verdict_no_overlap_unequal(ifs, cfg), true); });
  stage("fixed_point_verdict", [&] { add(verdict_fixed_point(ifs, opt.k, opt.refine, ac, cfg), ac); });
  if (ac) {
    add(verdict_boundary_weights(ifs, BoundaryHypothesis::LebesgueAc), true);
  } else {
    add(verdict_boundary_weights(ifs, BoundaryHypothesis::HausdorffAc), opt.assume_hausdorff);
    add(verdict_boundary_weights(ifs, BoundaryHypothesis::LebesgueAc), false);
  }
  if (opt.tight_frame) {
    stage("tight_frame", [&] { report["witnesses"]["tight_frame"] = to_json(verdict_tight_frame_structure(ifs, cfg)); });
  }
  report["conditional_verdicts"] = conditional;
  result["obstructions_found"] = report["verdicts"].size();
  result["errors"] = errors;
  return report;
}

namespace detail {

inline void render_text(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      render_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    bool scalar = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
    if (scalar) {
      out << prefix << " = " << j.dump() << "\n";
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
    if (j.empty()) out << prefix << " = []\n";
  } else if (j.is_string()) {
    out << prefix << " = " << j.get<std::string>() << "\n";
  } else {
    out << prefix << " = " << j.dump() << "\n";
  }
}

}  // namespace detail

/// One "path = value" line per leaf, in key order.
inline std::string render_text(const json& report) {
  std::ostringstream out;
  detail::render_text(report, "", out);
  return out.str();
}

}  // namespace ssframe
