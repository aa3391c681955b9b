// Command-line front end. Every subcommand prints one report (JSON by
// default); the exit status says whether the analysis ran, never what it
// concluded.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ssframe/ssframe.hpp"

namespace {

using namespace ssframe;

enum Exit { kOk = 0, kFailure = 1, kInputError = 2, kResourceError = 3 };

struct Globals {
  std::string output = "json";
  std::string config_file;
  std::optional<std::uint64_t> enum_cap;
  std::optional<std::uint64_t> period_cap;
  std::optional<std::size_t> frame_dim_cap;
};

Config effective_config(const Globals& g) {
  Config cfg = Config::from_environment();
  if (!g.config_file.empty()) apply_config_json(load_json_file(g.config_file), cfg, g.config_file);
  if (g.enum_cap) cfg.enumeration_cap = *g.enum_cap;
  if (g.period_cap) cfg.period_cap = *g.period_cap;
  if (g.frame_dim_cap) cfg.frame_dimension_cap = *g.frame_dim_cap;
  return cfg;
}

void emit(const Globals& g, const json& report, const std::string& text = {}) {
  if (g.output == "text") {
    std::cout << (text.empty() ? render_text(report) : text);
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& r : v) out.push_back(r.to_double());
  return out;
}

std::vector<double> lambda_from_file(const std::string& path) {
  const json j = load_json_file(path);
  const json& list = j.is_object() && j.contains("lambda") ? j.at("lambda") : j;
  if (!list.is_array()) throw InputError(path + ": expected an array of frequencies or {\"lambda\": [...]}");
  std::vector<double> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = path + ": lambda[" + std::to_string(i) + "]";
    if (list[i].is_string()) {
      out.push_back(Rational::parse(list[i].get<std::string>()).to_double());
    } else if (list[i].is_number()) {
      out.push_back(list[i].get<double>());
    } else {
      throw InputError(where + ": expected a number or rational string");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar measures, frame obstructions, integer tilings and Gabor checks"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--output", g.output, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--config", g.config_file, "JSON file overriding caps and tolerances");
  app.add_option("--enum-cap", g.enum_cap, "Override the word enumeration cap (also SSFRAME_ENUM_CAP)");
  app.add_option("--period-cap", g.period_cap, "Override the tiling period cap (also SSFRAME_PERIOD_CAP)");
  app.add_option("--frame-dim-cap", g.frame_dim_cap, "Override the frame subspace cap (also SSFRAME_FRAME_DIM_CAP)");

  std::function<void()> action;

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Run the obstruction chain on an IFS spec");
  std::string ifs_file;
  AnalyzeOptions aopt;
  bool no_ac_check = false;
  analyze->add_option("--ifs", ifs_file, "IFS spec file")->required();
  analyze->add_option("--k", aopt.k, "Word length for equivalence classes")->check(CLI::PositiveNumber);
  analyze->add_option("--refine", aopt.refine, "Cover depth for the fixed point condition")->check(CLI::NonNegativeNumber);
  analyze->add_flag("--assume-ac", aopt.assume_ac, "Assert that mu is absolutely continuous");
  analyze->add_flag("--assume-hausdorff", aopt.assume_hausdorff, "Assert mu << H^alpha with 0 < H^alpha(X) < inf");
  analyze->add_flag("--tight-frame", aopt.tight_frame, "Check the consequences of a tight frame measure");
  analyze->add_flag("--no-ac-check", no_ac_check, "Skip the mask-zero evidence");
  analyze->add_option("--n-range", aopt.n_range, "n range for the mask-zero evidence")->check(CLI::PositiveNumber);
  analyze->add_option("--k-max", aopt.k_max, "k bound for the mask-zero evidence")->check(CLI::PositiveNumber);
  analyze->callback([&] {
    action = [&] {
      aopt.ac_check = !no_ac_check;
      const Config cfg = effective_config(g);
      emit(g, run_analyze(ifs_from_json(load_json_file(ifs_file), ifs_file), aopt, cfg));
    };
  });

  // mask
  auto* mask = app.add_subcommand("mask", "Evaluate the mask polynomial");
  double xi = 0.0;
  mask->add_option("--ifs", ifs_file, "IFS spec file")->required();
  mask->add_option("--xi", xi, "Frequency")->required();
  mask->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const IfsSpec ifs = ifs_from_json(load_json_file(ifs_file), ifs_file);
      const MaskPolynomial m = mask_of(ifs);
      json digits = json::array();
      for (const auto& d : m.digits) digits.push_back(d.str());
      const auto v = mask_eval(m, xi);
      emit(g, make_report("mask", {{"ifs", to_json(ifs)}, {"xi", xi}},
                          {{"mask_digits", digits}, {"value", to_json(v)}, {"abs", std::abs(v)},
                           {"convention", "m(xi) = sum_j p_j exp(2 pi i (b_j / ratio) xi)"}},
                          cfg));
    };
  });

  // ft
  auto* ft = app.add_subcommand("ft", "Truncated Fourier transform of the invariant measure");
  int depth = 60;
  ft->add_option("--ifs", ifs_file, "IFS spec file")->required();
  ft->add_option("--xi", xi, "Frequency")->required();
  ft->add_option("--depth", depth, "Truncation depth K")->check(CLI::PositiveNumber);
  ft->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const IfsSpec ifs = ifs_from_json(load_json_file(ifs_file), ifs_file);
      json r = to_json(mu_hat(ifs, xi, depth, cfg));
      r["convention"] = "mu^(xi) = int exp(-2 pi i xi x) dmu(x); digits centred, phase applied exactly";
      emit(g, make_report("ft", {{"ifs", to_json(ifs)}, {"xi", xi}, {"depth", depth}}, r, cfg));
    };
  });

  // jp
  auto* jp = app.add_subcommand("jp", "Jorgensen-Pedersen sum over a grid");
  std::string lambda_file;
  std::string lambda_spec;
  std::string grid_spec;
  jp->add_option("--ifs", ifs_file, "IFS spec file")->required();
  auto* lf = jp->add_option("--lambda-file", lambda_file, "JSON array of frequencies");
  jp->add_option("--lambdas", lambda_spec, "Frequencies as \"a:b\" or a comma list")->excludes(lf);
  jp->add_option("--grid", grid_spec, "Grid as \"lo:hi:n\" (interior points) or a comma list")->required();
  jp->add_option("--depth", depth, "Truncation depth K")->check(CLI::PositiveNumber);
  jp->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const IfsSpec ifs = ifs_from_json(load_json_file(ifs_file), ifs_file);
      std::vector<double> lambda;
      if (!lambda_file.empty()) {
        lambda = lambda_from_file(lambda_file);
      } else if (!lambda_spec.empty()) {
        lambda = to_doubles(parse_rational_set(lambda_spec, "--lambdas"));
      } else {
        throw InputError("jp needs --lambda-file or --lambdas");
      }
      const auto grid = parse_grid(grid_spec, "--grid");
      const auto pts = jp_sum(ifs, lambda, grid, depth, cfg);
      double lo = pts.empty() ? 0.0 : pts.front().q;
      double hi = lo;
      for (const auto& p : pts) {
        lo = std::min(lo, p.q);
        hi = std::max(hi, p.q);
      }
      emit(g, make_report("jp", {{"ifs", to_json(ifs)}, {"lambda_size", lambda.size()}, {"grid", grid_spec}, {"depth", depth}},
                          {{"points", list_json(pts)}, {"min_q", lo}, {"max_q", hi},
                           {"caveat", "finite Lambda: Q can only undershoot the full sum"}},
                          cfg));
    };
  });

  // ac-check
  auto* acc = app.add_subcommand("ac-check", "Mask-zero evidence for absolute continuity");
  std::int64_t n_range = 100;
  int k_max = 10;
  acc->add_option("--ifs", ifs_file, "IFS spec file")->required();
  acc->add_option("--n-range", n_range, "Check 1 <= |n| <= n-range")->check(CLI::PositiveNumber);
  acc->add_option("--k-max", k_max, "Largest k tried")->check(CLI::PositiveNumber);
  acc->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const IfsSpec ifs = ifs_from_json(load_json_file(ifs_file), ifs_file);
      emit(g, make_report("ac-check", {{"ifs", to_json(ifs)}, {"n_range", n_range}, {"k_max", k_max}},
                          to_json(ac_mask_zero_check(ifs, n_range, k_max, cfg)), cfg));
    };
  });

  // frame-bounds
  auto* fb = app.add_subcommand("frame-bounds", "Frame-bound estimate for a step-density measure");
  std::string measure_file;
  long long lambda_range = 20;
  int fdepth = 6;
  fb->add_option("--measure", measure_file, "Step measure file")->required();
  fb->add_option("--lambda-range", lambda_range, "Use Lambda = -M..M")->check(CLI::NonNegativeNumber);
  fb->add_option("--depth", fdepth, "Dyadic subspace depth")->check(CLI::NonNegativeNumber);
  fb->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const StepMeasure mu = step_measure_from_json(load_json_file(measure_file), measure_file);
      const auto gap = theorem13_gap_check(mu, symmetric_range(lambda_range), fdepth, cfg);
      json report = make_report("frame-bounds", {{"measure", to_json(mu)}, {"lambda_range", lambda_range}, {"depth", fdepth}},
                                to_json(gap), cfg);
      report["estimates"]["frame"] = to_json(gap.estimate);
      if (auto v = verdict_tight_frame_density(gap.density, gap.estimate_ratio)) report["verdicts"].push_back(to_json(*v));
      emit(g, report);
    };
  });

  // fixed-point
  auto* fpc = app.add_subcommand("fixed-point", "Fixed point condition for every class of A_k");
  int k = 2;
  int refine = 1;
  fpc->add_option("--ifs", ifs_file, "IFS spec file")->required();
  fpc->add_option("--k", k, "Word length")->check(CLI::PositiveNumber);
  fpc->add_option("--refine", refine, "Cover depth")->check(CLI::NonNegativeNumber);
  fpc->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const IfsSpec ifs = ifs_from_json(load_json_file(ifs_file), ifs_file);
      emit(g, make_report("fixed-point", {{"ifs", to_json(ifs)}, {"k", k}, {"refine", refine}},
                          to_json(fixed_point_condition(ifs, k, refine, cfg)), cfg));
    };
  });

  // tiles-z
  auto* tz = app.add_subcommand("tiles-z", "Search for a complement E with D + E = Z");
  std::string digits_spec;
  std::optional<std::uint64_t> cap;
  tz->add_option("--digits", digits_spec, "Integer digits, comma separated")->required();
  tz->add_option("--cap", cap, "Largest period searched");
  tz->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const DigitSet d(parse_int_list(digits_spec, "--digits"));
      emit(g, make_report("tiles-z", {{"digits", d.elements()}, {"cap", cap ? json(*cap) : json(nullptr)}},
                          to_json(tiles_Z(d, cap, cfg)), cfg));
    };
  });

  // self-rep
  auto* sr = app.add_subcommand("self-rep", "Check J = N J + D on a window");
  std::string j_file;
  std::int64_t base_n = 2;
  std::string window_spec;
  sr->add_option("--j-file", j_file, "JSON array of the elements of J in the window")->required();
  sr->add_option("--n", base_n, "N")->required();
  sr->add_option("--digits", digits_spec, "Digits D, comma separated")->required();
  sr->add_option("--window", window_spec, "Window \"lo:hi\"")->required();
  sr->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const auto [lo, hi] = parse_int_window(window_spec, "--window");
      const json jj = load_json_file(j_file);
      if (!jj.is_array()) throw InputError(j_file + ": expected an array of integers");
      WindowedSet js{lo, hi, {}};
      for (std::size_t i = 0; i < jj.size(); ++i) {
        if (!jj[i].is_number_integer()) throw InputError(j_file + ": [" + std::to_string(i) + "] is not an integer");
        js.members.insert(jj[i].get<std::int64_t>());
      }
      const auto d = parse_int_list(digits_spec, "--digits");
      emit(g, make_report("self-rep", {{"n", base_n}, {"digits", d}, {"window", window_spec}, {"j_size", js.members.size()}},
                          to_json(verify_self_replicating(js, base_n, d)), cfg));
    };
  });

  // g-classify
  auto* gc = app.add_subcommand("g-classify", "Classify G(t) = { j : t + j in X } over t in [0,1)");
  std::uint64_t grid_n = 4096;
  int grefine = 10;
  gc->add_option("--ifs", ifs_file, "IFS spec file (ratio 1/N, N digits)")->required();
  gc->add_option("--grid", grid_n, "Cross-check grid resolution")->check(CLI::PositiveNumber);
  gc->add_option("--refine", grefine, "Cover depth")->check(CLI::NonNegativeNumber);
  gc->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const IfsSpec ifs = ifs_from_json(load_json_file(ifs_file), ifs_file);
      emit(g, make_report("g-classify", {{"ifs", to_json(ifs)}, {"grid", grid_n}, {"refine", grefine}},
                          to_json(classify_G_sets(ifs, grid_n, grefine, cfg)), cfg));
    };
  });

  // gabor
  auto* gb = app.add_subcommand("gabor", "Finite-window Gabor orthonormal basis checks");
  std::string window_file;
  std::string lambdas_spec;
  std::string trans_spec;
  std::string box_spec;
  int ggrid = 64;
  gb->add_option("--window", window_file, "Window file")->required();
  gb->add_option("--lambdas", lambdas_spec, "Frequencies as \"a:b\" or a comma list")->required();
  gb->add_option("--trans", trans_spec, "Translations as \"a:b\" or a comma list")->required();
  gb->add_option("--box", box_spec, "Covering box \"lo:hi\"")->required();
  gb->add_option("--grid", ggrid, "Grid points (i + 1/2)/n in [0,1) for the spectrum check")->check(CLI::PositiveNumber);
  gb->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const GaborSystemSpec spec(window_from_json(load_json_file(window_file), window_file),
                                 parse_rational_set(lambdas_spec, "--lambdas"), parse_rational_set(trans_spec, "--trans"));
      std::vector<double> grid;
      for (int i = 0; i < ggrid; ++i) grid.push_back((i + 0.5) / ggrid);
      emit(g, make_report("gabor",
                          {{"window", to_json(spec.window)}, {"lambdas", lambdas_spec}, {"trans", trans_spec},
                           {"box", box_spec}, {"grid", ggrid}, {"contains_origin", spec.contains_origin()}},
                          to_json(gabor_onb_verdict(spec, parse_box(box_spec, "--box"), grid, cfg)), cfg));
    };
  });

  // diff-cover
  auto* dc = app.add_subcommand("diff-cover", "Intersect covers of C - C and D - D for digit Cantor sets");
  std::string c_spec;
  std::string d_spec;
  std::int64_t base = 10;
  int ddepth = 3;
  dc->add_option("--c", c_spec, "Digits of C")->required();
  dc->add_option("--d", d_spec, "Digits of D")->required();
  dc->add_option("--base", base, "Base")->check(CLI::PositiveNumber);
  dc->add_option("--depth", ddepth, "Depth")->check(CLI::NonNegativeNumber);
  dc->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const auto c = parse_int_list(c_spec, "--c");
      const auto d = parse_int_list(d_spec, "--d");
      emit(g, make_report("diff-cover", {{"c", c}, {"d", d}, {"base", base}, {"depth", ddepth}},
                          to_json(cantor_difference_cover(c, d, base, ddepth, cfg)), cfg));
    };
  });

  // reproduce
  auto* rp = app.add_subcommand("reproduce", "Rerun a worked example and compare with the expected values");
  std::string example_id;
  rp->add_option("id", example_id, "Example id")->required()->check(CLI::IsMember(gallery_ids()));
  rp->callback([&] {
    action = [&] {
      const Config cfg = effective_config(g);
      const ReproResult r = run_reproduce(example_id, cfg);
      json report = make_report("reproduce", {{"id", example_id}}, to_json(r), cfg);
      emit(g, report, render_table(r));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }
  try {
    if (action) action();
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResourceError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
