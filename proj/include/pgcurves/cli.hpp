#pragma once

// `pgcurve` command line. run_cli never calls exit(); it returns the process
// status so tests can drive it in-process.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pgcurves/classify.hpp"
#include "pgcurves/error.hpp"
#include "pgcurves/frenet.hpp"
#include "pgcurves/report.hpp"
#include "pgcurves/synth.hpp"
#include "pgcurves/verify.hpp"

namespace pgc::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kNotAdmissible = 2, kVerificationFailed = 3 };

struct RunConfig {
  std::string command;
  std::string input;
  std::string output;
  PGVector3 origin;
  std::optional<double> tol_adm;
  std::optional<double> tol_classify;
  std::map<std::string, double> tolerances;  // --tol NAME=VALUE
  std::optional<double> s_min;
  std::optional<double> s_max;
  std::optional<std::size_t> samples;
  double step = kDefaultStep;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double knot_spacing = kSampledKnotSpacing;
  bool best_origin = false;

  // synthesize
  std::string mode = "rectifying";
  double m1 = 0.0;
  double n1 = 1.0;
  std::string kappa = "1";
  std::string tau = "1";
  std::vector<double> c{0.0, 0.0, 0.0, 0.0};
  bool frame = false;
};

namespace detail {

inline double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || !std::isfinite(v)) {
    throw InputError(what + ": bad number '" + text + "'");
  }
  return v;
}

inline PGVector3 parse_origin(const std::string& text) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    v.push_back(parse_number(text.substr(pos, comma - pos), "--origin"));
    pos = comma + 1;
  }
  if (v.size() != 3) throw InputError("--origin expects x,y,z");
  return {v[0], v[1], v[2]};
}

inline std::pair<std::string, double> parse_tol(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("--tol expects NAME=VALUE, got '" + text + "'");
  return {text.substr(0, eq), parse_number(text.substr(eq + 1), "--tol " + text)};
}

/// Tolerances must be positive and finite, and every --tol name must be one
/// the command knows.
inline void check_tolerances(const RunConfig& cfg, const std::set<std::string>& known) {
  const auto positive = [](const std::string& name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InputError("tolerance " + name + " must be positive and finite");
    }
  };
  if (cfg.tol_adm) positive("tol_adm", *cfg.tol_adm);
  if (cfg.tol_classify) positive("tol_classify", *cfg.tol_classify);
  for (const auto& [name, v] : cfg.tolerances) {
    if (!known.count(name)) throw InputError("unknown tolerance '" + name + "' for " + cfg.command);
    positive(name, v);
  }
}

inline double tol_adm(const RunConfig& cfg) {
  if (cfg.tol_adm) return *cfg.tol_adm;
  const auto it = cfg.tolerances.find("tol_adm");
  return it == cfg.tolerances.end() ? kDefaultTolAdm : it->second;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out) throw InputError(path + ": write failed");
}

inline void write_json_file(const std::string& path, const report::json& j) {
  write_text(path, report::to_json_string(j));
}

/// Loads the input curve and applies the --s-min/--s-max/--samples overrides.
inline CurveDef load_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw InputError("--input is required");
  CurveDef c = report::load_curve(cfg.input, cfg.knot_spacing).curve;
  if (cfg.s_min || cfg.s_max || cfg.samples) {
    const double lo = cfg.s_min.value_or(c.s_min());
    const double hi = cfg.s_max.value_or(c.s_max());
    if (const auto* sp = c.as_sampled()) {
      const auto& k = sp->y.knots();
      if (lo < k.front() || hi > k.back()) {
        throw InputError(cfg.input + ": grid [" + report::format_double(lo) + ", " +
                         report::format_double(hi) + "] leaves the sampled range");
      }
    }
    c = c.with_grid(lo, hi, cfg.samples.value_or(c.samples()));
  }
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands.

inline int cmd_analyze(const RunConfig& cfg, std::ostream& log) {
  detail::check_tolerances(cfg, {"tol_adm"});
  const CurveDef c = detail::load_input(cfg);
  const double tol = detail::tol_adm(cfg);
  const AdmissibilityReport adm = check_admissible(c, tol);
  const auto rows = analyze_grid(c, tol, cfg.threads);
  {
    auto csv = detail::open_output(cfg.output + ".csv");
    report::write_analysis_csv(csv, rows);
  }
  detail::write_json_file(cfg.output + ".json", report::analysis_json(c, adm, rows));
  log << "wrote " << cfg.output << ".csv, " << cfg.output << ".json\n";
  if (!adm.admissible) {
    log << "curve is not admissible at " << adm.violations.size() << " grid points\n";
    return kNotAdmissible;
  }
  return kOk;
}

inline int cmd_classify(const RunConfig& cfg, std::ostream& log) {
  detail::check_tolerances(cfg, {"tol_adm", "tol_classify", "rectifying_properties"});
  const CurveDef c = detail::load_input(cfg);
  const double adm = detail::tol_adm(cfg);
  const double tol = cfg.tol_classify.value_or(
      cfg.tolerances.count("tol_classify")
          ? cfg.tolerances.at("tol_classify")
          : (c.is_sampled() ? kDefaultTolClassifySampled : kDefaultTolClassifyExact));
  const double tol_props =
      cfg.tolerances.count("rectifying_properties") ? cfg.tolerances.at("rectifying_properties") : 1e-5;

  if (!check_admissible(c, adm).admissible) throw NotAdmissible(cfg.input + ": curve is not admissible");

  report::Classification r;
  r.tol_classify = tol;
  r.tol_adm = adm;
  r.origin = cfg.best_origin ? best_origin(c, cfg.origin, adm) : cfg.origin;
  r.rectifying = classify_rectifying(c, r.origin, tol, adm);
  if (r.rectifying.is_rectifying) {
    r.verdict = "rectifying";
    r.properties = check_rectifying_properties(c, r.origin, r.rectifying, tol_props, adm);
  } else {
    try {
      r.normal = fit_normal_components(c, r.origin, adm);
      if (r.normal->xi_residual <= tol && r.normal->eta_residual <= tol) r.verdict = "normal-fit";
    } catch (const ZeroTorsion& e) {
      r.normal_note = e.what();
    } catch (const NonConstantInvariants& e) {
      r.normal_note = e.what();
    } catch (const DegenerateFit& e) {
      r.normal_note = e.what();
    }
  }
  detail::write_json_file(cfg.output + ".json", report::classification_json(c, r));
  log << "verdict: " << r.verdict << "\n";
  return kOk;
}

inline report::json drift_json(const Trajectory& tr) {
  const auto d = invariant_drift(tr);
  return {{"n_n", d[0]}, {"b_b", d[1]}, {"n_b", d[2]}, {"det", d[3]}};
}

inline int cmd_synthesize(const RunConfig& cfg, std::ostream& log) {
  detail::check_tolerances(cfg, {});
  report::json j = report::document("synthesize");
  j["mode"] = cfg.mode;
  if (cfg.mode == "normal") {
    const double kappa = detail::parse_number(cfg.kappa, "--kappa");
    const double tau = detail::parse_number(cfg.tau, "--tau");
    if (cfg.c.size() != 4) throw InputError("--c expects c1,c2,c3,c4");
    const double lo = cfg.s_min.value_or(-1.0), hi = cfg.s_max.value_or(1.0);
    const std::size_t n = cfg.samples.value_or(101);
    if (!(lo < hi) || n < 2) throw InputError("normal mode needs s_min < s_max and samples >= 2");
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const NormalSeries ser = synth_normal_components(kappa, tau, {cfg.c[0], cfg.c[1], cfg.c[2], cfg.c[3]}, grid);
    {
      auto csv = detail::open_output(cfg.output + ".csv");
      report::write_normal_series_csv(csv, ser);
    }
    j["parameters"] = {{"kappa", kappa}, {"tau", tau}, {"c", cfg.c}};
    j["grid"] = {{"s_min", lo}, {"s_max", hi}, {"samples", n}};
    const auto ode = normal_ode_residual([&](const Jet3& s) { return ser.form.xi(s); },
                                         [&](const Jet3& s) { return ser.form.eta(s); }, kappa, tau, grid);
    j["ode_residual"] = {{"r1", ode.r1}, {"r2", ode.r2}};
  } else {
    Trajectory tr;
    if (cfg.mode == "rectifying") {
      const double lo = cfg.s_min.value_or(-cfg.m1 + 0.2);
      const double hi = cfg.s_max.value_or(lo + 1.0);
      const RectifyingSynthesis syn =
          synth_rectifying(cfg.m1, cfg.n1, Expr::parse(cfg.kappa, "s"), lo, hi, cfg.step);
      tr = syn.trajectory;
      j["parameters"] = {{"m1", cfg.m1}, {"n1", cfg.n1}};
      j["profile"] = {{"kappa", syn.profile.kappa.to_infix()}, {"tau", syn.profile.tau.to_infix()},
                      {"s_min", lo}, {"s_max", hi}};
      j["conservation_spread"] = conservation_spread(tr, cfg.m1, cfg.n1);
    } else if (cfg.mode == "general") {
      const InvariantProfile p{Expr::parse(cfg.kappa, "s"), Expr::parse(cfg.tau, "s"),
                               cfg.s_min.value_or(0.0), cfg.s_max.value_or(1.0)};
      tr = integrate_frenet(p, canonical_state(p.s_min), cfg.step);
      j["profile"] = {{"kappa", p.kappa.to_infix()}, {"tau", p.tau.to_infix()},
                      {"s_min", p.s_min}, {"s_max", p.s_max}};
    } else {
      throw InputError("--mode must be rectifying, general or normal");
    }
    {
      auto csv = detail::open_output(cfg.output + ".csv");
      report::write_trajectory_csv(csv, tr, cfg.frame);
    }
    j["step"] = cfg.step;
    j["points"] = tr.states.size();
    j["drift"] = drift_json(tr);
  }
  detail::write_json_file(cfg.output + ".json", j);
  log << "wrote " << cfg.output << ".csv, " << cfg.output << ".json\n";
  return kOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  verify::Options opt;
  opt.seed = cfg.seed;
  opt.step = cfg.step;
  std::set<std::string> known;
  for (const auto& [k, v] : opt.tolerances) known.insert(k);
  detail::check_tolerances(cfg, known);
  for (const auto& [k, v] : cfg.tolerances) opt.tolerances[k] = v;
  const auto checks = verify::run_suite(opt);
  detail::write_json_file(cfg.output + ".json", verify::suite_json(opt, checks));
  for (const auto& c : checks) {
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " residual=" << report::format_double(c.residual)
        << " tol=" << report::format_double(c.tolerance) << '\n';
  }
  return verify::all_passed(checks) ? kOk : kVerificationFailed;
}

inline int cmd_plot_data(const RunConfig& cfg, std::ostream& log) {
  detail::check_tolerances(cfg, {"tol_adm"});
  const CurveDef c = detail::load_input(cfg);
  const double tol = detail::tol_adm(cfg);
  const auto rows = analyze_grid(c, tol, cfg.threads);
  std::vector<double> s, kappa, tau, ratio, beta;
  for (const auto& r : rows) {
    if (!r.frame) continue;
    s.push_back(r.s);
    kappa.push_back(r.frame->kappa);
    tau.push_back(r.frame->tau);
    ratio.push_back(r.frame->tau / r.frame->kappa);
    beta.push_back(decompose(*r.frame, c.position(r.s) - cfg.origin).beta);
  }
  const auto series = [&](const char* suffix, const std::vector<double>& y) {
    auto out = detail::open_output(cfg.output + suffix);
    report::write_series(out, s, y);
  };
  series("_kappa.dat", kappa);
  series("_tau.dat", tau);
  series("_tau_over_kappa.dat", ratio);
  series("_beta.dat", beta);
  log << "wrote " << s.size() << " points per series to " << cfg.output << "_*.dat\n";
  return s.size() == rows.size() ? kOk : kNotAdmissible;
}

inline int dispatch(const RunConfig& cfg, std::ostream& log) {
  if (cfg.output.empty()) throw InputError("--output must not be empty");
  if (cfg.samples && *cfg.samples < 2) throw InputError("--samples must be at least 2");
  if (!(cfg.step > 0.0)) throw InputError("--step must be positive");
  if (cfg.command == "analyze") return cmd_analyze(cfg, log);
  if (cfg.command == "classify") return cmd_classify(cfg, log);
  if (cfg.command == "synthesize") return cmd_synthesize(cfg, log);
  if (cfg.command == "verify") return cmd_verify(cfg, log);
  if (cfg.command == "plot-data") return cmd_plot_data(cfg, log);
  throw InputError("unknown command " + cfg.command);
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Curves in pseudo-Galilean space: analysis, classification, synthesis"};
  app.name("pgcurve");
  app.require_subcommand(1);

  RunConfig cfg;
  std::string origin_text;
  std::vector<std::string> tol_text;
  std::optional<double> s_min, s_max;
  std::optional<std::size_t> samples;

  const auto common = [&](CLI::App* sub, bool needs_input) {
    auto* in = sub->add_option("--input,-i", cfg.input, "curve JSON or sampled CSV");
    if (needs_input) in->required();
    sub->add_option("--output,-o", cfg.output, "output base path")->required();
    sub->add_option("--origin", origin_text, "reference point x,y,z (default 0,0,0)");
    sub->add_option("--tol-adm", cfg.tol_adm, "admissibility tolerance on |y''^2 - z''^2|");
    sub->add_option("--tol-classify", cfg.tol_classify, "classification tolerance");
    sub->add_option("--tol", tol_text, "named tolerance NAME=VALUE (repeatable)");
    sub->add_option("--s-min", s_min);
    sub->add_option("--s-max", s_max);
    sub->add_option("--samples", samples, "grid points");
    sub->add_option("--step", cfg.step, "integration step")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for randomized suites")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "workers for grid evaluation")->capture_default_str();
    sub->add_option("--knot-spacing", cfg.knot_spacing,
                    "thin sampled CSV input to about this knot spacing (0 keeps every row)")
        ->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Frenet frame, curvature and torsion on a grid");
  common(analyze, true);
  auto* classify = app.add_subcommand("classify", "rectifying / normal-curve classification");
  common(classify, true);
  classify->add_flag("--best-origin", cfg.best_origin,
                     "search the isotropic plane through --origin for the best reference point");
  auto* synth = app.add_subcommand("synthesize", "integrate the Frenet system for prescribed invariants");
  common(synth, false);
  synth->add_option("--mode", cfg.mode, "rectifying | general | normal")->capture_default_str();
  synth->add_option("--m1", cfg.m1)->capture_default_str();
  synth->add_option("--n1", cfg.n1)->capture_default_str();
  synth->add_option("--kappa", cfg.kappa, "curvature expression in s")->capture_default_str();
  synth->add_option("--tau", cfg.tau, "torsion expression in s (general, normal)")->capture_default_str();
  synth->add_option("--c", cfg.c, "c1,c2,c3,c4 (normal)")->delimiter(',')->expected(4);
  synth->add_flag("--frame", cfg.frame, "append frame columns");
  auto* verify = app.add_subcommand("verify", "run the oracle suite");
  common(verify, false);
  auto* plot = app.add_subcommand("plot-data", "two-column series of kappa, tau, tau/kappa, beta");
  common(plot, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.s_min = s_min;
    cfg.s_max = s_max;
    cfg.samples = samples;
    if (!origin_text.empty()) cfg.origin = detail::parse_origin(origin_text);
    for (const auto& t : tol_text) {
      const auto [name, v] = detail::parse_tol(t);
      cfg.tolerances[name] = v;
    }
    return dispatch(cfg, out);
  } catch (const NotAdmissible& e) {
    err << "pgcurve: not admissible: " << e.what() << '\n';
    return kNotAdmissible;
  } catch (const SingularFrame& e) {
    err << "pgcurve: singular frame: " << e.what() << '\n';
    return kNotAdmissible;
  } catch (const Error& e) {
    err << "pgcurve: " << e.what() << '\n';
    return kInputError;
  }
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  std::vector<const char*> argv{"pgcurve"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pgc::cli
