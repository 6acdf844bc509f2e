#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pgcurves/classify.hpp"
#include "pgcurves/curve.hpp"
#include "pgcurves/error.hpp"
#include "pgcurves/frenet.hpp"
#include "pgcurves/synth.hpp"

namespace pgc::report {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// %.17g; NaN and infinities have no JSON spelling and become null.
inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_string(std::ostream& os, const std::string& s) {
  // nlohmann's escaping is fine; only float formatting needs to be pinned.
  os << json(s).dump();
}

inline void write_value(std::ostream& os, const json& j, int indent, int depth) {
  const auto pad = [&](int d) { os << std::string(static_cast<std::size_t>(indent * d), ' '); };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        pad(depth + 1);
        write_string(os, it.key());
        os << ": ";
        write_value(os, it.value(), indent, depth + 1);
      }
      os << '\n';
      pad(depth);
      os << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_value(os, j[i], indent, depth + 1);
        }
        os << ']';
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        pad(depth + 1);
        write_value(os, j[i], indent, depth + 1);
      }
      os << '\n';
      pad(depth);
      os << ']';
      return;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    case json::value_t::string:
      write_string(os, j.get<std::string>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Deterministic serialization: sorted keys, every float as %.17g.
inline void write_json(std::ostream& os, const json& j, int indent = 2) {
  detail::write_value(os, j, indent, 0);
  os << '\n';
}

inline std::string to_json_string(const json& j) {
  std::ostringstream os;
  write_json(os, j);
  return os.str();
}

inline json vec_json(const PGVector3& v) { return json::array({v.x, v.y, v.z}); }

/// New report object with the schema tag.
inline json document(const std::string& command) {
  json j = json::object();
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

inline json curve_json(const CurveDef& c) {
  json j;
  if (const auto* a = c.as_analytic()) {
    j["mode"] = "analytic";
    j["y"] = a->y.to_infix();
    j["z"] = a->z.to_infix();
  } else {
    j["mode"] = "sampled";
    j["knots"] = c.as_sampled()->y.knots().size();
    j["x_offset"] = c.x_offset();
  }
  j["s_min"] = c.s_min();
  j["s_max"] = c.s_max();
  j["samples"] = c.samples();
  return j;
}

inline json admissibility_json(const AdmissibilityReport& r) {
  json j;
  j["admissible"] = r.admissible;
  j["tol_adm"] = r.tol_adm;
  j["grid_points"] = r.grid_points;
  json v = json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"s", x.s}, {"discriminant", x.discriminant}, {"crossing", x.crossing}});
  }
  j["violations"] = v;
  json seg = json::array();
  for (const auto& [a, b] : r.segments) seg.push_back(json::array({a, b}));
  j["segments"] = seg;
  return j;
}

// ---------------------------------------------------------------------------
// Frenet analysis.

inline const std::vector<std::string>& analysis_columns() {
  static const std::vector<std::string> cols{"s",   "kappa", "tau", "eps",   "t_y",   "t_z",  "n_y",
                                             "n_z", "b_y",   "b_z", "res_t", "res_n", "res_b"};
  return cols;
}

inline std::vector<double> analysis_row(const FrenetSample& row) {
  const FrenetData& f = *row.frame;
  return {row.s,  f.kappa, f.tau,  static_cast<double>(f.eps), f.t.y, f.t.z, f.n.y,
          f.n.z,  f.b.y,   f.b.z,  row.residuals.t,            row.residuals.n, row.residuals.b};
}

inline void write_csv_row(std::ostream& os, const std::vector<double>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << format_double(v[i]);
  }
  os << '\n';
}

inline void write_csv_header(std::ostream& os, const std::vector<std::string>& cols) {
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
}

/// One line per admissible grid point; inadmissible points are listed in the JSON report.
inline void write_analysis_csv(std::ostream& os, const std::vector<FrenetSample>& rows) {
  write_csv_header(os, analysis_columns());
  for (const auto& r : rows) {
    if (r.frame) write_csv_row(os, analysis_row(r));
  }
}

inline json analysis_json(const CurveDef& c, const AdmissibilityReport& adm,
                          const std::vector<FrenetSample>& rows) {
  json j = document("analyze");
  j["curve"] = curve_json(c);
  j["admissibility"] = admissibility_json(adm);
  j["tolerances"] = {{"tol_adm", adm.tol_adm}};
  j["columns"] = analysis_columns();
  json data = json::array();
  double res_max = 0.0;
  double k_lo = INFINITY, k_hi = -INFINITY, t_lo = INFINITY, t_hi = -INFINITY;
  for (const auto& r : rows) {
    if (!r.frame) continue;
    data.push_back(analysis_row(r));
    res_max = std::max({res_max, r.residuals.t, r.residuals.n, r.residuals.b});
    k_lo = std::min(k_lo, r.frame->kappa);
    k_hi = std::max(k_hi, r.frame->kappa);
    t_lo = std::min(t_lo, r.frame->tau);
    t_hi = std::max(t_hi, r.frame->tau);
  }
  j["rows"] = data;
  j["summary"] = {{"frames", data.size()},  {"kappa_min", k_lo}, {"kappa_max", k_hi},
                  {"tau_min", t_lo},        {"tau_max", t_hi},   {"max_frenet_residual", res_max}};
  return j;
}

// ---------------------------------------------------------------------------
// Classification.

struct Classification {
  std::string verdict = "neither";  // rectifying | normal-fit | neither
  PGVector3 origin;
  double tol_classify = 0.0;
  double tol_adm = kDefaultTolAdm;
  RectifyingVerdict rectifying;
  std::optional<RectifyingProperties> properties;
  std::optional<NormalFit> normal;
  std::string normal_note;  // why no normal fit was attempted
};

inline json classification_json(const CurveDef& c, const Classification& r) {
  json j = document("classify");
  j["curve"] = curve_json(c);
  j["verdict"] = r.verdict;
  j["origin"] = vec_json(r.origin);
  j["tolerances"] = {{"tol_classify", r.tol_classify}, {"tol_adm", r.tol_adm}};

  const RectifyingVerdict& v = r.rectifying;
  json p;
  p["m1"] = v.m1;
  p["n1"] = v.n1;
  p["a"] = v.a;
  p["b"] = v.b_coef;
  if (r.normal) {
    p["kappa"] = r.normal->kappa0;
    p["tau"] = r.normal->tau0;
    for (std::size_t k = 0; k < 4; ++k) p["c" + std::to_string(k + 1)] = r.normal->c[k];
  } else {
    for (const char* key : {"kappa", "tau", "c1", "c2", "c3", "c4"}) p[key] = nullptr;
  }
  j["parameters"] = p;

  json res;
  res["beta_max"] = v.beta_max;
  res["ratio_residual"] = v.ratio_residual;
  res["rho_check"] = v.rho_check;
  res["gamma_spread"] = v.gamma_spread;
  res["slope_consistency"] = v.slope_consistency;
  res["intercept_consistency"] = v.intercept_consistency;
  if (r.normal) {
    res["xi_residual"] = r.normal->xi_residual;
    res["eta_residual"] = r.normal->eta_residual;
  }
  j["residuals"] = res;

  // tau/kappa = -(s + m1)/n1 is the convention; report the fitted sign so a
  // consumer using the opposite convention can tell which one the data obeys.
  j["sign_convention"] = {{"expected", "tau/kappa = -(s + m1)/n1"},
                          {"a_times_n1", v.a * v.n1},
                          {"binormal_sign", v.binormal_sign}};
  if (r.properties) {
    const RectifyingProperties& q = *r.properties;
    j["rectifying_properties"] = {
        {"tol", q.tol},
        {"distance_law", {{"pass", q.distance_law}, {"residual", q.distance_residual}}},
        {"tangential_component",
         {{"pass", q.tangential_component}, {"residual", q.tangential_residual}}},
        {"normal_length_constant",
         {{"pass", q.normal_length_constant},
          {"length", q.normal_length},
          {"spread", q.normal_length_spread},
          {"distance_spread", q.distance_spread}}},
        {"binormal_constant",
         {{"pass", q.binormal_constant},
          {"spread", q.binormal_spread},
          {"min_abs_tau", q.min_abs_tau}}}};
  }
  if (!r.normal_note.empty()) j["normal_fit_note"] = r.normal_note;
  return j;
}

// ---------------------------------------------------------------------------
// Synthesized curves and plot series.

/// CSV s, x, y, z with optional frame columns t_y .. b_z.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr, bool with_frame) {
  std::vector<std::string> cols{"s", "x", "y", "z"};
  if (with_frame) cols.insert(cols.end(), {"t_y", "t_z", "n_y", "n_z", "b_y", "b_z"});
  write_csv_header(os, cols);
  for (const auto& st : tr.states) {
    std::vector<double> v{st.s, st.r.x, st.r.y, st.r.z};
    if (with_frame) v.insert(v.end(), {st.t.y, st.t.z, st.n.y, st.n.z, st.b.y, st.b.z});
    write_csv_row(os, v);
  }
}

inline void write_normal_series_csv(std::ostream& os, const NormalSeries& ser) {
  write_csv_header(os, {"s", "xi", "eta"});
  for (std::size_t i = 0; i < ser.s.size(); ++i) write_csv_row(os, {ser.s[i], ser.xi[i], ser.eta[i]});
}

/// Two whitespace-separated columns, one point per line.
inline void write_series(std::ostream& os, const std::vector<double>& x, const std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) os << format_double(x[i]) << ' ' << format_double(y[i]) << '\n';
}

// ---------------------------------------------------------------------------
// Input.

struct LoadedCurve {
  CurveDef curve;
  std::string description;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw InputError(path + ": read error");
  return ss.str();
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

inline double number_field(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw InputError(path + ": missing field \"" + key + "\"");
  if (!j[key].is_number()) throw InputError(path + ": field \"" + key + "\" must be a number");
  return j[key].get<double>();
}

inline Expr expr_field(const json& j, const std::string& path, const char* key,
                       const std::string& param) {
  if (!j.contains(key)) throw InputError(path + ": missing field \"" + key + "\"");
  if (!j[key].is_string()) throw InputError(path + ": field \"" + key + "\" must be a string");
  try {
    return Expr::parse(j[key].get<std::string>(), param);
  } catch (const LexError& e) {
    throw InputError(path + ": field \"" + key + "\": " + e.what());
  } catch (const ParseError& e) {
    throw InputError(path + ": field \"" + key + "\": " + e.what());
  }
}

}  // namespace detail

inline constexpr std::size_t kDefaultSamples = 1001;

/// Curve-definition JSON: {"param", "y", "z", "s_min", "s_max"} plus optional
/// "samples". With an "x" expression the curve is given in a general
/// parameter over ["t_min", "t_max"] and is reparametrized by x.
inline LoadedCurve curve_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path + ": top level must be a JSON object");
  const std::string param = j.value("param", std::string(j.contains("x") ? "t" : "s"));
  std::size_t samples = kDefaultSamples;
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer() || j["samples"].get<long long>() < 2) {
      throw InputError(path + ": field \"samples\" must be an integer >= 2");
    }
    samples = j["samples"].get<std::size_t>();
  }
  const Expr y = detail::expr_field(j, path, "y", param);
  const Expr z = detail::expr_field(j, path, "z", param);
  if (j.contains("x")) {
    const Expr x = detail::expr_field(j, path, "x", param);
    const double t0 = detail::number_field(j, path, "t_min");
    const double t1 = detail::number_field(j, path, "t_max");
    return {reparametrize_graph(x, y, z, t0, t1, samples), path};
  }
  const double s0 = detail::number_field(j, path, "s_min");
  const double s1 = detail::number_field(j, path, "s_max");
  return {CurveDef::analytic(y, z, s0, s1, samples), path};
}

inline LoadedCurve load_curve_json(const std::string& path) {
  const std::string text = detail::read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(path + ":" + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  return curve_from_json(j, path);
}

/// Sampled curve CSV with a header naming at least s, x, y, z (any order;
/// other columns ignored). Blank lines and '#' comments are skipped.
/// knot_spacing > 0 keeps only every k-th row, k chosen so knots sit about
/// that far apart.
inline LoadedCurve load_curve_csv(const std::string& path, double knot_spacing = 0.0) {
  std::istringstream in(detail::read_file(path));
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;
  const auto split = [](const std::string& l) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(l);
    while (std::getline(ss, cell, ',')) {
      const auto a = cell.find_first_not_of(" \t\r");
      const auto b = cell.find_last_not_of(" \t\r");
      out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto cells = split(line);
    if (header.empty()) {
      header = cells;
      cols.assign(header.size(), {});
      continue;
    }
    if (cells.size() != header.size()) {
      throw InputError(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(header.size()) + " fields, found " +
                       std::to_string(cells.size()));
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cells[k], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cells[k].size() || cells[k].empty() || !std::isfinite(v)) {
        throw InputError(path + ":" + std::to_string(lineno) + ": bad number '" + cells[k] +
                         "' in column " + header[k]);
      }
      cols[k].push_back(v);
    }
  }
  if (header.empty()) throw InputError(path + ": empty file");
  const auto column = [&](const char* name) -> std::vector<double>& {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == name) return cols[k];
    }
    throw InputError(path + ":1: missing column '" + std::string(name) + "'");
  };
  std::vector<double> s = column("s"), x = column("x"), y = column("y"), z = column("z");
  if (knot_spacing > 0.0 && s.size() > 1) {
    const double h = (s.back() - s.front()) / static_cast<double>(s.size() - 1);
    const std::size_t max_k = (s.size() - 1) / (HermiteSpline::stencil - 1);
    const std::size_t k = std::clamp<std::size_t>(
        static_cast<std::size_t>(knot_spacing / h + 0.5), 1, std::max<std::size_t>(1, max_k));
    std::vector<double> s2, x2, y2, z2;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i % k == 0 || i + 1 == s.size()) {
        s2.push_back(s[i]);
        x2.push_back(x[i]);
        y2.push_back(y[i]);
        z2.push_back(z[i]);
      }
    }
    s.swap(s2);
    x.swap(x2);
    y.swap(y2);
    z.swap(z2);
  }
  try {
    return {CurveDef::sampled(std::move(s), x, std::move(y), std::move(z)), path};
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

/// Dispatch on extension: .csv is sampled, anything else is curve JSON.
inline LoadedCurve load_curve(const std::string& path, double knot_spacing = 0.0) {
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  return csv ? load_curve_csv(path, knot_spacing) : load_curve_json(path);
}

}  // namespace pgc::report
