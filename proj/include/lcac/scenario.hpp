#pragma once

// Scenario files, JSON reports, and the fuzz driver behind the command-line tool.

#include "lcac/ambient.hpp"
#include "lcac/immersion.hpp"
#include "lcac/inequalities.hpp"
#include "lcac/invariants.hpp"
#include "lcac/parallel.hpp"
#include "lcac/subpoint.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace lcac {

using Json = nlohmann::ordered_json;

/// Malformed scenario (bad JSON, missing or mistyped field).
struct SchemaError : ConfigurationError {
  using ConfigurationError::ConfigurationError;
};

inline constexpr int schema_version = 1;

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"structure", "identity_tau", "scalar", "ricci", "k_ricci", "gauss_oracle", "classify"};
  return names;
}

struct Scenario {
  AmbientData ambient;
  enum class Kind { AlgebraicPoint, Immersion } kind = Kind::AlgebraicPoint;
  Matrix frame;  // columns: raw tangent vectors
  Sigma sigma;   // raw-frame coefficients, may be empty
  std::string immersion;
  Json params = Json::object();
  Vector chart_point;
  std::vector<std::string> checks;
  bool all_checks = false;  // "all": inapplicable checks are skipped, not errors
  std::vector<int> k;
  std::vector<Vector> directions;  // ambient unit vectors
  ReportTolerances tolerances;
  double gauss_tolerance = 5e-4;
  double identity_tolerance = 1e-9;
  double fd_step = 1e-4;
  SearchConfig search;
  std::uint64_t seed = 0;
  Json echo;
};

// ----------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string pointer(const std::string& path) { return path.empty() ? "<root>" : path; }

inline const Json& need(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(pointer(path) + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key + ": required field missing");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + ": expected a number");
  return j.get<double>();
}

inline int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return j.get<int>();
}

inline Vector vector_of(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

inline Matrix matrix_of(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a non-empty array of rows");
  Matrix m;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = vector_of(j[i], path + "[" + std::to_string(i) + "]");
    if (i == 0) m.resize(static_cast<Eigen::Index>(j.size()), row.size());
    if (row.size() != m.cols()) throw SchemaError(path + "[" + std::to_string(i) + "]: ragged matrix row");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

template <typename T>
void optional_field(const Json& obj, const std::string& key, T& out, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if constexpr (std::is_same_v<T, int> || std::is_same_v<T, unsigned>) {
    const int v = integer(*it, path + "." + key);
    if (v < 0) throw SchemaError(path + "." + key + ": must be non-negative");
    out = static_cast<T>(v);
  } else {
    out = number(*it, path + "." + key);
  }
}

/// "line L, column C" for a byte offset in the source text.
inline std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline Scenario parse_scenario(const Json& j) {
  using namespace detail;
  Scenario sc;
  sc.echo = j;
  if (!j.is_object()) throw SchemaError("<root>: scenario must be a JSON object");
  const int schema = integer(need(j, "schema", ""), ".schema");
  if (schema != schema_version) throw SchemaError(".schema: unsupported version " + std::to_string(schema) + " (expected 1)");

  const Json& amb = need(j, "ambient", "");
  const int m = integer(need(amb, "m", ".ambient"), ".ambient.m");
  if (m < 2) throw SchemaError(".ambient.m: must be >= 2");
  sc.ambient = standard_data(m);
  sc.ambient.c = amb.contains("c") ? number(amb["c"], ".ambient.c") : 0.0;
  sc.ambient.f = amb.contains("f") ? number(amb["f"], ".ambient.f") : 0.0;
  sc.ambient.f_prime = amb.contains("f_prime") ? number(amb["f_prime"], ".ambient.f_prime") : 0.0;
  if (amb.contains("phi")) sc.ambient.phi = matrix_of(amb["phi"], ".ambient.phi");
  if (amb.contains("xi")) sc.ambient.xi = vector_of(amb["xi"], ".ambient.xi");
  if (amb.contains("eta")) sc.ambient.eta = vector_of(amb["eta"], ".ambient.eta");

  const Json& sub = need(j, "submanifold", "");
  const Json& kind = need(sub, "kind", ".submanifold");
  if (!kind.is_string()) throw SchemaError(".submanifold.kind: expected a string");
  const std::string ks = kind.get<std::string>();
  const int d = 2 * m + 1;
  if (ks == "algebraic_point") {
    sc.kind = Scenario::Kind::AlgebraicPoint;
    if (sub.contains("name") || sub.contains("chart_point"))
      throw SchemaError(".submanifold: an algebraic point cannot also carry immersion fields");
    const Json& fr = need(sub, "frame", ".submanifold");
    if (!fr.is_array() || fr.empty()) throw SchemaError(".submanifold.frame: expected a non-empty array of vectors");
    sc.frame = Matrix(d, static_cast<Eigen::Index>(fr.size()));
    for (std::size_t i = 0; i < fr.size(); ++i) {
      const std::string path = ".submanifold.frame[" + std::to_string(i) + "]";
      const Vector v = vector_of(fr[i], path);
      if (v.size() != d) throw SchemaError(path + ": expected " + std::to_string(d) + " components");
      sc.frame.col(static_cast<Eigen::Index>(i)) = v;
    }
    if (sub.contains("sigma")) {
      const Json& sg = sub["sigma"];
      if (!sg.is_array()) throw SchemaError(".submanifold.sigma: expected an array [r][i][j]");
      for (std::size_t r = 0; r < sg.size(); ++r) sc.sigma.push_back(matrix_of(sg[r], ".submanifold.sigma[" + std::to_string(r) + "]"));
    }
  } else if (ks == "immersion") {
    sc.kind = Scenario::Kind::Immersion;
    if (sub.contains("frame") || sub.contains("sigma"))
      throw SchemaError(".submanifold: an immersion cannot also carry algebraic point fields");
    const Json& nm = need(sub, "name", ".submanifold");
    if (!nm.is_string()) throw SchemaError(".submanifold.name: expected a string");
    sc.immersion = nm.get<std::string>();
    if (sub.contains("params")) {
      if (!sub["params"].is_object()) throw SchemaError(".submanifold.params: expected an object");
      sc.params = sub["params"];
    }
    sc.chart_point = vector_of(need(sub, "chart_point", ".submanifold"), ".submanifold.chart_point");
  } else {
    throw SchemaError(".submanifold.kind: expected \"algebraic_point\" or \"immersion\", got \"" + ks + "\"");
  }

  const Json& checks = need(j, "checks", "");
  if (!checks.is_array()) throw SchemaError(".checks: expected an array of strings");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string path = ".checks[" + std::to_string(i) + "]";
    if (!checks[i].is_string()) throw SchemaError(path + ": expected a string");
    const std::string c = checks[i].get<std::string>();
    if (c == "all") {
      sc.all_checks = true;
      for (const auto& n : known_checks()) sc.checks.push_back(n);
      continue;
    }
    if (std::find(known_checks().begin(), known_checks().end(), c) == known_checks().end())
      throw SchemaError(path + ": unknown check \"" + c + "\"");
    sc.checks.push_back(c);
  }

  if (j.contains("k")) {
    if (!j["k"].is_array()) throw SchemaError(".k: expected an array of integers");
    for (std::size_t i = 0; i < j["k"].size(); ++i) sc.k.push_back(integer(j["k"][i], ".k[" + std::to_string(i) + "]"));
  }
  if (j.contains("directions")) {
    if (!j["directions"].is_array()) throw SchemaError(".directions: expected an array of vectors");
    for (std::size_t i = 0; i < j["directions"].size(); ++i) {
      const std::string path = ".directions[" + std::to_string(i) + "]";
      const Vector v = vector_of(j["directions"][i], path);
      if (v.size() != d) throw SchemaError(path + ": expected " + std::to_string(d) + " components");
      sc.directions.push_back(v);
    }
  }
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
    if (!t.is_object()) throw SchemaError(".tolerances: expected an object");
    optional_field(t, "holds", sc.tolerances.holds, ".tolerances");
    optional_field(t, "equality", sc.tolerances.equality, ".tolerances");
    optional_field(t, "gauss", sc.gauss_tolerance, ".tolerances");
    optional_field(t, "identity", sc.identity_tolerance, ".tolerances");
    optional_field(t, "fd_step", sc.fd_step, ".tolerances");
  }
  if (j.contains("search")) {
    const Json& s = j["search"];
    if (!s.is_object()) throw SchemaError(".search: expected an object");
    optional_field(s, "restarts", sc.search.restarts, ".search");
    optional_field(s, "net_size", sc.search.net_size, ".search");
    optional_field(s, "step_tol", sc.search.step_tol, ".search");
    optional_field(s, "max_iterations", sc.search.max_iterations, ".search");
    optional_field(s, "fd_step", sc.search.fd_step, ".search");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SchemaError(".seed: expected a non-negative integer");
    sc.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("trials") && !j["trials"].is_number_unsigned()) throw SchemaError(".trials: expected a non-negative integer");
  return sc;
}

inline Scenario parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("invalid JSON at " + detail::locate(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  return parse_scenario(j);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

/// Builds a catalog immersion from a name and parameter object.
inline ImmersionSpec immersion_from(int m, const std::string& name, const Json& params) {
  auto num = [&](const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    return detail::number(params[key], std::string(".submanifold.params.") + key);
  };
  auto integer = [&](const char* key, int fallback) {
    if (!params.contains(key)) return fallback;
    return detail::integer(params[key], std::string(".submanifold.params.") + key);
  };
  if (name == "linear_invariant") return catalog::linear_invariant(m, integer("h", 1));
  if (name == "linear_anti_invariant") return catalog::linear_anti_invariant(m, integer("q", 2));
  if (name == "linear_slant") return catalog::linear_slant(m, num("theta", std::numbers::pi / 3), integer("h", 1));
  if (name == "sphere_cylinder") return catalog::sphere_cylinder(m, num("r", 1.0), integer("n", 3));
  if (name == "torus_cylinder") return catalog::torus_cylinder(m, num("a", 2.0), num("b", 1.0));
  if (name == "graph") {
    const int n = integer("n", 3);
    std::vector<catalog::Monomial> height;
    if (params.contains("height")) {
      const Json& h = params["height"];
      if (!h.is_array()) throw SchemaError(".submanifold.params.height: expected an array of monomials");
      for (std::size_t i = 0; i < h.size(); ++i) {
        const std::string path = ".submanifold.params.height[" + std::to_string(i) + "]";
        catalog::Monomial mono;
        mono.coef = detail::number(detail::need(h[i], "coef", path), path + ".coef");
        const Json& pw = detail::need(h[i], "powers", path);
        if (!pw.is_array()) throw SchemaError(path + ".powers: expected an array of integers");
        for (std::size_t a = 0; a < pw.size(); ++a) mono.powers.push_back(detail::integer(pw[a], path + ".powers[" + std::to_string(a) + "]"));
        height.push_back(mono);
      }
    }
    return catalog::graph(m, n, height);
  }
  throw SchemaError(".submanifold.name: unknown immersion \"" + name + "\"");
}

// ----------------------------------------------------------------------------
// Serialization

namespace detail {

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vector(m.row(i).transpose())));
  return a;
}

inline Json to_json(const Riemann4& r) {
  const int n = r.n();
  Json a = Json::array();
  for (int i = 0; i < n; ++i) {
    Json b = Json::array();
    for (int j = 0; j < n; ++j) {
      Json c = Json::array();
      for (int k = 0; k < n; ++k) {
        Json d = Json::array();
        for (int l = 0; l < n; ++l) d.push_back(r(i, j, k, l));
        c.push_back(d);
      }
      b.push_back(c);
    }
    a.push_back(b);
  }
  return a;
}

inline Json nullable(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace detail

inline Json to_json(const InequalityReport& r) {
  Json j;
  j["name"] = r.name;
  j["sense"] = r.sense == Sense::AtMost ? "lhs<=rhs" : "lhs>=rhs";
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["slack"] = r.slack;
  j["holds"] = r.holds;
  j["equality"] = r.equality;
  j["equality_by_slack"] = r.equality_by_slack;
  j["classification_used"] = r.classification_used;
  if (r.direction) j["direction"] = detail::to_json(*r.direction);
  if (r.k > 0) j["k"] = r.k;
  Json d;
  d["kind"] = to_string(r.diagnosis.kind);
  if (r.diagnosis.characterization) {
    d["characterization"] = *r.diagnosis.characterization;
    d["characterization_residual"] = r.diagnosis.characterization_residual;
  }
  if (r.diagnosis.in_null_space) d["in_relative_null_space"] = *r.diagnosis.in_null_space;
  if (!r.diagnosis.note.empty()) d["note"] = r.diagnosis.note;
  j["diagnosis"] = d;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json to_json(const Classification& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["slant_angle"] = detail::nullable(c.slant_angle);
  j["norm_p_sq"] = c.norm_p_sq;
  j["angle_min"] = c.angle_min;
  j["angle_max"] = c.angle_max;
  j["angle_spread"] = c.angle_max - c.angle_min;
  j["samples"] = c.samples;
  j["ptp_eigenvalues"] = detail::to_json(c.ptp_eigenvalues);
  if (c.h >= 0) {
    j["h"] = c.h;
    j["dim_d_perp"] = c.dim_d_perp;
  }
  return j;
}

inline Json to_json(const ThetaK& t) {
  Json j;
  j["k"] = t.k;
  j["value"] = t.value;
  j["argmin_x"] = detail::to_json(t.argmin_x);
  j["certified_inner"] = t.certified_inner;
  j["heuristic_outer"] = t.heuristic_outer;
  j["restarts_used"] = t.restarts_used;
  j["evaluations"] = t.evaluations;
  j["budget_exhausted"] = t.budget_exhausted;
  if (!t.warning.empty()) j["warning"] = t.warning;
  return j;
}

// ----------------------------------------------------------------------------
// Running a scenario

struct RunResult {
  Json report;
  int exit_code = 0;  // 0 verdict true, 1 a check failed, 2 configuration error
};

inline Json error_report(const std::string& kind, const std::string& message) {
  Json j;
  j["schema"] = schema_version;
  j["verdict"] = false;
  j["error"] = {{"kind", kind}, {"message", message}};
  return j;
}

/// Executes the checks in declared order. Configuration problems surface as
/// exceptions; run_scenario_guarded maps them to exit code 2.
inline RunResult execute(const Scenario& sc, unsigned jobs = 1) {
  const AmbientStructure s(sc.ambient);
  std::optional<ImmersionSpec> spec;
  SubmanifoldPoint p = [&] {
    if (sc.kind == Scenario::Kind::AlgebraicPoint) return build_point(s, sc.frame, sc.sigma);
    spec = immersion_from(sc.ambient.m, sc.immersion, sc.params);
    if (!s.is_flat()) throw ConfigurationError("immersions live in the flat model: set c = f = f_prime = 0");
    if (sc.chart_point.size() != spec->chart_dim)
      throw SchemaError(".submanifold.chart_point: expected " + std::to_string(spec->chart_dim) + " coordinates");
    return point_from_immersion(s, *spec, sc.chart_point);
  }();
  const int n = p.n();
  for (int k : sc.k)
    if (k < 2 || k > n) throw ConfigurationError("k out of range [2," + std::to_string(n) + "], got " + std::to_string(k));

  std::vector<Vector> dirs;
  for (std::size_t i = 0; i < sc.directions.size(); ++i) {
    const Vector& v = sc.directions[i];
    if (std::abs(v.norm() - 1.0) > tol::derived) throw ConfigurationError(".directions[" + std::to_string(i) + "]: not a unit vector");
    try {
      dirs.push_back(p.to_tangent(v));
    } catch (const DomainError&) {
      throw ConfigurationError(".directions[" + std::to_string(i) + "]: not tangent to the submanifold");
    }
  }

  const PointSummary ps = summarize(s, p);
  const Classification cls = classify(s, p);
  if (dirs.empty()) {
    for (int i = 0; i < n; ++i) dirs.push_back(Vector::Unit(n, i));
    // exercise the CR bounds on D and D-perp as well
    if (cls.kind == SubmanifoldKind::CR) {
      if (cls.h > 0) dirs.push_back(cls.d_basis.col(0));
      if (cls.dim_d_perp > 0) dirs.push_back(cls.d_perp_basis.col(0));
    }
  }

  SearchConfig search = sc.search;
  search.jobs = jobs;

  Json report;
  report["schema"] = schema_version;
  report["scenario"] = sc.echo;
  Json point;
  point["n"] = n;
  point["ambient_dim"] = p.ambient_dim();
  point["tangent_frame"] = detail::to_json(Matrix(p.tangent().transpose()));
  point["mean_curvature_sq"] = ps.h2;
  point["sigma_norm_sq"] = ps.sigma2;
  point["scalar_curvature"] = ps.ic.tau;
  point["norm_p_sq"] = ps.norm_p2;
  report["point"] = point;
  report["classification"] = to_json(cls);

  Json checks = Json::array();
  bool verdict = true;
  for (const auto& name : sc.checks) {
    Json c;
    c["check"] = name;
    bool pass = true;
    if (name == "structure") {
      const ValidationReport v = validate_structure(sc.ambient);
      Json viol = Json::array();
      for (const auto& x : v.violations) viol.push_back({{"identity", x.identity}, {"residual", x.residual}});
      c["violations"] = viol;
      pass = v.ok();
    } else if (name == "classify") {
      c["classification"] = to_json(cls);
    } else if (name == "identity_tau") {
      const TauIdentity t = identity_tau_check(ps);
      const SigmaNorms sn = sigma_norms(p);
      const double hs = std::abs(sn.norm_sq - sn.rhs) / (1.0 + sn.norm_sq);
      c["lhs"] = t.lhs;
      c["rhs"] = t.rhs;
      c["normalized_residual"] = t.normalized();
      c["h_sigma_normalized_residual"] = hs;
      pass = t.normalized() < sc.identity_tolerance && hs < sc.identity_tolerance;
    } else if (name == "scalar") {
      Json rs = Json::array();
      for (const auto& r : scalar_suite(ps, cls, sc.tolerances)) {
        rs.push_back(to_json(r));
        pass = pass && r.holds;
      }
      c["reports"] = rs;
    } else if (name == "ricci") {
      Json rs = Json::array();
      for (const auto& x : dirs)
        for (const auto& r : ricci_suite(p, ps, x, cls, sc.tolerances)) {
          rs.push_back(to_json(r));
          pass = pass && r.holds;
        }
      c["reports"] = rs;
      const RicciSweep sw = ricci_equality_sweep(p, ps, 256, sc.tolerances);
      c["equality_for_all_directions"] = {{"coefficient_conditions", sw.coefficient_conditions},
                                          {"coefficient_residual", sw.coefficient_residual},
                                          {"frame_equality_all", sw.frame_equality_all},
                                          {"sampled_equality_all", sw.sampled_equality_all},
                                          {"sampled", sw.sampled},
                                          {"conclusion", to_string(sw.conclusion)},
                                          {"consistent", sw.consistent}};
    } else if (name == "k_ricci") {
      std::vector<ThetaK> thetas;
      Json meta = Json::array();
      for (int k : sc.k) {
        thetas.push_back(theta_k(ps.ic, k, search));
        meta.push_back(to_json(thetas.back()));
      }
      c["theta_k"] = meta;
      Json rs = Json::array();
      for (const auto& r : kricci_suite(ps, cls, thetas, sc.tolerances)) {
        rs.push_back(to_json(r));
        pass = pass && r.holds;
      }
      c["reports"] = rs;
    } else if (name == "gauss_oracle") {
      if (!spec && sc.all_checks) {
        c["skipped"] = "needs an immersion submanifold";
        c["pass"] = true;
        checks.push_back(c);
        continue;
      }
      if (!spec) throw ConfigurationError("gauss_oracle needs an immersion submanifold");
      const GaussResidual g = gauss_residual(s, *spec, sc.chart_point, sc.fd_step);
      c["residual"] = g.residual;
      c["tolerance"] = sc.gauss_tolerance;
      c["step"] = g.intrinsic.step;
      if (!g.intrinsic.warning.empty()) c["warning"] = g.intrinsic.warning;
      c["gauss_tensor"] = detail::to_json(g.induced.R);
      c["intrinsic_tensor"] = detail::to_json(g.intrinsic.frame);
      pass = g.residual < sc.gauss_tolerance;
    }
    c["pass"] = pass;
    verdict = verdict && pass;
    checks.push_back(c);
  }
  report["checks"] = checks;
  report["verdict"] = verdict;
  return {report, verdict ? 0 : 1};
}

/// Loads, validates and runs a scenario; never throws.
inline RunResult run_scenario(const std::string& path, unsigned jobs = 1, std::optional<std::uint64_t> seed = {}) {
  try {
    Scenario sc = load_scenario(path);
    if (seed) sc.seed = *seed;
    return execute(sc, jobs);
  } catch (const SchemaError& e) {
    return {error_report("schema", e.what()), 2};
  } catch (const HypothesisViolation& e) {
    return {error_report("hypothesis violation", e.what()), 2};
  } catch (const ConfigurationError& e) {
    return {error_report("configuration", e.what()), 2};
  } catch (const StructuralError& e) {
    return {error_report("structure", e.what()), 2};
  } catch (const DataError& e) {
    return {error_report("data", e.what()), 2};
  } catch (const DomainError& e) {
    return {error_report("domain", e.what()), 2};
  }
}

// ----------------------------------------------------------------------------
// Fuzzing

struct FuzzConfig {
  int n = 4;
  int m = 3;
  std::size_t trials = 10000;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  bool zero_sigma = false;
  int ricci_directions = 8;
};

struct FuzzDraw {
  AmbientStructure ambient;
  SubmanifoldPoint point;
};

/// Trial `index` of a fuzz run: a randomly rotated structure with (c, f, f')
/// in [-10, 10]^3, a random n-frame containing xi, and sigma entries in [-10, 10].
inline FuzzDraw fuzz_draw(const FuzzConfig& cfg, std::size_t index) {
  SplitMix64 rng(cfg.seed, index);
  const int d = 2 * cfg.m + 1, n = cfg.n;
  const double c = rng.uniform(-10, 10), f = rng.uniform(-10, 10), fp = rng.uniform(-10, 10);

  Matrix g(d, d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.gaussian();
  const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  AmbientStructure s(rotated(standard_data(cfg.m, c, f, fp), q));

  // xi plus gaussian vectors, mixed so xi is not a raw column
  Matrix raw(d, n);
  raw.col(0) = s.xi();
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < d; ++i) raw(i, j) = rng.gaussian();
  Matrix mix(n, n);
  for (Eigen::Index i = 0; i < mix.size(); ++i) mix.data()[i] = rng.gaussian();
  mix += 2.0 * Matrix::Identity(n, n);
  const SubmanifoldPoint bare = build_point(s, Matrix(raw * mix));

  Sigma sigma(static_cast<std::size_t>(bare.codim()), Matrix::Zero(n, n));
  if (!cfg.zero_sigma)
    for (auto& a : sigma)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) a(i, j) = a(j, i) = rng.uniform(-10, 10);
  return {s, bare.with_sigma(std::move(sigma))};
}

struct FuzzTrial {
  double identity_residual = 0.0;
  double h_sigma_residual = 0.0;
  double scalar_slack = 0.0, scalar_norm_slack = 0.0;
  bool scalar_equality = false, scalar_holds = true;
  double ricci_slack = std::numeric_limits<double>::infinity(), ricci_norm_slack = std::numeric_limits<double>::infinity();
  bool ricci_holds = true;
  int ricci_equalities = 0;
  double kricci_slack = 0.0, kricci_norm_slack = 0.0;
  bool kricci_holds = true;
};

inline FuzzTrial fuzz_trial(const FuzzConfig& cfg, std::size_t index) {
  const FuzzDraw draw = fuzz_draw(cfg, index);
  const PointSummary ps = summarize(draw.ambient, draw.point);
  FuzzTrial t;
  t.identity_residual = identity_tau_check(ps).normalized();
  const SigmaNorms sn = sigma_norms(draw.point);
  t.h_sigma_residual = std::abs(sn.norm_sq - sn.rhs) / (1.0 + sn.norm_sq);

  auto normalized = [](const InequalityReport& r) { return r.slack / (1.0 + std::abs(r.lhs) + std::abs(r.rhs)); };
  const Classification generic;
  const auto sc = scalar_bound(ps, generic, ScalarVariant::General);
  t.scalar_slack = sc.slack;
  t.scalar_norm_slack = normalized(sc);
  t.scalar_holds = sc.holds;
  t.scalar_equality = sc.equality;

  SplitMix64 dir_rng(cfg.seed ^ 0xD1B54A32D192ED03ULL, index);
  for (int i = 0; i < cfg.ricci_directions; ++i) {
    Vector x(cfg.n);
    for (int a = 0; a < cfg.n; ++a) x(a) = dir_rng.gaussian();
    x.normalize();
    const auto r = ricci_bound(draw.point, ps, x, generic, RicciVariant::General);
    t.ricci_slack = std::min(t.ricci_slack, r.slack);
    t.ricci_norm_slack = std::min(t.ricci_norm_slack, normalized(r));
    t.ricci_holds = t.ricci_holds && r.holds;
    t.ricci_equalities += r.equality ? 1 : 0;
  }
  const auto kr = kricci_bound(ps);
  t.kricci_slack = kr.slack;
  t.kricci_norm_slack = normalized(kr);
  t.kricci_holds = kr.holds;
  return t;
}

struct FuzzSummary {
  Json report;
  std::size_t violations = 0;
};

inline FuzzSummary fuzz(const FuzzConfig& cfg) {
  if (cfg.m < 2) throw ConfigurationError("fuzz needs m >= 2");
  if (cfg.n < 2 || cfg.n > 2 * cfg.m + 1)
    throw ConfigurationError("fuzz needs 2 <= n <= 2m+1 = " + std::to_string(2 * cfg.m + 1) + ", got n = " + std::to_string(cfg.n));
  if (cfg.trials < 1) throw ConfigurationError("fuzz needs trials >= 1");

  const auto trials = parallel_map(cfg.trials, cfg.jobs, [&](std::size_t i) { return fuzz_trial(cfg, i); });

  struct Bound {
    double min_slack = std::numeric_limits<double>::infinity();
    double min_normalized_slack = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    std::size_t equalities = 0;
    std::size_t evaluated = 0;
    Json json() const {
      return {{"evaluated", evaluated},
              {"min_slack", min_slack},
              {"min_normalized_slack", min_normalized_slack},
              {"violations", violations},
              {"equality_flags", equalities}};
    }
  } scalar, ricci, kricci;
  double max_identity = 0.0, max_h_sigma = 0.0;
  std::size_t identity_violations = 0;
  for (const auto& t : trials) {
    max_identity = std::max(max_identity, t.identity_residual);
    max_h_sigma = std::max(max_h_sigma, t.h_sigma_residual);
    if (!(t.identity_residual < tol::holds) || !(t.h_sigma_residual < tol::holds)) ++identity_violations;
    auto fold = [](Bound& b, double s, double ns, bool holds, std::size_t eq, std::size_t count) {
      b.min_slack = std::min(b.min_slack, s);
      b.min_normalized_slack = std::min(b.min_normalized_slack, ns);
      b.violations += holds ? 0 : 1;
      b.equalities += eq;
      b.evaluated += count;
    };
    fold(scalar, t.scalar_slack, t.scalar_norm_slack, t.scalar_holds, t.scalar_equality ? 1 : 0, 1);
    fold(ricci, t.ricci_slack, t.ricci_norm_slack, t.ricci_holds, static_cast<std::size_t>(t.ricci_equalities),
         static_cast<std::size_t>(cfg.ricci_directions));
    fold(kricci, t.kricci_slack, t.kricci_norm_slack, t.kricci_holds, 0, 1);
  }

  FuzzSummary out;
  out.violations = identity_violations + scalar.violations + ricci.violations + kricci.violations;
  Json j;
  j["schema"] = schema_version;
  j["mode"] = "fuzz";
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["zero_sigma"] = cfg.zero_sigma;
  j["ricci_directions_per_trial"] = cfg.ricci_directions;
  j["identities"] = {{"tau_max_normalized_residual", max_identity},
                     {"h_sigma_max_normalized_residual", max_h_sigma},
                     {"violations", identity_violations}};
  j["bounds"] = {{"scalar-lc", scalar.json()}, {"ricci-1", ricci.json()}, {"kricci", kricci.json()}};
  j["violations"] = out.violations;
  j["verdict"] = out.violations == 0;
  out.report = j;
  return out;
}

inline Json catalog_listing() {
  Json a = Json::array();
  for (const auto& e : catalog::entries()) a.push_back({{"name", e.name}, {"parameters", e.parameters}, {"description", e.description}});
  return {{"schema", schema_version}, {"ambient", "flat model R^{2m+1}, c = f = f_prime = 0"}, {"immersions", a}};
}

}  // namespace lcac
