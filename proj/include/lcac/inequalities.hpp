#pragma once

// Curvature inequalities for submanifolds tangent to xi, their specialized
// forms for slant / invariant / anti-invariant / CR points, and equality
// diagnosis. Each right-hand side is assembled term by term from its own
// closed form; specializations are not derived from the general bound in
// code, so the two can be checked against each other.

#include "lcac/ambient.hpp"
#include "lcac/invariants.hpp"
#include "lcac/linalg.hpp"
#include "lcac/subpoint.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcac {

enum class Sense { AtMost, AtLeast };  // lhs <= rhs, lhs >= rhs

enum class DiagnosisKind { None, TotallyGeodesic, TotallyUmbilical, InRelativeNullSpace, RicciEqualityConditions };

inline const char* to_string(DiagnosisKind k) {
  switch (k) {
    case DiagnosisKind::None: return "none";
    case DiagnosisKind::TotallyGeodesic: return "totally geodesic";
    case DiagnosisKind::TotallyUmbilical: return "totally umbilical";
    case DiagnosisKind::InRelativeNullSpace: return "X in relative null space";
    case DiagnosisKind::RicciEqualityConditions: return "Ricci equality conditions";
  }
  return "?";
}

struct Diagnosis {
  DiagnosisKind kind = DiagnosisKind::None;
  /// Equality certified by the exact coefficient characterization, when one exists.
  std::optional<bool> characterization;
  double characterization_residual = 0.0;
  /// Minimal point (H = 0): whether X lies in the relative null space.
  std::optional<bool> in_null_space;
  std::string note;
};

struct InequalityReport {
  std::string name;
  Sense sense = Sense::AtMost;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // >= 0 iff the bound holds
  bool holds = false;
  bool equality = false;
  bool equality_by_slack = false;
  Diagnosis diagnosis;
  std::string classification_used;
  std::optional<Vector> direction;  // Ricci bounds: X in tangent coordinates
  int k = 0;                        // k-Ricci bounds
  std::string note;
};

struct ReportTolerances {
  double holds = tol::holds;
  double equality = tol::equality;
};

inline InequalityReport finish_report(std::string name, Sense sense, double lhs, double rhs,
                                      const ReportTolerances& t = {}) {
  InequalityReport r;
  r.name = std::move(name);
  r.sense = sense;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = sense == Sense::AtMost ? rhs - lhs : lhs - rhs;
  const double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
  r.holds = r.slack / scale >= -t.holds;
  r.equality_by_slack = std::abs(r.slack) / scale <= t.equality;
  r.equality = r.holds && r.equality_by_slack;
  return r;
}

/// Quantities every bound at a point draws on, computed once.
struct PointSummary {
  int n = 0;
  double h2 = 0.0;        // |H|^2
  double sigma2 = 0.0;    // |sigma|^2
  double norm_p2 = 0.0;   // |P|^2
  Matrix P;
  InducedCurvature ic;
  double c = 0.0, f = 0.0, f_prime = 0.0;

  double cmf() const { return c - 3.0 * f * f; }  // c - 3f^2
  double cpf() const { return c + f * f; }        // c + f^2
};

inline PointSummary summarize(const AmbientStructure& s, const SubmanifoldPoint& p) {
  PointSummary ps;
  ps.n = p.n();
  ps.h2 = mean_curvature(p).norm_sq;
  ps.sigma2 = sigma_norms(p).norm_sq;
  const PhiSplit split = phi_split(s, p);
  ps.P = split.P;
  ps.norm_p2 = split.norm_p_sq;
  ps.ic = induced_curvature(s, p);
  ps.c = s.c();
  ps.f = s.f();
  ps.f_prime = s.f_prime();
  return ps;
}

// ----------------------------------------------------------------------------
// Identities

struct TauIdentity {
  double lhs = 0.0;       // n^2 |H|^2
  double rhs = 0.0;       // 2 tau + |sigma|^2 - ... assembled
  double residual = 0.0;  // lhs - rhs
  double scale = 1.0;     // 1 + sum of |terms|
  double normalized() const { return std::abs(residual) / scale; }
};

inline TauIdentity identity_tau_check(const PointSummary& ps) {
  const double n = ps.n;
  const double t1 = 2.0 * ps.ic.tau;
  const double t2 = ps.sigma2;
  const double t3 = -0.25 * n * (n - 1) * ps.cmf();
  const double t4 = -0.75 * ps.norm_p2 * ps.cpf();
  const double t5 = 2.0 * (n - 1) * (ps.cpf() / 4.0 + ps.f_prime);
  TauIdentity out;
  out.lhs = n * n * ps.h2;
  out.rhs = t1 + t2 + t3 + t4 + t5;
  out.residual = out.lhs - out.rhs;
  out.scale = 1.0 + std::abs(out.lhs) + std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) + std::abs(t5);
  return out;
}

inline TauIdentity identity_tau_check(const AmbientStructure& s, const SubmanifoldPoint& p) {
  return identity_tau_check(summarize(s, p));
}

// ----------------------------------------------------------------------------
// Equality diagnosis

enum class DiagnoseMode { Geodesic, Umbilic, NullSpace, RicciEquality };

struct EqualityDiagnosis {
  bool satisfied = false;
  double residual = 0.0;
};

/// geodesic: sigma = 0. umbilic: sigma(X,Y) = <X,Y> H. null space: A_r X = 0
/// for all r. Ricci equality: A_r X = (tr A_r / 2) X for all r, i.e. in a frame
/// with e_1 = X, sigma^r_1j = 0 (j >= 2) and sigma^r_11 = sigma^r_22 + ... + sigma^r_nn.
inline EqualityDiagnosis equality_diagnose(const SubmanifoldPoint& p, DiagnoseMode mode, const Vector& x = {},
                                           double tolerance = tol::equality) {
  EqualityDiagnosis d;
  const int n = p.n();
  if ((mode == DiagnoseMode::NullSpace || mode == DiagnoseMode::RicciEquality)) require_unit(x, n, "diagnosed direction");
  const MeanCurvature h = mean_curvature(p);
  for (int r = 0; r < p.codim(); ++r) {
    const Matrix& a = p.sigma()[r];
    double res = 0.0;
    switch (mode) {
      case DiagnoseMode::Geodesic: res = linalg::max_abs(a); break;
      case DiagnoseMode::Umbilic: res = linalg::max_abs(a - h.normal_coords(r) * Matrix::Identity(n, n)); break;
      case DiagnoseMode::NullSpace: res = (a * x).cwiseAbs().maxCoeff(); break;
      case DiagnoseMode::RicciEquality: res = (a * x - 0.5 * a.trace() * x).cwiseAbs().maxCoeff(); break;
    }
    d.residual = std::max(d.residual, res);
  }
  d.satisfied = d.residual < tolerance;
  return d;
}

// ----------------------------------------------------------------------------
// Classification checks

inline void require_matching(const PointSummary& ps, const Classification& cls) {
  if (std::abs(cls.norm_p_sq - ps.norm_p2) > 1e-9 * (1.0 + ps.n))
    throw ConfigurationError("classification does not belong to this point (|P|^2 differs)");
}

inline std::string describe(const Classification& cls) {
  std::string s = to_string(cls.kind);
  if (cls.kind == SubmanifoldKind::Slant) s += "(theta=" + std::to_string(cls.slant_angle) + ")";
  if (cls.kind == SubmanifoldKind::CR) s += "(h=" + std::to_string(cls.h) + ", dim D-perp=" + std::to_string(cls.dim_d_perp) + ")";
  return s;
}

// ----------------------------------------------------------------------------
// Scalar curvature

enum class ScalarVariant { General, Slant, Invariant, AntiInvariant, CR };

inline InequalityReport scalar_bound(const PointSummary& ps, const Classification& cls, ScalarVariant v,
                                     const ReportTolerances& t = {}) {
  const double n = ps.n, c = ps.c, f2 = ps.f * ps.f, fp = ps.f_prime;
  const double base = 0.5 * n * n * ps.h2;
  double rhs = 0.0;
  std::string name;
  switch (v) {
    case ScalarVariant::General:
      name = "scalar-lc";
      rhs = base + n * (n - 1) / 8.0 * (c - 3 * f2) + (3.0 * ps.norm_p2 - 2.0 * (n - 1)) / 8.0 * (c + f2) - (n - 1) * fp;
      break;
    case ScalarVariant::Slant: {
      require_matching(ps, cls);
      if (!cls.is_slant_type()) throw ConfigurationError("slant bound requested for a " + describe(cls) + " point");
      const double cos2 = std::pow(std::cos(cls.slant_angle), 2);
      name = "scalar-lc-slant";
      rhs = base + (n - 1) / 8.0 * (n * (c - 3 * f2) + (3 * cos2 - 2) * (c + f2) - 8 * fp);
      break;
    }
    case ScalarVariant::Invariant:
      require_matching(ps, cls);
      if (cls.kind != SubmanifoldKind::Invariant) throw ConfigurationError("invariant bound requested for a " + describe(cls) + " point");
      name = "scalar-lc-inv";
      rhs = base + (n - 1) / 8.0 * ((n + 1) * c - (3 * n - 1) * f2 - 8 * fp);
      break;
    case ScalarVariant::AntiInvariant:
      require_matching(ps, cls);
      if (cls.kind != SubmanifoldKind::AntiInvariant)
        throw ConfigurationError("anti-invariant bound requested for a " + describe(cls) + " point");
      name = "scalar-lc-anti";
      rhs = base + (n - 1) / 8.0 * ((n - 2) * c - (3 * n + 2) * f2 - 8 * fp);
      break;
    case ScalarVariant::CR:
      require_matching(ps, cls);
      if (!cls.is_cr_type()) throw ConfigurationError("CR bound requested for a " + describe(cls) + " point");
      name = "scalar-lc-cr";
      rhs = base + n * (n - 1) / 8.0 * (c - 3 * f2) + (6.0 * cls.h - 2.0 * (n - 1)) / 8.0 * (c + f2) - (n - 1) * fp;
      break;
  }
  InequalityReport r = finish_report(name, Sense::AtMost, ps.ic.tau, rhs, t);
  // Equality holds exactly at totally geodesic points.
  const double sigma_norm = std::sqrt(ps.sigma2);
  r.diagnosis.characterization = sigma_norm < t.equality;
  r.diagnosis.characterization_residual = sigma_norm;
  r.diagnosis.kind = *r.diagnosis.characterization ? DiagnosisKind::TotallyGeodesic : DiagnosisKind::None;
  r.equality = r.holds && *r.diagnosis.characterization;
  if (r.equality != r.equality_by_slack) r.diagnosis.note = "slack-based and geodesic-based equality disagree at this tolerance";
  r.classification_used = v == ScalarVariant::General ? "general" : describe(cls);
  return r;
}

inline std::vector<InequalityReport> scalar_suite(const PointSummary& ps, const Classification& cls,
                                                  const ReportTolerances& t = {}) {
  require_matching(ps, cls);
  std::vector<InequalityReport> out{scalar_bound(ps, cls, ScalarVariant::General, t)};
  if (cls.is_slant_type()) out.push_back(scalar_bound(ps, cls, ScalarVariant::Slant, t));
  if (cls.kind == SubmanifoldKind::Invariant) out.push_back(scalar_bound(ps, cls, ScalarVariant::Invariant, t));
  if (cls.kind == SubmanifoldKind::AntiInvariant) out.push_back(scalar_bound(ps, cls, ScalarVariant::AntiInvariant, t));
  if (cls.is_cr_type()) out.push_back(scalar_bound(ps, cls, ScalarVariant::CR, t));
  return out;
}

inline std::vector<InequalityReport> scalar_suite(const AmbientStructure& s, const SubmanifoldPoint& p,
                                                  const Classification& cls, const ReportTolerances& t = {}) {
  return scalar_suite(summarize(s, p), cls, t);
}

// ----------------------------------------------------------------------------
// Ricci curvature

enum class RicciVariant { General, Slant, Invariant, AntiInvariant, CRInD, CRInDPerp };

inline InequalityReport ricci_bound(const SubmanifoldPoint& p, const PointSummary& ps, const Vector& x,
                                    const Classification& cls, RicciVariant v, const ReportTolerances& t = {}) {
  require_unit(x, ps.n, "Ricci direction");
  const double n = ps.n, c = ps.c, f2 = ps.f * ps.f, fp = ps.f_prime;
  const double n2h2 = n * n * ps.h2;
  const double eta2 = std::pow(p.eta().dot(x), 2);
  const double px2 = (ps.P * x).squaredNorm();
  double rhs = 0.0;
  std::string name;
  if (v != RicciVariant::General) require_matching(ps, cls);
  switch (v) {
    case RicciVariant::General:
      name = "ricci-1";
      rhs = 0.25 * (n2h2 + (n - 1) * (c - 3 * f2) + (3 * px2 - (n - 2) * eta2 - 1) * (c + f2)) - (1 + (n - 2) * eta2) * fp;
      break;
    case RicciVariant::Slant: {
      if (!cls.is_slant_type()) throw ConfigurationError("slant Ricci bound requested for a " + describe(cls) + " point");
      const double cos2 = std::pow(std::cos(cls.slant_angle), 2);
      name = "ricci-slant";
      rhs = 0.25 * (n2h2 + (n - 1) * (c - 3 * f2) + (3 * cos2 - (n + 3 * cos2 - 2) * eta2 - 1) * (c + f2)) -
            (1 + (n - 2) * eta2) * fp;
      break;
    }
    case RicciVariant::Invariant:
      if (cls.kind != SubmanifoldKind::Invariant) throw ConfigurationError("invariant Ricci bound requested for a " + describe(cls) + " point");
      name = "ricci-inv";
      rhs = 0.25 * (n2h2 + (n - 1) * (c - 3 * f2) + (2 - (n + 1) * eta2) * (c + f2)) - (1 + (n - 2) * eta2) * fp;
      break;
    case RicciVariant::AntiInvariant:
      if (cls.kind != SubmanifoldKind::AntiInvariant)
        throw ConfigurationError("anti-invariant Ricci bound requested for a " + describe(cls) + " point");
      name = "ricci-anti";
      rhs = 0.25 * (n2h2 + (n - 1) * (c - 3 * f2) - (1 + (n - 2) * eta2) * (c + f2 + 4 * fp));
      break;
    case RicciVariant::CRInD:
      if (!cls.is_cr_type()) throw ConfigurationError("CR Ricci bound requested for a " + describe(cls) + " point");
      if (!cls.in_d(x)) throw ConfigurationError("CR Ricci bound on D needs X in D");
      name = "ricci-cr-1";
      rhs = 0.25 * (n2h2 + (n + 1) * c - (3 * n - 5) * f2 - 4 * fp);
      break;
    case RicciVariant::CRInDPerp:
      if (!cls.is_cr_type()) throw ConfigurationError("CR Ricci bound requested for a " + describe(cls) + " point");
      if (!cls.in_d_perp(x)) throw ConfigurationError("CR Ricci bound on D-perp needs X in D-perp");
      name = "ricci-cr-2";
      rhs = 0.25 * (n2h2 + (n - 2) * c - (3 * n - 2) * f2 - 4 * fp);
      break;
  }
  InequalityReport r = finish_report(name, Sense::AtMost, ricci(ps.ic, x), rhs, t);
  r.direction = x;
  const EqualityDiagnosis eq = equality_diagnose(p, DiagnoseMode::RicciEquality, x, t.equality);
  r.diagnosis.characterization = eq.satisfied;
  r.diagnosis.characterization_residual = eq.residual;
  r.diagnosis.kind = eq.satisfied ? DiagnosisKind::RicciEqualityConditions : DiagnosisKind::None;
  if (std::sqrt(ps.h2) < t.equality) {
    // minimal point: equality exactly when X is in the relative null space
    const EqualityDiagnosis ns = equality_diagnose(p, DiagnoseMode::NullSpace, x, t.equality);
    r.diagnosis.in_null_space = ns.satisfied;
    if (ns.satisfied) r.diagnosis.kind = DiagnosisKind::InRelativeNullSpace;
  }
  r.equality = r.holds && eq.satisfied;
  if (r.equality != r.equality_by_slack) r.diagnosis.note = "slack-based and coefficient-based equality disagree at this tolerance";
  r.classification_used = v == RicciVariant::General ? "general" : describe(cls);
  return r;
}

inline std::vector<InequalityReport> ricci_suite(const SubmanifoldPoint& p, const PointSummary& ps, const Vector& x,
                                                 const Classification& cls, const ReportTolerances& t = {}) {
  require_matching(ps, cls);
  std::vector<InequalityReport> out{ricci_bound(p, ps, x, cls, RicciVariant::General, t)};
  if (cls.is_slant_type()) out.push_back(ricci_bound(p, ps, x, cls, RicciVariant::Slant, t));
  if (cls.kind == SubmanifoldKind::Invariant) out.push_back(ricci_bound(p, ps, x, cls, RicciVariant::Invariant, t));
  if (cls.kind == SubmanifoldKind::AntiInvariant) out.push_back(ricci_bound(p, ps, x, cls, RicciVariant::AntiInvariant, t));
  if (cls.is_cr_type() && cls.h > 0 && cls.in_d(x)) out.push_back(ricci_bound(p, ps, x, cls, RicciVariant::CRInD, t));
  if (cls.is_cr_type() && cls.dim_d_perp > 0 && cls.in_d_perp(x))
    out.push_back(ricci_bound(p, ps, x, cls, RicciVariant::CRInDPerp, t));
  return out;
}

inline std::vector<InequalityReport> ricci_suite(const AmbientStructure& s, const SubmanifoldPoint& p, const Vector& x,
                                                 const Classification& cls, const ReportTolerances& t = {}) {
  return ricci_suite(p, summarize(s, p), x, cls, t);
}

/// Equality of the Ricci bound for every unit X: checked exactly through the
/// coefficient conditions (sigma^r_ij = 0 for i != j, 2 sigma^r_ii = trace A_r),
/// and displayed on the frame directions plus sampled directions.
struct RicciSweep {
  bool coefficient_conditions = false;
  double coefficient_residual = 0.0;
  bool frame_equality_all = false;
  bool sampled_equality_all = false;
  double max_frame_slack = 0.0;
  int sampled = 0;
  DiagnosisKind conclusion = DiagnosisKind::None;  // geodesic, or umbilical with n = 2
  bool consistent = false;
};

inline RicciSweep ricci_equality_sweep(const SubmanifoldPoint& p, const PointSummary& ps, std::size_t samples = 256,
                                       const ReportTolerances& t = {}) {
  const int n = p.n();
  RicciSweep sw;
  for (const auto& a : p.sigma())
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        sw.coefficient_residual = std::max(sw.coefficient_residual, i == j ? std::abs(2 * a(i, i) - a.trace()) : std::abs(a(i, j)));
  sw.coefficient_conditions = sw.coefficient_residual < t.equality;

  const Classification generic;  // general bound only needs no classification
  sw.frame_equality_all = true;
  for (int i = 0; i < n; ++i) {
    const auto r = ricci_bound(p, ps, Vector::Unit(n, i), generic, RicciVariant::General, t);
    sw.frame_equality_all = sw.frame_equality_all && r.equality;
    sw.max_frame_slack = std::max(sw.max_frame_slack, std::abs(r.slack));
  }
  sw.sampled_equality_all = true;
  for (const auto& x : linalg::sphere_net(n, samples)) {
    sw.sampled_equality_all = sw.sampled_equality_all && equality_diagnose(p, DiagnoseMode::RicciEquality, x, t.equality).satisfied;
    ++sw.sampled;
  }
  const bool geodesic = equality_diagnose(p, DiagnoseMode::Geodesic).satisfied;
  const bool umbilic = equality_diagnose(p, DiagnoseMode::Umbilic).satisfied;
  if (sw.coefficient_conditions)
    sw.conclusion = geodesic ? DiagnosisKind::TotallyGeodesic : DiagnosisKind::TotallyUmbilical;
  const bool characterized = geodesic || (n == 2 && umbilic);
  sw.consistent = sw.coefficient_conditions == sw.frame_equality_all && sw.frame_equality_all == sw.sampled_equality_all &&
                  sw.coefficient_conditions == characterized;
  return sw;
}

// ----------------------------------------------------------------------------
// k-Ricci curvature

inline InequalityReport kricci_bound(const PointSummary& ps, const ReportTolerances& t = {}) {
  const double n = ps.n;
  const double rhs = 2.0 * ps.ic.tau / (n * (n - 1)) - ps.cmf() / 4.0 - 3.0 * ps.norm_p2 * ps.cpf() / (4.0 * n * (n - 1)) +
                     2.0 / n * (ps.cpf() / 4.0 + ps.f_prime);
  InequalityReport r = finish_report("kricci", Sense::AtLeast, ps.h2, rhs, t);
  r.classification_used = "general";
  r.diagnosis.note = "no equality characterization";
  return r;
}

enum class KRicciVariant { General, Slant, Invariant, AntiInvariant, CR };

inline InequalityReport kricci_prime_bound(const PointSummary& ps, const Classification& cls, const ThetaK& theta,
                                           KRicciVariant v, const ReportTolerances& t = {}) {
  if (theta.k < 2 || theta.k > ps.n) throw DomainError("k out of range [2," + std::to_string(ps.n) + "], got " + std::to_string(theta.k));
  const double n = ps.n;
  const double common = theta.value - ps.cmf() / 4.0 + 2.0 / n * (ps.cpf() / 4.0 + ps.f_prime);
  double rhs = 0.0;
  std::string name;
  if (v != KRicciVariant::General) require_matching(ps, cls);
  switch (v) {
    case KRicciVariant::General:
      name = "kricci-prime";
      rhs = common - 3.0 * ps.norm_p2 * ps.cpf() / (4.0 * n * (n - 1));
      break;
    case KRicciVariant::Slant:
      if (!cls.is_slant_type()) throw ConfigurationError("slant k-Ricci bound requested for a " + describe(cls) + " point");
      name = "kricci-prime-slant";
      rhs = common - 3.0 * ps.cpf() * std::pow(std::cos(cls.slant_angle), 2) / (4.0 * n);
      break;
    case KRicciVariant::Invariant:
      if (cls.kind != SubmanifoldKind::Invariant) throw ConfigurationError("invariant k-Ricci bound requested for a " + describe(cls) + " point");
      name = "kricci-prime-inv";
      rhs = common - 3.0 * ps.cpf() / (4.0 * n);
      break;
    case KRicciVariant::AntiInvariant:
      if (cls.kind != SubmanifoldKind::AntiInvariant)
        throw ConfigurationError("anti-invariant k-Ricci bound requested for a " + describe(cls) + " point");
      name = "kricci-prime-anti";
      rhs = common;
      break;
    case KRicciVariant::CR:
      if (!cls.is_cr_type()) throw ConfigurationError("CR k-Ricci bound requested for a " + describe(cls) + " point");
      name = "kricci-prime-cr";
      rhs = common - 6.0 * cls.h * ps.cpf() / (4.0 * n * (n - 1));
      break;
  }
  InequalityReport r = finish_report(name, Sense::AtLeast, ps.h2, rhs, t);
  r.k = theta.k;
  r.classification_used = v == KRicciVariant::General ? "general" : describe(cls);
  r.diagnosis.note = "no equality characterization";
  if (theta.heuristic_outer) r.note = "heuristic-outer";
  if (!theta.warning.empty()) r.note += (r.note.empty() ? "" : "; ") + theta.warning;
  return r;
}

inline std::vector<InequalityReport> kricci_suite(const PointSummary& ps, const Classification& cls,
                                                  std::span<const ThetaK> thetas, const ReportTolerances& t = {}) {
  require_matching(ps, cls);
  std::vector<InequalityReport> out{kricci_bound(ps, t)};
  for (const auto& th : thetas) {
    out.push_back(kricci_prime_bound(ps, cls, th, KRicciVariant::General, t));
    if (cls.is_slant_type()) out.push_back(kricci_prime_bound(ps, cls, th, KRicciVariant::Slant, t));
    if (cls.kind == SubmanifoldKind::Invariant) out.push_back(kricci_prime_bound(ps, cls, th, KRicciVariant::Invariant, t));
    if (cls.kind == SubmanifoldKind::AntiInvariant) out.push_back(kricci_prime_bound(ps, cls, th, KRicciVariant::AntiInvariant, t));
    if (cls.is_cr_type()) out.push_back(kricci_prime_bound(ps, cls, th, KRicciVariant::CR, t));
  }
  return out;
}

}  // namespace lcac
