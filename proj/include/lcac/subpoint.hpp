#pragma once

// Pointwise submanifold data: orthonormal tangent/normal frames with xi
// tangent, second fundamental form coefficients sigma^r_ij, and the derived
// objects (mean curvature, shape operators, the P/F split of phi, type
// classification, relative null space).

#include "lcac/ambient.hpp"
#include "lcac/common.hpp"
#include "lcac/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace lcac {

/// sigma[r](i, j) = <sigma(e_i, e_j), e_r>, r indexing the normal frame.
using Sigma = std::vector<Matrix>;

class SubmanifoldPoint;
SubmanifoldPoint build_point(const AmbientStructure& s, const Matrix& raw_frame, const Sigma& raw_sigma);

class SubmanifoldPoint {
 public:
  int n() const { return static_cast<int>(tangent_.cols()); }
  int ambient_dim() const { return static_cast<int>(tangent_.rows()); }
  int codim() const { return static_cast<int>(normal_.cols()); }

  /// Columns e_1..e_n in ambient coordinates; e_1 is xi.
  const Matrix& tangent() const { return tangent_; }
  /// Columns e_{n+1}..e_{2m+1} in ambient coordinates.
  const Matrix& normal() const { return normal_; }
  const Sigma& sigma() const { return sigma_; }
  /// eta(e_i) for the tangent frame.
  const Vector& eta() const { return eta_; }

  /// sigma(u, v) in normal-frame coordinates, u and v in tangent coordinates.
  Vector sigma_of(const Vector& u, const Vector& v) const {
    Vector out(codim());
    for (int r = 0; r < codim(); ++r) out(r) = u.dot(sigma_[r] * v);
    return out;
  }

  /// Tangent-frame coordinates of an ambient vector; throws if it is not tangent.
  Vector to_tangent(const Vector& ambient, double tolerance = tol::derived) const {
    if (ambient.size() != ambient_dim()) throw StructuralError("vector length does not match ambient dimension");
    Vector t = tangent_.transpose() * ambient;
    if ((ambient - tangent_ * t).norm() > tolerance * std::max(1.0, ambient.norm()))
      throw DomainError("vector is not tangent to the submanifold");
    return t;
  }
  Vector to_ambient(const Vector& t) const { return tangent_ * t; }

  /// Same frames, new coefficients (given in this point's orthonormal frames).
  SubmanifoldPoint with_sigma(Sigma sigma) const {
    SubmanifoldPoint p = *this;
    p.sigma_ = checked_sigma(std::move(sigma), n(), codim());
    return p;
  }

 private:
  friend SubmanifoldPoint build_point(const AmbientStructure&, const Matrix&, const Sigma&);
  SubmanifoldPoint() = default;

  static Sigma checked_sigma(Sigma sigma, int n, int codim) {
    if (static_cast<int>(sigma.size()) != codim)
      throw StructuralError("sigma must have one n x n block per normal direction (" + std::to_string(codim) +
                            "), got " + std::to_string(sigma.size()));
    for (auto& a : sigma) {
      if (a.rows() != n || a.cols() != n) throw StructuralError("sigma block must be " + std::to_string(n) + "x" + std::to_string(n));
      if (!a.allFinite()) throw DataError("sigma contains non-finite entries");
      const double scale = 1.0 + linalg::max_abs(a);
      if (linalg::max_abs(a - a.transpose()) > tol::structural * scale) throw DataError("sigma^r must be symmetric in i, j");
      a = 0.5 * (a + a.transpose()).eval();
    }
    return sigma;
  }

  Matrix tangent_, normal_;
  Sigma sigma_;
  Vector eta_;
};

/// Orthonormalizes `raw_frame` (columns) with xi first, builds the normal
/// complement, and re-expresses `raw_sigma` in the new frames. raw_sigma[r]
/// holds <sigma(v_i, v_j), e_r> for the raw vectors v_i and the computed
/// normal frame e_r; an empty raw_sigma means sigma = 0.
inline SubmanifoldPoint build_point(const AmbientStructure& s, const Matrix& raw_frame, const Sigma& raw_sigma = {}) {
  const int d = s.dim();
  const int n = static_cast<int>(raw_frame.cols());
  if (raw_frame.rows() != d) throw StructuralError("frame vectors must have length " + std::to_string(d));
  if (n < 2 || n > d) throw DomainError("tangent dimension must satisfy 2 <= n <= " + std::to_string(d));
  if (!raw_frame.allFinite()) throw DataError("frame contains non-finite entries");

  Eigen::JacobiSVD<Matrix> svd(raw_frame);
  const Vector sv = svd.singularValues();
  if (sv(n - 1) <= 1e-10 * sv(0)) throw DomainError("frame vectors are linearly dependent");

  const Matrix span = linalg::gram_schmidt(Matrix(d, 0), raw_frame);
  const Vector xi = s.xi();
  const double off = (xi - span * (span.transpose() * xi)).norm();
  if (off > tol::derived)
    throw HypothesisViolation("xi is not tangent to the submanifold (distance " + std::to_string(off) + ")");

  Matrix tangent = linalg::gram_schmidt(xi.normalized(), raw_frame, 1e-8).leftCols(n);
  if (tangent.cols() != n) throw DomainError("frame vectors are linearly dependent");

  SubmanifoldPoint p;
  p.tangent_ = tangent;
  p.normal_ = linalg::orthonormal_complement(tangent);
  p.eta_ = tangent.transpose() * s.eta();

  // e_a = sum_i coeff(i, a) v_i
  const Matrix coeff = raw_frame.colPivHouseholderQr().solve(tangent);
  Sigma sigma;
  if (raw_sigma.empty()) {
    sigma.assign(p.codim(), Matrix::Zero(n, n));
  } else {
    sigma = SubmanifoldPoint::checked_sigma(raw_sigma, n, p.codim());
    for (auto& a : sigma) a = (coeff.transpose() * a * coeff).eval();
  }
  p.sigma_ = SubmanifoldPoint::checked_sigma(std::move(sigma), n, p.codim());
  return p;
}

inline SubmanifoldPoint build_point(const AmbientStructure& s, const std::vector<Vector>& raw_frame,
                                    const Sigma& raw_sigma = {}) {
  Matrix m(s.dim(), static_cast<Eigen::Index>(raw_frame.size()));
  for (std::size_t j = 0; j < raw_frame.size(); ++j) {
    if (raw_frame[j].size() != s.dim()) throw StructuralError("frame vectors must have length " + std::to_string(s.dim()));
    m.col(static_cast<Eigen::Index>(j)) = raw_frame[j];
  }
  return build_point(s, m, raw_sigma);
}

struct MeanCurvature {
  Vector normal_coords;  // H in the normal frame
  Vector ambient;        // H in ambient coordinates
  double norm_sq = 0.0;
};

inline MeanCurvature mean_curvature(const SubmanifoldPoint& p) {
  MeanCurvature h;
  h.normal_coords = Vector(p.codim());
  for (int r = 0; r < p.codim(); ++r) h.normal_coords(r) = p.sigma()[r].trace() / p.n();
  h.ambient = p.normal() * h.normal_coords;
  h.norm_sq = h.normal_coords.squaredNorm();
  return h;
}

/// A_r for the normal vector e_r, r counted as in the full frame (n+1..2m+1).
inline Matrix shape_operator(const SubmanifoldPoint& p, int r) {
  if (r < p.n() + 1 || r > p.ambient_dim())
    throw DomainError("normal index must lie in [" + std::to_string(p.n() + 1) + ", " + std::to_string(p.ambient_dim()) +
                      "], got " + std::to_string(r));
  return p.sigma()[r - p.n() - 1];
}

struct PhiSplit {
  Matrix P;  // P(i, j) = <e_i, phi e_j>
  Matrix F;  // F(r, j) = <e_r, phi e_j>
  double norm_p_sq = 0.0;
};

inline PhiSplit phi_split(const AmbientStructure& s, const SubmanifoldPoint& p) {
  PhiSplit out;
  const Matrix phi_t = s.phi() * p.tangent();
  out.P = p.tangent().transpose() * phi_t;
  out.F = p.normal().transpose() * phi_t;
  out.norm_p_sq = out.P.squaredNorm();
  return out;
}

enum class SubmanifoldKind { Invariant, AntiInvariant, Slant, CR, Generic };

inline const char* to_string(SubmanifoldKind k) {
  switch (k) {
    case SubmanifoldKind::Invariant: return "invariant";
    case SubmanifoldKind::AntiInvariant: return "anti-invariant";
    case SubmanifoldKind::Slant: return "slant";
    case SubmanifoldKind::CR: return "CR";
    case SubmanifoldKind::Generic: return "generic";
  }
  return "?";
}

struct Classification {
  SubmanifoldKind kind = SubmanifoldKind::Generic;
  double slant_angle = std::numeric_limits<double>::quiet_NaN();  // radians, invariant/anti/slant only
  int h = -1;                                                      // 2h = dim D, CR-type only
  int dim_d_perp = -1;
  double norm_p_sq = 0.0;
  double angle_min = 0.0, angle_max = 0.0;  // sampled Wirtinger angles
  int samples = 0;
  Vector ptp_eigenvalues;  // P^T P on the xi-complement, ascending
  Matrix d_basis;          // tangent coordinates, columns span D
  Matrix d_perp_basis;     // tangent coordinates, columns span D-perp

  bool is_slant_type() const {
    return kind == SubmanifoldKind::Invariant || kind == SubmanifoldKind::AntiInvariant || kind == SubmanifoldKind::Slant;
  }
  /// CR in the wide sense: invariant (D-perp = 0) and anti-invariant (D = 0) included.
  bool is_cr_type() const {
    return kind == SubmanifoldKind::CR || ((kind == SubmanifoldKind::Invariant || kind == SubmanifoldKind::AntiInvariant) && h >= 0);
  }
  bool in_d(const Vector& x, double tolerance = tol::equality) const {
    return h >= 0 && (x - d_basis * (d_basis.transpose() * x)).norm() <= tolerance;
  }
  bool in_d_perp(const Vector& x, double tolerance = tol::equality) const {
    return dim_d_perp >= 0 && (x - d_perp_basis * (d_perp_basis.transpose() * x)).norm() <= tolerance;
  }
};

/// Type of the tangent space at p. Wirtinger angles cos(theta(X)) = |PX| / |phiX|
/// are sampled over a fixed low-discrepancy set on the unit sphere of the
/// xi-complement, augmented with the eigenvectors of P^T P (the extremal
/// directions), so the sampled spread is exact.
inline Classification classify(const AmbientStructure& s, const SubmanifoldPoint& p, double tol_angle = tol::slant_spread,
                               std::size_t samples = 256) {
  if (p.n() < 2) throw DomainError("classification needs a tangent vector orthogonal to xi (n >= 2)");
  const PhiSplit split = phi_split(s, p);
  const Matrix comp = linalg::complement_of(p.eta().normalized());  // n x (n-1)
  const Matrix ptp = comp.transpose() * split.P.transpose() * split.P * comp;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(ptp);

  Classification cls;
  cls.norm_p_sq = split.norm_p_sq;
  cls.ptp_eigenvalues = eig.eigenvalues();

  std::vector<Vector> dirs = linalg::sphere_net(comp.cols(), samples);
  for (Eigen::Index j = 0; j < eig.eigenvectors().cols(); ++j) dirs.emplace_back(eig.eigenvectors().col(j));
  double cmin = 1.0, cmax = 0.0, amin = 10.0, amax = -1.0;
  for (const auto& w : dirs) {
    const Vector x = comp * w;
    const double phx = (s.phi() * p.to_ambient(x)).norm();
    const double cos_t = std::clamp((split.P * x).norm() / phx, 0.0, 1.0);
    const double ang = std::acos(cos_t);
    cmin = std::min(cmin, cos_t);
    cmax = std::max(cmax, cos_t);
    amin = std::min(amin, ang);
    amax = std::max(amax, ang);
  }
  cls.samples = static_cast<int>(dirs.size());
  cls.angle_min = amin;
  cls.angle_max = amax;

  // Eigenvalues of P^T P clustered at {0, 1} give the D / D-perp split.
  const Vector& ev = cls.ptp_eigenvalues;
  bool clustered = true;
  int ones = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - 1.0) <= tol::equality) ++ones;
    else if (std::abs(ev(i)) > tol::equality) clustered = false;
  }
  if (clustered && ones % 2 == 0) {
    cls.h = ones / 2;
    cls.dim_d_perp = static_cast<int>(ev.size()) - ones;
    cls.d_perp_basis = comp * eig.eigenvectors().leftCols(cls.dim_d_perp);
    cls.d_basis = comp * eig.eigenvectors().rightCols(ones);
  }

  const double sin_max = std::sqrt(std::max(0.0, 1.0 - cmin * cmin));
  if (sin_max < tol_angle) {
    cls.kind = SubmanifoldKind::Invariant;
    cls.slant_angle = 0.0;
  } else if (cmax < tol_angle) {
    cls.kind = SubmanifoldKind::AntiInvariant;
    cls.slant_angle = std::numbers::pi / 2;
  } else if (amax - amin < tol_angle) {
    cls.kind = SubmanifoldKind::Slant;
    cls.slant_angle = 0.5 * (amin + amax);
  } else if (cls.h >= 0) {
    cls.kind = SubmanifoldKind::CR;
  }
  return cls;
}

struct SigmaNormTerms {
  double half_n2_h2 = 0.0;      // (1/2) (sum_i sigma^r_ii)^2
  double half_first_diff = 0.0; // (1/2) (sigma^r_11 - sigma^r_22 - ... - sigma^r_nn)^2
  double first_row = 0.0;       // 2 sum_{j>=2} (sigma^r_1j)^2
  double pairs = 0.0;           // -2 sum_{2<=i<j} (sigma^r_ii sigma^r_jj - (sigma^r_ij)^2)
};

struct SigmaNorms {
  double norm_sq = 0.0;  // |sigma|^2 by direct summation
  double rhs = 0.0;      // assembled decomposition
  std::vector<SigmaNormTerms> per_normal;
};

/// |sigma|^2 and its decomposition through the squared mean curvature,
/// the e_1 row, and the 2 <= i < j block, term by term.
inline SigmaNorms sigma_norms(const SubmanifoldPoint& p) {
  SigmaNorms out;
  const int n = p.n();
  for (const auto& a : p.sigma()) {
    out.norm_sq += a.squaredNorm();
    SigmaNormTerms t;
    const double tr = a.trace();
    t.half_n2_h2 = 0.5 * tr * tr;
    double diff = a(0, 0);
    for (int j = 1; j < n; ++j) diff -= a(j, j);
    t.half_first_diff = 0.5 * diff * diff;
    for (int j = 1; j < n; ++j) t.first_row += 2.0 * a(0, j) * a(0, j);
    for (int i = 1; i < n; ++i)
      for (int j = i + 1; j < n; ++j) t.pairs -= 2.0 * (a(i, i) * a(j, j) - a(i, j) * a(i, j));
    out.rhs += t.half_n2_h2 + t.half_first_diff + t.first_row + t.pairs;
    out.per_normal.push_back(t);
  }
  return out;
}

/// Orthonormal basis (tangent coordinates) of {X : A_r X = 0 for all r}.
inline Matrix relative_null_space(const SubmanifoldPoint& p, double tolerance = 1e-9) {
  const int n = p.n();
  if (p.codim() == 0) return Matrix::Identity(n, n);
  Matrix stacked(static_cast<Eigen::Index>(p.codim()) * n, n);
  for (int r = 0; r < p.codim(); ++r) stacked.middleRows(static_cast<Eigen::Index>(r) * n, n) = p.sigma()[r];
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tolerance) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace lcac
