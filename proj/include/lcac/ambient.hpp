#pragma once

// Pointwise ambient data of a (2m+1)-dimensional locally conformal almost
// cosymplectic space of pointwise constant phi-sectional curvature, and its
// closed-form curvature tensor. The metric is the identity in the working
// basis, so every vector below is expressed in a g-orthonormal basis.

#include "lcac/common.hpp"
#include "lcac/linalg.hpp"

#include <string>
#include <vector>

namespace lcac {

/// Unchecked ambient data. Promote it to AmbientStructure before use.
struct AmbientData {
  int m = 2;
  Matrix phi;
  Vector xi;
  Vector eta;
  double c = 0.0;
  double f = 0.0;
  double f_prime = 0.0;  // xi(f)

  int dim() const { return 2 * m + 1; }
};

struct Violation {
  std::string identity;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the almost contact metric identities at tolerance `tolerance`.
/// Throws StructuralError on inconsistent dimensions and DataError on NaNs.
inline ValidationReport validate_structure(const AmbientData& s, double tolerance = tol::structural) {
  if (s.m < 2) throw StructuralError("ambient needs m >= 2 (dimension >= 5), got m = " + std::to_string(s.m));
  const Eigen::Index d = s.dim();
  if (s.phi.rows() != d || s.phi.cols() != d || s.xi.size() != d || s.eta.size() != d)
    throw StructuralError("ambient dimension mismatch: expected phi " + std::to_string(d) + "x" +
                          std::to_string(d) + " and vectors of length " + std::to_string(d));
  if (!s.phi.allFinite() || !s.xi.allFinite() || !s.eta.allFinite() || !std::isfinite(s.c) ||
      !std::isfinite(s.f) || !std::isfinite(s.f_prime))
    throw DataError("ambient data contains non-finite entries");

  ValidationReport rep;
  auto check = [&](const char* name, double residual) {
    if (!(residual <= tolerance)) rep.violations.push_back({name, residual});
  };
  const Matrix id = Matrix::Identity(d, d);
  check("phi^2 = -I + eta(x)xi", linalg::max_abs(s.phi * s.phi - (-id + s.xi * s.eta.transpose())));
  check("eta(xi) = 1", std::abs(s.eta.dot(s.xi) - 1.0));
  check("phi xi = 0", linalg::max_abs(s.phi * s.xi));
  check("eta o phi = 0", linalg::max_abs(s.eta.transpose() * s.phi));
  // <X,Y> = <phi X, phi Y> + eta(X) eta(Y), with <X, xi> = eta(X)
  check("compatibility <X,Y> = <phiX,phiY> + eta(X)eta(Y)",
        std::max(linalg::max_abs(s.phi.transpose() * s.phi + s.eta * s.eta.transpose() - id),
                 linalg::max_abs(s.xi - s.eta)));
  check("skew <X,phiY> = -<phiX,Y>", linalg::max_abs(s.phi + s.phi.transpose()));
  return rep;
}

/// Validated ambient structure. Only constructible from data that passes
/// validate_structure, so curvature routines never see an invalid one.
class AmbientStructure {
 public:
  explicit AmbientStructure(AmbientData data) : d_(std::move(data)) {
    const auto rep = validate_structure(d_);
    if (!rep.ok()) {
      std::string msg = "invalid almost contact metric structure:";
      for (const auto& v : rep.violations) msg += " [" + v.identity + ", residual " + std::to_string(v.residual) + "]";
      throw StructuralError(msg);
    }
  }

  const AmbientData& data() const { return d_; }
  int m() const { return d_.m; }
  int dim() const { return d_.dim(); }
  const Matrix& phi() const { return d_.phi; }
  const Vector& xi() const { return d_.xi; }
  const Vector& eta() const { return d_.eta; }
  double c() const { return d_.c; }
  double f() const { return d_.f; }
  double f_prime() const { return d_.f_prime; }

  // Coefficients of the three blocks of the curvature tensor.
  double isotropic_coeff() const { return (d_.c - 3.0 * d_.f * d_.f) / 4.0; }
  double phi_coeff() const { return (d_.c + d_.f * d_.f) / 4.0; }
  double xi_coeff() const { return phi_coeff() + d_.f_prime; }

  bool is_flat() const { return d_.c == 0.0 && d_.f == 0.0 && d_.f_prime == 0.0; }

 private:
  AmbientData d_;
};

/// Standard structure on R^{2m+1} with coordinates (x_1..x_m, y_1..y_m, z):
/// phi dx_i = dy_i, phi dy_i = -dx_i, xi = dz, eta = dz.
inline AmbientData standard_data(int m, double c = 0.0, double f = 0.0, double f_prime = 0.0) {
  AmbientData s;
  s.m = m;
  const int d = 2 * m + 1;
  s.phi = Matrix::Zero(d, d);
  for (int i = 0; i < m; ++i) {
    s.phi(m + i, i) = 1.0;   // phi e_{x_i} = e_{y_i}
    s.phi(i, m + i) = -1.0;  // phi e_{y_i} = -e_{x_i}
  }
  s.xi = Vector::Unit(d, 2 * m);
  s.eta = s.xi;
  s.c = c;
  s.f = f;
  s.f_prime = f_prime;
  return s;
}

inline AmbientStructure standard_structure(int m, double c = 0.0, double f = 0.0, double f_prime = 0.0) {
  return AmbientStructure(standard_data(m, c, f, f_prime));
}

/// Conjugates a structure by an orthogonal change of basis q.
inline AmbientData rotated(const AmbientData& s, const Matrix& q) {
  AmbientData r = s;
  r.phi = q * s.phi * q.transpose();
  r.xi = q * s.xi;
  r.eta = q * s.eta;
  return r;
}

namespace basis {
// Index helpers for the standard coordinates (x_1..x_m, y_1..y_m, z), 1-based i.
inline Vector x(int m, int i) { return Vector::Unit(2 * m + 1, i - 1); }
inline Vector y(int m, int i) { return Vector::Unit(2 * m + 1, m + i - 1); }
inline Vector z(int m) { return Vector::Unit(2 * m + 1, 2 * m); }
}  // namespace basis

/// R~(X,Y)Z for the pointwise constant phi-sectional curvature model.
inline Vector ambient_curvature(const AmbientStructure& s, const Vector& x, const Vector& y, const Vector& z) {
  const Matrix& phi = s.phi();
  const Vector& xi = s.xi();
  const Vector& eta = s.eta();
  const Vector phx = phi * x, phy = phi * y, phz = phi * z;
  const double ex = eta.dot(x), ey = eta.dot(y), ez = eta.dot(z);

  Vector r = s.isotropic_coeff() * (y.dot(z) * x - x.dot(z) * y);
  r += s.phi_coeff() * (2.0 * x.dot(phy) * phz + x.dot(phz) * phy - y.dot(phz) * phx);
  r += s.xi_coeff() * (ex * ez * y - ey * ez * x + (x.dot(z) * ey - y.dot(z) * ex) * xi);
  return r;
}

/// R~(X,Y,Z,W) = <R~(X,Y)Z, W>.
inline double ambient_curvature_form(const AmbientStructure& s, const Vector& x, const Vector& y, const Vector& z,
                                     const Vector& w) {
  return ambient_curvature(s, x, y, z).dot(w);
}

/// <R~(X, phiX) phiX, X> for a unit X orthogonal to xi.
inline double phi_section_curvature(const AmbientStructure& s, const Vector& x) {
  if (x.size() != s.dim()) throw StructuralError("vector length does not match ambient dimension");
  if (std::abs(x.norm() - 1.0) > tol::derived) throw DomainError("phi-section generator must be a unit vector");
  if (std::abs(s.eta().dot(x)) > tol::derived) throw DomainError("phi-section generator must satisfy eta(X) = 0");
  const Vector phx = s.phi() * x;
  return ambient_curvature(s, x, phx, phx).dot(x);
}

}  // namespace lcac
