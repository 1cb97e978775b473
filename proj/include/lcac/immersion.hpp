#pragma once

// Concrete immersions into the flat cosymplectic model R^{2m+1}
// (c = f = f' = 0) and an intrinsic finite-difference curvature oracle that
// sees only the induced metric g_ij = <d_i x, d_j x>.
//
// Every catalog immersion is a sum of separable terms
//   x^A(u) = sum_t coef_t * prod_a phi_{t,a}(u_a),  phi in {u^p, sin u, cos u},
// so position and partial derivatives up to order three are exact.

#include "lcac/ambient.hpp"
#include "lcac/common.hpp"
#include "lcac/invariants.hpp"
#include "lcac/linalg.hpp"
#include "lcac/subpoint.hpp"

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace lcac {

struct Factor {
  enum class Kind { Power, Sin, Cos };
  int var = 0;
  Kind kind = Kind::Power;
  int power = 1;

  /// d^order/du^order of the factor at u.
  double eval(double u, int order) const {
    switch (kind) {
      case Kind::Power: {
        if (order > power) return 0.0;
        double coef = 1.0;
        for (int i = 0; i < order; ++i) coef *= power - i;
        return coef * std::pow(u, power - order);
      }
      case Kind::Sin:
      case Kind::Cos: {
        // sin^(k) = sin(u + k pi/2), cos^(k) = cos(u + k pi/2)
        const int phase = order % 4;
        const double s = std::sin(u), c = std::cos(u);
        const double sv[4] = {s, c, -s, -c};
        const double cv[4] = {c, -s, -c, s};
        return kind == Kind::Sin ? sv[phase] : cv[phase];
      }
    }
    return 0.0;
  }
};

struct SeparableTerm {
  double coef = 1.0;
  std::vector<Factor> factors;  // at most one factor per variable

  /// Mixed partial derivative with multi-index `orders` (one entry per chart variable).
  double derivative(const Vector& u, const std::vector<int>& orders) const {
    std::vector<int> used(orders.size(), 0);
    double v = coef;
    for (const auto& f : factors) {
      v *= f.eval(u(f.var), orders[static_cast<std::size_t>(f.var)]);
      used[static_cast<std::size_t>(f.var)] = 1;
    }
    for (std::size_t a = 0; a < orders.size(); ++a)
      if (!used[a] && orders[a] > 0) return 0.0;  // constant in u_a
    return v;
  }
};

using CoordinateExpr = std::vector<SeparableTerm>;

/// Position and exact partial derivatives up to third order.
struct Jet {
  Vector position;
  Matrix first;                      // ambient x n
  std::vector<Matrix> second;        // [A](i, j)
  std::vector<std::vector<Matrix>> third;  // [A][i](j, k)
};

struct ImmersionSpec {
  std::string name;
  int m = 2;
  int chart_dim = 0;
  std::vector<CoordinateExpr> coords;  // one per ambient coordinate
  std::map<std::string, double> params;
  Vector domain_lo, domain_hi;  // open chart box

  int ambient_dim() const { return 2 * m + 1; }

  double derivative(int coord, const Vector& u, const std::vector<int>& orders) const {
    double v = 0.0;
    for (const auto& t : coords[static_cast<std::size_t>(coord)]) v += t.derivative(u, orders);
    return v;
  }

  Jet jet(const Vector& u, int max_order = 3) const {
    const int n = chart_dim, d = ambient_dim();
    Jet j;
    j.position = Vector(d);
    j.first = Matrix(d, n);
    j.second.assign(static_cast<std::size_t>(d), Matrix::Zero(n, n));
    if (max_order >= 3) j.third.assign(static_cast<std::size_t>(d), std::vector<Matrix>(static_cast<std::size_t>(n), Matrix::Zero(n, n)));
    std::vector<int> ord(static_cast<std::size_t>(n), 0);
    for (int A = 0; A < d; ++A) {
      j.position(A) = derivative(A, u, ord);
      for (int a = 0; a < n; ++a) {
        ++ord[a];
        j.first(A, a) = derivative(A, u, ord);
        for (int b = 0; b < n && max_order >= 2; ++b) {
          ++ord[b];
          j.second[A](a, b) = derivative(A, u, ord);
          for (int c = 0; c < n && max_order >= 3; ++c) {
            ++ord[c];
            j.third[A][a](b, c) = derivative(A, u, ord);
            --ord[c];
          }
          --ord[b];
        }
        --ord[a];
      }
    }
    return j;
  }

  Matrix metric(const Vector& u) const {
    const Jet j = jet(u, 1);
    return j.first.transpose() * j.first;
  }

  bool interior(const Vector& u, double margin) const {
    for (int a = 0; a < chart_dim; ++a)
      if (u(a) - margin <= domain_lo(a) || u(a) + margin >= domain_hi(a)) return false;
    return true;
  }
};

// ----------------------------------------------------------------------------
// Catalog

namespace catalog {

inline SeparableTerm term(double coef, std::vector<Factor> f) { return {coef, std::move(f)}; }
inline Factor pw(int var, int p = 1) { return {var, Factor::Kind::Power, p}; }
inline Factor sn(int var) { return {var, Factor::Kind::Sin, 0}; }
inline Factor cs(int var) { return {var, Factor::Kind::Cos, 0}; }

/// Ambient coordinate indices used by curved factors: x1, x2, y1, then the
/// remaining x's and y's in order. z is never in this list.
inline std::vector<int> spatial_slots(int m) {
  std::vector<int> slots{0, 1, m};
  for (int i = 2; i < m; ++i) slots.push_back(i);
  for (int i = 1; i < m; ++i) slots.push_back(m + i);
  return slots;
}

inline ImmersionSpec blank(std::string name, int m, int n) {
  if (m < 2) throw DomainError("ambient needs m >= 2");
  ImmersionSpec s;
  s.name = std::move(name);
  s.m = m;
  s.chart_dim = n;
  s.coords.assign(static_cast<std::size_t>(2 * m + 1), {});
  s.domain_lo = Vector::Constant(n, -1e6);
  s.domain_hi = Vector::Constant(n, 1e6);
  return s;
}

/// u -> sum_i u_i v_i with v_1 = dz; the other directions are given.
inline ImmersionSpec linear(std::string name, int m, const std::vector<Vector>& directions) {
  const int n = static_cast<int>(directions.size()) + 1;
  ImmersionSpec s = blank(std::move(name), m, n);
  s.coords[static_cast<std::size_t>(2 * m)].push_back(term(1.0, {pw(0)}));
  for (int i = 1; i < n; ++i)
    for (int A = 0; A < 2 * m + 1; ++A)
      if (directions[static_cast<std::size_t>(i - 1)](A) != 0.0)
        s.coords[static_cast<std::size_t>(A)].push_back(term(directions[static_cast<std::size_t>(i - 1)](A), {pw(i)}));
  return s;
}

/// span{xi, x_1, y_1, ..., x_h, y_h}: n = 2h + 1, needs h <= m.
inline ImmersionSpec linear_invariant(int m, int h = 1) {
  if (h < 1 || h > m) throw DomainError("linear_invariant needs 1 <= h <= m");
  std::vector<Vector> dirs;
  for (int i = 1; i <= h; ++i) {
    dirs.push_back(basis::x(m, i));
    dirs.push_back(basis::y(m, i));
  }
  auto s = linear("linear_invariant", m, dirs);
  s.params["h"] = h;
  return s;
}

/// span{xi, x_1, ..., x_q}: n = q + 1, needs q <= m.
inline ImmersionSpec linear_anti_invariant(int m, int q = 2) {
  if (q < 1 || q > m) throw DomainError("linear_anti_invariant needs 1 <= q <= m");
  std::vector<Vector> dirs;
  for (int i = 1; i <= q; ++i) dirs.push_back(basis::x(m, i));
  auto s = linear("linear_anti_invariant", m, dirs);
  s.params["q"] = q;
  return s;
}

/// span{xi, x_1, cos(t) y_1 + sin(t) x_2, ...} for h pairs: n = 2h + 1, slant angle t.
inline ImmersionSpec linear_slant(int m, double theta, int h = 1) {
  if (h < 1 || 2 * h > m) throw DomainError("linear_slant needs 1 <= 2h <= m");
  std::vector<Vector> dirs;
  for (int i = 0; i < h; ++i) {
    dirs.push_back(basis::x(m, 2 * i + 1));
    dirs.push_back(std::cos(theta) * basis::y(m, 2 * i + 1) + std::sin(theta) * basis::x(m, 2 * i + 2));
  }
  auto s = linear("linear_slant", m, dirs);
  s.params["theta"] = theta;
  s.params["h"] = h;
  return s;
}

/// S^{n-1}(r) x R_z, hyperspherical angles u_0..u_{n-2}, z = u_{n-1}.
inline ImmersionSpec sphere_cylinder(int m, double r, int n = 3) {
  if (!(r > 0)) throw DomainError("sphere_cylinder needs r > 0");
  if (n < 2 || n > 2 * m) throw DomainError("sphere_cylinder needs 2 <= n <= 2m");
  ImmersionSpec s = blank("sphere_cylinder", m, n);
  const auto slots = spatial_slots(m);
  const int k = n - 1;  // sphere dimension, embedded in R^{k+1}
  // X_0 = r cos u_0, X_i = r sin u_0 ... sin u_{i-1} cos u_i, X_k = r sin u_0 ... sin u_{k-1}
  for (int i = 0; i <= k; ++i) {
    std::vector<Factor> f;
    for (int a = 0; a < std::min(i, k); ++a) f.push_back(sn(a));
    if (i < k) f.push_back(cs(i));
    s.coords[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)])].push_back(term(r, f));
  }
  s.coords[static_cast<std::size_t>(2 * m)].push_back(term(1.0, {pw(n - 1)}));
  s.params["r"] = r;
  s.params["n"] = n;
  for (int a = 0; a < k; ++a) {
    s.domain_lo(a) = 0.0;
    s.domain_hi(a) = (a == k - 1) ? 2 * std::numbers::pi : std::numbers::pi;
  }
  if (k == 1) s.domain_hi(0) = 2 * std::numbers::pi;
  return s;
}

/// T^2(a, b) x R_z: ((a + b cos v) cos u, (a + b cos v) sin u, b sin v, z), chart (u, v, z).
inline ImmersionSpec torus_cylinder(int m, double a, double b) {
  if (!(b > 0) || !(a > b)) throw DomainError("torus_cylinder needs a > b > 0");
  ImmersionSpec s = blank("torus_cylinder", m, 3);
  const auto slots = spatial_slots(m);
  s.coords[static_cast<std::size_t>(slots[0])] = {term(a, {cs(0)}), term(b, {cs(0), cs(1)})};
  s.coords[static_cast<std::size_t>(slots[1])] = {term(a, {sn(0)}), term(b, {sn(0), cs(1)})};
  s.coords[static_cast<std::size_t>(slots[2])] = {term(b, {sn(1)})};
  s.coords[static_cast<std::size_t>(2 * m)] = {term(1.0, {pw(2)})};
  s.params["a"] = a;
  s.params["b"] = b;
  s.domain_lo << 0.0, 0.0, -1e6;
  s.domain_hi << 2 * std::numbers::pi, 2 * std::numbers::pi, 1e6;
  return s;
}

struct Monomial {
  double coef = 0.0;
  std::vector<int> powers;  // one per graph variable
};

/// Graph of a polynomial height h(u_0..u_{n-2}) times R_z:
/// spatial slots carry u, the next slot carries h(u), z = u_{n-1}.
inline ImmersionSpec graph(int m, int n, const std::vector<Monomial>& height) {
  if (n < 2 || n > 2 * m) throw DomainError("graph needs 2 <= n <= 2m");
  ImmersionSpec s = blank("graph", m, n);
  const auto slots = spatial_slots(m);
  for (int i = 0; i < n - 1; ++i) s.coords[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)])].push_back(term(1.0, {pw(i)}));
  auto& hc = s.coords[static_cast<std::size_t>(slots[static_cast<std::size_t>(n - 1)])];
  for (const auto& mono : height) {
    if (static_cast<int>(mono.powers.size()) != n - 1)
      throw DomainError("graph monomial needs " + std::to_string(n - 1) + " exponents");
    int degree = 0;
    std::vector<Factor> f;
    for (int i = 0; i < n - 1; ++i) {
      if (mono.powers[static_cast<std::size_t>(i)] < 0) throw DomainError("graph exponents must be non-negative");
      degree += mono.powers[static_cast<std::size_t>(i)];
      if (mono.powers[static_cast<std::size_t>(i)] > 0) f.push_back(pw(i, mono.powers[static_cast<std::size_t>(i)]));
    }
    if (degree > 4) throw DomainError("graph height polynomials are limited to degree 4");
    hc.push_back(term(mono.coef, f));
  }
  s.coords[static_cast<std::size_t>(2 * m)].push_back(term(1.0, {pw(n - 1)}));
  s.params["n"] = n;
  return s;
}

struct Entry {
  std::string name;
  std::string parameters;
  std::string description;
};

inline std::vector<Entry> entries() {
  return {
      {"linear_invariant", "h: integer in [1, m] (n = 2h+1)", "span{xi, x_i, y_i}: invariant, sigma = 0"},
      {"linear_anti_invariant", "q: integer in [1, m] (n = q+1)", "span{xi, x_1..x_q}: anti-invariant, sigma = 0"},
      {"linear_slant", "theta: real in [0, pi/2]; h: integer with 2h <= m (n = 2h+1)",
       "span{xi, x_1, cos(theta) y_1 + sin(theta) x_2, ...}: theta-slant, sigma = 0"},
      {"sphere_cylinder", "r: real > 0; n: integer in [2, 2m]", "S^{n-1}(r) x R_z, umbilical in the sphere directions"},
      {"torus_cylinder", "a, b: reals with a > b > 0", "T^2(a, b) x R_z in (x1, x2, y1, z), n = 3"},
      {"graph", "n: integer in [2, 2m]; height: monomials {coef, powers} of degree <= 4",
       "graph of a polynomial height over n-1 spatial coordinates, times R_z"},
  };
}

}  // namespace catalog

// ----------------------------------------------------------------------------
// Pointwise data from an immersion

namespace detail {

inline Matrix frame_coefficients(const Matrix& jacobian, const Matrix& tangent) {
  // e_a = sum_i coeff(i, a) d_i x
  return jacobian.colPivHouseholderQr().solve(tangent);
}

}  // namespace detail

inline SubmanifoldPoint point_from_immersion(const AmbientStructure& flat, const ImmersionSpec& spec, const Vector& u) {
  if (flat.dim() != spec.ambient_dim()) throw StructuralError("immersion and ambient dimensions differ");
  if (u.size() != spec.chart_dim) throw StructuralError("chart point must have " + std::to_string(spec.chart_dim) + " coordinates");
  if (!spec.interior(u, 0.0)) throw DomainError("chart point lies outside the chart domain");
  const Jet j = spec.jet(u, 2);
  Eigen::JacobiSVD<Matrix> svd(j.first);
  if (svd.singularValues()(spec.chart_dim - 1) <= 1e-10 * svd.singularValues()(0))
    throw DomainError("immersion Jacobian is rank deficient at this chart point");

  // The normal complement depends only on the tangent span.
  const SubmanifoldPoint bare = build_point(flat, j.first);
  Sigma raw(static_cast<std::size_t>(bare.codim()), Matrix::Zero(spec.chart_dim, spec.chart_dim));
  for (int r = 0; r < bare.codim(); ++r)
    for (int A = 0; A < spec.ambient_dim(); ++A) raw[r] += bare.normal()(A, r) * j.second[A];
  return build_point(flat, j.first, raw);
}

struct FdCurvature {
  Riemann4 frame;       // orthonormal frame of point_from_immersion
  Riemann4 coordinate;  // R(d_i, d_j, d_k, d_l)
  double step = 0.0;
  std::string warning;
};

namespace detail {

// Gamma^l_ij from central differences of the metric.
inline std::vector<Matrix> christoffel(const ImmersionSpec& spec, const Vector& u, double h) {
  const int n = spec.chart_dim;
  std::vector<Matrix> dg(static_cast<std::size_t>(n));  // dg[k](i, j) = d_k g_ij
  for (int k = 0; k < n; ++k) {
    Vector up = u, dn = u;
    up(k) += h;
    dn(k) -= h;
    dg[k] = (spec.metric(up) - spec.metric(dn)) / (2 * h);
  }
  const Matrix ginv = spec.metric(u).inverse();
  std::vector<Matrix> gamma(static_cast<std::size_t>(n), Matrix::Zero(n, n));  // gamma[l](i, j)
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int q = 0; q < n; ++q) v += ginv(l, q) * (dg[i](j, q) + dg[j](i, q) - dg[q](i, j));
        gamma[l](i, j) = 0.5 * v;
      }
  return gamma;
}

}  // namespace detail

/// Riemann tensor of the induced metric by nested central differences
/// (metric -> Christoffel -> Riemann), re-expressed in the orthonormal frame
/// that point_from_immersion builds.
inline FdCurvature intrinsic_riemann_fd(const AmbientStructure& flat, const ImmersionSpec& spec, const Vector& u,
                                        double h = 1e-4) {
  const int n = spec.chart_dim;
  if (!(h > 0)) throw DomainError("finite-difference step must be positive");
  if (!spec.interior(u, 2 * h)) throw DomainError("chart point must be interior with margin 2h");
  FdCurvature out;
  out.step = h;
  if (h < 1e-7) out.warning = "step below 1e-7: nested differences are dominated by rounding";

  const std::vector<Matrix> gamma = detail::christoffel(spec, u, h);
  std::vector<std::vector<Matrix>> dgamma(static_cast<std::size_t>(n));  // dgamma[k][l](i, j) = d_k Gamma^l_ij
  for (int k = 0; k < n; ++k) {
    Vector up = u, dn = u;
    up(k) += h;
    dn(k) -= h;
    const auto gp = detail::christoffel(spec, up, h), gm = detail::christoffel(spec, dn, h);
    for (int l = 0; l < n; ++l) dgamma[k].push_back((gp[l] - gm[l]) / (2 * h));
  }
  const Matrix g = spec.metric(u);

  // R(d_i, d_j) d_k = Rm^l_ijk d_l,
  // Rm^l_ijk = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma^q_jk Gamma^l_iq - Gamma^q_ik Gamma^l_jq
  out.coordinate = Riemann4(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vector rm(n);
        for (int l = 0; l < n; ++l) {
          double v = dgamma[i][l](j, k) - dgamma[j][l](i, k);
          for (int q = 0; q < n; ++q) v += gamma[q](j, k) * gamma[l](i, q) - gamma[q](i, k) * gamma[l](j, q);
          rm(l) = v;
        }
        const Vector lowered = g * rm;
        for (int w = 0; w < n; ++w) out.coordinate(i, j, k, w) = lowered(w);
      }

  const SubmanifoldPoint p = point_from_immersion(flat, spec, u);
  const Matrix coeff = detail::frame_coefficients(spec.jet(u, 1).first, p.tangent());
  out.frame = Riemann4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                  v += coeff(i, a) * coeff(j, b) * coeff(k, c) * coeff(l, d) * out.coordinate(i, j, k, l);
          out.frame(a, b, c, d) = v;
        }
  return out;
}

struct GaussResidual {
  double residual = 0.0;  // max |R_gauss - R_fd| over the frame
  InducedCurvature induced;
  FdCurvature intrinsic;
};

/// Compares the Gauss-equation curvature with the intrinsic oracle.
inline GaussResidual gauss_residual(const AmbientStructure& flat, const ImmersionSpec& spec, const Vector& u,
                                    double h = 1e-4) {
  if (!flat.is_flat()) throw ConfigurationError("the Gauss oracle needs the flat model (c = f = f' = 0)");
  GaussResidual out;
  out.induced = induced_curvature(flat, point_from_immersion(flat, spec, u));
  out.intrinsic = intrinsic_riemann_fd(flat, spec, u, h);
  out.residual = out.induced.R.max_abs_diff(out.intrinsic.frame);
  return out;
}

/// Deterministic interior sample points of the chart box, bounded coordinates
/// clipped to [-1, 1] for unbounded directions.
inline std::vector<Vector> interior_samples(const ImmersionSpec& spec, std::size_t count, double margin = 0.1) {
  std::vector<Vector> out;
  for (std::size_t i = 1; out.size() < count; ++i) {
    Vector u(spec.chart_dim);
    for (int a = 0; a < spec.chart_dim; ++a) {
      static constexpr unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
      double lo = std::max(spec.domain_lo(a), -1.0), hi = std::min(spec.domain_hi(a), 1.0);
      if (spec.domain_hi(a) - spec.domain_lo(a) < 1e5) {
        lo = spec.domain_lo(a);
        hi = spec.domain_hi(a);
      }
      const double span = hi - lo;
      u(a) = lo + margin * span + (1 - 2 * margin) * span * linalg::radical_inverse(i, primes[a % 11]);
    }
    out.push_back(u);
  }
  return out;
}

}  // namespace lcac
