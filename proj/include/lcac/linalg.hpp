#pragma once

#include "lcac/common.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace lcac::linalg {

/// Modified Gram-Schmidt over the columns of `raw`, seeded with the columns of
/// `seed` (already orthonormal). Columns whose residual falls below
/// `rel_tol * |column|` are dropped. Returns the orthonormal columns kept,
/// seed first.
inline Matrix gram_schmidt(const Matrix& seed, const Matrix& raw, double rel_tol = 1e-10) {
  const Eigen::Index dim = raw.rows() > 0 ? raw.rows() : seed.rows();
  std::vector<Vector> kept;
  for (Eigen::Index j = 0; j < seed.cols(); ++j) kept.emplace_back(seed.col(j));
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    Vector v = raw.col(j);
    const double scale = v.norm();
    if (scale == 0.0) continue;
    // two passes keep the result orthogonal to working precision
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : kept) v -= q.dot(v) * q;
    if (v.norm() <= rel_tol * scale) continue;
    kept.emplace_back(v.normalized());
  }
  Matrix out(dim, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = kept[j];
  return out;
}

/// Orthonormal basis of span(E)^perp, built by Gram-Schmidt of the standard
/// basis against E. Depends only on span(E), not on the basis chosen for it.
inline Matrix orthonormal_complement(const Matrix& tangent) {
  const Eigen::Index dim = tangent.rows();
  Matrix out = gram_schmidt(tangent, Matrix::Identity(dim, dim), 1e-8);
  return out.middleCols(tangent.cols(), dim - tangent.cols());
}

/// Orthogonal matrix whose first column is the unit vector x.
inline Matrix complete_to_frame(const Vector& x) {
  const Eigen::Index n = x.size();
  Eigen::HouseholderQR<Matrix> qr(x);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  if (q.col(0).dot(x) < 0) q.col(0) = -q.col(0);
  return q;
}

/// Orthonormal basis (n x n-1) of the complement of the unit vector x.
inline Matrix complement_of(const Vector& x) {
  return complete_to_frame(x).rightCols(x.size() - 1);
}

inline double radical_inverse(std::uint64_t index, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

/// Deterministic low-discrepancy directions on S^{dim-1}: Halton points in
/// the unit cube, pushed through Box-Muller pairs and normalized.
inline std::vector<Vector> sphere_net(Eigen::Index dim, std::size_t count) {
  static constexpr std::array<unsigned, 16> primes = {2, 3, 5, 7, 11, 13, 17, 19,
                                                      23, 29, 31, 37, 41, 43, 47, 53};
  std::vector<Vector> out;
  out.reserve(count);
  if (dim <= 0) return out;
  if (dim == 1) {
    for (std::size_t i = 0; i < count; ++i) out.emplace_back(Vector::Constant(1, i % 2 ? -1.0 : 1.0));
    return out;
  }
  const Eigen::Index pairs = (dim + 1) / 2;
  for (std::size_t i = 1; out.size() < count; ++i) {
    Vector g(2 * pairs);
    for (Eigen::Index p = 0; p < pairs; ++p) {
      const double u1 = radical_inverse(i, primes[(2 * p) % primes.size()]);
      const double u2 = radical_inverse(i, primes[(2 * p + 1) % primes.size()]);
      const double rad = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      g(2 * p) = rad * std::cos(2.0 * std::numbers::pi * u2);
      g(2 * p + 1) = rad * std::sin(2.0 * std::numbers::pi * u2);
    }
    Vector v = g.head(dim);
    const double nv = v.norm();
    if (nv < 1e-12) continue;
    out.emplace_back(v / nv);
  }
  return out;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace lcac::linalg
