#pragma once

#include "lcac/lcac.hpp"

#include <vector>

namespace fx {

using namespace lcac;

inline Vector random_vector(SplitMix64& rng, int d) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.gaussian();
  return v;
}

inline Vector random_unit(SplitMix64& rng, int d) { return random_vector(rng, d).normalized(); }

inline Matrix random_orthogonal(SplitMix64& rng, int d) {
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.gaussian();
  return Eigen::HouseholderQR<Matrix>(g).householderQ();
}

inline Sigma random_sigma(SplitMix64& rng, int n, int codim, double scale = 1.0) {
  Sigma s(static_cast<std::size_t>(codim), Matrix::Zero(n, n));
  for (auto& a : s)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) a(i, j) = a(j, i) = scale * rng.uniform(-1, 1);
  return s;
}

inline Sigma zero_sigma(int n, int codim) { return Sigma(static_cast<std::size_t>(codim), Matrix::Zero(n, n)); }

/// span{xi, x_1, y_1} in R^5.
inline Matrix invariant_frame(int m = 2) {
  Matrix f(2 * m + 1, 3);
  f << basis::z(m), basis::x(m, 1), basis::y(m, 1);
  return f;
}

/// span{xi, x_1, x_2} in R^5.
inline Matrix anti_invariant_frame(int m = 2) {
  Matrix f(2 * m + 1, 3);
  f << basis::z(m), basis::x(m, 1), basis::x(m, 2);
  return f;
}

/// span{xi, x_1, cos(t) y_1 + sin(t) x_2}.
inline Matrix slant_frame(double t, int m = 2) {
  Matrix f(2 * m + 1, 3);
  f << basis::z(m), basis::x(m, 1), std::cos(t) * basis::y(m, 1) + std::sin(t) * basis::x(m, 2);
  return f;
}

/// span{xi, x_1, y_1, x_2} in R^7: CR with h = 1, dim D-perp = 1.
inline Matrix cr_frame(int m = 3) {
  Matrix f(2 * m + 1, 4);
  f << basis::z(m), basis::x(m, 1), basis::y(m, 1), basis::x(m, 2);
  return f;
}

/// sigma^{first normal} = lambda I, all others zero.
inline Sigma umbilic_sigma(int n, int codim, double lambda) {
  Sigma s = zero_sigma(n, codim);
  s[0] = lambda * Matrix::Identity(n, n);
  return s;
}

}  // namespace fx
