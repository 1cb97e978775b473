#pragma once

// Induced curvature through the Gauss equation and the intrinsic invariants
// built on it: sectional, Ricci, k-Ricci curvature and theta_k.
//
// Conventions: R(X,Y,Z,W) = <R(X,Y)Z, W> and K(X,Y) = R(X,Y,Y,X), which makes
// phi-sections of the ambient model have curvature c.

#include "lcac/ambient.hpp"
#include "lcac/common.hpp"
#include "lcac/linalg.hpp"
#include "lcac/parallel.hpp"
#include "lcac/subpoint.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace lcac {

/// Dense 4-index array over an n-dimensional frame.
class Riemann4 {
 public:
  Riemann4() = default;
  explicit Riemann4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  int n() const { return n_; }
  double& operator()(int a, int b, int c, int d) { return data_[index(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }
  const std::vector<double>& data() const { return data_; }

  /// R(u, v, w, x) for vectors in frame coordinates.
  double contract(const Vector& u, const Vector& v, const Vector& w, const Vector& x) const {
    double sum = 0.0;
    for (int a = 0; a < n_; ++a) {
      if (u(a) == 0.0) continue;
      for (int b = 0; b < n_; ++b) {
        if (v(b) == 0.0) continue;
        double inner = 0.0;
        for (int c = 0; c < n_; ++c)
          for (int d = 0; d < n_; ++d) inner += (*this)(a, b, c, d) * w(c) * x(d);
        sum += u(a) * v(b) * inner;
      }
    }
    return sum;
  }

  double max_abs_diff(const Riemann4& o) const {
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - o.data_[i]));
    return m;
  }

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_ = 0;
  std::vector<double> data_;
};

struct InducedCurvature {
  Riemann4 R;
  double tau = 0.0;
  Vector ric;  // Ric(e_i)
  Matrix K;    // K(i, j) = R(e_i, e_j, e_j, e_i)
  /// Largest difference between the tangential (P-based) form and the
  /// ambient tensor plus sigma terms evaluated on the frame.
  double gauss_cross_check = 0.0;

  int n() const { return R.n(); }
};

/// Curvature of the induced metric at p.
inline InducedCurvature induced_curvature(const AmbientStructure& s, const SubmanifoldPoint& p) {
  const int n = p.n();
  const Matrix P = phi_split(s, p).P;
  const Vector& eta = p.eta();
  const double iso = s.isotropic_coeff(), ph = s.phi_coeff(), xc = s.xi_coeff();
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  // <sigma(e_a, e_b), sigma(e_c, e_d)>
  auto ss = [&](int a, int b, int c, int d) {
    double v = 0.0;
    for (const auto& A : p.sigma()) v += A(a, b) * A(c, d);
    return v;
  };

  InducedCurvature ic;
  ic.R = Riemann4(n);
  Riemann4 generic(n);
  std::vector<Vector> amb_r(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        amb_r[(static_cast<std::size_t>(a) * n + b) * n + c] =
            p.tangent().transpose() * ambient_curvature(s, p.tangent().col(a), p.tangent().col(b), p.tangent().col(c));

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double sig = ss(a, d, b, c) - ss(a, c, b, d);
          const double tangential =
              iso * (delta(a, d) * delta(b, c) - delta(a, c) * delta(b, d)) +
              ph * (P(a, d) * P(b, c) - P(a, c) * P(b, d) - 2.0 * P(a, b) * P(c, d)) +
              xc * (eta(a) * eta(c) * delta(b, d) - eta(b) * eta(c) * delta(a, d) + delta(a, c) * eta(b) * eta(d) -
                    delta(b, c) * eta(a) * eta(d));
          ic.R(a, b, c, d) = tangential + sig;
          generic(a, b, c, d) = amb_r[(static_cast<std::size_t>(a) * n + b) * n + c](d) + sig;
        }
  ic.gauss_cross_check = ic.R.max_abs_diff(generic);

  ic.K = Matrix::Zero(n, n);
  ic.ric = Vector::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) {
        ic.K(a, b) = ic.R(a, b, b, a);
        ic.ric(a) += ic.K(a, b);
      }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) ic.tau += ic.K(a, b);
  return ic;
}

/// Sectional curvature of span{u, v} (tangent coordinates, any basis of the plane).
inline double sectional(const InducedCurvature& ic, const Vector& u, const Vector& v) {
  const double area = u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2);
  if (area <= 1e-24) throw DomainError("sectional curvature needs two independent vectors");
  return ic.R.contract(u, v, v, u) / area;
}

inline void require_unit(const Vector& x, int n, const char* what) {
  if (x.size() != n) throw StructuralError(std::string(what) + " must have " + std::to_string(n) + " tangent coordinates");
  if (std::abs(x.norm() - 1.0) > tol::derived) throw DomainError(std::string(what) + " must be a unit vector");
}

/// Ric(X): X is completed to an orthonormal frame and the sectional
/// curvatures K(X, f_j) are summed.
inline double ricci(const InducedCurvature& ic, const Vector& x) {
  require_unit(x, ic.n(), "Ricci direction");
  const Matrix frame = linalg::complete_to_frame(x);
  double sum = 0.0;
  for (int j = 1; j < ic.n(); ++j) sum += ic.R.contract(x, frame.col(j), frame.col(j), x);
  return sum;
}

/// Symmetric Ricci tensor Ric(e_a, e_b) = sum_c R(e_a, e_c, e_c, e_b).
inline Matrix ricci_tensor(const InducedCurvature& ic) {
  const int n = ic.n();
  Matrix out = Matrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out(a, b) += ic.R(a, c, c, b);
  return 0.5 * (out + out.transpose());
}

/// Orthonormal k-plane in tangent coordinates; the first column is the
/// distinguished unit vector X.
class KPlane {
 public:
  explicit KPlane(Matrix vectors) : v_(std::move(vectors)) {
    const Eigen::Index k = v_.cols();
    if (k < 2 || k > v_.rows())
      throw DomainError("k-plane dimension must satisfy 2 <= k <= " + std::to_string(v_.rows()) + ", got " + std::to_string(k));
    if (linalg::max_abs(v_.transpose() * v_ - Matrix::Identity(k, k)) > tol::structural)
      throw DomainError("k-plane vectors must be orthonormal");
  }
  int k() const { return static_cast<int>(v_.cols()); }
  const Matrix& vectors() const { return v_; }
  Vector x() const { return v_.col(0); }

 private:
  Matrix v_;
};

struct KRicci {
  double ric_l = 0.0;  // K_12 + ... + K_1k
  double tau_l = 0.0;  // sum_{i<j<=k} K_ij
};

inline KRicci k_ricci(const InducedCurvature& ic, const KPlane& plane) {
  if (plane.vectors().rows() != ic.n()) throw StructuralError("k-plane lives in a different tangent space");
  const Matrix& v = plane.vectors();
  KRicci out;
  for (int i = 0; i < plane.k(); ++i)
    for (int j = i + 1; j < plane.k(); ++j) {
      const double kij = ic.R.contract(v.col(i), v.col(j), v.col(j), v.col(i));
      out.tau_l += kij;
      if (i == 0) out.ric_l += kij;
    }
  return out;
}

struct SearchConfig {
  int restarts = 32;
  int net_size = 1024;
  double step_tol = 1e-10;
  int max_iterations = 500;
  double fd_step = 1e-6;
  unsigned jobs = 1;
};

struct ThetaK {
  int k = 0;
  double value = 0.0;  // theta_k(p)
  Vector argmin_x;
  Matrix argmin_plane;  // columns: X, then the minimizing complement
  bool certified_inner = true;
  bool heuristic_outer = true;
  int restarts_used = 0;
  long evaluations = 0;
  bool budget_exhausted = false;
  std::string warning;
};

/// Quadratic form v -> R(X, v, v, X) on the tangent space, as an n x n matrix.
class JacobiForm {
 public:
  explicit JacobiForm(const InducedCurvature& ic) : n_(ic.n()), m_(ic.n() * ic.n(), ic.n() * ic.n()) {
    for (int a = 0; a < n_; ++a)
      for (int d = 0; d < n_; ++d)
        for (int b = 0; b < n_; ++b)
          for (int c = 0; c < n_; ++c) m_(a * n_ + d, b * n_ + c) = ic.R(a, b, c, d);
  }

  Matrix at(const Vector& x) const {
    Vector xx(n_ * n_);
    for (int a = 0; a < n_; ++a)
      for (int d = 0; d < n_; ++d) xx(a * n_ + d) = x(a) * x(d);
    const Vector q = m_.transpose() * xx;
    Matrix out = Eigen::Map<const Matrix>(q.data(), n_, n_).transpose();
    return 0.5 * (out + out.transpose());
  }

  /// inf over (k-1)-subspaces V of X^perp of trace(Q_X | V): the sum of the
  /// k-1 smallest eigenvalues of Q_X restricted to X^perp.
  double inner_infimum(const Vector& x, int k, Matrix* minimizer = nullptr) const {
    const Matrix comp = linalg::complement_of(x);
    const Matrix restricted = comp.transpose() * at(x) * comp;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(restricted, minimizer ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (minimizer) *minimizer = comp * eig.eigenvectors().leftCols(k - 1);
    return eig.eigenvalues().head(k - 1).sum();
  }

 private:
  int n_;
  Matrix m_;
};

namespace detail {

struct Descent {
  double value = 0.0;
  Vector x;
  int iterations = 0;
  bool converged = false;
  long evaluations = 0;
};

// Projected gradient descent on the unit sphere with central-difference
// gradients and Armijo backtracking; retraction by normalization.
template <typename F>
Descent sphere_descent(const F& f, Vector x, const SearchConfig& cfg) {
  Descent out;
  x.normalize();
  double fx = f(x);
  long evals = 1;
  double t = 0.1;
  int it = 0;
  bool converged = false;
  for (; it < cfg.max_iterations; ++it) {
    const Matrix comp = linalg::complement_of(x);
    Vector g(comp.cols());
    for (Eigen::Index j = 0; j < comp.cols(); ++j) {
      const Vector step = cfg.fd_step * comp.col(j);
      g(j) = (f((x + step).normalized()) - f((x - step).normalized())) / (2.0 * cfg.fd_step);
    }
    evals += 2 * comp.cols();
    const Vector grad = comp * g;
    const double gn = grad.norm();
    if (gn < 1e-14) {
      converged = true;
      break;
    }
    bool accepted = false;
    Vector trial;
    double ft = fx;
    while (t * gn >= cfg.step_tol) {
      trial = (x - t * grad).normalized();
      ft = f(trial);
      ++evals;
      if (ft <= fx - 1e-4 * t * gn * gn) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      converged = true;
      break;
    }
    const double moved = (trial - x).norm();
    x = trial;
    fx = ft;
    t *= 2.0;
    if (moved < cfg.step_tol) {
      converged = true;
      break;
    }
  }
  out.value = fx;
  out.x = x;
  out.iterations = it;
  out.converged = converged;
  out.evaluations = evals;
  return out;
}

}  // namespace detail

/// theta_k(p) = (1/(k-1)) inf_{L, X in L} Ric_L(X).
///
/// The inner infimum over k-planes through X is exact (Ky Fan). The outer
/// infimum over unit X is searched: candidates are the frame directions, the
/// minimizing eigenvector of the Ricci tensor and a low-discrepancy net; the
/// best `restarts` distinct candidates seed projected gradient descent. The
/// frame directions guarantee value <= tau / C(n,2). For k = n the objective
/// is the Ricci quadratic form and the Ricci eigenvector makes it exact.
inline ThetaK theta_k(const InducedCurvature& ic, int k, const SearchConfig& cfg = {}) {
  const int n = ic.n();
  if (k < 2 || k > n) throw DomainError("k out of range [2," + std::to_string(n) + "], got " + std::to_string(k));
  const JacobiForm form(ic);
  auto objective = [&](const Vector& x) { return form.inner_infimum(x, k); };

  std::vector<Vector> candidates;
  for (int i = 0; i < n; ++i) candidates.emplace_back(Vector::Unit(n, i));
  Eigen::SelfAdjointEigenSolver<Matrix> ric_eig(ricci_tensor(ic));
  candidates.emplace_back(ric_eig.eigenvectors().col(0).normalized());
  for (auto& v : linalg::sphere_net(n, static_cast<std::size_t>(std::max(0, cfg.net_size)))) candidates.push_back(std::move(v));

  std::vector<double> values(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) values[i] = objective(candidates[i]);

  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  // objective(X) = objective(-X), so antipodal candidates are duplicates
  std::vector<std::size_t> seeds;
  for (std::size_t idx : order) {
    if (static_cast<int>(seeds.size()) >= cfg.restarts) break;
    bool dup = false;
    for (std::size_t s : seeds)
      if (std::abs(candidates[s].dot(candidates[idx])) > 1.0 - 1e-9) dup = true;
    if (!dup) seeds.push_back(idx);
  }

  const auto runs = parallel_map(seeds.size(), cfg.jobs,
                                 [&](std::size_t i) { return detail::sphere_descent(objective, candidates[seeds[i]], cfg); });

  ThetaK out;
  out.k = k;
  out.restarts_used = static_cast<int>(runs.size());
  out.evaluations = static_cast<long>(candidates.size());
  double best = values[order.front()];
  Vector best_x = candidates[order.front()];
  for (const auto& r : runs) {
    out.evaluations += r.evaluations;
    if (!r.converged) out.budget_exhausted = true;
    if (r.value < best) {
      best = r.value;
      best_x = r.x;
    }
  }
  Matrix minimizer;
  const double inner = form.inner_infimum(best_x, k, &minimizer);
  out.value = inner / (k - 1);
  out.argmin_x = best_x;
  out.argmin_plane = Matrix(n, k);
  out.argmin_plane.col(0) = best_x;
  out.argmin_plane.rightCols(k - 1) = minimizer;
  out.heuristic_outer = (k != n);
  if (out.budget_exhausted)
    out.warning = "outer search hit the iteration budget (" + std::to_string(cfg.max_iterations) + ") before converging";
  return out;
}

}  // namespace lcac
