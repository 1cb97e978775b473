#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lcac {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Tolerances shared across modules.
namespace tol {
inline constexpr double structural = 1e-12;   // ambient identities, frame orthonormality
inline constexpr double derived = 1e-10;      // derived equalities, tangency of xi
inline constexpr double holds = 1e-9;         // normalized slack floor for an inequality
inline constexpr double equality = 1e-7;      // equality flags, eigenvalue clustering
inline constexpr double slant_spread = 1e-6;  // sampled Wirtinger angle spread
}  // namespace tol

// Error taxonomy. Every bound assumes xi is tangent, so that failure gets
// its own type rather than a generic domain error.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct HypothesisViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool all_finite(const Matrix& a) { return a.allFinite(); }

/// Counter-based generator: a trial's stream depends only on (seed, index),
/// so parallel runs reproduce sequential ones bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  SplitMix64(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed ^ mix(stream + 0x9E3779B97F4A7C15ULL))) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix(z);
  }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double gaussian() {
    // Box-Muller, one draw per call; u1 kept away from zero.
    const double u1 = (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

}  // namespace lcac
