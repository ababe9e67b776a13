#ifndef QCLAB_CONFIG_HPP
#define QCLAB_CONFIG_HPP

#include <numbers>
#include <stdexcept>
#include <string>

namespace qclab {

inline constexpr double pi = std::numbers::pi;
inline constexpr double half_pi = std::numbers::pi / 2.0;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Kernel-wide numerical tolerances.
struct Tolerances {
  /// Angle tolerance for closed-form trigonometry.
  double angle = 1e-9;
  /// Overshoot below which cosine-type quantities are clamped instead of rejected.
  double clamp = 1e-12;
  /// Perimeter slack for the collinear (maximal perimeter) convention when k > 0.
  double perimeter = 1e-9;
};

inline Tolerances& tolerances() {
  static Tolerances tol;
  return tol;
}

/// Raised when inputs do not describe a valid configuration of a model plane or space.
class GeometryError : public std::invalid_argument {
 public:
  explicit GeometryError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a geodesic step would leave the range where the geodesic is minimal.
class StepTooLarge : public GeometryError {
 public:
  explicit StepTooLarge(const std::string& what) : GeometryError(what) {}
};

}  // namespace qclab

#endif
