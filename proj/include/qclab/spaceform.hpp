#ifndef QCLAB_SPACEFORM_HPP
#define QCLAB_SPACEFORM_HPP

// Trigonometry of the simply connected model plane of constant curvature k.
//
// All side/angle maps use half-angle (haversine-type) forms so that tiny and
// nearly degenerate triangles keep full relative accuracy.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "qclab/config.hpp"

namespace qclab {

/// Curvature of the comparison plane.
class CurvatureBound {
 public:
  constexpr CurvatureBound() = default;
  explicit CurvatureBound(double k) : k_(k) {
    if (!std::isfinite(k)) throw GeometryError("curvature bound must be finite");
  }

  double value() const { return k_; }
  bool positive() const { return k_ > 0.0; }
  bool negative() const { return k_ < 0.0; }

  /// Diameter of the model plane: pi/sqrt(k) for k > 0, infinite otherwise.
  double diameter() const {
    return k_ > 0.0 ? pi / std::sqrt(k_) : std::numeric_limits<double>::infinity();
  }

  /// S_k(x): sin(sqrt(k) x)/sqrt(k), x, or sinh(sqrt(-k) x)/sqrt(-k).
  double sn(double x) const {
    if (k_ > 0.0) {
      const double r = std::sqrt(k_);
      return std::sin(r * x) / r;
    }
    if (k_ < 0.0) {
      const double r = std::sqrt(-k_);
      return std::sinh(r * x) / r;
    }
    return x;
  }

 private:
  double k_ = 0.0;
};

/// An angle in [0, pi].
class Angle {
 public:
  constexpr Angle() = default;
  explicit Angle(double radians) : value_(radians) {
    const double tol = tolerances().angle;
    if (!(radians >= -tol && radians <= pi + tol)) {
      throw GeometryError("angle outside [0, pi]: " + std::to_string(radians));
    }
    value_ = std::clamp(radians, 0.0, pi);
  }

  double value() const { return value_; }
  double cos() const { return std::cos(value_); }

 private:
  double value_ = 0.0;
};

namespace detail {

/// Relative size of s - side below which a triangle counts as degenerate (a few ulps).
inline constexpr double degenerate_slack = 16.0 * std::numeric_limits<double>::epsilon();

inline void require_side(double x, const char* name) {
  if (!std::isfinite(x) || x < 0.0) {
    throw GeometryError(std::string("side ") + name + " must be finite and nonnegative");
  }
}

inline void require_within_diameter(const CurvatureBound& k, double x, const char* name) {
  if (k.positive() && x > k.diameter() + tolerances().perimeter) {
    throw GeometryError(std::string("side ") + name + " exceeds pi/sqrt(k)");
  }
}

inline double clamp_nonneg(double x, double scale, const char* what) {
  if (x >= 0.0) return x;
  if (x >= -tolerances().clamp * std::max(1.0, scale)) return 0.0;
  throw GeometryError(std::string("triangle inequality violated (") + what + ")");
}

}  // namespace detail

/// Side opposite `alpha` in the model triangle with adjacent sides b and c.
inline double side_from_angle(const CurvatureBound& k, double b, double c, const Angle& alpha) {
  detail::require_side(b, "b");
  detail::require_side(c, "c");
  detail::require_within_diameter(k, b, "b");
  detail::require_within_diameter(k, c, "c");
  const double half = alpha.value() / 2.0;
  const double s2 = std::sin(half) * std::sin(half);
  if (k.positive()) {
    const double r = std::sqrt(k.value());
    const double bb = std::min(r * b, pi);
    const double cc = std::min(r * c, pi);
    const double sd = std::sin((bb - cc) / 2.0);
    const double cs = std::cos((bb + cc) / 2.0);
    const double prod = std::sin(bb) * std::sin(cc);
    const double hav = sd * sd + prod * s2;
    const double co_hav = cs * cs + prod * (1.0 - s2);
    return 2.0 * std::atan2(std::sqrt(std::max(hav, 0.0)), std::sqrt(std::max(co_hav, 0.0))) / r;
  }
  if (k.negative()) {
    const double r = std::sqrt(-k.value());
    const double sd = std::sinh(r * (b - c) / 2.0);
    const double hav = sd * sd + std::sinh(r * b) * std::sinh(r * c) * s2;
    return 2.0 * std::asinh(std::sqrt(std::max(hav, 0.0))) / r;
  }
  const double d = b - c;
  return std::sqrt(d * d + 4.0 * b * c * s2);
}

/// Comparison angle at p of the model triangle with |pq|, |pr| and opposite side |qr|.
///
/// For k > 0 and perimeter 2*pi/sqrt(k) the three vertices are placed on one
/// geodesic of length pi/sqrt(k): the angle is pi when qr is that geodesic
/// and 0 otherwise.
inline Angle comparison_angle(const CurvatureBound& k, double pq, double pr, double qr) {
  detail::require_side(pq, "pq");
  detail::require_side(pr, "pr");
  detail::require_side(qr, "qr");
  if (!(pq > 0.0) || !(pr > 0.0)) throw GeometryError("comparison angle needs |pq|, |pr| > 0");
  detail::require_within_diameter(k, pq, "pq");
  detail::require_within_diameter(k, pr, "pr");
  detail::require_within_diameter(k, qr, "qr");

  // s - side for each side, in Kahan's needle-triangle ordering (largest side
  // first) so that nearly degenerate triangles keep their tiny differences.
  std::array<double, 3> side = {qr, pq, pr};
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) { return side[a] > side[b]; });
  const double x1 = side[order[0]], x2 = side[order[1]], x3 = side[order[2]];
  const double s = (x1 + (x2 + x3)) / 2.0;
  std::array<double, 3> diff{};
  diff[order[0]] = detail::clamp_nonneg((x3 - (x1 - x2)) / 2.0, s, order[0] == 0 ? "qr" : order[0] == 1 ? "pq" : "pr");
  diff[order[1]] = (x3 + (x1 - x2)) / 2.0;
  diff[order[2]] = (x1 + (x2 - x3)) / 2.0;
  // Degeneracy at the level of rounding in the sides is treated as exact.
  for (double& d : diff) {
    if (d <= detail::degenerate_slack * s) d = 0.0;
  }

  if (k.positive()) {
    const double limit = k.diameter();
    if (s > limit + tolerances().perimeter) {
      throw GeometryError("perimeter exceeds 2*pi/sqrt(k)");
    }
    if (s >= limit - tolerances().perimeter) {
      return Angle(qr >= limit - tolerances().perimeter ? pi : 0.0);
    }
  }
  const double xa = diff[0];
  const double xb = diff[1];
  const double xc = diff[2];
  const double num = k.sn(xb) * k.sn(xc);
  const double den = k.sn(s) * k.sn(xa);
  return Angle(2.0 * std::atan2(std::sqrt(std::max(num, 0.0)), std::sqrt(std::max(den, 0.0))));
}

/// cos|eta zeta| >= cos|eta xi| cos|zeta xi|, i.e. the comparison angle at xi in
/// the unit-sphere triangle (eta, xi, zeta) is at most pi/2.
inline bool right_angle_bound_check(const Angle& eta_zeta, const Angle& eta_xi, const Angle& zeta_xi,
                                    double tol = tolerances().angle) {
  return eta_zeta.cos() >= eta_xi.cos() * zeta_xi.cos() - tol;
}

/// Signed slack of right_angle_bound_check; negative means the bound fails.
inline double right_angle_bound_margin(double eta_zeta, double eta_xi, double zeta_xi) {
  return std::cos(eta_zeta) - std::cos(eta_xi) * std::cos(zeta_xi);
}

enum class Ordering { less, equal, greater };

inline const char* to_string(Ordering o) {
  switch (o) {
    case Ordering::less: return "less";
    case Ordering::equal: return "equal";
    case Ordering::greater: return "greater";
  }
  return "?";
}

inline Ordering compare(double a, double b, double tol = tolerances().angle) {
  if (a < b - tol) return Ordering::less;
  if (a > b + tol) return Ordering::greater;
  return Ordering::equal;
}

/// Hinge at the vertex z1: p and z2 on either side, o across the shared side [z1 o].
struct Hinge {
  double end_side = 0.0;     // |p z1|
  double shared_side = 0.0;  // |z1 o|
  double far_side = 0.0;     // |z1 z2|
};

/// Angles at z1 of the two glued triangles (p z1 o) and (o z1 z2).
struct SplitAngles {
  Angle toward_end;  // angle p z1 o
  Angle toward_far;  // angle o z1 z2
};

/// Glued pair of model triangles versus the straightened triangle (p, o, z2)
/// with |p z2| = |p z1| + |z1 z2|.
struct AlexandrovComparison {
  double glued_shared = 0.0;     // angle p o z1 + angle z1 o z2
  double straight_shared = 0.0;  // angle at o of the straightened triangle
  double glued_end = 0.0;        // angle z1 p o
  double straight_end = 0.0;     // angle at p of the straightened triangle
  Ordering at_shared = Ordering::equal;  // glued_shared relative to straight_shared
  Ordering at_end = Ordering::equal;     // straight_end relative to glued_end
};

/// Alexandrov's lemma for the hinge: when the split angles at z1 sum to at most
/// pi, the straightened angle at p is at most the glued one (at_end is less or
/// equal); when they sum to at least pi it is at least the glued one. The angle
/// at o is reported too: there the glued angle never exceeds the straightened
/// one while it is at most pi.
///
/// Throws when |po| + |o z2| < |p z1| + |z1 z2|, where no straightened triangle exists.
inline AlexandrovComparison alexandrov_lemma_compare(const CurvatureBound& k, const Hinge& hinge,
                                                     const SplitAngles& split) {
  const double x = hinge.end_side;
  const double w = hinge.shared_side;
  const double y = hinge.far_side;
  if (!(x > 0.0 && w > 0.0 && y > 0.0)) throw GeometryError("hinge sides must be positive");
  detail::require_within_diameter(k, x + y, "|p z1| + |z1 z2|");

  const double po = side_from_angle(k, x, w, split.toward_end);
  const double oz2 = side_from_angle(k, w, y, split.toward_far);
  if (po + oz2 < (x + y) * (1.0 - tolerances().clamp)) {
    throw GeometryError("straightened triangle does not exist for this hinge");
  }

  AlexandrovComparison out;
  out.glued_shared = comparison_angle(k, po, w, x).value() + comparison_angle(k, w, oz2, y).value();
  out.glued_end = comparison_angle(k, x, po, w).value();
  out.straight_shared = comparison_angle(k, po, oz2, x + y).value();
  out.straight_end = comparison_angle(k, x + y, po, oz2).value();
  out.at_shared = compare(out.glued_shared, out.straight_shared);
  out.at_end = compare(out.straight_end, out.glued_end);
  return out;
}

}  // namespace qclab

#endif
