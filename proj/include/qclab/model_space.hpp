#ifndef QCLAB_MODEL_SPACE_HPP
#define QCLAB_MODEL_SPACE_HPP

// Analytic Alexandrov spaces with closed-form distances and geodesics:
// round spheres, Euclidean spaces, Euclidean cones over a circle of length
// theta <= 2*pi, and spherical suspensions ("spindles") over a circle of
// length L <= 2*pi.
//
// Cones and spindles are handled by unrolling: the wedge spanned by two points
// is developed isometrically into the plane or the unit sphere, which is
// possible because the angular separation of two points never exceeds pi.

#include <Eigen/Dense>
#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qclab/config.hpp"
#include "qclab/direction.hpp"
#include "qclab/random.hpp"
#include "qclab/spaceform.hpp"

namespace qclab {

enum class SpaceKind { sphere, euclidean, cone, spindle };

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::sphere: return "sphere";
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::cone: return "cone";
    case SpaceKind::spindle: return "spindle";
  }
  return "?";
}

class ModelSpace {
 public:
  static ModelSpace sphere(int dimension, double radius = 1.0) {
    if (dimension < 1 || dimension > 3) throw GeometryError("sphere dimension must be 1, 2 or 3");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("sphere radius must be positive");
    return ModelSpace(SpaceKind::sphere, dimension, radius, 0.0);
  }
  static ModelSpace euclidean(int dimension) {
    if (dimension < 1 || dimension > 3) throw GeometryError("euclidean dimension must be 1, 2 or 3");
    return ModelSpace(SpaceKind::euclidean, dimension, 1.0, 0.0);
  }
  /// Euclidean cone over a circle of length theta in (0, 2*pi].
  static ModelSpace cone(double theta) {
    if (!(theta > 0.0 && theta <= two_pi + 1e-12)) throw GeometryError("cone angle must lie in (0, 2*pi]");
    return ModelSpace(SpaceKind::cone, 2, 1.0, std::min(theta, two_pi));
  }
  /// Spherical suspension over a circle of length L in (0, 2*pi].
  static ModelSpace spindle(double equator) {
    if (!(equator > 0.0 && equator <= two_pi + 1e-12)) throw GeometryError("spindle equator must lie in (0, 2*pi]");
    return ModelSpace(SpaceKind::spindle, 2, 1.0, std::min(equator, two_pi));
  }

  SpaceKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  double radius() const { return radius_; }
  /// Cone angle theta or spindle equator length L.
  double angle() const { return angle_; }
  bool full_angle() const { return angle_ >= two_pi - 1e-12; }

  CurvatureBound lower_bound() const {
    switch (kind_) {
      case SpaceKind::sphere: return CurvatureBound(1.0 / (radius_ * radius_));
      case SpaceKind::euclidean: return CurvatureBound(0.0);
      case SpaceKind::cone: return CurvatureBound(0.0);
      case SpaceKind::spindle: return CurvatureBound(1.0);
    }
    return CurvatureBound(0.0);
  }

  bool compact() const { return kind_ == SpaceKind::sphere || kind_ == SpaceKind::spindle; }

  std::string describe() const {
    switch (kind_) {
      case SpaceKind::sphere: return fmt::format("sphere(n={},R={:.17g})", dimension_, radius_);
      case SpaceKind::euclidean: return fmt::format("euclidean(n={})", dimension_);
      case SpaceKind::cone: return fmt::format("cone(theta={:.17g})", angle_);
      case SpaceKind::spindle: return fmt::format("spindle(L={:.17g})", angle_);
    }
    return "?";
  }

 private:
  ModelSpace(SpaceKind kind, int dimension, double radius, double angle)
      : kind_(kind), dimension_(dimension), radius_(radius), angle_(angle) {}

  SpaceKind kind_;
  int dimension_;
  double radius_;
  double angle_;
};

/// Chart coordinates of a point:
/// sphere: unit vector in R^{n+1}; euclidean: vector in R^n;
/// cone: (r, phi); spindle: (s, phi). Unused slots are zero.
struct SpacePoint {
  Eigen::Vector4d c = Eigen::Vector4d::Zero();
};

namespace detail {
inline constexpr double singular_eps = 1e-15;
}

// ----- construction and canonical form ------------------------------------

inline SpacePoint canonical(const ModelSpace& X, SpacePoint p) {
  switch (X.kind()) {
    case SpaceKind::sphere: {
      const double n = p.c.norm();
      if (!(n > 0.0)) throw GeometryError("sphere point must be nonzero");
      p.c /= n;
      for (int i = X.dimension() + 1; i < 4; ++i) p.c[i] = 0.0;
      return p;
    }
    case SpaceKind::euclidean:
      for (int i = X.dimension(); i < 4; ++i) p.c[i] = 0.0;
      return p;
    case SpaceKind::cone:
      if (p.c[0] < 0.0) throw GeometryError("cone radius must be nonnegative");
      if (p.c[0] <= detail::singular_eps) return SpacePoint{};
      p.c[1] = wrap(p.c[1], X.angle());
      p.c[2] = p.c[3] = 0.0;
      return p;
    case SpaceKind::spindle:
      if (p.c[0] < -1e-12 || p.c[0] > pi + 1e-12) throw GeometryError("spindle polar distance must lie in [0, pi]");
      if (p.c[0] <= detail::singular_eps) return SpacePoint{};
      if (p.c[0] >= pi - detail::singular_eps) {
        SpacePoint z2;
        z2.c[0] = pi;
        return z2;
      }
      p.c[1] = wrap(p.c[1], X.angle());
      p.c[2] = p.c[3] = 0.0;
      return p;
  }
  return p;
}

inline SpacePoint make_point(const ModelSpace& X, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  SpacePoint p;
  p.c = Eigen::Vector4d(a, b, c, d);
  return canonical(X, p);
}

inline SpacePoint cone_apex() { return SpacePoint{}; }
/// Spindle pole z1 (s = 0) or z2 (s = pi).
inline SpacePoint spindle_pole(int which) {
  SpacePoint p;
  p.c[0] = which == 1 ? 0.0 : pi;
  return p;
}

inline bool is_singular(const ModelSpace& X, const SpacePoint& p) {
  if (X.kind() == SpaceKind::cone) return p.c[0] == 0.0 && !X.full_angle();
  if (X.kind() == SpaceKind::spindle) return (p.c[0] == 0.0 || p.c[0] == pi) && !X.full_angle();
  return false;
}

/// True at the cone apex or the spindle poles, where the angular coordinate is degenerate.
inline bool is_chart_pole(const ModelSpace& X, const SpacePoint& p) {
  if (X.kind() == SpaceKind::cone) return p.c[0] == 0.0;
  if (X.kind() == SpaceKind::spindle) return p.c[0] == 0.0 || p.c[0] == pi;
  return false;
}

inline std::string to_string(const ModelSpace& X, const SpacePoint& p) {
  switch (X.kind()) {
    case SpaceKind::sphere:
    case SpaceKind::euclidean: {
      const int n = X.kind() == SpaceKind::sphere ? X.dimension() + 1 : X.dimension();
      std::string out = "(";
      for (int i = 0; i < n; ++i) out += fmt::format("{}{:.17g}", i ? "," : "", p.c[i] + 0.0);  // no "-0"
      return out + ")";
    }
    case SpaceKind::cone: return fmt::format("(r={:.17g},phi={:.17g})", p.c[0] + 0.0, p.c[1] + 0.0);
    case SpaceKind::spindle: return fmt::format("(s={:.17g},phi={:.17g})", p.c[0] + 0.0, p.c[1] + 0.0);
  }
  return "()";
}

/// Number of chart coordinates written for a point.
inline int coordinate_count(const ModelSpace& X) {
  switch (X.kind()) {
    case SpaceKind::sphere: return X.dimension() + 1;
    case SpaceKind::euclidean: return X.dimension();
    default: return 2;
  }
}

// ----- distance -------------------------------------------------------------

namespace detail {

/// Signed offset from a to b on a circle of length l, in (-l/2, l/2].
///
/// Both inputs are canonical angles in [0, l); the offset across the seam is
/// formed as (b - l) - a or b - (a - l), where the inner difference is exact.
inline double circle_offset(double a, double b, double l) {
  a = wrap(a, l);
  b = wrap(b, l);
  const double d = b - a;
  if (d > l / 2.0) return (b - l) - a;
  if (d <= -l / 2.0) return b - (a - l);
  return d;
}

/// Separation of two angular coordinates on a circle of length l, in [0, l/2].
inline double circle_separation(double a, double b, double l) { return std::abs(circle_offset(a, b, l)); }

/// Spherical distance with colatitudes s1, s2 and longitude gap delta, haversine form.
inline double suspension_distance(double s1, double s2, double delta) {
  delta = std::min(delta, pi);
  const double a = std::sin((s1 - s2) / 2.0);
  const double b = std::cos((s1 + s2) / 2.0);
  const double sh = std::sin(delta / 2.0);
  const double prod = std::sin(s1) * std::sin(s2);
  const double hav = a * a + prod * sh * sh;
  const double co = b * b + prod * (1.0 - sh * sh);
  return 2.0 * std::atan2(std::sqrt(std::max(hav, 0.0)), std::sqrt(std::max(co, 0.0)));
}

inline double chord_angle(const Eigen::Vector4d& u, const Eigen::Vector4d& v) {
  return 2.0 * std::atan2((u - v).norm(), (u + v).norm());
}

}  // namespace detail

inline double distance(const ModelSpace& X, const SpacePoint& p, const SpacePoint& q) {
  switch (X.kind()) {
    case SpaceKind::sphere: return X.radius() * detail::chord_angle(p.c, q.c);
    case SpaceKind::euclidean: return (p.c - q.c).norm();
    case SpaceKind::cone: {
      const double r1 = p.c[0];
      const double r2 = q.c[0];
      const double delta = std::min(detail::circle_separation(p.c[1], q.c[1], X.angle()), pi);
      const double sh = std::sin(delta / 2.0);
      return std::sqrt((r1 - r2) * (r1 - r2) + 4.0 * r1 * r2 * sh * sh);
    }
    case SpaceKind::spindle:
      return detail::suspension_distance(p.c[0], q.c[0], detail::circle_separation(p.c[1], q.c[1], X.angle()));
  }
  return 0.0;
}

inline bool same_point(const ModelSpace& X, const SpacePoint& p, const SpacePoint& q, double tol = 1e-12) {
  return distance(X, p, q) <= tol;
}

/// Largest distance between two points (infinite for noncompact kinds).
inline double diameter(const ModelSpace& X) {
  if (X.kind() == SpaceKind::sphere) return pi * X.radius();
  if (X.kind() == SpaceKind::spindle) return pi;
  return std::numeric_limits<double>::infinity();
}

// ----- directions -----------------------------------------------------------

inline DirectionSpace direction_space_at(const ModelSpace& X, const SpacePoint& p) {
  switch (X.kind()) {
    case SpaceKind::sphere:
    case SpaceKind::euclidean:
      if (X.dimension() == 1) return DirectionSpace::pair();
      if (X.dimension() == 2) return DirectionSpace::circle(two_pi);
      return DirectionSpace::sphere();
    case SpaceKind::cone:
    case SpaceKind::spindle:
      return is_chart_pole(X, p) ? DirectionSpace::circle(X.angle()) : DirectionSpace::circle(two_pi);
  }
  return DirectionSpace::circle(two_pi);
}

namespace detail {

/// Orthonormal basis of the tangent space at a unit vector p of S^n in R^{n+1}.
inline std::vector<Eigen::Vector4d> sphere_frame(int n, const Eigen::Vector4d& p) {
  std::vector<Eigen::Vector4d> frame;
  if (n == 1) {
    frame.emplace_back(-p[1], p[0], 0.0, 0.0);
    return frame;
  }
  Eigen::Index skip = 0;
  p.head(n + 1).cwiseAbs().maxCoeff(&skip);
  for (int i = 0; i <= n; ++i) {
    if (i == skip) continue;
    Eigen::Vector4d e = Eigen::Vector4d::Unit(i);
    e -= e.dot(p) * p;
    for (const auto& f : frame) e -= e.dot(f) * f;
    frame.push_back(e.normalized());
  }
  return frame;
}

/// Ambient tangent vector for a direction at a sphere/euclidean point.
inline Eigen::Vector4d ambient_tangent(const ModelSpace& X, const SpacePoint& p, const Direction& d) {
  const int n = X.dimension();
  if (X.kind() == SpaceKind::euclidean) {
    if (n == 1) return Eigen::Vector4d(d.sign(), 0, 0, 0);
    if (n == 2) return Eigen::Vector4d(std::cos(d.angle()), std::sin(d.angle()), 0, 0);
    const Eigen::Vector3d u = d.unit().normalized();
    return Eigen::Vector4d(u[0], u[1], u[2], 0);
  }
  const auto frame = sphere_frame(n, p.c);
  if (n == 1) return d.sign() * frame[0];
  if (n == 2) return std::cos(d.angle()) * frame[0] + std::sin(d.angle()) * frame[1];
  const Eigen::Vector3d u = d.unit().normalized();
  return u[0] * frame[0] + u[1] * frame[1] + u[2] * frame[2];
}

/// Direction of an ambient tangent vector (need not be unit) at a sphere/euclidean point.
inline Direction direction_of_tangent(const ModelSpace& X, const SpacePoint& p, const Eigen::Vector4d& v) {
  const int n = X.dimension();
  if (X.kind() == SpaceKind::euclidean) {
    if (n == 1) return Direction::in_pair(v[0] >= 0.0 ? 1 : -1);
    if (n == 2) return Direction::on_circle(wrap(std::atan2(v[1], v[0]), two_pi));
    return Direction::on_sphere(v.head<3>());
  }
  const auto frame = sphere_frame(n, p.c);
  if (n == 1) return Direction::in_pair(v.dot(frame[0]) >= 0.0 ? 1 : -1);
  if (n == 2) return Direction::on_circle(wrap(std::atan2(v.dot(frame[1]), v.dot(frame[0])), two_pi));
  return Direction::on_sphere(Eigen::Vector3d(v.dot(frame[0]), v.dot(frame[1]), v.dot(frame[2])));
}

inline Eigen::Vector3d spindle_embed(double s, double lon) {
  return {std::sin(s) * std::cos(lon), std::sin(s) * std::sin(lon), std::cos(s)};
}

/// Colatitude of a unit vector, accurate near the poles.
inline double colatitude(const Eigen::Vector3d& x) { return std::atan2(x.head<2>().norm(), x[2]); }

/// Unit tangent at a spindle point (s, 0) unrolled on S^2 for heading psi.
inline Eigen::Vector3d spindle_heading(double s, double psi) {
  const Eigen::Vector3d es(std::cos(s), 0.0, -std::sin(s));
  const Eigen::Vector3d ephi(0.0, 1.0, 0.0);
  return std::cos(psi) * es + std::sin(psi) * ephi;
}

/// Heading at a non-apex cone point (psi = 0 radially outward) toward a planar offset.
inline Direction cone_direction(double r, double delta, double r2) {
  const double sh = std::sin(delta / 2.0);
  const double vx = (r2 - r) - 2.0 * r2 * sh * sh;
  const double vy = r2 * std::sin(delta);
  return Direction::on_circle(wrap(std::atan2(vy, vx), two_pi));
}

inline Direction spindle_direction(double s1, double s2, double delta) {
  const Eigen::Vector3d P = spindle_embed(s1, 0.0);
  const Eigen::Vector3d Q = spindle_embed(s2, delta);
  Eigen::Vector3d v = Q - P;
  v -= v.dot(P) * P;
  const Eigen::Vector3d es(std::cos(s1), 0.0, -std::sin(s1));
  return Direction::on_circle(wrap(std::atan2(v[1], v.dot(es)), two_pi));
}

}  // namespace detail

/// Minimal geodesics between two distinct points, described by their length
/// and the set of initial directions at the start point.
struct MinimalGeodesics {
  double length = 0.0;
  /// A whole direction space of geodesics (antipodal points, pole to pole).
  bool continuum = false;
  std::vector<Direction> initial;

  DirectionSet directions() const { return continuum ? DirectionSet::full() : DirectionSet::finite(initial); }
  std::size_t count() const { return continuum ? 0 : initial.size(); }
};

/// Angular tolerance used to recognise ties between two minimal geodesics.
inline constexpr double geodesic_tie_tolerance = 1e-9;

inline MinimalGeodesics minimal_geodesics(const ModelSpace& X, const SpacePoint& p, const SpacePoint& q) {
  MinimalGeodesics g;
  g.length = distance(X, p, q);
  if (!(g.length > 0.0)) throw GeometryError("minimal_geodesics: points coincide");
  switch (X.kind()) {
    case SpaceKind::euclidean: {
      g.initial.push_back(detail::direction_of_tangent(X, p, q.c - p.c));
      return g;
    }
    case SpaceKind::sphere: {
      if (g.length >= pi * X.radius() * (1.0 - 1e-12)) {
        g.continuum = true;
        return g;
      }
      Eigen::Vector4d v = q.c - p.c;
      v -= v.dot(p.c) * p.c;
      g.initial.push_back(detail::direction_of_tangent(X, p, v));
      return g;
    }
    case SpaceKind::cone: {
      const double l = X.angle();
      if (is_chart_pole(X, p)) {
        g.initial.push_back(Direction::on_circle(q.c[1]));
        return g;
      }
      if (is_chart_pole(X, q)) {
        g.initial.push_back(Direction::on_circle(pi));
        return g;
      }
      const double delta = detail::circle_offset(p.c[1], q.c[1], l);
      g.initial.push_back(detail::cone_direction(p.c[0], delta, q.c[0]));
      if (!X.full_angle() && std::abs(std::abs(delta) - l / 2.0) <= geodesic_tie_tolerance) {
        g.initial.push_back(detail::cone_direction(p.c[0], -delta, q.c[0]));
      }
      return g;
    }
    case SpaceKind::spindle: {
      const double l = X.angle();
      const bool p_pole = is_chart_pole(X, p);
      const bool q_pole = is_chart_pole(X, q);
      if (p_pole && q_pole) {
        // distinct poles
        g.continuum = true;
        return g;
      }
      if (p_pole) {
        g.initial.push_back(Direction::on_circle(q.c[1]));
        return g;
      }
      if (q_pole) {
        g.initial.push_back(Direction::on_circle(q.c[0] == 0.0 ? pi : 0.0));
        return g;
      }
      if (g.length >= pi * (1.0 - 1e-12)) {
        g.continuum = true;
        return g;
      }
      const double delta = detail::circle_offset(p.c[1], q.c[1], l);
      g.initial.push_back(detail::spindle_direction(p.c[0], q.c[0], delta));
      if (!X.full_angle() && std::abs(std::abs(delta) - l / 2.0) <= geodesic_tie_tolerance) {
        g.initial.push_back(detail::spindle_direction(p.c[0], q.c[0], -delta));
      }
      return g;
    }
  }
  return g;
}

/// The set of directions at p of minimal geodesics to q.
inline DirectionSet directions_to(const ModelSpace& X, const SpacePoint& p, const SpacePoint& q) {
  return minimal_geodesics(X, p, q).directions();
}

// ----- exponential steps ----------------------------------------------------

/// Length along the geodesic from p in direction d up to which it stays minimal.
inline double cut_distance(const ModelSpace& X, const SpacePoint& p, const Direction& d) {
  switch (X.kind()) {
    case SpaceKind::sphere: return pi * X.radius();
    case SpaceKind::euclidean: return std::numeric_limits<double>::infinity();
    case SpaceKind::cone: {
      if (is_chart_pole(X, p) || X.full_angle()) return std::numeric_limits<double>::infinity();
      const double a = std::abs(detail::circle_offset(0.0, d.angle(), two_pi));
      const double half = X.angle() / 2.0;
      if (a <= half) return std::numeric_limits<double>::infinity();
      return p.c[0] * std::sin(half) / std::sin(a - half);
    }
    case SpaceKind::spindle: {
      if (is_chart_pole(X, p) || X.full_angle()) return pi;
      const double s = p.c[0];
      const double psi = detail::circle_offset(0.0, d.angle(), two_pi);
      const double half = X.angle() / 2.0;
      const Eigen::Vector3d P = detail::spindle_embed(s, 0.0);
      const Eigen::Vector3d T = detail::spindle_heading(s, psi);
      const auto lon = [&](double t) {
        const Eigen::Vector3d x = std::cos(t) * P + std::sin(t) * T;
        return std::abs(std::atan2(x[1], x[0]));
      };
      if (std::sin(psi) == 0.0) return std::abs(psi) < half_pi ? pi - s : s;
      double lo = 0.0;
      double hi = pi;
      if (lon(hi * (1.0 - 1e-15)) <= half) return pi;
      for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = (lo + hi) / 2.0;
        (lon(mid) <= half ? lo : hi) = mid;
      }
      return lo;
    }
  }
  return 0.0;
}

/// Point at arc length h along the geodesic leaving p in direction d.
///
/// Throws StepTooLarge when the geodesic stops being minimal before length h.
inline SpacePoint exp_step(const ModelSpace& X, const SpacePoint& p, const Direction& d, double h) {
  if (!(h >= 0.0)) throw GeometryError("exp_step needs h >= 0");
  if (h == 0.0) return p;
  const double slack = 1e-12 * std::max(1.0, h);
  switch (X.kind()) {
    case SpaceKind::euclidean: {
      SpacePoint out;
      out.c = p.c + h * detail::ambient_tangent(X, p, d);
      return canonical(X, out);
    }
    case SpaceKind::sphere: {
      if (h > pi * X.radius() + slack) throw StepTooLarge("exp_step beyond half a great circle");
      const double t = h / X.radius();
      SpacePoint out;
      out.c = std::cos(t) * p.c + std::sin(t) * detail::ambient_tangent(X, p, d);
      return canonical(X, out);
    }
    case SpaceKind::cone: {
      if (is_chart_pole(X, p)) return make_point(X, h, d.angle());
      const double psi = d.angle();
      const double x = p.c[0] + h * std::cos(psi);
      const double y = h * std::sin(psi);
      const double omega = std::atan2(y, x);
      if (!X.full_angle() && std::abs(omega) > X.angle() / 2.0 + 1e-12) {
        const bool at_apex = std::hypot(x, y) <= slack;
        if (!at_apex) throw StepTooLarge("exp_step past the cone cut locus");
        return cone_apex();
      }
      return make_point(X, std::hypot(x, y), p.c[1] + omega);
    }
    case SpaceKind::spindle: {
      if (h > pi + slack) throw StepTooLarge("exp_step beyond the spindle diameter");
      if (is_chart_pole(X, p)) {
        const double s = p.c[0] == 0.0 ? std::min(h, pi) : std::max(pi - h, 0.0);
        return make_point(X, s, d.angle());
      }
      const double s = p.c[0];
      const Eigen::Vector3d P = detail::spindle_embed(s, 0.0);
      const Eigen::Vector3d T = detail::spindle_heading(s, d.angle());
      const Eigen::Vector3d x = std::cos(h) * P + std::sin(h) * T;
      const double colat = detail::colatitude(x);
      if (colat <= 1e-13 || colat >= pi - 1e-13) {
        // Reached a pole; only allowed at the end of a minimal meridian segment.
        const double reach = colat <= 1e-13 ? s : pi - s;
        if (!X.full_angle() && h > reach + 1e-9) throw StepTooLarge("exp_step through a spindle pole");
        return spindle_pole(colat <= 1e-13 ? 1 : 2);
      }
      const double lon = std::atan2(x[1], x[0]);
      if (!X.full_angle()) {
        const bool through_pole = std::abs(lon) > half_pi && std::abs(std::sin(d.angle())) < 1e-12;
        if (std::abs(lon) > X.angle() / 2.0 + 1e-12 || through_pole) {
          throw StepTooLarge("exp_step past the spindle cut locus");
        }
      }
      return make_point(X, colat, p.c[1] + lon);
    }
  }
  return p;
}

/// Unit-speed minimal geodesic with a chosen initial direction.
struct GeodesicSegment {
  SpacePoint start;
  SpacePoint end;
  double length = 0.0;
  Direction initial;

  SpacePoint at(const ModelSpace& X, double t) const {
    if (t <= 0.0) return start;
    if (t >= length) return end;
    return exp_step(X, start, initial, t);
  }
};

/// One representative segment per initial direction; a continuum is sampled at `count` directions.
inline std::vector<GeodesicSegment> geodesic_segments(const ModelSpace& X, const SpacePoint& p, const SpacePoint& q,
                                                      std::size_t count = 16) {
  const auto g = minimal_geodesics(X, p, q);
  std::vector<Direction> dirs = g.initial;
  if (g.continuum) dirs = direction_grid(direction_space_at(X, p), count);
  std::vector<GeodesicSegment> out;
  for (const auto& d : dirs) out.push_back({p, q, g.length, d});
  return out;
}

// ----- sampling -------------------------------------------------------------

/// Radius of the region used to sample noncompact spaces.
inline constexpr double sampling_extent = 3.0;

/// Point drawn uniformly per chart (area measure on compact kinds, a box or disc otherwise).
inline SpacePoint sample_point(const ModelSpace& X, Rng& rng) {
  switch (X.kind()) {
    case SpaceKind::sphere: {
      SpacePoint p;
      for (int i = 0; i <= X.dimension(); ++i) p.c[i] = rng.normal();
      if (p.c.norm() < 1e-12) p.c[0] = 1.0;
      return canonical(X, p);
    }
    case SpaceKind::euclidean: {
      SpacePoint p;
      for (int i = 0; i < X.dimension(); ++i) p.c[i] = rng.uniform(-sampling_extent, sampling_extent);
      return p;
    }
    case SpaceKind::cone:
      return make_point(X, sampling_extent * std::sqrt(rng.uniform()), rng.uniform(0.0, X.angle()));
    case SpaceKind::spindle:
      return make_point(X, std::acos(rng.uniform(-1.0, 1.0)), rng.uniform(0.0, X.angle()));
  }
  return {};
}

/// Points of the space whose direction space differs from the generic one.
inline std::vector<SpacePoint> singular_points(const ModelSpace& X) {
  if (X.kind() == SpaceKind::cone && !X.full_angle()) return {cone_apex()};
  if (X.kind() == SpaceKind::spindle && !X.full_angle()) return {spindle_pole(1), spindle_pole(2)};
  return {};
}

/// Point at distance uniform in [0, radius] from `center` along a random direction.
inline SpacePoint sample_near(const ModelSpace& X, const SpacePoint& center, double radius, Rng& rng) {
  const DirectionSpace sigma = direction_space_at(X, center);
  const Direction d = random_direction(sigma, rng);
  const double h = std::min(rng.uniform(0.0, radius), cut_distance(X, center, d));
  return exp_step(X, center, d, h);
}

}  // namespace qclab

#endif
