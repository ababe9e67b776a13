#ifndef QCLAB_DIRECTION_HPP
#define QCLAB_DIRECTION_HPP

// Spaces of directions and closed subsets of them.
//
// A space of directions here is one of: S^0 (two points at distance pi), a
// circle of length l <= 2*pi, or the round unit 2-sphere. Each carries its
// intrinsic metric, so its diameter never exceeds pi.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "qclab/config.hpp"
#include "qclab/random.hpp"

namespace qclab {

enum class DirectionSpaceKind { pair, circle, sphere };

class DirectionSpace {
 public:
  static DirectionSpace pair() { return DirectionSpace(DirectionSpaceKind::pair, pi); }
  static DirectionSpace circle(double length) {
    if (!(length > 0.0 && length <= two_pi + 1e-12)) {
      throw GeometryError("circle of directions must have length in (0, 2*pi]");
    }
    return DirectionSpace(DirectionSpaceKind::circle, std::min(length, two_pi));
  }
  static DirectionSpace sphere() { return DirectionSpace(DirectionSpaceKind::sphere, 4.0 * pi); }

  DirectionSpaceKind kind() const { return kind_; }
  /// Circle length (pair: pi, sphere: area-like placeholder 4*pi).
  double length() const { return length_; }

  double diameter() const {
    switch (kind_) {
      case DirectionSpaceKind::pair: return pi;
      case DirectionSpaceKind::circle: return length_ / 2.0;
      case DirectionSpaceKind::sphere: return pi;
    }
    return pi;
  }

  bool operator==(const DirectionSpace& o) const {
    return kind_ == o.kind_ && (kind_ != DirectionSpaceKind::circle || std::abs(length_ - o.length_) < 1e-12);
  }

 private:
  DirectionSpace(DirectionSpaceKind kind, double length) : kind_(kind), length_(length) {}
  DirectionSpaceKind kind_;
  double length_;
};

/// A point of a DirectionSpace. Interpretation depends on the host space:
/// pair: sign in v[0] (+1 / -1); circle: angular coordinate in v[0]; sphere: unit vector.
class Direction {
 public:
  Direction() = default;

  static Direction on_circle(double angle) { return Direction(Eigen::Vector3d(angle, 0.0, 0.0)); }
  static Direction on_sphere(const Eigen::Vector3d& u) { return Direction(u.normalized()); }
  static Direction in_pair(int sign) { return Direction(Eigen::Vector3d(sign >= 0 ? 1.0 : -1.0, 0.0, 0.0)); }

  double angle() const { return v_[0]; }
  int sign() const { return v_[0] >= 0.0 ? 1 : -1; }
  const Eigen::Vector3d& unit() const { return v_; }
  const Eigen::Vector3d& raw() const { return v_; }

 private:
  explicit Direction(const Eigen::Vector3d& v) : v_(v) {}
  Eigen::Vector3d v_ = Eigen::Vector3d::Zero();
};

inline double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

/// Canonical form of a direction (circle angles reduced to [0, l)).
inline Direction canonical(const DirectionSpace& sigma, const Direction& d) {
  switch (sigma.kind()) {
    case DirectionSpaceKind::pair: return Direction::in_pair(d.sign());
    case DirectionSpaceKind::circle: return Direction::on_circle(wrap(d.angle(), sigma.length()));
    case DirectionSpaceKind::sphere: return Direction::on_sphere(d.unit());
  }
  return d;
}

/// Intrinsic distance between two directions.
inline double sigma_distance(const DirectionSpace& sigma, const Direction& a, const Direction& b) {
  switch (sigma.kind()) {
    case DirectionSpaceKind::pair: return a.sign() == b.sign() ? 0.0 : pi;
    case DirectionSpaceKind::circle: {
      const double d = wrap(a.angle() - b.angle(), sigma.length());
      return std::min(d, sigma.length() - d);
    }
    case DirectionSpaceKind::sphere: {
      const Eigen::Vector3d& u = a.unit();
      const Eigen::Vector3d& v = b.unit();
      return 2.0 * std::atan2((u - v).norm(), (u + v).norm());
    }
  }
  return 0.0;
}

/// Closed subset of a direction space: a finite list or an analytic continuum.
class DirectionSet {
 public:
  enum class Kind { finite, full, arc, great_circle };

  DirectionSet() = default;

  static DirectionSet empty() { return DirectionSet(); }
  static DirectionSet finite(std::vector<Direction> points) {
    DirectionSet s;
    s.points_ = std::move(points);
    return s;
  }
  static DirectionSet single(const Direction& d) { return finite({d}); }
  static DirectionSet full() {
    DirectionSet s;
    s.kind_ = Kind::full;
    return s;
  }
  /// Closed arc of a circle starting at `start` and running `length` in the positive sense.
  static DirectionSet arc(double start, double length) {
    DirectionSet s;
    s.kind_ = Kind::arc;
    s.arc_start_ = start;
    s.arc_length_ = length;
    return s;
  }
  /// Great circle of the 2-sphere orthogonal to `normal`.
  static DirectionSet great_circle(const Eigen::Vector3d& normal) {
    DirectionSet s;
    s.kind_ = Kind::great_circle;
    s.normal_ = normal.normalized();
    return s;
  }

  Kind kind() const { return kind_; }
  bool is_empty() const { return kind_ == Kind::finite && points_.empty(); }
  bool is_continuum() const { return kind_ != Kind::finite; }
  const std::vector<Direction>& points() const { return points_; }
  double arc_start() const { return arc_start_; }
  double arc_length() const { return arc_length_; }
  const Eigen::Vector3d& normal() const { return normal_; }

 private:
  Kind kind_ = Kind::finite;
  std::vector<Direction> points_;
  double arc_start_ = 0.0;
  double arc_length_ = 0.0;
  Eigen::Vector3d normal_ = Eigen::Vector3d::UnitZ();
};

/// Quasi-uniform (Fibonacci) lattice on the unit 2-sphere.
inline std::vector<Eigen::Vector3d> fibonacci_lattice(std::size_t n) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(n);
  const double golden = pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = golden * static_cast<double>(i);
    out.emplace_back(r * std::cos(t), r * std::sin(t), z);
  }
  return out;
}

/// Uniform grid over the whole direction space (about n points for circles and spheres).
inline std::vector<Direction> direction_grid(const DirectionSpace& sigma, std::size_t n) {
  std::vector<Direction> out;
  switch (sigma.kind()) {
    case DirectionSpaceKind::pair:
      out = {Direction::in_pair(1), Direction::in_pair(-1)};
      break;
    case DirectionSpaceKind::circle:
      out.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        out.push_back(Direction::on_circle(sigma.length() * static_cast<double>(i) / static_cast<double>(n)));
      }
      break;
    case DirectionSpaceKind::sphere:
      for (const auto& u : fibonacci_lattice(n)) out.push_back(Direction::on_sphere(u));
      break;
  }
  return out;
}

inline Direction random_direction(const DirectionSpace& sigma, Rng& rng) {
  switch (sigma.kind()) {
    case DirectionSpaceKind::pair: return Direction::in_pair(rng.bernoulli(0.5) ? 1 : -1);
    case DirectionSpaceKind::circle: return Direction::on_circle(rng.uniform(0.0, sigma.length()));
    case DirectionSpaceKind::sphere: {
      Eigen::Vector3d g(rng.normal(), rng.normal(), rng.normal());
      while (g.norm() < 1e-12) g = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
      return Direction::on_sphere(g);
    }
  }
  return {};
}

/// Orthonormal pair spanning the plane orthogonal to n.
inline std::pair<Eigen::Vector3d, Eigen::Vector3d> orthonormal_complement(const Eigen::Vector3d& n) {
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
  Eigen::Vector3d a = (e - e.dot(n) * n).normalized();
  Eigen::Vector3d b = n.cross(a).normalized();
  return {a, b};
}

struct NearestInSet {
  double distance = std::numeric_limits<double>::infinity();
  Direction element;
};

/// Exact distance from a direction to a set, with a realizing element.
inline NearestInSet nearest_in_set(const DirectionSpace& sigma, const Direction& d, const DirectionSet& set) {
  NearestInSet best;
  switch (set.kind()) {
    case DirectionSet::Kind::finite:
      for (const auto& e : set.points()) {
        const double dist = sigma_distance(sigma, d, e);
        if (dist < best.distance) best = {dist, e};
      }
      return best;
    case DirectionSet::Kind::full:
      return {0.0, d};
    case DirectionSet::Kind::arc: {
      const double l = sigma.length();
      const double offset = wrap(d.angle() - set.arc_start(), l);
      if (offset <= set.arc_length()) return {0.0, d};
      const Direction a = Direction::on_circle(set.arc_start());
      const Direction b = Direction::on_circle(wrap(set.arc_start() + set.arc_length(), l));
      const double da = sigma_distance(sigma, d, a);
      const double db = sigma_distance(sigma, d, b);
      return da <= db ? NearestInSet{da, a} : NearestInSet{db, b};
    }
    case DirectionSet::Kind::great_circle: {
      const Eigen::Vector3d& n = set.normal();
      Eigen::Vector3d proj = d.unit() - d.unit().dot(n) * n;
      if (proj.norm() < 1e-15) proj = orthonormal_complement(n).first;
      const Direction foot = Direction::on_sphere(proj);
      return {sigma_distance(sigma, d, foot), foot};
    }
  }
  return best;
}

inline double distance_to_set(const DirectionSpace& sigma, const Direction& d, const DirectionSet& set) {
  return nearest_in_set(sigma, d, set).distance;
}

inline bool contains(const DirectionSpace& sigma, const DirectionSet& set, const Direction& d, double tol) {
  return !set.is_empty() && distance_to_set(sigma, d, set) <= tol;
}

/// Discretization of a set: its points when finite, a grid of spacing about
/// `resolution` along a continuum.
inline std::vector<Direction> discretize(const DirectionSpace& sigma, const DirectionSet& set, double resolution) {
  switch (set.kind()) {
    case DirectionSet::Kind::finite:
      return set.points();
    case DirectionSet::Kind::full: {
      if (sigma.kind() == DirectionSpaceKind::sphere) {
        const auto n = static_cast<std::size_t>(std::ceil(4.0 * pi / (resolution * resolution)));
        return direction_grid(sigma, std::min<std::size_t>(n, 200000));
      }
      const auto n = static_cast<std::size_t>(std::ceil(sigma.length() / resolution));
      return direction_grid(sigma, std::max<std::size_t>(n, 2));
    }
    case DirectionSet::Kind::arc: {
      const auto n = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(set.arc_length() / resolution)) + 1);
      std::vector<Direction> out;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = set.arc_length() * static_cast<double>(i) / static_cast<double>(n - 1);
        out.push_back(Direction::on_circle(wrap(set.arc_start() + t, sigma.length())));
      }
      return out;
    }
    case DirectionSet::Kind::great_circle: {
      const auto [a, b] = orthonormal_complement(set.normal());
      const auto n = std::max<std::size_t>(8, static_cast<std::size_t>(std::ceil(two_pi / resolution)));
      std::vector<Direction> out;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = two_pi * static_cast<double>(i) / static_cast<double>(n);
        out.push_back(Direction::on_sphere(std::cos(t) * a + std::sin(t) * b));
      }
      return out;
    }
  }
  return {};
}

/// Distance between two nonempty sets: the minimum over pairs.
inline double set_distance(const DirectionSpace& sigma, const DirectionSet& a, const DirectionSet& b) {
  if (a.is_empty() || b.is_empty()) throw GeometryError("set_distance of an empty direction set");
  if (a.kind() == DirectionSet::Kind::full || b.kind() == DirectionSet::Kind::full) return 0.0;
  if (a.kind() == DirectionSet::Kind::finite) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : a.points()) best = std::min(best, distance_to_set(sigma, d, b));
    return best;
  }
  if (b.kind() == DirectionSet::Kind::finite) return set_distance(sigma, b, a);
  if (a.kind() == DirectionSet::Kind::great_circle && b.kind() == DirectionSet::Kind::great_circle) return 0.0;
  if (a.kind() == DirectionSet::Kind::arc && b.kind() == DirectionSet::Kind::arc) {
    const auto ends = [&](const DirectionSet& s) {
      return DirectionSet::finite({Direction::on_circle(s.arc_start()),
                                   Direction::on_circle(wrap(s.arc_start() + s.arc_length(), sigma.length()))});
    };
    return std::min(set_distance(sigma, ends(a), b), set_distance(sigma, ends(b), a));
  }
  throw GeometryError("set_distance: incompatible direction set kinds");
}

/// Hausdorff distance; continua are discretized at `resolution`.
inline double hausdorff(const DirectionSpace& sigma, const DirectionSet& a, const DirectionSet& b,
                        double resolution = 1e-3) {
  if (a.is_empty() && b.is_empty()) return 0.0;
  if (a.is_empty() || b.is_empty()) return std::numeric_limits<double>::infinity();
  double h = 0.0;
  for (const auto& d : discretize(sigma, a, resolution)) h = std::max(h, distance_to_set(sigma, d, b));
  for (const auto& d : discretize(sigma, b, resolution)) h = std::max(h, distance_to_set(sigma, d, a));
  return h;
}

/// Intersection of two sets, with finite elements matched at `tol`.
inline DirectionSet intersect(const DirectionSpace& sigma, const DirectionSet& a, const DirectionSet& b,
                              double tol) {
  if (a.is_empty() || b.is_empty()) return DirectionSet::empty();
  if (a.kind() == DirectionSet::Kind::full) return b;
  if (b.kind() == DirectionSet::Kind::full) return a;
  if (a.kind() == DirectionSet::Kind::finite || b.kind() == DirectionSet::Kind::finite) {
    const DirectionSet& fin = a.kind() == DirectionSet::Kind::finite ? a : b;
    const DirectionSet& other = a.kind() == DirectionSet::Kind::finite ? b : a;
    std::vector<Direction> keep;
    for (const auto& d : fin.points()) {
      if (distance_to_set(sigma, d, other) <= tol) keep.push_back(d);
    }
    return DirectionSet::finite(std::move(keep));
  }
  if (a.kind() == DirectionSet::Kind::great_circle && b.kind() == DirectionSet::Kind::great_circle) {
    const Eigen::Vector3d c = a.normal().cross(b.normal());
    if (c.norm() <= tol) return a;
    return DirectionSet::finite({Direction::on_sphere(c), Direction::on_sphere(-c)});
  }
  if (a.kind() == DirectionSet::Kind::arc && b.kind() == DirectionSet::Kind::arc) {
    // Keep grid points of a lying in b; exact arcs are not needed by any caller.
    std::vector<Direction> keep;
    for (const auto& d : discretize(sigma, a, 1e-3)) {
      if (distance_to_set(sigma, d, b) <= tol) keep.push_back(d);
    }
    return DirectionSet::finite(std::move(keep));
  }
  throw GeometryError("intersect: incompatible direction set kinds");
}

struct FarthestDirection {
  Direction direction;
  double value = 0.0;
  bool unique = false;
};

namespace detail {

inline Eigen::Vector3d rotate_toward(const Eigen::Vector3d& u, const Eigen::Vector3d& tangent, double angle) {
  return (std::cos(angle) * u + std::sin(angle) * tangent).normalized();
}

/// Local maximization of the distance to a finite set on the 2-sphere by
/// compass search in the tangent plane.
inline std::pair<Eigen::Vector3d, double> refine_on_sphere(const DirectionSpace& sigma, const DirectionSet& set,
                                                           Eigen::Vector3d u, double step, double resolution) {
  const auto f = [&](const Eigen::Vector3d& v) { return distance_to_set(sigma, Direction::on_sphere(v), set); };
  double best = f(u);
  while (step > resolution) {
    const auto [a, b] = orthonormal_complement(u);
    bool moved = false;
    for (int i = 0; i < 8; ++i) {
      const double t = two_pi * i / 8.0;
      const Eigen::Vector3d cand = rotate_toward(u, std::cos(t) * a + std::sin(t) * b, step);
      const double val = f(cand);
      if (val > best) {
        best = val;
        u = cand;
        moved = true;
        break;
      }
    }
    if (!moved) step /= 2.0;
  }
  return {u, best};
}

/// Finite sets up to this size get the exact candidate enumeration on the 2-sphere.
inline constexpr std::size_t exact_farthest_limit = 60;

/// Exact maximizer of the distance to a finite set on the 2-sphere. A maximizer
/// is equidistant from its nearest points: one (the antipode), two (the
/// antipode of their midpoint) or at least three (a circumcenter).
inline std::pair<Eigen::Vector3d, double> farthest_on_sphere_exact(const DirectionSpace& sigma,
                                                                    const DirectionSet& set) {
  const auto& pts = set.points();
  const std::size_t n = pts.size();
  Eigen::Vector3d best_u = -pts.front().unit();
  double best = -1.0;
  const auto consider = [&](const Eigen::Vector3d& v) {
    const double norm = v.norm();
    if (!(norm > 1e-14)) return;
    const Eigen::Vector3d u = v / norm;
    const double val = distance_to_set(sigma, Direction::on_sphere(u), set);
    if (val > best + 1e-15) {
      best = val;
      best_u = u;
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d& a = pts[i].unit();
    consider(-a);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Eigen::Vector3d& b = pts[j].unit();
      const Eigen::Vector3d mid = a + b;
      if (mid.norm() > 1e-12) {
        consider(-mid);
      } else {
        consider(orthonormal_complement(a.normalized()).first);
      }
      for (std::size_t l = j + 1; l < n; ++l) {
        const Eigen::Vector3d c = (b - a).cross(pts[l].unit() - a);
        consider(c);
        consider(-c);
      }
    }
  }
  return {best_u, best};
}

}  // namespace detail

/// Direction maximizing the distance to `set`, with the maximal value.
///
/// Circles are solved exactly (midpoint of the largest gap), as are finite sets
/// of moderate size on the 2-sphere; larger spherical sets use a quasi-uniform
/// lattice refined by local search to `resolution`.
inline FarthestDirection farthest_direction(const DirectionSpace& sigma, const DirectionSet& set,
                                            double resolution = 1e-9) {
  if (set.is_empty()) throw GeometryError("farthest_direction of an empty direction set");
  const double unique_tol = 1e-6;
  FarthestDirection out;
  const auto finish = [&](Direction d, double value) {
    out.direction = canonical(sigma, d);
    out.value = value;
    out.unique = value > half_pi + unique_tol;
    return out;
  };

  if (set.kind() == DirectionSet::Kind::full) {
    return finish(direction_grid(sigma, 1).front(), 0.0);
  }
  switch (sigma.kind()) {
    case DirectionSpaceKind::pair: {
      const auto& pts = set.points();
      const bool has_plus = std::any_of(pts.begin(), pts.end(), [](const Direction& d) { return d.sign() > 0; });
      const bool has_minus = std::any_of(pts.begin(), pts.end(), [](const Direction& d) { return d.sign() < 0; });
      if (has_plus && has_minus) return finish(Direction::in_pair(1), 0.0);
      return finish(Direction::in_pair(has_plus ? -1 : 1), pi);
    }
    case DirectionSpaceKind::circle: {
      const double l = sigma.length();
      if (set.kind() == DirectionSet::Kind::arc) {
        const double gap = l - set.arc_length();
        return finish(Direction::on_circle(set.arc_start() + set.arc_length() + gap / 2.0), gap / 2.0);
      }
      std::vector<double> a;
      for (const auto& d : set.points()) a.push_back(wrap(d.angle(), l));
      std::sort(a.begin(), a.end());
      double best_gap = -1.0;
      double best_mid = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double next = (i + 1 < a.size()) ? a[i + 1] : a.front() + l;
        const double gap = next - a[i];
        if (gap > best_gap + 1e-15) {
          best_gap = gap;
          best_mid = a[i] + gap / 2.0;
        }
      }
      return finish(Direction::on_circle(best_mid), std::min(best_gap / 2.0, sigma.diameter()));
    }
    case DirectionSpaceKind::sphere: {
      if (set.kind() == DirectionSet::Kind::great_circle) {
        return finish(Direction::on_sphere(set.normal()), half_pi);
      }
      if (set.kind() != DirectionSet::Kind::finite) throw GeometryError("arc set on a sphere of directions");
      const auto& pts = set.points();
      if (pts.size() == 1) return finish(Direction::on_sphere(-pts.front().unit()), pi);
      if (pts.size() <= detail::exact_farthest_limit) {
        const auto [u, val] = detail::farthest_on_sphere_exact(sigma, set);
        return finish(Direction::on_sphere(u), val);
      }
      const auto lattice = fibonacci_lattice(20000);
      std::vector<std::pair<double, Eigen::Vector3d>> scored;
      scored.reserve(lattice.size());
      for (const auto& u : lattice) scored.emplace_back(distance_to_set(sigma, Direction::on_sphere(u), set), u);
      std::partial_sort(scored.begin(), scored.begin() + 8, scored.end(),
                        [](const auto& x, const auto& y) { return x.first > y.first; });
      Eigen::Vector3d best_u = scored.front().second;
      double best = scored.front().first;
      for (int i = 0; i < 8; ++i) {
        const auto [u, val] = detail::refine_on_sphere(sigma, set, scored[i].second, 0.03, resolution);
        if (val > best) {
          best = val;
          best_u = u;
        }
      }
      return finish(Direction::on_sphere(best_u), best);
    }
  }
  return out;
}

}  // namespace qclab

#endif
