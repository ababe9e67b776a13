#ifndef QCLAB_SUBSET_HPP
#define QCLAB_SUBSET_HPP

// Closed subsets of a model space, described by oracles: nearest points,
// samplers and (optionally) analytic tangent cones.
//
// Every built-in subset is generated from a Shape, which also lets two
// subsets be intersected analytically. A subset with no tangent oracle has its
// tangent cones estimated from samples.

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qclab/isometry.hpp"
#include "qclab/model_space.hpp"
#include "qclab/random.hpp"

namespace qclab {

namespace shape {

/// Finite point set (possibly empty).
struct Points {
  std::vector<SpacePoint> points;
};
/// Whole space.
struct Whole {};
/// Sphere: the unit sphere of a linear subspace, given by an orthonormal basis.
struct GreatSubsphere {
  std::vector<Eigen::Vector4d> basis;
};
/// 2-sphere: points at angle rho from the unit vector axis.
struct SmallCircle {
  Eigen::Vector4d axis;
  double rho = 0.0;
};
/// Euclidean: origin + span(basis), basis orthonormal.
struct Affine {
  Eigen::Vector4d origin;
  std::vector<Eigen::Vector4d> basis;
};
/// Euclidean: union of lines through the origin with unit directions.
struct Lines {
  std::vector<Eigen::Vector4d> directions;
};
/// Cone: the apex together with the rays at the given angles.
struct Rays {
  std::vector<double> angles;
};
/// Spindle: both poles together with the meridians at the given angles.
struct Meridians {
  std::vector<double> angles;
};
/// Spindle: the circle s = pi/2.
struct Equator {};
/// Spindle with L = 2*pi (a round sphere): great circle with a unit normal.
struct TiltedCircle {
  Eigen::Vector3d normal;
};

}  // namespace shape

using Shape = std::variant<shape::Points, shape::Whole, shape::GreatSubsphere, shape::SmallCircle, shape::Affine,
                           shape::Lines, shape::Rays, shape::Meridians, shape::Equator, shape::TiltedCircle>;

struct SubsetSpec {
  std::string description;
  bool empty = false;
  /// All nearest points of the subset to a query (ties at relative 1e-9);
  /// when a whole continuum is nearest, a discretization of it.
  std::function<std::vector<SpacePoint>(const SpacePoint&)> nearest;
  /// Points of the subset drawn across it (bounded part for noncompact subsets).
  std::function<std::vector<SpacePoint>(std::size_t count, std::uint64_t seed)> sample;
  /// Points of the subset within `radius` of `center`.
  std::function<std::vector<SpacePoint>(const SpacePoint& center, double radius, std::size_t count,
                                        std::uint64_t seed)>
      sample_near;
  /// Analytic tangent cone at a member point; empty function means "estimate it".
  std::function<DirectionSet(const SpacePoint&)> tangent;
  /// Distinguished points (apex, poles, crossings) that samplers visit often.
  std::vector<SpacePoint> landmarks;
  std::optional<Shape> shape;
  /// Known finite point list (empty subsets included).
  std::optional<std::vector<SpacePoint>> finite_points;

  bool has_tangent() const { return static_cast<bool>(tangent); }
};

inline double distance_to_subset(const ModelSpace& X, const SubsetSpec& F, const SpacePoint& q) {
  if (F.empty) return std::numeric_limits<double>::infinity();
  const auto near = F.nearest(q);
  if (near.empty()) return std::numeric_limits<double>::infinity();
  return distance(X, q, near.front());
}

inline bool subset_contains(const ModelSpace& X, const SubsetSpec& F, const SpacePoint& q, double tol = 1e-9) {
  return distance_to_subset(X, F, q) <= tol;
}

/// The nearest point of F closest to q (first of the ties).
inline SpacePoint project_to_subset(const ModelSpace& /*X*/, const SubsetSpec& F, const SpacePoint& q) {
  if (F.empty) throw GeometryError("projection onto the empty subset");
  return F.nearest(q).front();
}

namespace detail {

inline constexpr double nearest_tie = 1e-9;

/// Keep the minimizers among candidates, dropping duplicates.
inline std::vector<SpacePoint> keep_minimizers(const ModelSpace& X, const SpacePoint& q,
                                               const std::vector<SpacePoint>& cand) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> d(cand.size());
  for (std::size_t i = 0; i < cand.size(); ++i) {
    d[i] = distance(X, q, cand[i]);
    best = std::min(best, d[i]);
  }
  std::vector<SpacePoint> out;
  const double cut = best + nearest_tie * std::max(1.0, best);
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (d[i] > cut) continue;
    bool dup = false;
    for (const auto& o : out) dup = dup || same_point(X, o, cand[i], 1e-13);
    if (!dup) out.push_back(cand[i]);
  }
  // the exact minimizer first
  std::stable_sort(out.begin(), out.end(),
                   [&](const SpacePoint& a, const SpacePoint& b) { return distance(X, q, a) < distance(X, q, b); });
  return out;
}

inline std::vector<Eigen::Vector4d> orthonormalize(const std::vector<Eigen::Vector4d>& in, double tol = 1e-12) {
  std::vector<Eigen::Vector4d> out;
  for (Eigen::Vector4d v : in) {
    for (const auto& o : out) v -= v.dot(o) * o;
    const double n = v.norm();
    if (n > tol) out.push_back(v / n);
  }
  return out;
}

/// Orthonormal basis of the common part of two subspaces of R^m.
inline std::vector<Eigen::Vector4d> common_subspace(const std::vector<Eigen::Vector4d>& a,
                                                    const std::vector<Eigen::Vector4d>& b, int m) {
  Eigen::MatrixXd proj_a = Eigen::MatrixXd::Identity(m, m);
  Eigen::MatrixXd proj_b = Eigen::MatrixXd::Identity(m, m);
  for (const auto& v : a) proj_a -= v.head(m) * v.head(m).transpose();
  for (const auto& v : b) proj_b -= v.head(m) * v.head(m).transpose();
  Eigen::MatrixXd stack(2 * m, m);
  stack << proj_a, proj_b;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stack, Eigen::ComputeFullV);
  std::vector<Eigen::Vector4d> out;
  for (int i = 0; i < m; ++i) {
    if (svd.singularValues()[i] <= 1e-9) {
      Eigen::Vector4d v = Eigen::Vector4d::Zero();
      v.head(m) = svd.matrixV().col(i);
      out.push_back(v);
    }
  }
  return orthonormalize(out);
}

inline int ambient_dim(const ModelSpace& X) {
  return X.kind() == SpaceKind::sphere ? X.dimension() + 1 : X.dimension();
}

/// Directions at p spanned by the ambient tangent vectors w (orthonormal, tangent at p).
inline DirectionSet tangent_span(const ModelSpace& X, const SpacePoint& p, const std::vector<Eigen::Vector4d>& w) {
  const int full = X.dimension();
  if (w.empty()) return DirectionSet::empty();
  if (static_cast<int>(w.size()) >= full) return DirectionSet::full();
  if (w.size() == 1) {
    return DirectionSet::finite({direction_of_tangent(X, p, w[0]), direction_of_tangent(X, p, -w[0])});
  }
  // two directions inside a 3-dimensional tangent space: a great circle
  const Eigen::Vector3d a = direction_of_tangent(X, p, w[0]).unit();
  const Eigen::Vector3d b = direction_of_tangent(X, p, w[1]).unit();
  return DirectionSet::great_circle(a.cross(b));
}

inline std::vector<SpacePoint> circle_points(const ModelSpace& X, const Eigen::Vector4d& a, const Eigen::Vector4d& b,
                                             const Eigen::Vector4d& centre, double radius, std::size_t n) {
  std::vector<SpacePoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = two_pi * static_cast<double>(i) / static_cast<double>(n);
    SpacePoint p;
    p.c = centre + radius * (std::cos(t) * a + std::sin(t) * b);
    out.push_back(canonical(X, p));
  }
  return out;
}

/// Two unit vectors completing a unit vector of R^3 (stored in Vector4d) to an orthonormal frame.
inline std::pair<Eigen::Vector4d, Eigen::Vector4d> complete_frame(const Eigen::Vector4d& axis) {
  const auto [u, v] = orthonormal_complement(axis.head<3>());
  Eigen::Vector4d a = Eigen::Vector4d::Zero();
  Eigen::Vector4d b = Eigen::Vector4d::Zero();
  a.head<3>() = u;
  b.head<3>() = v;
  return {a, b};
}

inline SpacePoint spindle_from_unit(const ModelSpace& X, const Eigen::Vector3d& x) {
  return make_point(X, colatitude(x), std::atan2(x[1], x[0]));
}

inline Eigen::Vector3d spindle_to_unit(const SpacePoint& p) { return spindle_embed(p.c[0], p.c[1]); }

// ----- per-shape oracles -----------------------------------------------------

struct ShapeOps {
  const ModelSpace& X;

  // nearest ---------------------------------------------------------------
  std::vector<SpacePoint> nearest(const shape::Points& s, const SpacePoint& q) const {
    return keep_minimizers(X, q, s.points);
  }
  std::vector<SpacePoint> nearest(const shape::Whole&, const SpacePoint& q) const { return {q}; }
  std::vector<SpacePoint> nearest(const shape::GreatSubsphere& s, const SpacePoint& q) const {
    Eigen::Vector4d v = Eigen::Vector4d::Zero();
    for (const auto& b : s.basis) v += q.c.dot(b) * b;
    if (v.norm() > 1e-12) {
      SpacePoint p;
      p.c = v;
      return {canonical(X, p)};
    }
    // q is orthogonal to the subspace: every point is nearest
    std::vector<SpacePoint> out;
    if (s.basis.size() == 1) {
      for (double sg : {1.0, -1.0}) {
        SpacePoint p;
        p.c = sg * s.basis[0];
        out.push_back(p);
      }
      return out;
    }
    for (std::size_t i = 0; i + 1 < s.basis.size(); ++i) {
      auto ring = circle_points(X, s.basis[i], s.basis[i + 1], Eigen::Vector4d::Zero(), 1.0, 16);
      out.insert(out.end(), ring.begin(), ring.end());
    }
    return out;
  }
  std::vector<SpacePoint> nearest(const shape::SmallCircle& s, const SpacePoint& q) const {
    Eigen::Vector4d u = q.c - q.c.dot(s.axis) * s.axis;
    if (u.norm() <= 1e-12) {
      const auto [a, b] = complete_frame(s.axis);
      return circle_points(X, a, b, std::cos(s.rho) * s.axis, std::sin(s.rho), 16);
    }
    SpacePoint p;
    p.c = std::cos(s.rho) * s.axis + std::sin(s.rho) * u.normalized();
    return {canonical(X, p)};
  }
  std::vector<SpacePoint> nearest(const shape::Affine& s, const SpacePoint& q) const {
    SpacePoint p;
    p.c = s.origin;
    for (const auto& b : s.basis) p.c += (q.c - s.origin).dot(b) * b;
    return {canonical(X, p)};
  }
  std::vector<SpacePoint> nearest(const shape::Lines& s, const SpacePoint& q) const {
    std::vector<SpacePoint> cand;
    for (const auto& u : s.directions) {
      SpacePoint p;
      p.c = q.c.dot(u) * u;
      cand.push_back(p);
    }
    if (cand.empty()) cand.push_back(SpacePoint{});
    return keep_minimizers(X, q, cand);
  }
  std::vector<SpacePoint> nearest(const shape::Rays& s, const SpacePoint& q) const {
    if (is_chart_pole(X, q)) return {q};
    std::vector<SpacePoint> cand{cone_apex()};
    for (double a : s.angles) {
      const double delta = circle_separation(q.c[1], a, X.angle());
      if (delta < half_pi) cand.push_back(make_point(X, q.c[0] * std::cos(delta), a));
    }
    return keep_minimizers(X, q, cand);
  }
  std::vector<SpacePoint> nearest(const shape::Meridians& s, const SpacePoint& q) const {
    if (is_chart_pole(X, q)) return {q};
    std::vector<SpacePoint> cand{spindle_pole(1), spindle_pole(2)};
    const double sn = std::sin(q.c[0]);
    const double cs = std::cos(q.c[0]);
    for (double a : s.angles) {
      const double delta = circle_separation(q.c[1], a, X.angle());
      if (delta <= half_pi) cand.push_back(make_point(X, std::atan2(sn * std::cos(delta), cs), a));
    }
    return keep_minimizers(X, q, cand);
  }
  std::vector<SpacePoint> nearest(const shape::Equator&, const SpacePoint& q) const {
    if (is_chart_pole(X, q)) {
      std::vector<SpacePoint> out;
      for (int i = 0; i < 16; ++i) out.push_back(make_point(X, half_pi, X.angle() * i / 16.0));
      return out;
    }
    return {make_point(X, half_pi, q.c[1])};
  }
  std::vector<SpacePoint> nearest(const shape::TiltedCircle& s, const SpacePoint& q) const {
    const Eigen::Vector3d x = spindle_to_unit(q);
    const Eigen::Vector3d v = x - x.dot(s.normal) * s.normal;
    if (v.norm() <= 1e-12) {
      const auto [a, b] = orthonormal_complement(s.normal);
      std::vector<SpacePoint> out;
      for (int i = 0; i < 16; ++i) {
        const double t = two_pi * i / 16.0;
        out.push_back(spindle_from_unit(X, std::cos(t) * a + std::sin(t) * b));
      }
      return out;
    }
    return {spindle_from_unit(X, v.normalized())};
  }

  // global samples ----------------------------------------------------------
  SpacePoint draw(const shape::Points& s, Rng& rng) const { return s.points[rng.below(s.points.size())]; }
  SpacePoint draw(const shape::Whole&, Rng& rng) const { return sample_point(X, rng); }
  SpacePoint draw(const shape::GreatSubsphere& s, Rng& rng) const {
    SpacePoint p;
    for (const auto& b : s.basis) p.c += rng.normal() * b;
    if (p.c.norm() < 1e-12) p.c = s.basis.front();
    return canonical(X, p);
  }
  SpacePoint draw(const shape::SmallCircle& s, Rng& rng) const {
    const auto [a, b] = complete_frame(s.axis);
    const double t = rng.uniform(0.0, two_pi);
    SpacePoint p;
    p.c = std::cos(s.rho) * s.axis + std::sin(s.rho) * (std::cos(t) * a + std::sin(t) * b);
    return canonical(X, p);
  }
  SpacePoint draw(const shape::Affine& s, Rng& rng) const {
    SpacePoint p;
    p.c = s.origin;
    for (const auto& b : s.basis) p.c += rng.uniform(-sampling_extent, sampling_extent) * b;
    return canonical(X, p);
  }
  SpacePoint draw(const shape::Lines& s, Rng& rng) const {
    if (s.directions.empty()) return SpacePoint{};
    SpacePoint p;
    p.c = rng.uniform(-sampling_extent, sampling_extent) * s.directions[rng.below(s.directions.size())];
    return p;
  }
  SpacePoint draw(const shape::Rays& s, Rng& rng) const {
    if (s.angles.empty()) return cone_apex();
    const double a = s.angles[rng.below(s.angles.size())];
    return make_point(X, rng.uniform(0.0, sampling_extent), a);
  }
  SpacePoint draw(const shape::Meridians& s, Rng& rng) const {
    if (s.angles.empty()) return spindle_pole(rng.bernoulli(0.5) ? 1 : 2);
    const double a = s.angles[rng.below(s.angles.size())];
    return make_point(X, rng.uniform(0.0, pi), a);
  }
  SpacePoint draw(const shape::Equator&, Rng& rng) const { return make_point(X, half_pi, rng.uniform(0.0, X.angle())); }
  SpacePoint draw(const shape::TiltedCircle& s, Rng& rng) const {
    const auto [a, b] = orthonormal_complement(s.normal);
    const double t = rng.uniform(0.0, two_pi);
    return spindle_from_unit(X, std::cos(t) * a + std::sin(t) * b);
  }

  // tangent cones -----------------------------------------------------------
  DirectionSet tangent(const shape::Points&, const SpacePoint&) const { return DirectionSet::empty(); }
  DirectionSet tangent(const shape::Whole&, const SpacePoint&) const { return DirectionSet::full(); }
  DirectionSet tangent(const shape::GreatSubsphere& s, const SpacePoint& p) const {
    std::vector<Eigen::Vector4d> w;
    for (const auto& b : s.basis) w.push_back(b - b.dot(p.c) * p.c);
    return tangent_span(X, p, orthonormalize(w, 1e-9));
  }
  DirectionSet tangent(const shape::SmallCircle& s, const SpacePoint& p) const {
    Eigen::Vector4d w = Eigen::Vector4d::Zero();
    w.head<3>() = s.axis.head<3>().cross(p.c.head<3>());
    return tangent_span(X, p, {w.normalized()});
  }
  DirectionSet tangent(const shape::Affine& s, const SpacePoint& p) const { return tangent_span(X, p, s.basis); }
  DirectionSet tangent(const shape::Lines& s, const SpacePoint& p) const {
    std::vector<Direction> out;
    const bool origin = p.c.norm() <= 1e-12;
    for (const auto& u : s.directions) {
      if (origin || (p.c - p.c.dot(u) * u).norm() <= 1e-9) {
        out.push_back(direction_of_tangent(X, p, u));
        out.push_back(direction_of_tangent(X, p, -u));
      }
    }
    return DirectionSet::finite(std::move(out));
  }
  DirectionSet tangent(const shape::Rays& s, const SpacePoint& p) const {
    if (is_chart_pole(X, p)) {
      std::vector<Direction> out;
      for (double a : s.angles) out.push_back(Direction::on_circle(wrap(a, X.angle())));
      return DirectionSet::finite(std::move(out));
    }
    return DirectionSet::finite({Direction::on_circle(0.0), Direction::on_circle(pi)});
  }
  DirectionSet tangent(const shape::Meridians& s, const SpacePoint& p) const { return tangent(shape::Rays{s.angles}, p); }
  DirectionSet tangent(const shape::Equator&, const SpacePoint&) const {
    return DirectionSet::finite({Direction::on_circle(half_pi), Direction::on_circle(3.0 * half_pi)});
  }
  DirectionSet tangent(const shape::TiltedCircle& s, const SpacePoint& p) const {
    const Eigen::Vector3d x = spindle_to_unit(p);
    const Eigen::Vector3d w = s.normal.cross(x);
    if (is_chart_pole(X, p)) {
      const double a = std::atan2(w[1], w[0]);
      return DirectionSet::finite({Direction::on_circle(wrap(a, two_pi)), Direction::on_circle(wrap(a + pi, two_pi))});
    }
    const double s0 = p.c[0];
    const double f = p.c[1];
    const Eigen::Vector3d es(std::cos(s0) * std::cos(f), std::cos(s0) * std::sin(f), -std::sin(s0));
    const Eigen::Vector3d ef(-std::sin(f), std::cos(f), 0.0);
    const double a = std::atan2(w.dot(ef), w.dot(es));
    return DirectionSet::finite({Direction::on_circle(wrap(a, two_pi)), Direction::on_circle(wrap(a + pi, two_pi))});
  }

  // landmarks ---------------------------------------------------------------
  std::vector<SpacePoint> landmarks(const shape::Points& s) const { return s.points; }
  std::vector<SpacePoint> landmarks(const shape::Lines&) const { return {SpacePoint{}}; }
  std::vector<SpacePoint> landmarks(const shape::Rays&) const { return {cone_apex()}; }
  std::vector<SpacePoint> landmarks(const shape::Meridians&) const { return {spindle_pole(1), spindle_pole(2)}; }
  template <class S>
  std::vector<SpacePoint> landmarks(const S&) const {
    return {};
  }
};

inline void check_shape(const ModelSpace& X, const Shape& s) {
  const auto need = [&](SpaceKind k, const char* what) {
    if (X.kind() != k) throw GeometryError(std::string(what) + " does not live in " + X.describe());
  };
  if (std::holds_alternative<shape::GreatSubsphere>(s)) need(SpaceKind::sphere, "great subsphere");
  if (std::holds_alternative<shape::SmallCircle>(s)) {
    need(SpaceKind::sphere, "small circle");
    if (X.dimension() != 2) throw GeometryError("small circles are built on the 2-sphere");
  }
  if (std::holds_alternative<shape::Affine>(s)) need(SpaceKind::euclidean, "affine subspace");
  if (std::holds_alternative<shape::Lines>(s)) need(SpaceKind::euclidean, "union of lines");
  if (std::holds_alternative<shape::Rays>(s)) need(SpaceKind::cone, "ray set");
  if (std::holds_alternative<shape::Meridians>(s)) need(SpaceKind::spindle, "meridian set");
  if (std::holds_alternative<shape::Equator>(s)) need(SpaceKind::spindle, "equator");
  if (std::holds_alternative<shape::TiltedCircle>(s)) {
    need(SpaceKind::spindle, "tilted great circle");
    if (!X.full_angle()) throw GeometryError("tilted great circles need a spindle with L = 2*pi");
  }
}

}  // namespace detail

/// Build the oracles of a shape.
inline SubsetSpec make_subset(const ModelSpace& X, Shape s, std::string description) {
  detail::check_shape(X, s);
  SubsetSpec F;
  F.description = std::move(description);
  F.shape = s;
  if (const auto* pts = std::get_if<shape::Points>(&s)) {
    F.finite_points = pts->points;
    if (pts->points.empty()) {
      F.empty = true;
      F.nearest = [](const SpacePoint&) { return std::vector<SpacePoint>{}; };
      F.sample = [](std::size_t, std::uint64_t) { return std::vector<SpacePoint>{}; };
      F.sample_near = [](const SpacePoint&, double, std::size_t, std::uint64_t) { return std::vector<SpacePoint>{}; };
      F.tangent = [](const SpacePoint&) { return DirectionSet::empty(); };
      return F;
    }
  }
  const ModelSpace space = X;
  F.nearest = [space, s](const SpacePoint& q) {
    const detail::ShapeOps ops{space};
    return std::visit([&](const auto& sh) { return ops.nearest(sh, q); }, s);
  };
  F.sample = [space, s](std::size_t count, std::uint64_t seed) {
    const detail::ShapeOps ops{space};
    Rng rng(derive_seed(seed, "subset-sample"));
    std::vector<SpacePoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(std::visit([&](const auto& sh) { return ops.draw(sh, rng); }, s));
    return out;
  };
  // Points within the ball, found by projecting ambient samples of the ball:
  // every member x of the ball is the projection of itself, so nothing is missed.
  auto nearest = F.nearest;
  F.sample_near = [space, s, nearest](const SpacePoint& center, double radius, std::size_t count,
                                      std::uint64_t seed) {
    std::vector<SpacePoint> out;
    if (const auto* pts = std::get_if<shape::Points>(&s)) {
      for (const auto& p : pts->points) {
        if (distance(space, p, center) <= radius) out.push_back(p);
      }
      return out;
    }
    Rng rng(derive_seed(seed, "subset-near"));
    const std::size_t tries = 8 * count + 16;
    for (std::size_t i = 0; i < tries && out.size() < count; ++i) {
      const SpacePoint y = sample_near(space, center, radius, rng);
      const auto near = nearest(y);
      if (near.empty()) continue;
      const SpacePoint& x = near[rng.below(near.size())];
      if (distance(space, x, center) <= radius) out.push_back(x);
    }
    return out;
  };
  F.tangent = [space, s](const SpacePoint& p) {
    const detail::ShapeOps ops{space};
    return std::visit([&](const auto& sh) { return ops.tangent(sh, p); }, s);
  };
  const detail::ShapeOps ops{space};
  F.landmarks = std::visit([&](const auto& sh) { return ops.landmarks(sh); }, s);
  return F;
}

/// Copy of F whose tangent cones must be estimated from samples.
inline SubsetSpec without_tangent(SubsetSpec F) {
  F.tangent = nullptr;
  F.description += " [estimated tangent]";
  return F;
}

// ----- catalog ---------------------------------------------------------------

inline SubsetSpec empty_subset(const ModelSpace& X) { return make_subset(X, shape::Points{}, "empty"); }

inline SubsetSpec whole_space(const ModelSpace& X) { return make_subset(X, shape::Whole{}, "whole space"); }

inline SubsetSpec point_set(const ModelSpace& X, std::vector<SpacePoint> pts, std::string description = "") {
  for (auto& p : pts) p = canonical(X, p);
  std::vector<SpacePoint> uniq;
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& u : uniq) dup = dup || same_point(X, u, p, 1e-13);
    if (!dup) uniq.push_back(p);
  }
  if (description.empty()) {
    description = uniq.size() == 1 ? "point " + to_string(X, uniq.front()) : fmt::format("{} points", uniq.size());
  }
  return make_subset(X, shape::Points{uniq}, description);
}

inline SubsetSpec single_point(const ModelSpace& X, const SpacePoint& p) { return point_set(X, {p}); }

/// Unit sphere of span(vectors) inside a sphere space.
inline SubsetSpec great_subsphere(const ModelSpace& X, const std::vector<Eigen::Vector4d>& span) {
  const auto basis = detail::orthonormalize(span);
  if (basis.empty()) throw GeometryError("great subsphere needs a nonzero span");
  return make_subset(X, shape::GreatSubsphere{basis}, fmt::format("great {}-subsphere", basis.size() - 1));
}

/// Great circle of the 2-sphere with the given unit normal.
inline SubsetSpec great_circle(const ModelSpace& X, const Eigen::Vector3d& normal) {
  if (X.kind() != SpaceKind::sphere || X.dimension() != 2) throw GeometryError("great_circle needs sphere(2)");
  const auto [a, b] = orthonormal_complement(normal.normalized());
  Eigen::Vector4d u = Eigen::Vector4d::Zero();
  Eigen::Vector4d v = Eigen::Vector4d::Zero();
  u.head<3>() = a;
  v.head<3>() = b;
  SubsetSpec F = make_subset(X, shape::GreatSubsphere{{u, v}}, "great circle");
  return F;
}

inline SubsetSpec small_circle(const ModelSpace& X, const Eigen::Vector3d& axis, double rho) {
  if (!(rho > 0.0 && rho < pi)) throw GeometryError("small circle radius must lie in (0, pi)");
  Eigen::Vector4d a = Eigen::Vector4d::Zero();
  a.head<3>() = axis.normalized();
  return make_subset(X, shape::SmallCircle{a, rho}, fmt::format("small circle rho={:.17g}", rho));
}

inline SubsetSpec antipodal_pair(const ModelSpace& X, const SpacePoint& p) {
  SpacePoint q;
  q.c = -p.c;
  return point_set(X, {p, q}, "antipodal pair");
}

inline SubsetSpec affine_subspace(const ModelSpace& X, const Eigen::Vector4d& origin,
                                  const std::vector<Eigen::Vector4d>& span) {
  if (X.kind() != SpaceKind::euclidean) throw GeometryError("affine subspaces live in euclidean spaces");
  SpacePoint o;
  o.c = origin;
  o = canonical(X, o);
  const auto basis = detail::orthonormalize(span);
  if (basis.empty()) return point_set(X, {o});
  return make_subset(X, shape::Affine{o.c, basis}, basis.size() == 1 ? "line" : "affine plane");
}

inline SubsetSpec line(const ModelSpace& X, const Eigen::Vector4d& origin, const Eigen::Vector4d& direction) {
  return affine_subspace(X, origin, {direction});
}

inline SubsetSpec lines_through_origin(const ModelSpace& X, const std::vector<Eigen::Vector4d>& dirs) {
  std::vector<Eigen::Vector4d> unit;
  for (const auto& d : dirs) unit.push_back(d.normalized());
  return make_subset(X, shape::Lines{unit}, fmt::format("union of {} lines", unit.size()));
}

inline SubsetSpec ray_set(const ModelSpace& X, std::vector<double> angles) {
  for (double& a : angles) a = wrap(a, X.angle());
  return make_subset(X, shape::Rays{angles},
                     angles.empty() ? std::string("apex") : fmt::format("apex and {} rays", angles.size()));
}

inline SubsetSpec apex_singleton(const ModelSpace& X) { return ray_set(X, {}); }

inline SubsetSpec meridian_set(const ModelSpace& X, std::vector<double> angles) {
  for (double& a : angles) a = wrap(a, X.angle());
  return make_subset(X, shape::Meridians{angles},
                     angles.empty() ? std::string("pole pair") : fmt::format("poles and {} meridians", angles.size()));
}

inline SubsetSpec equator(const ModelSpace& X) { return make_subset(X, shape::Equator{}, "equator"); }

inline SubsetSpec tilted_great_circle(const ModelSpace& X, const Eigen::Vector3d& normal) {
  return make_subset(X, shape::TiltedCircle{normal.normalized()}, "tilted great circle");
}

// ----- fixed point sets ------------------------------------------------------

inline SubsetSpec fixed_point_set(const ModelSpace& X, const Isometry& g) {
  g.validate(X);
  const std::string tag = "fixed set of " + g.name();
  if (g.is_linear()) {
    const int m = detail::ambient_dim(X);
    const Eigen::MatrixXd a = g.matrix().topLeftCorner(m, m) - Eigen::MatrixXd::Identity(m, m);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    std::vector<Eigen::Vector4d> kernel;
    for (int i = 0; i < m; ++i) {
      if (svd.singularValues()[i] <= 1e-12) {
        Eigen::Vector4d v = Eigen::Vector4d::Zero();
        v.head(m) = svd.matrixV().col(i);
        kernel.push_back(v);
      }
    }
    if (X.kind() == SpaceKind::sphere) {
      if (kernel.empty()) return make_subset(X, shape::Points{}, tag);
      SubsetSpec F = make_subset(X, shape::GreatSubsphere{detail::orthonormalize(kernel)}, tag);
      return F;
    }
    // (A - I) x = -b
    const Eigen::VectorXd rhs = -g.offset().head(m);
    const Eigen::VectorXd x = svd.solve(rhs);
    if ((a * x - rhs).norm() > 1e-9) return make_subset(X, shape::Points{}, tag);
    SpacePoint o;
    o.c.head(m) = x;
    if (kernel.empty()) return make_subset(X, shape::Points{{o}}, tag);
    if (static_cast<int>(kernel.size()) == m) return make_subset(X, shape::Whole{}, tag);
    return make_subset(X, shape::Affine{o.c, detail::orthonormalize(kernel)}, tag);
  }
  const double l = X.angle();
  const bool identity_on_circle = g.sign() > 0 && std::abs(detail::circle_offset(0.0, g.shift(), l)) <= 1e-12;
  if (X.kind() == SpaceKind::cone) {
    if (g.sign() < 0) {
      const double a = wrap(g.shift() / 2.0, l);
      return make_subset(X, shape::Rays{{a, wrap(a + l / 2.0, l)}}, tag);
    }
    if (identity_on_circle) return make_subset(X, shape::Whole{}, tag);
    return make_subset(X, shape::Rays{}, tag);
  }
  // spindle
  if (!g.swaps_poles()) {
    if (g.sign() < 0) {
      const double a = wrap(g.shift() / 2.0, l);
      return make_subset(X, shape::Meridians{{a, wrap(a + l / 2.0, l)}}, tag);
    }
    if (identity_on_circle) return make_subset(X, shape::Whole{}, tag);
    return make_subset(X, shape::Meridians{}, tag);
  }
  if (g.sign() < 0) {
    const double a = wrap(g.shift() / 2.0, l);
    return make_subset(X, shape::Points{{make_point(X, half_pi, a), make_point(X, half_pi, a + l / 2.0)}}, tag);
  }
  if (identity_on_circle) return make_subset(X, shape::Equator{}, tag);
  return make_subset(X, shape::Points{}, tag);
}

// ----- intersections ---------------------------------------------------------

namespace detail {

inline std::vector<double> common_angles(const std::vector<double>& a, const std::vector<double>& b, double l) {
  std::vector<double> out;
  for (double x : a) {
    for (double y : b) {
      if (circle_separation(x, y, l) <= 1e-12) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

inline std::optional<Shape> intersect_shapes(const ModelSpace& X, const SubsetSpec& F, const SubsetSpec& G) {
  if (!F.shape || !G.shape) return std::nullopt;
  const Shape& a = *F.shape;
  const Shape& b = *G.shape;
  if (std::holds_alternative<shape::Whole>(a)) return b;
  if (std::holds_alternative<shape::Whole>(b)) return a;
  if (const auto* pa = std::get_if<shape::Points>(&a)) {
    shape::Points out;
    for (const auto& p : pa->points) {
      if (subset_contains(X, G, p)) out.points.push_back(p);
    }
    return out;
  }
  if (std::holds_alternative<shape::Points>(b)) return intersect_shapes(X, G, F);
  if (const auto* sa = std::get_if<shape::GreatSubsphere>(&a)) {
    if (const auto* sb = std::get_if<shape::GreatSubsphere>(&b)) {
      const auto common = common_subspace(sa->basis, sb->basis, ambient_dim(X));
      if (common.empty()) return shape::Points{};
      return shape::GreatSubsphere{common};
    }
  }
  if (const auto* fa = std::get_if<shape::Affine>(&a)) {
    if (const auto* fb = std::get_if<shape::Affine>(&b)) {
      const int m = ambient_dim(X);
      // o_a + A s = o_b + B t in the least-squares sense
      Eigen::MatrixXd M(m, fa->basis.size() + fb->basis.size());
      for (std::size_t i = 0; i < fa->basis.size(); ++i) M.col(i) = fa->basis[i].head(m);
      for (std::size_t j = 0; j < fb->basis.size(); ++j) M.col(fa->basis.size() + j) = -fb->basis[j].head(m);
      const Eigen::VectorXd rhs = (fb->origin - fa->origin).head(m);
      const Eigen::VectorXd st = M.completeOrthogonalDecomposition().solve(rhs);
      if ((M * st - rhs).norm() > 1e-9) return shape::Points{};
      Eigen::Vector4d o = fa->origin;
      for (std::size_t i = 0; i < fa->basis.size(); ++i) o += st[i] * fa->basis[i];
      const auto common = common_subspace(fa->basis, fb->basis, m);
      SpacePoint op;
      op.c = o;
      if (common.empty()) return shape::Points{{op}};
      return shape::Affine{o, common};
    }
  }
  if (const auto* la = std::get_if<shape::Lines>(&a)) {
    if (const auto* lb = std::get_if<shape::Lines>(&b)) {
      shape::Lines out;
      for (const auto& u : la->directions) {
        for (const auto& v : lb->directions) {
          if (std::abs(std::abs(u.dot(v)) - 1.0) <= 1e-12) {
            out.directions.push_back(u);
            break;
          }
        }
      }
      if (out.directions.empty()) return shape::Points{{SpacePoint{}}};
      return out;
    }
  }
  if (const auto* ra = std::get_if<shape::Rays>(&a)) {
    if (const auto* rb = std::get_if<shape::Rays>(&b)) return shape::Rays{common_angles(ra->angles, rb->angles, X.angle())};
  }
  if (const auto* ma = std::get_if<shape::Meridians>(&a)) {
    if (const auto* mb = std::get_if<shape::Meridians>(&b)) {
      return shape::Meridians{common_angles(ma->angles, mb->angles, X.angle())};
    }
    if (std::holds_alternative<shape::Equator>(b)) {
      shape::Points out;
      for (double x : ma->angles) out.points.push_back(make_point(X, half_pi, x));
      return out;
    }
  }
  if (std::holds_alternative<shape::Equator>(a)) {
    if (std::holds_alternative<shape::Equator>(b)) return shape::Equator{};
    if (std::holds_alternative<shape::Meridians>(b)) return intersect_shapes(X, G, F);
  }
  return std::nullopt;
}

/// Finite intersection found by alternating projections from samples of F.
inline std::vector<SpacePoint> intersect_numerically(const ModelSpace& X, const SubsetSpec& F, const SubsetSpec& G,
                                                     std::uint64_t seed) {
  auto starts = F.sample(512, derive_seed(seed, "intersection"));
  starts.insert(starts.end(), F.landmarks.begin(), F.landmarks.end());
  starts.insert(starts.end(), G.landmarks.begin(), G.landmarks.end());
  std::vector<SpacePoint> found;
  for (SpacePoint x : starts) {
    for (int it = 0; it < 500; ++it) {
      const SpacePoint y = project_to_subset(X, F, project_to_subset(X, G, x));
      const double moved = distance(X, x, y);
      x = y;
      if (moved <= 1e-15) break;
    }
    if (!subset_contains(X, G, x, 1e-9) || !subset_contains(X, F, x, 1e-9)) continue;
    bool dup = false;
    for (const auto& f : found) dup = dup || same_point(X, f, x, 1e-7);
    if (!dup) found.push_back(x);
    if (found.size() > 64) throw GeometryError("intersection looks like a continuum; no analytic rule for it");
  }
  return found;
}

}  // namespace detail

/// F intersected with G: analytic for pairs of catalog shapes, otherwise a
/// finite set found by alternating projections.
inline SubsetSpec intersection(const ModelSpace& X, const SubsetSpec& F, const SubsetSpec& G, std::uint64_t seed = 0) {
  const std::string tag = "(" + F.description + ") & (" + G.description + ")";
  if (F.empty || G.empty) return make_subset(X, shape::Points{}, tag);
  if (auto s = detail::intersect_shapes(X, F, G)) return make_subset(X, *s, tag);
  return make_subset(X, shape::Points{detail::intersect_numerically(X, F, G, seed)}, tag);
}

}  // namespace qclab

#endif
