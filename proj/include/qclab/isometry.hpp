#ifndef QCLAB_ISOMETRY_HPP
#define QCLAB_ISOMETRY_HPP

// Isometries of the model spaces and the maps they induce on spaces of
// directions at fixed points.

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "qclab/model_space.hpp"

namespace qclab {

/// sphere: x -> A x; euclidean: x -> A x + b;
/// cone/spindle: phi -> sign*phi + shift, optionally s -> pi - s on a spindle.
class Isometry {
 public:
  static Isometry linear(std::string name, const Eigen::Matrix4d& a, const Eigen::Vector4d& b = Eigen::Vector4d::Zero()) {
    Isometry g;
    g.name_ = std::move(name);
    g.linear_ = true;
    g.a_ = a;
    g.b_ = b;
    return g;
  }
  static Isometry angular(std::string name, int sign, double shift, bool swap_poles = false) {
    Isometry g;
    g.name_ = std::move(name);
    g.sign_ = sign >= 0 ? 1 : -1;
    g.shift_ = shift;
    g.swap_ = swap_poles;
    return g;
  }

  const std::string& name() const { return name_; }
  bool is_linear() const { return linear_; }
  const Eigen::Matrix4d& matrix() const { return a_; }
  const Eigen::Vector4d& offset() const { return b_; }
  int sign() const { return sign_; }
  double shift() const { return shift_; }
  bool swaps_poles() const { return swap_; }

  /// Throws unless the isometry fits the space (orthogonal block, right chart type).
  void validate(const ModelSpace& X) const {
    const bool flat = X.kind() == SpaceKind::sphere || X.kind() == SpaceKind::euclidean;
    if (flat != linear_) throw GeometryError("isometry '" + name_ + "' does not fit " + X.describe());
    if (linear_) {
      const int m = X.kind() == SpaceKind::sphere ? X.dimension() + 1 : X.dimension();
      const Eigen::MatrixXd blk = a_.topLeftCorner(m, m);
      if ((blk.transpose() * blk - Eigen::MatrixXd::Identity(m, m)).norm() > 1e-12) {
        throw GeometryError("isometry '" + name_ + "' is not orthogonal");
      }
      if (X.kind() == SpaceKind::sphere && b_.norm() != 0.0) {
        throw GeometryError("sphere isometry '" + name_ + "' must fix the origin");
      }
    } else if (swap_ && X.kind() != SpaceKind::spindle) {
      throw GeometryError("pole swap only exists on a spindle");
    }
  }

  SpacePoint apply(const ModelSpace& X, const SpacePoint& p) const {
    if (linear_) {
      const int m = X.kind() == SpaceKind::sphere ? X.dimension() + 1 : X.dimension();
      SpacePoint out;
      out.c.head(m) = a_.topLeftCorner(m, m) * p.c.head(m) + b_.head(m);
      return canonical(X, out);
    }
    SpacePoint out = p;
    if (X.kind() == SpaceKind::spindle && swap_) out.c[0] = pi - p.c[0];
    if (!is_chart_pole(X, p)) out.c[1] = sign_ * p.c[1] + shift_;
    return canonical(X, out);
  }

 private:
  Isometry() = default;
  std::string name_;
  bool linear_ = false;
  Eigen::Matrix4d a_ = Eigen::Matrix4d::Identity();
  Eigen::Vector4d b_ = Eigen::Vector4d::Zero();
  int sign_ = 1;
  double shift_ = 0.0;
  bool swap_ = false;
};

namespace detail {

inline Eigen::Matrix4d diag4(double a, double b, double c, double d) {
  return Eigen::Vector4d(a, b, c, d).asDiagonal();
}

inline Eigen::Matrix4d swap_axes(int i, int j) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(i, i) = m(j, j) = 0.0;
  m(i, j) = m(j, i) = 1.0;
  return m;
}

}  // namespace detail

/// Three isometries per space: two reflections and one rotation (or a
/// translation/pole swap where that is the natural third).
inline std::vector<Isometry> builtin_isometries(const ModelSpace& X) {
  using detail::diag4;
  const int n = X.dimension();
  switch (X.kind()) {
    case SpaceKind::sphere:
      if (n == 1) {
        return {Isometry::linear("reflect-y", diag4(1, -1, 1, 1)), Isometry::linear("reflect-x", diag4(-1, 1, 1, 1)),
                Isometry::linear("rotate-pi", diag4(-1, -1, 1, 1))};
      }
      if (n == 2) {
        return {Isometry::linear("reflect-z", diag4(1, 1, -1, 1)), Isometry::linear("reflect-x", diag4(-1, 1, 1, 1)),
                Isometry::linear("rotate-z-pi", diag4(-1, -1, 1, 1))};
      }
      return {Isometry::linear("reflect-w", diag4(1, 1, 1, -1)), Isometry::linear("reflect-x", diag4(-1, 1, 1, 1)),
              Isometry::linear("rotate-xy-pi", diag4(-1, -1, 1, 1))};
    case SpaceKind::euclidean:
      if (n == 1) {
        return {Isometry::linear("reflect-0", diag4(-1, 1, 1, 1)),
                Isometry::linear("reflect-1", diag4(-1, 1, 1, 1), Eigen::Vector4d(2, 0, 0, 0)),
                Isometry::linear("translate-1", Eigen::Matrix4d::Identity(), Eigen::Vector4d(1, 0, 0, 0))};
      }
      if (n == 2) {
        return {Isometry::linear("reflect-x-axis", diag4(1, -1, 1, 1)),
                Isometry::linear("reflect-diagonal", detail::swap_axes(0, 1)),
                Isometry::linear("rotate-pi", diag4(-1, -1, 1, 1))};
      }
      return {Isometry::linear("reflect-z", diag4(1, 1, -1, 1)), Isometry::linear("rotate-z-pi", diag4(-1, -1, 1, 1)),
              Isometry::linear("point-reflect", diag4(-1, -1, -1, 1))};
    case SpaceKind::cone: {
      const double t = X.angle();
      return {Isometry::angular("reflect-0", -1, 0.0), Isometry::angular("reflect-quarter", -1, t / 2.0),
              Isometry::angular("rotate-third", 1, t / 3.0)};
    }
    case SpaceKind::spindle: {
      const double l = X.angle();
      return {Isometry::angular("reflect-0", -1, 0.0), Isometry::angular("rotate-third", 1, l / 3.0),
              Isometry::angular("swap-poles", 1, 0.0, true)};
    }
  }
  return {};
}

// ----- induced maps on directions --------------------------------------------

/// Image under dgamma of a direction at a fixed point p of gamma.
///
/// Isometries carry minimal geodesics to minimal geodesics, so the direction
/// from p to gamma(exp_p(t d)) is exact for any t below the cut distance.
inline Direction induced_direction(const ModelSpace& X, const Isometry& g, const SpacePoint& p, const Direction& d) {
  const double t = std::min(0.25, cut_distance(X, p, d) / 2.0);
  const SpacePoint q = exp_step(X, p, d, t);
  const SpacePoint gq = g.apply(X, q);
  return minimal_geodesics(X, p, gq).initial.front();
}

/// Fixed directions of dgamma at a fixed point p.
inline DirectionSet induced_fixed_directions(const ModelSpace& X, const Isometry& g, const SpacePoint& p,
                                             double tol = 1e-9) {
  if (!same_point(X, g.apply(X, p), p, 1e-12)) throw GeometryError("induced map needs a fixed point");
  const DirectionSpace sigma = direction_space_at(X, p);
  switch (sigma.kind()) {
    case DirectionSpaceKind::pair: {
      std::vector<Direction> keep;
      for (int s : {1, -1}) {
        if (induced_direction(X, g, p, Direction::in_pair(s)).sign() == s) keep.push_back(Direction::in_pair(s));
      }
      return DirectionSet::finite(std::move(keep));
    }
    case DirectionSpaceKind::circle: {
      // An isometry of a circle is a rotation or a reflection; two images decide which.
      const double l = sigma.length();
      const double eps = std::min(0.1, l / 8.0);
      const double f0 = induced_direction(X, g, p, Direction::on_circle(0.0)).angle();
      const double f1 = induced_direction(X, g, p, Direction::on_circle(eps)).angle();
      const bool reversing = detail::circle_offset(f0, f1, l) < 0.0;
      if (reversing) {
        const double a = wrap(f0 / 2.0, l);
        return DirectionSet::finite({Direction::on_circle(a), Direction::on_circle(wrap(a + l / 2.0, l))});
      }
      if (std::abs(detail::circle_offset(0.0, f0, l)) <= tol) return DirectionSet::full();
      return DirectionSet::empty();
    }
    case DirectionSpaceKind::sphere: {
      Eigen::Matrix3d m;
      for (int i = 0; i < 3; ++i) {
        m.col(i) = induced_direction(X, g, p, Direction::on_sphere(Eigen::Vector3d::Unit(i))).unit();
      }
      const Eigen::JacobiSVD<Eigen::Matrix3d> svd(m - Eigen::Matrix3d::Identity(), Eigen::ComputeFullV);
      const Eigen::Vector3d sv = svd.singularValues();
      int fixed_dim = 0;
      for (int i = 0; i < 3; ++i) fixed_dim += sv[i] <= 1e-7 ? 1 : 0;
      const Eigen::Matrix3d v = svd.matrixV();
      if (fixed_dim == 0) return DirectionSet::empty();
      if (fixed_dim == 1) {
        return DirectionSet::finite({Direction::on_sphere(v.col(2)), Direction::on_sphere(-v.col(2))});
      }
      if (fixed_dim == 2) return DirectionSet::great_circle(v.col(0));
      return DirectionSet::full();
    }
  }
  return DirectionSet::empty();
}

}  // namespace qclab

#endif
