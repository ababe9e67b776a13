#ifndef QCLAB_DIRECTION_GEOMETRY_HPP
#define QCLAB_DIRECTION_GEOMETRY_HPP

// First variation of distance and tangent cones of subsets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "qclab/direction.hpp"
#include "qclab/model_space.hpp"
#include "qclab/subset.hpp"

namespace qclab {

/// Derivative at q of dist_p along eta: -cos of the angle from eta to the directions toward p.
inline double dist_derivative(const ModelSpace& X, const SpacePoint& p, const SpacePoint& q, const Direction& eta) {
  if (same_point(X, p, q, 0.0)) throw GeometryError("dist_derivative needs p != q");
  const DirectionSpace sigma = direction_space_at(X, q);
  return -std::cos(distance_to_set(sigma, eta, directions_to(X, q, p)));
}

/// Largest derivative of dist_p at q over all directions, with its direction.
inline FarthestDirection steepest_ascent(const ModelSpace& X, const SpacePoint& p, const SpacePoint& q) {
  return farthest_direction(direction_space_at(X, q), directions_to(X, q, p));
}

struct TangentEstimateConfig {
  double r0 = 1e-2;
  int scales = 8;
  /// Number of finest scales a direction must persist through.
  int persist = 4;
  std::size_t samples = 96;
  double merge = 1e-3;
  /// Clusters per scale above which the cone is treated as a continuum.
  std::size_t continuum_clusters = 32;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<Direction> cluster_directions(const DirectionSpace& sigma, const std::vector<Direction>& dirs,
                                                 double merge) {
  std::vector<Direction> reps;
  for (const auto& d : dirs) {
    bool near = false;
    for (const auto& r : reps) {
      if (sigma_distance(sigma, r, d) <= merge) {
        near = true;
        break;
      }
    }
    if (!near) reps.push_back(d);
  }
  return reps;
}

/// Median over a set of the distance to its nearest other element.
inline double median_spacing(const DirectionSpace& sigma, const std::vector<Direction>& dirs) {
  if (dirs.size() < 2) return 0.0;
  std::vector<double> nn;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      if (j != i) best = std::min(best, sigma_distance(sigma, dirs[i], dirs[j]));
    }
    nn.push_back(best);
  }
  std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
  return nn[nn.size() / 2];
}

}  // namespace detail

/// Limit directions at p of points of F, from samples in shrinking annuli.
///
/// At scale m the annulus is r_m/2 <= |px| <= r_m with r_m = r0 2^-m. A
/// direction of the finest scale is kept when every one of the `persist`
/// finest scales has a direction within the merge radius (a radius tied to
/// the sample spacing when the scales look like a continuum). Nothing found at the finest scale
/// means p is isolated.
inline DirectionSet estimate_tangent_cone(const ModelSpace& X, const SubsetSpec& F, const SpacePoint& p,
                                          const TangentEstimateConfig& cfg = {}) {
  if (!subset_contains(X, F, p, 1e-9)) throw GeometryError("tangent cone at a point outside the subset");
  const DirectionSpace sigma = direction_space_at(X, p);
  std::vector<std::vector<Direction>> per_scale;
  for (int m = cfg.scales - cfg.persist; m < cfg.scales; ++m) {
    const double r = cfg.r0 * std::ldexp(1.0, -m);
    const auto pts = F.sample_near(p, r, cfg.samples, derive_seed(cfg.seed + static_cast<std::uint64_t>(m), "annulus"));
    std::vector<Direction> dirs;
    for (const auto& x : pts) {
      const double d = distance(X, p, x);
      if (d < r / 2.0 || d > r) continue;
      const auto g = minimal_geodesics(X, p, x);
      if (g.continuum) continue;
      dirs.insert(dirs.end(), g.initial.begin(), g.initial.end());
    }
    per_scale.push_back(detail::cluster_directions(sigma, dirs, cfg.merge));
  }
  const auto& finest = per_scale.back();
  if (finest.empty()) return DirectionSet::empty();
  bool continuum = true;
  for (const auto& s : per_scale) continuum = continuum && s.size() > cfg.continuum_clusters;
  // A continuum is only sampled, so the matching radius follows the sample
  // spacing (a 2-dimensional cone is much sparser than a 1-dimensional one).
  std::vector<double> tol(per_scale.size(), cfg.merge);
  if (continuum) {
    for (std::size_t j = 0; j < per_scale.size(); ++j) tol[j] = std::max(0.1, 3.0 * detail::median_spacing(sigma, per_scale[j]));
  }
  std::vector<Direction> keep;
  for (const auto& d : finest) {
    bool persists = true;
    for (std::size_t j = 0; j + 1 < per_scale.size() && persists; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& e : per_scale[j]) best = std::min(best, sigma_distance(sigma, d, e));
      persists = best <= tol[j];
    }
    if (persists) keep.push_back(canonical(sigma, d));
  }
  return DirectionSet::finite(std::move(keep));
}

/// Sigma_p F: the analytic cone when F carries one, else the estimate.
inline DirectionSet tangent_cone_estimate(const ModelSpace& X, const SubsetSpec& F, const SpacePoint& p,
                                          const TangentEstimateConfig& cfg = {}) {
  if (F.has_tangent()) {
    if (!subset_contains(X, F, p, 1e-9)) throw GeometryError("tangent cone at a point outside the subset");
    return F.tangent(p);
  }
  return estimate_tangent_cone(X, F, p, cfg);
}

}  // namespace qclab

#endif
