#ifndef QCLAB_CATALOG_HPP
#define QCLAB_CATALOG_HPP

// Named example subsets with their known status.

#include <string>
#include <vector>

#include "qclab/model_space.hpp"
#include "qclab/subset.hpp"

namespace qclab {

struct CatalogEntry {
  std::string name;
  ModelSpace space;
  SubsetSpec subset;
  bool quasi_convex = true;
};

inline std::vector<CatalogEntry> subset_catalog() {
  const auto S = ModelSpace::sphere(2);
  const auto E = ModelSpace::euclidean(2);
  const auto C = ModelSpace::cone(pi);
  const auto Z = ModelSpace::spindle(pi);
  const auto x = make_point(S, 1, 0, 0);
  return {
      {"sphere_greatcircle", S, great_circle(S, Eigen::Vector3d::UnitZ()), true},
      {"sphere_smallcircle", S, small_circle(S, Eigen::Vector3d::UnitZ(), pi / 4), false},
      {"sphere_point", S, single_point(S, x), true},
      {"sphere_antipodal", S, antipodal_pair(S, x), true},
      {"plane_line", E, line(E, Eigen::Vector4d::Zero(), Eigen::Vector4d(1, 0, 0, 0)), true},
      {"plane_two_lines", E, lines_through_origin(E, {Eigen::Vector4d(1, 0, 0, 0), Eigen::Vector4d(0, 1, 0, 0)}), false},
      {"cone_two_rays", C, ray_set(C, {0.0, half_pi}), true},
      {"cone_apex", C, apex_singleton(C), true},
      {"spindle_meridians", Z, meridian_set(Z, {0.0, half_pi}), true},
      {"spindle_equator", Z, equator(Z), true},
  };
}

inline const CatalogEntry& catalog_entry(const std::vector<CatalogEntry>& cat, const std::string& name) {
  for (const auto& e : cat) {
    if (e.name == name) return e;
  }
  throw GeometryError("no catalog entry named " + name);
}

}  // namespace qclab

#endif
