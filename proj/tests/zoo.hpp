#ifndef QCLAB_TESTS_ZOO_HPP
#define QCLAB_TESTS_ZOO_HPP

#include <vector>

#include "qclab/model_space.hpp"

namespace qclab::testing {

/// One or more spaces of every kind, including the degenerate-looking ones
/// (a full cone is the plane, a full spindle is the round sphere).
inline std::vector<ModelSpace> zoo() {
  return {ModelSpace::sphere(1), ModelSpace::sphere(2), ModelSpace::sphere(3, 1.5), ModelSpace::euclidean(1),
          ModelSpace::euclidean(2), ModelSpace::euclidean(3), ModelSpace::cone(pi / 2), ModelSpace::cone(3 * pi / 2),
          ModelSpace::cone(two_pi), ModelSpace::spindle(pi / 2), ModelSpace::spindle(pi), ModelSpace::spindle(two_pi)};
}

}  // namespace qclab::testing

#endif
