#ifndef QCLAB_QCLAB_HPP
#define QCLAB_QCLAB_HPP

// Everything at once.

#include "qclab/config.hpp"
#include "qclab/random.hpp"
#include "qclab/spaceform.hpp"
#include "qclab/direction.hpp"
#include "qclab/model_space.hpp"
#include "qclab/isometry.hpp"
#include "qclab/subset.hpp"
#include "qclab/direction_geometry.hpp"
#include "qclab/gradient_flow.hpp"
#include "qclab/qc_check.hpp"
#include "qclab/catalog.hpp"
#include "qclab/scene.hpp"
#include "qclab/acceptance.hpp"

#endif
