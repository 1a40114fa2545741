#pragma once

#include "geoflow/algebra_io.hpp"
#include "geoflow/clebsch3d.hpp"
#include "geoflow/errors.hpp"
#include "geoflow/euler2d_spectral.hpp"
#include "geoflow/geodesic_flow.hpp"
#include "geoflow/metric_lie_algebra.hpp"
#include "geoflow/model_zoo.hpp"
#include "geoflow/rigid_stability.hpp"
#include "geoflow/spectral_ops3d.hpp"
