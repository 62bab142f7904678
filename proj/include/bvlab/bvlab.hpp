#pragma once

#include "bvlab/error.hpp"
#include "bvlab/geometry.hpp"
#include "bvlab/grid.hpp"
#include "bvlab/weighted_plane.hpp"
#include "bvlab/curves.hpp"
#include "bvlab/contour.hpp"
#include "bvlab/hausdorff.hpp"
#include "bvlab/report.hpp"
#include "bvlab/growth.hpp"
#include "bvlab/bv_scalar.hpp"
#include "bvlab/homeo.hpp"
#include "bvlab/metric_bv.hpp"
#include "bvlab/homeo_lab.hpp"
#include "bvlab/jordan.hpp"
#include "bvlab/whitney.hpp"
#include "bvlab/io.hpp"
