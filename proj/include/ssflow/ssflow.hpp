#pragma once

// Umbrella header for the shear-flow verification toolkit.

#include "approx.hpp"
#include "base_flow.hpp"
#include "boundary_data.hpp"
#include "characteristics.hpp"
#include "config.hpp"
#include "cutoffs.hpp"
#include "errors.hpp"
#include "euler.hpp"
#include "field.hpp"
#include "field_ops.hpp"
#include "grid.hpp"
#include "homogenize.hpp"
#include "jet.hpp"
#include "lame.hpp"
#include "layer.hpp"
#include "linear_solver.hpp"
#include "mollify.hpp"
#include "nonlinear.hpp"
#include "params.hpp"
#include "pipeline.hpp"
#include "report.hpp"
#include "run_config.hpp"
#include "slope_fit.hpp"
#include "straighten.hpp"
#include "transport.hpp"
#include "verify.hpp"
