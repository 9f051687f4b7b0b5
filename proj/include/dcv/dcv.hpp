#pragma once

// Umbrella header: discrete conformal mapping of triangulated surfaces by
// energy minimization, and vortex construction on top of it.

#include "dcv/cli.hpp"
#include "dcv/contour.hpp"
#include "dcv/energy.hpp"
#include "dcv/errors.hpp"
#include "dcv/geometry.hpp"
#include "dcv/lobachevsky.hpp"
#include "dcv/metric.hpp"
#include "dcv/obj_io.hpp"
#include "dcv/problem_io.hpp"
#include "dcv/solution_io.hpp"
#include "dcv/solver.hpp"
#include "dcv/surface.hpp"
#include "dcv/svg.hpp"
#include "dcv/vortex.hpp"
