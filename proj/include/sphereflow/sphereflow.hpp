#pragma once

#include "sphereflow/analysis.hpp"
#include "sphereflow/curve.hpp"
#include "sphereflow/experiments.hpp"
#include "sphereflow/flow.hpp"
#include "sphereflow/generate.hpp"
#include "sphereflow/intersections.hpp"
#include "sphereflow/io.hpp"
#include "sphereflow/metrics.hpp"
#include "sphereflow/sphere.hpp"
