#pragma once

#include "bounds.hpp"
#include "curve.hpp"
#include "curve_io.hpp"
#include "errors.hpp"
#include "extent.hpp"
#include "fixtures.hpp"
#include "graph_patch.hpp"
#include "isotopy.hpp"
#include "kernel.hpp"
#include "linalg.hpp"
#include "mollifier.hpp"
#include "oracles.hpp"
#include "parallel.hpp"
#include "report_json.hpp"
#include "semicontinuity.hpp"
#include "smoothing.hpp"
#include "tightener.hpp"
