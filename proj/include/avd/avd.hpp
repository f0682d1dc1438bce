#pragma once

// Adjacent vertex distinguishing edge and total colourings of multigraphs
// from arbitrary per-edge colour lists: randomized four-stage construction
// with resampling, graph reductions, exact oracles and format helpers.

#include "avd/colouring.hpp"
#include "avd/errors.hpp"
#include "avd/generate.hpp"
#include "avd/io.hpp"
#include "avd/list_assignment.hpp"
#include "avd/multigraph.hpp"
#include "avd/oracle.hpp"
#include "avd/pipeline.hpp"
#include "avd/profile.hpp"
#include "avd/reduction.hpp"
#include "avd/rng.hpp"
#include "avd/total.hpp"
