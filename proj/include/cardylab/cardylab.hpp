#pragma once

// Umbrella header for the crossing-probability laboratory.

#include "cardylab/beta.hpp"
#include "cardylab/cardy.hpp"
#include "cardylab/domain.hpp"
#include "cardylab/errors.hpp"
#include "cardylab/experiment.hpp"
#include "cardylab/geom.hpp"
#include "cardylab/lattice.hpp"
#include "cardylab/percolation.hpp"
#include "cardylab/rng.hpp"
#include "cardylab/stats.hpp"
