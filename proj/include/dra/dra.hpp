#pragma once

#include "dra/annulus_measure.hpp"
#include "dra/degree_rips.hpp"
#include "dra/errors.hpp"
#include "dra/geom_disc.hpp"
#include "dra/grid.hpp"
#include "dra/homotopy_curves.hpp"
#include "dra/io.hpp"
#include "dra/sampler.hpp"
