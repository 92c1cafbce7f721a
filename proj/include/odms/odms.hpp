#pragma once

#include "odms/contour.hpp"
#include "odms/dataset_io.hpp"
#include "odms/errors.hpp"
#include "odms/eval.hpp"
#include "odms/featurize.hpp"
#include "odms/geometry.hpp"
#include "odms/grid.hpp"
#include "odms/mask_synth.hpp"
#include "odms/parallel.hpp"
#include "odms/pbm.hpp"
#include "odms/perturb.hpp"
#include "odms/raster.hpp"
#include "odms/rng.hpp"
