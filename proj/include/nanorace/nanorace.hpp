#pragma once

#include "nanorace/analysis.hpp"
#include "nanorace/arena.hpp"
#include "nanorace/augment.hpp"
#include "nanorace/batch.hpp"
#include "nanorace/dataset.hpp"
#include "nanorace/error.hpp"
#include "nanorace/geometry.hpp"
#include "nanorace/io.hpp"
#include "nanorace/json_config.hpp"
#include "nanorace/perception.hpp"
#include "nanorace/pgm.hpp"
#include "nanorace/policy.hpp"
#include "nanorace/rasters.hpp"
#include "nanorace/rng.hpp"
#include "nanorace/scoring.hpp"
#include "nanorace/vehicle.hpp"
