#pragma once

#include "robagg/aggregation.hpp"
#include "robagg/applications.hpp"
#include "robagg/belief_sets.hpp"
#include "robagg/criteria.hpp"
#include "robagg/divergences.hpp"
#include "robagg/error.hpp"
#include "robagg/simplex.hpp"
#include "robagg/tolerances.hpp"
