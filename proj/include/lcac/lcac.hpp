#pragma once

#include "lcac/common.hpp"
#include "lcac/linalg.hpp"
#include "lcac/parallel.hpp"
#include "lcac/ambient.hpp"
#include "lcac/subpoint.hpp"
#include "lcac/invariants.hpp"
#include "lcac/inequalities.hpp"
#include "lcac/immersion.hpp"
#include "lcac/scenario.hpp"
