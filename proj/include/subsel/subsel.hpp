#pragma once

#include "subsel/baselines.hpp"
#include "subsel/csv.hpp"
#include "subsel/dataset.hpp"
#include "subsel/errors.hpp"
#include "subsel/experiments.hpp"
#include "subsel/generators.hpp"
#include "subsel/index_set.hpp"
#include "subsel/objectives.hpp"
#include "subsel/oracle.hpp"
#include "subsel/parallel.hpp"
#include "subsel/rng.hpp"
#include "subsel/selection.hpp"
#include "subsel/serialization.hpp"
#include "subsel/solver.hpp"
#include "subsel/verify.hpp"
