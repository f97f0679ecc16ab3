#pragma once

#include "gbm/cg.hpp"
#include "gbm/config.hpp"
#include "gbm/enclosing_circle.hpp"
#include "gbm/errors.hpp"
#include "gbm/io.hpp"
#include "gbm/mesh.hpp"
#include "gbm/metrics.hpp"
#include "gbm/model.hpp"
#include "gbm/run.hpp"
#include "gbm/scenario.hpp"
#include "gbm/solver.hpp"
#include "gbm/sparse.hpp"
#include "gbm/state.hpp"
