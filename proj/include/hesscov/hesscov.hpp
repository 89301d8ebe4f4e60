#pragma once

#include "hesscov/bordered_hessian.hpp"
#include "hesscov/collocation.hpp"
#include "hesscov/config.hpp"
#include "hesscov/covariance.hpp"
#include "hesscov/csv.hpp"
#include "hesscov/experiments.hpp"
#include "hesscov/io.hpp"
#include "hesscov/kkt_factorization.hpp"
#include "hesscov/log.hpp"
#include "hesscov/mcmc.hpp"
#include "hesscov/mesh.hpp"
#include "hesscov/models.hpp"
#include "hesscov/problem.hpp"
#include "hesscov/rng.hpp"
#include "hesscov/simulate.hpp"
#include "hesscov/solver.hpp"
#include "hesscov/types.hpp"
#include "hesscov/version.hpp"
