#pragma once

#include "otw/algorithms.hpp"
#include "otw/brute_force.hpp"
#include "otw/decomposition.hpp"
#include "otw/error.hpp"
#include "otw/instance.hpp"
#include "otw/metric.hpp"
#include "otw/modular_dp.hpp"
#include "otw/oracles.hpp"
#include "otw/rational.hpp"
