#ifndef DIGAPPROX_DIGAPPROX_HPP
#define DIGAPPROX_DIGAPPROX_HPP

#include "digapprox/approximation.hpp"
#include "digapprox/bounds.hpp"
#include "digapprox/combinatorics.hpp"
#include "digapprox/di_estimation.hpp"
#include "digapprox/errors.hpp"
#include "digapprox/evaluator.hpp"
#include "digapprox/graph_core.hpp"
#include "digapprox/greedy_order.hpp"
#include "digapprox/linear_model.hpp"
#include "digapprox/mwdst.hpp"
#include "digapprox/panel.hpp"
#include "digapprox/parallel.hpp"
#include "digapprox/serialization.hpp"
#include "digapprox/simulation.hpp"
#include "digapprox/topr.hpp"

#endif  // DIGAPPROX_DIGAPPROX_HPP
