#ifndef OCVRP_OCVRP_HPP
#define OCVRP_OCVRP_HPP

#include "ocvrp/aco.hpp"
#include "ocvrp/baseline.hpp"
#include "ocvrp/errors.hpp"
#include "ocvrp/experiment.hpp"
#include "ocvrp/exports.hpp"
#include "ocvrp/instance_io.hpp"
#include "ocvrp/json_util.hpp"
#include "ocvrp/local_search.hpp"
#include "ocvrp/matrix.hpp"
#include "ocvrp/model.hpp"
#include "ocvrp/trace.hpp"

#endif
