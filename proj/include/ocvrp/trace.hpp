#ifndef OCVRP_TRACE_HPP
#define OCVRP_TRACE_HPP

#include <vector>

namespace ocvrp {

// One convergence-trace sample. Both solvers emit one row per iteration
// (ACO colony iteration, GLS penalty cycle).
struct TraceRow {
    int iteration = 0;
    double iteration_best_km = 0.0;
    double global_best_km = 0.0;
};

using Trace = std::vector<TraceRow>;

}  // namespace ocvrp

#endif
