#ifndef OCVRP_LOCAL_SEARCH_HPP
#define OCVRP_LOCAL_SEARCH_HPP

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "ocvrp/model.hpp"

namespace ocvrp {

// Reversals must beat this margin to be applied.
inline constexpr double kImproveEps = 1e-9;

// Reversing stops[i..k] changes the open-route distance by exactly delta.
struct TwoOptMove {
    std::size_t i = 0;
    std::size_t k = 0;
    double delta = 0.0;
};

// The cost callable maps a directed location pair (from, to) to km; index 0
// is the depot. Both engines route through this so GLS can search on
// penalty-augmented costs with the same machinery.
template <typename Cost>
double open_path_cost(Cost&& cost, std::span<const int> stops) {
    if (stops.empty()) return 0.0;
    double d = cost(0, stops[0]);
    for (std::size_t t = 0; t + 1 < stops.size(); ++t) d += cost(stops[t], stops[t + 1]);
    return d;
}

// Exact cost change of reversing stops[i..k] on an open route. The depot arc
// participates when i == 0; there is no closing arc, so k at the last
// position removes nothing on the right. For asymmetric costs the reversed
// segment's internal arcs change direction and are re-summed exactly; the
// O(1) shortcut applies only when the cost is known symmetric.
template <typename Cost>
double two_opt_delta(Cost&& cost, std::span<const int> stops, std::size_t i, std::size_t k,
                     bool symmetric) {
    const int prev = i == 0 ? 0 : stops[i - 1];
    double delta = cost(prev, stops[k]) - cost(prev, stops[i]);
    if (k + 1 < stops.size())
        delta += cost(stops[i], stops[k + 1]) - cost(stops[k], stops[k + 1]);
    if (!symmetric) {
        for (std::size_t t = i; t < k; ++t)
            delta += cost(stops[t + 1], stops[t]) - cost(stops[t], stops[t + 1]);
    }
    return delta;
}

inline void apply_two_opt(std::vector<int>& stops, std::size_t i, std::size_t k) {
    std::reverse(stops.begin() + static_cast<std::ptrdiff_t>(i),
                 stops.begin() + static_cast<std::ptrdiff_t>(k) + 1);
}

// Best-improving reversal, or nullopt when none beats kImproveEps. Scan order
// (i asc, k asc) with strict comparison keeps ties deterministic.
template <typename Cost>
std::optional<TwoOptMove> best_two_opt_move(Cost&& cost, std::span<const int> stops,
                                            bool symmetric) {
    std::optional<TwoOptMove> best;
    for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
        for (std::size_t k = i + 1; k < stops.size(); ++k) {
            const double delta = two_opt_delta(cost, stops, i, k, symmetric);
            if (delta < -kImproveEps && (!best || delta < best->delta))
                best = TwoOptMove{i, k, delta};
        }
    }
    return best;
}

// Repeated best-improvement descent to a 2-opt local optimum.
template <typename Cost>
void two_opt_descend(Cost&& cost, std::vector<int>& stops, bool symmetric) {
    while (auto mv = best_two_opt_move(cost, std::span<const int>(stops), symmetric))
        apply_two_opt(stops, mv->i, mv->k);
}

inline std::vector<int> two_opt_route(const Instance& inst, std::vector<int> stops) {
    auto cost = [&inst](int a, int b) {
        return inst.distance(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    };
    two_opt_descend(cost, stops, inst.matrix.symmetric());
    return stops;
}

// 2-opt applied to each route independently. Intra-route moves cannot change
// loads; total distance never increases.
inline Solution improve_solution(const Instance& inst, Solution sol) {
    double total = 0.0;
    for (auto& route : sol.routes) {
        route.stops = two_opt_route(inst, std::move(route.stops));
        route.distance = route_distance(inst, route.stops);
        total += route.distance;
    }
    sol.total_distance = total;
    return sol;
}

}  // namespace ocvrp

#endif
