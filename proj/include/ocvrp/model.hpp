#ifndef OCVRP_MODEL_HPP
#define OCVRP_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ocvrp/errors.hpp"
#include "ocvrp/matrix.hpp"

namespace ocvrp {

// Carried through from input files for round-tripping; never optimized against.
struct TimeWindow {
    double start_s = 0.0;
    double end_s = 0.0;
    bool operator==(const TimeWindow&) const = default;
};

struct Location {
    int id = 0;
    double lat = 0.0;
    double lon = 0.0;
    double demand = 0.0;
    std::optional<TimeWindow> time_window;

    GeoPoint point() const { return {lat, lon}; }
    bool operator==(const Location&) const = default;
};

struct Vehicle {
    int id = 0;
    double capacity = 0.0;
    std::optional<double> fixed_cost;        // carried, unused
    std::optional<TimeWindow> time_window;   // carried, unused
    bool operator==(const Vehicle&) const = default;
};

// Locations are indexed by matrix position; index 0 is always the depot.
struct Instance {
    std::string name;
    std::vector<Location> locations;
    std::vector<Vehicle> vehicles;
    DistanceMatrix matrix;
    std::string matrix_file;  // as written in the instance JSON, empty if the matrix was built

    std::size_t size() const { return locations.size(); }
    std::size_t customer_count() const { return locations.empty() ? 0 : locations.size() - 1; }
    double distance(std::size_t i, std::size_t j) const { return matrix.at(i, j); }

    double total_demand() const {
        double s = 0.0;
        for (const auto& l : locations) s += l.demand;
        return s;
    }
    double total_capacity() const {
        double s = 0.0;
        for (const auto& v : vehicles) s += v.capacity;
        return s;
    }
    bool feasible_totals() const { return total_capacity() >= total_demand(); }

    const Vehicle* vehicle_by_id(int id) const {
        for (const auto& v : vehicles)
            if (v.id == id) return &v;
        return nullptr;
    }
};

// An open route: starts at the depot, ends at its last customer. Stops hold
// customer indices (1..n-1); the depot never appears.
struct Route {
    int vehicle_id = 0;
    std::vector<int> stops;
    double load = 0.0;
    double distance = 0.0;
};

struct SolveMeta {
    std::string instance;
    std::string solver;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
};

struct Solution {
    std::vector<Route> routes;
    double total_distance = 0.0;
    SolveMeta meta;
};

inline DistanceMatrix build_matrix(const std::vector<Location>& locations, DistanceMode mode) {
    std::vector<GeoPoint> pts;
    pts.reserve(locations.size());
    for (const auto& l : locations) pts.push_back(l.point());
    return build_matrix(std::span<const GeoPoint>(pts), mode);
}

// Open-route length: depot -> first stop -> ... -> last stop, no return arc.
inline double route_distance(const Instance& inst, std::span<const int> stops) {
    const auto n = static_cast<int>(inst.size());
    if (stops.empty()) throw InvalidIndex("route has no stops");
    for (int s : stops)
        if (s < 1 || s >= n)
            throw InvalidIndex("customer index " + std::to_string(s) + " out of range 1.." +
                               std::to_string(n - 1));
    double d = inst.distance(0, static_cast<std::size_t>(stops[0]));
    for (std::size_t i = 0; i + 1 < stops.size(); ++i)
        d += inst.distance(static_cast<std::size_t>(stops[i]),
                           static_cast<std::size_t>(stops[i + 1]));
    return d;
}

inline double route_load(const Instance& inst, std::span<const int> stops) {
    double load = 0.0;
    for (int s : stops) load += inst.locations[static_cast<std::size_t>(s)].demand;
    return load;
}

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline bool close_rel(double a, double b, double rel) {
    return std::fabs(a - b) <= rel * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace detail

// Checks every Route and Solution invariant; recomputes loads and distances
// and compares against the stored values within 1e-9 relative. Violations are
// returned as data, never thrown. The 100%-utilization regime is reported as
// a warning unless strict_utilization upgrades it to a violation.
inline ValidationReport validate_solution(const Instance& inst, const Solution& sol,
                                          bool strict_utilization = false) {
    ValidationReport rep;
    const auto n = static_cast<int>(inst.size());
    std::vector<int> served(inst.size(), 0);
    std::vector<int> vehicle_uses;
    double total = 0.0;

    for (std::size_t r = 0; r < sol.routes.size(); ++r) {
        const Route& route = sol.routes[r];
        const std::string tag = "route " + std::to_string(r);

        if (route.stops.empty()) {
            rep.violations.push_back(tag + " is empty");
            continue;
        }
        bool indices_ok = true;
        std::vector<int> seen_in_route(inst.size(), 0);
        for (int s : route.stops) {
            if (s < 1 || s >= n) {
                rep.violations.push_back(tag + ": stop index " + std::to_string(s) +
                                         " out of range");
                indices_ok = false;
                continue;
            }
            if (++seen_in_route[static_cast<std::size_t>(s)] == 2)
                rep.violations.push_back(tag + ": customer " + std::to_string(s) +
                                         " repeated within route");
            ++served[static_cast<std::size_t>(s)];
        }

        const Vehicle* veh = inst.vehicle_by_id(route.vehicle_id);
        if (!veh) {
            rep.violations.push_back(tag + ": unknown vehicle " +
                                     std::to_string(route.vehicle_id));
        } else {
            for (int u : vehicle_uses)
                if (u == route.vehicle_id)
                    rep.violations.push_back("vehicle " + std::to_string(route.vehicle_id) +
                                             " used by more than one route");
            vehicle_uses.push_back(route.vehicle_id);
        }

        if (!indices_ok) continue;

        const double load = route_load(inst, route.stops);
        if (!detail::close_rel(load, route.load, 1e-9))
            rep.violations.push_back(tag + ": stored load " + std::to_string(route.load) +
                                     " != computed " + std::to_string(load));
        if (veh && load > veh->capacity + 1e-9 * std::max(1.0, veh->capacity))
            rep.violations.push_back(tag + ": capacity exceeded (load " + std::to_string(load) +
                                     " > capacity " + std::to_string(veh->capacity) + ")");

        const double dist = route_distance(inst, route.stops);
        if (!detail::close_rel(dist, route.distance, 1e-9))
            rep.violations.push_back(tag + ": stored distance " + std::to_string(route.distance) +
                                     " != computed " + std::to_string(dist));
        total += dist;
    }

    for (int c = 1; c < n; ++c) {
        if (served[static_cast<std::size_t>(c)] == 0)
            rep.violations.push_back("customer " + std::to_string(c) + " unserved");
        else if (served[static_cast<std::size_t>(c)] > 1)
            rep.violations.push_back("customer " + std::to_string(c) + " served " +
                                     std::to_string(served[static_cast<std::size_t>(c)]) +
                                     " times");
    }

    if (!detail::close_rel(total, sol.total_distance, 1e-9))
        rep.violations.push_back("total_distance " + std::to_string(sol.total_distance) +
                                 " != sum of route distances " + std::to_string(total));

    const double cap = inst.total_capacity();
    if (cap > 0.0) {
        double served_load = 0.0;
        for (const auto& route : sol.routes) served_load += route.load;
        const double fleet_util = served_load / cap;
        if (fleet_util < 1.0 - 1e-9) {
            std::string msg = "fleet utilization " + std::to_string(fleet_util) +
                              " below 100% capacity utilization";
            if (strict_utilization)
                rep.violations.push_back(msg);
            else
                rep.warnings.push_back(msg);
        }
    }
    return rep;
}

struct UtilizationReport {
    std::vector<double> per_route;  // load/capacity, one entry per route
    double fleet = 0.0;             // sum(loads) / sum(all fleet capacities)
};

inline UtilizationReport utilization(const Instance& inst, const Solution& sol) {
    UtilizationReport rep;
    double loads = 0.0;
    for (const auto& route : sol.routes) {
        const Vehicle* veh = inst.vehicle_by_id(route.vehicle_id);
        const double cap = veh ? veh->capacity : 0.0;
        rep.per_route.push_back(cap > 0.0 ? route.load / cap : 0.0);
        loads += route.load;
    }
    const double cap = inst.total_capacity();
    rep.fleet = cap > 0.0 ? loads / cap : 0.0;
    return rep;
}

// Recompute per-route loads/distances and the total from stops.
inline void refresh_metrics(const Instance& inst, Solution& sol) {
    double total = 0.0;
    for (auto& route : sol.routes) {
        route.load = route_load(inst, route.stops);
        route.distance = route_distance(inst, route.stops);
        total += route.distance;
    }
    sol.total_distance = total;
}

}  // namespace ocvrp

#endif
