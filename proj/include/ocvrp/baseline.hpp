#ifndef OCVRP_BASELINE_HPP
#define OCVRP_BASELINE_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ocvrp/errors.hpp"
#include "ocvrp/local_search.hpp"
#include "ocvrp/model.hpp"
#include "ocvrp/trace.hpp"

namespace ocvrp {

enum class FirstSolutionStrategy {
    PathCheapestArc,
    ParallelCheapestInsertion,
    Savings,
    Automatic,
};

inline const char* strategy_name(FirstSolutionStrategy s) {
    switch (s) {
        case FirstSolutionStrategy::PathCheapestArc: return "path_cheapest_arc";
        case FirstSolutionStrategy::ParallelCheapestInsertion:
            return "parallel_cheapest_insertion";
        case FirstSolutionStrategy::Savings: return "savings";
        default: return "automatic";
    }
}

struct BaselineParams {
    FirstSolutionStrategy strategy = FirstSolutionStrategy::Automatic;
    double time_limit_s = 5.0;   // wall-clock stop rule
    long long move_budget = -1;  // >= 0 switches to deterministic budget mode
    double lambda_factor = 0.1;  // GLS lambda = factor * f(first optimum) / arc count
    int stall_cycles = 200;      // penalty cycles without true improvement before stopping
    std::uint64_t seed = 0;      // recorded in metadata; the pipeline itself is deterministic

    void validate() const {
        if (!(time_limit_s > 0.0)) throw Error("time_limit_s must be > 0");
        if (!(lambda_factor > 0.0)) throw Error("lambda_factor must be > 0");
        if (stall_cycles < 1) throw Error("stall_cycles must be >= 1");
    }
};

namespace detail {

inline Route make_route(int vehicle_id) {
    Route r;
    r.vehicle_id = vehicle_id;
    return r;
}

inline void require_feasible_totals(const Instance& inst) {
    if (inst.customer_count() > 0 && !inst.feasible_totals())
        throw Infeasible("total demand " + std::to_string(inst.total_demand()) +
                         " exceeds fleet capacity " + std::to_string(inst.total_capacity()));
}

}  // namespace detail

// Per vehicle in fleet order: start at the depot and repeatedly append the
// nearest unvisited customer the remaining capacity allows; move to the next
// vehicle when none fits.
inline Solution path_cheapest_arc(const Instance& inst) {
    detail::require_feasible_totals(inst);
    std::vector<char> unvisited(inst.size(), 1);
    int remaining = static_cast<int>(inst.customer_count());
    Solution sol;
    for (const auto& veh : inst.vehicles) {
        if (remaining == 0) break;
        Route route = detail::make_route(veh.id);
        double cap = veh.capacity;
        int current = 0;
        while (true) {
            int best = -1;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 1; c < static_cast<int>(inst.size()); ++c) {
                if (!unvisited[static_cast<std::size_t>(c)]) continue;
                if (inst.locations[static_cast<std::size_t>(c)].demand > cap) continue;
                const double d =
                    inst.distance(static_cast<std::size_t>(current), static_cast<std::size_t>(c));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (best < 0) break;
            route.stops.push_back(best);
            cap -= inst.locations[static_cast<std::size_t>(best)].demand;
            unvisited[static_cast<std::size_t>(best)] = 0;
            --remaining;
            current = best;
        }
        if (!route.stops.empty()) sol.routes.push_back(std::move(route));
    }
    if (remaining > 0)
        throw Infeasible(std::to_string(remaining) + " customers left after the fleet was used up");
    refresh_metrics(inst, sol);
    return sol;
}

// All routes grow in parallel. Each step inserts the globally cheapest
// feasible (customer, position) pair; insertion cost between consecutive
// path nodes u,v (u may be the depot) is d(u,j)+d(j,v)-d(u,v), appending
// after the last stop u costs d(u,j), and opening an empty vehicle costs
// d(0,j). Ties resolve by (cost, customer, vehicle, position).
inline Solution parallel_cheapest_insertion(const Instance& inst) {
    detail::require_feasible_totals(inst);
    const int n = static_cast<int>(inst.size());
    std::vector<char> unvisited(inst.size(), 1);
    int remaining = static_cast<int>(inst.customer_count());
    std::vector<Route> routes;
    std::vector<double> loads;
    for (const auto& veh : inst.vehicles) {
        routes.push_back(detail::make_route(veh.id));
        loads.push_back(0.0);
    }

    const auto d = [&](int i, int j) {
        return inst.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };

    while (remaining > 0) {
        double best_cost = std::numeric_limits<double>::infinity();
        int best_c = -1, best_v = -1, best_pos = -1;
        for (int c = 1; c < n; ++c) {
            if (!unvisited[static_cast<std::size_t>(c)]) continue;
            const double demand = inst.locations[static_cast<std::size_t>(c)].demand;
            for (int v = 0; v < static_cast<int>(routes.size()); ++v) {
                if (loads[static_cast<std::size_t>(v)] + demand >
                    inst.vehicles[static_cast<std::size_t>(v)].capacity)
                    continue;
                const auto& stops = routes[static_cast<std::size_t>(v)].stops;
                const int len = static_cast<int>(stops.size());
                for (int pos = 0; pos <= len; ++pos) {
                    const int u = pos == 0 ? 0 : stops[static_cast<std::size_t>(pos - 1)];
                    double cost;
                    if (pos == len)
                        cost = d(u, c);  // append (depot arc when the route is empty)
                    else
                        cost = d(u, c) + d(c, stops[static_cast<std::size_t>(pos)]) -
                               d(u, stops[static_cast<std::size_t>(pos)]);
                    if (std::tie(cost, c, v, pos) <
                        std::tie(best_cost, best_c, best_v, best_pos)) {
                        best_cost = cost;
                        best_c = c;
                        best_v = v;
                        best_pos = pos;
                    }
                }
            }
        }
        if (best_c < 0) throw Infeasible("no feasible insertion for the remaining customers");
        auto& stops = routes[static_cast<std::size_t>(best_v)].stops;
        stops.insert(stops.begin() + best_pos, best_c);
        loads[static_cast<std::size_t>(best_v)] +=
            inst.locations[static_cast<std::size_t>(best_c)].demand;
        unvisited[static_cast<std::size_t>(best_c)] = 0;
        --remaining;
    }

    Solution sol;
    for (auto& r : routes)
        if (!r.stops.empty()) sol.routes.push_back(std::move(r));
    refresh_metrics(inst, sol);
    return sol;
}

// Clarke & Wright adapted to open routes: saving for appending the route
// that starts at j after the route that ends at i is s(i,j) = d(0,j) - d(i,j)
// (the dropped depot arc minus the new joining arc). Merges are end-to-start
// only, applied in decreasing s > 0 under the largest vehicle capacity;
// merged routes are then matched to vehicles largest-load-first.
inline Solution savings_open(const Instance& inst) {
    detail::require_feasible_totals(inst);
    const int n = static_cast<int>(inst.size());
    if (inst.customer_count() > 0 && inst.vehicles.empty())
        throw Infeasible("no vehicles");

    double max_cap = 0.0;
    for (const auto& v : inst.vehicles) max_cap = std::max(max_cap, v.capacity);

    // Route fragments as stop lists; head[c]/tail[c] point at the fragment c
    // currently starts/ends, -1 otherwise.
    std::vector<std::vector<int>> frags;
    std::vector<double> frag_load;
    std::vector<int> head(inst.size(), -1), tail(inst.size(), -1);
    for (int c = 1; c < n; ++c) {
        head[static_cast<std::size_t>(c)] = tail[static_cast<std::size_t>(c)] =
            static_cast<int>(frags.size());
        frags.push_back({c});
        frag_load.push_back(inst.locations[static_cast<std::size_t>(c)].demand);
    }

    struct Saving {
        double s;
        int i, j;
    };
    std::vector<Saving> savings;
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
            if (i == j) continue;
            const double s = inst.distance(0, static_cast<std::size_t>(j)) -
                             inst.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            if (s > 0.0) savings.push_back({s, i, j});
        }
    std::sort(savings.begin(), savings.end(), [](const Saving& a, const Saving& b) {
        if (a.s != b.s) return a.s > b.s;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });

    for (const auto& sv : savings) {
        const int fi = tail[static_cast<std::size_t>(sv.i)];
        const int fj = head[static_cast<std::size_t>(sv.j)];
        if (fi < 0 || fj < 0 || fi == fj) continue;
        if (frag_load[static_cast<std::size_t>(fi)] + frag_load[static_cast<std::size_t>(fj)] >
            max_cap)
            continue;
        auto& a = frags[static_cast<std::size_t>(fi)];
        auto& b = frags[static_cast<std::size_t>(fj)];
        tail[static_cast<std::size_t>(a.back())] = -1;
        head[static_cast<std::size_t>(b.front())] = -1;
        a.insert(a.end(), b.begin(), b.end());
        tail[static_cast<std::size_t>(a.back())] = fi;
        frag_load[static_cast<std::size_t>(fi)] += frag_load[static_cast<std::size_t>(fj)];
        b.clear();
        frag_load[static_cast<std::size_t>(fj)] = 0.0;
    }

    std::vector<int> alive;
    for (std::size_t f = 0; f < frags.size(); ++f)
        if (!frags[f].empty()) alive.push_back(static_cast<int>(f));
    if (alive.size() > inst.vehicles.size())
        throw Infeasible("savings produced " + std::to_string(alive.size()) + " routes for " +
                         std::to_string(inst.vehicles.size()) + " vehicles");

    // Heaviest fragment takes the roomiest vehicle; both orders are stable so
    // the pairing is deterministic.
    std::stable_sort(alive.begin(), alive.end(), [&](int x, int y) {
        return frag_load[static_cast<std::size_t>(x)] > frag_load[static_cast<std::size_t>(y)];
    });
    std::vector<std::size_t> vorder(inst.vehicles.size());
    for (std::size_t v = 0; v < vorder.size(); ++v) vorder[v] = v;
    std::stable_sort(vorder.begin(), vorder.end(), [&](std::size_t x, std::size_t y) {
        return inst.vehicles[x].capacity > inst.vehicles[y].capacity;
    });

    Solution sol;
    for (std::size_t k = 0; k < alive.size(); ++k) {
        const auto f = static_cast<std::size_t>(alive[k]);
        const auto& veh = inst.vehicles[vorder[k]];
        if (frag_load[f] > veh.capacity)
            throw Infeasible("route load " + std::to_string(frag_load[f]) +
                             " exceeds capacity of vehicle " + std::to_string(veh.id));
        Route r = detail::make_route(veh.id);
        r.stops = frags[f];
        sol.routes.push_back(std::move(r));
    }
    refresh_metrics(inst, sol);
    return sol;
}

namespace detail {

struct ConstructionOutcome {
    bool ok = false;
    Solution solution;
    std::string error;
};

inline ConstructionOutcome try_construct(const Instance& inst, FirstSolutionStrategy s) {
    ConstructionOutcome out;
    try {
        switch (s) {
            case FirstSolutionStrategy::PathCheapestArc: out.solution = path_cheapest_arc(inst); break;
            case FirstSolutionStrategy::ParallelCheapestInsertion:
                out.solution = parallel_cheapest_insertion(inst);
                break;
            default: out.solution = savings_open(inst); break;
        }
        out.ok = true;
    } catch (const Infeasible& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace detail

// Runs the three concrete constructors and picks the least-distance result;
// ties go to the earlier enum value.
inline FirstSolutionStrategy automatic_select(const Instance& inst) {
    constexpr FirstSolutionStrategy order[] = {
        FirstSolutionStrategy::PathCheapestArc,
        FirstSolutionStrategy::ParallelCheapestInsertion,
        FirstSolutionStrategy::Savings,
    };
    FirstSolutionStrategy best = FirstSolutionStrategy::PathCheapestArc;
    double best_dist = std::numeric_limits<double>::infinity();
    bool any = false;
    std::string last_error = "all constructors infeasible";
    for (const auto s : order) {
        const auto out = detail::try_construct(inst, s);
        if (!out.ok) {
            last_error = out.error;
            continue;
        }
        if (!any || out.solution.total_distance < best_dist) {
            any = true;
            best = s;
            best_dist = out.solution.total_distance;
        }
    }
    if (!any) throw Infeasible(last_error);
    return best;
}

struct GlsState {
    std::size_t n = 0;
    std::vector<int> penalties;  // row-major n*n, only ever incremented
    double lambda = 0.0;

    GlsState() = default;
    explicit GlsState(std::size_t order) : n(order), penalties(order * order, 0) {}
    int penalty(int i, int j) const {
        return penalties[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
    }
    void bump(int i, int j) {
        ++penalties[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
    }
};

namespace detail {

struct RelocateMove {
    int from_route = -1, from_pos = -1;
    int to_route = -1, to_pos = -1;
    double delta = 0.0;
};

// Cost change of moving one customer out of its route and into another at a
// given position, under an arbitrary arc-cost callable (true or augmented).
template <typename CostFn>
double relocate_delta(CostFn&& cost, const std::vector<Route>& routes, int fr, int fp, int tr,
                      int tp) {
    const auto& from = routes[static_cast<std::size_t>(fr)].stops;
    const auto& to = routes[static_cast<std::size_t>(tr)].stops;
    const int c = from[static_cast<std::size_t>(fp)];
    const int prev = fp == 0 ? 0 : from[static_cast<std::size_t>(fp - 1)];
    double delta = -cost(prev, c);
    if (fp + 1 < static_cast<int>(from.size())) {
        const int next = from[static_cast<std::size_t>(fp + 1)];
        delta += cost(prev, next) - cost(c, next);
    }
    const int u = tp == 0 ? 0 : to[static_cast<std::size_t>(tp - 1)];
    if (tp < static_cast<int>(to.size())) {
        const int v = to[static_cast<std::size_t>(tp)];
        delta += cost(u, c) + cost(c, v) - cost(u, v);
    } else {
        delta += cost(u, c);
    }
    return delta;
}

struct SwapMove {
    int a_route = -1, a_pos = -1;
    int b_route = -1, b_pos = -1;
};

// Cost change of exchanging the customers at two positions of two different
// routes, under an arbitrary arc-cost callable (true or augmented).
template <typename CostFn>
double swap_delta(CostFn&& cost, const std::vector<Route>& routes, int ar, int ap, int br,
                  int bp) {
    const auto replace = [&](const std::vector<int>& stops, int p, int x) {
        const int c = stops[static_cast<std::size_t>(p)];
        const int prev = p == 0 ? 0 : stops[static_cast<std::size_t>(p - 1)];
        double d = cost(prev, x) - cost(prev, c);
        if (p + 1 < static_cast<int>(stops.size())) {
            const int next = stops[static_cast<std::size_t>(p + 1)];
            d += cost(x, next) - cost(c, next);
        }
        return d;
    };
    const auto& a = routes[static_cast<std::size_t>(ar)].stops;
    const auto& b = routes[static_cast<std::size_t>(br)].stops;
    return replace(a, ap, b[static_cast<std::size_t>(bp)]) +
           replace(b, bp, a[static_cast<std::size_t>(ap)]);
}

// Book-keeping for one GLS working copy: routes (possibly empty, one per
// vehicle not used by the initial solution is appended so relocate can open
// it) plus per-route loads.
struct GlsWork {
    std::vector<Route> routes;
    std::vector<double> loads;
    std::vector<double> capacities;
};

inline GlsWork make_work(const Instance& inst, const Solution& initial) {
    GlsWork w;
    std::vector<char> used_vehicle(inst.vehicles.size(), 0);
    for (const auto& r : initial.routes) {
        w.routes.push_back(r);
        w.loads.push_back(route_load(inst, r.stops));
        const Vehicle* veh = inst.vehicle_by_id(r.vehicle_id);
        if (!veh) throw ConsistencyError("unknown vehicle id " + std::to_string(r.vehicle_id));
        w.capacities.push_back(veh->capacity);
        for (std::size_t v = 0; v < inst.vehicles.size(); ++v)
            if (inst.vehicles[v].id == r.vehicle_id) used_vehicle[v] = 1;
    }
    for (std::size_t v = 0; v < inst.vehicles.size(); ++v) {
        if (used_vehicle[v]) continue;
        w.routes.push_back(make_route(inst.vehicles[v].id));
        w.loads.push_back(0.0);
        w.capacities.push_back(inst.vehicles[v].capacity);
    }
    return w;
}

inline Solution work_to_solution(const Instance& inst, const GlsWork& w) {
    Solution sol;
    for (const auto& r : w.routes)
        if (!r.stops.empty()) sol.routes.push_back(r);
    refresh_metrics(inst, sol);
    return sol;
}

inline double work_true_cost(const Instance& inst, const GlsWork& w) {
    double f = 0.0;
    for (const auto& r : w.routes)
        if (!r.stops.empty()) f += route_distance(inst, r.stops);
    return f;
}

}  // namespace detail

// Guided local search over the augmented objective
// g(s) = f(s) + lambda * sum of penalties on arcs used by s. Each cycle
// descends to a local optimum of g with best-improvement 2-opt, inter-route
// relocate, and inter-route swap (the exchange that still works when every
// vehicle is full), then increments the penalty of every maximal-utility
// arc (utility d_e / (1 + p_e)); lambda is calibrated on the first local
// optimum. Returns the best true-cost solution seen. Stops on the wall-clock
// limit, or on the move budget when one is set, or after stall_cycles
// penalty cycles without a true improvement.
inline Solution guided_local_search(const Instance& inst, const Solution& initial,
                                    const BaselineParams& params, Trace* trace = nullptr) {
    params.validate();
    const bool symmetric = inst.matrix.symmetric();
    const auto t0 = std::chrono::steady_clock::now();
    long long moves = 0;
    const bool budget_mode = params.move_budget >= 0;
    const auto out_of_time = [&] {
        if (budget_mode) return moves >= params.move_budget;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >=
               params.time_limit_s;
    };

    detail::GlsWork work = detail::make_work(inst, initial);
    GlsState state(inst.size());
    double f = detail::work_true_cost(inst, work);
    Solution best = initial;
    refresh_metrics(inst, best);
    double best_f = best.total_distance;

    const auto dist = [&](int i, int j) {
        return inst.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    };
    const auto aug = [&](int i, int j) {
        return dist(i, j) + state.lambda * state.penalty(i, j);
    };

    long long total_arcs = 0;
    for (const auto& r : work.routes) total_arcs += static_cast<long long>(r.stops.size());
    if (total_arcs == 0) return best;

    int cycle = 0;
    int stall = 0;
    bool lambda_set = false;
    while (!out_of_time() && stall < params.stall_cycles) {
        // (a) descend on g; track true f after every applied move
        bool improved_best = false;
        while (!out_of_time()) {
            double best_delta = -kImproveEps;
            int kind = -1;  // 0 = 2-opt, 1 = relocate, 2 = swap
            std::size_t best_route = 0;
            TwoOptMove best_two{};
            detail::RelocateMove best_rel{};
            detail::SwapMove best_swap{};
            for (std::size_t r = 0; r < work.routes.size(); ++r) {
                const auto m = best_two_opt_move(
                    aug, std::span<const int>(work.routes[r].stops), symmetric);
                if (m && m->delta < best_delta) {
                    best_delta = m->delta;
                    kind = 0;
                    best_route = r;
                    best_two = *m;
                }
            }
            for (int fr = 0; fr < static_cast<int>(work.routes.size()); ++fr) {
                const auto& from = work.routes[static_cast<std::size_t>(fr)].stops;
                for (int fp = 0; fp < static_cast<int>(from.size()); ++fp) {
                    const int c = from[static_cast<std::size_t>(fp)];
                    const double demand = inst.locations[static_cast<std::size_t>(c)].demand;
                    for (int tr = 0; tr < static_cast<int>(work.routes.size()); ++tr) {
                        if (tr == fr) continue;
                        if (work.loads[static_cast<std::size_t>(tr)] + demand >
                            work.capacities[static_cast<std::size_t>(tr)])
                            continue;
                        const int tlen =
                            static_cast<int>(work.routes[static_cast<std::size_t>(tr)].stops.size());
                        for (int tp = 0; tp <= tlen; ++tp) {
                            const double delta =
                                detail::relocate_delta(aug, work.routes, fr, fp, tr, tp);
                            if (delta < best_delta) {
                                best_delta = delta;
                                kind = 1;
                                best_rel = {fr, fp, tr, tp, delta};
                            }
                        }
                    }
                }
            }
            for (int ar = 0; ar < static_cast<int>(work.routes.size()); ++ar) {
                const auto& a = work.routes[static_cast<std::size_t>(ar)].stops;
                for (int br = ar + 1; br < static_cast<int>(work.routes.size()); ++br) {
                    const auto& b = work.routes[static_cast<std::size_t>(br)].stops;
                    for (int ap = 0; ap < static_cast<int>(a.size()); ++ap) {
                        const double da =
                            inst.locations[static_cast<std::size_t>(a[static_cast<std::size_t>(ap)])]
                                .demand;
                        for (int bp = 0; bp < static_cast<int>(b.size()); ++bp) {
                            const double db =
                                inst.locations[static_cast<std::size_t>(
                                                   b[static_cast<std::size_t>(bp)])]
                                    .demand;
                            if (work.loads[static_cast<std::size_t>(ar)] - da + db >
                                work.capacities[static_cast<std::size_t>(ar)])
                                continue;
                            if (work.loads[static_cast<std::size_t>(br)] - db + da >
                                work.capacities[static_cast<std::size_t>(br)])
                                continue;
                            const double delta =
                                detail::swap_delta(aug, work.routes, ar, ap, br, bp);
                            if (delta < best_delta) {
                                best_delta = delta;
                                kind = 2;
                                best_swap = {ar, ap, br, bp};
                            }
                        }
                    }
                }
            }
            if (kind < 0) break;
            if (kind == 0) {
                auto& stops = work.routes[best_route].stops;
                f += two_opt_delta(dist, stops, best_two.i, best_two.k, symmetric);
                apply_two_opt(stops, best_two.i, best_two.k);
            } else if (kind == 1) {
                f += detail::relocate_delta(dist, work.routes, best_rel.from_route,
                                            best_rel.from_pos, best_rel.to_route, best_rel.to_pos);
                auto& from = work.routes[static_cast<std::size_t>(best_rel.from_route)].stops;
                auto& to = work.routes[static_cast<std::size_t>(best_rel.to_route)].stops;
                const int c = from[static_cast<std::size_t>(best_rel.from_pos)];
                from.erase(from.begin() + best_rel.from_pos);
                to.insert(to.begin() + best_rel.to_pos, c);
                const double demand = inst.locations[static_cast<std::size_t>(c)].demand;
                work.loads[static_cast<std::size_t>(best_rel.from_route)] -= demand;
                work.loads[static_cast<std::size_t>(best_rel.to_route)] += demand;
            } else {
                f += detail::swap_delta(dist, work.routes, best_swap.a_route, best_swap.a_pos,
                                        best_swap.b_route, best_swap.b_pos);
                auto& a = work.routes[static_cast<std::size_t>(best_swap.a_route)].stops;
                auto& b = work.routes[static_cast<std::size_t>(best_swap.b_route)].stops;
                int& ca = a[static_cast<std::size_t>(best_swap.a_pos)];
                int& cb = b[static_cast<std::size_t>(best_swap.b_pos)];
                const double da = inst.locations[static_cast<std::size_t>(ca)].demand;
                const double db = inst.locations[static_cast<std::size_t>(cb)].demand;
                std::swap(ca, cb);
                work.loads[static_cast<std::size_t>(best_swap.a_route)] += db - da;
                work.loads[static_cast<std::size_t>(best_swap.b_route)] += da - db;
            }
            ++moves;
            if (f < best_f - kImproveEps) {
                best = detail::work_to_solution(inst, work);
                best_f = best.total_distance;
                f = best_f;  // resync the incremental tracker
                improved_best = true;
            }
        }
        f = detail::work_true_cost(inst, work);
        if (f < best_f - kImproveEps) {
            best = detail::work_to_solution(inst, work);
            best_f = best.total_distance;
            improved_best = true;
        }

        if (!lambda_set) {
            long long arcs = 0;
            for (const auto& r : work.routes) arcs += static_cast<long long>(r.stops.size());
            state.lambda = arcs > 0 ? params.lambda_factor * f / static_cast<double>(arcs) : 0.0;
            lambda_set = true;
        }

        // (b) penalize every maximal-utility arc of the current local optimum
        std::vector<std::pair<int, int>> arcs;
        for (const auto& r : work.routes) {
            int prev = 0;
            for (int s : r.stops) {
                int a = prev, b = s;
                if (symmetric && a > b) std::swap(a, b);
                arcs.emplace_back(a, b);
                prev = s;
            }
        }
        std::sort(arcs.begin(), arcs.end());
        arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
        double max_util = -1.0;
        for (const auto& [a, b] : arcs)
            max_util = std::max(max_util, dist(a, b) / (1.0 + state.penalty(a, b)));
        for (const auto& [a, b] : arcs) {
            if (dist(a, b) / (1.0 + state.penalty(a, b)) == max_util) {
                state.bump(a, b);
                if (symmetric && a != b) state.bump(b, a);
            }
        }

        ++cycle;
        stall = improved_best ? 0 : stall + 1;
        if (trace) trace->push_back({cycle, f, best_f});
    }
    return best;
}

inline nlohmann::json to_params_json(const BaselineParams& p) {
    return {{"strategy", strategy_name(p.strategy)},
            {"time_limit_s", p.time_limit_s},
            {"move_budget", p.move_budget},
            {"lambda_factor", p.lambda_factor},
            {"stall_cycles", p.stall_cycles}};
}

// Construction per the requested strategy, GLS refinement, empty routes
// dropped, metrics recomputed.
inline Solution solve_baseline(const Instance& inst, const BaselineParams& params,
                               Trace* trace = nullptr) {
    params.validate();
    FirstSolutionStrategy strategy = params.strategy;
    if (strategy == FirstSolutionStrategy::Automatic) strategy = automatic_select(inst);
    const auto first = detail::try_construct(inst, strategy);
    if (!first.ok) throw Infeasible(first.error);

    Solution sol = guided_local_search(inst, first.solution, params, trace);
    Solution out;
    for (const auto& r : sol.routes)
        if (!r.stops.empty()) out.routes.push_back(r);
    refresh_metrics(inst, out);
    out.meta.instance = inst.name;
    out.meta.solver = "baseline";
    out.meta.seed = params.seed;
    out.meta.params = to_params_json(params);
    return out;
}

}  // namespace ocvrp

#endif
