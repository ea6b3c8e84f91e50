#ifndef OCVRP_ACO_HPP
#define OCVRP_ACO_HPP

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "ocvrp/errors.hpp"
#include "ocvrp/local_search.hpp"
#include "ocvrp/model.hpp"
#include "ocvrp/trace.hpp"

namespace ocvrp {

// Trails never fall below this after an update; guards underflow under
// aggressive evaporation.
inline constexpr double kTauMin = 1e-12;

// Floor applied to arc length when forming eta = 1/d; duplicate coordinates
// make zero-length arcs legal.
inline constexpr double kMinArcKm = 1e-9;

struct AcoParams {
    double alpha = 2.5;      // pheromone influence exponent
    double beta = 1.0;       // heuristic influence exponent
    double rho = 0.1;        // evaporation rate, (0,1]
    double q0 = 0.9;         // greedy-choice probability, [0,1]
    int ants = 40;
    int iterations = 150;
    int stagnation_limit = 20;  // non-improving iterations before a trail reset
    int max_attempts = 50;      // construction attempts per ant
    double tau0 = 0.0;          // initial trail; <= 0 selects ants / L_nn
    std::uint64_t seed = 0;

    void validate() const {
        if (!(rho > 0.0 && rho <= 1.0)) throw Error("rho must be in (0,1]");
        if (!(q0 >= 0.0 && q0 <= 1.0)) throw Error("q0 must be in [0,1]");
        if (ants < 1) throw Error("ants must be >= 1");
        if (iterations < 1) throw Error("iterations must be >= 1");
        if (stagnation_limit < 1) throw Error("stagnation_limit must be >= 1");
        if (max_attempts < 1) throw Error("max_attempts must be >= 1");
        if (!std::isfinite(alpha) || !std::isfinite(beta))
            throw Error("alpha and beta must be finite");
    }
};

enum class AcoPreset { Exploitation, Exploration };

inline const char* preset_name(AcoPreset p) {
    return p == AcoPreset::Exploitation ? "exploitation" : "exploration";
}

inline AcoParams preset_params(AcoPreset p) {
    AcoParams a;
    if (p == AcoPreset::Exploitation) {
        a.alpha = 2.5;
        a.beta = 1.0;
        a.rho = 0.1;
        a.q0 = 0.9;
    } else {
        a.alpha = 0.2;
        a.beta = 3.0;
        a.rho = 0.7;
        a.q0 = 0.1;
    }
    a.iterations = 150;
    a.ants = 40;
    return a;
}

inline double heuristic_eta(const Instance& inst, int i, int j) {
    return 1.0 / std::max(inst.distance(static_cast<std::size_t>(i), static_cast<std::size_t>(j)),
                          kMinArcKm);
}

class PheromoneMatrix {
public:
    PheromoneMatrix() = default;
    PheromoneMatrix(std::size_t n, double tau0) : n_(n), values_(n * n, tau0) {}

    std::size_t order() const { return n_; }
    double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) { values_[i * n_ + j] = v; }
    void add(std::size_t i, std::size_t j, double dv) { values_[i * n_ + j] += dv; }
    void fill(double v) { std::fill(values_.begin(), values_.end(), v); }

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
};

// tau_ij <- max(kTauMin, (1 - rho) * tau_ij)
inline void evaporate(PheromoneMatrix& pher, double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) throw Error("rho must be in (0,1]");
    const double keep = 1.0 - rho;
    for (std::size_t i = 0; i < pher.order(); ++i)
        for (std::size_t j = 0; j < pher.order(); ++j)
            pher.set(i, j, std::max(kTauMin, keep * pher.at(i, j)));
}

// Directed arcs actually traversed by a solution: depot->first plus the
// internal legs of every route. There is no return arc.
template <typename Fn>
void for_each_arc(const Solution& sol, Fn&& fn) {
    for (const auto& route : sol.routes) {
        int prev = 0;
        for (int s : route.stops) {
            fn(prev, s);
            prev = s;
        }
    }
}

struct DepositEntry {
    const Solution* solution = nullptr;
    double cost_km = 0.0;  // C^k, the total distance of ant k's solution
};

// Ant System deposition: every ant adds 1/C^k to each arc it traversed.
// When the distance matrix is symmetric the mirror arc receives the same
// deposit so trails stay directionless.
inline void deposit(PheromoneMatrix& pher, std::span<const DepositEntry> ants, bool mirror) {
    for (const auto& entry : ants) {
        if (!(entry.cost_km > 0.0))
            throw InvalidCost("deposit requires positive solution cost, got " +
                              std::to_string(entry.cost_km));
        const double dv = 1.0 / entry.cost_km;
        for_each_arc(*entry.solution, [&](int i, int j) {
            pher.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j), dv);
            if (mirror) pher.add(static_cast<std::size_t>(j), static_cast<std::size_t>(i), dv);
        });
    }
}

// Construction-time view of one ant: where it is, how much capacity is left,
// and which customers still need service.
struct AntState {
    const Instance* instance = nullptr;
    int current = 0;
    double remaining_capacity = 0.0;
    std::vector<char> unvisited;  // indexed by location, depot entry unused
    int unvisited_count = 0;
    Solution routes_so_far;

    static AntState fresh(const Instance& inst) {
        AntState st;
        st.instance = &inst;
        st.current = 0;
        st.remaining_capacity = inst.vehicles.empty() ? 0.0 : inst.vehicles.front().capacity;
        st.unvisited.assign(inst.size(), 1);
        st.unvisited[0] = 0;
        st.unvisited_count = static_cast<int>(inst.customer_count());
        return st;
    }

    std::vector<int> feasible_customers() const {
        std::vector<int> out;
        const auto n = static_cast<int>(instance->size());
        for (int c = 1; c < n; ++c)
            if (unvisited[static_cast<std::size_t>(c)] &&
                instance->locations[static_cast<std::size_t>(c)].demand <= remaining_capacity)
                out.push_back(c);
        return out;
    }
};

struct ChooseResult {
    enum class Kind { Next, NewRoute, Complete };
    Kind kind = Kind::Complete;
    int customer = -1;
};

namespace detail {

// Pseudo-random proportional rule over a feasible candidate list. weight(c)
// is tau^alpha * eta^beta for the arc current->c; candidates arrive in
// ascending index order so argmax ties resolve to the lowest index.
template <typename WeightFn>
int select_candidate(std::span<const int> feasible, WeightFn&& weight, double q0,
                     std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    if (uni(rng) < q0) {
        int best = feasible[0];
        double best_w = weight(feasible[0]);
        for (std::size_t t = 1; t < feasible.size(); ++t) {
            const double w = weight(feasible[t]);
            if (w > best_w) {
                best_w = w;
                best = feasible[t];
            }
        }
        return best;
    }

    std::vector<double> weights(feasible.size());
    double total = 0.0;
    for (std::size_t t = 0; t < feasible.size(); ++t) {
        weights[t] = weight(feasible[t]);
        total += weights[t];
    }
    if (!(total > 0.0) || !std::isfinite(total)) return feasible[0];
#ifndef NDEBUG
    double norm = 0.0;
    for (double w : weights) norm += w / total;
    assert(std::fabs(norm - 1.0) <= 1e-12);
#endif
    const double x = uni(rng) * total;
    double acc = 0.0;
    for (std::size_t t = 0; t < feasible.size(); ++t) {
        acc += weights[t];
        if (x < acc) return feasible[t];
    }
    return feasible.back();
}

template <typename ArcWeightFn>
ChooseResult choose_next_impl(const AntState& st, ArcWeightFn&& weight, double q0,
                              std::mt19937_64& rng) {
    if (st.unvisited_count == 0) return {ChooseResult::Kind::Complete, -1};
    const std::vector<int> feasible = st.feasible_customers();
    if (feasible.empty()) return {ChooseResult::Kind::NewRoute, -1};
    const int cur = st.current;
    const int pick = select_candidate(
        std::span<const int>(feasible), [&](int c) { return weight(cur, c); }, q0, rng);
    return {ChooseResult::Kind::Next, pick};
}

}  // namespace detail

inline ChooseResult choose_next(const AntState& st, const PheromoneMatrix& pher,
                                const AcoParams& params, std::mt19937_64& rng) {
    return detail::choose_next_impl(
        st,
        [&](int i, int c) {
            return std::pow(pher.at(static_cast<std::size_t>(i), static_cast<std::size_t>(c)),
                            params.alpha) *
                   std::pow(heuristic_eta(*st.instance, i, c), params.beta);
        },
        params.q0, rng);
}

// The Eq. 2 distribution over the current feasible set; empty when the ant
// must open a new route or is done. Exposed for tests and diagnostics.
inline std::vector<std::pair<int, double>> choice_probabilities(const AntState& st,
                                                                const PheromoneMatrix& pher,
                                                                const AcoParams& params) {
    std::vector<std::pair<int, double>> out;
    const std::vector<int> feasible = st.feasible_customers();
    if (feasible.empty()) return out;
    double total = 0.0;
    for (int c : feasible) {
        const double w =
            std::pow(pher.at(static_cast<std::size_t>(st.current), static_cast<std::size_t>(c)),
                     params.alpha) *
            std::pow(heuristic_eta(*st.instance, st.current, c), params.beta);
        out.emplace_back(c, w);
        total += w;
    }
    for (auto& [c, w] : out) w = total > 0.0 ? w / total : 1.0 / double(out.size());
    return out;
}

namespace detail {

template <typename ArcWeightFn>
Solution construct_solution_impl(const Instance& inst, ArcWeightFn&& weight,
                                 const AcoParams& params, std::mt19937_64& rng) {
    if (inst.customer_count() > 0 && !inst.feasible_totals())
        throw InfeasibleConstruction("total demand " + std::to_string(inst.total_demand()) +
                                     " exceeds fleet capacity " +
                                     std::to_string(inst.total_capacity()));

    const int attempts = std::max(1, params.max_attempts);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        AntState st = AntState::fresh(inst);
        std::size_t vcur = 0;
        Route route;
        bool failed = inst.vehicles.empty() && st.unvisited_count > 0;
        if (!failed) route.vehicle_id = inst.vehicles.empty() ? 0 : inst.vehicles[0].id;

        while (!failed) {
            const ChooseResult res = choose_next_impl(st, weight, params.q0, rng);
            if (res.kind == ChooseResult::Kind::Complete) {
                if (!route.stops.empty()) st.routes_so_far.routes.push_back(std::move(route));
                Solution sol = std::move(st.routes_so_far);
                refresh_metrics(inst, sol);
                return sol;
            }
            if (res.kind == ChooseResult::Kind::Next) {
                const int c = res.customer;
                route.stops.push_back(c);
                st.remaining_capacity -= inst.locations[static_cast<std::size_t>(c)].demand;
                st.unvisited[static_cast<std::size_t>(c)] = 0;
                --st.unvisited_count;
                st.current = c;
                continue;
            }
            // NewRoute: close the current route (if it ever left the depot)
            // and move on to the next vehicle in fleet order.
            if (!route.stops.empty()) st.routes_so_far.routes.push_back(std::move(route));
            ++vcur;
            if (vcur >= inst.vehicles.size()) {
                failed = true;
                break;
            }
            route = Route{};
            route.vehicle_id = inst.vehicles[vcur].id;
            st.current = 0;
            st.remaining_capacity = inst.vehicles[vcur].capacity;
        }
    }
    throw InfeasibleConstruction("no feasible construction after " + std::to_string(attempts) +
                                 " attempts");
}

}  // namespace detail

inline Solution construct_solution(const Instance& inst, const PheromoneMatrix& pher,
                                   const AcoParams& params, std::mt19937_64& rng) {
    return detail::construct_solution_impl(
        inst,
        [&](int i, int c) {
            return std::pow(pher.at(static_cast<std::size_t>(i), static_cast<std::size_t>(c)),
                            params.alpha) *
                   std::pow(heuristic_eta(inst, i, c), params.beta);
        },
        params, rng);
}

// Length of the greedy nearest-feasible-neighbor open solution, used to
// scale tau0. Falls back to star legs for customers the greedy chain cannot
// place, so the result is always defined for feasible-looking instances.
inline double nearest_neighbor_length(const Instance& inst) {
    std::vector<char> unvisited(inst.size(), 1);
    int remaining = static_cast<int>(inst.customer_count());
    double length = 0.0;
    for (const auto& veh : inst.vehicles) {
        if (remaining == 0) break;
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
            length += best_d;
            cap -= inst.locations[static_cast<std::size_t>(best)].demand;
            unvisited[static_cast<std::size_t>(best)] = 0;
            --remaining;
            current = best;
        }
    }
    for (int c = 1; c < static_cast<int>(inst.size()); ++c)
        if (unvisited[static_cast<std::size_t>(c)])
            length += inst.distance(0, static_cast<std::size_t>(c));
    return length;
}

// Classic Ant System initialization: tau0 = m / L_nn. Sized so that one
// iteration's deposit (1/C, C close to L_nn) shifts trails gradually instead
// of drowning the initial level on the first lap, which would collapse the
// colony onto its first champion.
inline double default_tau0(const Instance& inst, int ants) {
    const double l_nn = nearest_neighbor_length(inst);
    if (!(l_nn > 0.0)) return 1.0;
    return static_cast<double>(ants < 1 ? 1 : ants) / l_nn;
}

inline nlohmann::json to_params_json(const AcoParams& p) {
    return {{"alpha", p.alpha},
            {"beta", p.beta},
            {"rho", p.rho},
            {"q0", p.q0},
            {"ants", p.ants},
            {"iterations", p.iterations},
            {"stagnation_limit", p.stagnation_limit},
            {"max_attempts", p.max_attempts},
            {"tau0", p.tau0}};
}

// One colony. step() runs a full iteration: construct `ants` solutions with
// the current trails, 2-opt each route, evaporate, then let the iteration
// champion alone lay new trail. After stagnation_limit iterations without a
// global-best
// improvement all trails are reset to tau0 except the arcs of the global
// best, which keep their current value. Deterministic for a fixed seed;
// strictly single-threaded.
class AcoSolver {
public:
    AcoSolver(const Instance& inst, AcoParams params) : inst_(&inst), params_(params) {
        params_.validate();
        if (params_.tau0 <= 0.0) params_.tau0 = default_tau0(inst, params_.ants);
        rng_.seed(params_.seed);
        const std::size_t n = inst.size();
        pher_ = PheromoneMatrix(n, params_.tau0);
        eta_beta_.resize(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j)
                eta_beta_[i * n + j] = std::pow(
                    heuristic_eta(inst, static_cast<int>(i), static_cast<int>(j)), params_.beta);
        weights_.resize(n * n, 0.0);
    }

    void step() {
        const std::size_t n = inst_->size();
        ++iteration_;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 1; j < n; ++j)
                weights_[i * n + j] = std::pow(pher_.at(i, j), params_.alpha) * eta_beta_[i * n + j];
        auto weight = [this, n](int i, int j) {
            return weights_[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)];
        };

        std::vector<Solution> colony;
        colony.reserve(static_cast<std::size_t>(params_.ants));
        double iter_best = std::numeric_limits<double>::infinity();
        std::size_t iter_best_idx = 0;
        for (int a = 0; a < params_.ants; ++a) {
            Solution s = detail::construct_solution_impl(*inst_, weight, params_, rng_);
            s = improve_solution(*inst_, std::move(s));
            if (s.total_distance < iter_best) {
                iter_best = s.total_distance;
                iter_best_idx = colony.size();
            }
            colony.push_back(std::move(s));
        }

        evaporate(pher_, params_.rho);
        // iteration-best deposit: only the champion reinforces its arcs, so
        // trails track the best structures found rather than colony consensus
        const DepositEntry entry{&colony[iter_best_idx], iter_best};
        deposit(pher_, {&entry, 1}, inst_->matrix.symmetric());

        if (!has_best_ || iter_best < best_.total_distance) {
            best_ = colony[iter_best_idx];
            has_best_ = true;
            stagnant_ = 0;
        } else {
            ++stagnant_;
        }
        if (stagnant_ >= params_.stagnation_limit) {
            reset_trails_keeping_best();
            stagnant_ = 0;
        }
        last_iteration_best_ = iter_best;
    }

    Solution run(Trace* trace = nullptr) {
        for (int it = 0; it < params_.iterations; ++it) {
            step();
            if (trace)
                trace->push_back({iteration_, last_iteration_best_, best_.total_distance});
        }
        Solution out = best_;
        out.meta.instance = inst_->name;
        out.meta.solver = "aco";
        out.meta.seed = params_.seed;
        out.meta.params = to_params_json(params_);
        return out;
    }

    const PheromoneMatrix& pheromone() const { return pher_; }
    const AcoParams& params() const { return params_; }
    int iteration() const { return iteration_; }
    int stagnant_iterations() const { return stagnant_; }
    bool has_best() const { return has_best_; }
    const Solution& global_best() const { return best_; }
    double last_iteration_best() const { return last_iteration_best_; }

private:
    void reset_trails_keeping_best() {
        std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> keep;
        const bool mirror = inst_->matrix.symmetric();
        for_each_arc(best_, [&](int i, int j) {
            const auto a = static_cast<std::size_t>(i);
            const auto b = static_cast<std::size_t>(j);
            keep.push_back({{a, b}, pher_.at(a, b)});
            if (mirror) keep.push_back({{b, a}, pher_.at(b, a)});
        });
        pher_.fill(params_.tau0);
        for (const auto& [arc, v] : keep) pher_.set(arc.first, arc.second, v);
    }

    const Instance* inst_;
    AcoParams params_;
    std::mt19937_64 rng_;
    PheromoneMatrix pher_;
    std::vector<double> eta_beta_;
    std::vector<double> weights_;
    Solution best_;
    bool has_best_ = false;
    int iteration_ = 0;
    int stagnant_ = 0;
    double last_iteration_best_ = 0.0;
};

inline Solution solve_aco(const Instance& inst, const AcoParams& params, Trace* trace = nullptr) {
    AcoSolver solver(inst, params);
    return solver.run(trace);
}

}  // namespace ocvrp

#endif
