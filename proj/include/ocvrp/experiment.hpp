#ifndef OCVRP_EXPERIMENT_HPP
#define OCVRP_EXPERIMENT_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ocvrp/aco.hpp"
#include "ocvrp/baseline.hpp"
#include "ocvrp/errors.hpp"
#include "ocvrp/model.hpp"
#include "ocvrp/trace.hpp"

namespace ocvrp {

// A solver with all of its setup already done. run_experiment times ONLY the
// solve() call, so anything done while constructing the PreparedSolve (trail
// allocation, heuristic caches, ...) stays outside the reported wall time.
class PreparedSolve {
public:
    virtual ~PreparedSolve() = default;
    virtual Solution solve(Trace* trace) = 0;
};

using SolveFactory =
    std::function<std::unique_ptr<PreparedSolve>(const Instance&, std::uint64_t seed)>;

namespace detail {

class PreparedAco final : public PreparedSolve {
public:
    PreparedAco(const Instance& inst, const AcoParams& params) : solver_(inst, params) {}
    Solution solve(Trace* trace) override { return solver_.run(trace); }

private:
    AcoSolver solver_;
};

class PreparedBaseline final : public PreparedSolve {
public:
    PreparedBaseline(const Instance& inst, const BaselineParams& params)
        : inst_(&inst), params_(params) {}
    Solution solve(Trace* trace) override { return solve_baseline(*inst_, params_, trace); }

private:
    const Instance* inst_;
    BaselineParams params_;
};

}  // namespace detail

inline SolveFactory aco_factory(const AcoParams& base) {
    return [base](const Instance& inst, std::uint64_t seed) {
        AcoParams p = base;
        p.seed = seed;
        return std::make_unique<detail::PreparedAco>(inst, p);
    };
}

inline SolveFactory baseline_factory(const BaselineParams& base) {
    return [base](const Instance& inst, std::uint64_t seed) {
        BaselineParams p = base;
        p.seed = seed;
        return std::make_unique<detail::PreparedBaseline>(inst, p);
    };
}

struct ExperimentSpec {
    std::string solver = "aco";  // "aco" | "baseline"
    AcoParams aco;
    BaselineParams baseline;
    std::string label;  // table column header; derived from solver when empty
    int runs = 10;
    std::uint64_t seed_base = 0;
    bool parallel = false;  // opt-in; timings are then flagged non-protocol

    void validate() const {
        if (runs < 1) throw Error("runs must be >= 1");
        if (solver != "aco" && solver != "baseline")
            throw Error("solver must be \"aco\" or \"baseline\", got \"" + solver + "\"");
    }
};

struct RunRecord {
    std::uint64_t seed = 0;
    double distance_km = 0.0;
    double wall_time_s = 0.0;
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  // sample std (n-1); 0 by convention when n == 1
};

inline Aggregate aggregate(const std::vector<double>& xs) {
    Aggregate a;
    if (xs.empty()) return a;
    double sum = 0.0;
    for (double x : xs) sum += x;
    a.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - a.mean) * (x - a.mean);
        a.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return a;
}

struct RunReport {
    std::string instance;
    std::string solver;
    std::string label;
    std::uint64_t seed_base = 0;
    int runs = 0;
    bool protocol_timing = true;  // false when runs executed in parallel
    std::vector<RunRecord> records;
    Aggregate distance_km;
    Aggregate time_s;
    std::vector<Solution> solutions;  // one per run, in run order
    std::vector<Trace> traces;        // one per run, in run order
};

// Runs `runs` seeded solves (seed = seed_base + r). Each solve is
// single-threaded; sequential execution is the timing-honest default.
inline RunReport run_experiment(const Instance& inst, const SolveFactory& make, int runs,
                                std::uint64_t seed_base, bool parallel = false,
                                const std::string& label = "") {
    if (runs < 1) throw Error("runs must be >= 1");
    RunReport report;
    report.instance = inst.name;
    report.label = label;
    report.seed_base = seed_base;
    report.runs = runs;
    report.protocol_timing = !parallel;
    report.records.resize(static_cast<std::size_t>(runs));
    report.solutions.resize(static_cast<std::size_t>(runs));
    report.traces.resize(static_cast<std::size_t>(runs));

    const auto one_run = [&](int r) {
        const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(r);
        try {
            auto prepared = make(inst, seed);  // untimed setup
            Trace trace;
            const auto t0 = std::chrono::steady_clock::now();
            Solution sol = prepared->solve(&trace);
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            sol.meta.wall_time_s = elapsed;
            report.records[static_cast<std::size_t>(r)] = {seed, sol.total_distance, elapsed};
            report.traces[static_cast<std::size_t>(r)] = std::move(trace);
            report.solutions[static_cast<std::size_t>(r)] = std::move(sol);
        } catch (const Infeasible& e) {
            throw Infeasible("run " + std::to_string(r) + " (seed " + std::to_string(seed) +
                             "): " + e.what());
        }
    };

    if (parallel) {
        std::vector<std::future<void>> futures;
        futures.reserve(static_cast<std::size_t>(runs));
        for (int r = 0; r < runs; ++r)
            futures.push_back(std::async(std::launch::async, one_run, r));
        for (auto& f : futures) f.get();
    } else {
        for (int r = 0; r < runs; ++r) one_run(r);
    }

    std::vector<double> dist, time;
    for (const auto& rec : report.records) {
        dist.push_back(rec.distance_km);
        time.push_back(rec.wall_time_s);
    }
    report.distance_km = aggregate(dist);
    report.time_s = aggregate(time);
    return report;
}

inline RunReport run_experiment(const Instance& inst, const ExperimentSpec& spec) {
    spec.validate();
    SolveFactory make;
    std::string label = spec.label;
    if (spec.solver == "aco") {
        make = aco_factory(spec.aco);
        if (label.empty()) label = std::string("aco ") + (spec.aco.q0 >= 0.5 ? "exploitation"
                                                                             : "exploration");
    } else {
        make = baseline_factory(spec.baseline);
        if (label.empty()) label = std::string("baseline ") + strategy_name(spec.baseline.strategy);
    }
    RunReport report = run_experiment(inst, make, spec.runs, spec.seed_base, spec.parallel, label);
    report.solver = spec.solver;
    return report;
}

}  // namespace ocvrp

#endif
