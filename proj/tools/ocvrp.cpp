// ocvrp — solve/bench/gen command-line front end for the OCVRP library.
//
// Exit codes: 0 success, 1 infeasible instance or model, 2 format/usage error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ocvrp/ocvrp.hpp"

namespace {

struct SolveOptions {
    std::string instance;
    std::string solver = "aco";
    std::string preset = "exploitation";
    std::string strategy = "auto";
    bool preset_given = false;
    bool strategy_given = false;
    double time_limit = 5.0;
    long long budget_moves = -1;
    bool time_given = false;
    bool budget_given = false;
    std::uint64_t seed = 0;
    std::string out;
    std::string trace_path;
    std::string geojson_path;
};

struct BenchOptions {
    SolveOptions solve;  // instance/solver/params reused
    int runs = 10;
    std::uint64_t seed_base = 0;
    std::string out;
    std::string table;
    bool parallel = false;
};

struct GenOptions {
    int n = 50;
    int vehicles = 5;
    double capacity = 10.0;
    int clusters = 0;
    double spread = 2.0;
    std::vector<double> bbox;  // LAT1,LON1,LAT2,LON2
    std::uint64_t seed = 0;
    std::string out;
    std::string matrix;
};

void add_solver_flags(CLI::App* cmd, SolveOptions& o) {
    cmd->add_option("--instance", o.instance, "Instance JSON file")->required();
    cmd->add_option("--solver", o.solver, "Solver: aco or baseline")
        ->check(CLI::IsMember({"aco", "baseline"}));
    auto* preset = cmd->add_option("--preset", o.preset, "ACO preset: exploitation or exploration")
                       ->check(CLI::IsMember({"exploitation", "exploration"}));
    auto* strategy =
        cmd->add_option("--strategy", o.strategy,
                        "Baseline construction: pca, pci, savings or auto")
            ->check(CLI::IsMember({"pca", "pci", "savings", "auto"}));
    preset->excludes(strategy);
    auto* tl = cmd->add_option("--time-limit", o.time_limit, "Baseline wall-clock limit, seconds");
    auto* bm = cmd->add_option("--budget-moves", o.budget_moves,
                               "Baseline deterministic move budget (disables the wall clock)");
    tl->excludes(bm);
    cmd->final_callback([&o, preset, strategy, tl, bm] {
        o.preset_given = preset->count() > 0;
        o.strategy_given = strategy->count() > 0;
        o.time_given = tl->count() > 0;
        o.budget_given = bm->count() > 0;
    });
}

ocvrp::AcoParams aco_params_for(const SolveOptions& o) {
    using ocvrp::AcoPreset;
    const auto preset =
        o.preset == "exploration" ? AcoPreset::Exploration : AcoPreset::Exploitation;
    ocvrp::AcoParams params = ocvrp::preset_params(preset);
    params.seed = o.seed;
    return params;
}

ocvrp::BaselineParams baseline_params_for(const SolveOptions& o) {
    using ocvrp::FirstSolutionStrategy;
    ocvrp::BaselineParams params;
    if (o.strategy == "pca")
        params.strategy = FirstSolutionStrategy::PathCheapestArc;
    else if (o.strategy == "pci")
        params.strategy = FirstSolutionStrategy::ParallelCheapestInsertion;
    else if (o.strategy == "savings")
        params.strategy = FirstSolutionStrategy::Savings;
    else
        params.strategy = FirstSolutionStrategy::Automatic;
    params.time_limit_s = o.time_limit;
    params.move_budget = o.budget_moves;
    params.seed = o.seed;
    return params;
}

// Flags that only make sense for the other solver are usage errors.
void check_solver_flags(const SolveOptions& o) {
    if (o.solver == "aco" && o.strategy_given)
        throw ocvrp::FormatError("--strategy applies to --solver baseline");
    if (o.solver == "aco" && (o.time_given || o.budget_given))
        throw ocvrp::FormatError("--time-limit/--budget-moves apply to --solver baseline");
    if (o.solver == "baseline" && o.preset_given)
        throw ocvrp::FormatError("--preset applies to --solver aco");
}

ocvrp::Instance load_with_warnings(const std::string& path) {
    std::vector<std::string> warnings;
    ocvrp::Instance inst = ocvrp::load_instance(path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return inst;
}

ocvrp::ExperimentSpec spec_for(const SolveOptions& o) {
    ocvrp::ExperimentSpec spec;
    spec.solver = o.solver;
    if (o.solver == "aco") {
        spec.aco = aco_params_for(o);
        spec.label = "aco " + o.preset;
    } else {
        spec.baseline = baseline_params_for(o);
        spec.label = "baseline " + o.strategy;
    }
    return spec;
}

int cmd_solve(const SolveOptions& o) {
    check_solver_flags(o);
    const ocvrp::Instance inst = load_with_warnings(o.instance);
    ocvrp::ExperimentSpec spec = spec_for(o);
    spec.runs = 1;
    spec.seed_base = o.seed;
    const ocvrp::RunReport report = ocvrp::run_experiment(inst, spec);
    const ocvrp::Solution& sol = report.solutions.front();

    const auto check = ocvrp::validate_solution(inst, sol);
    for (const auto& w : check.warnings) std::cerr << "warning: " << w << "\n";
    if (!check.ok()) {
        for (const auto& v : check.violations) std::cerr << "violation: " << v << "\n";
        throw ocvrp::ConsistencyError("solver produced an invalid solution");
    }

    ocvrp::export_solution(sol, o.out);
    if (!o.trace_path.empty()) ocvrp::export_trace(report.traces.front(), o.trace_path);
    if (!o.geojson_path.empty()) ocvrp::export_geojson(inst, sol, o.geojson_path);
    std::printf("%s: %zu routes, total %.3f km, %.3f s (seed %llu)\n", sol.meta.solver.c_str(),
                sol.routes.size(), sol.total_distance, sol.meta.wall_time_s,
                static_cast<unsigned long long>(sol.meta.seed));
    return 0;
}

int cmd_bench(const BenchOptions& b) {
    check_solver_flags(b.solve);
    const ocvrp::Instance inst = load_with_warnings(b.solve.instance);
    ocvrp::ExperimentSpec spec = spec_for(b.solve);
    spec.runs = b.runs;
    spec.seed_base = b.seed_base;
    spec.parallel = b.parallel;
    const ocvrp::RunReport report = ocvrp::run_experiment(inst, spec);
    ocvrp::export_report(report, b.out);
    const std::string table = ocvrp::format_table({report});
    if (!b.table.empty()) ocvrp::export_table({report}, b.table);
    std::cout << table;
    if (!report.protocol_timing)
        std::cerr << "warning: parallel runs; timings are not protocol-grade\n";
    return 0;
}

int cmd_gen(const GenOptions& g) {
    ocvrp::GeneratorSpec spec;
    spec.n = g.n;
    spec.vehicles = g.vehicles;
    spec.capacity = g.capacity;
    spec.clusters = g.clusters;
    spec.spread_km = g.spread;
    if (g.bbox.size() != 4)
        throw ocvrp::FormatError("--bbox expects LAT1,LON1,LAT2,LON2");
    spec.lat1 = g.bbox[0];
    spec.lon1 = g.bbox[1];
    spec.lat2 = g.bbox[2];
    spec.lon2 = g.bbox[3];
    spec.seed = g.seed;

    ocvrp::Instance inst = ocvrp::generate_instance(spec);
    const std::filesystem::path out_path(g.out);
    if (!g.matrix.empty()) {
        const std::filesystem::path mpath(g.matrix);
        ocvrp::save_matrix(inst.matrix, mpath);
        std::error_code ec;
        const auto rel = std::filesystem::relative(
            mpath, out_path.has_parent_path() ? out_path.parent_path() : ".", ec);
        inst.matrix_file = ec ? g.matrix : rel.string();
    }
    ocvrp::save_instance(inst, out_path);
    std::printf("%s: %zu locations, %zu vehicles -> %s\n", inst.name.c_str(),
                inst.locations.size(), inst.vehicles.size(), g.out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Open CVRP solver and benchmark toolkit"};
    app.require_subcommand(1);

    SolveOptions so;
    auto* solve = app.add_subcommand("solve", "Solve one instance with a fixed seed");
    add_solver_flags(solve, so);
    solve->add_option("--seed", so.seed, "RNG seed");
    solve->add_option("--out", so.out, "Solution JSON output path")->required();
    solve->add_option("--trace", so.trace_path, "Convergence trace CSV output path");
    solve->add_option("--geojson", so.geojson_path, "GeoJSON route export path");

    BenchOptions bo;
    auto* bench = app.add_subcommand("bench", "Run a seeded multi-run experiment");
    add_solver_flags(bench, bo.solve);
    bench->add_option("--runs", bo.runs, "Number of runs")->check(CLI::PositiveNumber);
    bench->add_option("--seed-base", bo.seed_base, "Seed for run 0; run r uses seed-base + r");
    bench->add_option("--out", bo.out, "Report JSON output path")->required();
    bench->add_option("--table", bo.table, "Comparison table text output path");
    bench->add_flag("--parallel", bo.parallel,
                    "Run seeded solves concurrently (timings flagged non-protocol)");

    GenOptions go;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
    gen->add_option("--n", go.n, "Customer count")->required();
    gen->add_option("--vehicles", go.vehicles, "Vehicle count")->required();
    gen->add_option("--capacity", go.capacity, "Capacity per vehicle")->required();
    gen->add_option("--clusters", go.clusters, "Cluster count (0 = uniform layout)");
    gen->add_option("--spread", go.spread, "Cluster spread in km");
    gen->add_option("--bbox", go.bbox, "Bounding box LAT1,LON1,LAT2,LON2")
        ->required()
        ->delimiter(',')
        ->expected(4);
    gen->add_option("--seed", go.seed, "RNG seed");
    gen->add_option("--out", go.out, "Instance JSON output path")->required();
    gen->add_option("--matrix", go.matrix, "Also write the distance matrix (OCVRP-DMX)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(so);
        if (bench->parsed()) return cmd_bench(bo);
        return cmd_gen(go);
    } catch (const ocvrp::Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return 1;
    } catch (const ocvrp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
