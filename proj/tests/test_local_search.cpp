#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "ocvrp/local_search.hpp"
#include "oracles.hpp"

using namespace ocvrp;

TEST_CASE("two_opt_route drives every tri3 permutation to the optimum") {
    const auto inst = oracle::tri3({3.0});
    std::vector<int> perm{1, 2, 3};
    std::sort(perm.begin(), perm.end());
    do {
        const auto improved = two_opt_route(inst, perm);
        CHECK(route_distance(inst, improved) == Catch::Approx(10.0).margin(1e-12));
        auto sorted = improved;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<int>{1, 2, 3});
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("two_opt_route fixes [C,A,B] and leaves [A,C,B] alone") {
    const auto inst = oracle::tri3({3.0});
    CHECK(two_opt_route(inst, {3, 1, 2}) == std::vector<int>{1, 3, 2});
    CHECK(two_opt_route(inst, {1, 3, 2}) == std::vector<int>{1, 3, 2});
    CHECK(two_opt_route(inst, {1}) == std::vector<int>{1});
}

TEST_CASE("move delta equals the recomputed difference, symmetric case") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 50; ++t) {
        const auto inst = oracle::random_planar(rng, 10, 1, 10.0);
        std::vector<int> stops{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        std::shuffle(stops.begin(), stops.end(), rng);
        const auto cost = [&](int a, int b) {
            return inst.matrix.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        };
        const double before = oracle::route_cost(inst, stops);
        for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
            for (std::size_t k = i + 1; k < stops.size(); ++k) {
                const double delta = two_opt_delta(cost, stops, i, k, /*symmetric=*/true);
                auto reversed = stops;
                apply_two_opt(reversed, i, k);
                CHECK(oracle::route_cost(inst, reversed) ==
                      Catch::Approx(before + delta).margin(1e-9));
            }
        }
    }
}

TEST_CASE("move delta equals the recomputed difference, asymmetric case") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> d(0.1, 30.0);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 9;
        DistanceMatrix m(n, /*symmetric=*/false);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) m.set(i, j, d(rng));
        const auto cost = [&](int a, int b) {
            return m.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        };
        std::vector<int> stops{1, 2, 3, 4, 5, 6, 7, 8};
        std::shuffle(stops.begin(), stops.end(), rng);
        const double before = open_path_cost(cost, std::span<const int>(stops));
        for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
            for (std::size_t k = i + 1; k < stops.size(); ++k) {
                const double delta = two_opt_delta(cost, stops, i, k, /*symmetric=*/false);
                auto reversed = stops;
                apply_two_opt(reversed, i, k);
                CHECK(open_path_cost(cost, std::span<const int>(reversed)) ==
                      Catch::Approx(before + delta).margin(1e-9));
            }
        }
    }
}

TEST_CASE("descent never increases distance and preserves the stop multiset") {
    std::mt19937_64 rng(44);
    for (int t = 0; t < 300; ++t) {
        const int n = 3 + static_cast<int>(rng() % 14);
        const auto inst = oracle::random_planar(rng, n, 1, 1000.0);
        std::vector<int> stops;
        for (int c = 1; c <= n; ++c) stops.push_back(c);
        std::shuffle(stops.begin(), stops.end(), rng);
        const double before = route_distance(inst, stops);
        const auto after = two_opt_route(inst, stops);
        CHECK(route_distance(inst, after) <= before + 1e-12);
        auto sorted = after;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> expect;
        for (int c = 1; c <= n; ++c) expect.push_back(c);
        CHECK(sorted == expect);
    }
}

TEST_CASE("descent terminates at a local optimum: no improving move remains") {
    std::mt19937_64 rng(45);
    const auto inst = oracle::random_planar(rng, 12, 1, 100.0);
    std::vector<int> stops{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::shuffle(stops.begin(), stops.end(), rng);
    const auto after = two_opt_route(inst, stops);
    const auto cost = [&](int a, int b) {
        return inst.matrix.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    };
    CHECK_FALSE(best_two_opt_move(cost, std::span<const int>(after), true).has_value());
}

TEST_CASE("improve_solution works per route and keeps loads") {
    const auto inst = oracle::tri3({2.0, 1.0});
    Solution sol;
    sol.routes.push_back(Route{1, {3, 1}, 0.0, 0.0});  // D->C->A = 9, reverses to 7
    sol.routes.push_back(Route{2, {2}, 0.0, 0.0});
    refresh_metrics(inst, sol);
    const double before = sol.total_distance;
    const auto improved = improve_solution(inst, sol);
    CHECK(improved.total_distance <= before);
    CHECK(improved.routes[0].stops == std::vector<int>{1, 3});
    CHECK(improved.routes[1].stops == std::vector<int>{2});
    CHECK(improved.routes[0].load == Catch::Approx(2.0));
    CHECK(validate_solution(inst, improved).ok());
}

TEST_CASE("2-opt on an asymmetric matrix accounts for reversed internal arcs") {
    // craft a matrix where the naive symmetric shortcut would pick a bogus move
    DistanceMatrix m(4, /*symmetric=*/false);
    // forward arcs cheap, reversed arcs expensive
    m.set(0, 1, 1.0);  m.set(1, 0, 9.0);
    m.set(1, 2, 1.0);  m.set(2, 1, 9.0);
    m.set(2, 3, 1.0);  m.set(3, 2, 9.0);
    m.set(0, 2, 5.0);  m.set(2, 0, 5.0);
    m.set(0, 3, 5.0);  m.set(3, 0, 5.0);
    m.set(1, 3, 5.0);  m.set(3, 1, 5.0);
    const auto cost = [&](int a, int b) {
        return m.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    };
    const std::vector<int> stops{1, 2, 3};  // cost 1+1+1 = 3, already optimal
    CHECK(open_path_cost(cost, std::span<const int>(stops)) == Catch::Approx(3.0));
    CHECK_FALSE(best_two_opt_move(cost, std::span<const int>(stops), false).has_value());
}
