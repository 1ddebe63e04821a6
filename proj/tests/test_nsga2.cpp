#include <catch_amalgamated.hpp>

#include <algorithm>
#include <limits>

#include "fixtures.hpp"
#include "rlip/nsga2.hpp"
#include "rlip/oracle.hpp"

using namespace rlip;
using Catch::Approx;

TEST_CASE("non-dominated sorting of a small table")
{
    const std::vector<ObjectiveVector> pts{{1, 4}, {2, 3}, {3, 2}, {2, 5}};
    const auto fronts = non_dominated_sort(pts);
    REQUIRE(fronts.size() == 2);
    CHECK(fronts[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(fronts[1] == std::vector<std::size_t>{3});

    const std::vector<ObjectiveVector> chain{{3, 3}, {1, 1}, {2, 2}};
    const auto c = non_dominated_sort(chain);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == std::vector<std::size_t>{1});
    CHECK(c[1] == std::vector<std::size_t>{2});
    CHECK(c[2] == std::vector<std::size_t>{0});
}

TEST_CASE("crowding distance")
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::vector<ObjectiveVector> f{{1, 4}, {2, 3}, {3, 2}};
    const auto d = crowding_distance(f);
    CHECK(d[0] == inf);
    CHECK(d[2] == inf);
    CHECK(d[1] == Approx(2.0));  // (3-1)/(3-1) + (4-2)/(4-2)

    const std::vector<ObjectiveVector> g{{0, 10}, {1, 9}, {4, 2}, {10, 0}};
    const auto e = crowding_distance(g);
    CHECK(e[1] == Approx(4.0 / 10 + 8.0 / 10));
    CHECK(e[2] == Approx(9.0 / 10 + 9.0 / 10));

    const auto two = crowding_distance(std::vector<ObjectiveVector>{{0, 1}, {1, 0}});
    CHECK(two[0] == inf);
    CHECK(two[1] == inf);
}

TEST_CASE("crowded-comparison tournament")
{
    const RankInfo info{{0, 0, 1, 1}, {1.0, 2.0, 5.0, 5.0}};
    CHECK(tournament_winner(info, 0, 2) == 0);
    CHECK(tournament_winner(info, 2, 0) == 0);
    CHECK(tournament_winner(info, 0, 1) == 1);
    CHECK(tournament_winner(info, 2, 3) == 2);
    CHECK(tournament_winner(info, 3, 2) == 3);
}

TEST_CASE("survivor selection fills by front then by crowding")
{
    // front 0: 0,1,2 (1 is the interior point); front 1: 3,4
    const std::vector<ObjectiveVector> pts{{1, 4}, {2, 3}, {3, 1}, {2, 5}, {4, 4}};
    CHECK(select_survivors(pts, 2) == std::vector<std::size_t>{0, 2});
    auto three = select_survivors(pts, 3);
    std::sort(three.begin(), three.end());
    CHECK(three == std::vector<std::size_t>{0, 1, 2});
    CHECK(select_survivors(pts, 4).size() == 4);
}

TEST_CASE("variation operators keep genotypes valid")
{
    Rng rng(12);
    const auto inst = fixtures::tiny(4, 8, 6, 2);
    for (int k = 0; k < 500; ++k) {
        const auto a = random_genotype(inst, std::nullopt, rng);
        const auto b = random_genotype(inst, std::nullopt, rng);
        auto [c1, c2] = ops::crossover(a, b, rng);
        CHECK_NOTHROW(validate_genotype(inst, c1));
        CHECK_NOTHROW(validate_genotype(inst, c2));
        for (std::size_t j = 0; j < a.site_bits.size(); ++j)
            CHECK(c1.site_bits[j] + c2.site_bits[j] == a.site_bits[j] + b.site_bits[j]);
        auto m = a;
        ops::mutate(m, 0.5, rng, true);
        CHECK_NOTHROW(validate_genotype(inst, m));
        CHECK(m.site_bits != a.site_bits);
    }
}

TEST_CASE("configuration is validated")
{
    const auto inst = fixtures::tiny(1, 4, 3, 1);
    NsgaConfig cfg;
    cfg.population = 7;
    CHECK_THROWS_AS(Nsga2Solver(inst, cfg), std::invalid_argument);
    cfg.population = 10;
    cfg.solver.facilities = 4;
    CHECK_THROWS_AS(Nsga2Solver(inst, cfg), std::domain_error);
    cfg.solver.facilities = 3;
    CHECK_NOTHROW(Nsga2Solver(inst, cfg));
    CHECK(cfg.crossover_children() == 8);  // 2 * round(0.7 * 10 / 2)
    CHECK(cfg.mutants() == 5);
}

TEST_CASE("a single candidate site with P = 1 has a single objective vector")
{
    const auto inst = fixtures::tiny(6, 5, 1, 1);
    NsgaConfig cfg;
    cfg.population = 10;
    cfg.iterations = 10;
    cfg.solver.facilities = 1;
    const auto archive = run_nsga2(inst, cfg);
    REQUIRE(archive.size() == 1);
    CHECK(archive.entries()[0].solution.open == std::vector<std::uint8_t>{1});
}

TEST_CASE("runs are reproducible and independent of thread count")
{
    const auto inst = fixtures::tiny(9, 12, 8, 2);
    NsgaConfig cfg;
    cfg.population = 20;
    cfg.iterations = 15;
    cfg.solver.seed = 42;
    cfg.solver.facilities = 3;
    const auto a = run_nsga2(inst, cfg).sorted();
    cfg.solver.threads = 4;
    const auto b = run_nsga2(inst, cfg).sorted();
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].objectives == b[k].objectives);
        CHECK(a[k].genotype == b[k].genotype);
    }
    cfg.solver.seed = 43;
    cfg.solver.threads = 1;
    const auto c = run_nsga2(inst, cfg).sorted();
    bool same = c.size() == a.size();
    for (std::size_t k = 0; same && k < a.size(); ++k) same = a[k].genotype == c[k].genotype;
    CHECK_FALSE(same);
}

TEST_CASE("elitism: each generation's first front weakly dominates the previous one")
{
    const auto inst = fixtures::tiny(21, 15, 8, 2);
    NsgaConfig cfg;
    cfg.population = 16;
    cfg.iterations = 40;
    cfg.solver.facilities = 4;
    Nsga2Solver solver(inst, cfg);
    auto prev = solver.first_front();
    while (solver.step()) {
        const auto cur = solver.first_front();
        CHECK(mutually_non_dominated(cur));
        CHECK(weakly_dominates_set(cur, prev));
        CHECK(mutually_non_dominated(solver.archive().objectives()));
        CHECK(solver.population().size() == cfg.population);
        prev = cur;
    }
    CHECK(solver.generation() == cfg.iterations);
    CHECK(solver.evaluations() == cfg.population + cfg.iterations * (cfg.crossover_children() + cfg.mutants()));
    for (const auto& e : solver.archive().entries()) CHECK(check_feasibility(inst, e.solution, 4).feasible());
}

TEST_CASE("evaluation budget is a hard cap")
{
    const auto inst = fixtures::tiny(2, 6, 5, 2);
    NsgaConfig cfg;
    cfg.population = 10;
    cfg.iterations = 1000;
    cfg.solver.max_evaluations = 57;
    Nsga2Solver solver(inst, cfg);
    solver.run();
    CHECK(solver.evaluations() == 57);
}

TEST_CASE("tiny instance: archive reaches the decoder-reachable front")
{
    const auto inst = fixtures::tiny(31, 4, 4, 2);
    const auto exact = exact_front_decoder_reachable(inst, 2);
    NsgaConfig cfg;
    cfg.population = 20;
    cfg.iterations = 60;
    cfg.solver.facilities = 2;
    const auto archive = run_nsga2(inst, cfg);
    const auto found = archive.objectives();
    CHECK(weakly_dominates_set(exact, found));
    CHECK(coverage_fraction(found, exact, 1e-9) == 1.0);
}
