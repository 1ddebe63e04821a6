#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "rlip/decoder.hpp"

using namespace rlip;

namespace {

Genotype identity_genotype(std::vector<std::uint8_t> bits, std::size_t customers)
{
    Genotype g{std::move(bits), std::vector<std::size_t>(customers)};
    std::iota(g.priority.begin(), g.priority.end(), std::size_t{0});
    return g;
}

}  // namespace

TEST_CASE("decode with one roomy site assigns everyone at level 0")
{
    const auto inst = fixtures::with_costs({fixtures::customer(1, 10), fixtures::customer(2, 20),
                                            fixtures::customer(3, 30)},
                                           {fixtures::site(1, 100, 60)}, 0.2, 1, {1, 2, 3});
    const auto s = decode(inst, identity_genotype({1}, 3));
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(s.assignment[i][0] == std::optional<std::size_t>(0));
        CHECK_FALSE(s.lost_level[i].has_value());
    }
    CHECK(check_feasibility(inst, s).feasible());
}

TEST_CASE("decode loses the customer that finds no capacity")
{
    // capacity equals the first customer's demand
    const auto inst = fixtures::with_costs({fixtures::customer(1, 10), fixtures::customer(2, 10)},
                                           {fixtures::site(1, 100, 10)}, 0.2, 1, {1, 1});
    const auto s = decode(inst, identity_genotype({1}, 2));
    CHECK(s.assignment[0][0] == std::optional<std::size_t>(0));
    CHECK(s.lost_level[1] == std::optional<std::size_t>(0));
    CHECK_FALSE(s.assignment[1][0].has_value());

    Genotype swapped = identity_genotype({1}, 2);
    swapped.priority = {1, 0};
    const auto t = decode(inst, swapped);
    CHECK(t.assignment[1][0] == std::optional<std::size_t>(0));
    CHECK(t.lost_level[0] == std::optional<std::size_t>(0));
}

TEST_CASE("decode fills levels nearest first")
{
    // customer 0 nearer to site 0, customer 1 nearer to site 1
    const auto inst = fixtures::with_costs({fixtures::customer(1, 5), fixtures::customer(2, 5)},
                                           {fixtures::site(1), fixtures::site(2)}, 0.3, 2, {1, 4, 6, 2});
    const auto s = decode(inst, identity_genotype({1, 1}, 2));
    CHECK(s.assignment[0] == std::vector<std::optional<std::size_t>>{0, 1});
    CHECK(s.assignment[1] == std::vector<std::optional<std::size_t>>{1, 0});
    CHECK_FALSE(s.lost_level[0]);
    CHECK_FALSE(s.lost_level[1]);
}

TEST_CASE("decode marks the first level without an open site as lost")
{
    const auto inst = fixtures::with_costs({fixtures::customer(1, 5)}, {fixtures::site(1), fixtures::site(2)}, 0.3, 2,
                                           {1, 4});
    const auto s = decode(inst, identity_genotype({0, 1}, 1));
    CHECK(s.assignment[0][0] == std::optional<std::size_t>(1));
    CHECK(s.lost_level[0] == std::optional<std::size_t>(1));
    const auto none = decode(inst, identity_genotype({0, 0}, 1));
    CHECK(none.lost_level[0] == std::optional<std::size_t>(0));
}

TEST_CASE("distance ties go to the smaller site id")
{
    auto a = fixtures::site(7), b = fixtures::site(3);
    const auto inst = fixtures::with_costs({fixtures::customer(1, 5)}, {a, b}, 0.3, 1, {2, 2});
    const auto s = decode(inst, identity_genotype({1, 1}, 1));
    CHECK(s.assignment[0][0] == std::optional<std::size_t>(1));
}

TEST_CASE("repair forces the open-site count")
{
    Rng rng(5);
    CHECK(repair({1, 1, 0, 0}, 2, rng) == std::vector<std::uint8_t>{1, 1, 0, 0});
    for (int k = 0; k < 50; ++k) {
        const auto out = repair({1, 1, 1, 0}, 2, rng);
        CHECK(std::count(out.begin(), out.end(), 1) == 2);
        CHECK(out[3] == 0);
        const auto one = repair({0, 0, 0, 0}, 1, rng);
        CHECK(std::count(one.begin(), one.end(), 1) == 1);
    }
    CHECK_THROWS_AS(repair({0, 0}, 3, rng), std::domain_error);

    Rng a(9), b(9);
    CHECK(repair({1, 1, 1, 1, 0, 1}, 3, a) == repair({1, 1, 1, 1, 0, 1}, 3, b));
}

TEST_CASE("decode output is always feasible")
{
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto inst = fixtures::tiny(seed, 6, 5, 1 + seed % 3);
        Rng rng(seed);
        const std::optional<std::size_t> p = seed % 2 ? std::optional<std::size_t>(1 + seed % 5) : std::nullopt;
        const auto g = random_genotype(inst, p, rng);
        const auto s = decode(inst, g, {p, seed});
        const auto rep = check_feasibility(inst, s, p);
        INFO("seed " << seed);
        CHECK(rep.feasible());
        CHECK(decode(inst, g, {p, seed}) == s);
    }
}

TEST_CASE("decode repairs non-conforming genotypes deterministically")
{
    const auto inst = fixtures::tiny(3, 5, 5, 2);
    const auto g = identity_genotype({1, 1, 1, 1, 1}, 5);
    const auto s = decode(inst, g, {2, 77});
    CHECK(s.open_count() == 2);
    CHECK(check_feasibility(inst, s, 2).feasible());
    CHECK(decode(inst, g, {2, 77}) == s);
}

TEST_CASE("relabelling site storage order commutes with decoding")
{
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto inst = fixtures::tiny(seed, 5, 4, 2);
        std::vector<std::size_t> perm{2, 0, 3, 1};
        std::vector<SiteRecord> sites;
        std::vector<double> costs;
        for (auto j : perm) sites.push_back(inst.sites()[j]);
        for (std::size_t i = 0; i < inst.num_customers(); ++i)
            for (auto j : perm) costs.push_back(inst.distance(i, j));
        const ProblemInstance shuffled(inst.customers(), sites, inst.failure_probability(), inst.max_levels(), costs);

        Rng rng(seed);
        const auto g = random_genotype(inst, std::nullopt, rng);
        Genotype h = g;
        for (std::size_t k = 0; k < perm.size(); ++k) h.site_bits[k] = g.site_bits[perm[k]];

        const auto a = decode(inst, g);
        const auto b = decode(shuffled, h);
        for (std::size_t i = 0; i < inst.num_customers(); ++i) {
            CHECK(a.lost_level[i] == b.lost_level[i]);
            for (std::size_t r = 0; r < inst.max_levels(); ++r) {
                REQUIRE(a.assignment[i][r].has_value() == b.assignment[i][r].has_value());
                if (a.assignment[i][r]) CHECK(perm[*b.assignment[i][r]] == *a.assignment[i][r]);
            }
        }
        CHECK(evaluate_obj1(inst, a) == Catch::Approx(evaluate_obj1(shuffled, b)).epsilon(1e-12));
        CHECK(evaluate_obj2(inst, a) == evaluate_obj2(shuffled, b));
    }
}

TEST_CASE("invalid genotypes are rejected")
{
    const auto inst = fixtures::tiny(1, 3, 3, 1);
    CHECK_THROWS_AS(decode(inst, Genotype{{1, 0}, {0, 1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(decode(inst, Genotype{{1, 0, 0}, {0, 0, 2}}), std::invalid_argument);
}
