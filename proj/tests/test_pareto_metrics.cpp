#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "rlip/pareto.hpp"

using namespace rlip;
using Catch::Approx;

namespace {

std::vector<ObjectiveVector> random_front(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<double> xs(n), ys(n);
    for (auto& x : xs) x = u(rng);
    for (auto& y : ys) y = u(rng);
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end(), std::greater<>());
    std::vector<ObjectiveVector> f;
    for (std::size_t k = 0; k < n; ++k) f.push_back({xs[k], ys[k]});
    return f;
}

}  // namespace

TEST_CASE("spacing of hand-computed fronts")
{
    const std::vector<ObjectiveVector> uneven{{4, 4}, {0, 4}, {1, 4}};  // gaps 1 and 3
    CHECK(*spacing(uneven) == Approx(0.5).epsilon(1e-14));

    const std::vector<ObjectiveVector> even{{0, 3}, {1, 2}, {2, 1}, {3, 0}};
    CHECK(*spacing(even) == Approx(0.0).margin(1e-15));

    const std::vector<ObjectiveVector> two{{0, 5}, {3, 1}};
    CHECK(*spacing(two) == 0.0);

    CHECK_FALSE(spacing(std::vector<ObjectiveVector>{{1, 1}}).has_value());
    CHECK_FALSE(spacing(std::vector<ObjectiveVector>{}).has_value());
    CHECK_FALSE(spacing(std::vector<ObjectiveVector>{{1, 1}, {1, 1}}).has_value());
}

TEST_CASE("diversity is the length of the range vector")
{
    const std::vector<ObjectiveVector> f{{0, 4}, {3, 0}, {1, 2}};
    CHECK(diversity(f) == Approx(5.0).epsilon(1e-14));
    CHECK(diversity(std::vector<ObjectiveVector>{{2, 2}}) == 0.0);
    CHECK(diversity(std::vector<ObjectiveVector>{}) == 0.0);
}

TEST_CASE("metric invariances")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> shift(-1e3, 1e3), scale(0.1, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = random_front(rng, 2 + trial % 12);
        const double dx = shift(rng), dy = shift(rng), c = scale(rng);
        std::vector<ObjectiveVector> moved, scaled, permuted = f;
        for (const auto& p : f) {
            moved.push_back({p.obj1 + dx, p.obj2 + dy});
            scaled.push_back({c * p.obj1, c * p.obj2});
        }
        std::shuffle(permuted.begin(), permuted.end(), rng);

        CHECK(diversity(moved) == Approx(diversity(f)).epsilon(1e-9));
        CHECK(diversity(scaled) == Approx(c * diversity(f)).epsilon(1e-12));
        CHECK(diversity(permuted) == diversity(f));
        const auto s = spacing(f);
        REQUIRE(s.has_value());
        CHECK(*spacing(moved) == Approx(*s).margin(1e-9));
        CHECK(*spacing(scaled) == Approx(*s).margin(1e-12));
        CHECK(*spacing(permuted) == *s);
        CHECK(*s >= 0.0);
    }
}

TEST_CASE("non-dominated filtering")
{
    const std::vector<ObjectiveVector> pts{{1, 4}, {2, 3}, {3, 2}, {2, 5}, {3, 3}};
    CHECK(filter_non_dominated(pts) == std::vector<std::size_t>{0, 1, 2});

    const std::vector<ObjectiveVector> dup{{1, 1}, {1, 1}, {2, 2}};
    CHECK(filter_non_dominated(dup) == std::vector<std::size_t>{0, 1});

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> u(0, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ObjectiveVector> p(1 + trial % 20);
        for (auto& v : p) v = {double(u(rng)), double(u(rng))};
        std::vector<ObjectiveVector> kept;
        for (auto k : filter_non_dominated(p)) kept.push_back(p[k]);
        CHECK(mutually_non_dominated(kept));
        CHECK(filter_non_dominated(kept).size() == kept.size());
        CHECK(weakly_dominates_set(kept, p));
    }
}

TEST_CASE("coverage fraction")
{
    const std::vector<ObjectiveVector> ref{{1, 4}, {2, 3}, {3, 2}, {4, 1}};
    const std::vector<ObjectiveVector> half{{1, 4}, {3, 2}, {9, 9}};
    CHECK(coverage_fraction(half, ref, 1e-9) == 0.5);
    CHECK(coverage_fraction(ref, ref, 0.0) == 1.0);
    CHECK(coverage_fraction(std::vector<ObjectiveVector>{}, ref, 1e-9) == 0.0);
    CHECK(coverage_fraction(ref, std::vector<ObjectiveVector>{}, 1e-9) == 1.0);

    const std::vector<ObjectiveVector> near{{1 + 1e-10, 4 - 1e-10}};
    CHECK(coverage_fraction(near, std::vector<ObjectiveVector>{{1, 4}}, 1e-9) == 1.0);
    CHECK(coverage_fraction(near, std::vector<ObjectiveVector>{{1, 4}}, 1e-11) == 0.0);
}

TEST_CASE("archive keeps a distinct mutually non-dominated set")
{
    ParetoArchive archive;
    auto entry = [](double a, double b) { return ArchiveEntry{{}, {}, {a, b}}; };
    CHECK(archive.insert(entry(2, 2)));
    CHECK_FALSE(archive.insert(entry(2, 2)));
    CHECK_FALSE(archive.insert(entry(3, 2)));
    CHECK(archive.insert(entry(1, 3)));
    CHECK(archive.insert(entry(1, 1)));
    CHECK(archive.size() == 1);
    CHECK(archive.entries().front().objectives == ObjectiveVector{1, 1});

    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> u(0, 30);
    ParetoArchive fuzz;
    std::vector<ObjectiveVector> seen;
    for (int k = 0; k < 2000; ++k) {
        const ObjectiveVector v{double(u(rng)), double(u(rng))};
        seen.push_back(v);
        fuzz.insert({{}, {}, v});
        const auto objs = fuzz.objectives();
        REQUIRE(mutually_non_dominated(objs));
        for (std::size_t i = 0; i < objs.size(); ++i)
            for (std::size_t j = i + 1; j < objs.size(); ++j) REQUIRE_FALSE(objs[i] == objs[j]);
    }
    // The archive is exactly the non-dominated set of everything seen, up to duplicates.
    std::vector<ObjectiveVector> expected;
    for (auto k : filter_non_dominated(seen))
        if (std::find(expected.begin(), expected.end(), seen[k]) == expected.end()) expected.push_back(seen[k]);
    CHECK(sorted_by_obj1(expected) == sorted_by_obj1(fuzz.objectives()));
}
