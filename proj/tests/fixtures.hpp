#pragma once

#include <cstdint>
#include <vector>

#include "rlip/instance.hpp"
#include "rlip/model.hpp"

namespace fixtures {

inline rlip::CustomerRecord customer(std::int64_t id, double demand, double penalty = 1000.0, double x = 0.0,
                                     double y = 0.0)
{
    return {id, {x, y}, demand, penalty};
}

inline rlip::SiteRecord site(std::int64_t id, double setup = 100.0, double capacity = 1000.0, double holding = 2.0,
                             double order = 1000.0, double unit_order = 5.0, double x = 0.0, double y = 0.0)
{
    return {id, {x, y}, setup, holding, order, unit_order, capacity};
}

/// Instance with an explicit |I| x |J| cost matrix.
inline rlip::ProblemInstance with_costs(std::vector<rlip::CustomerRecord> customers,
                                        std::vector<rlip::SiteRecord> sites, double q, std::size_t levels,
                                        std::vector<double> costs)
{
    return rlip::ProblemInstance(std::move(customers), std::move(sites), q, levels, std::move(costs));
}

/// Tiny random instance in the size range of the exhaustive oracle.
inline rlip::ProblemInstance tiny(std::uint64_t seed, std::size_t customers = 5, std::size_t sites = 4,
                                  std::size_t levels = 2, double q = 0.2)
{
    rlip::InstanceRecipe recipe;
    recipe.failure_probability = q;
    recipe.max_levels = levels;
    recipe.colocate_sites = false;
    return rlip::generate(customers, sites, seed, recipe);
}

}  // namespace fixtures
