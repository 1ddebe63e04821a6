#pragma once

// Genotype encoding and the greedy nearest-available decoder.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "rlip/model.hpp"

namespace rlip {

using Rng = std::mt19937_64;

/// Open-site bits plus the order in which customers claim capacity.
struct Genotype {
    std::vector<std::uint8_t> site_bits;
    std::vector<std::size_t> priority;

    friend bool operator==(const Genotype&, const Genotype&) = default;
};

inline bool is_permutation_of_indices(const std::vector<std::size_t>& order, std::size_t n)
{
    if (order.size() != n) return false;
    std::vector<std::uint8_t> seen(n, 0);
    for (auto v : order) {
        if (v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

inline void validate_genotype(const ProblemInstance& instance, const Genotype& g)
{
    if (g.site_bits.size() != instance.num_sites())
        throw std::invalid_argument("genotype site_bits length differs from |J|");
    if (!is_permutation_of_indices(g.priority, instance.num_customers()))
        throw std::invalid_argument("genotype priority is not a permutation of customers");
}

/// Forces exactly `facilities` ones: closes random open sites or opens random
/// closed ones. Leaves conforming input (and the RNG) untouched.
inline std::vector<std::uint8_t> repair(std::vector<std::uint8_t> bits, std::size_t facilities, Rng& rng)
{
    if (facilities > bits.size())
        throw std::domain_error("facility count P exceeds number of candidate sites");
    std::vector<std::size_t> on, off;
    for (std::size_t j = 0; j < bits.size(); ++j) (bits[j] ? on : off).push_back(j);
    if (on.size() > facilities) {
        std::shuffle(on.begin(), on.end(), rng);
        for (std::size_t k = 0; k < on.size() - facilities; ++k) bits[on[k]] = 0;
    } else if (on.size() < facilities) {
        std::shuffle(off.begin(), off.end(), rng);
        for (std::size_t k = 0; k < facilities - on.size(); ++k) bits[off[k]] = 1;
    }
    return bits;
}

struct DecoderConfig {
    std::optional<std::size_t> facilities;  // P, enforced through repair when set
    std::uint64_t repair_seed = 0;
};

/// Customers in priority order take, level by level, the nearest open site
/// (ties by ascending site id) not already used by them and with residual
/// capacity for their full demand. The first level without such a site
/// becomes the loss level.
inline Solution decode(const ProblemInstance& instance, const Genotype& genotype, const DecoderConfig& config = {})
{
    validate_genotype(instance, genotype);
    const std::size_t n_sites = instance.num_sites();
    const std::size_t levels = instance.max_levels();

    Solution sol = Solution::empty(instance);
    sol.open = genotype.site_bits;
    for (auto& b : sol.open) b = b ? 1 : 0;
    if (config.facilities && sol.open_count() != *config.facilities) {
        Rng rng(config.repair_seed);
        sol.open = repair(std::move(sol.open), *config.facilities, rng);
    }

    std::vector<std::size_t> open_sites;
    for (std::size_t j = 0; j < n_sites; ++j)
        if (sol.open[j]) open_sites.push_back(j);

    std::vector<double> load(n_sites, 0.0);

    std::vector<std::size_t> ranked(open_sites.size());
    for (std::size_t i : genotype.priority) {
        const double demand = instance.customers()[i].demand;
        ranked = open_sites;
        std::sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            const double da = instance.distance(i, a), db = instance.distance(i, b);
            if (da != db) return da < db;
            return instance.sites()[a].id < instance.sites()[b].id;
        });
        std::vector<std::uint8_t> used(n_sites, 0);
        for (std::size_t r = 0; r < levels; ++r) {
            std::optional<std::size_t> pick;
            for (std::size_t j : ranked) {
                if (!used[j] && load[j] + demand <= instance.sites()[j].capacity) {
                    pick = j;
                    break;
                }
            }
            if (!pick) {
                sol.lost_level[i] = r;
                break;
            }
            used[*pick] = 1;
            load[*pick] += demand;
            sol.assignment[i][r] = *pick;
        }
    }
    return sol;
}

inline Genotype random_genotype(const ProblemInstance& instance, std::optional<std::size_t> facilities, Rng& rng)
{
    Genotype g;
    g.site_bits.resize(instance.num_sites());
    std::bernoulli_distribution coin(0.5);
    for (auto& b : g.site_bits) b = coin(rng) ? 1 : 0;
    if (facilities) g.site_bits = repair(std::move(g.site_bits), *facilities, rng);
    g.priority.resize(instance.num_customers());
    std::iota(g.priority.begin(), g.priority.end(), std::size_t{0});
    std::shuffle(g.priority.begin(), g.priority.end(), rng);
    return g;
}

}  // namespace rlip
