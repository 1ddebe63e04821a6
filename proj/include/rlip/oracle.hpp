#pragma once

// Exhaustive Pareto fronts for tiny instances.
//
// exact_front_full enumerates every feasible (X, Y, Z) with |X| = P; for a
// fixed X each customer picks one level sequence (an ordered tuple of distinct
// open sites, followed by a loss marker when shorter than R) and sequences are
// combined by depth-first search that tracks capacity. Both objectives only
// grow as customers are added, so a partial assignment whose lower bound is
// weakly dominated by the current front is cut.
//
// exact_front_decoder_reachable decodes every (P-subset, priority permutation)
// genotype instead.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlip/decoder.hpp"
#include "rlip/model.hpp"
#include "rlip/pareto.hpp"

namespace rlip {

struct OracleLimits {
    std::size_t max_sites = 6;
    std::size_t max_customers = 6;
    std::size_t max_levels = 2;
    std::size_t max_genotypes = 1'000'000;  // decoder-reachable enumeration only
    bool reverse_order = false;             // enumeration order, results must not depend on it
};

class OracleSizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

struct OraclePoint {
    Solution witness;
    ObjectiveVector objectives;
};

namespace detail {

inline void check_oracle_limits(const ProblemInstance& instance, std::size_t facilities, const OracleLimits& limits)
{
    if (instance.num_sites() > limits.max_sites || instance.num_customers() > limits.max_customers ||
        instance.max_levels() > limits.max_levels)
        throw OracleSizeError("instance too large for exhaustive enumeration: |J|=" +
                              std::to_string(instance.num_sites()) + " (max " + std::to_string(limits.max_sites) +
                              "), |I|=" + std::to_string(instance.num_customers()) + " (max " +
                              std::to_string(limits.max_customers) + "), R=" + std::to_string(instance.max_levels()) +
                              " (max " + std::to_string(limits.max_levels) + ")");
    if (facilities > instance.num_sites())
        throw std::domain_error("facility count P exceeds number of candidate sites");
}

/// All 0/1 vectors of length n with exactly k ones, lexicographic order.
inline std::vector<std::vector<std::uint8_t>> subsets_of_size(std::size_t n, std::size_t k)
{
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> bits(n, 0);
    std::fill(bits.end() - static_cast<std::ptrdiff_t>(k), bits.end(), 1);
    do {
        out.push_back(bits);
    } while (std::next_permutation(bits.begin(), bits.end()));
    return out;
}

struct LevelSequence {
    std::vector<std::size_t> sites;  // sites[r] serves level r
    double cost = 0.0;               // customer expected cost
};

inline void extend_sequences(const std::vector<std::size_t>& open, std::size_t levels, std::vector<std::size_t>& prefix,
                             std::vector<LevelSequence>& out)
{
    out.push_back({prefix, 0.0});
    if (prefix.size() == levels) return;
    for (std::size_t j : open) {
        if (std::find(prefix.begin(), prefix.end(), j) != prefix.end()) continue;
        prefix.push_back(j);
        extend_sequences(open, levels, prefix, out);
        prefix.pop_back();
    }
}

inline double sequence_cost(const ProblemInstance& instance, std::size_t i, const std::vector<std::size_t>& sites)
{
    const double q = instance.failure_probability();
    const auto& c = instance.customers()[i];
    double cost = 0.0;
    for (std::size_t r = 0; r < sites.size(); ++r) cost += c.demand * instance.distance(i, sites[r]) * level_weight(q, r);
    if (sites.size() < instance.max_levels()) cost += c.demand * c.penalty * loss_probability(q, sites.size());
    return cost;
}

class FullSearch {
public:
    FullSearch(const ProblemInstance& instance, const std::vector<std::uint8_t>& open, bool reverse,
               ParetoArchive& front)
        : instance_(instance), open_(open), front_(front)
    {
        std::vector<std::size_t> open_sites;
        for (std::size_t j = 0; j < open.size(); ++j)
            if (open[j]) open_sites.push_back(j);
        const std::size_t n = instance.num_customers();
        options_.resize(n);
        min_cost_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::size_t> prefix;
            extend_sequences(open_sites, instance.max_levels(), prefix, options_[i]);
            for (auto& seq : options_[i]) seq.cost = sequence_cost(instance, i, seq.sites);
            if (reverse) std::reverse(options_[i].begin(), options_[i].end());
            double m = options_[i].front().cost;
            for (const auto& seq : options_[i]) m = std::min(m, seq.cost);
            min_cost_[i] = m;
        }
        // suffix maxima of the per-customer cheapest option bound obj2 from below
        suffix_bound_.assign(n + 1, 0.0);
        for (std::size_t i = n; i-- > 0;) suffix_bound_[i] = std::max(suffix_bound_[i + 1], min_cost_[i]);
        load_.assign(open.size(), 0.0);
        served_.assign(open.size(), 0.0);
        choice_.assign(n, 0);
    }

    void run() { descend(0, 0.0); }

private:
    double obj1_of_served() const
    {
        double total = 0.0;
        for (std::size_t j = 0; j < open_.size(); ++j)
            total += site_cost(instance_.sites()[j], open_[j] != 0, served_[j]);
        return total;
    }

    void descend(std::size_t i, double worst)
    {
        const ObjectiveVector bound{obj1_of_served(), std::max(worst, suffix_bound_[i])};
        for (const auto& e : front_.entries())
            if (weakly_dominates(e.objectives, bound)) return;
        if (i == instance_.num_customers()) {
            Solution s = Solution::empty(instance_);
            s.open = open_;
            for (std::size_t c = 0; c < choice_.size(); ++c) {
                const auto& seq = options_[c][choice_[c]];
                for (std::size_t r = 0; r < seq.sites.size(); ++r) s.assignment[c][r] = seq.sites[r];
                if (seq.sites.size() < instance_.max_levels()) s.lost_level[c] = seq.sites.size();
            }
            front_.insert({Genotype{}, s, evaluate(instance_, s)});
            return;
        }
        const double demand = instance_.customers()[i].demand;
        const double q = instance_.failure_probability();
        for (std::size_t k = 0; k < options_[i].size(); ++k) {
            const auto& seq = options_[i][k];
            bool fits = true;
            for (std::size_t j : seq.sites) fits = fits && load_[j] + demand <= instance_.sites()[j].capacity;
            if (!fits) continue;
            const auto saved = served_;
            for (std::size_t r = 0; r < seq.sites.size(); ++r) {
                load_[seq.sites[r]] += demand;
                served_[seq.sites[r]] += demand * level_weight(q, r);
            }
            choice_[i] = k;
            descend(i + 1, std::max(worst, seq.cost));
            for (std::size_t j : seq.sites) load_[j] -= demand;
            served_ = saved;
        }
    }

    const ProblemInstance& instance_;
    const std::vector<std::uint8_t>& open_;
    ParetoArchive& front_;
    std::vector<std::vector<LevelSequence>> options_;
    std::vector<double> min_cost_;
    std::vector<double> suffix_bound_;
    std::vector<double> load_;
    std::vector<double> served_;
    std::vector<std::size_t> choice_;
};

}  // namespace detail

inline std::vector<OraclePoint> exact_front_full(const ProblemInstance& instance, std::size_t facilities,
                                                 const OracleLimits& limits = {})
{
    detail::check_oracle_limits(instance, facilities, limits);
    auto subsets = detail::subsets_of_size(instance.num_sites(), facilities);
    if (limits.reverse_order) std::reverse(subsets.begin(), subsets.end());
    ParetoArchive front;
    for (const auto& open : subsets) detail::FullSearch(instance, open, limits.reverse_order, front).run();
    std::vector<OraclePoint> out;
    for (auto& e : front.sorted()) out.push_back({std::move(e.solution), e.objectives});
    return out;
}

inline std::vector<ObjectiveVector> exact_front_decoder_reachable(const ProblemInstance& instance,
                                                                  std::size_t facilities,
                                                                  const OracleLimits& limits = {})
{
    detail::check_oracle_limits(instance, facilities, limits);
    double genotypes = 1.0;
    for (std::size_t k = 2; k <= instance.num_customers(); ++k) genotypes *= static_cast<double>(k);
    for (std::size_t k = 0; k < facilities; ++k)
        genotypes *= static_cast<double>(instance.num_sites() - k) / static_cast<double>(k + 1);
    if (genotypes > static_cast<double>(limits.max_genotypes))
        throw OracleSizeError("genotype space too large for exhaustive decoding");

    auto subsets = detail::subsets_of_size(instance.num_sites(), facilities);
    if (limits.reverse_order) std::reverse(subsets.begin(), subsets.end());
    ParetoArchive front;
    for (const auto& open : subsets) {
        Genotype g{open, std::vector<std::size_t>(instance.num_customers())};
        std::iota(g.priority.begin(), g.priority.end(), std::size_t{0});
        if (limits.reverse_order) std::reverse(g.priority.begin(), g.priority.end());
        do {
            auto s = decode(instance, g);
            front.insert({g, s, evaluate(instance, s)});
        } while (limits.reverse_order ? std::prev_permutation(g.priority.begin(), g.priority.end())
                                      : std::next_permutation(g.priority.begin(), g.priority.end()));
    }
    std::vector<ObjectiveVector> out;
    for (const auto& e : front.sorted()) out.push_back(e.objectives);
    return out;
}

}  // namespace rlip
