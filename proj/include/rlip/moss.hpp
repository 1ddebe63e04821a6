#pragma once

// Multi-objective scatter search.
//
//   pool    <- one GA generation on npop = 6B random solutions
//   outer:  diversify (replace the worst half of the pool at random)
//     inner: improvement (one-point crossover on the pool)
//            archive update
//            reference set update (quality tier by dominance replacement,
//                                  diversity tier by Hamming farthest point)
//            subset generation (pairs seeded from the quality tier)
//            combination (crossover of each pair, mutation with rate pm)
//
// The inner loop ends after `inner_cap` passes or a pass that adds nothing
// to the archive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rlip/decoder.hpp"
#include "rlip/model.hpp"
#include "rlip/nsga2.hpp"
#include "rlip/pareto.hpp"

namespace rlip {

struct MossConfig {
    std::size_t refset_size = 10;   // B
    double quality_share = 0.7;     // |RefSet1| = round(share * B)
    double crossover_rate = 0.7;
    double mutation_rate = 0.5;
    std::size_t iterations = 10;    // outer loop
    std::size_t inner_cap = 10;
    SolverConfig solver;

    std::size_t population() const { return 6 * refset_size; }
    std::size_t quality_size() const
    {
        return static_cast<std::size_t>(std::lround(quality_share * static_cast<double>(refset_size)));
    }
    std::size_t diversity_size() const { return refset_size - quality_size(); }

    void validate(const ProblemInstance& instance) const
    {
        if (refset_size < 2) throw std::invalid_argument("reference set size B must be >= 2");
        if (!(quality_share >= 0.0 && quality_share <= 1.0) || quality_size() < 1)
            throw std::invalid_argument("quality share must leave RefSet1 non-empty");
        if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0) || !(mutation_rate >= 0.0 && mutation_rate <= 1.0))
            throw std::invalid_argument("crossover and mutation rates must lie in [0,1]");
        if (iterations < 1 || inner_cap < 1) throw std::invalid_argument("loop budgets must be >= 1");
        if (solver.facilities && *solver.facilities > instance.num_sites())
            throw std::domain_error("facility count P exceeds number of candidate sites");
    }
};

inline std::size_t hamming(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b)
{
    std::size_t d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] != 0) != (b[k] != 0);
    return d;
}

/// Greedy farthest-point selection of `count` members of `candidates` not in
/// `chosen`, maximising the minimum Hamming distance to everything chosen so
/// far. Ties go to the lower index. Returns the picked indices in pick order.
inline std::vector<std::size_t> select_diverse(const std::vector<std::vector<std::uint8_t>>& candidates,
                                               std::vector<std::size_t> chosen, std::size_t count)
{
    std::vector<std::uint8_t> taken(candidates.size(), 0);
    for (auto c : chosen) taken[c] = 1;
    std::vector<std::size_t> picked;
    while (picked.size() < count) {
        std::optional<std::size_t> best;
        std::size_t best_dist = 0;
        for (std::size_t k = 0; k < candidates.size(); ++k) {
            if (taken[k]) continue;
            std::size_t d = std::numeric_limits<std::size_t>::max();
            for (auto c : chosen) d = std::min(d, hamming(candidates[k], candidates[c]));
            if (!best || d > best_dist) {
                best = k;
                best_dist = d;
            }
        }
        if (!best) break;
        taken[*best] = 1;
        chosen.push_back(*best);
        picked.push_back(*best);
    }
    return picked;
}

struct ReferenceSet {
    std::vector<std::size_t> quality;    // RefSet1, indices into the population
    std::vector<std::size_t> diversity;  // RefSet2
};

/// Quality tier: best by (rank, crowding). Diversity tier: farthest point on
/// site bits from everything already chosen.
inline ReferenceSet build_reference_set(std::span<const Individual> population, std::size_t refset_size,
                                        double quality_share)
{
    if (population.size() < refset_size)
        throw std::domain_error("population smaller than reference set size");
    const auto q_size = std::min(refset_size,
                                 static_cast<std::size_t>(std::lround(quality_share * static_cast<double>(refset_size))));
    ReferenceSet refs;
    auto order = crowded_order(rank_population(ops::objectives_of(population)));
    refs.quality.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(q_size));

    std::vector<std::vector<std::uint8_t>> bits;
    bits.reserve(population.size());
    for (const auto& ind : population) bits.push_back(ind.genotype.site_bits);
    refs.diversity = select_diverse(bits, refs.quality, refset_size - q_size);
    return refs;
}

/// Index pairs (a, b), a < b, over the concatenation [RefSet1, RefSet2] with
/// at least one member from RefSet1.
inline std::vector<std::pair<std::size_t, std::size_t>> subset_generation(std::size_t quality_count,
                                                                          std::size_t diversity_count)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t total = quality_count + diversity_count;
    for (std::size_t a = 0; a < quality_count; ++a)
        for (std::size_t b = a + 1; b < total; ++b) pairs.emplace_back(a, b);
    return pairs;
}

/// Replaces a RefSet1 member by any candidate that strictly dominates it.
/// Returns the number of replacements.
inline std::size_t update_quality_tier(std::vector<Individual>& quality, std::span<const Individual> candidates)
{
    std::size_t replaced = 0;
    for (const auto& cand : candidates) {
        for (auto& member : quality) {
            if (dominates(cand.objectives, member.objectives)) {
                member = cand;
                ++replaced;
                break;
            }
        }
    }
    return replaced;
}

/// Stepped scatter search; one `step()` is one inner-loop pass.
class MossSolver {
public:
    MossSolver(const ProblemInstance& instance, MossConfig config)
        : instance_(instance), config_(config), rng_(config.solver.seed)
    {
        config_.validate(instance_);
        NsgaConfig ga;
        ga.population = config_.population();
        ga.crossover_rate = config_.crossover_rate;
        ga.mutation_rate = config_.mutation_rate;
        ga.iterations = 1;
        ga.solver = config_.solver;
        ga.solver.seed = rng_();
        Nsga2Solver seed_ga(instance_, ga);
        seed_ga.run();
        pool_ = seed_ga.population();
        archive_ = seed_ga.archive();
        evaluations_ = seed_ga.evaluations();
        if (pool_.size() >= config_.refset_size) {
            const auto refs = build_reference_set(pool_, config_.refset_size, config_.quality_share);
            for (auto i : refs.quality) quality_.push_back(pool_[i]);
            for (auto i : refs.diversity) diversity_.push_back(pool_[i]);
        }
    }

    bool done() const
    {
        return quality_.empty() || outer_ >= config_.iterations ||
               (config_.solver.max_evaluations && evaluations_ >= *config_.solver.max_evaluations);
    }

    bool step()
    {
        if (done()) return false;
        std::size_t added = 0;
        if (inner_ == 0) added += diversify();

        // improvement
        std::vector<Genotype> improved;
        const std::size_t pairs =
            static_cast<std::size_t>(std::lround(config_.crossover_rate * static_cast<double>(pool_.size()) / 2.0));
        std::uniform_int_distribution<std::size_t> pick(0, pool_.size() - 1);
        for (std::size_t k = 0; k < pairs; ++k) {
            auto [c1, c2] = ops::crossover(pool_[pick(rng_)].genotype, pool_[pick(rng_)].genotype, rng_);
            improved.push_back(std::move(c1));
            improved.push_back(std::move(c2));
        }
        auto children = absorb(std::move(improved), added);
        merge_into_pool(children);

        // reference set update
        update_quality_tier(quality_, pool_);
        rebuild_diversity_tier();

        // subset generation + combination
        std::vector<Individual> refset = quality_;
        refset.insert(refset.end(), diversity_.begin(), diversity_.end());
        std::vector<Genotype> combined;
        std::bernoulli_distribution mutate_coin(config_.mutation_rate);
        for (auto [a, b] : subset_generation(quality_.size(), diversity_.size())) {
            Genotype child = ops::crossover(refset[a].genotype, refset[b].genotype, rng_).first;
            if (mutate_coin(rng_)) ops::mutate(child, config_.mutation_rate, rng_, true);
            combined.push_back(std::move(child));
        }
        auto offspring = absorb(std::move(combined), added);
        update_quality_tier(quality_, offspring);
        merge_into_pool(offspring);

        ++inner_;
        if (added == 0 || inner_ >= config_.inner_cap) {
            inner_ = 0;
            ++outer_;
        }
        return true;
    }

    ParetoArchive run()
    {
        while (step()) {}
        return archive_;
    }

    const ParetoArchive& archive() const noexcept { return archive_; }
    const std::vector<Individual>& pool() const noexcept { return pool_; }
    const std::vector<Individual>& quality_tier() const noexcept { return quality_; }
    const std::vector<Individual>& diversity_tier() const noexcept { return diversity_; }
    std::size_t evaluations() const noexcept { return evaluations_; }
    std::size_t outer_iteration() const noexcept { return outer_; }

private:
    std::size_t budgeted(std::size_t wanted) const
    {
        if (!config_.solver.max_evaluations) return wanted;
        const std::size_t cap = *config_.solver.max_evaluations;
        return std::min(wanted, cap > evaluations_ ? cap - evaluations_ : 0);
    }

    std::vector<Individual> absorb(std::vector<Genotype> genotypes, std::size_t& added)
    {
        for (auto& g : genotypes) ops::conform(g, config_.solver, rng_);
        genotypes.resize(budgeted(genotypes.size()));
        auto evaluated = ops::evaluate_all(instance_, std::move(genotypes), config_.solver);
        evaluations_ += evaluated.size();
        for (const auto& ind : evaluated) added += archive_.insert({ind.genotype, ind.solution, ind.objectives});
        return evaluated;
    }

    void merge_into_pool(std::vector<Individual>& extra)
    {
        if (extra.empty()) return;
        pool_.insert(pool_.end(), extra.begin(), extra.end());
        const auto keep = select_survivors(ops::objectives_of(pool_), config_.population());
        std::vector<Individual> next;
        next.reserve(keep.size());
        for (auto i : keep) next.push_back(std::move(pool_[i]));
        pool_ = std::move(next);
    }

    std::size_t diversify()
    {
        const auto order = crowded_order(rank_population(ops::objectives_of(pool_)));
        const std::size_t replace = pool_.size() / 2;
        std::vector<Genotype> fresh;
        for (std::size_t k = 0; k < replace; ++k)
            fresh.push_back(random_genotype(instance_, config_.solver.facilities, rng_));
        std::size_t added = 0;
        auto evaluated = absorb(std::move(fresh), added);
        for (std::size_t k = 0; k < evaluated.size(); ++k)
            pool_[order[order.size() - 1 - k]] = std::move(evaluated[k]);
        return added;
    }

    void rebuild_diversity_tier()
    {
        std::vector<std::vector<std::uint8_t>> bits;
        for (const auto& q : quality_) bits.push_back(q.genotype.site_bits);
        for (const auto& p : pool_) bits.push_back(p.genotype.site_bits);
        std::vector<std::size_t> chosen(quality_.size());
        std::iota(chosen.begin(), chosen.end(), std::size_t{0});
        diversity_.clear();
        for (auto k : select_diverse(bits, chosen, config_.diversity_size()))
            diversity_.push_back(pool_[k - quality_.size()]);
    }

    const ProblemInstance& instance_;
    MossConfig config_;
    Rng rng_;
    std::vector<Individual> pool_;
    std::vector<Individual> quality_;
    std::vector<Individual> diversity_;
    ParetoArchive archive_;
    std::size_t outer_ = 0;
    std::size_t inner_ = 0;
    std::size_t evaluations_ = 0;
};

inline ParetoArchive run_moss(const ProblemInstance& instance, const MossConfig& config)
{
    return MossSolver(instance, config).run();
}

}  // namespace rlip
