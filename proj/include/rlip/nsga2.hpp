#pragma once

// Elitist non-dominated sorting GA over (obj1, obj2).
//
// Each generation draws nc = 2 round(pc npop / 2) crossover children and
// nm = round(pm npop) mutants from binary tournaments on (rank, crowding),
// evaluates them, and keeps the best npop of parents + offspring. Every
// evaluated individual is also offered to an external Pareto archive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rlip/decoder.hpp"
#include "rlip/model.hpp"
#include "rlip/parallel.hpp"
#include "rlip/pareto.hpp"

namespace rlip {

/// Fast non-dominated sort. Fronts are index lists in ascending index order.
inline std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const ObjectiveVector> points)
{
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> counter(n, 0);
    std::vector<std::vector<std::size_t>> fronts;
    std::vector<std::size_t> current;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t o = 0; o < n; ++o) {
            if (dominates(points[p], points[o]))
                dominated_by[p].push_back(o);
            else if (dominates(points[o], points[p]))
                ++counter[p];
        }
        if (counter[p] == 0) current.push_back(p);
    }
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : current)
            for (std::size_t o : dominated_by[p])
                if (--counter[o] == 0) next.push_back(o);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(current));
        current = std::move(next);
    }
    return fronts;
}

/// Crowding distance within one front; extremes get +infinity.
inline std::vector<double> crowding_distance(std::span<const ObjectiveVector> front)
{
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    auto accumulate_objective = [&](auto key) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return key(front[a]) < key(front[b]); });
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double range = key(front[order.back()]) - key(front[order.front()]);
        if (!(range > 0.0)) return;
        for (std::size_t k = 1; k + 1 < n; ++k)
            dist[order[k]] += (key(front[order[k + 1]]) - key(front[order[k - 1]])) / range;
    };
    accumulate_objective([](const ObjectiveVector& v) { return v.obj1; });
    accumulate_objective([](const ObjectiveVector& v) { return v.obj2; });
    return dist;
}

struct RankInfo {
    std::vector<std::size_t> rank;    // 0 = first front
    std::vector<double> crowding;
};

inline RankInfo rank_population(std::span<const ObjectiveVector> points)
{
    RankInfo info{std::vector<std::size_t>(points.size(), 0), std::vector<double>(points.size(), 0.0)};
    const auto fronts = non_dominated_sort(points);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        std::vector<ObjectiveVector> pts;
        for (auto i : fronts[f]) pts.push_back(points[i]);
        const auto cd = crowding_distance(pts);
        for (std::size_t k = 0; k < fronts[f].size(); ++k) {
            info.rank[fronts[f][k]] = f;
            info.crowding[fronts[f][k]] = cd[k];
        }
    }
    return info;
}

/// Crowded comparison: lower rank wins, then larger crowding distance.
inline bool crowded_less(const RankInfo& info, std::size_t a, std::size_t b)
{
    if (info.rank[a] != info.rank[b]) return info.rank[a] < info.rank[b];
    return info.crowding[a] > info.crowding[b];
}

/// Winner of a binary tournament between a and b; ties go to a.
inline std::size_t tournament_winner(const RankInfo& info, std::size_t a, std::size_t b)
{
    return crowded_less(info, b, a) ? b : a;
}

/// Indices sorted best-first by the crowded comparison (stable on index).
inline std::vector<std::size_t> crowded_order(const RankInfo& info)
{
    std::vector<std::size_t> order(info.rank.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return crowded_less(info, a, b); });
    return order;
}

/// Survivor selection: whole fronts while they fit, the overflowing front
/// truncated by descending crowding distance. Returns kept indices best-first.
inline std::vector<std::size_t> select_survivors(std::span<const ObjectiveVector> points, std::size_t count)
{
    auto order = crowded_order(rank_population(points));
    order.resize(std::min(count, order.size()));
    return order;
}

struct Individual {
    Genotype genotype;
    Solution solution;
    ObjectiveVector objectives;
};

/// Settings shared by both metaheuristics.
struct SolverConfig {
    std::uint64_t seed = 1;
    std::optional<std::size_t> facilities;        // P
    std::size_t threads = 1;
    std::optional<std::size_t> max_evaluations;   // hard budget, counted in decodes
};

struct NsgaConfig {
    std::size_t population = 60;
    double crossover_rate = 0.7;
    double mutation_rate = 0.5;
    std::size_t iterations = 60;
    SolverConfig solver;

    std::size_t crossover_children() const
    {
        return 2 * static_cast<std::size_t>(std::lround(crossover_rate * static_cast<double>(population) / 2.0));
    }
    std::size_t mutants() const
    {
        return static_cast<std::size_t>(std::lround(mutation_rate * static_cast<double>(population)));
    }

    void validate(const ProblemInstance& instance) const
    {
        if (population < 4 || population % 2 != 0)
            throw std::invalid_argument("population size must be an even number >= 4");
        if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0) || !(mutation_rate >= 0.0 && mutation_rate <= 1.0))
            throw std::invalid_argument("crossover and mutation rates must lie in [0,1]");
        if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
        if (solver.facilities && *solver.facilities > instance.num_sites())
            throw std::domain_error("facility count P exceeds number of candidate sites");
    }
};

// Variation operators shared with scatter search.
namespace ops {

/// One-point crossover on site bits and order crossover (OX) on priorities.
inline std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b, Rng& rng)
{
    Genotype c1 = a, c2 = b;
    const std::size_t nb = a.site_bits.size();
    if (nb > 1) {
        const std::size_t cut = std::uniform_int_distribution<std::size_t>(1, nb - 1)(rng);
        for (std::size_t j = cut; j < nb; ++j) std::swap(c1.site_bits[j], c2.site_bits[j]);
    }
    const std::size_t n = a.priority.size();
    if (n > 1) {
        std::size_t lo = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        std::size_t hi = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
        if (lo > hi) std::swap(lo, hi);
        auto ox = [&](const std::vector<std::size_t>& keep, const std::vector<std::size_t>& fill) {
            std::vector<std::size_t> child(n);
            std::vector<std::uint8_t> taken(n, 0);
            for (std::size_t k = lo; k <= hi; ++k) {
                child[k] = keep[k];
                taken[keep[k]] = 1;
            }
            std::size_t pos = (hi + 1) % n;
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t v = fill[(hi + 1 + k) % n];
                if (taken[v]) continue;
                child[pos] = v;
                pos = (pos + 1) % n;
            }
            return child;
        };
        c1.priority = ox(a.priority, b.priority);
        c2.priority = ox(b.priority, a.priority);
    }
    return {std::move(c1), std::move(c2)};
}

/// Per-bit flip at rate pm/|J| plus one priority swap with probability pm.
/// With `force_change`, one random bit is flipped when no bit flipped.
inline void mutate(Genotype& g, double pm, Rng& rng, bool force_change)
{
    const std::size_t nb = g.site_bits.size();
    std::bernoulli_distribution flip(std::clamp(pm / static_cast<double>(std::max<std::size_t>(nb, 1)), 0.0, 1.0));
    bool changed = false;
    for (auto& b : g.site_bits) {
        if (flip(rng)) {
            b = b ? 0 : 1;
            changed = true;
        }
    }
    if (force_change && !changed && nb > 0) {
        auto& b = g.site_bits[std::uniform_int_distribution<std::size_t>(0, nb - 1)(rng)];
        b = b ? 0 : 1;
    }
    const std::size_t n = g.priority.size();
    if (n > 1 && std::bernoulli_distribution(std::clamp(pm, 0.0, 1.0))(rng)) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        const std::size_t i = pick(rng), k = pick(rng);
        std::swap(g.priority[i], g.priority[k]);
    }
}

inline void conform(Genotype& g, const SolverConfig& cfg, Rng& rng)
{
    if (cfg.facilities) g.site_bits = repair(std::move(g.site_bits), *cfg.facilities, rng);
}

/// Decodes and evaluates genotypes; pure per index so safe to run in parallel.
inline std::vector<Individual> evaluate_all(const ProblemInstance& instance, std::vector<Genotype> genotypes,
                                            const SolverConfig& cfg)
{
    std::vector<Individual> out(genotypes.size());
    parallel_for(genotypes.size(), cfg.threads, [&](std::size_t k) {
        out[k].genotype = std::move(genotypes[k]);
        out[k].solution = decode(instance, out[k].genotype, DecoderConfig{cfg.facilities, 0});
        out[k].objectives = evaluate(instance, out[k].solution);
    });
    return out;
}

inline std::vector<ObjectiveVector> objectives_of(std::span<const Individual> pop)
{
    std::vector<ObjectiveVector> v;
    v.reserve(pop.size());
    for (const auto& ind : pop) v.push_back(ind.objectives);
    return v;
}

}  // namespace ops

/// Generation-stepped NSGA-II. `step()` runs one generation and returns false
/// once the iteration or evaluation budget is exhausted.
class Nsga2Solver {
public:
    Nsga2Solver(const ProblemInstance& instance, NsgaConfig config)
        : instance_(instance), config_(config), rng_(config.solver.seed)
    {
        config_.validate(instance_);
        std::vector<Genotype> init;
        const std::size_t n = budgeted(config_.population);
        for (std::size_t k = 0; k < n; ++k) init.push_back(random_genotype(instance_, config_.solver.facilities, rng_));
        population_ = absorb(std::move(init));
        rank_ = rank_population(ops::objectives_of(population_));
    }

    bool done() const
    {
        return population_.empty() || generation_ >= config_.iterations ||
               (config_.solver.max_evaluations && evaluations_ >= *config_.solver.max_evaluations);
    }

    bool step()
    {
        if (done()) return false;
        std::vector<Genotype> offspring;
        const std::size_t n = population_.size();
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        auto tournament = [&] { return tournament_winner(rank_, pick(rng_), pick(rng_)); };

        for (std::size_t k = 0; k < config_.crossover_children() / 2; ++k) {
            const auto& a = population_[tournament()].genotype;
            const auto& b = population_[tournament()].genotype;
            auto [c1, c2] = ops::crossover(a, b, rng_);
            offspring.push_back(std::move(c1));
            offspring.push_back(std::move(c2));
        }
        for (std::size_t k = 0; k < config_.mutants(); ++k) {
            Genotype g = population_[tournament()].genotype;
            ops::mutate(g, config_.mutation_rate, rng_, true);
            offspring.push_back(std::move(g));
        }
        for (auto& g : offspring) ops::conform(g, config_.solver, rng_);
        offspring.resize(budgeted(offspring.size()));

        auto children = absorb(std::move(offspring));
        for (auto& c : children) population_.push_back(std::move(c));
        const auto keep = select_survivors(ops::objectives_of(population_), config_.population);
        std::vector<Individual> next;
        next.reserve(keep.size());
        for (auto i : keep) next.push_back(std::move(population_[i]));
        population_ = std::move(next);
        rank_ = rank_population(ops::objectives_of(population_));
        ++generation_;
        return true;
    }

    ParetoArchive run()
    {
        while (step()) {}
        return archive_;
    }

    const ParetoArchive& archive() const noexcept { return archive_; }
    const std::vector<Individual>& population() const noexcept { return population_; }
    std::size_t generation() const noexcept { return generation_; }
    std::size_t evaluations() const noexcept { return evaluations_; }

    /// First front of the current population.
    std::vector<ObjectiveVector> first_front() const
    {
        std::vector<ObjectiveVector> v;
        for (std::size_t i = 0; i < population_.size(); ++i)
            if (rank_.rank[i] == 0) v.push_back(population_[i].objectives);
        return v;
    }

private:
    std::size_t budgeted(std::size_t wanted) const
    {
        if (!config_.solver.max_evaluations) return wanted;
        const std::size_t left = *config_.solver.max_evaluations > evaluations_
                                     ? *config_.solver.max_evaluations - evaluations_
                                     : 0;
        return std::min(wanted, left);
    }

    std::vector<Individual> absorb(std::vector<Genotype> genotypes)
    {
        auto evaluated = ops::evaluate_all(instance_, std::move(genotypes), config_.solver);
        evaluations_ += evaluated.size();
        for (const auto& ind : evaluated) archive_.insert({ind.genotype, ind.solution, ind.objectives});
        return evaluated;
    }

    const ProblemInstance& instance_;
    NsgaConfig config_;
    Rng rng_;
    std::vector<Individual> population_;
    RankInfo rank_;
    ParetoArchive archive_;
    std::size_t generation_ = 0;
    std::size_t evaluations_ = 0;
};

inline ParetoArchive run_nsga2(const ProblemInstance& instance, const NsgaConfig& config)
{
    return Nsga2Solver(instance, config).run();
}

}  // namespace rlip
