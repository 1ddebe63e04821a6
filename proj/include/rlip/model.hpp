#pragma once

// Reliable capacitated location-inventory model: instance data, solutions,
// exact objective evaluation and constraint checking.
//
// Facilities fail independently with a common probability q. A customer is
// served by its level-r facility with probability q^r (1 - q), i.e. when the
// facility at level r works and all lower levels have failed. A customer that
// has real assignments only at levels 0..s-1 is "lost" at level s and pays
// its penalty with probability q^s.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace rlip {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

enum class DistanceMetric { SquaredEuclidean, Euclidean };

inline double distance(const Point& a, const Point& b, DistanceMetric metric)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double sq = dx * dx + dy * dy;
    return metric == DistanceMetric::SquaredEuclidean ? sq : std::sqrt(sq);
}

struct CustomerRecord {
    std::int64_t id = 0;
    Point location;
    double demand = 0.0;   // per year
    double penalty = 0.0;  // per unit of demand when lost

    friend bool operator==(const CustomerRecord&, const CustomerRecord&) = default;
};

struct SiteRecord {
    std::int64_t id = 0;
    Point location;
    double setup_cost = 0.0;
    double holding_cost = 0.0;     // per unit and year
    double order_cost = 0.0;       // per order
    double unit_order_cost = 0.0;  // per unit ordered
    double capacity = 0.0;         // demand units

    friend bool operator==(const SiteRecord&, const SiteRecord&) = default;
};

/// Problem data. Sites and customers are addressed by their position in the
/// respective vectors; the `id` fields are external labels (used for output
/// and as the distance tie-break key).
class ProblemInstance {
public:
    ProblemInstance() = default;

    /// Builds the instance and derives the distance matrix from coordinates.
    ProblemInstance(std::vector<CustomerRecord> customers, std::vector<SiteRecord> sites,
                    double failure_probability, std::size_t max_levels,
                    DistanceMetric metric = DistanceMetric::SquaredEuclidean)
        : customers_(std::move(customers))
        , sites_(std::move(sites))
        , q_(failure_probability)
        , levels_(max_levels)
        , metric_(metric)
    {
        recompute_distances();
        validate();
    }

    /// Builds the instance with an explicit |I| x |J| row-major cost matrix.
    ProblemInstance(std::vector<CustomerRecord> customers, std::vector<SiteRecord> sites,
                    double failure_probability, std::size_t max_levels,
                    std::vector<double> distance_matrix)
        : customers_(std::move(customers))
        , sites_(std::move(sites))
        , q_(failure_probability)
        , levels_(max_levels)
        , distances_(std::move(distance_matrix))
    {
        validate();
    }

    const std::vector<CustomerRecord>& customers() const noexcept { return customers_; }
    const std::vector<SiteRecord>& sites() const noexcept { return sites_; }
    std::size_t num_customers() const noexcept { return customers_.size(); }
    std::size_t num_sites() const noexcept { return sites_.size(); }
    double failure_probability() const noexcept { return q_; }
    std::size_t max_levels() const noexcept { return levels_; }
    DistanceMetric metric() const noexcept { return metric_; }

    double distance(std::size_t customer, std::size_t site) const
    {
        return distances_[customer * sites_.size() + site];
    }
    const std::vector<double>& distance_matrix() const noexcept { return distances_; }

    void set_failure_probability(double q)
    {
        q_ = q;
        validate();
    }

    void set_max_levels(std::size_t levels)
    {
        levels_ = levels;
        validate();
    }

    void set_metric(DistanceMetric metric)
    {
        metric_ = metric;
        recompute_distances();
    }

    /// Throws std::invalid_argument naming the first broken invariant.
    void validate() const
    {
        if (!(q_ >= 0.0 && q_ <= 1.0))
            throw std::invalid_argument("failure probability must lie in [0,1]");
        if (sites_.empty())
            throw std::invalid_argument("instance has no candidate sites");
        if (levels_ < 1 || levels_ > sites_.size())
            throw std::invalid_argument("assignment levels R must satisfy 1 <= R <= |J|");
        std::unordered_set<std::int64_t> ids;
        for (const auto& c : customers_) {
            if (!(c.demand >= 0.0) || !std::isfinite(c.demand))
                throw std::invalid_argument("customer " + std::to_string(c.id) + ": demand must be >= 0");
            if (!(c.penalty >= 0.0) || !std::isfinite(c.penalty))
                throw std::invalid_argument("customer " + std::to_string(c.id) + ": penalty must be >= 0");
        }
        for (const auto& s : sites_) {
            const std::string who = "site " + std::to_string(s.id);
            if (!ids.insert(s.id).second)
                throw std::invalid_argument(who + ": duplicate site id");
            for (double v : {s.setup_cost, s.holding_cost, s.order_cost, s.unit_order_cost, s.capacity}) {
                if (!(v > 0.0) || !std::isfinite(v))
                    throw std::invalid_argument(who + ": costs and capacity must be > 0");
            }
        }
        if (distances_.size() != customers_.size() * sites_.size())
            throw std::invalid_argument("distance matrix must have shape |I| x |J|");
        for (double d : distances_) {
            if (!(d >= 0.0) || !std::isfinite(d))
                throw std::invalid_argument("distance matrix entries must be finite and >= 0");
        }
    }

    friend bool operator==(const ProblemInstance&, const ProblemInstance&) = default;

private:
    void recompute_distances()
    {
        distances_.assign(customers_.size() * sites_.size(), 0.0);
        for (std::size_t i = 0; i < customers_.size(); ++i)
            for (std::size_t j = 0; j < sites_.size(); ++j)
                distances_[i * sites_.size() + j] =
                    rlip::distance(customers_[i].location, sites_[j].location, metric_);
    }

    std::vector<CustomerRecord> customers_;
    std::vector<SiteRecord> sites_;
    double q_ = 0.0;
    std::size_t levels_ = 1;
    DistanceMetric metric_ = DistanceMetric::SquaredEuclidean;
    std::vector<double> distances_;
};

/// X, Y and Z in compact form.
///   open[j]              X_j
///   assignment[i][r]     site index with Y_ijr = 1 (at most one), or none
///   lost_level[i]        s with Z_is = 1, or none
struct Solution {
    std::vector<std::uint8_t> open;
    std::vector<std::vector<std::optional<std::size_t>>> assignment;
    std::vector<std::optional<std::size_t>> lost_level;

    static Solution empty(const ProblemInstance& instance)
    {
        Solution s;
        s.open.assign(instance.num_sites(), 0);
        s.assignment.assign(instance.num_customers(),
                            std::vector<std::optional<std::size_t>>(instance.max_levels()));
        s.lost_level.assign(instance.num_customers(), std::nullopt);
        return s;
    }

    std::size_t open_count() const
    {
        std::size_t n = 0;
        for (auto b : open) n += b != 0;
        return n;
    }

    friend bool operator==(const Solution&, const Solution&) = default;
};

struct ObjectiveVector {
    double obj1 = 0.0;  // setup + inventory + ordering cost
    double obj2 = 0.0;  // worst expected customer cost

    friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
};

/// Minimisation dominance: a <= b in both objectives, strictly in one.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept
{
    return a.obj1 <= b.obj1 && a.obj2 <= b.obj2 && (a.obj1 < b.obj1 || a.obj2 < b.obj2);
}

inline bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) noexcept
{
    return a.obj1 <= b.obj1 && a.obj2 <= b.obj2;
}

/// Probability that the level-r facility is the one serving: q^r (1 - q).
inline double level_weight(double q, std::size_t level)
{
    return std::pow(q, static_cast<double>(level)) * (1.0 - q);
}

/// Probability that every one of the first `levels` facilities failed: q^levels.
inline double loss_probability(double q, std::size_t levels)
{
    return std::pow(q, static_cast<double>(levels));
}

namespace detail {

inline void require_shape(const ProblemInstance& instance, const Solution& solution)
{
    if (solution.open.size() != instance.num_sites() ||
        solution.assignment.size() != instance.num_customers() ||
        solution.lost_level.size() != instance.num_customers())
        throw std::invalid_argument("solution shape does not match instance");
    for (const auto& levels : solution.assignment) {
        if (levels.size() != instance.max_levels())
            throw std::invalid_argument("solution level count does not match instance R");
        for (const auto& site : levels)
            if (site && *site >= instance.num_sites())
                throw std::domain_error("solution references unknown site index");
    }
}

}  // namespace detail

/// Expected annual demand served by `site`: sum over (i, r) of gamma_i q^r (1-q).
inline double expected_demand(const ProblemInstance& instance, const Solution& solution, std::size_t site)
{
    if (site >= instance.num_sites())
        throw std::domain_error("unknown site index " + std::to_string(site));
    detail::require_shape(instance, solution);
    const double q = instance.failure_probability();
    double total = 0.0;
    for (std::size_t i = 0; i < instance.num_customers(); ++i) {
        const auto& levels = solution.assignment[i];
        for (std::size_t r = 0; r < levels.size(); ++r)
            if (levels[r] == site)
                total += instance.customers()[i].demand * level_weight(q, r);
    }
    return total;
}

/// Cost of one site given its expected demand: EOQ inventory plus variable
/// ordering cost, plus setup when open.
inline double site_cost(const SiteRecord& site, bool open, double expected_demand)
{
    return (open ? site.setup_cost : 0.0) +
           std::sqrt(2.0 * site.order_cost * site.holding_cost * expected_demand) +
           site.unit_order_cost * expected_demand;
}

inline double evaluate_obj1(const ProblemInstance& instance, const Solution& solution)
{
    detail::require_shape(instance, solution);
    const double q = instance.failure_probability();
    std::vector<double> demand(instance.num_sites(), 0.0);
    for (std::size_t i = 0; i < instance.num_customers(); ++i) {
        const auto& levels = solution.assignment[i];
        for (std::size_t r = 0; r < levels.size(); ++r)
            if (levels[r])
                demand[*levels[r]] += instance.customers()[i].demand * level_weight(q, r);
    }
    double total = 0.0;
    for (std::size_t j = 0; j < instance.num_sites(); ++j)
        total += site_cost(instance.sites()[j], solution.open[j] != 0, demand[j]);
    return total;
}

/// Expected transport cost over all assigned levels plus the expected penalty.
inline double customer_expected_cost(const ProblemInstance& instance, const Solution& solution,
                                     std::size_t customer)
{
    if (customer >= instance.num_customers())
        throw std::domain_error("unknown customer index " + std::to_string(customer));
    detail::require_shape(instance, solution);
    const double q = instance.failure_probability();
    const auto& rec = instance.customers()[customer];
    const auto& levels = solution.assignment[customer];
    double cost = 0.0;
    for (std::size_t r = 0; r < levels.size(); ++r)
        if (levels[r])
            cost += rec.demand * instance.distance(customer, *levels[r]) * level_weight(q, r);
    if (const auto s = solution.lost_level[customer])
        cost += rec.demand * rec.penalty * loss_probability(q, *s);
    return cost;
}

inline double evaluate_obj2(const ProblemInstance& instance, const Solution& solution)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < instance.num_customers(); ++i)
        worst = std::max(worst, customer_expected_cost(instance, solution, i));
    return worst;
}

inline ObjectiveVector evaluate(const ProblemInstance& instance, const Solution& solution)
{
    return {evaluate_obj1(instance, solution), evaluate_obj2(instance, solution)};
}

enum class Constraint {
    Structure,       // shape / index / binary-domain problems
    LevelCoverage,   // each (i, r) served or covered by an earlier loss marker
    DistinctSites,   // a site appears at most once per customer
    Capacity,        // assigned nominal demand within K_j X_j
    OpenSite,        // assignments only to open sites
    FacilityCount,   // exactly P open sites, when requested
};

inline const char* to_string(Constraint c)
{
    switch (c) {
    case Constraint::Structure: return "structure";
    case Constraint::LevelCoverage: return "level-coverage";
    case Constraint::DistinctSites: return "distinct-sites";
    case Constraint::Capacity: return "capacity";
    case Constraint::OpenSite: return "open-site";
    case Constraint::FacilityCount: return "facility-count";
    }
    return "unknown";
}

struct Violation {
    Constraint constraint;
    std::optional<std::size_t> customer;
    std::optional<std::size_t> site;
    std::optional<std::size_t> level;
    std::string message;
};

struct FeasibilityReport {
    std::vector<Violation> violations;

    bool feasible() const noexcept { return violations.empty(); }

    std::size_t count(Constraint c) const
    {
        std::size_t n = 0;
        for (const auto& v : violations) n += v.constraint == c;
        return n;
    }
};

/// Reports every violated constraint; never throws on infeasible input.
inline FeasibilityReport check_feasibility(const ProblemInstance& instance, const Solution& solution,
                                           std::optional<std::size_t> facility_count = std::nullopt)
{
    FeasibilityReport report;
    auto add = [&](Constraint c, std::optional<std::size_t> i, std::optional<std::size_t> j,
                   std::optional<std::size_t> r, std::string msg) {
        report.violations.push_back({c, i, j, r, std::move(msg)});
    };

    const std::size_t n_sites = instance.num_sites();
    const std::size_t n_customers = instance.num_customers();
    const std::size_t levels = instance.max_levels();

    if (solution.open.size() != n_sites || solution.assignment.size() != n_customers ||
        solution.lost_level.size() != n_customers) {
        add(Constraint::Structure, {}, {}, {}, "solution shape does not match instance");
        return report;
    }
    for (std::size_t j = 0; j < n_sites; ++j)
        if (solution.open[j] > 1) add(Constraint::Structure, {}, j, {}, "X_j is not binary");

    std::vector<double> load(n_sites, 0.0);
    for (std::size_t i = 0; i < n_customers; ++i) {
        const auto& row = solution.assignment[i];
        if (row.size() != levels) {
            add(Constraint::Structure, i, {}, {}, "assignment row length differs from R");
            continue;
        }
        const auto lost = solution.lost_level[i];
        if (lost && *lost >= levels) {
            add(Constraint::Structure, i, {}, *lost, "loss marker beyond last level");
            continue;
        }
        bool bad_index = false;
        for (std::size_t r = 0; r < levels; ++r) {
            if (row[r] && *row[r] >= n_sites) {
                add(Constraint::Structure, i, {}, r, "unknown site index");
                bad_index = true;
            }
        }
        if (bad_index) continue;

        for (std::size_t r = 0; r < levels; ++r) {
            const bool assigned = row[r].has_value();
            const bool covered = lost && *lost <= r;
            if (assigned == covered)
                add(Constraint::LevelCoverage, i, {}, r,
                    assigned ? "level both assigned and covered by a loss marker"
                             : "level neither assigned nor covered by a loss marker");
        }
        for (std::size_t r = 0; r < levels; ++r) {
            if (!row[r]) continue;
            const std::size_t j = *row[r];
            for (std::size_t t = r + 1; t < levels; ++t)
                if (row[t] == j) add(Constraint::DistinctSites, i, j, t, "site used at two levels");
            if (!solution.open[j]) add(Constraint::OpenSite, i, j, r, "assigned to a closed site");
            load[j] += instance.customers()[i].demand;
        }
    }
    for (std::size_t j = 0; j < n_sites; ++j) {
        const double cap = solution.open[j] ? instance.sites()[j].capacity : 0.0;
        if (load[j] > cap) add(Constraint::Capacity, {}, j, {}, "assigned demand exceeds capacity");
    }
    if (facility_count && solution.open_count() != *facility_count)
        add(Constraint::FacilityCount, {}, {}, {}, "open site count differs from P");
    return report;
}

}  // namespace rlip
