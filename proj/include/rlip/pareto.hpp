#pragma once

// Front utilities and the two comparison metrics (spacing, diversity).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "rlip/decoder.hpp"
#include "rlip/model.hpp"

namespace rlip {

/// Indices of points not dominated by any other point. Equal points do not
/// dominate each other, so duplicates are all kept.
inline std::vector<std::size_t> filter_non_dominated(std::span<const ObjectiveVector> points)
{
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t k = 0; k < points.size() && !dominated; ++k)
            dominated = k != i && dominates(points[k], points[i]);
        if (!dominated) keep.push_back(i);
    }
    return keep;
}

inline bool mutually_non_dominated(std::span<const ObjectiveVector> points)
{
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t k = 0; k < points.size(); ++k)
            if (i != k && dominates(points[i], points[k])) return false;
    return true;
}

inline std::vector<ObjectiveVector> sorted_by_obj1(std::span<const ObjectiveVector> front)
{
    std::vector<ObjectiveVector> v(front.begin(), front.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        return a.obj1 != b.obj1 ? a.obj1 < b.obj1 : a.obj2 < b.obj2;
    });
    return v;
}

/// Normalised mean absolute deviation of consecutive gaps along the front
/// (ordered by obj1). No value for fewer than two points or zero mean gap.
inline std::optional<double> spacing(std::span<const ObjectiveVector> front)
{
    if (front.size() < 2) return std::nullopt;
    const auto pts = sorted_by_obj1(front);
    std::vector<double> gaps(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        gaps[i] = std::hypot(pts[i + 1].obj1 - pts[i].obj1, pts[i + 1].obj2 - pts[i].obj2);
    const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    if (!(mean > 0.0)) return std::nullopt;
    double dev = 0.0;
    for (double g : gaps) dev += std::abs(mean - g);
    return dev / (static_cast<double>(gaps.size()) * mean);
}

/// Maximum spread: Euclidean length of the per-objective range vector.
inline double diversity(std::span<const ObjectiveVector> front)
{
    if (front.empty()) return 0.0;
    auto [lo1, hi1] = std::minmax_element(front.begin(), front.end(),
                                          [](const auto& a, const auto& b) { return a.obj1 < b.obj1; });
    auto [lo2, hi2] = std::minmax_element(front.begin(), front.end(),
                                          [](const auto& a, const auto& b) { return a.obj2 < b.obj2; });
    return std::hypot(hi1->obj1 - lo1->obj1, hi2->obj2 - lo2->obj2);
}

/// Share of `reference` matched component-wise within `tol` by some point of `front`.
inline double coverage_fraction(std::span<const ObjectiveVector> front, std::span<const ObjectiveVector> reference,
                                double tol)
{
    if (reference.empty()) return 1.0;
    std::size_t hit = 0;
    for (const auto& b : reference) {
        hit += std::any_of(front.begin(), front.end(), [&](const auto& a) {
            return std::abs(a.obj1 - b.obj1) <= tol && std::abs(a.obj2 - b.obj2) <= tol;
        });
    }
    return static_cast<double>(hit) / static_cast<double>(reference.size());
}

struct ArchiveEntry {
    Genotype genotype;
    Solution solution;
    ObjectiveVector objectives;
};

/// Running set of mutually non-dominated entries with distinct objective
/// vectors. An entry leaves only when a dominating entry arrives.
class ParetoArchive {
public:
    /// Returns true when the candidate was admitted.
    bool insert(const ArchiveEntry& candidate)
    {
        for (const auto& e : entries_)
            if (weakly_dominates(e.objectives, candidate.objectives)) return false;
        std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(candidate.objectives, e.objectives); });
        entries_.push_back(candidate);
        return true;
    }

    const std::vector<ArchiveEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    std::vector<ObjectiveVector> objectives() const
    {
        std::vector<ObjectiveVector> v;
        v.reserve(entries_.size());
        for (const auto& e : entries_) v.push_back(e.objectives);
        return v;
    }

    /// Entries ordered by obj1 then obj2.
    std::vector<ArchiveEntry> sorted() const
    {
        auto v = entries_;
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            return a.objectives.obj1 != b.objectives.obj1 ? a.objectives.obj1 < b.objectives.obj1
                                                          : a.objectives.obj2 < b.objectives.obj2;
        });
        return v;
    }

private:
    std::vector<ArchiveEntry> entries_;
};

/// For every point of `older`, some point of `newer` is equal or dominating.
inline bool weakly_dominates_set(std::span<const ObjectiveVector> newer, std::span<const ObjectiveVector> older)
{
    return std::all_of(older.begin(), older.end(), [&](const auto& o) {
        return std::any_of(newer.begin(), newer.end(), [&](const auto& n) { return weakly_dominates(n, o); });
    });
}

}  // namespace rlip
