#pragma once

// Response surface tuning of three algorithm parameters.
//
// A 2^3 factorial design with centre replicates is run around the current
// region; a first-order model is fitted in coded units. Without significant
// curvature the search moves along the steepest-descent direction until the
// response stops improving and re-centres the region there. With curvature
// (or when no move helps) a face-centred augmentation supports a full
// quadratic whose stationary point is checked by a confirmation run.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rlip::rsm {

inline constexpr std::size_t kFactors = 3;
using Levels = std::array<double, kFactors>;

struct FactorSpec {
    std::string name;
    double low = 0.0;
    double high = 1.0;

    double center() const { return 0.5 * (low + high); }
    double half_range() const { return 0.5 * (high - low); }
    double decode(double coded) const { return center() + coded * half_range(); }
    double encode(double natural) const { return (natural - center()) / half_range(); }
};

struct Bounds {
    double min = -std::numeric_limits<double>::infinity();
    double max = std::numeric_limits<double>::infinity();
};

/// Population >= 4, rates in [0,1].
inline std::array<Bounds, kFactors> default_bounds()
{
    return {Bounds{4.0, std::numeric_limits<double>::infinity()}, Bounds{0.0, 1.0}, Bounds{0.0, 1.0}};
}

/// Initial region for (population size, crossover rate, mutation rate).
inline std::array<FactorSpec, kFactors> default_factors()
{
    return {FactorSpec{"population", 30.0, 50.0}, FactorSpec{"crossover_rate", 0.60, 0.70},
            FactorSpec{"mutation_rate", 0.15, 0.25}};
}

struct DesignPoint {
    Levels coded{};
    Levels natural{};
    bool is_center = false;
};

namespace detail {

inline void require_three(std::span<const FactorSpec> factors)
{
    if (factors.size() != kFactors) throw std::invalid_argument("response surface design needs exactly 3 factors");
    for (const auto& f : factors)
        if (!(f.low < f.high)) throw std::invalid_argument("factor '" + f.name + "': low must be < high");
}

inline DesignPoint make_point(std::span<const FactorSpec> factors, Levels coded, bool center)
{
    DesignPoint p{coded, {}, center};
    for (std::size_t k = 0; k < kFactors; ++k) p.natural[k] = factors[k].decode(coded[k]);
    return p;
}

}  // namespace detail

/// 8 corners in standard (Yates) order followed by the centre replicates.
inline std::vector<DesignPoint> factorial_design(std::span<const FactorSpec> factors, std::size_t center_replicates)
{
    detail::require_three(factors);
    std::vector<DesignPoint> pts;
    for (unsigned run = 0; run < 8; ++run) {
        Levels coded{};
        for (std::size_t k = 0; k < kFactors; ++k) coded[k] = (run >> k) & 1u ? 1.0 : -1.0;
        pts.push_back(detail::make_point(factors, coded, false));
    }
    for (std::size_t c = 0; c < center_replicates; ++c) pts.push_back(detail::make_point(factors, {0, 0, 0}, true));
    return pts;
}

/// The six axial points at +-1 on each coded axis.
inline std::vector<DesignPoint> face_centered_points(std::span<const FactorSpec> factors)
{
    detail::require_three(factors);
    std::vector<DesignPoint> pts;
    for (std::size_t k = 0; k < kFactors; ++k)
        for (double sign : {-1.0, 1.0}) {
            Levels coded{};
            coded[k] = sign;
            pts.push_back(detail::make_point(factors, coded, false));
        }
    return pts;
}

struct FirstOrderFit {
    std::array<double, kFactors + 1> beta{};  // intercept, then one slope per coded factor
    double residual_ss = 0.0;
    double corner_mean = 0.0;
    double center_mean = 0.0;
    double center_se = 0.0;       // standard error of the centre mean
    bool curvature_testable = false;
    bool curvature = false;

    double predict(const Levels& coded) const
    {
        double y = beta[0];
        for (std::size_t k = 0; k < kFactors; ++k) y += beta[k + 1] * coded[k];
        return y;
    }
};

/// Least squares y = b0 + sum b_k x_k. Curvature is flagged when the corner
/// and centre means differ by more than `curvature_multiple` centre standard
/// errors (needs >= 2 centre runs).
inline FirstOrderFit fit_first_order(std::span<const DesignPoint> points, std::span<const double> responses,
                                     double curvature_multiple = 2.0)
{
    if (points.size() != responses.size()) throw std::invalid_argument("one response per design point required");
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd x(n, kFactors + 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        for (std::size_t k = 0; k < kFactors; ++k) x(i, static_cast<Eigen::Index>(k + 1)) = points[i].coded[k];
        y(i) = responses[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < static_cast<Eigen::Index>(kFactors + 1)) throw std::domain_error("singular first-order design");
    const Eigen::VectorXd b = qr.solve(y);

    FirstOrderFit fit;
    for (std::size_t k = 0; k <= kFactors; ++k) fit.beta[k] = b(static_cast<Eigen::Index>(k));
    fit.residual_ss = (y - x * b).squaredNorm();

    std::vector<double> corners, centers;
    for (std::size_t i = 0; i < points.size(); ++i) (points[i].is_center ? centers : corners).push_back(responses[i]);
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double e : v) s += e;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    fit.corner_mean = mean(corners);
    fit.center_mean = mean(centers);
    if (centers.size() >= 2 && !corners.empty()) {
        double ss = 0.0;
        for (double e : centers) ss += (e - fit.center_mean) * (e - fit.center_mean);
        const double sd = std::sqrt(ss / static_cast<double>(centers.size() - 1));
        fit.center_se = sd / std::sqrt(static_cast<double>(centers.size()));
        fit.curvature_testable = true;
        // rounding slack so noise-free planes are not flagged
        const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(fit.corner_mean) + std::abs(fit.center_mean));
        fit.curvature = std::abs(fit.corner_mean - fit.center_mean) > curvature_multiple * fit.center_se + slack;
    }
    return fit;
}

/// Moves `step` coded units from `from` along -grad/|grad|, decoded to
/// natural units and clamped to `bounds`. No value when the gradient is zero.
inline std::optional<Levels> steepest_descent_step(const FirstOrderFit& fit, std::span<const FactorSpec> factors,
                                                   const Levels& from, double step,
                                                   const std::array<Bounds, kFactors>& bounds = default_bounds())
{
    detail::require_three(factors);
    double norm = 0.0;
    for (std::size_t k = 0; k < kFactors; ++k) norm += fit.beta[k + 1] * fit.beta[k + 1];
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) return std::nullopt;
    Levels next{};
    for (std::size_t k = 0; k < kFactors; ++k) {
        const double coded = factors[k].encode(from[k]) - step * fit.beta[k + 1] / norm;
        next[k] = std::clamp(factors[k].decode(coded), bounds[k].min, bounds[k].max);
    }
    return next;
}

/// Full quadratic in coded units:
/// b0 + b1 x1 + b2 x2 + b3 x3 + b11 x1^2 + b22 x2^2 + b33 x3^2 + b12 x1x2 + b13 x1x3 + b23 x2x3.
struct SecondOrderFit {
    std::array<double, 10> coef{};
    std::optional<Levels> stationary;   // coded; none when the quadratic part is singular
    bool is_minimum = false;            // Hessian positive definite

    double predict(const Levels& x) const
    {
        return coef[0] + coef[1] * x[0] + coef[2] * x[1] + coef[3] * x[2] + coef[4] * x[0] * x[0] +
               coef[5] * x[1] * x[1] + coef[6] * x[2] * x[2] + coef[7] * x[0] * x[1] + coef[8] * x[0] * x[2] +
               coef[9] * x[1] * x[2];
    }
};

inline SecondOrderFit fit_second_order(std::span<const DesignPoint> points, std::span<const double> responses)
{
    if (points.size() != responses.size()) throw std::invalid_argument("one response per design point required");
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd x(n, 10);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& c = points[i].coded;
        x.row(i) << 1.0, c[0], c[1], c[2], c[0] * c[0], c[1] * c[1], c[2] * c[2], c[0] * c[1], c[0] * c[2],
            c[1] * c[2];
        y(i) = responses[i];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < 10) throw std::domain_error("singular second-order design");
    const Eigen::VectorXd b = qr.solve(y);

    SecondOrderFit fit;
    for (int k = 0; k < 10; ++k) fit.coef[static_cast<std::size_t>(k)] = b(k);
    Eigen::Matrix3d h;
    h << 2 * b(4), b(7), b(8),
         b(7), 2 * b(5), b(9),
         b(8), b(9), 2 * b(6);
    const Eigen::Vector3d g(b(1), b(2), b(3));
    Eigen::FullPivLU<Eigen::Matrix3d> lu(h);
    if (lu.isInvertible()) {
        const Eigen::Vector3d xs = lu.solve(-g);
        fit.stationary = Levels{xs(0), xs(1), xs(2)};
        fit.is_minimum = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(h).eigenvalues().minCoeff() > 0.0;
    }
    return fit;
}

struct TuneOptions {
    std::array<FactorSpec, kFactors> factors = default_factors();
    std::array<Bounds, kFactors> bounds = default_bounds();
    std::size_t center_replicates = 5;
    std::size_t replicates = 10;       // algorithm runs averaged per design point
    double step = 1.0;                 // coded units per descent move
    std::size_t max_descent_steps = 10;
    std::size_t max_region_moves = 3;
    double curvature_multiple = 2.0;
};

/// Lower is better. Called with natural factor levels and a replicate seed.
using ResponseFn = std::function<double(const Levels&, std::uint64_t)>;

struct TuneRecord {
    std::string phase;   // "design", "descent", "axial", "confirm"
    std::size_t region = 0;
    Levels natural{};
    double response = 0.0;
};

struct TuneResult {
    Levels best{};
    double best_response = 0.0;
    std::vector<FirstOrderFit> first_order_fits;
    std::optional<SecondOrderFit> second_order;
    std::vector<TuneRecord> history;
};

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b)
{
    auto splitmix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return splitmix(splitmix(splitmix(master) ^ a) ^ b);
}

inline TuneResult tune(const ResponseFn& response, const TuneOptions& opt, std::uint64_t master_seed)
{
    TuneResult result;
    std::uint64_t evaluation = 0;
    std::size_t region_index = 0;
    auto measure = [&](const Levels& natural, const std::string& phase) {
        double sum = 0.0;
        for (std::size_t r = 0; r < opt.replicates; ++r) sum += response(natural, mix_seed(master_seed, evaluation, r));
        ++evaluation;
        const double mean = sum / static_cast<double>(std::max<std::size_t>(opt.replicates, 1));
        result.history.push_back({phase, region_index, natural, mean});
        if (result.history.size() == 1 || mean < result.best_response) {
            result.best = natural;
            result.best_response = mean;
        }
        return mean;
    };

    auto region = opt.factors;
    std::vector<DesignPoint> design;
    std::vector<double> observed;
    for (std::size_t move = 0; move <= opt.max_region_moves; ++move) {
        region_index = move;
        design = factorial_design(region, opt.center_replicates);
        observed.clear();
        for (const auto& p : design) observed.push_back(measure(p.natural, "design"));
        const auto fit = fit_first_order(design, observed, opt.curvature_multiple);
        result.first_order_fits.push_back(fit);
        if (fit.curvature || move == opt.max_region_moves) break;

        Levels center{};
        for (std::size_t k = 0; k < kFactors; ++k) center[k] = region[k].center();
        Levels current = center;
        double current_response = fit.center_mean;
        for (std::size_t s = 0; s < opt.max_descent_steps; ++s) {
            const auto next = steepest_descent_step(fit, region, current, opt.step, opt.bounds);
            if (!next || *next == current) break;
            const double r = measure(*next, "descent");
            if (r >= current_response) break;
            current = *next;
            current_response = r;
        }
        if (current == center) break;
        for (std::size_t k = 0; k < kFactors; ++k) {
            const double half = region[k].half_range();
            double lo = current[k] - half, hi = current[k] + half;
            if (lo < opt.bounds[k].min) {
                hi += opt.bounds[k].min - lo;
                lo = opt.bounds[k].min;
            }
            if (hi > opt.bounds[k].max) {
                lo = std::max(opt.bounds[k].min, lo - (hi - opt.bounds[k].max));
                hi = opt.bounds[k].max;
            }
            region[k].low = lo;
            region[k].high = hi;
        }
    }

    // optimum determination on the final region
    auto axial = face_centered_points(region);
    for (const auto& p : axial) {
        design.push_back(p);
        observed.push_back(measure(p.natural, "axial"));
    }
    const auto quad = fit_second_order(design, observed);
    result.second_order = quad;
    if (quad.stationary && quad.is_minimum) {
        Levels natural{};
        for (std::size_t k = 0; k < kFactors; ++k)
            natural[k] = std::clamp(region[k].decode(std::clamp((*quad.stationary)[k], -1.0, 1.0)), opt.bounds[k].min,
                                    opt.bounds[k].max);
        measure(natural, "confirm");
    }
    return result;
}

}  // namespace rlip::rsm
