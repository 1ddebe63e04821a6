#include <catch_amalgamated.hpp>

#include <map>
#include <set>

#include "rlip/rsm.hpp"

using namespace rlip::rsm;
using Catch::Approx;

namespace {

std::vector<double> respond(const std::vector<DesignPoint>& pts, auto f)
{
    std::vector<double> y;
    for (const auto& p : pts) y.push_back(f(p.coded));
    return y;
}

}  // namespace

TEST_CASE("two-level factorial design with centre runs")
{
    const auto factors = default_factors();
    const auto pts = factorial_design(factors, 5);
    REQUIRE(pts.size() == 13);
    std::set<Levels> corners;
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK_FALSE(pts[k].is_center);
        for (double c : pts[k].coded) CHECK(std::abs(c) == 1.0);
        corners.insert(pts[k].coded);
    }
    CHECK(corners.size() == 8);
    for (std::size_t k = 8; k < 13; ++k) {
        CHECK(pts[k].is_center);
        CHECK(pts[k].natural[0] == Approx(40.0));
        CHECK(pts[k].natural[1] == Approx(0.65));
        CHECK(pts[k].natural[2] == Approx(0.20));
    }
    CHECK(pts[0].natural[0] == Approx(30.0));
    CHECK(pts[0].natural[1] == Approx(0.60));
    CHECK(pts[0].natural[2] == Approx(0.15));
    CHECK(pts[7].natural[0] == Approx(50.0));
    CHECK(pts[7].natural[2] == Approx(0.25));
    CHECK(factorial_design(factors, 0).size() == 8);
    CHECK(face_centered_points(factors).size() == 6);
}

TEST_CASE("coding round trip")
{
    const FactorSpec f{"x", 30.0, 50.0};
    CHECK(f.decode(-1) == 30.0);
    CHECK(f.decode(1) == 50.0);
    CHECK(f.encode(45.0) == 0.5);
}

TEST_CASE("first-order fit recovers a plane exactly")
{
    const auto pts = factorial_design(default_factors(), 5);
    const auto y = respond(pts, [](const Levels& x) { return 3.0 + 2.0 * x[0] - 1.0 * x[1] + 0.5 * x[2]; });
    const auto fit = fit_first_order(pts, y);
    CHECK(fit.beta[0] == Approx(3.0).margin(1e-9));
    CHECK(fit.beta[1] == Approx(2.0).margin(1e-9));
    CHECK(fit.beta[2] == Approx(-1.0).margin(1e-9));
    CHECK(fit.beta[3] == Approx(0.5).margin(1e-9));
    CHECK(fit.residual_ss == Approx(0.0).margin(1e-12));

    const auto flat = fit_first_order(pts, std::vector<double>(13, 7.0));
    CHECK(flat.beta[0] == Approx(7.0));
    for (int k = 1; k < 4; ++k) CHECK(flat.beta[k] == Approx(0.0).margin(1e-12));
}

TEST_CASE("curvature test compares corner and centre means")
{
    const auto pts = factorial_design(default_factors(), 5);
    std::vector<double> y(8, 12.0);
    for (double c : {10.0, 10.1, 9.9, 10.0, 10.0}) y.push_back(c);
    const auto bent = fit_first_order(pts, y);
    CHECK(bent.curvature_testable);
    CHECK(bent.corner_mean == Approx(12.0));
    CHECK(bent.center_mean == Approx(10.0));
    CHECK(bent.center_se == Approx(std::sqrt(0.02 / 4) / std::sqrt(5.0)));
    CHECK(bent.curvature);

    std::fill(y.begin(), y.begin() + 8, 10.05);
    CHECK_FALSE(fit_first_order(pts, y).curvature);

    const auto one_center = factorial_design(default_factors(), 1);
    CHECK_FALSE(fit_first_order(one_center, std::vector<double>(9, 1.0)).curvature_testable);
}

TEST_CASE("steepest descent moves against the gradient")
{
    const auto factors = default_factors();
    const Levels center{40.0, 0.65, 0.20};
    FirstOrderFit fit;
    fit.beta = {0.0, 1.0, 0.0, 0.0};
    const auto step = steepest_descent_step(fit, factors, center, 1.0);
    REQUIRE(step);
    CHECK((*step)[0] == Approx(30.0));
    CHECK((*step)[1] == Approx(0.65));
    CHECK((*step)[2] == Approx(0.20));

    fit.beta = {0.0, 3.0, -4.0, 0.0};
    const auto diag = steepest_descent_step(fit, factors, center, 1.0);
    CHECK((*diag)[0] == Approx(40.0 - 0.6 * 10.0));
    CHECK((*diag)[1] == Approx(0.65 + 0.8 * 0.05));

    fit.beta = {5.0, 0.0, 0.0, 0.0};
    CHECK_FALSE(steepest_descent_step(fit, factors, center, 1.0));

    fit.beta = {0.0, 0.0, 0.0, -1.0};
    const auto clamped = steepest_descent_step(fit, factors, center, 20.0);  // 0.20 + 20 * 0.05 = 1.2
    CHECK((*clamped)[2] == 1.0);
    fit.beta = {0.0, 1.0, 0.0, 0.0};
    CHECK((*steepest_descent_step(fit, factors, center, 10.0))[0] == 4.0);
}

TEST_CASE("second-order fit recovers a quadratic and its minimum")
{
    const auto factors = default_factors();
    auto pts = factorial_design(factors, 3);
    for (const auto& p : face_centered_points(factors)) pts.push_back(p);
    auto f = [](const Levels& x) {
        const double a = x[0] - 0.3, b = x[1] + 0.2, c = x[2] - 0.1;
        return 1.0 + 2.0 * a * a + 1.0 * b * b + 3.0 * c * c + 0.5 * a * b;
    };
    const auto fit = fit_second_order(pts, respond(pts, f));
    REQUIRE(fit.stationary);
    CHECK(fit.is_minimum);
    CHECK((*fit.stationary)[0] == Approx(0.3).margin(1e-9));
    CHECK((*fit.stationary)[1] == Approx(-0.2).margin(1e-9));
    CHECK((*fit.stationary)[2] == Approx(0.1).margin(1e-9));
    const Levels probe{0.7, -0.4, 0.9};
    CHECK(fit.predict(probe) == Approx(f(probe)).margin(1e-9));

    CHECK_THROWS_AS(fit_second_order(factorial_design(factors, 3), std::vector<double>(11, 0.0)), std::domain_error);
}

TEST_CASE("tuning walks downhill and is reproducible")
{
    TuneOptions opt;
    opt.replicates = 2;
    opt.center_replicates = 3;
    // planar, falling towards small populations, high pc and low pm
    auto response = [](const Levels& v, std::uint64_t) { return v[0] / 10.0 + 5.0 * (1.0 - v[1]) + 5.0 * v[2]; };
    const auto result = tune(response, opt, 5);
    const double at_start = response({40.0, 0.65, 0.20}, 0);
    CHECK(result.best_response < at_start);
    REQUIRE_FALSE(result.first_order_fits.empty());

    std::map<std::size_t, std::vector<double>> descent;
    for (const auto& h : result.history)
        if (h.phase == "descent") descent[h.region].push_back(h.response);
    CHECK_FALSE(descent.empty());
    for (const auto& [region, rs] : descent)
        for (std::size_t k = 1; k + 1 < rs.size(); ++k) CHECK(rs[k] < rs[k - 1]);

    for (const auto& h : result.history) {
        CHECK(h.natural[0] >= 4.0);
        CHECK(h.natural[1] >= 0.0);
        CHECK(h.natural[1] <= 1.0);
        CHECK(h.natural[2] >= 0.0);
        CHECK(h.natural[2] <= 1.0);
    }

    const auto again = tune(response, opt, 5);
    CHECK(again.best == result.best);
    CHECK(again.history.size() == result.history.size());
    CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 2));
}
