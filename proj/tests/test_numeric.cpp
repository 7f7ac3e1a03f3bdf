#include <catch_amalgamated.hpp>

#include "ctq/canonical_state.hpp"
#include "ctq/numeric.hpp"
#include "ctq/verify.hpp"

using namespace ctq;

namespace {
const double R2 = 1 / std::sqrt(2.0);
const OptimizerConfig kFast{181, 361, 200, 1e-10, 8, 1};
}  // namespace

TEST_CASE("numeric search reproduces reference optima") {
    auto ghz = validate({R2, 0, 0, 0, R2}, 0.0);
    CHECK(pmax_numeric(ghz, kFast).pmax == Catch::Approx(1.0).margin(1e-9));

    const double r3 = 1 / std::sqrt(3.0);
    auto w = validate({r3, 0, r3, r3, 0}, 0.0, {.normalize = true});
    CHECK(pmax_numeric(w, kFast).pmax == Catch::Approx(2.0 / 3).margin(1e-6));

    auto c = validate({std::sqrt(0.3), 0, 0, std::sqrt(0.4), std::sqrt(0.3)}, 0.0,
                      {.normalize = true});
    CHECK(pmax_numeric(c, kFast).pmax == Catch::Approx(0.2).margin(1e-6));
}

TEST_CASE("landscape corners, range, and periodicity") {
    auto ghz = validate({R2, 0, 0, 0, R2}, 0.0);
    auto tiny = objective_landscape(ghz, {3, 3, 0, 1e-10, 1, 1});
    // boundary bases kill the GHZ entanglement entirely: f(0,.) = f(pi,.) = 1
    CHECK(tiny.values[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(tiny.values[6] == Catch::Approx(1.0).margin(1e-12));

    for (int k = 0; k < 5; ++k) {
        auto s = random_state(std::uint64_t(k));
        auto grid = objective_landscape(s, {41, 81, 0, 1e-10, 1, 1});
        for (double v : grid.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0 + 1e-12);
        }
        for (int i = 0; i < grid.grid_theta; ++i) {
            const double first = grid.values[std::size_t(i) * 81];
            const double last = grid.values[std::size_t(i) * 81 + 80];
            CHECK(std::abs(first - last) < 1e-12);
        }
    }
}

TEST_CASE("numeric optimum dominates every sampled basis") {
    auto s = random_state(17);
    const double best = pmax_numeric(s, kFast).pmax;
    std::uint64_t st = 99;
    for (int k = 0; k < 1000; ++k) {
        const MeasurementBasis b{verify::detail::unit_double(st) * kPi,
                                 verify::detail::unit_double(st) * 2 * kPi};
        CHECK(best >= success_probability(s, b) - 1e-9);
    }
}

TEST_CASE("doubling the grid never loses ground") {
    for (int k = 0; k < 4; ++k) {
        auto s = random_state(std::uint64_t(800 + k));
        const double coarse = pmax_numeric(s, {61, 121, 200, 1e-10, 8, 1}).pmax;
        const double fine = pmax_numeric(s, {121, 241, 200, 1e-10, 8, 1}).pmax;
        CHECK(fine >= coarse - 1e-8);
    }
}

TEST_CASE("thread count does not change the result") {
    auto s = random_state(23, StateClass::GeneralFull);
    OptimizerConfig one = kFast;
    OptimizerConfig four = kFast;
    four.threads = 4;
    const auto a = pmax_numeric(s, one);
    const auto b = pmax_numeric(s, four);
    CHECK(a.pmax == b.pmax);
    CHECK(a.best_points[0].theta == b.best_points[0].theta);
    CHECK(a.best_points[0].phi == b.best_points[0].phi);
}

TEST_CASE("refined general-case optima are stationary or on the boundary") {
    for (int k = 0; k < 6; ++k) {
        auto s = random_state(std::uint64_t(300 + k), StateClass::GeneralFull);
        auto rep = pmax_numeric(s, kFast);
        const auto& p = rep.best_points[0];
        CHECK(rep.pmax >= 0.0);
        CHECK(rep.pmax <= 1.0);
        if (p.theta < 1e-6 || p.theta > kPi - 1e-6) continue;
        const double h = 1e-6;
        auto f = [&](double th, double ph) { return objective_value(s, {th, ph}); };
        const double gt = (f(p.theta + h, p.phi) - f(p.theta - h, p.phi)) / (2 * h);
        const double gp = (f(p.theta, p.phi + h) - f(p.theta, p.phi - h)) / (2 * h);
        CAPTURE(p.theta, p.phi);
        CHECK(std::sqrt(gt * gt + gp * gp) < 1e-5);
    }
}

TEST_CASE("analytic and numeric optima agree across the case classes") {
    verify::Options opt;
    opt.per_case = 10;  // the acceptance suite runs the full 100-per-class pass
    auto res = verify::suite_analytic_numeric(opt);
    INFO(res.worst_sample << " max_delta=" << res.max_delta);
    CHECK(res.failures == 0);
}
