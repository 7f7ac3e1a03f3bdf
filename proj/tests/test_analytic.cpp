#include <catch_amalgamated.hpp>

#include "ctq/analytic.hpp"
#include "ctq/canonical_state.hpp"
#include "ctq/verify.hpp"

using namespace ctq;

namespace {
const double R2 = 1 / std::sqrt(2.0);
const double R3 = 1 / std::sqrt(3.0);

CanonicalState ghz() { return validate({R2, 0, 0, 0, R2}, 0.0); }
CanonicalState w_state() { return validate({R3, 0, R3, R3, 0}, 0.0, {.normalize = true}); }

bool has_point(const std::vector<CandidatePoint>& pts, double th, double ph, double tol = 1e-12) {
    for (const auto& p : pts) {
        if (std::abs(p.theta - th) < tol && std::abs(p.phi - ph) < tol) return true;
    }
    return false;
}
}  // namespace

TEST_CASE("candidate tables contain the named bases") {
    auto g = candidates_for(ghz(), classify(ghz()));
    CHECK(has_point(g, kPi / 2, 0.0));

    auto w = candidates_for(w_state(), classify(w_state()));
    CHECK(has_point(w, 0.0, 0.0));
    CHECK(has_point(w, kPi / 2, 0.0));

    // a1 = 0 with a2 = a3: collapse pair at cot(theta0/2) = a4/a0
    auto f = validate({std::sqrt(0.35), 0, std::sqrt(0.15), std::sqrt(0.15), std::sqrt(0.35)}, 1.1,
                      {.normalize = true});
    auto fc = candidates_for(f, classify(f));
    const double th0 = 2 * std::atan2(f.a[0], f.a[4]);
    CHECK(has_point(fc, th0, kPi, 1e-9));
    CHECK(has_point(fc, kPi - th0, 0.0, 1e-9));
}

TEST_CASE("candidates_for rejects a mismatched label") {
    auto label = classify(w_state());
    CHECK_THROWS_AS(candidates_for(ghz(), label), CaseMismatch);
}

TEST_CASE("pmax_analytic hits the closed forms") {
    CHECK(pmax_analytic(ghz()).pmax == Catch::Approx(1.0).margin(1e-12));
    CHECK(pmax_analytic(w_state()).pmax == Catch::Approx(2.0 / 3).margin(1e-12));

    // a1 = a2 = 0, a0^2 = a4^2 = 0.3: pmax = 1 - sqrt(1 - 4*0.09) = 0.2
    auto c = validate({std::sqrt(0.3), 0, 0, std::sqrt(0.4), std::sqrt(0.3)}, 0.0,
                      {.normalize = true});
    CHECK(pmax_analytic(c).pmax == Catch::Approx(0.2).margin(1e-12));

    for (int k = 0; k < 40; ++k) {
        auto a = random_state(std::uint64_t(k), StateClass::GhzClass);
        CHECK(pmax_analytic(a).pmax ==
              Catch::Approx(1 - std::abs(1 - 2 * a.a[0] * a.a[0])).margin(1e-12));
        auto e = random_state(std::uint64_t(k), StateClass::ExtendedGhzE);
        CHECK(pmax_analytic(e).pmax ==
              Catch::Approx(1 - std::abs(1 - 2 * e.a[4] * e.a[4])).margin(1e-12));
    }
}

TEST_CASE("extended-GHZ family with a4^2 = 1/2 teleports perfectly") {
    for (double a0sq : {0.1, 0.25, 0.4}) {
        auto s = validate({std::sqrt(a0sq), std::sqrt(0.5 - a0sq), 0, 0, R2}, 0.9,
                          {.normalize = true});
        CHECK(pmax_analytic(s).pmax == Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("biseparable and degenerate states give exactly zero") {
    for (auto cls : {StateClass::BiseparableD24, StateClass::BiseparableD34,
                     StateClass::DegenerateProduct}) {
        for (int k = 0; k < 10; ++k) {
            auto rep = pmax_analytic(random_state(std::uint64_t(k), cls));
            CHECK(rep.pmax == 0.0);
            REQUIRE(rep.closed_form_pmax.has_value());
            CHECK(*rep.closed_form_pmax == 0.0);
        }
    }
}

TEST_CASE("general-class states are refused") {
    auto s = random_state(5, StateClass::GeneralFull);
    CHECK_THROWS_AS(pmax_analytic(s), UnsupportedGeneralCase);
}

TEST_CASE("best points come out sorted by theta then phi") {
    for (int k = 0; k < 20; ++k) {
        auto rep = pmax_analytic(random_state(std::uint64_t(k), StateClass::TriBell));
        for (std::size_t i = 1; i < rep.best_points.size(); ++i) {
            const auto &a = rep.best_points[i - 1], &b = rep.best_points[i];
            CHECK((a.theta < b.theta || (a.theta == b.theta && a.phi <= b.phi)));
        }
    }
}

TEST_CASE("pmax is symmetric under swapping a2 and a3") {
    for (int k = 0; k < 25; ++k) {
        for (auto cls : {StateClass::TriBell, StateClass::C12, StateClass::H_a2zero}) {
            auto s = random_state(std::uint64_t(k), cls);
            auto t = s;
            std::swap(t.a[2], t.a[3]);
            CHECK(std::abs(pmax_analytic(s).pmax - pmax_analytic(t).pmax) < 1e-10);
        }
    }
}

TEST_CASE("epr_collapse on the GHZ state") {
    auto rep = epr_collapse(ghz());
    REQUIRE(rep.points.size() == 1);
    CHECK(rep.points[0].theta == Catch::Approx(kPi / 2).margin(1e-12));
    CHECK(rep.collapse_probability == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("epr_collapse on a generic single-zero-class state") {
    auto s = validate({std::sqrt(0.3), 0, 0, 0, std::sqrt(0.7)}, 0.0);
    auto rep = epr_collapse(s);
    REQUIRE(rep.points.size() == 2);
    CHECK(rep.collapse_probability == Catch::Approx(2 * 0.3 * 0.7).margin(1e-12));
}

TEST_CASE("epr_collapse on tri-Bell states") {
    auto s = validate({std::sqrt(0.4), 0, std::sqrt(0.3), std::sqrt(0.3), 0}, 0.2,
                      {.normalize = true});
    auto rep = epr_collapse(s);
    REQUIRE(rep.points.size() == 2);
    CHECK(rep.collapse_probability == Catch::Approx(0.6).margin(1e-12));
    // asymmetric tri-Bell states never collapse
    auto t = validate({std::sqrt(0.4), 0, std::sqrt(0.35), std::sqrt(0.25), 0}, 0.2,
                      {.normalize = true});
    CHECK(epr_collapse(t).points.empty());
}

TEST_CASE("epr_collapse probability formulas for the remaining classes") {
    // a1 = 0, a2 = a3: a0^2 (1 - a0^2 + a4^2) / (a0^2 + a4^2)
    auto f = validate({std::sqrt(0.35), 0, std::sqrt(0.15), std::sqrt(0.15), std::sqrt(0.35)}, 0.4,
                      {.normalize = true});
    CHECK(epr_collapse(f).collapse_probability ==
          Catch::Approx(0.35 * (1 - 0.35 + 0.35) / 0.7).margin(1e-10));
    // a4 = 0, a2 = a3: a0^2 (1 - a0^2 - a1^2) / (a0^2 + a1^2)
    auto g = validate({std::sqrt(0.3), std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.2), 0}, 0.8,
                      {.normalize = true});
    CHECK(epr_collapse(g).collapse_probability ==
          Catch::Approx(0.3 * (1 - 0.3 - 0.3) / 0.6).margin(1e-10));
    // mu = pi with a1 = a4 and a2 = a3: 2 a1^2 + 2 a2^2 via the Z basis
    auto j = validate({std::sqrt(0.3), std::sqrt(0.2), std::sqrt(0.15), std::sqrt(0.15),
                       std::sqrt(0.2)},
                      kPi, {.normalize = true});
    auto rep = epr_collapse(j);
    REQUIRE(rep.points.size() == 2);
    CHECK(rep.points[0].theta == 0.0);
    CHECK(rep.collapse_probability == Catch::Approx(0.7).margin(1e-10));
}

TEST_CASE("classes that never collapse report no points") {
    for (auto cls : {StateClass::C12, StateClass::C13, StateClass::H_a2zero,
                     StateClass::H_a3zero, StateClass::BiseparableD24}) {
        auto rep = epr_collapse(random_state(11, cls));
        CHECK(rep.points.empty());
        CHECK(rep.collapse_probability == 0.0);
    }
}

TEST_CASE("collapse battery across the symmetrized classes") {
    verify::Options opt;
    opt.per_case = 25;
    auto res = verify::suite_collapse(opt);
    INFO(res.worst_sample << " max_delta=" << res.max_delta);
    CHECK(res.failures == 0);
}
