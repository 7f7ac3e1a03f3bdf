#include <catch_amalgamated.hpp>

#include "ctq/canonical_state.hpp"
#include "ctq/protocol.hpp"
#include "ctq/verify.hpp"

using namespace ctq;

namespace {
const double R2 = 1 / std::sqrt(2.0);
CanonicalState ghz() { return validate({R2, 0, 0, 0, R2}, 0.0); }
}  // namespace

TEST_CASE("u3b matrix special values and unitarity") {
    auto id = u3b_matrix(0.5, 0.5);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(std::abs(id[std::size_t(r * 4 + c)] - (r == c ? 1.0 : 0.0)) < 1e-15);

    auto block = u3b_matrix(0.0, 1.0);
    CHECK(std::abs(block[10]) < 1e-15);        // (2,2)
    CHECK(std::abs(block[11] - 1.0) < 1e-15);  // (2,3)
    CHECK(std::abs(block[14] + 1.0) < 1e-15);  // (3,2)
    CHECK(std::abs(block[15]) < 1e-15);        // (3,3)

    for (double l0 : {0.1, 0.27, 0.43, 0.5}) {
        auto u = u3b_matrix(l0, 1 - l0);
        for (int r = 0; r < 4; ++r) {
            for (int c = 0; c < 4; ++c) {
                Complex dot = 0;
                for (int k = 0; k < 4; ++k)
                    dot += std::conj(u[std::size_t(k * 4 + r)]) * u[std::size_t(k * 4 + c)];
                CHECK(std::abs(dot - (r == c ? 1.0 : 0.0)) < 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(u3b_matrix(0.7, 0.3), std::domain_error);
}

TEST_CASE("bell_project reference cases") {
    // |phi+>_{24} (x) |0>_3 with layout q2 q3 q4
    std::array<Complex, 8> phi_plus{};
    phi_plus[0b000] = R2;
    phi_plus[0b101] = R2;
    auto [p_same, resid] = bell_project(phi_plus, BellOutcome::PhiPlus);
    CHECK(p_same == Catch::Approx(1.0).margin(1e-14));
    CHECK(std::abs(std::abs(resid[0]) - 1.0) < 1e-12);
    auto [p_other, r2] = bell_project(phi_plus, BellOutcome::PsiMinus);
    CHECK(p_other < 1e-14);

    // branch weights on (sqrt(l0)|00> + sqrt(l1)|11>)_{23} (x) message_4
    const double l0 = 0.2, l1 = 0.8;
    const Complex alpha(0.6, 0.0), beta(0.0, 0.8);
    std::array<Complex, 8> joint{};
    joint[0b000] = std::sqrt(l0) * alpha;
    joint[0b001] = std::sqrt(l0) * beta;
    joint[0b110] = std::sqrt(l1) * alpha;
    joint[0b111] = std::sqrt(l1) * beta;
    auto [pp, rp] = bell_project(joint, BellOutcome::PhiPlus);
    CHECK(pp == Catch::Approx((l0 * std::norm(alpha) + l1 * std::norm(beta)) / 2).margin(1e-14));
    auto [ps, rs] = bell_project(joint, BellOutcome::PsiPlus);
    CHECK(ps == Catch::Approx((l1 * std::norm(alpha) + l0 * std::norm(beta)) / 2).margin(1e-14));
}

TEST_CASE("GHZ teleportation at theta = pi/2 is perfect") {
    auto trace = run_protocol(ghz(), {kPi / 2, 0.0}, {Complex(0.6), Complex(0.0, 0.8)});
    CHECK(trace.total_success_probability == Catch::Approx(1.0).margin(1e-10));
    CHECK(trace.branches.size() == 16);
    for (const auto& br : trace.branches) {
        if (br.success && br.probability > kBranchTol) {
            REQUIRE(br.fidelity.has_value());
            CHECK(*br.fidelity >= 1.0 - 1e-10);
        }
    }
}

TEST_CASE("product channels never teleport") {
    auto product = validate({1, 0, 0, 0, 0}, 0.0);
    auto trace = run_protocol(product, {0.7, 0.3}, {Complex(0.6), Complex(0.8)});
    CHECK(trace.total_success_probability == 0.0);
}

TEST_CASE("protocol equivalence battery") {
    verify::Options opt;
    opt.protocol_triples = 60;
    auto res = verify::suite_protocol(opt);
    INFO(res.worst_sample << " max_delta=" << res.max_delta);
    CHECK(res.failures == 0);
}

TEST_CASE("per-branch success weight is twice the small Schmidt coefficient") {
    for (int k = 0; k < 40; ++k) {
        auto s = random_state(std::uint64_t(k + 50));
        auto b = verify::detail::random_basis(verify::detail::splitmix(std::uint64_t(k)));
        auto d = charlie_collapse(s, b);
        if (!d.phi1 || d.p1 < 1e-6) continue;
        const auto lam = schmidt_coefficients_from_concurrence(concurrence(*d.phi1));
        auto trace = run_protocol(s, b, {Complex(0.6), Complex(0.0, 0.8)});
        double success_x = 0.0;
        for (const auto& br : trace.branches) {
            if (br.charlie_outcome == 0 && br.success) success_x += br.probability;
        }
        CHECK(success_x / d.p1 == Catch::Approx(2 * lam.first).margin(1e-10));
    }
}

TEST_CASE("messages must be normalized") {
    CHECK_THROWS_AS(run_protocol(ghz(), {kPi / 2, 0.0}, {Complex(0.9), Complex(0.9)}),
                    std::invalid_argument);
}
