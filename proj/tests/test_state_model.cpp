#include <catch_amalgamated.hpp>

#include "ctq/canonical_state.hpp"
#include "ctq/two_qubit.hpp"
#include "ctq/verify.hpp"

using namespace ctq;

namespace {
const double R2 = 1 / std::sqrt(2.0);
const double R3 = 1 / std::sqrt(3.0);
}  // namespace

TEST_CASE("validate accepts canonical states") {
    auto ghz = validate({R2, 0, 0, 0, R2}, 0.0);
    CHECK(ghz.a[0] == R2);
    CHECK(validate({1, 0, 0, 0, 0}, 0.0).a[0] == 1.0);
}

TEST_CASE("validate rejects bad inputs with typed errors") {
    auto code_of = [](auto fn) {
        try {
            fn();
        } catch (const ValidationError& e) {
            return e.code();
        }
        FAIL("expected a ValidationError");
        return ValidationCode::NegativeAmplitude;
    };
    CHECK(code_of([] { validate({0.5, 0.5, 0.5, 0.5, 0.5}, 0.0); }) ==
          ValidationCode::NotNormalized);
    CHECK(code_of([] { validate({-0.5, 0.5, 0.5, 0.5, 0.5}, 0.0); }) ==
          ValidationCode::NegativeAmplitude);
    CHECK(code_of([] { validate({R2, 0, 0, 0, R2}, -0.1); }) == ValidationCode::MuOutOfRange);
    CHECK(code_of([] { validate({R2, 0, 0, 0, R2}, 3.2); }) == ValidationCode::MuOutOfRange);
    CHECK(code_of([] { validate({0, R2, 0, 0, R2}, 0.0); }) == ValidationCode::A0Zero);
}

TEST_CASE("validate normalize flag rescales before checking") {
    auto s = validate({0.5, 0.5, 0.5, 0.5, 0.5}, 0.0, {.normalize = true});
    double sum = 0;
    for (double v : s.a) sum += v * v;
    CHECK(std::abs(sum - 1.0) < 1e-15);
    CHECK(std::abs(s.a[0] - 1 / std::sqrt(5.0)) < 1e-15);
}

TEST_CASE("to_state_vector places amplitudes and phase") {
    auto v = to_state_vector(validate({R2, 0, 0, 0, R2}, 0.0));
    CHECK(std::abs(v[0] - Complex(R2)) < 1e-15);
    CHECK(std::abs(v[7] - Complex(R2)) < 1e-15);
    for (int i : {1, 2, 3, 4, 5, 6}) CHECK(std::abs(v[std::size_t(i)]) == 0.0);

    auto w = to_state_vector(validate({R3, R3, 0, 0, R3}, kPi / 2, {.normalize = true}));
    CHECK(std::abs(w[4] - Complex(0, R3)) < 1e-15);  // |100> carries e^{i pi/2} = i

    for (int k = 0; k < 50; ++k) {
        auto s = random_state(std::uint64_t(k));
        double norm = 0;
        for (auto& z : to_state_vector(s)) norm += std::norm(z);
        CHECK(std::abs(norm - 1.0) < 1e-12);
    }
}

TEST_CASE("classify routes every zero pattern") {
    CHECK(classify(validate({R3, 0, R3, R3, 0}, 0.0, {.normalize = true})).cls ==
          StateClass::TriBell);
    CHECK(classify(validate({std::sqrt(0.3), std::sqrt(0.2), 0, 0, std::sqrt(0.5)}, 0.7)).cls ==
          StateClass::ExtendedGhzE);
    CHECK(classify(validate({R2, R2, 0, 0, 0}, 0.0)).cls == StateClass::DegenerateProduct);
    CHECK(classify(validate({R2, 0, 0, 0, R2}, 0.0)).cls == StateClass::GhzClass);

    const std::vector<StateClass> all = {
        StateClass::GhzClass,       StateClass::TriBell,       StateClass::C12,
        StateClass::C13,            StateClass::BiseparableD24, StateClass::BiseparableD34,
        StateClass::ExtendedGhzE,   StateClass::F_a1zero,      StateClass::G_a4zero,
        StateClass::H_a2zero,       StateClass::H_a3zero,      StateClass::I_muZero,
        StateClass::J_muPi,         StateClass::GeneralFull,   StateClass::DegenerateProduct};
    for (auto cls : all) {
        for (int k = 0; k < 20; ++k) {
            auto s = random_state(std::uint64_t(1000 + k), cls);
            CAPTURE(to_string(cls), k);
            CHECK(classify(s).cls == cls);
        }
    }
}

TEST_CASE("classify is stable under sub-threshold perturbations") {
    for (int k = 0; k < 30; ++k) {
        auto s = random_state(std::uint64_t(50 + k), StateClass::F_a1zero);
        auto base = classify(s).cls;
        auto bumped = s;
        for (auto& v : bumped.a) v += 1e-13 * (k % 2 ? 1 : -1) * (v > 0 ? 1 : 0);
        bumped.a[1] += 1e-13;  // still below zero_tol
        CHECK(classify(bumped).cls == base);
    }
}

TEST_CASE("random_state is deterministic and honors constraints") {
    auto a = random_state(1);
    auto b = random_state(1);
    CHECK(a.a == b.a);
    CHECK(a.mu == b.mu);
    double sum = 0;
    for (double v : a.a) sum += v * v;
    CHECK(std::abs(sum - 1.0) < 1e-12);

    auto f = random_state(1, StateClass::F_a1zero);
    CHECK(f.a[1] == 0.0);
    for (int i : {0, 2, 3, 4}) CHECK(f.a[std::size_t(i)] > 0.0);
    CHECK(random_state(9, StateClass::J_muPi).mu == kPi);
}

TEST_CASE("concurrence on reference states") {
    CHECK(concurrence({R2, 0, 0, R2}) == Catch::Approx(1.0).margin(1e-15));
    CHECK(concurrence({1, 0, 0, 0}) == 0.0);
    const double l0 = 0.3, l1 = 0.7;
    CHECK(concurrence({std::sqrt(l0), 0, 0, std::sqrt(l1)}) ==
          Catch::Approx(2 * std::sqrt(l0 * l1)).margin(1e-15));
}

TEST_CASE("schmidt_decompose on reference states") {
    auto bell = schmidt_decompose({R2, 0, 0, R2});
    CHECK(bell.lambda0 == Catch::Approx(0.5).margin(1e-14));
    CHECK(bell.lambda1 == Catch::Approx(0.5).margin(1e-14));

    auto prod = schmidt_decompose({1, 0, 0, 0});
    CHECK(prod.lambda0 == Catch::Approx(0.0).margin(1e-15));
    CHECK(prod.lambda1 == Catch::Approx(1.0).margin(1e-15));

    // state built with concurrence 0.6: lambda0 = (1 - sqrt(1-0.36))/2 = 0.1
    auto c06 = schmidt_decompose({std::sqrt(0.1), 0, 0, std::sqrt(0.9)});
    CHECK(c06.lambda0 == Catch::Approx(0.1).margin(1e-12));
    CHECK(c06.lambda1 == Catch::Approx(0.9).margin(1e-12));
}

TEST_CASE("schmidt coefficient map from concurrence") {
    CHECK(schmidt_coefficients_from_concurrence(1.0).first == Catch::Approx(0.5).margin(1e-15));
    CHECK(schmidt_coefficients_from_concurrence(0.0).first == 0.0);
    CHECK(schmidt_coefficients_from_concurrence(0.0).second == 1.0);
    CHECK(schmidt_coefficients_from_concurrence(0.6).first == Catch::Approx(0.1).margin(1e-15));
    CHECK(schmidt_coefficients_from_concurrence(0.6).second == Catch::Approx(0.9).margin(1e-15));
    CHECK_THROWS_AS(schmidt_coefficients_from_concurrence(1.5), std::domain_error);
    CHECK_THROWS_AS(schmidt_coefficients_from_concurrence(-0.2), std::domain_error);
}

TEST_CASE("schmidt property battery") {
    verify::Options opt;
    opt.pairs = 1000;
    auto res = verify::suite_schmidt(opt);
    INFO(res.worst_sample << " max_delta=" << res.max_delta);
    CHECK(res.failures == 0);
    CHECK(res.checked == 1000);
}
