// canonical_state.hpp
// Three-qubit channels in canonical form
//   a0|000> + a1 e^{i mu}|100> + a2|101> + a3|110> + a4|111>
// with a_i >= 0, mu in [0, pi], sum a_i^2 = 1, and the class taxonomy
// driven by which of a1..a4 vanish and whether sin(mu) vanishes.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

namespace ctq {

inline constexpr double kDefaultNormTol = 1e-9;
inline constexpr double kDefaultZeroTol = 1e-12;
inline constexpr double kPi = 3.14159265358979323846;

enum class ValidationCode {
    NegativeAmplitude,
    MuOutOfRange,
    NotNormalized,
    A0Zero,
};

class ValidationError : public std::invalid_argument {
public:
    ValidationError(ValidationCode code, const std::string& what)
        : std::invalid_argument(what), code_(code) {}
    ValidationCode code() const { return code_; }

private:
    ValidationCode code_;
};

struct CanonicalState {
    std::array<double, 5> a{};  // nonnegative amplitudes a0..a4
    double mu = 0.0;            // phase on the a1 term, radians in [0, pi]
};

struct ValidateOptions {
    bool normalize = false;     // rescale amplitudes to unit norm before checking
    double norm_tol = kDefaultNormTol;
    double zero_tol = kDefaultZeroTol;
};

inline CanonicalState validate(const std::array<double, 5>& raw, double mu,
                               const ValidateOptions& opts = {}) {
    for (double v : raw) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw ValidationError(ValidationCode::NegativeAmplitude,
                                  "amplitudes must be finite and nonnegative");
        }
    }
    if (!(mu >= 0.0 && mu <= kPi)) {
        throw ValidationError(ValidationCode::MuOutOfRange,
                              "mu must lie in [0, pi]");
    }
    CanonicalState s{raw, mu};
    double sum = 0.0;
    for (double v : s.a) sum += v * v;
    if (opts.normalize) {
        if (sum <= 0.0) {
            throw ValidationError(ValidationCode::NotNormalized,
                                  "cannot normalize the zero vector");
        }
        double inv = 1.0 / std::sqrt(sum);
        for (double& v : s.a) v *= inv;
        sum = 0.0;
        for (double v : s.a) sum += v * v;
    }
    if (std::abs(sum - 1.0) > opts.norm_tol) {
        throw ValidationError(ValidationCode::NotNormalized,
                              "squared amplitudes must sum to 1 (use normalize to rescale)");
    }
    if (s.a[0] <= opts.zero_tol) {
        throw ValidationError(ValidationCode::A0Zero,
                              "a0 must be positive: a0 = 0 states are biseparable across 1|23");
    }
    return s;
}

// Full 8-component vector over |q1 q2 q3>, index = q1*4 + q2*2 + q3.
inline std::array<std::complex<double>, 8> to_state_vector(const CanonicalState& s) {
    std::array<std::complex<double>, 8> v{};
    v[0b000] = s.a[0];
    v[0b100] = s.a[1] * std::complex<double>(std::cos(s.mu), std::sin(s.mu));
    v[0b101] = s.a[2];
    v[0b110] = s.a[3];
    v[0b111] = s.a[4];
    return v;
}

enum class StateClass {
    GhzClass,           // a1=a2=a3=0
    TriBell,            // a1=a4=0
    C12,                // a1=a2=0
    C13,                // a1=a3=0
    BiseparableD24,     // a2=a4=0
    BiseparableD34,     // a3=a4=0
    ExtendedGhzE,       // a2=a3=0
    F_a1zero,           // only a1=0
    G_a4zero,           // only a4=0
    H_a2zero,           // only a2=0
    H_a3zero,           // only a3=0
    I_muZero,           // all amplitudes nonzero, mu = 0
    J_muPi,             // all amplitudes nonzero, mu = pi
    GeneralFull,        // all amplitudes nonzero, sin(mu) != 0
    DegenerateProduct,  // particle 2 or 3 factors out (zero patterns outside the taxonomy)
};

inline const char* to_string(StateClass c) {
    switch (c) {
        case StateClass::GhzClass: return "GhzClass";
        case StateClass::TriBell: return "TriBell";
        case StateClass::C12: return "C12";
        case StateClass::C13: return "C13";
        case StateClass::BiseparableD24: return "BiseparableD24";
        case StateClass::BiseparableD34: return "BiseparableD34";
        case StateClass::ExtendedGhzE: return "ExtendedGhzE";
        case StateClass::F_a1zero: return "F_a1zero";
        case StateClass::G_a4zero: return "G_a4zero";
        case StateClass::H_a2zero: return "H_a2zero";
        case StateClass::H_a3zero: return "H_a3zero";
        case StateClass::I_muZero: return "I_muZero";
        case StateClass::J_muPi: return "J_muPi";
        case StateClass::GeneralFull: return "GeneralFull";
        case StateClass::DegenerateProduct: return "DegenerateProduct";
    }
    return "?";
}

struct CaseLabel {
    StateClass cls = StateClass::GeneralFull;
    std::uint8_t zero_mask = 0;  // bit i-1 set when a_i <= zero_tol, i = 1..4
    bool sin_mu_zero = false;
};

inline CaseLabel classify(const CanonicalState& s, double zero_tol = kDefaultZeroTol) {
    CaseLabel label;
    for (int i = 1; i <= 4; ++i) {
        if (s.a[i] <= zero_tol) label.zero_mask |= std::uint8_t(1u << (i - 1));
    }
    label.sin_mu_zero = std::abs(std::sin(s.mu)) <= zero_tol;

    const bool z1 = label.zero_mask & 1, z2 = label.zero_mask & 2,
               z3 = label.zero_mask & 4, z4 = label.zero_mask & 8;
    const int nz = int(z1) + int(z2) + int(z3) + int(z4);

    switch (nz) {
        case 0:
            if (s.mu <= zero_tol) label.cls = StateClass::I_muZero;
            else if (kPi - s.mu <= zero_tol) label.cls = StateClass::J_muPi;
            else if (label.sin_mu_zero)
                label.cls = (s.mu < kPi / 2) ? StateClass::I_muZero : StateClass::J_muPi;
            else label.cls = StateClass::GeneralFull;
            break;
        case 1:
            if (z1) label.cls = StateClass::F_a1zero;
            else if (z2) label.cls = StateClass::H_a2zero;
            else if (z3) label.cls = StateClass::H_a3zero;
            else label.cls = StateClass::G_a4zero;
            break;
        case 2:
            if (z1 && z2) label.cls = StateClass::C12;
            else if (z1 && z3) label.cls = StateClass::C13;
            else if (z1 && z4) label.cls = StateClass::TriBell;
            else if (z2 && z3) label.cls = StateClass::ExtendedGhzE;
            else if (z2 && z4) label.cls = StateClass::BiseparableD24;
            else label.cls = StateClass::BiseparableD34;
            break;
        case 3:
            label.cls = (!z4) ? StateClass::GhzClass : StateClass::DegenerateProduct;
            break;
        default:
            label.cls = StateClass::DegenerateProduct;
            break;
    }
    return label;
}

// Amplitudes forced to zero (indices into a[]) for a case-constrained sample.
inline std::optional<std::array<bool, 5>> forced_zeros(StateClass c) {
    auto z = [](std::initializer_list<int> idx) {
        std::array<bool, 5> m{};
        for (int i : idx) m[std::size_t(i)] = true;
        return m;
    };
    switch (c) {
        case StateClass::GhzClass: return z({1, 2, 3});
        case StateClass::TriBell: return z({1, 4});
        case StateClass::C12: return z({1, 2});
        case StateClass::C13: return z({1, 3});
        case StateClass::BiseparableD24: return z({2, 4});
        case StateClass::BiseparableD34: return z({3, 4});
        case StateClass::ExtendedGhzE: return z({2, 3});
        case StateClass::F_a1zero: return z({1});
        case StateClass::G_a4zero: return z({4});
        case StateClass::H_a2zero: return z({2});
        case StateClass::H_a3zero: return z({3});
        case StateClass::DegenerateProduct: return z({2, 3, 4});
        default: return std::nullopt;  // I, J, GeneralFull constrain mu, not amplitudes
    }
}

// Deterministic sample: squared amplitudes from normalized squares of standard
// normals, mu uniform on [0, pi]. A case constraint zeroes amplitudes (or pins
// mu) before renormalization; free squared amplitudes are kept above a floor so
// the sampled state classifies as requested under any reasonable zero_tol.
inline CanonicalState random_state(std::uint64_t seed,
                                   std::optional<StateClass> constraint = std::nullopt) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    auto gauss = [&]() {
        // Box-Muller; only the cosine branch is needed
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    };

    std::array<bool, 5> zero{};
    if (constraint) {
        if (auto fz = forced_zeros(*constraint)) zero = *fz;
    }
    constexpr double kFloor = 0.01;

    std::array<double, 5> w{};
    for (int attempt = 0; attempt < 10000; ++attempt) {
        double sum = 0.0;
        for (int i = 0; i < 5; ++i) {
            double g = gauss();
            w[std::size_t(i)] = zero[std::size_t(i)] ? 0.0 : g * g;
            sum += w[std::size_t(i)];
        }
        bool ok = true;
        for (int i = 0; i < 5; ++i) {
            if (!zero[std::size_t(i)] && w[std::size_t(i)] / sum < kFloor) ok = false;
        }
        if (!ok) continue;
        double mu = uniform() * kPi;
        if (constraint == StateClass::I_muZero) mu = 0.0;
        else if (constraint == StateClass::J_muPi) mu = kPi;
        else if (constraint == StateClass::GeneralFull && std::sin(mu) < 0.1) continue;
        std::array<double, 5> a{};
        for (int i = 0; i < 5; ++i) a[std::size_t(i)] = std::sqrt(w[std::size_t(i)] / sum);
        return CanonicalState{a, mu};
    }
    throw std::runtime_error("random_state: constrained sampling did not converge");
}

}  // namespace ctq
