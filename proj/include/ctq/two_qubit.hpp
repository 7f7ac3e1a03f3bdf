// two_qubit.hpp
// Two-qubit pure states, concurrence, and a closed-form 2x2 complex SVD used
// as the Schmidt decomposition.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

namespace ctq {

using Complex = std::complex<double>;
using Mat2 = std::array<Complex, 4>;  // row-major 2x2

struct TwoQubitPure {
    Complex c00, c01, c10, c11;

    double norm_sq() const {
        return std::norm(c00) + std::norm(c01) + std::norm(c10) + std::norm(c11);
    }
    Complex det() const { return c00 * c11 - c01 * c10; }
};

inline double concurrence(const TwoQubitPure& t) {
    return 2.0 * std::abs(t.det());
}

// lambda0 = (1 - sqrt(1 - C^2))/2, lambda1 = (1 + sqrt(1 - C^2))/2
inline std::pair<double, double> schmidt_coefficients_from_concurrence(double c) {
    if (c < -1e-12 || c > 1.0 + 1e-12) {
        throw std::domain_error("concurrence must lie in [0, 1]");
    }
    c = std::clamp(c, 0.0, 1.0);
    double r = std::sqrt(std::max(0.0, 1.0 - c * c));
    return {(1.0 - r) / 2.0, (1.0 + r) / 2.0};
}

struct SchmidtForm {
    double lambda0 = 0.0;  // smaller coefficient
    double lambda1 = 1.0;  // larger coefficient, lambda0 + lambda1 = 1
    // Columns are the Schmidt vectors: column k on side A pairs with column k
    // on side B and coefficient lambda_k; state = sum_k sqrt(lambda_k) A_k (x) B_k.
    Mat2 basis_a{};
    Mat2 basis_b{};
};

namespace detail {

inline Complex mat_get(const Mat2& m, int r, int c) { return m[std::size_t(r * 2 + c)]; }
inline void mat_set(Mat2& m, int r, int c, Complex v) { m[std::size_t(r * 2 + c)] = v; }

}  // namespace detail

// Closed-form SVD of the coefficient matrix [c00 c01; c10 c11]. The singular
// values come from the 2x2 Gram matrix; the small eigenvalue uses |det|^2 /
// (large eigenvalue) to avoid cancellation near product states.
inline SchmidtForm schmidt_decompose(const TwoQubitPure& t) {
    const Complex m00 = t.c00, m01 = t.c01, m10 = t.c10, m11 = t.c11;
    const double g00 = std::norm(m00) + std::norm(m10);
    const double g11 = std::norm(m01) + std::norm(m11);
    const Complex g01 = std::conj(m00) * m01 + std::conj(m10) * m11;
    const double trace = g00 + g11;
    if (trace <= 0.0) throw std::domain_error("schmidt_decompose: zero state");

    const double disc = std::sqrt(std::max(0.0, (g00 - g11) * (g00 - g11) + 4.0 * std::norm(g01)));
    const double eig1 = 0.5 * (trace + disc);
    const double det_sq = std::norm(m00 * m11 - m01 * m10);
    const double eig0 = (eig1 > 0.0) ? det_sq / eig1 : 0.0;

    // eigenvector of the Gram matrix for eig1
    std::array<Complex, 2> v1;
    if (std::abs(g01) > 1e-300) {
        if (std::abs(eig1 - g00) >= std::abs(eig1 - g11)) {
            v1 = {g01, Complex(eig1 - g00)};
        } else {
            v1 = {Complex(eig1 - g11), std::conj(g01)};
        }
    } else {
        v1 = (g00 >= g11) ? std::array<Complex, 2>{1.0, 0.0}
                          : std::array<Complex, 2>{0.0, 1.0};
    }
    double n1 = std::sqrt(std::norm(v1[0]) + std::norm(v1[1]));
    v1[0] /= n1;
    v1[1] /= n1;
    const std::array<Complex, 2> v0 = {-std::conj(v1[1]), std::conj(v1[0])};

    const double s1 = std::sqrt(eig1);
    std::array<Complex, 2> u1 = {(m00 * v1[0] + m01 * v1[1]) / s1,
                                 (m10 * v1[0] + m11 * v1[1]) / s1};
    double nu1 = std::sqrt(std::norm(u1[0]) + std::norm(u1[1]));
    u1[0] /= nu1;
    u1[1] /= nu1;
    std::array<Complex, 2> u0 = {-std::conj(u1[1]), std::conj(u1[0])};
    // absorb the phase of u0^dag M v0 into u0, making the small singular value real >= 0
    const Complex w = std::conj(u0[0]) * (m00 * v0[0] + m01 * v0[1]) +
                      std::conj(u0[1]) * (m10 * v0[0] + m11 * v0[1]);
    if (std::abs(w) > 1e-300) {
        const Complex phase = w / std::abs(w);
        u0[0] *= phase;
        u0[1] *= phase;
    }

    SchmidtForm f;
    f.lambda1 = eig1 / trace;
    f.lambda0 = (f.lambda1 > 0.0) ? (det_sq / (trace * trace)) / f.lambda1 : 0.0;
    // A-side Schmidt vectors are the left singular vectors, B-side are the
    // conjugated right ones; column 0 carries the smaller coefficient.
    detail::mat_set(f.basis_a, 0, 0, u0[0]);
    detail::mat_set(f.basis_a, 1, 0, u0[1]);
    detail::mat_set(f.basis_a, 0, 1, u1[0]);
    detail::mat_set(f.basis_a, 1, 1, u1[1]);
    detail::mat_set(f.basis_b, 0, 0, std::conj(v0[0]));
    detail::mat_set(f.basis_b, 1, 0, std::conj(v0[1]));
    detail::mat_set(f.basis_b, 0, 1, std::conj(v1[0]));
    detail::mat_set(f.basis_b, 1, 1, std::conj(v1[1]));
    return f;
}

// state coefficients in the Schmidt bases: D = A^dag M conj(B); diagonal with
// nonnegative entries (sqrt(T lambda0), sqrt(T lambda1)) up to rounding.
inline Mat2 schmidt_coordinates(const TwoQubitPure& t, const SchmidtForm& f) {
    const Mat2 m = {t.c00, t.c01, t.c10, t.c11};
    Mat2 am{};  // A^dag M
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            Complex acc = 0.0;
            for (int k = 0; k < 2; ++k)
                acc += std::conj(detail::mat_get(f.basis_a, k, r)) * detail::mat_get(m, k, c);
            detail::mat_set(am, r, c, acc);
        }
    Mat2 d{};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            Complex acc = 0.0;
            for (int k = 0; k < 2; ++k)
                acc += detail::mat_get(am, r, k) * std::conj(detail::mat_get(f.basis_b, k, c));
            detail::mat_set(d, r, c, acc);
        }
    return d;
}

}  // namespace ctq
