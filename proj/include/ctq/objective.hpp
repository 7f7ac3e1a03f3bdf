// objective.hpp
// Controller measurement bases, post-measurement branch decomposition, and the
// optimization objective sqrt(P) + sqrt(Q).
//
// P and Q are evaluated from the branch coefficient matrices as
// P = p1^2 - |N1|^2 with p1 the squared branch norm and N1 twice the branch
// determinant, all in double-double arithmetic from one consistent set of
// matrix entries. That keeps P >= 0 structurally (Cauchy-Schwarz on the
// matrix) and resolves collapse points to ~1e-32 instead of the ~1e-16
// cancellation noise a plain double evaluation leaves under the square root.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

#include "ctq/canonical_state.hpp"
#include "ctq/dd.hpp"
#include "ctq/two_qubit.hpp"

namespace ctq {

inline constexpr double kBranchTol = 1e-14;

struct MeasurementBasis {
    double theta = 0.0;  // [0, pi]
    double phi = 0.0;    // [0, 2 pi]
};

// |x> and |x>_perp as amplitude pairs on {|0>, |1>}
inline std::pair<std::array<Complex, 2>, std::array<Complex, 2>>
basis_vectors(const MeasurementBasis& b) {
    const double sh = std::sin(b.theta / 2), ch = std::cos(b.theta / 2);
    const Complex eip(std::cos(b.phi), std::sin(b.phi));
    return {{Complex(ch), eip * sh}, {Complex(sh), -eip * ch}};
}

namespace detail {

// Everything the rest of the library needs about one (state, basis) pair.
struct BranchEval {
    double p1, p2;           // branch probabilities (squared branch norms)
    double big_p, big_q;     // P = p1^2 - |N1|^2, Q = p2^2 - |N2|^2, clamped to [0, p_i^2]
    double n1_sq, n2_sq;     // |N_i|^2 = 4 |det M_i|^2, relative-accurate at every scale
    Mat2 m1, m2;             // unnormalized branch coefficient matrices (double precision)
};

// trig of the basis/phase angles, computed once per evaluation point
struct Trig {
    double sh, ch;  // sin, cos of theta/2
    double cm, sm;  // cos, sin of mu
    double cp, sp;  // cos, sin of phi
};

inline Trig trig_of(const CanonicalState& s, const MeasurementBasis& b) {
    return {std::sin(b.theta / 2), std::cos(b.theta / 2),
            std::cos(s.mu),        std::sin(s.mu),
            std::cos(b.phi),       std::sin(b.phi)};
}

inline BranchEval eval_branches(const CanonicalState& s, const Trig& t) {
    using namespace ctq::dd;
    const auto& a = s.a;

    // phase factors: e^{i(mu-phi)} and e^{-i phi}, expanded from the base trig
    // values so both branch matrices share one consistent set of entries
    const Complex2 e_mu_mphi = {add(two_prod(t.cm, t.cp), two_prod(t.sm, t.sp)),
                                sub(two_prod(t.sm, t.cp), two_prod(t.cm, t.sp))};
    const Complex2 e_mphi = {from(t.cp), from(-t.sp)};

    auto entry = [](double amp, double half, const Complex2& phase) -> Complex2 {
        Double2 mag = two_prod(amp, half);
        return {mul(phase.re, mag), mul(phase.im, mag)};
    };

    // branch 1: rows q2, cols q3 of (a0 ch + a1 e^{i(mu-phi)} sh)|00> + ...
    std::array<Complex2, 4> m1, m2;
    m1[0] = cadd({two_prod(a[0], t.ch), from(0.0)}, entry(a[1], t.sh, e_mu_mphi));
    m1[1] = entry(a[2], t.sh, e_mphi);
    m1[2] = entry(a[3], t.sh, e_mphi);
    m1[3] = entry(a[4], t.sh, e_mphi);
    m2[0] = csub({two_prod(a[0], t.sh), from(0.0)}, entry(a[1], t.ch, e_mu_mphi));
    m2[1] = cscale(entry(a[2], t.ch, e_mphi), -1.0);
    m2[2] = cscale(entry(a[3], t.ch, e_mphi), -1.0);
    m2[3] = cscale(entry(a[4], t.ch, e_mphi), -1.0);

    auto branch_pq = [](const std::array<Complex2, 4>& m, double& p_out, double& n_sq_out) {
        Double2 p = cnorm(m[0]);
        p = add(p, cnorm(m[1]));
        p = add(p, cnorm(m[2]));
        p = add(p, cnorm(m[3]));
        const Complex2 det = csub(cmul(m[0], m[3]), cmul(m[1], m[2]));
        const Double2 n_sq = mul(cnorm(det), 4.0);
        double big = to_double(sub(sqr(p), n_sq));
        p_out = to_double(p);
        n_sq_out = to_double(n_sq);
        if (big < 0.0) {
            if (big < -1e-14) {
                throw std::logic_error("objective: P/Q below the roundoff floor");
            }
            big = 0.0;
        }
        return std::min(big, p_out * p_out);
    };

    BranchEval ev{};
    ev.big_p = branch_pq(m1, ev.p1, ev.n1_sq);
    ev.big_q = branch_pq(m2, ev.p2, ev.n2_sq);
    auto demote = [](const std::array<Complex2, 4>& m) {
        Mat2 r;
        for (int i = 0; i < 4; ++i)
            r[std::size_t(i)] = Complex(to_double(m[std::size_t(i)].re),
                                        to_double(m[std::size_t(i)].im));
        return r;
    };
    ev.m1 = demote(m1);
    ev.m2 = demote(m2);
    return ev;
}

inline BranchEval eval_branches(const CanonicalState& s, const MeasurementBasis& b) {
    return eval_branches(s, trig_of(s, b));
}

}  // namespace detail

struct BranchDecomposition {
    double p1 = 0.0, p2 = 0.0;
    // normalized branch states; empty when the branch probability is < branch_tol
    std::optional<TwoQubitPure> phi1, phi2;
};

inline BranchDecomposition charlie_collapse(const CanonicalState& s, const MeasurementBasis& b,
                                            double branch_tol = kBranchTol) {
    const auto ev = detail::eval_branches(s, b);
    // cross-check the amplitude-derived probabilities against the closed forms
    const double closed_p1 = std::sin(b.theta / 2) * std::sin(b.theta / 2) +
                             s.a[0] * s.a[0] * std::cos(b.theta) +
                             s.a[0] * s.a[1] * std::cos(s.mu - b.phi) * std::sin(b.theta);
    if (std::abs(ev.p1 - closed_p1) > 1e-9) {
        throw std::logic_error("charlie_collapse: branch probability cross-check failed");
    }
    BranchDecomposition d;
    d.p1 = ev.p1;
    d.p2 = ev.p2;
    auto norm_branch = [branch_tol](const Mat2& m, double p) -> std::optional<TwoQubitPure> {
        if (p < branch_tol) return std::nullopt;
        const double inv = 1.0 / std::sqrt(p);
        return TwoQubitPure{m[0] * inv, m[1] * inv, m[2] * inv, m[3] * inv};
    };
    d.phi1 = norm_branch(ev.m1, ev.p1);
    d.phi2 = norm_branch(ev.m2, ev.p2);
    return d;
}

// N1 = a0 a4 e^{-i phi} sin(theta) + 2 (a1 a4 e^{i mu} - a2 a3) e^{-2i phi} sin^2(theta/2)
// N2 = a0 a4 e^{-i phi} sin(theta) - 2 (a1 a4 e^{i mu} - a2 a3) e^{-2i phi} cos^2(theta/2)
// Division-free numerators of the branch concurrences: |N_i| = p_i * C_i.
inline Complex branch_amplitude(const CanonicalState& s, const MeasurementBasis& b, int branch) {
    if (branch != 1 && branch != 2) throw std::invalid_argument("branch must be 1 or 2");
    const auto& a = s.a;
    const Complex e_mphi(std::cos(b.phi), -std::sin(b.phi));
    const Complex e_mu(std::cos(s.mu), std::sin(s.mu));
    const Complex lead = a[0] * a[4] * e_mphi * std::sin(b.theta);
    const Complex tail = 2.0 * (a[1] * a[4] * e_mu - a[2] * a[3]) * e_mphi * e_mphi;
    const double half = (branch == 1) ? std::sin(b.theta / 2) : std::cos(b.theta / 2);
    return (branch == 1) ? lead + tail * (half * half) : lead - tail * (half * half);
}

inline double p_def(const CanonicalState& s, const MeasurementBasis& b) {
    return detail::eval_branches(s, b).big_p;
}

inline double q_def(const CanonicalState& s, const MeasurementBasis& b) {
    return detail::eval_branches(s, b).big_q;
}

// Literal term-by-term evaluation of the expanded trigonometric polynomial for
// P; exists solely to cross-validate p_def against an independent route.
inline double p_q_expanded_impl(const CanonicalState& s, const MeasurementBasis& b, bool q) {
    const auto& a = s.a;
    const double a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3], a4 = a[4];
    const double th = b.theta, ph = b.phi, mu = s.mu;
    const double sign = q ? -1.0 : 1.0;
    const double c2pm = std::cos(2 * (ph - mu));
    const double cmu = std::cos(mu);
    double v = 0.25 * a0 * a0 * a1 * a1 * c2pm + 3 * a1 * a2 * a3 * a4 * cmu +
               0.125 * (3 - 4 * a0 * a0 + 4 * std::pow(a0, 4) + 2 * a0 * a0 * a1 * a1 -
                        12 * a2 * a2 * a3 * a3 - 4 * a0 * a0 * a4 * a4 - 12 * a1 * a1 * a4 * a4);
    v += 0.125 * std::cos(2 * th) *
         (1 - 4 * a0 * a0 + 4 * std::pow(a0, 4) - 2 * a0 * a0 * a1 * a1 -
          2 * a0 * a0 * a1 * a1 * c2pm - 4 * a2 * a2 * a3 * a3 + 8 * a1 * a2 * a3 * a4 * cmu +
          4 * a0 * a0 * a4 * a4 - 4 * a1 * a1 * a4 * a4);
    v -= sign * std::cos(th) *
         (0.5 - a0 * a0 - 2 * a2 * a2 * a3 * a3 + 4 * a1 * a2 * a3 * a4 * cmu -
          2 * a1 * a1 * a4 * a4);
    v += sign * a0 * std::sin(th) *
         (2 * a2 * a3 * a4 * std::cos(ph) + a1 * (1 - 2 * a4 * a4) * std::cos(ph - mu));
    v -= 0.5 * a0 * std::sin(2 * th) *
         (2 * a2 * a3 * a4 * std::cos(ph) +
          a1 * (1 - 2 * a0 * a0 - 2 * a4 * a4) * std::cos(ph - mu));
    return v;
}

inline double p_expanded(const CanonicalState& s, const MeasurementBasis& b) {
    return p_q_expanded_impl(s, b, false);
}

inline double q_expanded(const CanonicalState& s, const MeasurementBasis& b) {
    return p_q_expanded_impl(s, b, true);
}

// f(theta, phi) = sqrt(P) + sqrt(Q); success probability = 1 - f
inline double objective_value(const CanonicalState& s, const MeasurementBasis& b) {
    const auto ev = detail::eval_branches(s, b);
    return std::sqrt(ev.big_p) + std::sqrt(ev.big_q);
}

inline double success_probability(const CanonicalState& s, const MeasurementBasis& b) {
    return std::clamp(1.0 - objective_value(s, b), 0.0, 1.0);
}

}  // namespace ctq
