// verify.hpp
// Property battery over the whole library: algebraic identities, symmetry
// relations, analytic/numeric agreement, protocol equivalence, and collapse
// verification, on seeded random inputs. Used by the CLI verify command and
// by the test suites.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ctq/analytic.hpp"
#include "ctq/canonical_state.hpp"
#include "ctq/json_io.hpp"
#include "ctq/numeric.hpp"
#include "ctq/objective.hpp"
#include "ctq/protocol.hpp"
#include "ctq/two_qubit.hpp"

namespace ctq::verify {

struct SuiteResult {
    std::string name;
    long long checked = 0;
    long long failures = 0;
    double max_delta = 0.0;
    std::string worst_sample;  // JSON of the sample attaining max_delta
};

struct Options {
    std::uint64_t seed = 42;
    int pairs = 1000;            // (state, basis) samples for identity suites
    int per_case = 100;          // states per class for analytic/numeric agreement
    int protocol_triples = 200;  // (state, basis, message) samples
    int threads = 1;
    std::string inject_fault;    // test-only hook; "p-expanded" tampers one coefficient
    OptimizerConfig optimizer{181, 361, 200, 1e-10, 8, 1};
};

namespace detail {

inline std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t suite, std::uint64_t k) {
    return splitmix(splitmix(seed ^ (suite * 0x100000001b3ULL)) + k);
}

inline double unit_double(std::uint64_t& state) {
    state = splitmix(state);
    return double(state >> 11) * 0x1.0p-53;
}

inline MeasurementBasis random_basis(std::uint64_t seed) {
    std::uint64_t st = seed;
    return {unit_double(st) * kPi, unit_double(st) * 2 * kPi};
}

inline MessageQubit random_message(std::uint64_t seed) {
    std::uint64_t st = seed;
    const double t = unit_double(st) * kPi, p = unit_double(st) * 2 * kPi,
                 g = unit_double(st) * 2 * kPi;
    return {std::cos(t / 2) * Complex(std::cos(g), std::sin(g)),
            std::sin(t / 2) * Complex(std::cos(p), std::sin(p))};
}

inline TwoQubitPure random_two_qubit(std::uint64_t seed) {
    std::uint64_t st = seed;
    std::array<Complex, 4> c;
    double norm = 0.0;
    for (auto& z : c) {
        // Box-Muller pairs give an isotropic direction on the state space
        double u1 = std::max(unit_double(st), 1e-300), u2 = unit_double(st);
        double r = std::sqrt(-2.0 * std::log(u1));
        z = Complex(r * std::cos(2 * kPi * u2), r * std::sin(2 * kPi * u2));
        norm += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(norm);
    return {c[0] * inv, c[1] * inv, c[2] * inv, c[3] * inv};
}

// renormalized copy with a_i and a_j averaged in square (keeps the class,
// lands exactly on the a_i = a_j collapse condition)
inline CanonicalState symmetrized(CanonicalState s, int i, int j) {
    const double m = std::sqrt((s.a[std::size_t(i)] * s.a[std::size_t(i)] +
                                s.a[std::size_t(j)] * s.a[std::size_t(j)]) / 2);
    s.a[std::size_t(i)] = s.a[std::size_t(j)] = m;
    double sum = 0.0;
    for (double v : s.a) sum += v * v;
    const double inv = 1.0 / std::sqrt(sum);
    for (double& v : s.a) v *= inv;
    return s;
}

struct Recorder {
    SuiteResult res;
    explicit Recorder(std::string name) { res.name = std::move(name); }
    void check(bool ok, double delta, const std::string& sample) {
        ++res.checked;
        if (delta > res.max_delta || (!ok && res.failures == 0)) {
            res.max_delta = std::max(res.max_delta, delta);
            res.worst_sample = sample;
        }
        if (!ok) ++res.failures;
    }
};

inline std::string sample_json(const CanonicalState& s, const MeasurementBasis& b) {
    return ctq::io::ObjWriter{}
        .raw("state", ctq::io::state_json(s))
        .raw("basis",
             ctq::io::ObjWriter{}.num("theta", b.theta).num("phi", b.phi).str())
        .str();
}

}  // namespace detail

// Schmidt decomposition: reconstruction, concurrence identities, coefficient map.
inline SuiteResult suite_schmidt(const Options& opt) {
    detail::Recorder rec("schmidt_decomposition");
    for (int k = 0; k < opt.pairs; ++k) {
        const TwoQubitPure t = detail::random_two_qubit(detail::mix(opt.seed, 1, std::uint64_t(k)));
        const SchmidtForm f = schmidt_decompose(t);
        const Mat2 a = f.basis_a, b = f.basis_b;
        const double s0 = std::sqrt(f.lambda0), s1 = std::sqrt(f.lambda1);
        double recon = 0.0;
        const std::array<Complex, 4> orig{t.c00, t.c01, t.c10, t.c11};
        // global phase: align on the largest amplitude
        std::size_t big = 0;
        for (std::size_t i = 1; i < 4; ++i)
            if (std::abs(orig[i]) > std::abs(orig[big])) big = i;
        std::array<Complex, 4> rebuilt;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                rebuilt[std::size_t(r * 2 + c)] = s0 * a[std::size_t(r * 2)] * b[std::size_t(c * 2)] +
                                                  s1 * a[std::size_t(r * 2 + 1)] * b[std::size_t(c * 2 + 1)];
        Complex phase = orig[big] / rebuilt[big];
        phase /= std::abs(phase);
        for (std::size_t i = 0; i < 4; ++i)
            recon = std::max(recon, std::abs(rebuilt[i] * phase - orig[i]));
        const double conc = concurrence(t);
        const double conc_delta = std::abs(conc - 2 * std::sqrt(f.lambda0 * f.lambda1));
        const auto [l0, l1] = schmidt_coefficients_from_concurrence(conc);
        const double coeff_delta =
            std::max(std::abs(l0 - f.lambda0), std::abs(l1 - f.lambda1));
        const double order_ok = (f.lambda0 <= 0.5 + 1e-12 && f.lambda1 >= 0.5 - 1e-12 &&
                                 std::abs(f.lambda0 + f.lambda1 - 1) <= 1e-12)
                                    ? 0.0
                                    : 1.0;
        const double delta = std::max({recon, conc_delta, coeff_delta / 100, order_ok});
        rec.check(recon <= 1e-12 && conc_delta <= 1e-12 && coeff_delta <= 1e-10 &&
                      order_ok == 0.0,
                  delta, ctq::io::fmt(conc));
    }
    return rec.res;
}

// |P_expanded - P_def| and |Q_expanded - Q_def| over random samples.
inline SuiteResult suite_form_equivalence(const Options& opt) {
    detail::Recorder rec("form_equivalence");
    const bool tamper = opt.inject_fault == "p-expanded";
    for (int k = 0; k < opt.pairs; ++k) {
        const auto s = random_state(detail::mix(opt.seed, 2, std::uint64_t(k)));
        const auto b = detail::random_basis(detail::mix(opt.seed, 3, std::uint64_t(k)));
        double pe = p_expanded(s, b);
        if (tamper) {
            // simulates a wrong leading coefficient in the expanded polynomial
            pe += 1e-3 * s.a[0] * s.a[0] * s.a[1] * s.a[1] * std::cos(2 * (b.phi - s.mu));
        }
        const double dp = std::abs(pe - p_def(s, b));
        const double dq = std::abs(q_expanded(s, b) - q_def(s, b));
        rec.check(dp <= 1e-12 && dq <= 1e-12, std::max(dp, dq), detail::sample_json(s, b));
    }
    return rec.res;
}

// Q(theta,phi) = P(pi-theta, phi+/-pi) and the theta/phi boundary relations.
inline SuiteResult suite_symmetry(const Options& opt) {
    detail::Recorder rec("symmetry_relations");
    for (int k = 0; k < opt.pairs; ++k) {
        const auto s = random_state(detail::mix(opt.seed, 4, std::uint64_t(k)));
        const auto b = detail::random_basis(detail::mix(opt.seed, 5, std::uint64_t(k)));
        const double phi_mirror = b.phi <= kPi ? b.phi + kPi : b.phi - kPi;
        const MeasurementBasis mirror{kPi - b.theta, phi_mirror};
        const double d1 = std::abs(q_def(s, b) - p_def(s, mirror));
        const double d2 = std::abs(p_def(s, b) - q_def(s, mirror));
        const double d3 = std::abs(objective_value(s, {0.0, b.phi}) -
                                   objective_value(s, {kPi, b.phi}));
        const double d4 = std::abs(objective_value(s, {b.theta, 0.0}) -
                                   objective_value(s, {b.theta, 2 * kPi}));
        const double delta = std::max({d1, d2, d3, d4});
        rec.check(delta <= 1e-12, delta, detail::sample_json(s, b));
    }
    return rec.res;
}

// division-free numerators, branch reconstruction, probability bookkeeping
inline SuiteResult suite_branch_identities(const Options& opt) {
    detail::Recorder rec("branch_identities");
    for (int k = 0; k < opt.pairs; ++k) {
        const auto s = random_state(detail::mix(opt.seed, 6, std::uint64_t(k)));
        const auto b = detail::random_basis(detail::mix(opt.seed, 7, std::uint64_t(k)));
        const auto d = charlie_collapse(s, b);
        double delta = std::abs(d.p1 + d.p2 - 1.0);
        // |N_i| = p_i * C_i
        if (d.p1 > 1e-6 && d.phi1) {
            delta = std::max(delta, std::abs(std::abs(branch_amplitude(s, b, 1)) -
                                             d.p1 * concurrence(*d.phi1)));
        }
        if (d.p2 > 1e-6 && d.phi2) {
            delta = std::max(delta, std::abs(std::abs(branch_amplitude(s, b, 2)) -
                                             d.p2 * concurrence(*d.phi2)));
        }
        // sqrt(p1)|x>|phi1> + sqrt(p2)|x_perp>|phi2> rebuilds the channel vector
        if (d.phi1 && d.phi2) {
            const auto [x, xp] = basis_vectors(b);
            const auto psi = to_state_vector(s);
            const std::array<Complex, 4> f1{d.phi1->c00, d.phi1->c01, d.phi1->c10, d.phi1->c11};
            const std::array<Complex, 4> f2{d.phi2->c00, d.phi2->c01, d.phi2->c10, d.phi2->c11};
            const double r1 = std::sqrt(d.p1), r2 = std::sqrt(d.p2);
            for (int q1 = 0; q1 < 2; ++q1)
                for (int q23 = 0; q23 < 4; ++q23) {
                    const Complex rebuilt = r1 * x[std::size_t(q1)] * f1[std::size_t(q23)] +
                                            r2 * xp[std::size_t(q1)] * f2[std::size_t(q23)];
                    delta = std::max(delta, std::abs(rebuilt - psi[std::size_t(q1 * 4 + q23)]));
                }
        }
        // P/Q bounds and the two-branch success identity
        const double P = p_def(s, b), Q = q_def(s, b);
        const bool bounds_ok = P >= 0 && Q >= 0 && P <= d.p1 * d.p1 + 1e-15 &&
                               Q <= d.p2 * d.p2 + 1e-15;
        if (d.phi1 && d.phi2) {
            const auto l1 = schmidt_coefficients_from_concurrence(concurrence(*d.phi1));
            const auto l2 = schmidt_coefficients_from_concurrence(concurrence(*d.phi2));
            delta = std::max(delta, std::abs(success_probability(s, b) -
                                             (2 * d.p1 * l1.first + 2 * d.p2 * l2.first)));
        }
        rec.check(delta <= 1e-12 && bounds_ok, delta, detail::sample_json(s, b));
    }
    return rec.res;
}

inline const std::vector<StateClass>& analytic_classes() {
    static const std::vector<StateClass> classes = {
        StateClass::GhzClass,  StateClass::TriBell,  StateClass::C12,
        StateClass::C13,       StateClass::ExtendedGhzE, StateClass::F_a1zero,
        StateClass::G_a4zero,  StateClass::H_a2zero, StateClass::H_a3zero,
        StateClass::I_muZero,  StateClass::J_muPi};
    return classes;
}

inline SuiteResult suite_analytic_numeric(const Options& opt) {
    detail::Recorder rec("analytic_numeric_agreement");
    OptimizerConfig cfg = opt.optimizer;
    cfg.threads = opt.threads;
    std::uint64_t salt = 100;
    for (StateClass cls : analytic_classes()) {
        for (int k = 0; k < opt.per_case; ++k) {
            const auto s = random_state(detail::mix(opt.seed, salt, std::uint64_t(k)), cls);
            const double pa = pmax_analytic(s).pmax;
            const double pn = pmax_numeric(s, cfg).pmax;
            const double delta = std::abs(pa - pn);
            rec.check(delta <= 1e-5, delta,
                      ctq::io::ObjWriter{}
                          .raw("state", ctq::io::state_json(s))
                          .str("class", to_string(cls))
                          .str());
        }
        ++salt;
    }
    // biseparable and degenerate patterns must give exactly zero
    for (StateClass cls : {StateClass::BiseparableD24, StateClass::BiseparableD34,
                           StateClass::DegenerateProduct}) {
        for (int k = 0; k < std::max(1, opt.per_case / 10); ++k) {
            const auto s = random_state(detail::mix(opt.seed, salt, std::uint64_t(k)), cls);
            const double pa = pmax_analytic(s).pmax;
            rec.check(pa == 0.0, pa, ctq::io::state_json(s));
        }
        ++salt;
    }
    return rec.res;
}

inline SuiteResult suite_protocol(const Options& opt) {
    detail::Recorder rec("protocol_equivalence");
    const std::array<MessageQubit, 5> messages = {
        MessageQubit{1.0, 0.0},
        MessageQubit{0.0, 1.0},
        MessageQubit{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)},
        MessageQubit{1 / std::sqrt(2.0), Complex(0, 1 / std::sqrt(2.0))},
        MessageQubit{std::cos(0.3), Complex(std::cos(1.1), std::sin(1.1)) * std::sin(0.3)}};
    for (int k = 0; k < opt.protocol_triples; ++k) {
        const auto s = random_state(detail::mix(opt.seed, 8, std::uint64_t(k)));
        const auto b = detail::random_basis(detail::mix(opt.seed, 9, std::uint64_t(k)));
        const double expected = success_probability(s, b);
        double worst = 0.0;
        double succ_min = 2.0, succ_max = -1.0;
        for (const auto& m : messages) {
            const auto trace = run_protocol(s, b, m);
            double psum = 0.0;
            for (const auto& br : trace.branches) {
                psum += br.probability;
                if (br.success && br.fidelity && br.probability > kBranchTol) {
                    worst = std::max(worst, std::abs(*br.fidelity - 1.0));
                }
            }
            worst = std::max(worst, std::abs(psum - 1.0));
            worst = std::max(worst, std::abs(trace.total_success_probability - expected));
            succ_min = std::min(succ_min, trace.total_success_probability);
            succ_max = std::max(succ_max, trace.total_success_probability);
        }
        worst = std::max(worst, succ_max - succ_min);
        rec.check(worst <= 1e-10, worst, detail::sample_json(s, b));
    }
    return rec.res;
}

inline SuiteResult suite_collapse(const Options& opt) {
    detail::Recorder rec("collapse_verification");
    const int n = std::max(1, opt.per_case / 5);
    auto check_class = [&](StateClass cls, std::uint64_t salt, bool symmetrize23,
                           bool symmetrize14) {
        for (int k = 0; k < n; ++k) {
            auto s = random_state(detail::mix(opt.seed, salt, std::uint64_t(k)), cls);
            if (symmetrize23) s = detail::symmetrized(s, 2, 3);
            if (symmetrize14) s = detail::symmetrized(s, 1, 4);
            // epr_collapse re-verifies concurrence = 1 and the printed
            // probability at each point; any mismatch throws
            try {
                const auto rep = epr_collapse(s);
                const bool expect_points =
                    symmetrize23 || cls == StateClass::GhzClass;
                rec.check(!expect_points || !rep.points.empty(), 0.0,
                          ctq::io::state_json(s));
            } catch (const std::logic_error& e) {
                rec.check(false, 1.0, ctq::io::state_json(s));
            }
        }
    };
    check_class(StateClass::GhzClass, 30, false, false);
    check_class(StateClass::TriBell, 31, true, false);
    check_class(StateClass::F_a1zero, 32, true, false);
    check_class(StateClass::G_a4zero, 33, true, false);
    check_class(StateClass::I_muZero, 34, true, false);
    check_class(StateClass::J_muPi, 35, true, false);
    check_class(StateClass::J_muPi, 36, true, true);
    // GHZ exactly
    {
        const double r = 1 / std::sqrt(2.0);
        const auto rep = epr_collapse(validate({r, 0, 0, 0, r}, 0.0));
        rec.check(!rep.points.empty() && std::abs(rep.collapse_probability - 1.0) <= 1e-12,
                  std::abs(rep.collapse_probability - 1.0), "ghz");
    }
    // extended-GHZ with a4^2 = 1/2
    for (int k = 0; k < n; ++k) {
        auto s = random_state(detail::mix(opt.seed, 37, std::uint64_t(k)),
                              StateClass::ExtendedGhzE);
        const double scale =
            std::sqrt(0.5 / (s.a[0] * s.a[0] + s.a[1] * s.a[1]));
        s.a[0] *= scale;
        s.a[1] *= scale;
        s.a[4] = 1 / std::sqrt(2.0);
        try {
            const auto rep = epr_collapse(s);
            rec.check(!rep.points.empty(), 0.0, ctq::io::state_json(s));
        } catch (const std::logic_error&) {
            rec.check(false, 1.0, ctq::io::state_json(s));
        }
    }
    // C and H never collapse: dense scan of min(P, Q)
    for (StateClass cls : {StateClass::C12, StateClass::C13, StateClass::H_a2zero,
                           StateClass::H_a3zero}) {
        const auto s = random_state(detail::mix(opt.seed, 38, std::uint64_t(cls)), cls);
        double min_pq = 1.0;
        for (int i = 0; i < 181; ++i) {
            for (int j = 0; j < 361; ++j) {
                const MeasurementBasis b{kPi * i / 180.0, 2 * kPi * j / 360.0};
                const auto ev = ctq::detail::eval_branches(s, b);
                min_pq = std::min(min_pq, std::min(ev.big_p, ev.big_q));
            }
        }
        rec.check(min_pq > 0.0, -min_pq, ctq::io::state_json(s));
    }
    return rec.res;
}

inline SuiteResult suite_determinism(const Options& opt) {
    detail::Recorder rec("determinism");
    for (int k = 0; k < 10; ++k) {
        const auto s1 = random_state(opt.seed + std::uint64_t(k));
        const auto s2 = random_state(opt.seed + std::uint64_t(k));
        const bool same = s1.a == s2.a && s1.mu == s2.mu;
        rec.check(same, same ? 0.0 : 1.0, ctq::io::state_json(s1));
    }
    return rec.res;
}

inline std::vector<SuiteResult> run_all(const Options& opt) {
    return {suite_schmidt(opt),          suite_form_equivalence(opt),
            suite_symmetry(opt),         suite_branch_identities(opt),
            suite_analytic_numeric(opt), suite_protocol(opt),
            suite_collapse(opt),         suite_determinism(opt)};
}

inline std::string summary_json(const Options& opt, const std::vector<SuiteResult>& suites) {
    std::vector<std::string> rows;
    bool pass = true;
    for (const auto& s : suites) {
        pass = pass && s.failures == 0;
        rows.push_back(ctq::io::ObjWriter{}
                           .str("name", s.name)
                           .integer("checked", s.checked)
                           .integer("failures", s.failures)
                           .num("max_delta", s.max_delta)
                           .raw("worst_sample", s.worst_sample.empty()
                                                    ? "null"
                                                    : s.worst_sample)
                           .str());
    }
    return ctq::io::ObjWriter{}
        .integer("seed", (long long)opt.seed)
        .raw("counts", ctq::io::ObjWriter{}
                           .integer("pairs", opt.pairs)
                           .integer("per_case", opt.per_case)
                           .integer("protocol_triples", opt.protocol_triples)
                           .str())
        .raw("suites", ctq::io::arr(rows))
        .boolean("pass", pass)
        .str();
}

}  // namespace ctq::verify
