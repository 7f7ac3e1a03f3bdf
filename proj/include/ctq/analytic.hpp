// analytic.hpp
// Case-by-case analytic optimum: each class of canonical states admits a
// finite set of candidate bases (boundaries, stationary roots, hyperplane
// points, collapse points). Every candidate is evaluated through the
// objective and the minimum taken, so closed-form expressions act as
// assertions rather than as the computation itself.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctq/canonical_state.hpp"
#include "ctq/objective.hpp"

namespace ctq {

enum class CandidateOrigin { Boundary, StationaryRoot, HyperplanePoint, CollapsePoint };

inline const char* to_string(CandidateOrigin o) {
    switch (o) {
        case CandidateOrigin::Boundary: return "boundary";
        case CandidateOrigin::StationaryRoot: return "stationary";
        case CandidateOrigin::HyperplanePoint: return "hyperplane";
        case CandidateOrigin::CollapsePoint: return "collapse";
    }
    return "?";
}

struct CandidatePoint {
    double theta = 0.0;
    double phi = 0.0;
    CandidateOrigin origin = CandidateOrigin::Boundary;
    std::string label;
};

enum class OptimizeMethod { Analytic, Numeric, Protocol };

inline const char* to_string(OptimizeMethod m) {
    switch (m) {
        case OptimizeMethod::Analytic: return "analytic";
        case OptimizeMethod::Numeric: return "numeric";
        case OptimizeMethod::Protocol: return "protocol";
    }
    return "?";
}

struct OptimumReport {
    double pmax = 0.0;
    std::vector<CandidatePoint> best_points;
    CaseLabel case_label;
    OptimizeMethod method = OptimizeMethod::Analytic;
    std::optional<double> closed_form_pmax;
};

class CaseMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnsupportedGeneralCase : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// theta in (0, pi) with cot(theta) = y
inline double theta_from_cot(double y) { return std::atan2(1.0, y); }

// theta in (0, pi) with cot(theta/2) = t, t > 0
inline double theta_from_half_cot(double t) { return 2.0 * std::atan2(1.0, t); }

inline double fold_phi(double phi) {
    phi = std::fmod(phi, 2 * kPi);
    return phi < 0 ? phi + 2 * kPi : phi;
}

}  // namespace detail

inline std::vector<CandidatePoint> candidates_for(const CanonicalState& s, const CaseLabel& label,
                                                  double zero_tol = kDefaultZeroTol) {
    using detail::fold_phi;
    using detail::theta_from_cot;
    using detail::theta_from_half_cot;

    if (label.cls != classify(s, zero_tol).cls) {
        throw CaseMismatch("candidates_for: label does not match classify(state)");
    }
    const double a0 = s.a[0], a1 = s.a[1], a2 = s.a[2], a3 = s.a[3], a4 = s.a[4];
    const double mu = s.mu;

    std::vector<CandidatePoint> out;
    auto add = [&out](double th, double ph, CandidateOrigin o, std::string lbl) {
        out.push_back({th, fold_phi(ph), o, std::move(lbl)});
    };
    add(0.0, 0.0, CandidateOrigin::Boundary, "theta=0");

    switch (label.cls) {
        case StateClass::GhzClass: {
            const double y = 1 - 2 * a0 * a0;
            add(std::acos(std::clamp(y, -1.0, 1.0)), 0.0, CandidateOrigin::CollapsePoint,
                "cos(theta)=1-2a0^2");
            add(std::acos(std::clamp(-y, -1.0, 1.0)), 0.0, CandidateOrigin::CollapsePoint,
                "cos(theta)=2a0^2-1");
            add(kPi / 2, 0.0, CandidateOrigin::StationaryRoot, "theta=pi/2");
            break;
        }
        case StateClass::TriBell: {
            add(kPi, 0.0, CandidateOrigin::Boundary, "theta=pi");
            add(kPi / 2, 0.0, CandidateOrigin::StationaryRoot, "theta=pi/2");
            break;
        }
        case StateClass::C12:
        case StateClass::C13: {
            add(kPi / 2, 0.0, CandidateOrigin::StationaryRoot, "theta=pi/2");
            break;
        }
        case StateClass::BiseparableD24:
        case StateClass::BiseparableD34:
        case StateClass::DegenerateProduct:
            break;  // every basis is equally useless; theta=0 suffices
        case StateClass::ExtendedGhzE: {
            add(kPi / 2, mu + kPi / 2, CandidateOrigin::HyperplanePoint, "(pi/2, mu+pi/2)");
            add(kPi / 2, mu + 3 * kPi / 2, CandidateOrigin::HyperplanePoint, "(pi/2, mu+3pi/2)");
            break;
        }
        case StateClass::F_a1zero: {
            add(theta_from_cot(-a4 / (2 * a0 * a2 * a3)), 0.0, CandidateOrigin::StationaryRoot,
                "theta1");
            const double r23 = a3 * (1 - 2 * a3 * a3 - 2 * a4 * a4) / (2 * a0 * a2 * a4);
            const double r32 = a2 * (1 - 2 * a2 * a2 - 2 * a4 * a4) / (2 * a0 * a3 * a4);
            add(theta_from_cot(a2 > a3 ? r23 : r32), 0.0, CandidateOrigin::StationaryRoot, "theta2");
            add(theta_from_cot(a2 > a3 ? r32 : r23), 0.0, CandidateOrigin::StationaryRoot, "theta3");
            add(kPi / 2, kPi / 2, CandidateOrigin::HyperplanePoint, "(pi/2, pi/2)");
            if (std::abs(a2 - a3) <= zero_tol) {
                const double th0 = theta_from_half_cot(a4 / a0);
                add(th0, kPi, CandidateOrigin::CollapsePoint, "collapse P=0");
                add(kPi - th0, 0.0, CandidateOrigin::CollapsePoint, "collapse Q=0");
            }
            break;
        }
        case StateClass::G_a4zero: {
            add(theta_from_cot(-a1 / a0), mu, CandidateOrigin::StationaryRoot, "theta1");
            const double d = std::abs(a2 * a2 - a3 * a3);
            add(theta_from_cot((a0 * a0 - a1 * a1 - d) / (2 * a0 * a1)), mu,
                CandidateOrigin::StationaryRoot, "theta2");
            add(theta_from_cot((a0 * a0 - a1 * a1 + d) / (2 * a0 * a1)), mu,
                CandidateOrigin::StationaryRoot, "theta3");
            add(kPi / 2, mu + kPi / 2, CandidateOrigin::HyperplanePoint, "(pi/2, mu+pi/2)");
            add(kPi / 2, mu - kPi / 2, CandidateOrigin::HyperplanePoint, "(pi/2, mu-pi/2)");
            if (std::abs(a2 - a3) <= zero_tol) {
                const double th0 = theta_from_half_cot(a1 / a0);
                add(th0, mu + kPi, CandidateOrigin::CollapsePoint, "collapse P=0");
                add(kPi - th0, mu, CandidateOrigin::CollapsePoint, "collapse Q=0");
            }
            break;
        }
        case StateClass::H_a2zero:
        case StateClass::H_a3zero: {
            add(theta_from_cot(-a1 / a0), mu, CandidateOrigin::StationaryRoot, "theta1");
            add(theta_from_cot((1 - 2 * a1 * a1) / (2 * a0 * a1)), mu,
                CandidateOrigin::StationaryRoot, "theta2");
            add(theta_from_cot((-1 + 2 * a0 * a0) / (2 * a0 * a1)), mu,
                CandidateOrigin::StationaryRoot, "theta3");
            add(kPi / 2, mu + kPi / 2, CandidateOrigin::HyperplanePoint, "(pi/2, mu+pi/2)");
            add(kPi / 2, mu - kPi / 2, CandidateOrigin::HyperplanePoint, "(pi/2, mu-pi/2)");
            break;
        }
        case StateClass::I_muZero: {
            add(kPi / 2, kPi / 2, CandidateOrigin::HyperplanePoint, "(pi/2, pi/2)");
            const double d14 = a1 * a4 - a2 * a3;
            if (std::abs(d14) > zero_tol) {
                // theta1 is invalid in the measure-zero corner a2 = a3, a1 a4 - a2 a3 = 1/2
                if (!(std::abs(a2 - a3) <= zero_tol && std::abs(d14 - 0.5) <= zero_tol)) {
                    add(theta_from_cot((2 * a1 * a2 * a3 + a4 - 2 * a1 * a1 * a4) / (2 * a0 * d14)),
                        0.0, CandidateOrigin::StationaryRoot, "theta1");
                }
                if (std::abs(a2 - a3) > zero_tol) {
                    add(theta_from_cot((-2 * a1 * a2 * a4 +
                                        a3 * (1 - 2 * a1 * a1 - 2 * a3 * a3 - 2 * a4 * a4)) /
                                       (2 * a0 * (a1 * a3 + a2 * a4))),
                        0.0, CandidateOrigin::StationaryRoot, "theta2");
                    add(theta_from_cot((-2 * a1 * a3 * a4 +
                                        a2 * (1 - 2 * a1 * a1 - 2 * a2 * a2 - 2 * a4 * a4)) /
                                       (2 * a0 * (a1 * a2 + a3 * a4))),
                        0.0, CandidateOrigin::StationaryRoot, "theta3");
                }
            } else if (std::abs(a2 - a3) > zero_tol) {
                const double d = std::abs(a2 * a2 - a3 * a3);
                const double den = 4 * a0 * (1 - a0 * a0) * a1;
                const double base = (1 - 2 * a0 * a0);
                add(theta_from_cot(base * (-1 + a0 * a0 - a1 * a1 + a4 * a4 + d) / den), 0.0,
                    CandidateOrigin::StationaryRoot, "theta4");
                add(theta_from_cot(base * (-1 + a0 * a0 - a1 * a1 + a4 * a4 - d) / den), 0.0,
                    CandidateOrigin::StationaryRoot, "theta5");
            }
            if (std::abs(a2 - a3) <= zero_tol) {
                const double th0 = theta_from_half_cot((a1 + a4) / a0);
                add(th0, kPi, CandidateOrigin::CollapsePoint, "collapse P=0");
                add(kPi - th0, 0.0, CandidateOrigin::CollapsePoint, "collapse Q=0");
            }
            break;
        }
        case StateClass::J_muPi: {
            add(kPi / 2, kPi / 2, CandidateOrigin::HyperplanePoint, "(pi/2, pi/2)");
            const double d12 = a1 * a2 - a3 * a4;
            const double d13 = a1 * a3 - a2 * a4;
            const bool equal14 = std::abs(a1 - a4) <= zero_tol;
            const bool equal23 = std::abs(a2 - a3) <= zero_tol;
            if (std::abs(d12) > zero_tol && std::abs(d13) > zero_tol) {
                add(theta_from_cot((2 * a1 * a2 * a3 - a4 + 2 * a1 * a1 * a4) /
                                   (2 * a0 * (a2 * a3 + a1 * a4))),
                    0.0, CandidateOrigin::StationaryRoot, "theta1");
                add(theta_from_cot((-a2 + 2 * a1 * a1 * a2 + 2 * a2 * a2 * a2 - 2 * a1 * a3 * a4 +
                                    2 * a2 * a4 * a4) /
                                   (2 * a0 * d12)),
                    0.0, CandidateOrigin::StationaryRoot, "theta2");
                add(theta_from_cot((-a3 + 2 * a1 * a1 * a3 + 2 * a3 * a3 * a3 - 2 * a1 * a2 * a4 +
                                    2 * a3 * a4 * a4) /
                                   (2 * a0 * d13)),
                    0.0, CandidateOrigin::StationaryRoot, "theta3");
            }
            if (std::abs(d12) <= zero_tol && !equal14) {
                if (equal23) {
                    throw std::logic_error(
                        "candidates_for: a1 a2 = a3 a4 with a1 != a4 forces a2 != a3");
                }
                const double num = -a1 + 2 * a1 * a1 * a1 + 2 * a1 * a3 * a3;
                add(theta_from_cot(num / (2 * a0 * (a1 * a1 + a3 * a3))), 0.0,
                    CandidateOrigin::StationaryRoot, "theta4");
                add(theta_from_cot(num / (2 * a0 * (a1 * a1 - a4 * a4))), 0.0,
                    CandidateOrigin::StationaryRoot, "theta5");
            }
            if (std::abs(d13) <= zero_tol && !equal14) {
                if (equal23) {
                    throw std::logic_error(
                        "candidates_for: a1 a3 = a2 a4 with a1 != a4 forces a2 != a3");
                }
                const double num = -a1 + 2 * a1 * a1 * a1 + 2 * a1 * a2 * a2;
                add(theta_from_cot(num / (2 * a0 * (a1 * a1 + a2 * a2))), 0.0,
                    CandidateOrigin::StationaryRoot, "theta6");
                add(theta_from_cot(num / (2 * a0 * (a1 * a1 - a4 * a4))), 0.0,
                    CandidateOrigin::StationaryRoot, "theta7");
            }
            if (equal14 && equal23) {
                add(theta_from_cot(-a0 * a1 / (2 * (a1 * a1 + a2 * a2))), 0.0,
                    CandidateOrigin::StationaryRoot, "theta8");
            }
            if (equal23) {
                if (a1 > a4 + zero_tol) {
                    const double th0 = theta_from_half_cot((a1 - a4) / a0);
                    add(th0, 0.0, CandidateOrigin::CollapsePoint, "collapse P=0");
                    add(kPi - th0, kPi, CandidateOrigin::CollapsePoint, "collapse Q=0");
                } else if (a4 > a1 + zero_tol) {
                    const double th0 = theta_from_half_cot((a4 - a1) / a0);
                    add(th0, kPi, CandidateOrigin::CollapsePoint, "collapse P=0");
                    add(kPi - th0, 0.0, CandidateOrigin::CollapsePoint, "collapse Q=0");
                }
                // a1 = a4: theta = 0 boundary already collapses branch 2
            }
            break;
        }
        case StateClass::GeneralFull:
            throw UnsupportedGeneralCase(
                "no finite candidate table when a1 a2 a3 a4 sin(mu) != 0; use the numeric search");
    }
    return out;
}

namespace detail {

inline std::optional<double> closed_form_pmax(const CanonicalState& s, StateClass cls) {
    const double a0 = s.a[0], a2 = s.a[2], a3 = s.a[3], a4 = s.a[4];
    switch (cls) {
        case StateClass::GhzClass:
            return 1.0 - std::abs(1 - 2 * a0 * a0);
        case StateClass::TriBell:
            return 1.0 - std::min(a0 * a0 + std::abs(a2 * a2 - a3 * a3),
                                  std::sqrt(1 - 4 * a2 * a2 * a3 * a3));
        case StateClass::C12:
        case StateClass::C13:
            return 1.0 - std::sqrt(1 - 4 * a0 * a0 * a4 * a4);
        case StateClass::BiseparableD24:
        case StateClass::BiseparableD34:
        case StateClass::DegenerateProduct:
            return 0.0;
        case StateClass::ExtendedGhzE:
            return 1.0 - std::abs(1 - 2 * a4 * a4);
        default:
            return std::nullopt;
    }
}

}  // namespace detail

inline OptimumReport pmax_analytic(const CanonicalState& s, double zero_tol = kDefaultZeroTol) {
    const CaseLabel label = classify(s, zero_tol);
    if (label.cls == StateClass::GeneralFull) {
        throw UnsupportedGeneralCase(
            "pmax_analytic does not cover a1 a2 a3 a4 sin(mu) != 0; use pmax_numeric");
    }

    OptimumReport report;
    report.case_label = label;
    report.method = OptimizeMethod::Analytic;
    report.closed_form_pmax = detail::closed_form_pmax(s, label.cls);

    if (label.cls == StateClass::BiseparableD24 || label.cls == StateClass::BiseparableD34 ||
        label.cls == StateClass::DegenerateProduct) {
        // particle 2 or 3 factors out of the channel; exactly zero by construction
        report.pmax = 0.0;
        report.best_points = {{0.0, 0.0, CandidateOrigin::Boundary, "theta=0"}};
        return report;
    }

    auto cands = candidates_for(s, label, zero_tol);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, std::size_t>> values(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const double f = objective_value(s, {cands[i].theta, cands[i].phi});
        values[i] = {f, i};
        best = std::min(best, f);
    }
    report.pmax = std::clamp(1.0 - best, 0.0, 1.0);
    for (auto& [f, i] : values) {
        if (f <= best + 1e-12) report.best_points.push_back(cands[i]);
    }
    std::sort(report.best_points.begin(), report.best_points.end(),
              [](const CandidatePoint& a, const CandidatePoint& b) {
                  return a.theta != b.theta ? a.theta < b.theta : a.phi < b.phi;
              });
    if (report.closed_form_pmax &&
        std::abs(*report.closed_form_pmax - report.pmax) > 1e-10) {
        throw std::logic_error("pmax_analytic: closed form disagrees with the candidate minimum");
    }
    return report;
}

struct CollapsePoint {
    double theta = 0.0;
    double phi = 0.0;
    int bell_branch = 0;  // 1, 2, or 3 when both branches collapse
    double probability = 0.0;
};

struct CollapseReport {
    std::vector<CollapsePoint> points;
    double collapse_probability = 0.0;  // probability of landing in a Bell branch at a point
    std::string condition;
};

namespace detail {

inline double verified_collapse_probability(const CanonicalState& s, const CollapsePoint& pt) {
    const auto d = charlie_collapse(s, {pt.theta, pt.phi});
    double prob = 0.0;
    auto check = [&](const std::optional<TwoQubitPure>& br, double p) {
        if (!br) throw std::logic_error("epr_collapse: empty branch at a collapse point");
        if (std::abs(concurrence(*br) - 1.0) > 1e-10) {
            throw std::logic_error("epr_collapse: branch concurrence != 1 at a collapse point");
        }
        prob += p;
    };
    if (pt.bell_branch & 1) check(d.phi1, d.p1);
    if (pt.bell_branch & 2) check(d.phi2, d.p2);
    if (std::abs(prob - pt.probability) > 1e-10) {
        throw std::logic_error("epr_collapse: branch probability mismatch");
    }
    return prob;
}

}  // namespace detail

// Bases where one (or both) of Charlie's outcomes leaves particles 2,3 in a
// Bell state. Every reported point is re-verified through the branch states.
inline CollapseReport epr_collapse(const CanonicalState& s, double zero_tol = kDefaultZeroTol) {
    using detail::fold_phi;
    using detail::theta_from_half_cot;
    const CaseLabel label = classify(s, zero_tol);
    const double a0 = s.a[0], a1 = s.a[1], a2 = s.a[2], a3 = s.a[3], a4 = s.a[4];
    const double mu = s.mu;
    const bool equal23 = std::abs(a2 - a3) <= zero_tol;

    CollapseReport rep;
    switch (label.cls) {
        case StateClass::GhzClass: {
            if (std::abs(a0 * a0 - 0.5) <= zero_tol) {
                rep.condition = "a0^2 = 1/2: both branches collapse at theta = pi/2";
                rep.points = {{kPi / 2, 0.0, 3, 1.0}};
            } else {
                rep.condition = "collapse at cos(theta) = +/-(1 - 2 a0^2)";
                const double prob = 2 * a0 * a0 * (1 - a0 * a0);
                const double y = std::clamp(1 - 2 * a0 * a0, -1.0, 1.0);
                rep.points = {{std::acos(y), 0.0, 1, prob}, {std::acos(-y), 0.0, 2, prob}};
            }
            break;
        }
        case StateClass::TriBell:
            rep.condition = "a2 = a3";
            if (equal23) {
                const double prob = 1 - a0 * a0;
                rep.points = {{0.0, 0.0, 2, prob}, {kPi, 0.0, 1, prob}};
            }
            break;
        case StateClass::ExtendedGhzE:
            rep.condition = "a4^2 = 1/2 with a1 cos(phi-mu) sin(theta) + a0 cos(theta) = 0";
            if (std::abs(a4 * a4 - 0.5) <= zero_tol) {
                rep.points = {{kPi / 2, fold_phi(mu + kPi / 2), 3, 1.0},
                              {kPi / 2, fold_phi(mu + 3 * kPi / 2), 3, 1.0}};
            }
            break;
        case StateClass::F_a1zero:
            rep.condition = "a2 = a3";
            if (equal23) {
                const double th0 = theta_from_half_cot(a4 / a0);
                const double prob =
                    a0 * a0 * (1 - a0 * a0 + a4 * a4) / (a0 * a0 + a4 * a4);
                rep.points = {{th0, kPi, 1, prob}, {kPi - th0, 0.0, 2, prob}};
            }
            break;
        case StateClass::G_a4zero:
            rep.condition = "a2 = a3";
            if (equal23) {
                const double th0 = theta_from_half_cot(a1 / a0);
                const double prob =
                    a0 * a0 * (1 - a0 * a0 - a1 * a1) / (a0 * a0 + a1 * a1);
                rep.points = {{th0, fold_phi(mu + kPi), 1, prob}, {kPi - th0, mu, 2, prob}};
            }
            break;
        case StateClass::I_muZero:
            rep.condition = "a2 = a3";
            if (equal23) {
                const double th0 = theta_from_half_cot((a1 + a4) / a0);
                const double sum = a1 + a4;
                const double prob = a0 * a0 * (1 - a0 * a0 - a1 * a1 + a4 * a4) /
                                    (a0 * a0 + sum * sum);
                rep.points = {{th0, kPi, 1, prob}, {kPi - th0, 0.0, 2, prob}};
            }
            break;
        case StateClass::J_muPi:
            if (equal23 && std::abs(a1 - a4) <= zero_tol) {
                rep.condition = "a1 = a4 and a2 = a3";
                const double prob = 2 * a1 * a1 + 2 * a2 * a2;
                rep.points = {{0.0, 0.0, 2, prob}, {kPi, 0.0, 1, prob}};
            } else {
                rep.condition = "a2 = a3";
                if (equal23) {
                    const double diff = a1 - a4;
                    const double prob = a0 * a0 * (1 - a0 * a0 - a1 * a1 + a4 * a4) /
                                        (a0 * a0 + diff * diff);
                    if (a1 > a4) {
                        const double th0 = theta_from_half_cot(diff / a0);
                        rep.points = {{th0, 0.0, 1, prob}, {kPi - th0, kPi, 2, prob}};
                    } else {
                        const double th0 = theta_from_half_cot(-diff / a0);
                        rep.points = {{th0, kPi, 1, prob}, {kPi - th0, 0.0, 2, prob}};
                    }
                }
            }
            break;
        case StateClass::C12:
        case StateClass::C13:
        case StateClass::H_a2zero:
        case StateClass::H_a3zero:
            rep.condition = "never: P and Q have no zeros in this class";
            break;
        case StateClass::BiseparableD24:
        case StateClass::BiseparableD34:
        case StateClass::DegenerateProduct:
            rep.condition = "never: particles 2 and 3 are not entangled in any branch";
            break;
        case StateClass::GeneralFull:
            rep.condition = "not covered by the case analysis";
            break;
    }
    for (auto& pt : rep.points) {
        rep.collapse_probability = detail::verified_collapse_probability(s, pt);
    }
    return rep;
}

}  // namespace ctq
