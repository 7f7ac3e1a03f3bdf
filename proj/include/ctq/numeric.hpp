// numeric.hpp
// Brute-force oracle: dense grid over (theta, phi) followed by derivative-free
// local refinement from the best grid cells. Covers every state, including
// the general class the analytic module declines.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "ctq/analytic.hpp"
#include "ctq/canonical_state.hpp"
#include "ctq/objective.hpp"

namespace ctq {

struct OptimizerConfig {
    int grid_theta = 721;
    int grid_phi = 1441;
    int refine_iters = 200;
    double refine_tol = 1e-10;  // stop when the simplex objective spread falls below this
    int top_k_cells = 8;
    int threads = 1;
};

struct Landscape {
    int grid_theta = 0;
    int grid_phi = 0;
    std::vector<double> values;  // row-major, theta index major

    double theta_at(int i) const { return kPi * i / (grid_theta - 1); }
    double phi_at(int j) const { return 2 * kPi * j / (grid_phi - 1); }
};

namespace detail {

struct GridCell {
    double value;
    std::int64_t index;  // row-major; ties broken by index so reductions are deterministic
    bool operator<(const GridCell& o) const {
        return value != o.value ? value < o.value : index < o.index;
    }
};

inline void push_cell(std::vector<GridCell>& best, std::size_t cap, GridCell cell) {
    if (best.size() == cap && !(cell < best.back())) return;
    best.insert(std::lower_bound(best.begin(), best.end(), cell), cell);
    if (best.size() > cap) best.pop_back();
}

inline void scan_rows(const CanonicalState& s, const Landscape& grid, int row_begin, int row_end,
                      std::size_t cap, std::vector<double>* values, std::vector<GridCell>* best) {
    const double cm = std::cos(s.mu), sm = std::sin(s.mu);
    std::vector<double> cp(std::size_t(grid.grid_phi)), sp(std::size_t(grid.grid_phi));
    for (int j = 0; j < grid.grid_phi; ++j) {
        cp[std::size_t(j)] = std::cos(grid.phi_at(j));
        sp[std::size_t(j)] = std::sin(grid.phi_at(j));
    }
    for (int i = row_begin; i < row_end; ++i) {
        const double half = grid.theta_at(i) / 2;
        const double sh = std::sin(half), ch = std::cos(half);
        for (int j = 0; j < grid.grid_phi; ++j) {
            const Trig t{sh, ch, cm, sm, cp[std::size_t(j)], sp[std::size_t(j)]};
            const auto ev = eval_branches(s, t);
            const double f = std::sqrt(ev.big_p) + std::sqrt(ev.big_q);
            const std::int64_t idx = std::int64_t(i) * grid.grid_phi + j;
            if (values) (*values)[std::size_t(idx)] = f;
            if (best) push_cell(*best, cap, {f, idx});
        }
    }
}

inline std::vector<GridCell> grid_scan(const CanonicalState& s, const Landscape& grid,
                                       std::size_t cap, int threads,
                                       std::vector<double>* values) {
    threads = std::max(1, threads);
    std::vector<GridCell> best;
    if (threads == 1) {
        scan_rows(s, grid, 0, grid.grid_theta, cap, values, cap ? &best : nullptr);
        return best;
    }
    std::vector<std::vector<GridCell>> partial{std::size_t(threads)};
    std::vector<std::thread> pool;
    const int rows_per = (grid.grid_theta + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int b = w * rows_per, e = std::min(grid.grid_theta, b + rows_per);
        if (b >= e) continue;
        pool.emplace_back([&, w, b, e] {
            scan_rows(s, grid, b, e, cap, values, cap ? &partial[std::size_t(w)] : nullptr);
        });
    }
    for (auto& th : pool) th.join();
    // deterministic merge: (value, index) ordering does not depend on the chunking
    for (auto& part : partial) best.insert(best.end(), part.begin(), part.end());
    std::sort(best.begin(), best.end());
    if (best.size() > cap) best.resize(cap);
    return best;
}

// keep the k best cells that sit in distinct grid neighborhoods
inline std::vector<GridCell> separated_cells(const std::vector<GridCell>& sorted, int top_k,
                                             const Landscape& grid) {
    const int sep_i = std::max(2, grid.grid_theta / 64);
    const int sep_j = std::max(2, grid.grid_phi / 64);
    std::vector<GridCell> kept;
    for (const auto& cell : sorted) {
        const int ci = int(cell.index / grid.grid_phi), cj = int(cell.index % grid.grid_phi);
        bool close = false;
        for (const auto& k : kept) {
            const int ki = int(k.index / grid.grid_phi), kj = int(k.index % grid.grid_phi);
            int dj = std::abs(cj - kj);
            dj = std::min(dj, grid.grid_phi - 1 - dj);  // phi wraps
            if (std::abs(ci - ki) <= sep_i && dj <= sep_j) {
                close = true;
                break;
            }
        }
        if (!close) kept.push_back(cell);
        if (int(kept.size()) >= top_k) break;
    }
    return kept;
}

// Nelder-Mead on raw (theta, phi) coordinates; the objective folds theta into
// [0, pi] by reflection and wraps phi, so iterates may roam freely.
inline std::pair<double, MeasurementBasis> refine(const CanonicalState& s, MeasurementBasis start,
                                                  double step_theta, double step_phi,
                                                  const OptimizerConfig& cfg) {
    auto fold = [](double th, double ph) -> MeasurementBasis {
        th = std::fmod(std::abs(th), 2 * kPi);
        if (th > kPi) th = 2 * kPi - th;
        ph = std::fmod(ph, 2 * kPi);
        if (ph < 0) ph += 2 * kPi;
        return {th, ph};
    };
    struct Vertex {
        double th, ph, f;
    };
    auto eval = [&](double th, double ph) { return Vertex{th, ph, objective_value(s, fold(th, ph))}; };
    auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };

    std::array<Vertex, 3> v = {eval(start.theta, start.phi),
                               eval(start.theta + step_theta, start.phi),
                               eval(start.theta, start.phi + step_phi)};
    for (int it = 0; it < cfg.refine_iters; ++it) {
        std::sort(v.begin(), v.end(), by_f);
        if (v[2].f - v[0].f < cfg.refine_tol) break;
        const double cth = (v[0].th + v[1].th) / 2, cph = (v[0].ph + v[1].ph) / 2;
        const Vertex refl = eval(2 * cth - v[2].th, 2 * cph - v[2].ph);
        if (refl.f < v[0].f) {
            const Vertex expd = eval(3 * cth - 2 * v[2].th, 3 * cph - 2 * v[2].ph);
            v[2] = expd.f < refl.f ? expd : refl;
        } else if (refl.f < v[1].f) {
            v[2] = refl;
        } else if (refl.f < v[2].f) {
            const Vertex out = eval(1.5 * cth - 0.5 * v[2].th, 1.5 * cph - 0.5 * v[2].ph);
            v[2] = out.f <= refl.f ? out : refl;
        } else {
            const Vertex in = eval(0.5 * (cth + v[2].th), 0.5 * (cph + v[2].ph));
            if (in.f < v[2].f) {
                v[2] = in;
            } else {
                for (int k = 1; k < 3; ++k) {
                    v[std::size_t(k)] = eval(0.5 * (v[0].th + v[std::size_t(k)].th),
                                             0.5 * (v[0].ph + v[std::size_t(k)].ph));
                }
            }
        }
    }
    std::sort(v.begin(), v.end(), by_f);
    const auto b = fold(v[0].th, v[0].ph);
    return {v[0].f, b};
}

}  // namespace detail

inline Landscape objective_landscape(const CanonicalState& s, const OptimizerConfig& cfg = {}) {
    Landscape grid{cfg.grid_theta, cfg.grid_phi, {}};
    grid.values.resize(std::size_t(cfg.grid_theta) * std::size_t(cfg.grid_phi));
    detail::grid_scan(s, grid, 0, cfg.threads, &grid.values);
    return grid;
}

inline OptimumReport pmax_numeric(const CanonicalState& s, const OptimizerConfig& cfg = {}) {
    Landscape grid{cfg.grid_theta, cfg.grid_phi, {}};
    const std::size_t raw_cap = std::size_t(std::max(1, cfg.top_k_cells)) * 16;
    const auto raw = detail::grid_scan(s, grid, raw_cap, cfg.threads, nullptr);
    const auto basins = detail::separated_cells(raw, std::max(1, cfg.top_k_cells), grid);

    double best_f = raw.front().value;
    MeasurementBasis best_b{grid.theta_at(int(raw.front().index / cfg.grid_phi)),
                            grid.phi_at(int(raw.front().index % cfg.grid_phi))};
    const double step_t = kPi / (cfg.grid_theta - 1);
    const double step_p = 2 * kPi / (cfg.grid_phi - 1);
    for (const auto& cell : basins) {
        const MeasurementBasis start{grid.theta_at(int(cell.index / cfg.grid_phi)),
                                     grid.phi_at(int(cell.index % cfg.grid_phi))};
        const auto [f, b] = detail::refine(s, start, step_t, step_p, cfg);
        if (f < best_f) {
            best_f = f;
            best_b = b;
        }
    }

    OptimumReport report;
    report.pmax = std::clamp(1.0 - best_f, 0.0, 1.0);
    report.best_points = {{best_b.theta, best_b.phi, CandidateOrigin::StationaryRoot, "numeric"}};
    report.case_label = classify(s);
    report.method = OptimizeMethod::Numeric;
    return report;
}

}  // namespace ctq
