// ctq: classify canonical three-qubit channels, compute and cross-check the
// maximal controlled-teleportation probability, sweep state families, run the
// exact protocol simulation, and execute the verification battery.
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctq/analytic.hpp"
#include "ctq/canonical_state.hpp"
#include "ctq/json_io.hpp"
#include "ctq/numeric.hpp"
#include "ctq/objective.hpp"
#include "ctq/protocol.hpp"
#include "ctq/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitUnsupportedAnalytic = 3;
constexpr int kExitCrossCheck = 4;

struct CommonOpts {
    std::string state;
    bool normalize = false;
    double zero_tol = ctq::kDefaultZeroTol;
};

ctq::CanonicalState load_state(const CommonOpts& c) {
    ctq::ValidateOptions v;
    v.normalize = c.normalize;
    v.zero_tol = c.zero_tol;
    return ctq::io::parse_state(ctq::io::load_json_arg(c.state), v);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("CTQ_SEED")) {
        return std::strtoull(env, nullptr, 10);
    }
    return 42;
}

ctq::StateClass family_from_name(const std::string& name) {
    using ctq::StateClass;
    static const std::vector<std::pair<std::string, StateClass>> table = {
        {"A", StateClass::GhzClass},        {"GhzClass", StateClass::GhzClass},
        {"B", StateClass::TriBell},         {"TriBell", StateClass::TriBell},
        {"C12", StateClass::C12},           {"C13", StateClass::C13},
        {"D24", StateClass::BiseparableD24},{"BiseparableD24", StateClass::BiseparableD24},
        {"D34", StateClass::BiseparableD34},{"BiseparableD34", StateClass::BiseparableD34},
        {"E", StateClass::ExtendedGhzE},    {"ExtendedGhzE", StateClass::ExtendedGhzE},
        {"F", StateClass::F_a1zero},        {"F_a1zero", StateClass::F_a1zero},
        {"G", StateClass::G_a4zero},        {"G_a4zero", StateClass::G_a4zero},
        {"H2", StateClass::H_a2zero},       {"H_a2zero", StateClass::H_a2zero},
        {"H3", StateClass::H_a3zero},       {"H_a3zero", StateClass::H_a3zero},
        {"I", StateClass::I_muZero},        {"I_muZero", StateClass::I_muZero},
        {"J", StateClass::J_muPi},          {"J_muPi", StateClass::J_muPi},
    };
    for (const auto& [key, cls] : table) {
        if (key == name) return cls;
    }
    throw std::invalid_argument("unknown sweep family: " + name);
}

// deterministic state of a family from sweep parameters u, v in (0,1)
ctq::CanonicalState family_state(ctq::StateClass cls, double u, double v, double mu) {
    using ctq::StateClass;
    if (!(u > 0 && u < 1) || !(v > 0 && v < 1)) {
        throw std::invalid_argument("sweep parameters must lie strictly inside (0,1)");
    }
    std::array<double, 5> w{};  // squared amplitudes
    const double rest = 1 - u;
    switch (cls) {
        case StateClass::GhzClass:        w = {u, 0, 0, 0, rest}; break;
        case StateClass::TriBell:         w = {u, 0, v * rest, (1 - v) * rest, 0}; break;
        case StateClass::C12:             w = {u, 0, 0, (1 - v) * rest, v * rest}; break;
        case StateClass::C13:             w = {u, 0, (1 - v) * rest, 0, v * rest}; break;
        case StateClass::BiseparableD24:  w = {u, v * rest, 0, (1 - v) * rest, 0}; break;
        case StateClass::BiseparableD34:  w = {u, v * rest, (1 - v) * rest, 0, 0}; break;
        case StateClass::ExtendedGhzE:    w = {v * (1 - u), (1 - v) * (1 - u), 0, 0, u}; break;
        case StateClass::F_a1zero:
            w = {u, 0, (1 - v) * rest / 2, (1 - v) * rest / 2, v * rest};
            break;
        case StateClass::G_a4zero:
            w = {u, v * rest, (1 - v) * rest / 2, (1 - v) * rest / 2, 0};
            break;
        case StateClass::H_a2zero:
            w = {u, v * rest, 0, (1 - v) * rest / 2, (1 - v) * rest / 2};
            break;
        case StateClass::H_a3zero:
            w = {u, v * rest, (1 - v) * rest / 2, 0, (1 - v) * rest / 2};
            break;
        case StateClass::I_muZero:
        case StateClass::J_muPi:
            w = {u, v * rest / 2, (1 - v) * rest / 2, (1 - v) * rest / 2, v * rest / 2};
            mu = (cls == StateClass::I_muZero) ? 0.0 : ctq::kPi;
            break;
        default:
            throw std::invalid_argument("family has no sweep parameterization");
    }
    std::array<double, 5> a{};
    for (std::size_t i = 0; i < 5; ++i) a[i] = std::sqrt(w[i]);
    return ctq::validate(a, mu, {.normalize = true});
}

int cmd_classify(const CommonOpts& common) {
    const auto s = load_state(common);
    const auto label = ctq::classify(s, common.zero_tol);
    std::cout << ctq::io::classify_json(s, label) << "\n";
    return kExitOk;
}

int cmd_pmax(const CommonOpts& common, const std::string& method, ctq::OptimizerConfig cfg,
             double cross_tol) {
    const auto s = load_state(common);
    if (method == "analytic") {
        std::cout << ctq::io::report_json(ctq::pmax_analytic(s, common.zero_tol)) << "\n";
        return kExitOk;
    }
    if (method == "numeric") {
        std::cout << ctq::io::report_json(ctq::pmax_numeric(s, cfg)) << "\n";
        return kExitOk;
    }
    const auto analytic = ctq::pmax_analytic(s, common.zero_tol);
    const auto numeric = ctq::pmax_numeric(s, cfg);
    const double delta = std::abs(analytic.pmax - numeric.pmax);
    std::cout << ctq::io::ObjWriter{}
                     .raw("analytic", ctq::io::report_json(analytic))
                     .raw("numeric", ctq::io::report_json(numeric))
                     .num("delta", delta)
                     .num("cross_tol", cross_tol)
                     .boolean("agree", delta <= cross_tol)
                     .str()
              << "\n";
    return delta <= cross_tol ? kExitOk : kExitCrossCheck;
}

int cmd_sweep(const std::string& family, int steps, double from, double to, double v_fixed,
              int v_steps, double v_from, double v_to, double mu, ctq::OptimizerConfig cfg,
              const std::string& format) {
    const auto cls = family_from_name(family);
    if (steps < 1 || v_steps < 1) throw std::invalid_argument("step counts must be positive");
    std::vector<std::string> json_rows;
    if (format == "csv") {
        std::cout << "params,case,pmax_analytic,pmax_numeric,delta,theta_opt,phi_opt\n";
    }
    for (int i = 0; i < steps; ++i) {
        const double u = steps == 1 ? from : from + (to - from) * i / (steps - 1);
        for (int j = 0; j < v_steps; ++j) {
            const double v =
                v_steps == 1 ? v_fixed : v_from + (v_to - v_from) * j / (v_steps - 1);
            const auto s = family_state(cls, u, v, mu);
            const auto analytic = ctq::pmax_analytic(s);
            const auto numeric = ctq::pmax_numeric(s, cfg);
            const double delta = std::abs(analytic.pmax - numeric.pmax);
            const auto& best = analytic.best_points.front();
            const std::string params = "u=" + ctq::io::fmt(u) + ";v=" + ctq::io::fmt(v) +
                                       ";mu=" + ctq::io::fmt(s.mu);
            if (format == "csv") {
                std::cout << params << "," << to_string(analytic.case_label.cls) << ","
                          << ctq::io::fmt(analytic.pmax) << "," << ctq::io::fmt(numeric.pmax)
                          << "," << ctq::io::fmt(delta) << "," << ctq::io::fmt(best.theta)
                          << "," << ctq::io::fmt(best.phi) << "\n";
            } else {
                json_rows.push_back(ctq::io::ObjWriter{}
                                        .str("params", params)
                                        .str("case", to_string(analytic.case_label.cls))
                                        .num("pmax_analytic", analytic.pmax)
                                        .num("pmax_numeric", numeric.pmax)
                                        .num("delta", delta)
                                        .num("theta_opt", best.theta)
                                        .num("phi_opt", best.phi)
                                        .str());
            }
        }
    }
    if (format != "csv") std::cout << ctq::io::arr(json_rows) << "\n";
    return kExitOk;
}

int cmd_simulate(const CommonOpts& common, const std::string& basis_arg,
                 const std::string& message_arg) {
    const auto s = load_state(common);
    const auto b = ctq::io::parse_basis(ctq::io::load_json_arg(basis_arg));
    const auto m = ctq::io::parse_message(ctq::io::load_json_arg(message_arg));
    const auto trace = ctq::run_protocol(s, b, m);
    std::cout << ctq::io::trace_json(trace, ctq::success_probability(s, b)) << "\n";
    return kExitOk;
}

int cmd_verify(const ctq::verify::Options& opt) {
    const auto suites = ctq::verify::run_all(opt);
    std::cout << ctq::verify::summary_json(opt, suites) << "\n";
    for (const auto& s : suites) {
        if (s.failures != 0) return 1;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"controlled-teleportation optimizer for canonical three-qubit channels"};
    app.require_subcommand(1);

    CommonOpts common;
    std::optional<std::uint64_t> seed_flag;
    ctq::OptimizerConfig cfg;
    double cross_tol = 1e-5;
    std::string method = "both";
    std::string format;

    auto add_state_opts = [&](CLI::App* sub, bool required = true) {
        auto* o = sub->add_option("--state,--input", common.state,
                                  "state as inline JSON {\"a\":[..],\"mu\":..} or a file path");
        if (required) o->required();
        sub->add_flag("--normalize", common.normalize, "rescale amplitudes to unit norm");
        sub->add_option("--zero-tol", common.zero_tol, "threshold for treating amplitudes as zero");
    };
    auto add_grid_opts = [&](CLI::App* sub) {
        sub->add_option("--grid-theta", cfg.grid_theta, "theta grid points");
        sub->add_option("--grid-phi", cfg.grid_phi, "phi grid points");
        sub->add_option("--threads", cfg.threads, "worker threads for the grid scan");
    };

    auto* classify_cmd = app.add_subcommand("classify", "classify a state into its case label");
    add_state_opts(classify_cmd);

    auto* pmax_cmd = app.add_subcommand("pmax", "maximal success probability");
    add_state_opts(pmax_cmd);
    pmax_cmd->add_option("--method", method, "analytic | numeric | both")
        ->check(CLI::IsMember({"analytic", "numeric", "both"}));
    add_grid_opts(pmax_cmd);
    pmax_cmd->add_option("--cross-tol", cross_tol, "max |analytic - numeric| for method=both");

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep a one- or two-parameter state family");
    std::string family;
    int steps = 9, v_steps = 1;
    double from = 0.1, to = 0.9, v_fixed = 0.5, v_from = 0.1, v_to = 0.9, mu = 0.0;
    sweep_cmd->add_option("--family", family, "case label, e.g. A, TriBell, C12, J")->required();
    sweep_cmd->add_option("--steps", steps, "points for the primary parameter u");
    sweep_cmd->add_option("--from", from, "first u value");
    sweep_cmd->add_option("--to", to, "last u value");
    sweep_cmd->add_option("--v", v_fixed, "fixed secondary parameter");
    sweep_cmd->add_option("--v-steps", v_steps, "points for v (makes the sweep 2D)");
    sweep_cmd->add_option("--v-from", v_from, "first v value");
    sweep_cmd->add_option("--v-to", v_to, "last v value");
    sweep_cmd->add_option("--mu", mu, "phase for families where it is free");
    add_grid_opts(sweep_cmd);
    sweep_cmd->add_option("--format", format, "csv (default) or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* sim_cmd = app.add_subcommand("simulate", "run the full protocol at one basis");
    add_state_opts(sim_cmd);
    std::string basis_arg, message_arg;
    sim_cmd->add_option("--basis", basis_arg, R"({"theta":..,"phi":..})")->required();
    sim_cmd->add_option("--message", message_arg, R"({"alpha":[re,im],"beta":[re,im]})")
        ->required();

    auto* verify_cmd = app.add_subcommand("verify", "run the full invariant battery");
    ctq::verify::Options vopt;
    verify_cmd->add_option("--seed", seed_flag, "RNG seed (also via CTQ_SEED)");
    verify_cmd->add_option("--pairs", vopt.pairs, "samples for the identity suites");
    verify_cmd->add_option("--per-case", vopt.per_case, "states per class");
    verify_cmd->add_option("--protocol-triples", vopt.protocol_triples,
                           "(state, basis, message) samples");
    verify_cmd->add_option("--threads", vopt.threads, "worker threads");
    verify_cmd->add_option("--grid-theta", vopt.optimizer.grid_theta, "numeric grid theta points");
    verify_cmd->add_option("--grid-phi", vopt.optimizer.grid_phi, "numeric grid phi points");
    verify_cmd
        ->add_option("--inject-fault", vopt.inject_fault,
                     "test-only: tamper a known quantity (p-expanded)")
        ->check(CLI::IsMember({"p-expanded"}));
    auto* fmt_opt = app.add_option("--format", format, "output format")
                        ->check(CLI::IsMember({"json", "csv"}));
    (void)fmt_opt;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (classify_cmd->parsed()) return cmd_classify(common);
        if (pmax_cmd->parsed()) return cmd_pmax(common, method, cfg, cross_tol);
        if (sweep_cmd->parsed()) {
            return cmd_sweep(family, steps, from, to, v_fixed, v_steps, v_from, v_to, mu, cfg,
                             format.empty() ? "csv" : format);
        }
        if (sim_cmd->parsed()) return cmd_simulate(common, basis_arg, message_arg);
        if (verify_cmd->parsed()) {
            vopt.seed = resolve_seed(seed_flag);
            return cmd_verify(vopt);
        }
    } catch (const ctq::UnsupportedGeneralCase& e) {
        std::cerr << e.what() << "\nhint: --method numeric handles the general case\n";
        return kExitUnsupportedAnalytic;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
