// json_io.hpp
// Input parsing for the CLI interchange formats and a deterministic JSON
// writer. Output goes through one formatter (17 significant digits) so equal
// runs produce byte-identical text and every value round-trips losslessly.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ctq/analytic.hpp"
#include "ctq/canonical_state.hpp"
#include "ctq/objective.hpp"
#include "ctq/protocol.hpp"

namespace ctq::io {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt(const Complex& z) {
    return "[" + fmt(z.real()) + "," + fmt(z.imag()) + "]";
}

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

// Ordered {key: value} assembly; values are pre-rendered JSON fragments.
class ObjWriter {
public:
    ObjWriter& raw(const std::string& key, const std::string& fragment) {
        body_ += (body_.empty() ? "" : ",");
        body_ += quote(key) + ":" + fragment;
        return *this;
    }
    ObjWriter& num(const std::string& key, double v) { return raw(key, fmt(v)); }
    ObjWriter& integer(const std::string& key, long long v) { return raw(key, std::to_string(v)); }
    ObjWriter& str(const std::string& key, const std::string& v) { return raw(key, quote(v)); }
    ObjWriter& boolean(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
    std::string str() const { return "{" + body_ + "}"; }

private:
    std::string body_;
};

inline std::string arr(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out + "]";
}

// ---- input parsing ----

inline nlohmann::json load_json_arg(const std::string& arg) {
    std::string text = arg;
    const auto first = arg.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || arg[first] != '{') {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument("cannot open input file: " + arg);
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    return nlohmann::json::parse(text);
}

inline CanonicalState parse_state(const nlohmann::json& j, const ValidateOptions& opts = {}) {
    if (!j.is_object() || !j.contains("a") || !j.contains("mu")) {
        throw std::invalid_argument(R"(state JSON must be {"a":[a0..a4],"mu":<radians>})");
    }
    const auto& arr_a = j.at("a");
    if (!arr_a.is_array() || arr_a.size() != 5) {
        throw std::invalid_argument("state field \"a\" must hold five amplitudes");
    }
    std::array<double, 5> a{};
    for (std::size_t i = 0; i < 5; ++i) a[i] = arr_a.at(i).get<double>();
    return validate(a, j.at("mu").get<double>(), opts);
}

inline MeasurementBasis parse_basis(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("theta") || !j.contains("phi")) {
        throw std::invalid_argument(R"(basis JSON must be {"theta":<rad>,"phi":<rad>})");
    }
    MeasurementBasis b{j.at("theta").get<double>(), j.at("phi").get<double>()};
    if (!(b.theta >= 0 && b.theta <= kPi) || !(b.phi >= 0 && b.phi <= 2 * kPi)) {
        throw std::invalid_argument("basis angles out of range: theta in [0,pi], phi in [0,2pi]");
    }
    return b;
}

inline Complex parse_complex(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j.at(0).get<double>(), j.at(1).get<double>()};
    throw std::invalid_argument("complex values are [re,im] pairs");
}

inline MessageQubit parse_message(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("alpha") || !j.contains("beta")) {
        throw std::invalid_argument(R"(message JSON must be {"alpha":[re,im],"beta":[re,im]})");
    }
    MessageQubit m{parse_complex(j.at("alpha")), parse_complex(j.at("beta"))};
    validate_message(m);
    return m;
}

// ---- serialization of library results ----

inline std::string state_json(const CanonicalState& s) {
    return ObjWriter{}
        .raw("a", arr({fmt(s.a[0]), fmt(s.a[1]), fmt(s.a[2]), fmt(s.a[3]), fmt(s.a[4])}))
        .num("mu", s.mu)
        .str();
}

inline std::string classify_json(const CanonicalState& s, const CaseLabel& label) {
    std::vector<std::string> zeros;
    for (int i = 1; i <= 4; ++i) {
        if (label.zero_mask & (1u << (i - 1))) zeros.push_back(quote("a" + std::to_string(i)));
    }
    const std::string mu_class =
        s.mu <= kPi / 2 ? (label.sin_mu_zero ? "zero" : "generic")
                        : (label.sin_mu_zero ? "pi" : "generic");
    return ObjWriter{}
        .str("case", to_string(label.cls))
        .raw("zero_pattern", arr(zeros))
        .str("mu_class", mu_class)
        .boolean("sin_mu_zero", label.sin_mu_zero)
        .str();
}

inline std::string candidate_json(const CandidatePoint& p) {
    return ObjWriter{}
        .num("theta", p.theta)
        .num("phi", p.phi)
        .str("origin", to_string(p.origin))
        .str("label", p.label)
        .str();
}

inline std::string report_json(const OptimumReport& r) {
    std::vector<std::string> points;
    for (const auto& p : r.best_points) points.push_back(candidate_json(p));
    ObjWriter w;
    w.str("method", to_string(r.method));
    w.str("case", to_string(r.case_label.cls));
    w.num("pmax", r.pmax);
    if (r.closed_form_pmax) w.num("closed_form_pmax", *r.closed_form_pmax);
    w.raw("best_points", arr(points));
    return w.str();
}

inline std::string collapse_json(const CollapseReport& r) {
    std::vector<std::string> points;
    for (const auto& p : r.points) {
        points.push_back(ObjWriter{}
                             .num("theta", p.theta)
                             .num("phi", p.phi)
                             .integer("bell_branch", p.bell_branch)
                             .num("probability", p.probability)
                             .str());
    }
    return ObjWriter{}
        .str("condition", r.condition)
        .raw("points", arr(points))
        .num("collapse_probability", r.collapse_probability)
        .str();
}

inline std::string trace_json(const ProtocolTrace& t, double objective_success) {
    std::vector<std::string> rows;
    for (const auto& br : t.branches) {
        ObjWriter w;
        w.str("charlie", br.charlie_outcome == 0 ? "x" : "x_perp");
        w.str("bell", to_string(br.bell_outcome));
        w.integer("ancilla", br.ancilla_outcome);
        w.num("probability", br.probability);
        w.boolean("success", br.success);
        w.raw("bob_state", arr({fmt(br.bob_state[0]), fmt(br.bob_state[1])}));
        w.raw("fidelity", br.fidelity ? fmt(*br.fidelity) : "null");
        rows.push_back(w.str());
    }
    return ObjWriter{}
        .num("total_success_probability", t.total_success_probability)
        .num("objective_success_probability", objective_success)
        .num("delta_vs_objective", std::abs(t.total_success_probability - objective_success))
        .raw("branches", arr(rows))
        .str();
}

}  // namespace ctq::io
