#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "folicheck/errors.hpp"
#include "folicheck/fields.hpp"

namespace folicheck {

// ============================================================================
// Scenario catalog and the scenario-file format.
//
// A scenario wires a model space, a foliation from the catalog, an embedding
// given by expressions, a default perturbation, and an optional block of
// expected report values used by the verify command.
//
// File format: UTF-8, line oriented. `#` starts a comment. Sections are
// `[scenario]`, `[model]`, `[foliation]`, `[embedding]`, `[perturbation]`,
// `[expect]`; entries are `key = value`. The embedding section holds one
// expression per cover coordinate under that model's coordinate names, the
// domain under `domain`, and numeric parameters as `param.<name>`.
// ============================================================================

struct Scenario {
    std::string id = "custom";
    std::string model_kind;
    std::string foliation_id;
    std::shared_ptr<const ModelSpace> model;
    Foliation fol;
    Embedding emb;
    double eps = 0;
    std::uint64_t seed = 1;
    int degree = 3;
    std::map<std::string, std::string> expect;
};

inline const std::vector<std::string>& model_coord_names(const std::string& kind) {
    static const std::vector<std::string> torus = {"theta", "phi"};
    static const std::vector<std::string> klein = {"x", "phi"};
    static const std::vector<std::string> cxrp2 = {"x", "y0", "y1", "y2"};
    if (kind == "torus2") return torus;
    if (kind == "klein_bottle") return klein;
    if (kind == "circle_x_rp2") return cxrp2;
    throw ValidationError("model", "unknown model kind '" + kind + "'");
}

inline std::shared_ptr<const ModelSpace> make_model(const std::string& kind) {
    if (kind == "torus2") return std::make_shared<ModelSpace>(make_torus2());
    if (kind == "klein_bottle") return std::make_shared<ModelSpace>(make_klein_bottle());
    if (kind == "circle_x_rp2")
        return std::make_shared<ModelSpace>(make_product({make_circle(), make_sphere2_antipodal()}));
    throw ValidationError("model", "unknown model kind '" + kind + "'");
}

inline Foliation make_foliation(const std::string& id, const std::string& model_kind) {
    if (id == "vertical_circles" && model_kind == "torus2") return make_vertical_circles();
    if (id == "horizontal_lines" && model_kind == "klein_bottle") return make_horizontal_lines();
    if (id == "circle_fibers" && model_kind == "circle_x_rp2") return make_circle_fibers();
    throw ValidationError("foliation",
                          "unknown foliation '" + id + "' on model '" + model_kind + "'");
}

inline ParamDomain make_domain(const std::string& name) {
    if (name == "circle") return ParamDomain::circle();
    if (name == "torus") return ParamDomain::torus();
    if (name == "klein") return ParamDomain::klein();
    throw ValidationError("embedding", "unknown parameter domain '" + name + "'");
}

inline const char* domain_name(const ParamDomain& d) {
    switch (d.kind) {
        case ParamDomain::Kind::Circle: return "circle";
        case ParamDomain::Kind::Torus: return "torus";
        case ParamDomain::Kind::Klein: return "klein";
    }
    return "?";
}

/// Report fields an [expect] block may reference.
inline const std::set<std::string>& known_expect_keys() {
    static const std::set<std::string> keys = {
        "tangency_count", "locus_empty",    "parity_ok",      "winding",
        "mod2_degree",    "verdict",        "sheets",         "w1_identity_ok",
        "w1_line_S",      "w1_line_loop_s", "w1_line_loop_t", "w1_ts_S",
        "w1_ts_loop_s",   "w1_ts_loop_t",   "w1_nu_S",        "w1_nu_loop_s",
        "w1_nu_loop_t",   "crossing_parity_loop_s", "crossing_parity_loop_t",
        "integer_degree_defined"};
    return keys;
}

// ----------------------------------------------------------------------------
// Builtins
// ----------------------------------------------------------------------------

struct BuiltinParams {
    int p = 2;
    int q = 3;
    double eps = -1;  // negative means scenario default
};

namespace detail {

inline Scenario finish_scenario(Scenario s) {
    s.emb.compile_components();
    validate_embedding(s.emb);
    return s;
}

inline Expr expr_of(const std::string& text) { return parse(text); }

}  // namespace detail

inline Scenario builtin_scenario(const std::string& id, const BuiltinParams& bp = {}) {
    Scenario s;
    s.id = id;
    if (id == "torus_pq") {
        if (bp.q == 0) throw BadParams("q must be nonzero");
        if (std::gcd(std::abs(bp.p), std::abs(bp.q)) != 1) throw BadParams("p and q must be coprime");
        s.model_kind = "torus2";
        s.foliation_id = "vertical_circles";
        s.model = make_model(s.model_kind);
        s.fol = make_foliation(s.foliation_id, s.model_kind);
        s.emb.target = s.model;
        s.emb.domain = ParamDomain::circle();
        s.emb.param_vars = {"t"};
        s.emb.components = {detail::expr_of(std::to_string(bp.q) + "*t"),
                            detail::expr_of(std::to_string(bp.p) + "*t")};
        s.eps = (bp.eps >= 0) ? bp.eps : 0.0;
        s.expect = {{"locus_empty", "true"},
                    {"winding", std::to_string(bp.q)},
                    {"mod2_degree", std::to_string(((bp.q % 2) + 2) % 2)},
                    {"sheets", std::to_string(std::abs(bp.q))},
                    {"verdict", "transverse_covering"},
                    {"w1_line_S", "0"},
                    {"parity_ok", "true"},
                    {"w1_identity_ok", "true"}};
        return detail::finish_scenario(std::move(s));
    }
    if (id == "torus_zero_winding") {
        s.model_kind = "torus2";
        s.foliation_id = "vertical_circles";
        s.model = make_model(s.model_kind);
        s.fol = make_foliation(s.foliation_id, s.model_kind);
        s.emb.target = s.model;
        s.emb.domain = ParamDomain::circle();
        s.emb.param_vars = {"t"};
        s.emb.components = {detail::expr_of("amp*sin(2*pi*t)"), detail::expr_of("t")};
        s.emb.params = {{"amp", 0.05}};
        s.eps = (bp.eps >= 0) ? bp.eps : 0.0;
        s.expect = {{"tangency_count", "2"},
                    {"locus_empty", "false"},
                    {"winding", "0"},
                    {"mod2_degree", "0"},
                    {"verdict", "confirmed"},
                    {"w1_line_S", "0"},
                    {"parity_ok", "true"},
                    {"w1_identity_ok", "true"}};
        return detail::finish_scenario(std::move(s));
    }
    if (id == "klein_nonTO") {
        s.model_kind = "klein_bottle";
        s.foliation_id = "horizontal_lines";
        s.model = make_model(s.model_kind);
        s.fol = make_foliation(s.foliation_id, s.model_kind);
        s.emb.target = s.model;
        s.emb.domain = ParamDomain::circle();
        s.emb.param_vars = {"t"};
        s.emb.components = {detail::expr_of("t"), detail::expr_of("0.5*cos(pi*t)")};
        s.eps = (bp.eps >= 0) ? bp.eps : 0.0;
        s.expect = {{"tangency_count", "1"},
                    {"locus_empty", "false"},
                    {"verdict", "not_applicable"},
                    {"w1_line_S", "1"},
                    {"w1_ts_S", "0"},
                    {"w1_nu_S", "1"},
                    {"parity_ok", "true"},
                    {"w1_identity_ok", "true"}};
        return detail::finish_scenario(std::move(s));
    }
    if (id == "rp2_product") {
        s.model_kind = "circle_x_rp2";
        s.foliation_id = "circle_fibers";
        s.model = make_model(s.model_kind);
        s.fol = make_foliation(s.foliation_id, s.model_kind);
        s.emb.target = s.model;
        s.emb.domain = ParamDomain::torus();
        s.emb.param_vars = {"s", "t"};
        s.emb.components = {detail::expr_of("s"), detail::expr_of("cos(pi*t)"), detail::expr_of("0"),
                            detail::expr_of("sin(pi*t)")};
        s.eps = (bp.eps >= 0) ? bp.eps : 0.05;
        s.expect = {{"locus_empty", "false"},
                    {"mod2_degree", "0"},
                    {"verdict", "confirmed"},
                    {"integer_degree_defined", "false"},
                    {"w1_line_loop_s", "0"},
                    {"w1_line_loop_t", "1"},
                    {"crossing_parity_loop_s", "0"},
                    {"crossing_parity_loop_t", "1"},
                    {"w1_identity_ok", "true"}};
        return detail::finish_scenario(std::move(s));
    }
    if (id == "oriented_null") {
        s.model_kind = "torus2";
        s.foliation_id = "vertical_circles";
        s.model = make_model(s.model_kind);
        s.fol = make_foliation(s.foliation_id, s.model_kind);
        s.emb.target = s.model;
        s.emb.domain = ParamDomain::circle();
        s.emb.param_vars = {"t"};
        s.emb.components = {detail::expr_of("0.5 + r*cos(2*pi*t)"), detail::expr_of("0.5 + r*sin(2*pi*t)")};
        s.emb.params = {{"r", 0.25}};
        s.eps = (bp.eps >= 0) ? bp.eps : 0.0;
        s.expect = {{"tangency_count", "2"},
                    {"locus_empty", "false"},
                    {"winding", "0"},
                    {"mod2_degree", "0"},
                    {"verdict", "confirmed"},
                    {"w1_line_S", "0"},
                    {"parity_ok", "true"},
                    {"w1_identity_ok", "true"}};
        return detail::finish_scenario(std::move(s));
    }
    throw UnknownScenario(id);
}

inline const std::vector<std::string>& builtin_ids() {
    static const std::vector<std::string> ids = {"torus_pq", "torus_zero_winding", "klein_nonTO",
                                                 "rp2_product", "oriented_null"};
    return ids;
}

// ----------------------------------------------------------------------------
// Loader / printer
// ----------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

inline Scenario load_scenario(const std::string& text) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::vector<std::string> order_guard = {"scenario", "model", "foliation", "embedding",
                                            "perturbation", "expect"};
    std::string cur;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(lineno, "unterminated section header");
            cur = detail::trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& s : order_guard) known = known || s == cur;
            if (!known) throw ParseError(lineno, "unknown section [" + cur + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
        if (cur.empty()) throw ParseError(lineno, "entry before any section header");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(lineno, "empty key");
        if (!sections[cur].emplace(key, value).second)
            throw ParseError(lineno, "duplicate key '" + key + "' in [" + cur + "]");
    }

    for (const char* required : {"model", "foliation", "embedding"})
        if (!sections.count(required))
            throw ValidationError(required, std::string("missing [") + required + "] section");

    Scenario s;
    if (sections.count("scenario") && sections["scenario"].count("id")) s.id = sections["scenario"]["id"];

    auto& model_sec = sections["model"];
    if (!model_sec.count("kind")) throw ValidationError("model", "missing model kind");
    s.model_kind = model_sec["kind"];
    s.model = make_model(s.model_kind);

    auto& fol_sec = sections["foliation"];
    if (!fol_sec.count("id")) throw ValidationError("foliation", "missing foliation id");
    s.foliation_id = fol_sec["id"];
    s.fol = make_foliation(s.foliation_id, s.model_kind);

    auto& emb_sec = sections["embedding"];
    if (!emb_sec.count("domain")) throw ValidationError("embedding", "missing parameter domain");
    s.emb.target = s.model;
    s.emb.domain = make_domain(emb_sec["domain"]);
    s.emb.param_vars = (s.emb.domain.dim == 1) ? std::vector<std::string>{"t"}
                                               : std::vector<std::string>{"s", "t"};
    const auto& names = model_coord_names(s.model_kind);
    for (const auto& name : names) {
        if (!emb_sec.count(name))
            throw ValidationError("embedding", "missing coordinate expression '" + name + "'");
        s.emb.components.push_back(parse(emb_sec[name]));
    }
    for (const auto& [k, v] : emb_sec) {
        if (k == "domain") continue;
        if (k.rfind("param.", 0) == 0) {
            char* end = nullptr;
            double num = std::strtod(v.c_str(), &end);
            if (!end || *end != '\0')
                throw ValidationError("embedding", "parameter '" + k + "' is not a number");
            s.emb.params[k.substr(6)] = num;
            continue;
        }
        bool is_coord = false;
        for (const auto& name : names) is_coord = is_coord || name == k;
        if (!is_coord) throw ValidationError("embedding", "unknown embedding key '" + k + "'");
    }

    if (sections.count("perturbation")) {
        auto& pert = sections["perturbation"];
        for (const auto& [k, v] : pert) {
            char* end = nullptr;
            double num = std::strtod(v.c_str(), &end);
            if (!end || *end != '\0')
                throw ValidationError("perturbation", "'" + k + "' is not a number");
            if (k == "eps") {
                if (num < 0) throw ValidationError("perturbation", "eps must be nonnegative");
                s.eps = num;
            } else if (k == "seed") {
                s.seed = static_cast<std::uint64_t>(num);
            } else if (k == "degree") {
                s.degree = static_cast<int>(num);
                if (s.degree < 1 || s.degree > 3)
                    throw ValidationError("perturbation", "degree must be between 1 and 3");
            } else {
                throw ValidationError("perturbation", "unknown perturbation key '" + k + "'");
            }
        }
    }

    if (sections.count("expect")) {
        for (const auto& [k, v] : sections["expect"]) {
            if (!known_expect_keys().count(k))
                throw ValidationError("expect", "unknown expectation key '" + k + "'");
            s.expect[k] = v;
        }
    }

    s.emb.compile_components();
    validate_embedding(s.emb);
    return s;
}

inline std::string print_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "[scenario]\n";
    out << "id = " << s.id << "\n\n";
    out << "[model]\n";
    out << "kind = " << s.model_kind << "\n\n";
    out << "[foliation]\n";
    out << "id = " << s.foliation_id << "\n\n";
    out << "[embedding]\n";
    out << "domain = " << domain_name(s.emb.domain) << "\n";
    const auto& names = model_coord_names(s.model_kind);
    for (std::size_t c = 0; c < names.size(); ++c)
        out << names[c] << " = " << print(s.emb.components[c]) << "\n";
    for (const auto& [k, v] : s.emb.params) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << "param." << k << " = " << buf << "\n";
    }
    out << "\n[perturbation]\n";
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", s.eps);
        out << "eps = " << buf << "\n";
    }
    out << "seed = " << s.seed << "\n";
    out << "degree = " << s.degree << "\n";
    if (!s.expect.empty()) {
        out << "\n[expect]\n";
        for (const auto& [k, v] : s.expect) out << k << " = " << v << "\n";
    }
    return out.str();
}

/// Structural equivalence: same spaces, expressions, parameters, and
/// perturbation defaults. The id and the expectations metadata are ignored.
inline bool equivalent_scenarios(const Scenario& a, const Scenario& b) {
    if (a.model_kind != b.model_kind || a.foliation_id != b.foliation_id) return false;
    if (a.emb.domain.kind != b.emb.domain.kind) return false;
    if (a.emb.components.size() != b.emb.components.size()) return false;
    for (std::size_t c = 0; c < a.emb.components.size(); ++c)
        if (!struct_equal(a.emb.components[c].root, b.emb.components[c].root)) return false;
    if (a.emb.params != b.emb.params) return false;
    return a.eps == b.eps && a.seed == b.seed && a.degree == b.degree;
}

}  // namespace folicheck
