#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "realmono/matrix.hpp"
#include "realmono/means.hpp"
#include "realmono/real_order.hpp"
#include "realmono/sampling.hpp"

namespace realmono {

// ---------------------------------------------------------------------------
// Expression trees for free functions.
//
// A spec is evaluable at every dimension n >= 1: constants are scalar
// multiples of the identity, and all operations are dimension-uniform.
// A const_block node (fixed-size matrix literal) can be written down but is
// rejected by validate(), since it breaks dimension uniformity.
// ---------------------------------------------------------------------------

enum class NodeKind {
    variable,        // X_j, 1-based
    scalar_identity, // c * I
    add,
    scale,           // c * child
    multiply,        // child0 * child1
    inverse,
    sqrt,            // principal square root
    re,
    im,
    geomean,         // child0 # child1
    const_block      // fixed-size literal; never valid
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    int var_index = 0;
    Complex scalar{0.0, 0.0};
    std::vector<ExprPtr> children;
    CMatrix block;
};

inline ExprPtr var(int j) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::variable;
    n->var_index = j;
    return n;
}

inline ExprPtr cident(Complex c) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::scalar_identity;
    n->scalar = c;
    return n;
}

inline ExprPtr add(std::vector<ExprPtr> args) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::add;
    n->children = std::move(args);
    return n;
}

inline ExprPtr scale(Complex c, ExprPtr e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::scale;
    n->scalar = c;
    n->children = {std::move(e)};
    return n;
}

inline ExprPtr mul(ExprPtr a, ExprPtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::multiply;
    n->children = {std::move(a), std::move(b)};
    return n;
}

inline ExprPtr inv(ExprPtr e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::inverse;
    n->children = {std::move(e)};
    return n;
}

inline ExprPtr sqrt_node(ExprPtr e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::sqrt;
    n->children = {std::move(e)};
    return n;
}

inline ExprPtr re_node(ExprPtr e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::re;
    n->children = {std::move(e)};
    return n;
}

inline ExprPtr im_node(ExprPtr e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::im;
    n->children = {std::move(e)};
    return n;
}

inline ExprPtr geomean_node(ExprPtr a, ExprPtr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::geomean;
    n->children = {std::move(a), std::move(b)};
    return n;
}

inline ExprPtr const_block_node(CMatrix m) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::const_block;
    n->block = std::move(m);
    return n;
}

enum class Domain { all, p_re, hermitian_pd };

inline std::string domain_name(Domain d) {
    switch (d) {
        case Domain::all: return "all";
        case Domain::p_re: return "p_re";
        case Domain::hermitian_pd: return "hermitian_pd";
    }
    return "all";
}

inline Domain parse_domain(const std::string& s) {
    if (s == "all") return Domain::all;
    if (s == "p_re") return Domain::p_re;
    if (s == "hermitian_pd") return Domain::hermitian_pd;
    throw SpecValidationError("unknown domain: " + s);
}

/// Symbolic description of a free function, evaluable at every dimension.
struct FreeFunctionSpec {
    std::string name = "custom";
    int arity = 1;
    Domain domain = Domain::all;
    ExprPtr expr;
    /// Declared codomain hint: restricted to P_Re, outputs stay in P_Re.
    bool maps_into_p_re = false;
};

namespace detail {
inline void walk_validate(const ExprPtr& e, int arity, int& max_var) {
    if (!e) throw SpecValidationError("spec: null expression node");
    switch (e->kind) {
        case NodeKind::variable:
            if (e->var_index < 1)
                throw SpecValidationError("spec: variable index must be >= 1");
            max_var = std::max(max_var, e->var_index);
            if (e->var_index > arity)
                throw SpecValidationError("spec: variable X" + std::to_string(e->var_index) +
                                          " exceeds arity " + std::to_string(arity));
            break;
        case NodeKind::scalar_identity:
            break;
        case NodeKind::const_block:
            throw SpecValidationError("spec: fixed-size constant block is not dimension-uniform");
        case NodeKind::add:
            if (e->children.empty()) throw SpecValidationError("spec: add needs arguments");
            break;
        case NodeKind::scale:
        case NodeKind::inverse:
        case NodeKind::sqrt:
        case NodeKind::re:
        case NodeKind::im:
            if (e->children.size() != 1) throw SpecValidationError("spec: unary node arity");
            break;
        case NodeKind::multiply:
        case NodeKind::geomean:
            if (e->children.size() != 2) throw SpecValidationError("spec: binary node arity");
            break;
    }
    for (const auto& c : e->children) walk_validate(c, arity, max_var);
}
} // namespace detail

inline void validate(const FreeFunctionSpec& f) {
    if (f.arity < 1) throw SpecValidationError("spec: arity must be >= 1");
    int max_var = 0;
    detail::walk_validate(f.expr, f.arity, max_var);
}

/// Membership of a tuple in the spec's declared domain.
inline bool domain_contains(const FreeFunctionSpec& f, const OperatorTuple& x, double tol = -1.0) {
    switch (f.domain) {
        case Domain::all:
            return true;
        case Domain::p_re:
            return tol >= 0 ? in_P_re(x, tol) : in_P_re(x);
        case Domain::hermitian_pd:
            for (const auto& xi : x) {
                if (!is_hermitian(xi)) return false;
                CMatrix h = re_part(xi);
                const double t = tol >= 0 ? tol : default_psd_tol(h);
                if (hermitian_eigenvalues(h).minCoeff() <= t) return false;
            }
            return true;
    }
    return false;
}

namespace detail {
inline CMatrix eval_node(const ExprNode& e, const OperatorTuple& x, Eigen::Index n) {
    switch (e.kind) {
        case NodeKind::variable:
            return x[static_cast<std::size_t>(e.var_index - 1)];
        case NodeKind::scalar_identity:
            return e.scalar * identity(n);
        case NodeKind::add: {
            CMatrix acc = eval_node(*e.children[0], x, n);
            for (std::size_t i = 1; i < e.children.size(); ++i) acc += eval_node(*e.children[i], x, n);
            return acc;
        }
        case NodeKind::scale:
            return e.scalar * eval_node(*e.children[0], x, n);
        case NodeKind::multiply:
            return eval_node(*e.children[0], x, n) * eval_node(*e.children[1], x, n);
        case NodeKind::inverse:
            return safe_inverse(eval_node(*e.children[0], x, n), "evaluate: inverse");
        case NodeKind::sqrt: {
            CMatrix m = eval_node(*e.children[0], x, n);
            if (is_hermitian(m)) return sqrt_psd(m);
            return principal_sqrt(m);
        }
        case NodeKind::re:
            return re_part(eval_node(*e.children[0], x, n));
        case NodeKind::im:
            return im_part(eval_node(*e.children[0], x, n));
        case NodeKind::geomean:
            return mean(MeanKind::geometric, eval_node(*e.children[0], x, n),
                        eval_node(*e.children[1], x, n));
        case NodeKind::const_block:
            throw SpecValidationError("evaluate: const_block survived validation");
    }
    throw SpecValidationError("evaluate: unknown node kind");
}
} // namespace detail

/// Evaluate the spec at a tuple in its declared domain.
inline CMatrix evaluate(const FreeFunctionSpec& f, const OperatorTuple& x) {
    validate(f);
    require_uniform(x, "evaluate");
    if (static_cast<int>(x.size()) != f.arity)
        throw ArityError("evaluate: tuple arity " + std::to_string(x.size()) +
                         " does not match spec arity " + std::to_string(f.arity));
    if (!domain_contains(f, x))
        throw DomainError("evaluate: input outside declared domain " + domain_name(f.domain));
    return detail::eval_node(*f.expr, x, x.front().rows());
}

namespace detail {
inline ExprPtr substitute(const ExprPtr& e, const std::vector<ExprPtr>& repl) {
    if (e->kind == NodeKind::variable) return repl[static_cast<std::size_t>(e->var_index - 1)];
    auto n = std::make_shared<ExprNode>(*e);
    for (auto& c : n->children) c = substitute(c, repl);
    return n;
}

inline void probe_hermitian_valued(const FreeFunctionSpec& f, int arity_pd, const char* label) {
    // Seeded probes: first arity_pd slots PD Hermitian, remaining slots Hermitian.
    for (int n = 1; n <= 3; ++n) {
        Rng rng(mix_seed(0xC0401ull, static_cast<std::uint64_t>(n)));
        OperatorTuple probe;
        for (int j = 0; j < f.arity; ++j)
            probe.push_back(j < arity_pd ? random_psd(n, rng, 0.2) : gaussian_hermitian(n, rng));
        CMatrix out = evaluate(f, probe);
        if (max_abs(out - out.adjoint()) > 1e-9 * (1.0 + spectral_norm(out)))
            throw ContractError(std::string(label) + " is not Hermitian-valued on probe inputs");
    }
}
} // namespace detail

/// Compose F(X) = G(Re X) + i * H(Re X, Im X) from a Hermitian-valued G of
/// arity k and a Hermitian-valued H of arity 2k (variables ordered as the k
/// real parts followed by the k imaginary parts). By construction
/// Re F(X) = G(Re X) exactly.
inline FreeFunctionSpec make_corollary_form(const FreeFunctionSpec& g, const FreeFunctionSpec& h) {
    validate(g);
    validate(h);
    const int k = g.arity;
    if (h.arity != 2 * k)
        throw ArityError("make_corollary_form: H must have arity 2k = " + std::to_string(2 * k));
    detail::probe_hermitian_valued(g, k, "make_corollary_form: G");
    detail::probe_hermitian_valued(h, k, "make_corollary_form: H");

    std::vector<ExprPtr> g_repl, h_repl;
    for (int j = 1; j <= k; ++j) g_repl.push_back(re_node(var(j)));
    for (int j = 1; j <= k; ++j) h_repl.push_back(re_node(var(j)));
    for (int j = 1; j <= k; ++j) h_repl.push_back(im_node(var(j)));

    FreeFunctionSpec f;
    f.name = "corollary(" + g.name + "," + h.name + ")";
    f.arity = k;
    f.domain = (g.domain == Domain::all) ? Domain::all : Domain::p_re;
    f.expr = add({detail::substitute(g.expr, g_repl),
                  scale(kImaginaryUnit, detail::substitute(h.expr, h_repl))});
    f.maps_into_p_re = g.maps_into_p_re;
    return f;
}

/// Rewrites F into the induced map on Hermitian parts, R |-> Re F(Re R).
inline FreeFunctionSpec hermitian_part_map(const FreeFunctionSpec& f) {
    validate(f);
    std::vector<ExprPtr> repl;
    for (int j = 1; j <= f.arity; ++j) repl.push_back(re_node(var(j)));
    FreeFunctionSpec g;
    g.name = "re(" + f.name + ")";
    g.arity = f.arity;
    g.domain = (f.domain == Domain::all) ? Domain::all : Domain::hermitian_pd;
    g.expr = re_node(detail::substitute(f.expr, repl));
    return g;
}

// ---------------------------------------------------------------------------
// JSON grammar.
//
//   spec  := {"name": str, "arity": int, "domain": "all"|"p_re"|"hermitian_pd",
//             "maps_into_p_re"?: bool, "expr": node}
//   node  := {"var": int}
//          | {"const": [re, im]}
//          | {"op": "add", "args": [node...]}
//          | {"op": "scale", "scalar": [re, im], "arg": node}
//          | {"op": "mul"|"geomean", "args": [node, node]}
//          | {"op": "inv"|"sqrt"|"re"|"im", "arg": node}
//          | {"op": "const_block", "rows": int, "cols": int, "data": [[re,im]...]}
// ---------------------------------------------------------------------------

namespace detail {
inline nlohmann::json complex_to_json(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 2)
        throw SpecValidationError("spec json: complex scalar must be [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

inline nlohmann::json expr_to_json(const ExprPtr& e) {
    nlohmann::json j;
    switch (e->kind) {
        case NodeKind::variable:
            j["var"] = e->var_index;
            return j;
        case NodeKind::scalar_identity:
            j["const"] = complex_to_json(e->scalar);
            return j;
        case NodeKind::add:
            j["op"] = "add";
            break;
        case NodeKind::scale:
            j["op"] = "scale";
            j["scalar"] = complex_to_json(e->scalar);
            j["arg"] = expr_to_json(e->children[0]);
            return j;
        case NodeKind::multiply:
            j["op"] = "mul";
            break;
        case NodeKind::inverse:
            j["op"] = "inv";
            j["arg"] = expr_to_json(e->children[0]);
            return j;
        case NodeKind::sqrt:
            j["op"] = "sqrt";
            j["arg"] = expr_to_json(e->children[0]);
            return j;
        case NodeKind::re:
            j["op"] = "re";
            j["arg"] = expr_to_json(e->children[0]);
            return j;
        case NodeKind::im:
            j["op"] = "im";
            j["arg"] = expr_to_json(e->children[0]);
            return j;
        case NodeKind::geomean:
            j["op"] = "geomean";
            break;
        case NodeKind::const_block: {
            j["op"] = "const_block";
            j["rows"] = e->block.rows();
            j["cols"] = e->block.cols();
            auto data = nlohmann::json::array();
            for (Eigen::Index r = 0; r < e->block.rows(); ++r)
                for (Eigen::Index c = 0; c < e->block.cols(); ++c)
                    data.push_back(complex_to_json(e->block(r, c)));
            j["data"] = data;
            return j;
        }
    }
    auto args = nlohmann::json::array();
    for (const auto& c : e->children) args.push_back(expr_to_json(c));
    j["args"] = args;
    return j;
}

inline ExprPtr expr_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecValidationError("spec json: expression node must be an object");
    if (j.contains("var")) return var(j["var"].get<int>());
    if (j.contains("const")) return cident(complex_from_json(j["const"]));
    if (!j.contains("op")) throw SpecValidationError("spec json: node needs var, const, or op");
    const std::string op = j["op"].get<std::string>();
    auto args_of = [&](std::size_t want) {
        std::vector<ExprPtr> out;
        if (!j.contains("args") || !j["args"].is_array())
            throw SpecValidationError("spec json: op '" + op + "' needs args");
        for (const auto& a : j["args"]) out.push_back(expr_from_json(a));
        if (want > 0 && out.size() != want)
            throw SpecValidationError("spec json: op '" + op + "' takes " + std::to_string(want) + " args");
        return out;
    };
    auto arg_of = [&]() {
        if (!j.contains("arg")) throw SpecValidationError("spec json: op '" + op + "' needs arg");
        return expr_from_json(j["arg"]);
    };
    if (op == "add") return add(args_of(0));
    if (op == "scale") return scale(complex_from_json(j.at("scalar")), arg_of());
    if (op == "mul") {
        auto a = args_of(2);
        return mul(a[0], a[1]);
    }
    if (op == "geomean") {
        auto a = args_of(2);
        return geomean_node(a[0], a[1]);
    }
    if (op == "inv") return inv(arg_of());
    if (op == "sqrt") return sqrt_node(arg_of());
    if (op == "re") return re_node(arg_of());
    if (op == "im") return im_node(arg_of());
    if (op == "const_block") {
        const int rows = j.at("rows").get<int>();
        const int cols = j.at("cols").get<int>();
        CMatrix m(rows, cols);
        const auto& data = j.at("data");
        if (static_cast<int>(data.size()) != rows * cols)
            throw SpecValidationError("spec json: const_block data size mismatch");
        int idx = 0;
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(data[idx++]);
        return const_block_node(std::move(m));
    }
    throw SpecValidationError("spec json: unknown op '" + op + "'");
}
} // namespace detail

inline nlohmann::json spec_to_json(const FreeFunctionSpec& f) {
    nlohmann::json j;
    j["name"] = f.name;
    j["arity"] = f.arity;
    j["domain"] = domain_name(f.domain);
    j["maps_into_p_re"] = f.maps_into_p_re;
    j["expr"] = detail::expr_to_json(f.expr);
    return j;
}

/// Parses and validates a spec document.
inline FreeFunctionSpec spec_from_json(const nlohmann::json& j) {
    FreeFunctionSpec f;
    f.name = j.value("name", "custom");
    if (!j.contains("arity") || !j.contains("expr"))
        throw SpecValidationError("spec json: arity and expr are required");
    f.arity = j["arity"].get<int>();
    f.domain = parse_domain(j.value("domain", "all"));
    f.maps_into_p_re = j.value("maps_into_p_re", false);
    f.expr = detail::expr_from_json(j["expr"]);
    validate(f);
    return f;
}

// ---------------------------------------------------------------------------
// The built-in zoo.
// ---------------------------------------------------------------------------

inline std::vector<FreeFunctionSpec> build_zoo() {
    std::vector<FreeFunctionSpec> z;

    auto push = [&](std::string name, int arity, Domain dom, ExprPtr e, bool into_p_re) {
        FreeFunctionSpec f;
        f.name = std::move(name);
        f.arity = arity;
        f.domain = dom;
        f.expr = std::move(e);
        f.maps_into_p_re = into_p_re;
        z.push_back(std::move(f));
    };

    push("identity", 1, Domain::all, var(1), true);
    push("affine-pos", 2, Domain::all,
         add({cident(1.0), scale(2.0, var(1)), scale(3.0, var(2))}), true);
    push("affine-neg", 2, Domain::all,
         add({cident(1.0), scale(-1.0, var(1)), scale(2.0, var(2))}), false);
    push("square", 1, Domain::hermitian_pd, mul(var(1), var(1)), true);
    push("cube", 1, Domain::hermitian_pd, mul(var(1), mul(var(1), var(1))), true);
    push("neg-inverse", 1, Domain::p_re, scale(-1.0, inv(var(1))), false);
    push("neg-re-inverse", 1, Domain::p_re, scale(-1.0, inv(re_node(var(1)))), false);
    push("sqrt-re", 1, Domain::p_re, sqrt_node(re_node(var(1))), true);
    push("geomean", 2, Domain::p_re, geomean_node(var(1), var(2)), false);
    push("geomean-psd", 2, Domain::hermitian_pd, geomean_node(var(1), var(2)), true);
    // 2I - (Re X + I)^{-1}: operator monotone in Re X and lands in P_Re.
    push("shifted-inv", 1, Domain::p_re,
         add({cident(2.0), scale(-1.0, inv(add({re_node(var(1)), cident(1.0)})))}), true);

    {
        // sqrt(Re X) + i Im X assembled through the corollary form.
        FreeFunctionSpec g;
        g.name = "sqrt";
        g.arity = 1;
        g.domain = Domain::hermitian_pd;
        g.expr = sqrt_node(var(1));
        g.maps_into_p_re = true;
        FreeFunctionSpec h;
        h.name = "imag-passthrough";
        h.arity = 2;
        h.domain = Domain::all;
        h.expr = var(2);
        FreeFunctionSpec f = make_corollary_form(g, h);
        f.name = "corollary-sqrt";
        z.push_back(std::move(f));
    }

    for (const auto& f : z) validate(f);
    return z;
}

inline const std::vector<FreeFunctionSpec>& zoo() {
    static const std::vector<FreeFunctionSpec> z = build_zoo();
    return z;
}

inline const FreeFunctionSpec& zoo_member(const std::string& id) {
    for (const auto& f : zoo())
        if (f.name == id) return f;
    throw ConfigError("unknown zoo member: " + id);
}

inline std::vector<std::string> zoo_names() {
    std::vector<std::string> out;
    for (const auto& f : zoo()) out.push_back(f.name);
    return out;
}

} // namespace realmono
