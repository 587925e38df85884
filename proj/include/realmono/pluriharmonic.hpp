#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "realmono/errors.hpp"
#include "realmono/matrix.hpp"
#include "realmono/sampling.hpp"

namespace realmono {

// ---------------------------------------------------------------------------
// Scalar fields C^m -> C: expression trees over z, conj z, Re z, Im z,
// polynomials and exp. The numeric Wirtinger/Levi machinery below treats
// them uniformly, which sidesteps a symbolic calculus for conj/Re/Im nodes.
// ---------------------------------------------------------------------------

enum class SNodeKind { variable, constant, add, mul, scale, pow_int, exp_fn, conj_fn, re_fn, im_fn };

struct SNode;
using SPtr = std::shared_ptr<const SNode>;

struct SNode {
    SNodeKind kind;
    int var_index = 0;
    Complex value{0.0, 0.0};
    int power = 0;
    std::vector<SPtr> children;
};

inline SPtr s_var(int j) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::variable;
    n->var_index = j;
    return n;
}
inline SPtr s_const(Complex c) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::constant;
    n->value = c;
    return n;
}
inline SPtr s_add(std::vector<SPtr> args) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::add;
    n->children = std::move(args);
    return n;
}
inline SPtr s_mul(SPtr a, SPtr b) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::mul;
    n->children = {std::move(a), std::move(b)};
    return n;
}
inline SPtr s_scale(Complex c, SPtr e) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::scale;
    n->value = c;
    n->children = {std::move(e)};
    return n;
}
inline SPtr s_pow(SPtr e, int p) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::pow_int;
    n->power = p;
    n->children = {std::move(e)};
    return n;
}
inline SPtr s_exp(SPtr e) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::exp_fn;
    n->children = {std::move(e)};
    return n;
}
inline SPtr s_conj(SPtr e) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::conj_fn;
    n->children = {std::move(e)};
    return n;
}
inline SPtr s_re(SPtr e) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::re_fn;
    n->children = {std::move(e)};
    return n;
}
inline SPtr s_im(SPtr e) {
    auto n = std::make_shared<SNode>();
    n->kind = SNodeKind::im_fn;
    n->children = {std::move(e)};
    return n;
}

enum class FieldClass { holomorphic, general };

struct ScalarField {
    std::string name = "custom";
    int m = 1; // number of complex variables
    FieldClass declared = FieldClass::general;
    SPtr expr;
};

namespace detail {
inline Complex seval(const SNode& e, const CVector& z) {
    switch (e.kind) {
        case SNodeKind::variable: {
            if (e.var_index < 1 || e.var_index > z.size())
                throw SpecValidationError("scalar field: variable index out of range");
            return z(e.var_index - 1);
        }
        case SNodeKind::constant: return e.value;
        case SNodeKind::add: {
            Complex acc{0.0, 0.0};
            for (const auto& c : e.children) acc += seval(*c, z);
            return acc;
        }
        case SNodeKind::mul: return seval(*e.children[0], z) * seval(*e.children[1], z);
        case SNodeKind::scale: return e.value * seval(*e.children[0], z);
        case SNodeKind::pow_int: {
            Complex base = seval(*e.children[0], z), acc{1.0, 0.0};
            for (int i = 0; i < e.power; ++i) acc *= base;
            return acc;
        }
        case SNodeKind::exp_fn: return std::exp(seval(*e.children[0], z));
        case SNodeKind::conj_fn: return std::conj(seval(*e.children[0], z));
        case SNodeKind::re_fn: return Complex(seval(*e.children[0], z).real(), 0.0);
        case SNodeKind::im_fn: return Complex(seval(*e.children[0], z).imag(), 0.0);
    }
    throw SpecValidationError("scalar field: unknown node");
}
} // namespace detail

inline Complex eval(const ScalarField& f, const CVector& z) {
    if (!f.expr) throw SpecValidationError("scalar field: empty expression");
    if (z.size() != f.m) throw DimensionError("scalar field: point has wrong variable count");
    return detail::seval(*f.expr, z);
}

/// Real value of a field (Levi-form and pluriharmonicity inputs are
/// real-valued by contract; the imaginary part is dropped).
inline double eval_real(const ScalarField& f, const CVector& z) { return eval(f, z).real(); }

// ---------------------------------------------------------------------------
// Numeric Wirtinger calculus.
// ---------------------------------------------------------------------------

struct WirtingerDerivatives {
    CVector d;    // (d/dx - i d/dy)/2 per variable
    CVector dbar; // (d/dx + i d/dy)/2 per variable
};

namespace detail {
inline void wirtinger_once(const ScalarField& f, const CVector& z, double h, CVector& d, CVector& dbar) {
    const int m = f.m;
    d.resize(m);
    dbar.resize(m);
    for (int j = 0; j < m; ++j) {
        CVector zp = z, zm = z;
        zp(j) += h;
        zm(j) -= h;
        const Complex dx = (eval(f, zp) - eval(f, zm)) / (2.0 * h);
        zp = z;
        zm = z;
        zp(j) += Complex(0.0, h);
        zm(j) -= Complex(0.0, h);
        const Complex dy = (eval(f, zp) - eval(f, zm)) / (2.0 * h);
        d(j) = (dx - kImaginaryUnit * dy) / 2.0;
        dbar(j) = (dx + kImaginaryUnit * dy) / 2.0;
    }
}
} // namespace detail

/// Central differences without extrapolation (second-order stencil).
inline WirtingerDerivatives wirtinger_raw(const ScalarField& f, const CVector& z, double h = 1e-4) {
    if (!(h > 0)) throw StepSizeError("wirtinger: h must be positive");
    WirtingerDerivatives w;
    detail::wirtinger_once(f, z, h, w.d, w.dbar);
    return w;
}

/// Richardson-extrapolated Wirtinger derivatives.
inline WirtingerDerivatives wirtinger(const ScalarField& f, const CVector& z, double h = 1e-4) {
    if (!(h > 0)) throw StepSizeError("wirtinger: h must be positive");
    CVector d1, dbar1, d2, dbar2;
    detail::wirtinger_once(f, z, h, d1, dbar1);
    detail::wirtinger_once(f, z, h / 2.0, d2, dbar2);
    WirtingerDerivatives w;
    w.d = (4.0 * d2 - d1) / 3.0;
    w.dbar = (4.0 * dbar2 - dbar1) / 3.0;
    return w;
}

namespace detail {
// Second partial of Re(f) with respect to two real coordinates; a coordinate
// is (variable index, axis) with axis 0 = x, 1 = y.
inline double second_partial(const ScalarField& f, const CVector& z, int j, int aj, int k, int ak, double h) {
    auto shift = [&](const CVector& base, int var, int axis, double step) {
        CVector out = base;
        out(var) += (axis == 0) ? Complex(step, 0.0) : Complex(0.0, step);
        return out;
    };
    if (j == k && aj == ak) {
        const double up = eval_real(f, shift(z, j, aj, h));
        const double mid = eval_real(f, z);
        const double dn = eval_real(f, shift(z, j, aj, -h));
        return (up - 2.0 * mid + dn) / (h * h);
    }
    const double pp = eval_real(f, shift(shift(z, j, aj, h), k, ak, h));
    const double pm = eval_real(f, shift(shift(z, j, aj, h), k, ak, -h));
    const double mp = eval_real(f, shift(shift(z, j, aj, -h), k, ak, h));
    const double mm = eval_real(f, shift(shift(z, j, aj, -h), k, ak, -h));
    return (pp - pm - mp + mm) / (4.0 * h * h);
}

inline Complex mixed_wirtinger(const ScalarField& u, const CVector& z, int j, int k, double h) {
    const double dxx = second_partial(u, z, j, 0, k, 0, h);
    const double dyy = second_partial(u, z, j, 1, k, 1, h);
    const double dxy = second_partial(u, z, j, 0, k, 1, h);
    const double dyx = second_partial(u, z, j, 1, k, 0, h);
    return 0.25 * Complex(dxx + dyy, dxy - dyx);
}
} // namespace detail

/// Levi form L(z; c, d) = sum_{j,k} (d^2 u / dz_j dzbar_k) c_j conj(d_k).
inline Complex levi_form(const ScalarField& u, const CVector& z, const CVector& c, const CVector& d,
                         double h = 1e-3) {
    if (c.size() != u.m || d.size() != u.m) throw DimensionError("levi_form: direction size");
    Complex acc{0.0, 0.0};
    for (int j = 0; j < u.m; ++j)
        for (int k = 0; k < u.m; ++k)
            acc += detail::mixed_wirtinger(u, z, j, k, h) * c(j) * std::conj(d(k));
    return acc;
}

/// Max entry norm of the mixed-Wirtinger matrix d_j dbar_k u at z; zero
/// characterizes pluriharmonic functions.
inline double pluriharmonic_residual(const ScalarField& u, const CVector& z, double h = 1e-3) {
    double worst = 0.0;
    for (int j = 0; j < u.m; ++j)
        for (int k = 0; k < u.m; ++k)
            worst = std::max(worst, std::abs(detail::mixed_wirtinger(u, z, j, k, h)));
    return worst;
}

// ---------------------------------------------------------------------------
// Linearity test of the rigidity lemma: a holomorphic f with f(0) = 0 whose
// real part depends only on Re z must be linear.
// ---------------------------------------------------------------------------

struct LinearityReport {
    bool hypothesis_f0 = false;
    double f0_abs = 0.0;
    bool im_independent = false;
    double im_dependence = 0.0; // max relative variation of Re f across Im z
    double hessian_norm = 0.0;  // real Hessian of u restricted to real directions
    CVector coeffs;             // least-squares linear model a . z
    double fit_residual = 0.0;
    bool linear = false;
    std::string reject_stage;   // "", "f0", "im-dependence", "fit"
};

inline LinearityReport linearity_test(const ScalarField& f, int probes, std::uint64_t seed,
                                      double tol = 1e-6) {
    if (f.declared != FieldClass::holomorphic)
        throw ConfigError("linearity_test: field must be declared holomorphic");
    if (probes < 2 * f.m + 2) probes = 2 * f.m + 2;
    LinearityReport rep;

    rep.f0_abs = std::abs(eval(f, CVector::Zero(f.m)));
    rep.hypothesis_f0 = rep.f0_abs <= 1e-9;
    if (!rep.hypothesis_f0) {
        rep.reject_stage = "f0";
        return rep;
    }

    // Stage (i): does u = Re f move when only Im z moves?
    rep.im_dependence = 0.0;
    for (int p = 0; p < probes; ++p) {
        Rng rng(mix_seed(seed, 0x701, static_cast<std::uint64_t>(p)));
        CVector x(f.m), y1(f.m), y2(f.m);
        for (int j = 0; j < f.m; ++j) {
            x(j) = Complex(0.4 * rng.gauss(), 0.0);
            y1(j) = Complex(0.0, 0.4 * rng.gauss());
            y2(j) = Complex(0.0, 0.4 * rng.gauss());
        }
        const double u1 = eval(f, x + y1).real();
        const double u2 = eval(f, x + y2).real();
        rep.im_dependence = std::max(rep.im_dependence, std::abs(u1 - u2) / (1.0 + std::abs(u1)));
    }
    rep.im_independent = rep.im_dependence <= 1e-8;
    if (!rep.im_independent) {
        rep.reject_stage = "im-dependence";
        return rep;
    }

    // Stage (ii): the Levi form on real directions reduces to the real
    // Hessian of u; report its size.
    ScalarField u = f; // Re is taken by eval_real inside the stencils
    for (int p = 0; p < 3; ++p) {
        Rng rng(mix_seed(seed, 0x702, static_cast<std::uint64_t>(p)));
        CVector z(f.m);
        for (int j = 0; j < f.m; ++j) z(j) = Complex(0.3 * rng.gauss(), 0.0);
        for (int j = 0; j < f.m; ++j)
            for (int k = 0; k < f.m; ++k)
                rep.hessian_norm = std::max(rep.hessian_norm,
                                            std::abs(detail::second_partial(u, z, j, 0, k, 0, 1e-3)));
    }

    // Stage (iii): least-squares linear model a . z over complex probes.
    Eigen::MatrixXcd a(probes, f.m);
    CVector rhs(probes);
    std::vector<CVector> pts;
    for (int p = 0; p < probes; ++p) {
        Rng rng(mix_seed(seed, 0x703, static_cast<std::uint64_t>(p)));
        CVector z(f.m);
        for (int j = 0; j < f.m; ++j) z(j) = 0.4 * Complex(rng.gauss(), rng.gauss());
        pts.push_back(z);
        for (int j = 0; j < f.m; ++j) a(p, j) = z(j);
        rhs(p) = eval(f, z);
    }
    rep.coeffs = a.colPivHouseholderQr().solve(rhs);
    for (int p = 0; p < probes; ++p) {
        const Complex model = (a.row(p) * rep.coeffs)(0, 0);
        rep.fit_residual = std::max(rep.fit_residual,
                                    std::abs(rhs(p) - model) / (1.0 + std::abs(rhs(p))));
    }
    rep.linear = rep.fit_residual <= tol;
    if (!rep.linear) rep.reject_stage = "fit";
    return rep;
}

// ---------------------------------------------------------------------------
// Built-in field bank and the shared JSON grammar.
//
//   field := {"name": str, "m": int, "class": "holomorphic"|"general",
//             "expr": node}
//   node  := {"var": int} | {"const": [re,im]}
//          | {"op": "add", "args": [...]}
//          | {"op": "mul", "args": [node, node]}
//          | {"op": "scale", "scalar": [re,im], "arg": node}
//          | {"op": "pow", "power": int, "arg": node}
//          | {"op": "exp"|"conj"|"re"|"im", "arg": node}
// ---------------------------------------------------------------------------

namespace detail {
inline nlohmann::json sexpr_to_json(const SPtr& e) {
    nlohmann::json j;
    switch (e->kind) {
        case SNodeKind::variable: j["var"] = e->var_index; return j;
        case SNodeKind::constant: j["const"] = {e->value.real(), e->value.imag()}; return j;
        case SNodeKind::add: {
            j["op"] = "add";
            auto args = nlohmann::json::array();
            for (const auto& c : e->children) args.push_back(sexpr_to_json(c));
            j["args"] = args;
            return j;
        }
        case SNodeKind::mul: {
            j["op"] = "mul";
            j["args"] = {sexpr_to_json(e->children[0]), sexpr_to_json(e->children[1])};
            return j;
        }
        case SNodeKind::scale:
            j["op"] = "scale";
            j["scalar"] = {e->value.real(), e->value.imag()};
            j["arg"] = sexpr_to_json(e->children[0]);
            return j;
        case SNodeKind::pow_int:
            j["op"] = "pow";
            j["power"] = e->power;
            j["arg"] = sexpr_to_json(e->children[0]);
            return j;
        case SNodeKind::exp_fn: j["op"] = "exp"; j["arg"] = sexpr_to_json(e->children[0]); return j;
        case SNodeKind::conj_fn: j["op"] = "conj"; j["arg"] = sexpr_to_json(e->children[0]); return j;
        case SNodeKind::re_fn: j["op"] = "re"; j["arg"] = sexpr_to_json(e->children[0]); return j;
        case SNodeKind::im_fn: j["op"] = "im"; j["arg"] = sexpr_to_json(e->children[0]); return j;
    }
    throw SpecValidationError("scalar json: unknown node");
}

inline SPtr sexpr_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecValidationError("scalar json: node must be an object");
    if (j.contains("var")) return s_var(j["var"].get<int>());
    if (j.contains("const"))
        return s_const(Complex(j["const"][0].get<double>(), j["const"][1].get<double>()));
    const std::string op = j.at("op").get<std::string>();
    if (op == "add") {
        std::vector<SPtr> args;
        for (const auto& a : j.at("args")) args.push_back(sexpr_from_json(a));
        if (args.empty()) throw SpecValidationError("scalar json: add needs args");
        return s_add(std::move(args));
    }
    if (op == "mul") {
        const auto& a = j.at("args");
        if (a.size() != 2) throw SpecValidationError("scalar json: mul takes 2 args");
        return s_mul(sexpr_from_json(a[0]), sexpr_from_json(a[1]));
    }
    if (op == "scale")
        return s_scale(Complex(j.at("scalar")[0].get<double>(), j.at("scalar")[1].get<double>()),
                       sexpr_from_json(j.at("arg")));
    if (op == "pow") return s_pow(sexpr_from_json(j.at("arg")), j.at("power").get<int>());
    if (op == "exp") return s_exp(sexpr_from_json(j.at("arg")));
    if (op == "conj") return s_conj(sexpr_from_json(j.at("arg")));
    if (op == "re") return s_re(sexpr_from_json(j.at("arg")));
    if (op == "im") return s_im(sexpr_from_json(j.at("arg")));
    throw SpecValidationError("scalar json: unknown op '" + op + "'");
}
} // namespace detail

inline nlohmann::json field_to_json(const ScalarField& f) {
    nlohmann::json j;
    j["name"] = f.name;
    j["m"] = f.m;
    j["class"] = f.declared == FieldClass::holomorphic ? "holomorphic" : "general";
    j["expr"] = detail::sexpr_to_json(f.expr);
    return j;
}

inline ScalarField field_from_json(const nlohmann::json& j) {
    ScalarField f;
    f.name = j.value("name", "custom");
    f.m = j.at("m").get<int>();
    const std::string cls = j.value("class", "general");
    if (cls == "holomorphic")
        f.declared = FieldClass::holomorphic;
    else if (cls == "general")
        f.declared = FieldClass::general;
    else
        throw SpecValidationError("scalar json: unknown class '" + cls + "'");
    f.expr = detail::sexpr_from_json(j.at("expr"));
    if (f.m < 1) throw SpecValidationError("scalar json: m must be >= 1");
    return f;
}

inline std::vector<ScalarField> build_field_bank() {
    std::vector<ScalarField> bank;
    auto push = [&](std::string name, int m, FieldClass cls, SPtr e) {
        ScalarField f;
        f.name = std::move(name);
        f.m = m;
        f.declared = cls;
        f.expr = std::move(e);
        bank.push_back(std::move(f));
    };
    using FC = FieldClass;
    push("z", 1, FC::holomorphic, s_var(1));
    push("double-z", 1, FC::holomorphic, s_scale(2.0, s_var(1)));
    push("z-squared", 1, FC::holomorphic, s_pow(s_var(1), 2));
    push("z-cubed", 1, FC::holomorphic, s_pow(s_var(1), 3));
    push("exp-minus-one", 1, FC::holomorphic, s_add({s_exp(s_var(1)), s_const(-1.0)}));
    push("sum-lin", 2, FC::holomorphic, s_add({s_var(1), s_scale(3.0, s_var(2))}));
    push("product", 2, FC::holomorphic, s_mul(s_var(1), s_var(2)));
    push("conj-z", 1, FC::general, s_conj(s_var(1)));
    push("modulus-squared", 1, FC::general, s_mul(s_var(1), s_conj(s_var(1))));
    push("re-z", 1, FC::general, s_re(s_var(1)));
    // (Re z)^2 - (Im z)^2, the harmonic saddle
    push("saddle", 1, FC::general,
         s_add({s_pow(s_re(s_var(1)), 2), s_scale(-1.0, s_pow(s_im(s_var(1)), 2))}));
    push("re-product", 2, FC::general, s_re(s_mul(s_var(1), s_var(2))));
    return bank;
}

inline const std::vector<ScalarField>& field_bank() {
    static const std::vector<ScalarField> bank = build_field_bank();
    return bank;
}

inline const ScalarField& bank_field(const std::string& name) {
    for (const auto& f : field_bank())
        if (f.name == name) return f;
    throw ConfigError("unknown field: " + name);
}

} // namespace realmono
