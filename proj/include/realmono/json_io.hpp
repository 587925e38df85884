#pragma once

#include <nlohmann/json.hpp>

#include "realmono/certify.hpp"
#include "realmono/choi.hpp"
#include "realmono/invariance.hpp"
#include "realmono/matrix.hpp"
#include "realmono/means.hpp"
#include "realmono/pluriharmonic.hpp"
#include "realmono/real_order.hpp"

namespace realmono {

// Matrix wire format used repo-wide:
//   {"rows": n, "cols": n, "data": [[re, im], ...]}  (row-major)
// Tuples are JSON arrays of matrices.

inline nlohmann::json matrix_to_json(const CMatrix& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    auto data = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            data.push_back({m(r, c).real(), m(r, c).imag()});
    j["data"] = data;
    return j;
}

inline CMatrix matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw ConfigError("matrix json: data length does not match rows*cols");
    CMatrix m(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& e = data[idx++];
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    return m;
}

inline nlohmann::json tuple_to_json(const OperatorTuple& xs) {
    auto j = nlohmann::json::array();
    for (const auto& x : xs) j.push_back(matrix_to_json(x));
    return j;
}

inline OperatorTuple tuple_from_json(const nlohmann::json& j) {
    OperatorTuple out;
    for (const auto& m : j) out.push_back(matrix_from_json(m));
    return out;
}

inline nlohmann::json vector_to_json(const CVector& v) {
    auto j = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back({v(i).real(), v(i).imag()});
    return j;
}

inline double json_safe(double x) {
    if (std::isfinite(x)) return x;
    return x > 0 ? 1e308 : -1e308; // JSON has no infinities
}

inline nlohmann::json to_json(const OrderVerdict& v) {
    nlohmann::json j;
    j["holds"] = v.holds;
    j["margin"] = json_safe(v.margin);
    if (v.witness_vector) {
        j["witness_vector"] = vector_to_json(*v.witness_vector);
        if (v.witness_index >= 0) j["witness_index"] = v.witness_index;
    }
    return j;
}

inline nlohmann::json to_json(const CertWitness& w) {
    nlohmann::json j;
    j["labels"] = w.labels;
    auto tuples = nlohmann::json::array();
    for (const auto& t : w.tuples) tuples.push_back(tuple_to_json(t));
    j["tuples"] = tuples;
    j["margin"] = json_safe(w.margin);
    if (!w.sub_test.empty()) j["sub_test"] = w.sub_test;
    j["dim"] = w.dim;
    j["trial"] = w.trial;
    return j;
}

inline nlohmann::json to_json(const CertificateReport& r) {
    nlohmann::json j;
    j["claim"] = claim_name(r.claim);
    j["spec"] = r.spec_id;
    j["dims"] = r.dims;
    j["trials_requested"] = r.trials_requested;
    j["trials_run"] = r.trials_run;
    j["seed"] = r.seed;
    j["tol"] = r.tol;
    j["outcome"] = outcome_name(r.outcome);
    j["worst_margin"] = json_safe(r.worst_margin);
    if (r.aux_residual > 0) j["aux_residual"] = r.aux_residual;
    if (r.witness) j["witness"] = to_json(*r.witness);
    return j;
}

inline nlohmann::json to_json(const InvarianceReport& r) {
    nlohmann::json j;
    j["property"] = r.property;
    j["dim"] = r.dim;
    j["trials"] = r.trials;
    j["max_residual"] = json_safe(r.max_residual);
    if (r.witness) j["witness"] = to_json(*r.witness);
    return j;
}

inline nlohmann::json to_json(const MaxCharReport& r) {
    return {{"feasible_margin", json_safe(r.feasible_margin)},
            {"feasible", r.feasible},
            {"inflated_margin", json_safe(r.inflated_margin)},
            {"inflated_infeasible", r.inflated_infeasible},
            {"eps", r.eps},
            {"tol", r.tol}};
}

inline nlohmann::json to_json(const AghReport& r) {
    return {{"harmonic", matrix_to_json(r.harmonic)},
            {"geometric", matrix_to_json(r.geometric)},
            {"arithmetic", matrix_to_json(r.arithmetic)},
            {"harmonic_le_geometric", to_json(r.h_le_g)},
            {"geometric_le_arithmetic", to_json(r.g_le_a)},
            {"hermitian_inputs", r.hermitian_inputs}};
}

inline nlohmann::json to_json(const AffineFit& f) {
    nlohmann::json j;
    j["a0"] = {f.a0.real(), f.a0.imag()};
    auto coeffs = nlohmann::json::array();
    for (const auto& c : f.coeffs) coeffs.push_back({c.real(), c.imag()});
    j["coefficients"] = coeffs;
    j["residual"] = json_safe(f.residual);
    j["base_shift"] = f.base_shift;
    j["center_ok"] = f.center_ok;
    j["center_deviation"] = f.center_deviation;
    return j;
}

inline nlohmann::json to_json(const BlockConstructionReport& r) {
    return {{"unitary_residual", r.unitary_residual},
            {"conjugation_residual", r.conjugation_residual},
            {"domination_margin", json_safe(r.domination_margin)},
            {"lambda", r.lambda},
            {"eps", r.eps},
            {"pass", r.pass}};
}

inline nlohmann::json to_json(const LipschitzReport& r) {
    return {{"hypothesis_met", r.hypothesis_met},
            {"concavity_margin", json_safe(r.concavity_margin)},
            {"M", r.m_bound},
            {"bound", r.bound},
            {"max_ratio", r.max_ratio},
            {"samples", r.samples},
            {"pass", r.pass}};
}

inline nlohmann::json to_json(const ChoiMatrix& c) {
    return {{"n", c.n},
            {"source", c.source},
            {"hermiticity_preserving", c.hermiticity_preserving},
            {"matrix", matrix_to_json(c.matrix)}};
}

inline nlohmann::json to_json(const CpResult& r) {
    nlohmann::json j;
    j["cp"] = r.verdict.holds;
    j["verdict"] = to_json(r.verdict);
    j["kraus_rank"] = r.kraus.size();
    auto ks = nlohmann::json::array();
    for (const auto& k : r.kraus) ks.push_back(matrix_to_json(k));
    j["kraus"] = ks;
    j["reconstruction_residual"] = r.reconstruction_residual;
    return j;
}

inline nlohmann::json to_json(const WirtingerDerivatives& w) {
    return {{"d", vector_to_json(w.d)}, {"dbar", vector_to_json(w.dbar)}};
}

inline nlohmann::json to_json(const LinearityReport& r) {
    nlohmann::json j;
    j["hypothesis_f0"] = r.hypothesis_f0;
    j["f0_abs"] = r.f0_abs;
    j["im_independent"] = r.im_independent;
    j["im_dependence"] = r.im_dependence;
    j["hessian_norm"] = r.hessian_norm;
    j["coefficients"] = vector_to_json(r.coeffs);
    j["fit_residual"] = r.fit_residual;
    j["linear"] = r.linear;
    if (!r.reject_stage.empty()) j["reject_stage"] = r.reject_stage;
    return j;
}

} // namespace realmono
