#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fcw/baker.hpp"
#include "fcw/calogero_moser.hpp"
#include "fcw/mad.hpp"
#include "fcw/operator_space.hpp"
#include "fcw/verify.hpp"

namespace fcw {

using Json = nlohmann::ordered_json;

// Operators on the spectral side act in z.
inline std::string z_str(const DiffOp& d) { return d.str("z", "Dz"); }

inline Json to_json(const GrPoint& W) {
    Json conds = Json::array();
    for (const auto& c : W.conditions()) {
        Json jet = Json::array();
        for (const auto& v : c.jet) jet.push_back(to_string(v));
        conds.push_back({{"lambda", to_string(c.lambda)}, {"jet", jet}});
    }
    Json k = Json::array();
    for (const auto& [l, m] : W.multiplicities()) k.push_back({{"lambda", to_string(l)}, {"k", m}});
    return {{"point", W.str()}, {"conditions", conds}, {"multiplicities", k}};
}

inline Json to_json(const BakerData& b) {
    Json terms = Json::array();
    for (std::size_t i = 0; i < b.g.size(); ++i)
        terms.push_back({{"lambda", to_string(b.g[i].first)}, {"j", b.g[i].second}, {"f", b.f[i].str()}});
    return {{"psi", baker_string(b)}, {"terms", terms}};
}

inline Json to_json(const SpectralAlgebra& a) {
    Json basis = Json::array();
    for (const auto& p : a.basis) basis.push_back(p.str("z"));
    return {{"bound", a.bound}, {"staircase", a.staircase}, {"basis", basis}};
}

/// Coefficients a_0, a_1, ... of sum a_i D^i.
inline Json to_json(const DiffOp& d, const std::string& var = "x") {
    Json out = Json::array();
    for (const auto& c : d.coeffs()) out.push_back(c.str(var));
    return out;
}

inline Json op_list(const std::vector<DiffOp>& ops, bool spectral) {
    Json coeffs = Json::array(), text = Json::array();
    for (const auto& d : ops) {
        coeffs.push_back(to_json(d, spectral ? "z" : "x"));
        text.push_back(spectral ? z_str(d) : d.str());
    }
    return {{"coefficients", coeffs}, {"text", text}};
}

inline Json to_json(const OperatorSpaceBasis& b) {
    return {{"order", b.m}, {"degree", b.d}, {"dimension", b.basis.size()}, {"window", b.window},
            {"stable", b.stable}, {"basis", op_list(b.basis, true)}};
}

inline Json monomials(const std::vector<Monomial>& ms) {
    Json out = Json::array();
    for (const auto& [k, j] : ms) out.push_back({{"x", k}, {"xi", j}});
    return out;
}

inline Json to_json(const CodimReport& c) {
    return {{"order", c.m},
            {"degree", c.d},
            {"wide_order", c.wide_m},
            {"wide_degree", c.wide_d},
            {"codim_d", c.codim_d},
            {"codim_x", c.codim_x},
            {"missing_d", monomials(c.missing_d)},
            {"missing_x", monomials(c.missing_x)},
            {"stable", c.stable},
            {"equal", c.equal}};
}

inline Json to_json(const DualSubalgebraBasis& b) {
    Json out = {{"basis", op_list(b.basis, false)}, {"orders", b.orders}, {"commutative", b.commutative},
                {"scalars_only", b.scalars_only}, {"rank_one", b.rank_one}};
    out["conductor"] = b.conductor ? Json(*b.conductor) : Json(nullptr);
    return out;
}

inline Json to_json(const ScalarMatrix& m) {
    Json out = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(to_string(v));
        out.push_back(r);
    }
    return out;
}

inline Json to_json(const CMTriple& t) { return {{"n", t.n}, {"X", to_json(t.X)}, {"Y", to_json(t.Y)}}; }

inline Json to_json(const CompositionReport& c) {
    return {{"order", c.m},         {"degree", c.d},           {"factor_order", c.factor_m},
            {"factor_degree", c.factor_d}, {"box_dim", c.box_dim}, {"product_dim", c.product_dim},
            {"products_map_into", c.products_map_into}, {"equal", c.equal}};
}

inline Json to_json(const LemmaPReport& r) {
    Json p = Json::array(), val = Json::array();
    for (const auto& f : r.p) p.push_back(f.str());
    for (const auto& v : r.val) val.push_back(v ? Json(*v) : Json(nullptr));
    Json out = {{"r", r.r}, {"s", r.s}, {"p", p}, {"valuation", val}};
    out["vanishing"] = r.vanishing ? Json(*r.vanishing) : Json(nullptr);
    out["identity_holds"] = r.identity_holds;
    out["matches_ad"] = r.matches_ad;
    return out;
}

/// Timings are left out so reports are byte-stable.
inline Json to_json(const CriterionResult& r) {
    return {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}};
}

} // namespace fcw
