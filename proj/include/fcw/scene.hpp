#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "fcw/calogero_moser.hpp"
#include "fcw/grassmannian.hpp"
#include "fcw/parse.hpp"

namespace fcw {

/// Scene file:
///   { "conditions": [ { "lambda": "0", "jet": ["0", "1"] } ],
///     "box": { "order": 4, "degree": 4 },          optional
///     "p": "z^2",                                   optional
///     "cm": { "X": [["0","1"],["-1","0"]], "Y": [["0","0"],["0","1"]] } }  optional
/// A condition may also be written { "terms": [ {lambda, jet}, ... ] }; the
/// terms are summed and must share one point.
struct Scene {
    GrPoint point;
    std::optional<int> order, degree;
    std::optional<Poly> p;
    std::optional<CMTriple> cm;
};

class SceneError : public InputError {
public:
    SceneError(const std::string& pointer, const std::string& msg) : InputError(pointer + ": " + msg), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

namespace detail {

using json = nlohmann::json;

inline Scalar scene_scalar(const json& v, const std::string& ptr) {
    if (v.is_number_integer()) return Scalar(v.get<long>());
    if (!v.is_string()) throw SceneError(ptr, "expected a rational number as a string");
    try {
        return parse_scalar(v.get<std::string>());
    } catch (const Error& e) {
        throw SceneError(ptr, e.what());
    }
}

inline std::vector<Scalar> scene_jet(const json& c, const std::string& ptr) {
    if (!c.contains("jet")) throw SceneError(ptr, "missing \"jet\"");
    const json& j = c["jet"];
    if (!j.is_array() || j.empty()) throw SceneError(ptr + "/jet", "expected a nonempty array of rational numbers");
    std::vector<Scalar> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(scene_scalar(j[i], ptr + "/jet/" + std::to_string(i)));
    return out;
}

inline Scalar scene_lambda(const json& c, const std::string& ptr) {
    if (!c.contains("lambda")) throw SceneError(ptr, "missing \"lambda\"");
    const json& l = c["lambda"];
    if (l.is_array()) {
        if (l.size() > 1) throw SceneError(ptr + "/lambda", "Gr-ad only: a condition must be supported at a single point");
        if (l.empty()) throw SceneError(ptr + "/lambda", "empty point list");
        return scene_scalar(l[0], ptr + "/lambda/0");
    }
    return scene_scalar(l, ptr + "/lambda");
}

inline PointCondition scene_condition(const json& c, const std::string& ptr) {
    if (!c.is_object()) throw SceneError(ptr, "expected an object");
    if (c.contains("terms")) {
        const json& t = c["terms"];
        if (!t.is_array() || t.empty()) throw SceneError(ptr + "/terms", "expected a nonempty array");
        PointCondition out{scene_lambda(t[0], ptr + "/terms/0"), {}};
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string tp = ptr + "/terms/" + std::to_string(i);
            Scalar l = scene_lambda(t[i], tp);
            if (l != out.lambda)
                throw SceneError(ptr + "/terms", "Gr-ad only: functional mixes the points " + to_string(out.lambda) +
                                                     " and " + to_string(l));
            auto jet = scene_jet(t[i], tp);
            if (jet.size() > out.jet.size()) out.jet.resize(jet.size(), Scalar(0));
            for (std::size_t k = 0; k < jet.size(); ++k) out.jet[k] += jet[k];
        }
        return out;
    }
    return {scene_lambda(c, ptr), scene_jet(c, ptr)};
}

inline ScalarMatrix scene_matrix(const json& m, const std::string& ptr) {
    if (!m.is_array()) throw SceneError(ptr, "expected an array of rows");
    ScalarMatrix out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const std::string rp = ptr + "/" + std::to_string(i);
        if (!m[i].is_array()) throw SceneError(rp, "expected a row array");
        Vec<Scalar> row;
        for (std::size_t j = 0; j < m[i].size(); ++j) row.push_back(scene_scalar(m[i][j], rp + "/" + std::to_string(j)));
        if (row.size() != m.size()) throw SceneError(rp, "matrix must be square");
        out.push_back(std::move(row));
    }
    return out;
}

inline int scene_bound(const json& b, const char* key, const std::string& ptr) {
    const json& v = b[key];
    if (!v.is_number_integer() || v.get<long>() <= 0) throw SceneError(ptr + "/" + key, "expected a positive integer");
    return v.get<int>();
}

} // namespace detail

inline Scene parse_scene(const std::string& text) {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SceneError("", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SceneError("", "expected a JSON object");
    Scene s;
    if (doc.contains("conditions")) {
        const json& cs = doc["conditions"];
        if (!cs.is_array()) throw SceneError("/conditions", "expected an array");
        std::vector<PointCondition> conds;
        for (std::size_t i = 0; i < cs.size(); ++i)
            conds.push_back(detail::scene_condition(cs[i], "/conditions/" + std::to_string(i)));
        try {
            s.point = GrPoint(conds);
        } catch (const DomainError& e) {
            throw SceneError("/conditions", e.what());
        }
    }
    if (doc.contains("box")) {
        const json& b = doc["box"];
        if (!b.is_object()) throw SceneError("/box", "expected an object");
        if (b.contains("order")) s.order = detail::scene_bound(b, "order", "/box");
        if (b.contains("degree")) s.degree = detail::scene_bound(b, "degree", "/box");
    }
    if (doc.contains("p")) {
        if (!doc["p"].is_string()) throw SceneError("/p", "expected a polynomial in z as a string");
        RationalFunction f;
        try {
            f = parse_ratfunc(doc["p"].get<std::string>(), "z");
        } catch (const Error& e) {
            throw SceneError("/p", e.what());
        }
        if (!f.is_polynomial()) throw SceneError("/p", "expected a polynomial");
        s.p = f.num();
    }
    if (doc.contains("cm")) {
        const json& c = doc["cm"];
        if (!c.is_object() || !c.contains("X") || !c.contains("Y")) throw SceneError("/cm", "expected {\"X\": ..., \"Y\": ...}");
        ScalarMatrix X = detail::scene_matrix(c["X"], "/cm/X"), Y = detail::scene_matrix(c["Y"], "/cm/Y");
        if (X.size() != Y.size()) throw SceneError("/cm", "X and Y must have the same size");
        s.cm = CMTriple(std::move(X), std::move(Y));
    }
    return s;
}

inline Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scene file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scene(ss.str());
}

} // namespace fcw
