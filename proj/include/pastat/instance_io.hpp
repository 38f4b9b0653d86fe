// JSON wire formats: problem instances, polytopes, verdicts.
//
// Rationals travel as "p" or "p/q" strings, never as floats.  Serialization
// is canonical (fixed key order, two-space indent), so serialize(parse(s))
// reproduces its own output byte for byte.

#pragma once

#include "pastat/formula.hpp"
#include "pastat/polytope.hpp"
#include "pastat/subdiff.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace pastat {

using Json = nlohmann::ordered_json;

struct Instance {
    std::size_t dim = 0;
    bool is_dc = false;
    std::optional<MaxMinFormula> maxmin;
    std::optional<DcFunction> dc;
    RVec w;
    Rational epsilon = 0;
    Json meta;  // optional generator provenance, carried verbatim
};

namespace io_detail {

inline const Json& need(const Json& j, const char* key, const char* where) {
    auto it = j.find(key);
    if (it == j.end())
        throw input_error(std::string("instance: missing '") + key + "' in " + where);
    return *it;
}

inline Rational rat(const Json& j, const char* where) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (!j.is_string())
        throw input_error(std::string("instance: expected a rational string in ") + where);
    return parse_rational(j.get<std::string>());
}

inline RVec vec(const Json& j, const char* where) {
    if (!j.is_array())
        throw input_error(std::string("instance: expected a vector in ") + where);
    RVec v;
    v.reserve(j.size());
    for (const auto& e : j) v.push_back(rat(e, where));
    return v;
}

inline Json vec_json(const RVec& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(format_rational(x));
    return a;
}

inline Json tree_json(const McTree& t) {
    Json j = Json::object();
    switch (t.kind) {
        case McTree::Kind::Leaf:
            j["op"] = "leaf";
            j["x"] = vec_json(t.x);
            j["a"] = format_rational(t.a);
            return j;
        case McTree::Kind::Sum:
            j["op"] = "sum";
            break;
        case McTree::Kind::Max:
            j["op"] = "max";
            break;
    }
    Json cs = Json::array();
    for (const auto& c : t.children) cs.push_back(tree_json(c));
    j["children"] = std::move(cs);
    return j;
}

inline McTree tree_from(const Json& j, const char* where) {
    if (!j.is_object()) throw input_error(std::string("instance: tree node must be an object in ") + where);
    const std::string op = need(j, "op", where).get<std::string>();
    if (op == "leaf") return McTree::leaf(vec(need(j, "x", where), where), rat(need(j, "a", where), where));
    if (op != "sum" && op != "max")
        throw input_error(std::string("instance: unknown tree op '") + op + "' in " + where);
    const Json& cs = need(j, "children", where);
    if (!cs.is_array() || cs.empty())
        throw input_error(std::string("instance: '") + op + "' node needs children in " + where);
    std::vector<McTree> children;
    for (const auto& c : cs) children.push_back(tree_from(c, where));
    return op == "sum" ? McTree::sum(std::move(children)) : McTree::max(std::move(children));
}

}  // namespace io_detail

inline Json instance_to_json(const Instance& inst) {
    Json j = Json::object();
    j["dim"] = inst.dim;
    j["model"] = inst.is_dc ? "dc" : "maxmin";
    if (inst.maxmin) {
        Json mm = Json::object();
        Json affine = Json::array();
        for (const auto& p : inst.maxmin->affine) {
            Json a = Json::object();
            a["x"] = io_detail::vec_json(p.slope);
            a["a"] = format_rational(p.offset);
            affine.push_back(std::move(a));
        }
        mm["affine"] = std::move(affine);
        Json groups = Json::array();
        for (const auto& g : inst.maxmin->groups) groups.push_back(g);
        mm["groups"] = std::move(groups);
        j["maxmin"] = std::move(mm);
    }
    if (inst.dc) {
        Json dc = Json::object();
        dc["h"] = io_detail::tree_json(inst.dc->h);
        dc["g"] = io_detail::tree_json(inst.dc->g);
        j["dc"] = std::move(dc);
    }
    Json q = Json::object();
    q["w"] = io_detail::vec_json(inst.w);
    q["epsilon"] = format_rational(inst.epsilon);
    j["query"] = std::move(q);
    if (!inst.meta.is_null()) j["meta"] = inst.meta;
    return j;
}

inline std::string serialize_instance(const Instance& inst) {
    return instance_to_json(inst).dump(2) + "\n";
}

inline Instance parse_instance(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("instance: JSON parse error at byte ") +
                          std::to_string(e.byte) + ": " + e.what());
    }
    Instance inst;
    inst.dim = io_detail::need(j, "dim", "top level").get<std::size_t>();
    const std::string model = io_detail::need(j, "model", "top level").get<std::string>();
    if (model != "maxmin" && model != "dc")
        throw input_error("instance: model must be 'maxmin' or 'dc'");
    inst.is_dc = model == "dc";

    if (j.contains("maxmin")) {
        const Json& mm = j["maxmin"];
        MaxMinFormula f;
        f.dim = inst.dim;
        for (const auto& a : io_detail::need(mm, "affine", "maxmin")) {
            f.affine.push_back({io_detail::vec(io_detail::need(a, "x", "maxmin.affine"), "maxmin.affine"),
                                io_detail::rat(io_detail::need(a, "a", "maxmin.affine"), "maxmin.affine")});
        }
        for (const auto& g : io_detail::need(mm, "groups", "maxmin")) {
            std::vector<std::size_t> grp;
            for (const auto& e : g) {
                if (!e.is_number_unsigned())
                    throw input_error("instance: group entries must be piece indices");
                grp.push_back(e.get<std::size_t>());
            }
            f.groups.push_back(std::move(grp));
        }
        f.check();
        inst.maxmin = std::move(f);
    }
    if (j.contains("dc")) {
        const Json& dc = j["dc"];
        DcFunction f;
        f.h = io_detail::tree_from(io_detail::need(dc, "h", "dc"), "dc.h");
        f.g = io_detail::tree_from(io_detail::need(dc, "g", "dc"), "dc.g");
        f.check();
        if (f.dim() != inst.dim) throw input_error("instance: dc dimension disagrees with 'dim'");
        inst.dc = std::move(f);
    }
    if (inst.is_dc && !inst.dc) throw input_error("instance: model 'dc' without a 'dc' block");
    if (!inst.is_dc && !inst.maxmin) throw input_error("instance: model 'maxmin' without a 'maxmin' block");

    const Json& q = io_detail::need(j, "query", "top level");
    inst.w = io_detail::vec(io_detail::need(q, "w", "query"), "query.w");
    if (inst.w.size() != inst.dim) throw input_error("instance: query point dimension mismatch");
    inst.epsilon = io_detail::rat(io_detail::need(q, "epsilon", "query"), "query.epsilon");
    if (inst.epsilon < 0) throw input_error("instance: epsilon must be nonnegative");
    if (j.contains("meta")) inst.meta = j["meta"];
    return inst;
}

// ---------------------------------------------------------------------------

inline Json polytope_to_json(const Polytope& p) {
    Json j = Json::object();
    j["dim"] = p.dim;
    Json vs = Json::array();
    for (const auto& v : p.vertices) vs.push_back(io_detail::vec_json(v));
    j["vertices"] = std::move(vs);
    return j;
}

inline Polytope polytope_from_json(const Json& j) {
    Polytope p;
    p.dim = io_detail::need(j, "dim", "polytope").get<std::size_t>();
    for (const auto& v : io_detail::need(j, "vertices", "polytope"))
        p.vertices.push_back(io_detail::vec(v, "polytope.vertices"));
    if (p.vertices.empty()) throw input_error("polytope: empty vertex list");
    for (const auto& v : p.vertices)
        if (v.size() != p.dim) throw input_error("polytope: vertex dimension mismatch");
    return p;
}

inline Json verdict_to_json(const Verdict& v) {
    Json j = Json::object();
    j["notion"] = v.notion == Notion::Frechet ? "frechet" : "clarke";
    j["epsilon"] = format_rational(v.epsilon);
    j["dist_sq"] = v.dist_finite ? Json(format_rational(v.dist_sq)) : Json("inf");
    j["yes"] = v.yes;
    j["witness"] = v.witness ? Json(io_detail::vec_json(*v.witness)) : Json(nullptr);
    Json cert = Json::object();
    cert["kind"] = v.cert_kind;
    if (!v.cert_rows.empty()) {
        Json rows = Json::array();
        for (const auto& [n, b] : v.cert_rows) {
            Json r = Json::object();
            r["n"] = io_detail::vec_json(n);
            r["b"] = format_rational(b);
            rows.push_back(std::move(r));
        }
        cert["rows"] = std::move(rows);
    }
    if (!v.cert_farkas.empty()) cert["farkas"] = io_detail::vec_json(v.cert_farkas);
    if (!v.cert_support.empty()) {
        Json s = Json::array();
        for (const auto& p : v.cert_support) s.push_back(io_detail::vec_json(p));
        cert["support"] = std::move(s);
        cert["coeffs"] = io_detail::vec_json(v.cert_coeffs);
    }
    cert["cones"] = v.cone_count;
    cert["vertices_x"] = v.vcount_x;
    cert["vertices_y"] = v.vcount_y;
    j["certificate"] = std::move(cert);
    return j;
}

}  // namespace pastat
