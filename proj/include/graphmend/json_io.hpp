#pragma once

#include <fstream>

#include <json.hpp>

#include "graphmend/program.hpp"

namespace graphmend {

using nlohmann::json;

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Type graphs:
//   {nodes:[{id}], edges:[{id,src,tgt,containment}], opposites:[[e1,e2]]}
// ---------------------------------------------------------------------------

inline json to_json(const TypeGraph& tg) {
    json j;
    j["nodes"] = json::array();
    for (const TypeNode& n : tg.nodes) j["nodes"].push_back({{"id", n.id}});
    j["edges"] = json::array();
    for (const TypeEdge& e : tg.edges)
        j["edges"].push_back(
            {{"id", e.id}, {"src", e.src}, {"tgt", e.tgt}, {"containment", e.containment}});
    j["opposites"] = json::array();
    for (const auto& [a, b] : tg.opposites)
        if (a < b) j["opposites"].push_back({a, b});
    return j;
}

inline TypeGraph type_graph_from_json(const json& j) {
    try {
        TypeGraph tg;
        for (const json& n : j.at("nodes")) tg.add_node(n.at("id").get<std::string>());
        for (const json& e : j.at("edges"))
            tg.add_edge(e.at("id").get<std::string>(), e.at("src").get<std::string>(),
                        e.at("tgt").get<std::string>(), e.value("containment", false));
        for (const json& o : j.value("opposites", json::array())) {
            if (!o.is_array() || o.size() != 2) throw ParseError("opposite pair must be [e1,e2]");
            tg.add_opposite(o[0].get<std::string>(), o[1].get<std::string>());
        }
        std::vector<Violation> v = validate_type_graph(tg);
        if (!v.empty())
            throw ParseError("type graph invalid: " + v.front().property + ": " +
                             v.front().detail);
        return tg;
    } catch (const json::exception& e) {
        throw ParseError(std::string("type graph: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Typed graphs: {nodes:[{id,type}], edges:[{id,type,src,tgt}]}
// ---------------------------------------------------------------------------

inline json to_json(const TypedGraph& g) {
    json j;
    j["nodes"] = json::array();
    for (const Node& n : g.nodes) j["nodes"].push_back({{"id", n.id}, {"type", n.type}});
    j["edges"] = json::array();
    for (const Edge& e : g.edges)
        j["edges"].push_back(
            {{"id", e.id}, {"type", e.type}, {"src", e.src}, {"tgt", e.tgt}});
    return j;
}

inline TypedGraph typed_graph_from_json(const json& j) {
    try {
        TypedGraph g;
        for (const json& n : j.at("nodes"))
            g.add_node(n.at("id").get<std::string>(), n.at("type").get<std::string>());
        for (const json& e : j.value("edges", json::array()))
            g.add_edge(e.at("id").get<std::string>(), e.at("type").get<std::string>(),
                       e.at("src").get<std::string>(), e.at("tgt").get<std::string>());
        if (!well_formed(g)) throw ParseError("graph has edges with missing endpoints");
        return g;
    } catch (const json::exception& e) {
        throw ParseError(std::string("typed graph: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Conditions: nested {kind: "true"|"exists"|"not"|"and"|"or", ...} with
// id-based subgraph inclusions.
// ---------------------------------------------------------------------------

inline json condition_to_json(const ConditionPtr& c) {
    switch (c->kind) {
        case CKind::True: return {{"kind", "true"}};
        case CKind::Exists:
            return {{"kind", "exists"},
                    {"inclusion",
                     {{"domain", to_json(c->anchor)}, {"codomain", to_json(c->extension)}}},
                    {"sub", condition_to_json(c->sub)}};
        case CKind::Not: return {{"kind", "not"}, {"sub", condition_to_json(c->sub)}};
        case CKind::And:
        case CKind::Or: {
            json subs = json::array();
            for (const auto& s : c->subs) subs.push_back(condition_to_json(s));
            return {{"kind", c->kind == CKind::And ? "and" : "or"}, {"subs", subs}};
        }
    }
    throw Error("condition_to_json: bad kind");
}

inline ConditionPtr condition_from_json(const json& j, const TypedGraph& anchor) {
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "true") return truth(anchor);
        if (kind == "exists") {
            TypedGraph dom = typed_graph_from_json(j.at("inclusion").at("domain"));
            TypedGraph cod = typed_graph_from_json(j.at("inclusion").at("codomain"));
            if (!(dom == anchor))
                throw ParseError("exists: inclusion domain differs from the context anchor");
            if (!is_subgraph_of(dom, cod))
                throw ParseError("exists: inclusion is not an id-based subgraph inclusion");
            if (dom == cod) throw ParseError("exists: inclusion must be real (A ⊂ C)");
            return exists(dom, cod, condition_from_json(j.at("sub"), cod));
        }
        if (kind == "not") return neg(condition_from_json(j.at("sub"), anchor));
        if (kind == "and" || kind == "or") {
            std::vector<ConditionPtr> subs;
            for (const json& s : j.at("subs")) subs.push_back(condition_from_json(s, anchor));
            return kind == "and" ? conj(anchor, std::move(subs)) : disj(anchor, std::move(subs));
        }
        throw ParseError("condition: unknown kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw ParseError(std::string("condition: ") + e.what());
    }
}

/// A constraint file: a condition over the empty graph.
inline ConditionPtr constraint_from_json(const json& j) {
    return condition_from_json(j, empty_graph());
}

// ---------------------------------------------------------------------------
// Programs: nested objects mirroring the AST; rules as three graphs plus
// interface maps and a condition.
// ---------------------------------------------------------------------------

inline json morphism_to_json(const Morphism& m) {
    json nodes = json::object(), edges = json::object();
    for (const auto& [a, b] : m.node_map) nodes[a] = b;
    for (const auto& [a, b] : m.edge_map) edges[a] = b;
    return {{"domain", to_json(m.dom)}, {"nodes", nodes}, {"edges", edges}};
}

inline Morphism morphism_from_json(const json& j, const TypedGraph& cod) {
    Morphism m{typed_graph_from_json(j.at("domain")), cod, {}, {}};
    const json nodes = j.value("nodes", json::object());
    const json edges = j.value("edges", json::object());
    for (const auto& [a, b] : nodes.items()) m.node_map[a] = b.get<std::string>();
    for (const auto& [a, b] : edges.items()) m.edge_map[a] = b.get<std::string>();
    if (!morphism_valid(m)) throw ParseError("invalid interface morphism");
    return m;
}

inline json program_to_json(const ProgramPtr& p) {
    switch (p->kind) {
        case PKind::RuleStep: {
            return {{"kind", "rule"},
                    {"name", p->rule.name},
                    {"spo", p->spo},
                    {"left", to_json(p->rule.plain.left)},
                    {"mid", to_json(p->rule.plain.mid)},
                    {"right", to_json(p->rule.plain.right)},
                    {"x", morphism_to_json(p->rule.left_iface)},
                    {"y", morphism_to_json(p->rule.right_iface)},
                    {"ac", condition_to_json(p->rule.ac)}};
        }
        case PKind::Skip: return {{"kind", "skip"}, {"interface", to_json(p->iface)}};
        case PKind::Choice:
        case PKind::Seq: {
            json subs = json::array();
            for (const auto& c : p->children) subs.push_back(program_to_json(c));
            return {{"kind", p->kind == PKind::Choice ? "choice" : "seq"}, {"subs", subs}};
        }
        case PKind::Try: return {{"kind", "try"}, {"sub", program_to_json(p->child)}};
        case PKind::Alap: return {{"kind", "alap"}, {"sub", program_to_json(p->child)}};
    }
    throw Error("program_to_json: bad kind");
}

inline ProgramPtr program_from_json(const json& j) {
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "rule") {
            TypedGraph left = typed_graph_from_json(j.at("left"));
            TypedGraph mid = typed_graph_from_json(j.at("mid"));
            TypedGraph right = typed_graph_from_json(j.at("right"));
            Morphism x = morphism_from_json(j.at("x"), left);
            Morphism y = morphism_from_json(j.at("y"), right);
            ConditionPtr ac = j.contains("ac") ? condition_from_json(j.at("ac"), left)
                                               : truth(left);
            Rule r = make_rule(j.value("name", "rule"), make_plain(left, mid, right),
                               std::move(x), std::move(y), std::move(ac));
            return rule_step(std::move(r), j.value("spo", false));
        }
        if (kind == "skip") return skip(typed_graph_from_json(j.at("interface")));
        if (kind == "choice" || kind == "seq") {
            std::vector<ProgramPtr> subs;
            for (const json& s : j.at("subs")) subs.push_back(program_from_json(s));
            return kind == "choice" ? choice(std::move(subs)) : seq(std::move(subs));
        }
        if (kind == "try") return try_(program_from_json(j.at("sub")));
        if (kind == "alap") return alap(program_from_json(j.at("sub")));
        throw ParseError("program: unknown kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw ParseError(std::string("program: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << "\n";
}

}  // namespace graphmend
