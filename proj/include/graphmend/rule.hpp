#pragma once

#include <random>

#include "graphmend/condition.hpp"

namespace graphmend {

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

/// A plain rule ⟨L ⊇ K ⊆ R⟩ with literal inclusions; K is the preserved part.
struct PlainRule {
    TypedGraph left;
    TypedGraph mid;
    TypedGraph right;

    friend bool operator==(const PlainRule&, const PlainRule&) = default;
};

inline PlainRule make_plain(TypedGraph left, TypedGraph mid, TypedGraph right) {
    if (!is_subgraph_of(mid, left) || !is_subgraph_of(mid, right))
        throw Error("plain rule: K must be a literal subgraph of L and R");
    return PlainRule{std::move(left), std::move(mid), std::move(right)};
}

inline PlainRule identity_rule(const TypedGraph& g) { return PlainRule{g, g, g}; }

inline PlainRule inverse(const PlainRule& p) { return PlainRule{p.right, p.mid, p.left}; }

/// L ≅ K ⊂ R: never deletes, adds something.
inline bool is_increasing(const PlainRule& p) {
    return p.left == p.mid && !(p.mid == p.right);
}
/// L ⊃ K ≅ R: never adds, deletes something.
inline bool is_decreasing(const PlainRule& p) {
    return p.mid == p.right && !(p.left == p.mid);
}

/// A rule with interfaces and a left application condition:
/// ρ = ⟨x: X ↪ L, p, ac, y: Y ↪ R⟩.
struct Rule {
    std::string name;
    PlainRule plain;
    Morphism left_iface;    // x: X -> L
    Morphism right_iface;   // y: Y -> R
    ConditionPtr ac;        // over L

    friend bool operator==(const Rule& a, const Rule& b) {
        return a.name == b.name && a.plain == b.plain && a.left_iface == b.left_iface &&
               a.right_iface == b.right_iface && cond_equal(a.ac, b.ac);
    }
};

inline Rule make_rule(std::string name, PlainRule plain, Morphism x, Morphism y,
                      ConditionPtr ac) {
    if (!(x.cod == plain.left)) throw Error("rule: left interface must land in L");
    if (!(y.cod == plain.right)) throw Error("rule: right interface must land in R");
    if (!(ac->anchor == plain.left)) throw Error("rule: application condition must be over L");
    if (!morphism_valid(x) || !morphism_valid(y)) throw Error("rule: invalid interface morphism");
    return Rule{std::move(name), std::move(plain), std::move(x), std::move(y), std::move(ac)};
}

/// The partial interface morphism i = y⁻¹ ∘ r ∘ l⁻¹ ∘ x of a rule: defined on
/// those X-items whose L-image survives through K to R and lies in y(Y).
inline PartialMap interface_map(const Rule& rho) {
    PartialMap i{rho.left_iface.dom, rho.right_iface.dom, {}, {}};
    std::map<Id, Id> y_inv_nodes, y_inv_edges;
    for (const auto& [a, b] : rho.right_iface.node_map) y_inv_nodes[b] = a;
    for (const auto& [a, b] : rho.right_iface.edge_map) y_inv_edges[b] = a;
    for (const auto& [xv, lv] : rho.left_iface.node_map) {
        if (!rho.plain.mid.has_node(lv)) continue;  // deleted by the rule
        auto it = y_inv_nodes.find(lv);             // K-items keep their id in R
        if (it != y_inv_nodes.end()) i.node_map[xv] = it->second;
    }
    for (const auto& [xe, le] : rho.left_iface.edge_map) {
        if (!rho.plain.mid.has_edge(le)) continue;
        auto it = y_inv_edges.find(le);
        if (it != y_inv_edges.end()) i.edge_map[xe] = it->second;
    }
    return i;
}

/// select(a, ac) = ⟨a, id_C, ac⟩: marks an occurrence of C, extending a marked
/// occurrence of A, that satisfies ac.
inline Rule make_select(const Morphism& a, ConditionPtr ac) {
    const TypedGraph& c = a.cod;
    return make_rule("select", identity_rule(c), a, identity_morphism(c), std::move(ac));
}
inline Rule make_select(const Morphism& a) { return make_select(a, truth(a.cod)); }

/// unselect(a) = ⟨id_C, a⟩: shrinks the marking back to A.
inline Rule make_unselect(const Morphism& a) {
    const TypedGraph& c = a.cod;
    return make_rule("unselect", identity_rule(c), identity_morphism(c), a, truth(c));
}

/// Skip = the identity rule on X.
inline Rule make_skip(const TypedGraph& x) {
    return make_rule("skip", identity_rule(x), identity_morphism(x), identity_morphism(x),
                     truth(x));
}

// ---------------------------------------------------------------------------
// Direct transformations
// ---------------------------------------------------------------------------

/// A typed graph with a marked interface: the state programs run on.
struct LocatedGraph {
    TypedGraph graph;
    Morphism marking;  // X -> graph

    friend bool operator==(const LocatedGraph&, const LocatedGraph&) = default;
};

inline LocatedGraph locate(const TypedGraph& g) {
    return LocatedGraph{g, Morphism{empty_graph(), g, {}, {}}};
}

inline bool located_isomorphic(const LocatedGraph& a, const LocatedGraph& b) {
    if (!(a.marking.dom == b.marking.dom)) return false;
    std::map<Id, Id> seed_nodes, seed_edges;
    for (const auto& [x, g] : a.marking.node_map) seed_nodes[g] = b.marking.at_node(x);
    for (const auto& [x, g] : a.marking.edge_map) seed_edges[g] = b.marking.at_edge(x);
    return find_isomorphism_seeded(a.graph, b.graph, seed_nodes, seed_edges).has_value();
}

/// "No edge in G − g'(L) is incident to a node in g'(L − K)."
inline bool dangling_condition_holds(const PlainRule& p, const Morphism& match) {
    std::set<Id> deleted_nodes;
    for (const Node& n : p.left.nodes)
        if (!p.mid.has_node(n.id)) deleted_nodes.insert(match.at_node(n.id));
    if (deleted_nodes.empty()) return true;
    std::set<Id> matched_edges;
    for (const auto& [a, b] : match.edge_map) matched_edges.insert(b);
    for (const Edge& e : match.cod.edges) {
        if (matched_edges.count(e.id)) continue;
        if (deleted_nodes.count(e.src) || deleted_nodes.count(e.tgt)) return false;
    }
    return true;
}

/// The dangling edges that SPO-style application would remove at this match.
inline std::set<Id> dangling_edges(const PlainRule& p, const Morphism& match) {
    std::set<Id> deleted_nodes;
    for (const Node& n : p.left.nodes)
        if (!p.mid.has_node(n.id)) deleted_nodes.insert(match.at_node(n.id));
    std::set<Id> matched_edges;
    for (const auto& [a, b] : match.edge_map) matched_edges.insert(b);
    std::set<Id> out;
    for (const Edge& e : match.cod.edges)
        if (!matched_edges.count(e.id) &&
            (deleted_nodes.count(e.src) || deleted_nodes.count(e.tgt)))
            out.insert(e.id);
    return out;
}

/// Deterministic per-execution supply of fresh instance ids, prefixed by the
/// creating rule's name.
class ExecFreshIds {
public:
    Id fresh(const std::string& rule_name, const TypedGraph& avoid) {
        for (;;) {
            Id cand = rule_name + "#" + std::to_string(counter_++);
            if (!avoid.contains_id(cand)) return cand;
        }
    }

private:
    long long counter_ = 0;
};

struct DirectTransformation {
    LocatedGraph result;       // H with the unmarked interface h = h' ∘ y
    Morphism comatch;          // h': R -> H
    std::set<Id> spo_removed;  // dangling edges removed before DPO (SPO mode)
};

/// Applies the plain rule of rho at the given match in DPO style; in SPO mode
/// dangling edges are removed first. The match must satisfy the dangling
/// condition unless spo is set.
inline DirectTransformation apply_at(const Rule& rho, const TypedGraph& g, const Morphism& match,
                                     bool spo, ExecFreshIds& gen) {
    const PlainRule& p = rho.plain;
    TypedGraph work = g;
    std::set<Id> spo_removed;
    if (spo) {
        spo_removed = dangling_edges(p, match);
        std::set<Id> none;
        work = remove_items(work, none, spo_removed);
    } else if (!dangling_condition_holds(p, match)) {
        throw Error("apply_at: dangling condition violated");
    }

    std::set<Id> del_nodes, del_edges;
    for (const Node& n : p.left.nodes)
        if (!p.mid.has_node(n.id)) del_nodes.insert(match.at_node(n.id));
    for (const Edge& e : p.left.edges)
        if (!p.mid.has_edge(e.id)) del_edges.insert(match.at_edge(e.id));
    TypedGraph h = remove_items(work, del_nodes, del_edges);

    Morphism comatch{p.right, {}, {}, {}};
    for (const Node& n : p.mid.nodes) comatch.node_map[n.id] = match.at_node(n.id);
    for (const Edge& e : p.mid.edges) comatch.edge_map[e.id] = match.at_edge(e.id);
    for (const Node& n : p.right.nodes) {
        if (p.mid.has_node(n.id)) continue;
        Id id = gen.fresh(rho.name, h);
        h.add_node(id, n.type);
        comatch.node_map[n.id] = id;
    }
    for (const Edge& e : p.right.edges) {
        if (p.mid.has_edge(e.id)) continue;
        Id id = gen.fresh(rho.name, h);
        h.add_edge(id, e.type, comatch.node_map.at(e.src), comatch.node_map.at(e.tgt));
        comatch.edge_map[e.id] = id;
    }
    comatch.cod = h;

    Morphism marking = compose(rho.right_iface, comatch);
    return DirectTransformation{LocatedGraph{h, marking}, comatch, spo_removed};
}

/// All matches g': L ↪ G with g' ∘ x = marking, g' ⊨ ac, and (in DPO mode) the
/// dangling condition; canonical order.
inline std::vector<Morphism> find_matches(const Rule& rho, const LocatedGraph& lg, bool spo) {
    if (!(rho.left_iface.dom == lg.marking.dom))
        throw Error("find_matches: rule interface differs from the marked interface");
    std::map<Id, Id> seed_nodes, seed_edges;
    for (const auto& [xv, lv] : rho.left_iface.node_map) {
        Id gv = lg.marking.at_node(xv);
        auto it = seed_nodes.find(lv);
        if (it != seed_nodes.end() && it->second != gv) return {};
        seed_nodes[lv] = gv;
    }
    for (const auto& [xe, le] : rho.left_iface.edge_map) {
        Id ge = lg.marking.at_edge(xe);
        auto it = seed_edges.find(le);
        if (it != seed_edges.end() && it->second != ge) return {};
        seed_edges[le] = ge;
    }
    std::vector<Morphism> out;
    for (Morphism& m : enumerate_morphisms_seeded(rho.plain.left, lg.graph, seed_nodes, seed_edges)) {
        if (!spo && !dangling_condition_holds(rho.plain, m)) continue;
        if (!satisfies(m, rho.ac)) continue;
        out.push_back(std::move(m));
    }
    return out;
}

enum class MatchPolicy { All, First, SeededRandom };

/// Applies rho at matches of the located graph selected by the policy; the
/// result list pairs each derived located graph with the rule's partial
/// interface map. Empty means inapplicable.
inline std::vector<std::pair<LocatedGraph, PartialMap>> apply_rule(const LocatedGraph& lg,
                                                                   const Rule& rho, bool spo,
                                                                   ExecFreshIds& gen,
                                                                   MatchPolicy policy
                                                                   = MatchPolicy::All,
                                                                   uint64_t seed = 0) {
    std::vector<Morphism> matches = find_matches(rho, lg, spo);
    if (matches.empty()) return {};
    if (policy == MatchPolicy::First) {
        matches.resize(1);
    } else if (policy == MatchPolicy::SeededRandom) {
        std::mt19937_64 rng(seed);
        matches = {matches[rng() % matches.size()]};
    }
    std::vector<std::pair<LocatedGraph, PartialMap>> out;
    for (const Morphism& m : matches) {
        DirectTransformation t = apply_at(rho, lg.graph, m, spo, gen);
        out.emplace_back(t.result, interface_map(rho));
    }
    return out;
}

inline std::vector<std::pair<LocatedGraph, PartialMap>> apply_rule_spo(const LocatedGraph& lg,
                                                                       const Rule& rho,
                                                                       ExecFreshIds& gen,
                                                                       MatchPolicy policy
                                                                       = MatchPolicy::All,
                                                                       uint64_t seed = 0) {
    return apply_rule(lg, rho, true, gen, policy, seed);
}

// ---------------------------------------------------------------------------
// Rule comparison up to span isomorphism
// ---------------------------------------------------------------------------

/// Two rules are span-isomorphic when isomorphisms of L, K, R commute with the
/// rule inclusions and both interface morphisms. Application conditions are
/// not compared; the synthesized ones are determined by the span.
inline bool span_isomorphic(const Rule& r1, const Rule& r2) {
    if (!(r1.left_iface.dom == r2.left_iface.dom)) return false;
    if (!(r1.right_iface.dom == r2.right_iface.dom)) return false;
    if (r1.plain.left.node_count() != r2.plain.left.node_count() ||
        r1.plain.left.edge_count() != r2.plain.left.edge_count() ||
        r1.plain.mid.node_count() != r2.plain.mid.node_count() ||
        r1.plain.mid.edge_count() != r2.plain.mid.edge_count() ||
        r1.plain.right.node_count() != r2.plain.right.node_count() ||
        r1.plain.right.edge_count() != r2.plain.right.edge_count())
        return false;

    // phi_L: L1 -> L2 with phi_L ∘ x1 = x2, restricting to an iso K1 -> K2.
    std::map<Id, Id> seedl_n, seedl_e;
    for (const auto& [xv, lv] : r1.left_iface.node_map)
        seedl_n[lv] = r2.left_iface.node_map.at(xv);
    for (const auto& [xe, le] : r1.left_iface.edge_map)
        seedl_e[le] = r2.left_iface.edge_map.at(xe);

    for (const Morphism& phi_l :
         enumerate_morphisms_seeded(r1.plain.left, r2.plain.left, seedl_n, seedl_e)) {
        bool mid_ok = true;
        for (const Node& n : r1.plain.mid.nodes)
            if (!r2.plain.mid.has_node(phi_l.at_node(n.id))) {
                mid_ok = false;
                break;
            }
        for (const Edge& e : r1.plain.mid.edges)
            if (mid_ok && !r2.plain.mid.has_edge(phi_l.at_edge(e.id))) mid_ok = false;
        if (!mid_ok) continue;

        // phi_R: R1 -> R2 agreeing with phi_L on K and with the y-interfaces.
        std::map<Id, Id> seedr_n, seedr_e;
        bool seed_ok = true;
        for (const Node& n : r1.plain.mid.nodes) seedr_n[n.id] = phi_l.at_node(n.id);
        for (const Edge& e : r1.plain.mid.edges) seedr_e[e.id] = phi_l.at_edge(e.id);
        for (const auto& [yv, rv] : r1.right_iface.node_map) {
            Id want = r2.right_iface.node_map.at(yv);
            auto it = seedr_n.find(rv);
            if (it != seedr_n.end() && it->second != want) seed_ok = false;
            seedr_n[rv] = want;
        }
        for (const auto& [ye, re] : r1.right_iface.edge_map) {
            Id want = r2.right_iface.edge_map.at(ye);
            auto it = seedr_e.find(re);
            if (it != seedr_e.end() && it->second != want) seed_ok = false;
            seedr_e[re] = want;
        }
        if (!seed_ok) continue;
        if (find_isomorphism_seeded(r1.plain.right, r2.plain.right, seedr_n, seedr_e))
            return true;
    }
    return false;
}

}  // namespace graphmend
