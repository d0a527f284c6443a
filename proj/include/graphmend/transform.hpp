#pragma once

#include "graphmend/rule.hpp"

namespace graphmend {

// ---------------------------------------------------------------------------
// Shift: conditions over morphisms
// ---------------------------------------------------------------------------

namespace detail {

/// One way of overlaying C (beyond the shared P) onto R: each C-item is either
/// identified with an unused compatible R-item or marked fresh.
struct Overlay {
    std::map<Id, Id> node_choice;  // C-node -> R-node, absent = fresh
    std::map<Id, Id> edge_choice;  // C-edge -> R-edge, absent = fresh
};

inline void enumerate_overlays(const Morphism& b, const TypedGraph& c,
                               const std::vector<Id>& pending_nodes,
                               const std::vector<Id>& pending_edges, size_t idx, bool node_phase,
                               Overlay& cur, std::set<Id>& used,
                               const std::function<void(const Overlay&)>& sink) {
    const TypedGraph& r = b.cod;
    if (node_phase && idx == pending_nodes.size()) {
        enumerate_overlays(b, c, pending_nodes, pending_edges, 0, false, cur, used, sink);
        return;
    }
    if (!node_phase && idx == pending_edges.size()) {
        sink(cur);
        return;
    }
    if (node_phase) {
        const Node& n = c.node_or_throw(pending_nodes[idx]);
        std::set<Id> taken;
        for (const auto& [pv, rv] : b.node_map) taken.insert(rv);
        for (const Node& cand : r.nodes) {
            if (cand.type != n.type || taken.count(cand.id) || used.count(cand.id)) continue;
            cur.node_choice[n.id] = cand.id;
            used.insert(cand.id);
            enumerate_overlays(b, c, pending_nodes, pending_edges, idx + 1, true, cur, used, sink);
            used.erase(cand.id);
            cur.node_choice.erase(n.id);
        }
        // fresh copy
        enumerate_overlays(b, c, pending_nodes, pending_edges, idx + 1, true, cur, used, sink);
    } else {
        const Edge& e = c.edge_or_throw(pending_edges[idx]);
        auto mapped = [&](const Id& v) -> std::optional<Id> {
            if (b.node_map.count(v)) return b.node_map.at(v);
            auto it = cur.node_choice.find(v);
            if (it != cur.node_choice.end()) return it->second;
            return std::nullopt;  // endpoint is fresh
        };
        std::optional<Id> ms = mapped(e.src), mt = mapped(e.tgt);
        if (ms && mt) {
            std::set<Id> taken;
            for (const auto& [pe, re] : b.edge_map) taken.insert(re);
            for (const Edge& cand : r.edges) {
                if (cand.type != e.type || cand.src != *ms || cand.tgt != *mt) continue;
                if (taken.count(cand.id) || used.count(cand.id)) continue;
                cur.edge_choice[e.id] = cand.id;
                used.insert(cand.id);
                enumerate_overlays(b, c, pending_nodes, pending_edges, idx + 1, false, cur, used,
                                   sink);
                used.erase(cand.id);
                cur.edge_choice.erase(e.id);
            }
        }
        enumerate_overlays(b, c, pending_nodes, pending_edges, idx + 1, false, cur, used, sink);
    }
}

ConditionPtr shift_impl(const Morphism& b, const ConditionPtr& c, FreshIds& gen);

/// Shift(b, ∃(a, sub)) = ∨ over jointly surjective pairs (a': R ⊆ R',
/// b': C -> R'), enumerated up to isomorphism of R'.
inline ConditionPtr shift_exists(const Morphism& b, const ConditionPtr& c, FreshIds& gen) {
    const TypedGraph& ext = c->extension;
    const TypedGraph& r = b.cod;
    std::vector<Id> pending_nodes, pending_edges;
    for (const Node& n : ext.nodes)
        if (!c->anchor.has_node(n.id)) pending_nodes.push_back(n.id);
    for (const Edge& e : ext.edges)
        if (!c->anchor.has_edge(e.id)) pending_edges.push_back(e.id);

    std::vector<ConditionPtr> disjuncts;
    std::vector<std::pair<TypedGraph, Morphism>> seen;  // (R', b') for dedup

    Overlay cur;
    std::set<Id> used;
    enumerate_overlays(
        b, ext, pending_nodes, pending_edges, 0, true, cur, used, [&](const Overlay& ov) {
            auto snap = gen.snapshot();
            TypedGraph rp = r;
            Morphism bp{ext, {}, {}, {}};
            for (const auto& [pv, rv] : b.node_map) bp.node_map[pv] = rv;
            for (const auto& [pe, re] : b.edge_map) bp.edge_map[pe] = re;
            for (const Id& nid : pending_nodes) {
                auto it = ov.node_choice.find(nid);
                if (it != ov.node_choice.end()) {
                    bp.node_map[nid] = it->second;
                } else {
                    Id fresh = gen.fresh(nid);
                    rp.add_node(fresh, ext.node_or_throw(nid).type);
                    bp.node_map[nid] = fresh;
                }
            }
            for (const Id& eid : pending_edges) {
                auto it = ov.edge_choice.find(eid);
                if (it != ov.edge_choice.end()) {
                    bp.edge_map[eid] = it->second;
                } else {
                    const Edge& e = ext.edge_or_throw(eid);
                    Id fresh = gen.fresh(eid);
                    rp.add_edge(fresh, e.type, bp.node_map.at(e.src), bp.node_map.at(e.tgt));
                    bp.edge_map[eid] = fresh;
                }
            }
            bp.cod = rp;

            // Dedup up to an isomorphism of R' commuting with a' and b'.
            for (const auto& [rp2, bp2] : seen) {
                std::map<Id, Id> seed_nodes, seed_edges;
                for (const Node& n : r.nodes) seed_nodes[n.id] = n.id;
                for (const Edge& e : r.edges) seed_edges[e.id] = e.id;
                bool consistent = true;
                for (const auto& [cv, rv] : bp.node_map) {
                    Id want = bp2.node_map.at(cv);
                    auto it = seed_nodes.find(rv);
                    if (it != seed_nodes.end() && it->second != want) consistent = false;
                    seed_nodes[rv] = want;
                }
                for (const auto& [ce, re] : bp.edge_map) {
                    Id want = bp2.edge_map.at(ce);
                    auto it = seed_edges.find(re);
                    if (it != seed_edges.end() && it->second != want) consistent = false;
                    seed_edges[re] = want;
                }
                if (consistent && find_isomorphism_seeded(rp, rp2, seed_nodes, seed_edges)) {
                    gen.restore(snap);
                    return;
                }
            }
            seen.emplace_back(rp, bp);

            ConditionPtr sub = shift_impl(bp, c->sub, gen);
            disjuncts.push_back(exists(r, rp, sub));
            gen.restore(snap);
        });
    return disj(r, std::move(disjuncts));
}

inline ConditionPtr shift_impl(const Morphism& b, const ConditionPtr& c, FreshIds& gen) {
    if (!(b.dom == c->anchor)) throw Error("shift: condition anchored at the wrong graph");
    switch (c->kind) {
        case CKind::True: return truth(b.cod);
        case CKind::Exists: return shift_exists(b, c, gen);
        case CKind::Not: return neg(shift_impl(b, c->sub, gen));
        case CKind::And:
        case CKind::Or: {
            std::vector<ConditionPtr> subs;
            for (const auto& s : c->subs) subs.push_back(shift_impl(b, s, gen));
            return c->kind == CKind::And ? conj(b.cod, std::move(subs))
                                         : disj(b.cod, std::move(subs));
        }
    }
    throw Error("shift: bad condition");
}

}  // namespace detail

/// Shifts a condition over P along b: P ↪ R into an equivalent condition over
/// R: n ∘ b ⊨ c iff n ⊨ shift(b, c).
inline ConditionPtr shift(const Morphism& b, const ConditionPtr& c) {
    if (!morphism_valid(b)) throw Error("shift: invalid morphism");
    FreshIds gen;
    gen.reserve(b.dom);
    gen.reserve(b.cod);
    gen.reserve_condition(c);
    return detail::shift_impl(b, c, gen);
}

// ---------------------------------------------------------------------------
// Left: right application conditions to left ones
// ---------------------------------------------------------------------------

namespace detail {

/// Left(p, ac) for ac over R: translate through the inverse rule. For an
/// ∃(a: R ⊆ R', sub) branch, p⁻¹ is applied at the anchor inclusion; when its
/// dangling condition fails the branch is false.
inline ConditionPtr left_impl(const PlainRule& p, const ConditionPtr& ac) {
    switch (ac->kind) {
        case CKind::True: return truth(p.left);
        case CKind::Not: return neg(left_impl(p, ac->sub));
        case CKind::And:
        case CKind::Or: {
            std::vector<ConditionPtr> subs;
            for (const auto& s : ac->subs) subs.push_back(left_impl(p, s));
            return ac->kind == CKind::And ? conj(p.left, std::move(subs))
                                          : disj(p.left, std::move(subs));
        }
        case CKind::Exists: {
            const TypedGraph& rp = ac->extension;  // R'
            // Dangling check for p⁻¹ at R ⊆ R': context edges may not touch
            // nodes the inverse rule deletes (V_R \ V_K).
            std::set<Id> deleted;
            for (const Node& n : p.right.nodes)
                if (!p.mid.has_node(n.id)) deleted.insert(n.id);
            for (const Edge& e : rp.edges) {
                if (p.right.has_edge(e.id)) continue;
                if (deleted.count(e.src) || deleted.count(e.tgt)) return falsity(p.left);
            }
            std::set<Id> del_edges;
            for (const Edge& e : p.right.edges)
                if (!p.mid.has_edge(e.id)) del_edges.insert(e.id);
            TypedGraph kp = remove_items(rp, deleted, del_edges);  // K'
            // L' = K' ∪ (L \ K); bound ids were freshened, so no collisions.
            for (const Node& n : p.left.nodes)
                if (!p.mid.has_node(n.id) && kp.contains_id(n.id))
                    throw Error("left: id collision between rule and condition context");
            for (const Edge& e : p.left.edges)
                if (!p.mid.has_edge(e.id) && kp.contains_id(e.id))
                    throw Error("left: id collision between rule and condition context");
            TypedGraph lp = graph_union(kp, p.left);
            PlainRule derived{lp, kp, rp};
            return exists(p.left, lp, left_impl(derived, ac->sub));
        }
    }
    throw Error("left: bad condition");
}

}  // namespace detail

/// For each direct transformation G ⇒_{p,g,h} H: g ⊨ left(p, ac) iff h ⊨ ac.
inline ConditionPtr left(const PlainRule& p, const ConditionPtr& ac) {
    if (!(ac->anchor == p.right)) throw Error("left: condition must be anchored at R");
    FreshIds gen;
    gen.reserve(p.left);
    gen.reserve(p.mid);
    gen.reserve(p.right);
    return detail::left_impl(p, freshen_bound(ac, gen));
}

// ---------------------------------------------------------------------------
// cpres: constraint-preserving application conditions
// ---------------------------------------------------------------------------

/// cpres(p, d) = Shift(∅ ↪ L, d) ⟹ Left(p, Shift(∅ ↪ R, d)). Equipping a rule
/// with this application condition makes it d-preserving.
inline ConditionPtr cpres(const PlainRule& p, const ConditionPtr& d) {
    if (!d->anchor.empty()) throw Error("cpres: d must be a constraint");
    FreshIds gen;
    gen.reserve(p.left);
    gen.reserve(p.mid);
    gen.reserve(p.right);
    gen.reserve_condition(d);
    Morphism to_l{empty_graph(), p.left, {}, {}};
    Morphism to_r{empty_graph(), p.right, {}, {}};
    ConditionPtr pre = detail::shift_impl(to_l, d, gen);
    ConditionPtr post = detail::shift_impl(to_r, d, gen);
    return implies(pre, detail::left_impl(p, post));
}

inline ConditionPtr cpres(const Rule& rho, const ConditionPtr& d) {
    return cpres(rho.plain, d);
}

/// The rule with cpres(ρ, d) added to its application condition.
inline Rule make_preserving_rule(const Rule& rho, const ConditionPtr& d) {
    Rule r = rho;
    r.ac = conj(rho.plain.left, {rho.ac, cpres(rho, d)});
    return r;
}

}  // namespace graphmend
