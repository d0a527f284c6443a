#pragma once

#include <graphmend/condition.hpp>

// Test-only brute-force oracles, deliberately independent of the library's
// backtracking matcher: plain recursive enumeration of all injective item
// assignments, no ordering heuristics, no pruning.
namespace oracle {

using graphmend::ConditionPtr;
using graphmend::Id;
using graphmend::TypedGraph;

struct Mono {
    std::map<Id, Id> nodes;
    std::map<Id, Id> edges;
};

namespace detail {

inline void all_node_maps(const TypedGraph& a, const TypedGraph& g, size_t idx, Mono& cur,
                          std::vector<Mono>& out) {
    if (idx == a.nodes.size()) {
        out.push_back(cur);
        return;
    }
    const auto& n = a.nodes[idx];
    for (const auto& cand : g.nodes) {
        if (cand.type != n.type) continue;
        bool used = false;
        for (const auto& [k, v] : cur.nodes)
            if (v == cand.id) used = true;
        if (used) continue;
        cur.nodes[n.id] = cand.id;
        all_node_maps(a, g, idx + 1, cur, out);
        cur.nodes.erase(n.id);
    }
}

inline void all_edge_maps(const TypedGraph& a, const TypedGraph& g, size_t idx, Mono& cur,
                          std::vector<Mono>& out) {
    if (idx == a.edges.size()) {
        out.push_back(cur);
        return;
    }
    const auto& e = a.edges[idx];
    for (const auto& cand : g.edges) {
        if (cand.type != e.type) continue;
        if (cand.src != cur.nodes.at(e.src) || cand.tgt != cur.nodes.at(e.tgt)) continue;
        bool used = false;
        for (const auto& [k, v] : cur.edges)
            if (v == cand.id) used = true;
        if (used) continue;
        cur.edges[e.id] = cand.id;
        all_edge_maps(a, g, idx + 1, cur, out);
        cur.edges.erase(e.id);
    }
}

}  // namespace detail

/// Every injective typing-compatible map a -> g, by exhaustive enumeration.
inline std::vector<Mono> all_monos(const TypedGraph& a, const TypedGraph& g) {
    std::vector<Mono> node_stage, out;
    Mono cur;
    detail::all_node_maps(a, g, 0, cur, node_stage);
    for (Mono& m : node_stage) detail::all_edge_maps(a, g, 0, m, out);
    return out;
}

/// p ⊨ c by structural recursion over the condition, with extensions found by
/// filtering all_monos on agreement with p.
inline bool sat(const Mono& p, const ConditionPtr& c, const TypedGraph& g) {
    using graphmend::CKind;
    switch (c->kind) {
        case CKind::True: return true;
        case CKind::Exists: {
            for (const Mono& q : all_monos(c->extension, g)) {
                bool agrees = true;
                for (const auto& [k, v] : p.nodes)
                    if (q.nodes.at(k) != v) agrees = false;
                for (const auto& [k, v] : p.edges)
                    if (q.edges.at(k) != v) agrees = false;
                if (agrees && sat(q, c->sub, g)) return true;
            }
            return false;
        }
        case CKind::Not: return !sat(p, c->sub, g);
        case CKind::And:
            for (const auto& s : c->subs)
                if (!sat(p, s, g)) return false;
            return true;
        case CKind::Or:
            for (const auto& s : c->subs)
                if (sat(p, s, g)) return true;
            return false;
    }
    return false;
}

inline bool sat_constraint(const TypedGraph& g, const ConditionPtr& c) {
    return sat(Mono{}, c, g);
}

/// Reflexive-free reachability over containment-typed edges, by path search.
inline bool containment_path_exists(const TypedGraph& g, const graphmend::TypeGraph& tg,
                                    const Id& from, const Id& to) {
    std::set<Id> visited;
    std::vector<Id> stack{from};
    while (!stack.empty()) {
        Id v = stack.back();
        stack.pop_back();
        for (const auto& e : g.edges) {
            if (!tg.is_containment(e.type) || e.src != v) continue;
            if (e.tgt == to) return true;
            if (visited.insert(e.tgt).second) stack.push_back(e.tgt);
        }
    }
    return false;
}

}  // namespace oracle
