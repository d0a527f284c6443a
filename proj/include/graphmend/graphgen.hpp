#pragma once

#include <random>

#include "graphmend/morphism.hpp"

namespace graphmend {

struct GenBounds {
    size_t max_nodes = 3;
    size_t max_edges = 3;
};

namespace detail {

struct EdgeSlot {
    Id type;
    Id src;
    Id tgt;
};

inline std::vector<EdgeSlot> edge_slots(const TypeGraph& tg, const TypedGraph& g) {
    std::vector<EdgeSlot> slots;
    for (const TypeEdge& te : tg.edges)
        for (const Node& u : g.nodes) {
            if (u.type != te.src) continue;
            for (const Node& v : g.nodes)
                if (v.type == te.tgt) slots.push_back({te.id, u.id, v.id});
        }
    return slots;
}

inline void node_multisets(const TypeGraph& tg, size_t max_nodes,
                           const std::function<void(const std::vector<Id>&)>& sink) {
    std::vector<Id> types;
    for (const TypeNode& n : tg.nodes) types.push_back(n.id);
    std::vector<Id> cur;
    std::function<void(size_t, size_t)> rec = [&](size_t from, size_t remaining) {
        sink(cur);
        if (remaining == 0) return;
        for (size_t i = from; i < types.size(); ++i) {
            cur.push_back(types[i]);
            rec(i, remaining - 1);
            cur.pop_back();
        }
    };
    rec(0, max_nodes);
}

}  // namespace detail

/// All typed graphs over tg with at most the given numbers of nodes and edges,
/// up to isomorphism, in a deterministic order. Parallel edges are included.
inline std::vector<TypedGraph> enumerate_typed_graphs(const TypeGraph& tg, const GenBounds& b) {
    std::vector<TypedGraph> out;
    detail::node_multisets(tg, b.max_nodes, [&](const std::vector<Id>& types) {
        TypedGraph base;
        for (size_t i = 0; i < types.size(); ++i) base.add_node("n" + std::to_string(i + 1), types[i]);
        std::vector<detail::EdgeSlot> slots = detail::edge_slots(tg, base);
        std::vector<TypedGraph> bucket;  // same node multiset: dedup here
        std::vector<size_t> mult(slots.size(), 0);
        std::function<void(size_t, size_t)> rec = [&](size_t idx, size_t used) {
            if (idx == slots.size()) {
                TypedGraph g = base;
                size_t e = 0;
                for (size_t i = 0; i < slots.size(); ++i)
                    for (size_t k = 0; k < mult[i]; ++k)
                        g.add_edge("e" + std::to_string(++e), slots[i].type, slots[i].src,
                                   slots[i].tgt);
                for (const TypedGraph& seen : bucket)
                    if (seen.edge_count() == g.edge_count() && isomorphic(seen, g)) return;
                bucket.push_back(g);
                return;
            }
            for (size_t m = 0; used + m <= b.max_edges; ++m) {
                mult[idx] = m;
                rec(idx + 1, used + m);
            }
            mult[idx] = 0;
        };
        rec(0, 0);
        for (TypedGraph& g : bucket) out.push_back(std::move(g));
    });
    return out;
}

/// A seeded random typed graph over tg: uniform node count and types, then
/// edges drawn from the typing-compatible slots (parallels allowed). Raw
/// engine draws keep the sequence portable across standard libraries.
inline TypedGraph random_typed_graph(const TypeGraph& tg, std::mt19937_64& rng, size_t max_nodes,
                                     size_t max_edges) {
    TypedGraph g;
    if (tg.nodes.empty()) return g;
    size_t n = rng() % (max_nodes + 1);
    for (size_t i = 0; i < n; ++i)
        g.add_node("n" + std::to_string(i + 1), tg.nodes[rng() % tg.nodes.size()].id);
    std::vector<detail::EdgeSlot> slots = detail::edge_slots(tg, g);
    if (slots.empty()) return g;
    size_t m = rng() % (max_edges + 1);
    for (size_t i = 0; i < m; ++i) {
        const detail::EdgeSlot& s = slots[rng() % slots.size()];
        g.add_edge("e" + std::to_string(i + 1), s.type, s.src, s.tgt);
    }
    return g;
}

}  // namespace graphmend
