#pragma once

#include <functional>
#include <optional>

#include "graphmend/graph.hpp"

namespace graphmend {

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

/// An injective, typing-compatible structure map between typed graphs. Total
/// on its domain; the universal currency for matches, inclusions, and
/// condition anchors.
struct Morphism {
    TypedGraph dom;
    TypedGraph cod;
    std::map<Id, Id> node_map;
    std::map<Id, Id> edge_map;

    const Id& at_node(const Id& v) const {
        auto it = node_map.find(v);
        if (it == node_map.end()) throw Error("morphism undefined on node '" + v + "'");
        return it->second;
    }
    const Id& at_edge(const Id& e) const {
        auto it = edge_map.find(e);
        if (it == edge_map.end()) throw Error("morphism undefined on edge '" + e + "'");
        return it->second;
    }

    /// Identity on ids (domain is a literal subgraph of the codomain).
    bool is_inclusion() const {
        for (const auto& [a, b] : node_map)
            if (a != b) return false;
        for (const auto& [a, b] : edge_map)
            if (a != b) return false;
        return true;
    }
    bool is_identity() const { return is_inclusion() && dom == cod; }

    friend bool operator==(const Morphism&, const Morphism&) = default;
};

/// Checks totality, injectivity, typing and structure preservation.
inline bool morphism_valid(const Morphism& m) {
    std::set<Id> seen;
    for (const Node& n : m.dom.nodes) {
        auto it = m.node_map.find(n.id);
        if (it == m.node_map.end()) return false;
        const Node* img = m.cod.node(it->second);
        if (!img || img->type != n.type) return false;
        if (!seen.insert(it->second).second) return false;
    }
    seen.clear();
    for (const Edge& e : m.dom.edges) {
        auto it = m.edge_map.find(e.id);
        if (it == m.edge_map.end()) return false;
        const Edge* img = m.cod.edge(it->second);
        if (!img || img->type != e.type) return false;
        if (img->src != m.at_node(e.src) || img->tgt != m.at_node(e.tgt)) return false;
        if (!seen.insert(it->second).second) return false;
    }
    return m.node_map.size() == m.dom.nodes.size() && m.edge_map.size() == m.dom.edges.size();
}

inline Morphism identity_morphism(const TypedGraph& g) {
    Morphism m{g, g, {}, {}};
    for (const Node& n : g.nodes) m.node_map[n.id] = n.id;
    for (const Edge& e : g.edges) m.edge_map[e.id] = e.id;
    return m;
}

/// The inclusion morphism of a literal subgraph.
inline Morphism inclusion(const TypedGraph& sub, const TypedGraph& super) {
    if (!is_subgraph_of(sub, super)) throw Error("not a literal subgraph");
    Morphism m{sub, super, {}, {}};
    for (const Node& n : sub.nodes) m.node_map[n.id] = n.id;
    for (const Edge& e : sub.edges) m.edge_map[e.id] = e.id;
    return m;
}

/// g ∘ f (apply f first). Requires cod(f) == dom(g).
inline Morphism compose(const Morphism& f, const Morphism& g) {
    if (!(f.cod == g.dom)) throw Error("compose: middle graphs differ");
    Morphism m{f.dom, g.cod, {}, {}};
    for (const auto& [a, b] : f.node_map) m.node_map[a] = g.at_node(b);
    for (const auto& [a, b] : f.edge_map) m.edge_map[a] = g.at_edge(b);
    return m;
}

/// A partial injective map between typed graphs with an explicit definedness
/// set; used for rule interface maps.
struct PartialMap {
    TypedGraph dom;
    TypedGraph cod;
    std::map<Id, Id> node_map;
    std::map<Id, Id> edge_map;

    bool total() const {
        return node_map.size() == dom.nodes.size() && edge_map.size() == dom.edges.size();
    }
    friend bool operator==(const PartialMap&, const PartialMap&) = default;
};

/// Relational composition of partials: defined where both legs are defined.
inline PartialMap compose(const PartialMap& f, const PartialMap& g) {
    if (!(f.cod == g.dom)) throw Error("compose: middle graphs differ");
    PartialMap m{f.dom, g.cod, {}, {}};
    for (const auto& [a, b] : f.node_map) {
        auto it = g.node_map.find(b);
        if (it != g.node_map.end()) m.node_map[a] = it->second;
    }
    for (const auto& [a, b] : f.edge_map) {
        auto it = g.edge_map.find(b);
        if (it != g.edge_map.end()) m.edge_map[a] = it->second;
    }
    return m;
}

inline PartialMap as_partial(const Morphism& m) { return {m.dom, m.cod, m.node_map, m.edge_map}; }

/// Composes a partial interface map with a total marking, yielding a partial
/// marking of the codomain.
inline PartialMap compose(const PartialMap& i, const Morphism& h) {
    return compose(i, as_partial(h));
}

// ---------------------------------------------------------------------------
// Morphism enumeration (backtracking matcher)
// ---------------------------------------------------------------------------

namespace detail {

/// Exhaustive backtracking search for injective typing-compatible morphisms
/// A -> G extending a seed assignment. Node order: scarcest candidate set
/// first. Emits every solution; callers sort for the canonical order.
class Matcher {
public:
    Matcher(const TypedGraph& a, const TypedGraph& g, std::map<Id, Id> seed_nodes,
            std::map<Id, Id> seed_edges)
        : a_(a), g_(g), node_map_(std::move(seed_nodes)), edge_map_(std::move(seed_edges)) {
        for (const auto& [k, v] : node_map_) used_nodes_.insert(v);
        for (const auto& [k, v] : edge_map_) used_edges_.insert(v);
        for (const Node& n : a_.nodes)
            if (!node_map_.count(n.id)) pending_nodes_.push_back(n.id);
        // Scarcest type first keeps the search shallow; ties break on id.
        std::stable_sort(pending_nodes_.begin(), pending_nodes_.end(),
                         [&](const Id& x, const Id& y) {
                             size_t cx = candidate_count(x), cy = candidate_count(y);
                             if (cx != cy) return cx < cy;
                             return x < y;
                         });
        for (const Edge& e : a_.edges)
            if (!edge_map_.count(e.id)) pending_edges_.push_back(e.id);
    }

    /// Runs the search; returns false from the sink to stop early.
    bool run(const std::function<bool(const std::map<Id, Id>&, const std::map<Id, Id>&)>& sink) {
        if (!seed_ok()) return true;
        sink_ = &sink;
        return assign_node(0);
    }

private:
    size_t candidate_count(const Id& v) const {
        const Node& n = a_.node_or_throw(v);
        size_t c = 0;
        for (const Node& m : g_.nodes)
            if (m.type == n.type) ++c;
        return c;
    }

    bool seed_ok() const {
        for (const auto& [av, gv] : node_map_) {
            const Node* an = a_.node(av);
            const Node* gn = g_.node(gv);
            if (!an || !gn || an->type != gn->type) return false;
        }
        std::set<Id> vals;
        for (const auto& [k, v] : node_map_)
            if (!vals.insert(v).second) return false;
        vals.clear();
        for (const auto& [ae, ge] : edge_map_) {
            const Edge* x = a_.edge(ae);
            const Edge* y = g_.edge(ge);
            if (!x || !y || x->type != y->type) return false;
            if (!vals.insert(ge).second) return false;
        }
        return true;
    }

    bool assign_node(size_t idx) {
        if (idx == pending_nodes_.size()) return assign_edge(0);
        const Node& n = a_.node_or_throw(pending_nodes_[idx]);
        for (const Node& cand : g_.nodes) {
            if (cand.type != n.type || used_nodes_.count(cand.id)) continue;
            node_map_[n.id] = cand.id;
            used_nodes_.insert(cand.id);
            bool degree_ok = true;
            // Degree pruning: each A-edge with both endpoints placed needs a
            // distinct compatible G-edge; a cheap existence check suffices here,
            // the edge phase enforces injectivity.
            for (const Edge& e : a_.edges) {
                auto s = node_map_.find(e.src);
                auto t = node_map_.find(e.tgt);
                if (s == node_map_.end() || t == node_map_.end()) continue;
                bool found = false;
                for (const Edge& f : g_.edges)
                    if (f.type == e.type && f.src == s->second && f.tgt == t->second) {
                        found = true;
                        break;
                    }
                if (!found) {
                    degree_ok = false;
                    break;
                }
            }
            if (degree_ok && !assign_node(idx + 1)) return false;
            node_map_.erase(n.id);
            used_nodes_.erase(cand.id);
        }
        return true;
    }

    bool assign_edge(size_t idx) {
        if (idx == pending_edges_.size()) {
            // Validate seed edges against the final node placement.
            for (const Edge& e : a_.edges) {
                const Edge& img = g_.edge_or_throw(edge_map_.at(e.id));
                if (img.src != node_map_.at(e.src) || img.tgt != node_map_.at(e.tgt)) return true;
            }
            return (*sink_)(node_map_, edge_map_);
        }
        const Edge& e = a_.edge_or_throw(pending_edges_[idx]);
        const Id& ms = node_map_.at(e.src);
        const Id& mt = node_map_.at(e.tgt);
        for (const Edge& cand : g_.edges) {
            if (cand.type != e.type || cand.src != ms || cand.tgt != mt) continue;
            if (used_edges_.count(cand.id)) continue;
            edge_map_[e.id] = cand.id;
            used_edges_.insert(cand.id);
            if (!assign_edge(idx + 1)) return false;
            edge_map_.erase(e.id);
            used_edges_.erase(cand.id);
        }
        return true;
    }

    const TypedGraph& a_;
    const TypedGraph& g_;
    std::map<Id, Id> node_map_, edge_map_;
    std::set<Id> used_nodes_, used_edges_;
    std::vector<Id> pending_nodes_, pending_edges_;
    const std::function<bool(const std::map<Id, Id>&, const std::map<Id, Id>&)>* sink_ = nullptr;
};

inline void sort_canonical(std::vector<Morphism>& ms) {
    std::sort(ms.begin(), ms.end(), [](const Morphism& x, const Morphism& y) {
        if (x.node_map != y.node_map) return x.node_map < y.node_map;
        return x.edge_map < y.edge_map;
    });
}

}  // namespace detail

/// All injective typing-compatible morphisms A -> G extending the given seed
/// assignment, in canonical (lexicographic) order.
inline std::vector<Morphism> enumerate_morphisms_seeded(const TypedGraph& a, const TypedGraph& g,
                                                        const std::map<Id, Id>& seed_nodes,
                                                        const std::map<Id, Id>& seed_edges) {
    std::vector<Morphism> out;
    detail::Matcher matcher(a, g, seed_nodes, seed_edges);
    matcher.run([&](const std::map<Id, Id>& nm, const std::map<Id, Id>& em) {
        out.push_back(Morphism{a, g, nm, em});
        return true;
    });
    detail::sort_canonical(out);
    return out;
}

/// All injective typing-compatible morphisms A -> G, canonical order.
inline std::vector<Morphism> enumerate_morphisms(const TypedGraph& a, const TypedGraph& g) {
    return enumerate_morphisms_seeded(a, g, {}, {});
}

inline bool morphism_exists(const TypedGraph& a, const TypedGraph& g,
                            const std::map<Id, Id>& seed_nodes = {},
                            const std::map<Id, Id>& seed_edges = {}) {
    bool found = false;
    detail::Matcher matcher(a, g, seed_nodes, seed_edges);
    matcher.run([&](const std::map<Id, Id>&, const std::map<Id, Id>&) {
        found = true;
        return false;
    });
    return found;
}

/// All q: C -> G with q ∘ a = p for an inclusion a: A ⊆ C and p: A -> G.
inline std::vector<Morphism> enumerate_extensions(const Morphism& a, const Morphism& p) {
    if (!(a.dom == p.dom)) throw Error("enumerate_extensions: domains differ");
    if (!a.is_inclusion()) throw Error("enumerate_extensions: anchor is not an inclusion");
    std::map<Id, Id> seed_nodes, seed_edges;
    for (const Node& n : a.dom.nodes) seed_nodes[n.id] = p.at_node(n.id);
    for (const Edge& e : a.dom.edges) seed_edges[e.id] = p.at_edge(e.id);
    return enumerate_morphisms_seeded(a.cod, p.cod, seed_nodes, seed_edges);
}

// ---------------------------------------------------------------------------
// Isomorphism
// ---------------------------------------------------------------------------

/// Finds an isomorphism G -> H extending the seed, if any.
inline std::optional<Morphism> find_isomorphism_seeded(const TypedGraph& g, const TypedGraph& h,
                                                       const std::map<Id, Id>& seed_nodes,
                                                       const std::map<Id, Id>& seed_edges) {
    if (g.node_count() != h.node_count() || g.edge_count() != h.edge_count())
        return std::nullopt;
    std::optional<Morphism> result;
    detail::Matcher matcher(g, h, seed_nodes, seed_edges);
    matcher.run([&](const std::map<Id, Id>& nm, const std::map<Id, Id>& em) {
        result = Morphism{g, h, nm, em};
        return false;
    });
    return result;
}

inline bool isomorphic(const TypedGraph& g, const TypedGraph& h) {
    return find_isomorphism_seeded(g, h, {}, {}).has_value();
}

// ---------------------------------------------------------------------------
// Subgraph enumeration
// ---------------------------------------------------------------------------

/// All well-formed literal subgraphs B with A ⊆ B ⊂ C (strict at the top),
/// ordered by (|V|, |E|, id sequence). Requires A ⊂ C.
inline std::vector<TypedGraph> subgraphs_between(const TypedGraph& a, const TypedGraph& c) {
    if (!is_subgraph_of(a, c)) throw Error("subgraphs_between: A is not a subgraph of C");
    if (a == c) throw Error("subgraphs_between: inclusion A ⊂ C must be real");
    std::vector<Id> opt_nodes, opt_edges;
    for (const Node& n : c.nodes)
        if (!a.has_node(n.id)) opt_nodes.push_back(n.id);
    for (const Edge& e : c.edges)
        if (!a.has_edge(e.id)) opt_edges.push_back(e.id);

    std::vector<TypedGraph> out;
    const size_t nn = opt_nodes.size(), ne = opt_edges.size();
    for (size_t nmask = 0; nmask < (size_t(1) << nn); ++nmask) {
        std::set<Id> keep_nodes = node_ids(a);
        for (size_t i = 0; i < nn; ++i)
            if (nmask & (size_t(1) << i)) keep_nodes.insert(opt_nodes[i]);
        for (size_t emask = 0; emask < (size_t(1) << ne); ++emask) {
            if (nmask + 1 == (size_t(1) << nn) && emask + 1 == (size_t(1) << ne)) continue;  // B = C
            std::set<Id> keep_edges = edge_ids(a);
            bool ok = true;
            for (size_t i = 0; i < ne && ok; ++i)
                if (emask & (size_t(1) << i)) {
                    const Edge& e = c.edge_or_throw(opt_edges[i]);
                    if (!keep_nodes.count(e.src) || !keep_nodes.count(e.tgt)) ok = false;
                    keep_edges.insert(e.id);
                }
            if (!ok) continue;
            out.push_back(restrict_to(c, keep_nodes, keep_edges));
        }
    }
    std::sort(out.begin(), out.end(), [](const TypedGraph& x, const TypedGraph& y) {
        if (x.node_count() != y.node_count()) return x.node_count() < y.node_count();
        if (x.edge_count() != y.edge_count()) return x.edge_count() < y.edge_count();
        return x < y;
    });
    return out;
}

}  // namespace graphmend
