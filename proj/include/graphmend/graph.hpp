#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace graphmend {

/// Graph item identifiers are opaque strings; all canonical orders are
/// lexicographic on ids.
using Id = std::string;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Type graphs
// ---------------------------------------------------------------------------

struct TypeNode {
    Id id;
    friend bool operator==(const TypeNode&, const TypeNode&) = default;
};

struct TypeEdge {
    Id id;
    Id src;
    Id tgt;
    bool containment = false;
    friend bool operator==(const TypeEdge&, const TypeEdge&) = default;
};

/// A type graph: node/edge types, a subset of containment edge types, and a
/// symmetric opposite-edge relation stored as ordered pairs.
struct TypeGraph {
    std::vector<TypeNode> nodes;                // sorted by id
    std::vector<TypeEdge> edges;                // sorted by id
    std::vector<std::pair<Id, Id>> opposites;   // symmetric closure, sorted

    void add_node(Id id) {
        insert_sorted(nodes, TypeNode{std::move(id)});
    }
    void add_edge(Id id, Id src, Id tgt, bool containment = false) {
        insert_sorted(edges, TypeEdge{std::move(id), std::move(src), std::move(tgt), containment});
    }
    /// Declares e1 and e2 as opposites; stores both directions.
    void add_opposite(const Id& e1, const Id& e2) {
        auto put = [this](const Id& a, const Id& b) {
            auto p = std::make_pair(a, b);
            auto it = std::lower_bound(opposites.begin(), opposites.end(), p);
            if (it == opposites.end() || *it != p) opposites.insert(it, p);
        };
        put(e1, e2);
        put(e2, e1);
    }

    bool has_node(const Id& id) const { return find_by_id(nodes, id) != nullptr; }
    const TypeEdge* edge(const Id& id) const { return find_by_id(edges, id); }
    bool is_containment(const Id& edge_type) const {
        const TypeEdge* e = edge(edge_type);
        return e != nullptr && e->containment;
    }
    std::optional<Id> opposite_of(const Id& edge_type) const {
        for (const auto& [a, b] : opposites)
            if (a == edge_type) return b;
        return std::nullopt;
    }

    friend bool operator==(const TypeGraph&, const TypeGraph&) = default;

    template <class T>
    static void insert_sorted(std::vector<T>& items, T item) {
        auto it = std::lower_bound(items.begin(), items.end(), item.id,
                                   [](const T& x, const Id& id) { return x.id < id; });
        if (it != items.end() && it->id == item.id)
            throw Error("duplicate id '" + item.id + "'");
        items.insert(it, std::move(item));
    }
    template <class T>
    static const T* find_by_id(const std::vector<T>& items, const Id& id) {
        auto it = std::lower_bound(items.begin(), items.end(), id,
                                   [](const T& x, const Id& i) { return x.id < i; });
        return (it != items.end() && it->id == id) ? &*it : nullptr;
    }
};

// ---------------------------------------------------------------------------
// Typed instance graphs
// ---------------------------------------------------------------------------

struct Node {
    Id id;
    Id type;
    friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
    Id id;
    Id type;
    Id src;
    Id tgt;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// A typed graph: every node and edge carries the id of its type. Values are
/// plain data, immutable by convention after construction, and compare by
/// literal ids.
struct TypedGraph {
    std::vector<Node> nodes;   // sorted by id
    std::vector<Edge> edges;   // sorted by id

    void add_node(Id id, Id type) {
        TypeGraph::insert_sorted(nodes, Node{std::move(id), std::move(type)});
    }
    void add_edge(Id id, Id type, Id src, Id tgt) {
        TypeGraph::insert_sorted(
            edges, Edge{std::move(id), std::move(type), std::move(src), std::move(tgt)});
    }

    bool has_node(const Id& id) const { return node(id) != nullptr; }
    bool has_edge(const Id& id) const { return edge(id) != nullptr; }
    const Node* node(const Id& id) const { return TypeGraph::find_by_id(nodes, id); }
    const Edge* edge(const Id& id) const { return TypeGraph::find_by_id(edges, id); }

    const Node& node_or_throw(const Id& id) const {
        const Node* n = node(id);
        if (!n) throw Error("unknown node '" + id + "'");
        return *n;
    }
    const Edge& edge_or_throw(const Id& id) const {
        const Edge* e = edge(id);
        if (!e) throw Error("unknown edge '" + id + "'");
        return *e;
    }

    size_t node_count() const { return nodes.size(); }
    size_t edge_count() const { return edges.size(); }
    bool empty() const { return nodes.empty() && edges.empty(); }

    bool contains_id(const Id& id) const { return has_node(id) || has_edge(id); }

    friend bool operator==(const TypedGraph&, const TypedGraph&) = default;
    friend bool operator<(const TypedGraph& a, const TypedGraph& b) {
        if (a.nodes != b.nodes) {
            return std::lexicographical_compare(
                a.nodes.begin(), a.nodes.end(), b.nodes.begin(), b.nodes.end(),
                [](const Node& x, const Node& y) { return std::tie(x.id, x.type) < std::tie(y.id, y.type); });
        }
        return std::lexicographical_compare(
            a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
            [](const Edge& x, const Edge& y) {
                return std::tie(x.id, x.type, x.src, x.tgt) < std::tie(y.id, y.type, y.src, y.tgt);
            });
    }
};

inline TypedGraph empty_graph() { return TypedGraph{}; }

/// Structural well-formedness: endpoints of every edge are present.
inline bool well_formed(const TypedGraph& g) {
    for (const Edge& e : g.edges)
        if (!g.has_node(e.src) || !g.has_node(e.tgt)) return false;
    return true;
}

/// sub is a literal subgraph of super (same ids, same types, same endpoints).
inline bool is_subgraph_of(const TypedGraph& sub, const TypedGraph& super) {
    for (const Node& n : sub.nodes) {
        const Node* m = super.node(n.id);
        if (!m || m->type != n.type) return false;
    }
    for (const Edge& e : sub.edges) {
        const Edge* f = super.edge(e.id);
        if (!f || *f != e) return false;
    }
    return true;
}

/// The literal subgraph of g on the given item ids. Throws if an edge keeps an
/// endpoint that is dropped.
inline TypedGraph restrict_to(const TypedGraph& g, const std::set<Id>& node_ids,
                              const std::set<Id>& edge_ids) {
    TypedGraph r;
    for (const Node& n : g.nodes)
        if (node_ids.count(n.id)) r.nodes.push_back(n);
    for (const Edge& e : g.edges)
        if (edge_ids.count(e.id)) {
            if (!node_ids.count(e.src) || !node_ids.count(e.tgt))
                throw Error("restriction drops endpoint of edge '" + e.id + "'");
            r.edges.push_back(e);
        }
    return r;
}

/// g minus the given items; edges incident to removed nodes must be removed too.
inline TypedGraph remove_items(const TypedGraph& g, const std::set<Id>& node_ids,
                               const std::set<Id>& edge_ids) {
    TypedGraph r;
    for (const Node& n : g.nodes)
        if (!node_ids.count(n.id)) r.nodes.push_back(n);
    for (const Edge& e : g.edges) {
        if (edge_ids.count(e.id)) continue;
        if (node_ids.count(e.src) || node_ids.count(e.tgt))
            throw Error("removal leaves dangling edge '" + e.id + "'");
        r.edges.push_back(e);
    }
    return r;
}

/// Union of two graphs; shared ids must denote identical items.
inline TypedGraph graph_union(const TypedGraph& a, const TypedGraph& b) {
    TypedGraph r = a;
    for (const Node& n : b.nodes) {
        const Node* m = r.node(n.id);
        if (m) {
            if (*m != n) throw Error("conflicting node '" + n.id + "' in union");
        } else {
            TypeGraph::insert_sorted(r.nodes, n);
        }
    }
    for (const Edge& e : b.edges) {
        const Edge* f = r.edge(e.id);
        if (f) {
            if (*f != e) throw Error("conflicting edge '" + e.id + "' in union");
        } else {
            TypeGraph::insert_sorted(r.edges, e);
        }
    }
    return r;
}

inline std::set<Id> node_ids(const TypedGraph& g) {
    std::set<Id> s;
    for (const Node& n : g.nodes) s.insert(n.id);
    return s;
}
inline std::set<Id> edge_ids(const TypedGraph& g) {
    std::set<Id> s;
    for (const Edge& e : g.edges) s.insert(e.id);
    return s;
}
inline std::set<Id> all_ids(const TypedGraph& g) {
    std::set<Id> s = node_ids(g);
    for (const Edge& e : g.edges) s.insert(e.id);
    return s;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
    std::string property;    // which invariant failed
    std::string detail;
    std::vector<Id> items;   // offending ids
};

/// Checks the four opposite-relation properties and containment ⊆ edges.
inline std::vector<Violation> validate_type_graph(const TypeGraph& tg) {
    std::vector<Violation> out;
    for (const TypeEdge& e : tg.edges) {
        if (!tg.has_node(e.src) || !tg.has_node(e.tgt))
            out.push_back({"well-formed", "edge endpoint missing", {e.id}});
    }
    std::set<std::pair<Id, Id>> rel(tg.opposites.begin(), tg.opposites.end());
    for (const auto& [a, b] : rel) {
        if (!tg.edge(a) || !tg.edge(b)) {
            out.push_back({"opposite-edges", "opposite pair names unknown edge", {a, b}});
            continue;
        }
        if (a == b) out.push_back({"anti-reflexive", "edge opposite to itself", {a}});
        if (!rel.count({b, a}))
            out.push_back({"symmetric", "missing reverse pair", {a, b}});
        const TypeEdge& ea = *tg.edge(a);
        const TypeEdge& eb = *tg.edge(b);
        if (a != b && (ea.src != eb.tgt || ea.tgt != eb.src))
            out.push_back({"opposite-directed", "sources/targets do not swap", {a, b}});
    }
    std::map<Id, std::set<Id>> partners;
    for (const auto& [a, b] : rel) partners[a].insert(b);
    for (const auto& [a, bs] : partners)
        if (bs.size() > 1)
            out.push_back({"functional", "edge has several opposites",
                           std::vector<Id>(bs.begin(), bs.end())});
    return out;
}

/// Checks that the typing of g is a graph morphism into tg.
inline std::vector<Violation> validate_typed_graph(const TypedGraph& g, const TypeGraph& tg) {
    std::vector<Violation> out;
    for (const Node& n : g.nodes)
        if (!tg.has_node(n.type))
            out.push_back({"node-type", "unknown node type '" + n.type + "'", {n.id}});
    for (const Edge& e : g.edges) {
        const TypeEdge* te = tg.edge(e.type);
        if (!te) {
            out.push_back({"edge-type", "unknown edge type '" + e.type + "'", {e.id}});
            continue;
        }
        const Node* s = g.node(e.src);
        const Node* t = g.node(e.tgt);
        if (!s || !t) {
            out.push_back({"well-formed", "edge endpoint missing", {e.id}});
            continue;
        }
        if (s->type != te->src)
            out.push_back({"src-mismatch",
                           "edge typed '" + e.type + "' needs source type '" + te->src + "'",
                           {e.id, e.src}});
        if (t->type != te->tgt)
            out.push_back({"tgt-mismatch",
                           "edge typed '" + e.type + "' needs target type '" + te->tgt + "'",
                           {e.id, e.tgt}});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Containment relation
// ---------------------------------------------------------------------------

/// Transitive closure of the direct containment relation on nodes: (v1,v2) is
/// in the result iff a nonempty path of containment-typed edges leads v1 to v2.
inline std::set<std::pair<Id, Id>> containment_pairs(const TypedGraph& g, const TypeGraph& tg) {
    std::set<std::pair<Id, Id>> rel;
    for (const Edge& e : g.edges)
        if (tg.is_containment(e.type)) rel.insert({e.src, e.tgt});
    // Warshall on the (small) node set.
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::pair<Id, Id>> add;
        for (const auto& [a, b] : rel)
            for (const auto& [c, d] : rel)
                if (b == c && !rel.count({a, d})) add.insert({a, d});
        if (!add.empty()) {
            rel.insert(add.begin(), add.end());
            changed = true;
        }
    }
    return rel;
}

}  // namespace graphmend
