#pragma once

#include <functional>
#include <memory>
#include <sstream>

#include "graphmend/morphism.hpp"

namespace graphmend {

// ---------------------------------------------------------------------------
// Nested typed graph conditions
// ---------------------------------------------------------------------------

enum class CKind { True, Exists, Not, And, Or };

struct Condition;
using ConditionPtr = std::shared_ptr<const Condition>;

/// Nested condition over an anchor graph A:
///   true | ∃(A ⊂ C, c) | ¬c | ∧ c_i | ∨ c_i
/// Exists anchors are real (strict) literal inclusions; And/Or children share
/// the parent anchor. A condition over the empty graph is a constraint.
struct Condition {
    CKind kind;
    TypedGraph anchor;
    TypedGraph extension;               // Exists: the codomain C of the anchor inclusion
    ConditionPtr sub;                   // Exists, Not
    std::vector<ConditionPtr> subs;     // And, Or
};

inline ConditionPtr truth(TypedGraph anchor) {
    auto c = std::make_shared<Condition>();
    c->kind = CKind::True;
    c->anchor = std::move(anchor);
    return c;
}

inline bool is_true(const ConditionPtr& c) { return c->kind == CKind::True; }
inline bool is_false(const ConditionPtr& c) {
    return c->kind == CKind::Not && is_true(c->sub);
}

inline bool cond_equal(const ConditionPtr& a, const ConditionPtr& b) {
    if (a == b) return true;
    if (a->kind != b->kind || !(a->anchor == b->anchor)) return false;
    switch (a->kind) {
        case CKind::True: return true;
        case CKind::Exists:
            return a->extension == b->extension && cond_equal(a->sub, b->sub);
        case CKind::Not: return cond_equal(a->sub, b->sub);
        case CKind::And:
        case CKind::Or: {
            if (a->subs.size() != b->subs.size()) return false;
            for (size_t i = 0; i < a->subs.size(); ++i)
                if (!cond_equal(a->subs[i], b->subs[i])) return false;
            return true;
        }
    }
    return false;
}

ConditionPtr conj(const TypedGraph& anchor, std::vector<ConditionPtr> children);
ConditionPtr disj(const TypedGraph& anchor, std::vector<ConditionPtr> children);

inline ConditionPtr neg(const ConditionPtr& c) {
    if (c->kind == CKind::Not) return c->sub;  // ¬¬c ≡ c
    if (c->kind == CKind::Or) {                // ¬(∨ c_i) ≡ ∧ ¬c_i
        std::vector<ConditionPtr> negs;
        for (const auto& s : c->subs) negs.push_back(neg(s));
        return conj(c->anchor, std::move(negs));
    }
    auto n = std::make_shared<Condition>();
    n->kind = CKind::Not;
    n->anchor = c->anchor;
    n->sub = c;
    return n;
}

inline ConditionPtr falsity(const TypedGraph& anchor) { return neg(truth(anchor)); }

/// ∃(a: A ⊂ C, sub). A = C is normalized away (∃(id, c) ≡ c); a non-subgraph
/// extension is an error.
inline ConditionPtr exists(const TypedGraph& a, const TypedGraph& c, const ConditionPtr& sub) {
    if (!is_subgraph_of(a, c)) throw Error("exists: anchor is not a subgraph of the extension");
    if (!(sub->anchor == c)) throw Error("exists: subcondition anchored at the wrong graph");
    if (a == c) return sub;
    auto e = std::make_shared<Condition>();
    e->kind = CKind::Exists;
    e->anchor = a;
    e->extension = c;
    e->sub = sub;
    return e;
}

inline ConditionPtr exists_some(const TypedGraph& a, const TypedGraph& c) {
    return exists(a, c, truth(c));
}
inline ConditionPtr nexists(const TypedGraph& a, const TypedGraph& c) {
    return neg(exists_some(a, c));
}
inline ConditionPtr forall(const TypedGraph& a, const TypedGraph& c, const ConditionPtr& sub) {
    if (a == c) return sub;
    return neg(exists(a, c, neg(sub)));
}
inline ConditionPtr implies(const ConditionPtr& lhs, const ConditionPtr& rhs) {
    return disj(lhs->anchor, {neg(lhs), rhs});
}

// Detection of the derived compact forms.
struct CondView {
    enum Shape { True, False, Exists, Forall, NotExists, Other } shape;
    ConditionPtr body;  // for Exists / Forall / NotExists
};

inline CondView view(const ConditionPtr& c) {
    switch (c->kind) {
        case CKind::True: return {CondView::True, nullptr};
        case CKind::Exists: return {CondView::Exists, c->sub};
        case CKind::Not:
            if (is_true(c->sub)) return {CondView::False, nullptr};
            if (c->sub->kind == CKind::Exists) {
                const ConditionPtr& inner = c->sub->sub;
                if (inner->kind == CKind::Not) return {CondView::Forall, inner->sub};
                return {CondView::NotExists, inner};
            }
            return {CondView::Other, nullptr};
        default: return {CondView::Other, nullptr};
    }
}

/// The quantifier inclusion of an Exists / Forall / NotExists shape.
inline std::pair<const TypedGraph*, const TypedGraph*> quantifier_span(const ConditionPtr& c) {
    const Condition* e = (c->kind == CKind::Exists) ? c.get() : c->sub.get();
    return {&e->anchor, &e->extension};
}

inline bool is_negative_basic(const ConditionPtr& c) {
    CondView v = view(c);
    return v.shape == CondView::NotExists && is_true(v.body);
}
inline bool is_positive_basic(const ConditionPtr& c) {
    CondView v = view(c);
    return v.shape == CondView::Exists && is_true(v.body);
}

namespace detail {

/// True iff there is an injective morphism x -> y fixing the shared anchor
/// pointwise; then ∄x implies ∄y.
inline bool negative_subsumes(const TypedGraph& anchor, const TypedGraph& x, const TypedGraph& y) {
    std::map<Id, Id> seed_nodes, seed_edges;
    for (const Node& n : anchor.nodes) seed_nodes[n.id] = n.id;
    for (const Edge& e : anchor.edges) seed_edges[e.id] = e.id;
    return morphism_exists(x, y, seed_nodes, seed_edges);
}

}  // namespace detail

/// ∧ with the usual unit rules: flattens nested conjunctions, drops true,
/// collapses to false on a false child, removes duplicates, and prunes
/// negative-basic conjuncts subsumed by a stronger one.
inline ConditionPtr conj(const TypedGraph& anchor, std::vector<ConditionPtr> children) {
    std::vector<ConditionPtr> flat;
    for (auto& c : children) {
        if (!(c->anchor == anchor)) throw Error("conj: child anchored at the wrong graph");
        if (is_true(c)) continue;
        if (is_false(c)) return falsity(anchor);
        if (c->kind == CKind::And)
            flat.insert(flat.end(), c->subs.begin(), c->subs.end());
        else
            flat.push_back(c);
    }
    std::vector<ConditionPtr> kept;
    for (const auto& c : flat) {
        bool drop = false;
        for (const auto& k : kept)
            if (cond_equal(k, c)) {
                drop = true;
                break;
            }
        if (drop) continue;
        if (is_negative_basic(c)) {
            const TypedGraph& x = c->sub->extension;
            for (auto it = kept.begin(); !drop && it != kept.end();) {
                if (is_negative_basic(*it)) {
                    const TypedGraph& y = (*it)->sub->extension;
                    if (detail::negative_subsumes(anchor, y, x)) {
                        drop = true;  // an existing conjunct is at least as strong
                        break;
                    }
                    if (detail::negative_subsumes(anchor, x, y)) {
                        it = kept.erase(it);
                        continue;
                    }
                }
                ++it;
            }
        }
        if (!drop) kept.push_back(c);
    }
    if (kept.empty()) return truth(anchor);
    if (kept.size() == 1) return kept.front();
    auto a = std::make_shared<Condition>();
    a->kind = CKind::And;
    a->anchor = anchor;
    a->subs = std::move(kept);
    return a;
}

/// ∨ with unit rules; the empty disjunction is false.
inline ConditionPtr disj(const TypedGraph& anchor, std::vector<ConditionPtr> children) {
    std::vector<ConditionPtr> flat;
    for (auto& c : children) {
        if (!(c->anchor == anchor)) throw Error("disj: child anchored at the wrong graph");
        if (is_true(c)) return truth(anchor);
        if (is_false(c)) continue;
        if (c->kind == CKind::Or)
            flat.insert(flat.end(), c->subs.begin(), c->subs.end());
        else
            flat.push_back(c);
    }
    std::vector<ConditionPtr> kept;
    for (const auto& c : flat) {
        bool dup = false;
        for (const auto& k : kept)
            if (cond_equal(k, c)) {
                dup = true;
                break;
            }
        if (!dup) kept.push_back(c);
    }
    if (kept.empty()) return falsity(anchor);
    if (kept.size() == 1) return kept.front();
    auto o = std::make_shared<Condition>();
    o->kind = CKind::Or;
    o->anchor = anchor;
    o->subs = std::move(kept);
    return o;
}

// ---------------------------------------------------------------------------
// Satisfaction
// ---------------------------------------------------------------------------

/// p ⊨ c for p: A ↪ G and c over A.
inline bool satisfies(const Morphism& p, const ConditionPtr& c) {
    if (!(p.dom == c->anchor)) throw Error("satisfies: morphism domain differs from anchor");
    switch (c->kind) {
        case CKind::True: return true;
        case CKind::Exists: {
            Morphism a = inclusion(c->anchor, c->extension);
            for (const Morphism& q : enumerate_extensions(a, p))
                if (satisfies(q, c->sub)) return true;
            return false;
        }
        case CKind::Not: return !satisfies(p, c->sub);
        case CKind::And:
            for (const auto& s : c->subs)
                if (!satisfies(p, s)) return false;
            return true;
        case CKind::Or:
            for (const auto& s : c->subs)
                if (satisfies(p, s)) return true;
            return false;
    }
    return false;
}

/// G ⊨ c for a constraint c (condition over the empty graph).
inline bool satisfies_constraint(const TypedGraph& g, const ConditionPtr& c) {
    if (!c->anchor.empty()) throw Error("satisfies_constraint: condition is not a constraint");
    return satisfies(Morphism{empty_graph(), g, {}, {}}, c);
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

struct ConditionClass {
    bool basic = false;
    bool positive = false;      // ∃a
    bool negative = false;      // ∄a
    bool existential = false;   // proper ∃(a,c) ending with true
    bool universal = false;     // proper ∀(a,c) ending with true
    bool proper = false;
    bool generalized_proper = false;
    bool legit = false;
};

/// Supplied by repair synthesis: whether a repair program is available for a
/// subcondition (used for the generalized-proper test).
using RepairablePredicate = std::function<bool(const ConditionPtr&)>;

namespace detail {

inline bool ends_true_after_exists(const ConditionPtr& c);
inline bool ends_true_after_forall(const ConditionPtr& c);

// Strictly alternating quantifiers ending with true.
inline bool ends_true_after_exists(const ConditionPtr& c) {
    CondView v = view(c);
    if (v.shape == CondView::True) return true;
    if (v.shape == CondView::Forall) return ends_true_after_forall(v.body);
    return false;
}
inline bool ends_true_after_forall(const ConditionPtr& c) {
    CondView v = view(c);
    if (v.shape == CondView::True) return true;
    if (v.shape == CondView::Exists) return ends_true_after_exists(v.body);
    return false;
}
inline bool alternating_ends_true(const ConditionPtr& c) {
    CondView v = view(c);
    if (v.shape == CondView::True) return true;
    if (v.shape == CondView::Exists) return ends_true_after_exists(v.body);
    if (v.shape == CondView::Forall) return ends_true_after_forall(v.body);
    return false;
}

inline bool is_proper(const ConditionPtr& c) {
    if (alternating_ends_true(c)) return true;
    if (is_negative_basic(c)) return true;
    CondView v = view(c);
    return v.shape == CondView::Exists && is_negative_basic(v.body);  // ∃(a, ∄b)
}

inline bool is_legit(const ConditionPtr& c, const RepairablePredicate& can_repair);

inline bool is_generalized_proper(const ConditionPtr& c, const RepairablePredicate& can_repair) {
    CondView v = view(c);
    if (v.shape != CondView::Exists && v.shape != CondView::Forall) return false;
    if (is_proper(c)) return false;  // already covered without substitution
    return can_repair ? can_repair(v.body) : is_legit(v.body, nullptr);
}

/// A syntactically recognizable sequentialization shape for a conjunction
/// (Repair II cases 1-3, with preservation to be established at synthesis
/// time).
inline bool conjunction_shape_ok(const std::vector<ConditionPtr>& subs,
                                 const RepairablePredicate& can_repair) {
    bool all_neg = true, all_pos = true, neg_univ = true, pos_exis_univ = true;
    for (const auto& s : subs) {
        bool n = is_negative_basic(s);
        bool p = is_positive_basic(s);
        CondView v = view(s);
        bool uni = v.shape == CondView::Forall && alternating_ends_true(s);
        bool exi = v.shape == CondView::Exists && alternating_ends_true(s);
        bool gen_uni = v.shape == CondView::Forall &&
                       (uni || is_generalized_proper(s, can_repair));
        bool gen_exi = v.shape == CondView::Exists &&
                       (exi || is_generalized_proper(s, can_repair));
        all_neg &= n;
        all_pos &= p;
        neg_univ &= (n || gen_uni);
        pos_exis_univ &= (p || gen_exi || gen_uni);
    }
    return all_neg || all_pos || neg_univ || pos_exis_univ;
}

inline bool is_legit(const ConditionPtr& c, const RepairablePredicate& can_repair) {
    if (is_proper(c)) return true;
    if (is_generalized_proper(c, can_repair)) return true;
    if (c->kind == CKind::And) {
        for (const auto& s : c->subs)
            if (!is_legit(s, can_repair)) return false;
        return conjunction_shape_ok(c->subs, can_repair);
    }
    if (c->kind == CKind::Or) {
        for (const auto& s : c->subs)
            if (is_legit(s, can_repair)) return true;
        return false;
    }
    return false;
}

}  // namespace detail

inline ConditionClass classify(const ConditionPtr& c,
                               const RepairablePredicate& can_repair = nullptr) {
    ConditionClass r;
    CondView v = view(c);
    r.positive = is_positive_basic(c);
    r.negative = is_negative_basic(c);
    r.basic = r.positive || r.negative;
    r.proper = detail::is_proper(c);
    r.existential = v.shape == CondView::Exists && detail::alternating_ends_true(c);
    r.universal = v.shape == CondView::Forall && detail::alternating_ends_true(c);
    r.generalized_proper = detail::is_generalized_proper(c, can_repair);
    r.legit = detail::is_legit(c, can_repair);
    return r;
}

// ---------------------------------------------------------------------------
// Renaming and fresh ids
// ---------------------------------------------------------------------------

/// Deterministic supply of unused ids. A hint is reused verbatim when free,
/// otherwise suffixed with ~2, ~3, ...
class FreshIds {
public:
    void reserve(const Id& id) { reserved_.insert(id); }
    void reserve(const TypedGraph& g) {
        for (const Node& n : g.nodes) reserved_.insert(n.id);
        for (const Edge& e : g.edges) reserved_.insert(e.id);
    }
    void reserve_condition(const ConditionPtr& c) {
        reserve(c->anchor);
        if (c->kind == CKind::Exists) reserve(c->extension);
        if (c->sub) reserve_condition(c->sub);
        for (const auto& s : c->subs) reserve_condition(s);
    }

    Id fresh(const Id& hint) {
        if (reserved_.insert(hint).second) return hint;
        for (int k = 2;; ++k) {
            Id cand = hint + "~" + std::to_string(k);
            if (reserved_.insert(cand).second) return cand;
        }
    }

    std::set<Id> snapshot() const { return reserved_; }
    void restore(std::set<Id> s) { reserved_ = std::move(s); }

private:
    std::set<Id> reserved_;
};

inline TypedGraph rename_graph(const TypedGraph& g, const std::map<Id, Id>& ren) {
    auto r = [&](const Id& id) {
        auto it = ren.find(id);
        return it == ren.end() ? id : it->second;
    };
    TypedGraph out;
    for (const Node& n : g.nodes) out.add_node(r(n.id), n.type);
    for (const Edge& e : g.edges) out.add_edge(r(e.id), e.type, r(e.src), r(e.tgt));
    return out;
}

inline ConditionPtr rename_condition(const ConditionPtr& c, const std::map<Id, Id>& ren) {
    TypedGraph anchor = rename_graph(c->anchor, ren);
    switch (c->kind) {
        case CKind::True: return truth(anchor);
        case CKind::Exists:
            return exists(anchor, rename_graph(c->extension, ren), rename_condition(c->sub, ren));
        case CKind::Not: return neg(rename_condition(c->sub, ren));
        case CKind::And:
        case CKind::Or: {
            std::vector<ConditionPtr> subs;
            for (const auto& s : c->subs) subs.push_back(rename_condition(s, ren));
            return c->kind == CKind::And ? conj(anchor, std::move(subs))
                                         : disj(anchor, std::move(subs));
        }
    }
    throw Error("rename_condition: bad kind");
}

/// Renames every quantifier-bound item (extension minus anchor, recursively)
/// to an id that is provably unused. Semantically a no-op.
inline ConditionPtr freshen_bound(const ConditionPtr& c, FreshIds& gen) {
    switch (c->kind) {
        case CKind::True: return c;
        case CKind::Exists: {
            std::map<Id, Id> ren;
            for (const Node& n : c->extension.nodes)
                if (!c->anchor.has_node(n.id)) ren[n.id] = gen.fresh(n.id);
            for (const Edge& e : c->extension.edges)
                if (!c->anchor.has_edge(e.id)) ren[e.id] = gen.fresh(e.id);
            TypedGraph ext = rename_graph(c->extension, ren);
            ConditionPtr sub = freshen_bound(rename_condition(c->sub, ren), gen);
            return exists(c->anchor, ext, sub);
        }
        case CKind::Not: return neg(freshen_bound(c->sub, gen));
        case CKind::And:
        case CKind::Or: {
            std::vector<ConditionPtr> subs;
            for (const auto& s : c->subs) subs.push_back(freshen_bound(s, gen));
            return c->kind == CKind::And ? conj(c->anchor, std::move(subs))
                                         : disj(c->anchor, std::move(subs));
        }
    }
    throw Error("freshen_bound: bad kind");
}

// ---------------------------------------------------------------------------
// Rendering (diagnostics)
// ---------------------------------------------------------------------------

inline std::string graph_sig(const TypedGraph& g) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const Node& n : g.nodes) {
        if (!first) os << " ";
        first = false;
        os << n.id << ":" << n.type;
    }
    for (const Edge& e : g.edges) {
        if (!first) os << " ";
        first = false;
        os << e.id << ":" << e.type << "(" << e.src << "->" << e.tgt << ")";
    }
    os << "}";
    return os.str();
}

inline std::string to_string(const ConditionPtr& c) {
    CondView v = view(c);
    switch (v.shape) {
        case CondView::True: return "true";
        case CondView::False: return "false";
        case CondView::Forall:
            return "A(" + graph_sig(c->sub->extension) + ", " + to_string(v.body) + ")";
        case CondView::NotExists:
            if (is_true(v.body)) return "!E(" + graph_sig(c->sub->extension) + ")";
            return "!E(" + graph_sig(c->sub->extension) + ", " + to_string(v.body) + ")";
        case CondView::Exists:
            if (is_true(v.body)) return "E(" + graph_sig(c->extension) + ")";
            return "E(" + graph_sig(c->extension) + ", " + to_string(v.body) + ")";
        default: break;
    }
    if (c->kind == CKind::Not) return "!" + to_string(c->sub);
    std::string sep = c->kind == CKind::And ? " & " : " | ";
    std::string out = "(";
    for (size_t i = 0; i < c->subs.size(); ++i) {
        if (i) out += sep;
        out += to_string(c->subs[i]);
    }
    return out + ")";
}

}  // namespace graphmend
