#pragma once

#include "graphmend/repair.hpp"

namespace graphmend {

// ---------------------------------------------------------------------------
// EMFk constraint schemas
// ---------------------------------------------------------------------------

enum class SchemaTag { OneContainer, NoCycle, NoParallel, AllOpposites };

inline const char* schema_tag_name(SchemaTag t) {
    switch (t) {
        case SchemaTag::OneContainer: return "one-container";
        case SchemaTag::NoCycle: return "no-cycle";
        case SchemaTag::NoParallel: return "no-parallel";
        case SchemaTag::AllOpposites: return "all-opposites";
    }
    return "?";
}

struct EmfkInstance {
    SchemaTag tag;
    std::string label;
    ConditionPtr constraint;
};

struct EmfkConstraintSet {
    int k = 1;
    std::vector<EmfkInstance> instances;
};

namespace detail {

/// Instances of the one-container schema for a pair of containment edge types
/// sharing a target type: the pictured two-container shape plus the typing-
/// consistent node identifications (shared source, loops). Same-type parallel
/// shapes are left to the no-parallel schema.
inline void one_container_instances(const TypeGraph& tg, const TypeEdge& c1, const TypeEdge& c2,
                                    std::vector<EmfkInstance>& out) {
    const bool same_type = c1.id == c2.id;
    const Id target_type = c1.tgt;
    auto emit = [&](const std::string& variant, const std::function<void(TypedGraph&)>& build) {
        TypedGraph g;
        build(g);
        if (!validate_typed_graph(g, tg).empty()) return;
        out.push_back({SchemaTag::OneContainer,
                       "one-container(" + c1.id + "," + c2.id + ")" + variant,
                       nexists(empty_graph(), g)});
    };
    emit("", [&](TypedGraph& g) {  // s1 -> t <- s2
        g.add_node("s1", c1.src);
        g.add_node("s2", c2.src);
        g.add_node("t", target_type);
        g.add_edge("x1", c1.id, "s1", "t");
        g.add_edge("x2", c2.id, "s2", "t");
    });
    if (!same_type && c1.src == c2.src)
        emit("/shared-source", [&](TypedGraph& g) {  // s -> t with both types
            g.add_node("s", c1.src);
            g.add_node("t", target_type);
            g.add_edge("x1", c1.id, "s", "t");
            g.add_edge("x2", c2.id, "s", "t");
        });
    if (c1.src == target_type)
        emit("/self-container-1", [&](TypedGraph& g) {  // loop on t plus s2 -> t
            g.add_node("t", target_type);
            g.add_node("s2", c2.src);
            g.add_edge("x1", c1.id, "t", "t");
            g.add_edge("x2", c2.id, "s2", "t");
        });
    if (!same_type && c2.src == target_type)
        emit("/self-container-2", [&](TypedGraph& g) {
            g.add_node("t", target_type);
            g.add_node("s1", c1.src);
            g.add_edge("x1", c1.id, "s1", "t");
            g.add_edge("x2", c2.id, "t", "t");
        });
    if (!same_type && c1.src == target_type && c2.src == target_type)
        emit("/both-loops", [&](TypedGraph& g) {
            g.add_node("t", target_type);
            g.add_edge("x1", c1.id, "t", "t");
            g.add_edge("x2", c2.id, "t", "t");
        });
}

/// Type-consistent containment cycles: closed walks of length 1..k in the
/// containment part of the type graph, up to rotation and isomorphism of the
/// induced instance graph.
inline void no_cycle_instances(const TypeGraph& tg, int k, std::vector<EmfkInstance>& out) {
    std::vector<const TypeEdge*> cont;
    for (const TypeEdge& e : tg.edges)
        if (e.containment) cont.push_back(&e);
    std::vector<TypedGraph> seen;
    std::vector<const TypeEdge*> walk;
    std::function<void(int)> rec = [&](int len) {
        if (!walk.empty() && walk.back()->tgt == walk.front()->src) {
            // canonical rotation check: only emit the lexicographically least
            std::vector<Id> ids;
            for (const auto* e : walk) ids.push_back(e->id);
            bool least = true;
            for (size_t r = 1; r < ids.size() && least; ++r) {
                std::vector<Id> rot(ids.begin() + r, ids.end());
                rot.insert(rot.end(), ids.begin(), ids.begin() + r);
                if (rot < ids) least = false;
            }
            if (least) {
                TypedGraph g;
                size_t n = walk.size();
                for (size_t i = 0; i < n; ++i)
                    g.add_node("v" + std::to_string(i + 1), walk[i]->src);
                for (size_t i = 0; i < n; ++i)
                    g.add_edge("c" + std::to_string(i + 1), walk[i]->id, "v" + std::to_string(i + 1),
                               "v" + std::to_string((i + 1) % n + 1));
                bool dup = false;
                for (const TypedGraph& s : seen)
                    if (s.node_count() == g.node_count() && s.edge_count() == g.edge_count() &&
                        isomorphic(s, g)) {
                        dup = true;
                        break;
                    }
                if (!dup) {
                    seen.push_back(g);
                    std::string label = "no-cycle(";
                    for (size_t i = 0; i < n; ++i) label += (i ? "." : "") + walk[i]->id;
                    out.push_back({SchemaTag::NoCycle, label + ")", nexists(empty_graph(), g)});
                }
            }
        }
        if (len == k) return;
        for (const TypeEdge* e : cont) {
            if (!walk.empty() && walk.back()->tgt != e->src) continue;
            walk.push_back(e);
            rec(len + 1);
            walk.pop_back();
        }
    };
    rec(0);
}

}  // namespace detail

/// Instantiates the four EMFk constraint schemas over a type graph. Tags 1-3
/// produce negative constraints, tag 4 universal ones.
inline EmfkConstraintSet generate_emfk(const TypeGraph& tg, int k) {
    if (k < 1) throw Error("generate_emfk: k must be positive");
    EmfkConstraintSet set;
    set.k = k;

    // 1. At most one container.
    std::vector<const TypeEdge*> cont;
    for (const TypeEdge& e : tg.edges)
        if (e.containment) cont.push_back(&e);
    for (size_t i = 0; i < cont.size(); ++i)
        for (size_t j = i; j < cont.size(); ++j)
            if (cont[i]->tgt == cont[j]->tgt)
                detail::one_container_instances(tg, *cont[i], *cont[j], set.instances);

    // 2. No containment cycle of length ≤ k.
    detail::no_cycle_instances(tg, k, set.instances);

    // 3. No parallel edges of one type.
    for (const TypeEdge& e : tg.edges) {
        {
            TypedGraph g;
            g.add_node("a", e.src);
            if (e.src != e.tgt) g.add_node("b", e.tgt);
            Id b = e.src == e.tgt ? "a" : "b";
            g.add_edge("x1", e.id, "a", b);
            g.add_edge("x2", e.id, "a", b);
            set.instances.push_back({SchemaTag::NoParallel, "no-parallel(" + e.id + ")",
                                     nexists(empty_graph(), g)});
        }
        if (e.src == e.tgt) {
            // distinct endpoints are a separate shape for loop-capable types
            TypedGraph g;
            g.add_node("a", e.src);
            g.add_node("b", e.tgt);
            g.add_edge("x1", e.id, "a", "b");
            g.add_edge("x2", e.id, "a", "b");
            set.instances.push_back({SchemaTag::NoParallel, "no-parallel(" + e.id + ")/distinct",
                                     nexists(empty_graph(), g)});
        }
    }

    // 4. All opposite edges.
    for (const auto& [e1_id, e2_id] : tg.opposites) {
        const TypeEdge* e1 = tg.edge(e1_id);
        const TypeEdge* e2 = tg.edge(e2_id);
        if (!e1 || !e2) continue;
        TypedGraph a;
        a.add_node("a", e1->src);
        if (e1->src != e1->tgt) a.add_node("b", e1->tgt);
        Id b = e1->src == e1->tgt ? "a" : "b";
        a.add_edge("x", e1->id, "a", b);
        TypedGraph c = a;
        c.add_edge("y", e2->id, b, "a");
        set.instances.push_back({SchemaTag::AllOpposites,
                                 "all-opposites(" + e1->id + "->" + e2->id + ")",
                                 forall(empty_graph(), a, exists_some(a, c))});
    }
    return set;
}

// ---------------------------------------------------------------------------
// EMF model graph check (set-theoretic, full acyclicity)
// ---------------------------------------------------------------------------

/// Evaluates the four EMF model graph conditions directly; violations carry
/// witness ids. Condition 2 uses the transitive containment relation, not the
/// k-bounded approximation.
inline std::vector<Violation> emf_violations(const TypedGraph& g, const TypeGraph& tg) {
    std::vector<Violation> out;
    // 1. At most one container.
    std::vector<const Edge*> cont;
    for (const Edge& e : g.edges)
        if (tg.is_containment(e.type)) cont.push_back(&e);
    for (size_t i = 0; i < cont.size(); ++i)
        for (size_t j = i + 1; j < cont.size(); ++j)
            if (cont[i]->tgt == cont[j]->tgt)
                out.push_back({"emf-1-one-container",
                               "node has two containment edges",
                               {cont[i]->tgt, cont[i]->id, cont[j]->id}});
    // 2. No containment cycle.
    for (const auto& [v, w] : containment_pairs(g, tg))
        if (v == w) out.push_back({"emf-2-no-containment-cycle", "node contains itself", {v}});
    // 3. No parallel edges.
    for (size_t i = 0; i < g.edges.size(); ++i)
        for (size_t j = i + 1; j < g.edges.size(); ++j) {
            const Edge& a = g.edges[i];
            const Edge& b = g.edges[j];
            if (a.type == b.type && a.src == b.src && a.tgt == b.tgt)
                out.push_back({"emf-3-no-parallel-edges",
                               "parallel edges of type '" + a.type + "'",
                               {a.id, b.id}});
        }
    // 4. All opposite edges.
    for (const Edge& e : g.edges) {
        std::optional<Id> opp = tg.opposite_of(e.type);
        if (!opp) continue;
        bool found = false;
        for (const Edge& f : g.edges)
            if (f.type == *opp && f.src == e.tgt && f.tgt == e.src) {
                found = true;
                break;
            }
        if (!found)
            out.push_back({"emf-4-all-opposites",
                           "edge of type '" + e.type + "' lacks its reverse '" + *opp + "' edge",
                           {e.id}});
    }
    return out;
}

inline bool is_emf_model_graph(const TypedGraph& g, const TypeGraph& tg) {
    return emf_violations(g, tg).empty();
}

// ---------------------------------------------------------------------------
// EMFk repair and completion programs
// ---------------------------------------------------------------------------

/// Model repair program for ⟨emfk1, emfk2⟩: negatives first (any order is
/// preserving), then the universal instances wrapped to preserve all
/// negatives, with the destructive fallback.
inline RepairPlan emfk_repair_program(const TypeGraph& tg,
                                      const std::vector<EmfkInstance>& emfk1,
                                      const std::vector<EmfkInstance>& emfk2) {
    for (const EmfkInstance& inst : emfk1)
        if (!is_negative_basic(inst.constraint))
            throw Error("emfk_repair_program: emfk1 instance not negative: " + inst.label);
    std::vector<ConditionPtr> negatives, universals;
    for (const EmfkInstance& inst : emfk1) negatives.push_back(inst.constraint);
    for (const EmfkInstance& inst : emfk2) {
        if (is_negative_basic(inst.constraint))
            negatives.push_back(inst.constraint);
        else if (classify(inst.constraint).universal)
            universals.push_back(inst.constraint);
        else
            throw Error("emfk_repair_program: emfk2 instance neither negative nor universal: " +
                        inst.label);
    }
    if (negatives.empty() && universals.empty()) {
        RepairPlan plan;
        plan.condition = truth(empty_graph());
        plan.program = skip(empty_graph());
        plan.guarantees = {true, true, false, false, true};
        plan.provenance.push_back("empty EMFk instance set: Skip");
        return plan;
    }

    SynthesisOptions opts;
    opts.type_graph = &tg;
    Sequentialization s;
    s.kind = SeqKind::MixedCase3;
    s.split = negatives.size();
    for (const ConditionPtr& c : negatives) {
        s.conditions.push_back(c);
        s.plans.push_back(synthesize_proper(c, opts));
    }
    // Tag-4 order: type graph declaration order. Opposite-edge instances are
    // mutually preserving (O is functional), so any order works.
    for (const ConditionPtr& c : universals) {
        s.conditions.push_back(c);
        s.plans.push_back(synthesize_proper(c, opts));
    }
    RepairPlan plan = compose_conjunction(s);
    plan.provenance.push_back("EMFk model repair: negatives then preserving universals");
    return plan;
}

/// True iff no rule of the plan creates or deletes nodes.
inline bool node_count_invariant_check(const RepairPlan& plan) {
    for (const auto& [rule, spo] : collect_rules(plan.program)) {
        if (!(rule.plain.left.nodes == rule.plain.mid.nodes)) return false;
        if (!(rule.plain.right.nodes == rule.plain.mid.nodes)) return false;
    }
    return true;
}

struct CompletionOutcome {
    TypedGraph result;
    RepairPlan plan;
    EmfkConstraintSet constraints;
    ExecStats stats;
    bool node_count_preserved = true;
};

/// EMF model completion: instantiates the full EMFk set with k = |V_G| and
/// executes the completion program; for graphs whose node count the program
/// preserves, the result is an EMF model graph.
inline CompletionOutcome emf_complete_outcome(const TypedGraph& g, const TypeGraph& tg,
                                              const ExecOptions& opts = {}) {
    CompletionOutcome out;
    int k = std::max<int>(1, static_cast<int>(g.node_count()));
    out.constraints = generate_emfk(tg, k);
    out.plan = emfk_repair_program(tg, {}, out.constraints.instances);
    out.node_count_preserved = node_count_invariant_check(out.plan);
    ExecOutcome run = execute(out.plan.program, locate(g), opts);
    out.result = run.result.graph;
    out.stats = run.stats;
    return out;
}

inline TypedGraph emf_complete(const TypedGraph& g, const TypeGraph& tg,
                               const ExecOptions& opts = {}) {
    return emf_complete_outcome(g, tg, opts).result;
}

}  // namespace graphmend
