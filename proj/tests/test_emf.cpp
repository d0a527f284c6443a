#include <random>

#include <catch2/catch_amalgamated.hpp>
#include <graphmend/emf.hpp>
#include <graphmend/graphgen.hpp>

#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace graphmend;

namespace {

/// A type graph with a containment cycle at the type level: A contains B,
/// B contains A.
TypeGraph cyclic_tg() {
    TypeGraph tg;
    tg.add_node("A");
    tg.add_node("B");
    tg.add_edge("c1", "A", "B", true);
    tg.add_edge("c2", "B", "A", true);
    return tg;
}

}  // namespace

TEST_CASE("emfk constraint generation") {
    TypeGraph tg = fixtures::petri();
    EmfkConstraintSet set = generate_emfk(tg, 2);

    SECTION("tags 1-3 are negative, tag 4 universal") {
        for (const EmfkInstance& inst : set.instances) {
            ConditionClass k = classify(inst.constraint);
            INFO(inst.label);
            if (inst.tag == SchemaTag::AllOpposites)
                CHECK(k.universal);
            else
                CHECK(k.negative);
        }
    }
    SECTION("tag counts over the Petri type graph") {
        size_t one = 0, cyc = 0, par = 0, opp = 0;
        for (const EmfkInstance& inst : set.instances) switch (inst.tag) {
                case SchemaTag::OneContainer: ++one; break;
                case SchemaTag::NoCycle: ++cyc; break;
                case SchemaTag::NoParallel: ++par; break;
                case SchemaTag::AllOpposites: ++opp; break;
            }
        CHECK(one == 5);   // five containment types, each alone at its target
        CHECK(cyc == 0);   // the containment type graph is acyclic
        CHECK(par == 13);  // one per edge type
        CHECK(opp == 8);   // four opposite pairs, both directions
    }
    SECTION("tag-4 instance for the TPArc src edge") {
        bool found = false;
        for (const EmfkInstance& inst : set.instances)
            if (inst.label == "all-opposites(tp_src->tr_out)") found = true;
        CHECK(found);
    }
    SECTION("tag-3 instance for tok matches the parallel-edge constraint") {
        for (const EmfkInstance& inst : set.instances)
            if (inst.label == "no-parallel(tok)") {
                for (const TypedGraph& g :
                     enumerate_typed_graphs(fixtures::petri_small(), {3, 3}))
                    CHECK(satisfies_constraint(g, inst.constraint) ==
                          satisfies_constraint(g, fixtures::no_parallel_tok()));
            }
    }
    SECTION("no containment, no tag 1-2 instances") {
        TypeGraph flat;
        flat.add_node("X");
        flat.add_edge("e", "X", "X");
        EmfkConstraintSet s = generate_emfk(flat, 3);
        for (const EmfkInstance& inst : s.instances) {
            CHECK(inst.tag != SchemaTag::OneContainer);
            CHECK(inst.tag != SchemaTag::NoCycle);
        }
    }
    SECTION("cycle instances for a cyclic containment type graph") {
        EmfkConstraintSet s = generate_emfk(cyclic_tg(), 3);
        size_t cycles = 0;
        for (const EmfkInstance& inst : s.instances)
            if (inst.tag == SchemaTag::NoCycle) ++cycles;
        CHECK(cycles == 1);  // only the A-B-A two-cycle fits the typing with k=3
    }
}

TEST_CASE("emf model graph check") {
    TypeGraph tg = fixtures::petri();
    SECTION("empty graph is a model graph") { CHECK(is_emf_model_graph(empty_graph(), tg)); }
    SECTION("two containers violate condition 1") {
        auto v = emf_violations(fixtures::two_container(), tg);
        REQUIRE_FALSE(v.empty());
        CHECK(v.front().property == "emf-1-one-container");
        CHECK(v.front().items.front() == "k");
    }
    SECTION("containment cycle violates condition 2") {
        TypedGraph g;
        g.add_node("a1", "A");
        g.add_node("b1", "B");
        g.add_edge("e1", "c1", "a1", "b1");
        g.add_edge("e2", "c2", "b1", "a1");
        bool cycle = false;
        for (const auto& v : emf_violations(g, cyclic_tg()))
            if (v.property == "emf-2-no-containment-cycle") cycle = true;
        CHECK(cycle);
    }
    SECTION("parallel edges violate condition 3") {
        bool par = false;
        for (const auto& v : emf_violations(fixtures::parallel_tok(2), tg))
            if (v.property == "emf-3-no-parallel-edges") par = true;
        CHECK(par);
    }
    SECTION("missing opposite violates condition 4") {
        TypedGraph g;
        g.add_node("a", "TPArc");
        g.add_node("t", "Tr");
        g.add_edge("s", "tp_src", "a", "t");
        bool opp = false;
        for (const auto& v : emf_violations(g, tg))
            if (v.property == "emf-4-all-opposites") opp = true;
        CHECK(opp);
        g.add_edge("o", "tr_out", "t", "a");
        CHECK(is_emf_model_graph(g, tg));
    }
}

TEST_CASE("bounded cycle constraints agree with full acyclicity at node size k") {
    TypeGraph tg = cyclic_tg();
    for (int k = 1; k <= 3; ++k) {
        EmfkConstraintSet set = generate_emfk(tg, k);
        std::vector<ConditionPtr> cycles;
        for (const EmfkInstance& inst : set.instances)
            if (inst.tag == SchemaTag::NoCycle) cycles.push_back(inst.constraint);
        ConditionPtr emfk_cycles = conj(empty_graph(), cycles);
        for (const TypedGraph& g : enumerate_typed_graphs(tg, {size_t(k), 3})) {
            bool acyclic = true;
            for (const auto& [v, w] : containment_pairs(g, tg))
                if (v == w) acyclic = false;
            INFO("k=" << k << " " << graph_sig(g));
            CHECK(satisfies_constraint(g, emfk_cycles) == acyclic);
        }
    }
}

TEST_CASE("emfk repair program") {
    TypeGraph tg = fixtures::petri();
    EmfkConstraintSet set = generate_emfk(tg, 2);

    SECTION("emfk2 empty gives the negative part only") {
        std::vector<EmfkInstance> negs;
        for (const EmfkInstance& i : set.instances)
            if (i.tag == SchemaTag::NoParallel) negs.push_back(i);
        RepairPlan plan = emfk_repair_program(tg, negs, {});
        CHECK(plan.guarantees.decreasing);
        ExecOutcome out = execute(plan.program, locate(fixtures::parallel_tok(3)), {3, 20000});
        CHECK(out.result.graph.edge_count() == 1);
    }
    SECTION("universal emfk1 is rejected") {
        std::vector<EmfkInstance> uni;
        for (const EmfkInstance& i : set.instances)
            if (i.tag == SchemaTag::AllOpposites) uni.push_back(i);
        CHECK_THROWS_AS(emfk_repair_program(tg, uni, {}), Error);
    }
    SECTION("repair of the conjunctive-example shape") {
        std::vector<EmfkInstance> emfk1, emfk2;
        for (const EmfkInstance& i : set.instances) {
            if (i.label == "no-parallel(tok)" || i.label == "one-container(tok,tok)")
                emfk1.push_back(i);
            if (i.label == "all-opposites(tp_src->tr_out)") emfk2.push_back(i);
        }
        REQUIRE(emfk1.size() == 2);
        REQUIRE(emfk2.size() == 1);
        RepairPlan plan = emfk_repair_program(tg, emfk1, emfk2);
        TypedGraph g = fixtures::two_container();
        g.add_node("arc", "TPArc");
        g.add_node("tr", "Tr");
        g.add_edge("s", "tp_src", "arc", "tr");
        ExecOutcome out = execute(plan.program, locate(g), {7, 20000});
        for (const EmfkInstance& i : emfk1)
            CHECK(satisfies_constraint(out.result.graph, i.constraint));
        for (const EmfkInstance& i : emfk2)
            CHECK(satisfies_constraint(out.result.graph, i.constraint));
    }
}

TEST_CASE("node count invariant") {
    TypeGraph tg = fixtures::petri();
    SECTION("edge-only plans pass") {
        SynthesisOptions opts;
        opts.type_graph = &tg;
        RepairPlan plan = synthesize_proper(fixtures::no_parallel_tok(), opts);
        CHECK(node_count_invariant_check(plan));
    }
    SECTION("node-adding plans fail") {
        SynthesisOptions opts;
        opts.type_graph = &tg;
        RepairPlan plan = synthesize_proper(fixtures::every_pl_has_tok(), opts);
        CHECK_FALSE(node_count_invariant_check(plan));  // rule 1 adds a Tk node
    }
    SECTION("the full completion plan preserves node counts") {
        EmfkConstraintSet set = generate_emfk(tg, 3);
        RepairPlan plan = emfk_repair_program(tg, {}, set.instances);
        CHECK(node_count_invariant_check(plan));
    }
}

TEST_CASE("emf completion") {
    TypeGraph tg = fixtures::petri();

    SECTION("empty graph completes to itself") {
        CHECK(emf_complete(empty_graph(), tg).empty());
    }
    SECTION("already a model graph: stability") {
        TypedGraph g;
        g.add_node("n", "PN");
        g.add_node("p", "Pl");
        g.add_node("k", "Tk");
        g.add_edge("e1", "places", "n", "p");
        g.add_edge("e2", "tok", "p", "k");
        REQUIRE(is_emf_model_graph(g, tg));
        TypedGraph done = emf_complete(g, tg, {5, 50000});
        CHECK(isomorphic(done, g));
    }
    SECTION("two containers and a missing opposite get repaired") {
        TypedGraph g = fixtures::two_container();
        g.add_node("arc", "PTArc");
        g.add_edge("s", "pt_src", "arc", "p1");
        CompletionOutcome out = emf_complete_outcome(g, tg, {11, 50000});
        CHECK(out.node_count_preserved);
        INFO(graph_sig(out.result));
        CHECK(is_emf_model_graph(out.result, tg));
        CHECK(out.result.node_count() == g.node_count());
    }
    SECTION("random graphs always complete to model graphs") {
        std::mt19937_64 rng(2024);
        for (int trial = 0; trial < 25; ++trial) {
            TypedGraph g = random_typed_graph(tg, rng, 4, 5);
            CompletionOutcome out = emf_complete_outcome(g, tg, {uint64_t(trial), 50000});
            INFO(graph_sig(g) << " -> " << graph_sig(out.result));
            CHECK(is_emf_model_graph(out.result, tg));
        }
    }
    SECTION("stability over an enumerated corpus of model graphs") {
        TypeGraph small = fixtures::petri_small();
        for (const TypedGraph& g : enumerate_typed_graphs(small, {3, 2})) {
            if (!is_emf_model_graph(g, small)) continue;
            TypedGraph done = emf_complete(g, small, {1, 50000});
            INFO(graph_sig(g));
            CHECK(isomorphic(done, g));
        }
    }
    SECTION("tag-4 plans compose in any order") {
        EmfkConstraintSet set = generate_emfk(tg, 2);
        std::vector<EmfkInstance> opp;
        for (const EmfkInstance& i : set.instances)
            if (i.tag == SchemaTag::AllOpposites) opp.push_back(i);
        std::mt19937_64 rng(5);
        for (int perm = 0; perm < 3; ++perm) {
            std::shuffle(opp.begin(), opp.end(), rng);
            RepairPlan plan = emfk_repair_program(tg, {}, opp);
            for (int trial = 0; trial < 5; ++trial) {
                TypedGraph g = random_typed_graph(tg, rng, 4, 4);
                ExecOutcome out = execute(plan.program, locate(g), {uint64_t(perm), 50000});
                for (const EmfkInstance& i : opp)
                    CHECK(satisfies_constraint(out.result.graph, i.constraint));
            }
        }
    }
}
