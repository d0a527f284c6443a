#include <catch2/catch_amalgamated.hpp>
#include <graphmend/graphgen.hpp>
#include <graphmend/repair.hpp>
#include <graphmend/transform.hpp>

#include "support/fixtures.hpp"

using namespace graphmend;

namespace {

Rule as_rule(const std::string& name, const PlainRule& p) {
    return make_rule(name, p, Morphism{empty_graph(), p.left, {}, {}},
                     Morphism{empty_graph(), p.right, {}, {}}, truth(p.left));
}

/// ⟨Pl Tk ⇒ Pl --tok--> Tk⟩: adds the containment edge.
PlainRule edge_adder() {
    return PlainRule{fixtures::pl_and_tk(), fixtures::pl_and_tk(), fixtures::pl_tok_tk()};
}

std::vector<ConditionPtr> fixture_constraints() {
    return {
        fixtures::no_parallel_tok(),
        fixtures::no_two_container(),
        fixtures::every_pl_has_tok(),
        fixtures::some_pl(),
        nexists(empty_graph(), fixtures::pl_tok_tk()),
        exists(empty_graph(), fixtures::pl_node(),
               nexists(fixtures::pl_node(), fixtures::pl_tok_tk())),
    };
}

}  // namespace

TEST_CASE("shift base cases") {
    Morphism b{empty_graph(), fixtures::pl_and_tk(), {}, {}};
    SECTION("shift of true is true") { CHECK(is_true(shift(b, truth(empty_graph())))); }
    SECTION("shift collapses when the codomain already realizes the pattern") {
        // R contains a Pl, so ∃Pl shifted to R is a tautology.
        CHECK(is_true(shift(b, fixtures::some_pl())));
    }
    SECTION("no reuse available: single all-fresh disjunct") {
        TypedGraph tk;
        tk.add_node("k", "Tk");
        Morphism b2{empty_graph(), tk, {}, {}};
        ConditionPtr s = shift(b2, fixtures::some_pl());
        REQUIRE(s->kind == CKind::Exists);
        CHECK(s->extension.node_count() == 2);
        CHECK(s->extension.edge_count() == 0);
    }
    SECTION("deterministic") {
        ConditionPtr once = shift(b, fixtures::no_two_container());
        ConditionPtr twice = shift(b, fixtures::no_two_container());
        CHECK(cond_equal(once, twice));
    }
}

TEST_CASE("shift reproduces the preservation example conjunct") {
    // Shift(b_R, ∄ two-container) has a conjunct forbidding a second container
    // of the Tk matched by the rule's right-hand side.
    TypedGraph r = fixtures::pl_tok_tk();
    Morphism b_r{empty_graph(), r, {}, {}};
    ConditionPtr s = shift(b_r, fixtures::no_two_container());
    REQUIRE(s->kind == CKind::And);

    TypedGraph expected = r;
    expected.add_node("q", "Pl");
    expected.add_edge("u", "tok", "q", "k");

    bool found = false;
    for (const ConditionPtr& part : s->subs) {
        if (!is_negative_basic(part)) continue;
        const TypedGraph& x = part->sub->extension;
        std::map<Id, Id> seed_n, seed_e;
        for (const Node& n : r.nodes) seed_n[n.id] = n.id;
        for (const Edge& e : r.edges) seed_e[e.id] = e.id;
        if (find_isomorphism_seeded(x, expected, seed_n, seed_e)) found = true;
    }
    CHECK(found);
}

TEST_CASE("shift soundness: n∘b ⊨ d iff n ⊨ shift(b,d)") {
    std::vector<TypedGraph> rs{fixtures::pl_node(), fixtures::pl_and_tk(),
                               fixtures::pl_tok_tk()};
    auto graphs = enumerate_typed_graphs(fixtures::petri_small(), {3, 3});
    for (const TypedGraph& r : rs) {
        Morphism b{empty_graph(), r, {}, {}};
        for (const ConditionPtr& d : fixture_constraints()) {
            ConditionPtr shifted = shift(b, d);
            for (const TypedGraph& h : graphs)
                for (const Morphism& n : enumerate_morphisms(r, h)) {
                    bool lhs = satisfies(compose(b, n), d);
                    bool rhs = satisfies(n, shifted);
                    REQUIRE(lhs == rhs);
                }
        }
    }
}

TEST_CASE("shift soundness over a non-empty domain") {
    TypedGraph a = fixtures::pl_node();
    Morphism b = inclusion(a, fixtures::pl_tok_tk());
    std::vector<ConditionPtr> cs{
        exists_some(a, fixtures::pl_tok_tk()),
        nexists(a, fixtures::pl_tok_tk()),
        forall(a, fixtures::pl_and_tk(), exists_some(fixtures::pl_and_tk(), fixtures::pl_tok_tk())),
    };
    for (const ConditionPtr& c : cs) {
        ConditionPtr shifted = shift(b, c);
        for (const TypedGraph& h : enumerate_typed_graphs(fixtures::petri_small(), {3, 3}))
            for (const Morphism& n : enumerate_morphisms(fixtures::pl_tok_tk(), h))
                REQUIRE(satisfies(compose(b, n), c) == satisfies(n, shifted));
    }
}

TEST_CASE("left base cases") {
    PlainRule p = edge_adder();
    SECTION("left of true is true") { CHECK(is_true(left(p, truth(p.right)))); }
    SECTION("inverse rule inapplicable gives false") {
        // p creates a node; a condition attaching an edge to the created node
        // cannot be pulled back.
        PlainRule creator{empty_graph(), empty_graph(), fixtures::pl_node()};
        TypedGraph with_out = fixtures::pl_node();
        with_out.add_node("a", "PTArc");
        with_out.add_edge("o", "pl_out", "p", "a");
        ConditionPtr ac = exists_some(fixtures::pl_node(), with_out);
        CHECK(is_false(left(creator, ac)));
    }
}

TEST_CASE("left reproduces the preservation example") {
    // Left(ρ, ∄(two-container over the rule's Pl,Tk)) = ∄(another Pl containing
    // the marked Tk, the marked pair unlinked).
    PlainRule p = edge_adder();
    TypedGraph x = p.right;  // Pl -tok-> Tk
    x.add_node("q", "Pl");
    x.add_edge("u", "tok", "q", "k");
    ConditionPtr ac = nexists(p.right, x);

    ConditionPtr l = left(p, ac);
    REQUIRE(is_negative_basic(l));
    const TypedGraph& got = l->sub->extension;
    TypedGraph expected = p.left;  // Pl Tk, no edge
    expected.add_node("q", "Pl");
    expected.add_edge("u", "tok", "q", "k");
    std::map<Id, Id> seed_n;
    for (const Node& n : p.left.nodes) seed_n[n.id] = n.id;
    CHECK(find_isomorphism_seeded(got, expected, seed_n, {}).has_value());
}

TEST_CASE("left soundness: g ⊨ left(p,ac) iff h ⊨ ac") {
    std::vector<PlainRule> rules{
        edge_adder(),
        PlainRule{fixtures::parallel_tok(2),
                  restrict_to(fixtures::parallel_tok(2), {"p", "k"}, {"t1"}),
                  restrict_to(fixtures::parallel_tok(2), {"p", "k"}, {"t1"})},
        PlainRule{empty_graph(), empty_graph(), fixtures::pl_node()},
        PlainRule{fixtures::pl_node(), empty_graph(), empty_graph()},
    };
    auto graphs = enumerate_typed_graphs(fixtures::petri_small(), {3, 2});
    ExecFreshIds gen;
    for (const PlainRule& p : rules) {
        std::vector<ConditionPtr> acs;
        Morphism b_r{empty_graph(), p.right, {}, {}};
        for (const ConditionPtr& d : fixture_constraints()) acs.push_back(shift(b_r, d));
        for (const ConditionPtr& ac : acs) {
            ConditionPtr l = left(p, ac);
            Rule rho = as_rule("probe", p);
            for (const TypedGraph& g : graphs) {
                for (const Morphism& m : enumerate_morphisms(p.left, g)) {
                    if (!dangling_condition_holds(p, m)) continue;
                    DirectTransformation t = apply_at(rho, g, m, false, gen);
                    REQUIRE(satisfies(m, l) == satisfies(t.comatch, ac));
                }
            }
        }
    }
}

TEST_CASE("cpres") {
    SECTION("trivial constraint gives a trivial condition") {
        ConditionPtr c = cpres(edge_adder(), truth(empty_graph()));
        Morphism any = identity_morphism(fixtures::pl_and_tk());
        CHECK(satisfies(any, c));
    }
    SECTION("the conjunctive example blocks the edge adder") {
        // ρ2 of R_b carries its own condition; with cpres against d1 it no
        // longer applies anywhere in Pl,Tk contained-by-other-Pl.
        std::vector<Rule> rb =
            repairing_set_exists(fixtures::pl_node(), fixtures::pl_tok_tk());
        REQUIRE(rb.size() == 2);
        const Rule& rho2 = rb[1];  // B = {Pl, Tk}
        Rule wrapped = make_preserving_rule(rho2, fixtures::no_two_container());

        TypedGraph g;  // Pl, Tk contained by another Pl
        g.add_node("pa", "Pl");
        g.add_node("k", "Tk");
        g.add_node("pb", "Pl");
        g.add_edge("e", "tok", "pb", "k");

        // the unwrapped rule applies at (pa, k); the wrapped one nowhere
        LocatedGraph lg{g, Morphism{fixtures::pl_node(), g, {{"p", "pa"}}, {}}};
        CHECK_FALSE(find_matches(rho2, lg, false).empty());
        CHECK(find_matches(wrapped, lg, false).empty());
    }
    SECTION("cpres-wrapped rules preserve the constraint (bounded)") {
        for (const ConditionPtr& d :
             {fixtures::no_two_container(), fixtures::no_parallel_tok(),
              fixtures::every_pl_has_tok()}) {
            Rule wrapped = make_preserving_rule(as_rule("probe", edge_adder()), d);
            PreservationResult r = check_preserving_bounded(
                rule_step(wrapped), d, fixtures::petri_small(), {3, 3});
            INFO(to_string(d));
            CHECK(r.preserved);
        }
    }
    SECTION("type-disjoint creation: cpres is equivalent to true") {
        // adding a PetriNet node cannot affect tok-shaped constraints
        PlainRule add_pn{empty_graph(), empty_graph(), [] {
                             TypedGraph g;
                             g.add_node("n", "PN");
                             return g;
                         }()};
        ConditionPtr c = cpres(add_pn, fixtures::no_parallel_tok());
        for (const TypedGraph& g : enumerate_typed_graphs(fixtures::petri_small(), {3, 2})) {
            Morphism m{empty_graph(), g, {}, {}};
            REQUIRE(satisfies(m, c));
        }
    }
}
