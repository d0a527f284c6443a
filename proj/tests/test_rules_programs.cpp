#include <catch2/catch_amalgamated.hpp>
#include <graphmend/program.hpp>

#include "support/fixtures.hpp"

using namespace graphmend;

namespace {

/// ⟨Pl ⇉tok Tk ⇒ Pl →tok Tk⟩: deletes one of two parallel tok edges.
Rule parallel_deleter() {
    TypedGraph l = fixtures::parallel_tok(2);
    TypedGraph kr = restrict_to(l, {"p", "k"}, {"t1"});
    Morphism none{empty_graph(), l, {}, {}};
    Morphism none_r{empty_graph(), kr, {}, {}};
    return make_rule("dedupe", PlainRule{l, kr, kr}, none, none_r, truth(l));
}

/// ⟨Pl ⇒ ∅⟩: deletes a place.
Rule place_deleter() {
    TypedGraph l = fixtures::pl_node();
    Morphism none{empty_graph(), l, {}, {}};
    Morphism none_r{empty_graph(), empty_graph(), {}, {}};
    return make_rule("drop-pl", PlainRule{l, empty_graph(), empty_graph()}, none, none_r,
                     truth(l));
}

Rule adder(const std::string& type) {
    TypedGraph r;
    r.add_node("new", type);
    Morphism none{empty_graph(), empty_graph(), {}, {}};
    Morphism none_r{empty_graph(), r, {}, {}};
    return make_rule("add-" + type, PlainRule{empty_graph(), empty_graph(), r}, none, none_r,
                     truth(empty_graph()));
}

}  // namespace

TEST_CASE("dpo application") {
    ExecFreshIds gen;
    SECTION("parallel edge deletion has two matches, each leaving one edge") {
        Rule r = parallel_deleter();
        LocatedGraph lg = locate(fixtures::parallel_tok(2));
        auto matches = find_matches(r, lg, false);
        REQUIRE(matches.size() == 2);
        for (const Morphism& m : matches) {
            DirectTransformation t = apply_at(r, lg.graph, m, false, gen);
            CHECK(t.result.graph.edge_count() == 1);
            CHECK(t.result.graph.node_count() == 2);
        }
    }
    SECTION("set construction: H = (G - m(L-K)) + fresh(R-K)") {
        Rule r = parallel_deleter();
        TypedGraph g = fixtures::parallel_tok(3);
        LocatedGraph lg = locate(g);
        for (const Morphism& m : find_matches(r, lg, false)) {
            DirectTransformation t = apply_at(r, g, m, false, gen);
            // deleted: exactly the matched t2-image; kept: everything else
            Id gone = m.at_edge("t2");
            CHECK_FALSE(t.result.graph.has_edge(gone));
            for (const Edge& e : g.edges)
                if (e.id != gone) CHECK(t.result.graph.has_edge(e.id));
            CHECK(t.result.graph.node_count() == g.node_count());
        }
    }
    SECTION("dangling condition blocks node deletion in DPO mode") {
        Rule r = place_deleter();
        LocatedGraph lg = locate(fixtures::pl_tok_tk());
        CHECK(find_matches(r, lg, false).empty());
        CHECK(find_matches(r, lg, true).size() == 1);
    }
    SECTION("SPO removes dangling edges first") {
        Rule r = place_deleter();
        LocatedGraph lg = locate(fixtures::pl_tok_tk());
        auto matches = find_matches(r, lg, true);
        REQUIRE(matches.size() == 1);
        DirectTransformation t = apply_at(r, lg.graph, matches.front(), true, gen);
        CHECK(t.result.graph.node_count() == 1);
        CHECK(t.result.graph.edge_count() == 0);
        CHECK(t.result.graph.nodes.front().type == "Tk");
        CHECK(t.spo_removed == std::set<Id>{"t"});
    }
    SECTION("isolated node deletion agrees in both modes") {
        Rule r = place_deleter();
        TypedGraph g;
        g.add_node("p", "Pl");
        g.add_node("q", "Pl");
        for (bool spo : {false, true}) {
            auto ms = find_matches(r, locate(g), spo);
            REQUIRE(ms.size() == 2);
            DirectTransformation t = apply_at(r, g, ms.front(), spo, gen);
            CHECK(t.result.graph.node_count() == 1);
        }
    }
    SECTION("fresh ids are prefixed by the rule name") {
        Rule r = adder("Tk");
        DirectTransformation t =
            apply_at(r, fixtures::pl_node(), Morphism{empty_graph(), fixtures::pl_node(), {}, {}},
                     false, gen);
        bool prefixed = false;
        for (const Node& n : t.result.graph.nodes)
            if (n.type == "Tk" && n.id.rfind("add-Tk#", 0) == 0) prefixed = true;
        CHECK(prefixed);
    }
}

TEST_CASE("interface maps") {
    SECTION("select and unselect thread markings") {
        TypedGraph a = fixtures::pl_node();
        TypedGraph c = fixtures::pl_tok_tk();
        Rule sel = make_select(inclusion(a, c));
        PartialMap i = interface_map(sel);
        CHECK(i.total());
        CHECK(i.node_map.at("p") == "p");
        Rule unsel = make_unselect(inclusion(a, c));
        PartialMap j = interface_map(unsel);
        CHECK(j.node_map.size() == 1);  // only the A-part survives into Y
    }
    SECTION("deleted interface items drop out of the map") {
        Rule r = place_deleter();
        Rule marked = make_rule("del", r.plain, identity_morphism(r.plain.left),
                                Morphism{empty_graph(), empty_graph(), {}, {}}, truth(r.plain.left));
        PartialMap i = interface_map(marked);
        CHECK(i.node_map.empty());
        CHECK_FALSE(i.total());
    }
}

TEST_CASE("execution") {
    SECTION("skip is identity") {
        LocatedGraph lg = locate(fixtures::pl_tok_tk());
        ExecOutcome out = execute(skip(empty_graph()), lg);
        CHECK(out.result == lg);
    }
    SECTION("alap deletes parallel edges down to one") {
        ProgramPtr p = alap(rule_step(parallel_deleter()));
        for (int n : {3, 5, 7}) {
            ExecOutcome out = execute(p, locate(fixtures::parallel_tok(n)), {42, 10000});
            CHECK(out.result.graph.edge_count() == 1);
            REQUIRE(out.stats.alap_iterations.size() == 1);
            CHECK(out.stats.alap_iterations.front() == n - 1);
        }
    }
    SECTION("try of an inapplicable rule is identity, not failure") {
        LocatedGraph lg = locate(fixtures::pl_node());
        ProgramPtr p = try_(rule_step(parallel_deleter()));
        ExecOutcome out = execute(p, lg);
        CHECK(out.result == lg);
    }
    SECTION("same seed, same result, different seeds may differ") {
        ProgramPtr p = rule_step(parallel_deleter());
        LocatedGraph lg = locate(fixtures::parallel_tok(4));
        ExecOutcome a = execute(p, lg, {7, 1000});
        ExecOutcome b = execute(p, lg, {7, 1000});
        CHECK(a.result == b.result);
    }
    SECTION("budget exceeded raises") {
        // a rule that always applies: add a place, forever
        ProgramPtr p = alap(rule_step(adder("Pl")));
        CHECK_THROWS_AS(execute(p, locate(empty_graph()), {0, 50}), BudgetExceeded);
    }
    SECTION("select with a violated condition is inapplicable") {
        TypedGraph a = fixtures::pl_node();
        TypedGraph c = fixtures::pl_tok_tk();
        // mark a place without a token: none in pl_tok_tk
        Rule sel = make_select(Morphism{empty_graph(), a, {}, {}},
                               neg(exists_some(a, c)));
        CHECK(find_matches(sel, locate(fixtures::pl_tok_tk()), false).empty());
        TypedGraph lonely;
        lonely.add_node("p", "Pl");
        CHECK(find_matches(sel, locate(lonely), false).size() == 1);
    }
    SECTION("alap postcondition: no progressing step remains") {
        ProgramPtr body = rule_step(parallel_deleter());
        ExecOutcome out = execute(alap(body), locate(fixtures::parallel_tok(5)), {3, 10000});
        AllResults probe = execute_all(body, out.result);
        for (const LocatedGraph& r : probe.results)
            CHECK(located_isomorphic(r, out.result));
    }
}

TEST_CASE("execute_all") {
    SECTION("skip yields the input") {
        AllResults r = execute_all(skip(empty_graph()), locate(fixtures::pl_node()));
        REQUIRE(r.results.size() == 1);
        CHECK(r.complete);
    }
    SECTION("choice of two distinct adders yields two results") {
        ProgramPtr p = choice({rule_step(adder("Pl")), rule_step(adder("Tk"))});
        AllResults r = execute_all(p, locate(empty_graph()));
        CHECK(r.results.size() == 2);
    }
    SECTION("alap results collapse up to isomorphism") {
        ProgramPtr p = alap(rule_step(parallel_deleter()));
        AllResults r = execute_all(p, locate(fixtures::parallel_tok(3)));
        REQUIRE(r.results.size() == 1);
        CHECK(r.results.front().graph.edge_count() == 1);
        CHECK(r.complete);
    }
    SECTION("every execute result appears in execute_all") {
        ProgramPtr p = choice({rule_step(adder("Pl")), rule_step(adder("Tk"))});
        AllResults all = execute_all(p, locate(empty_graph()));
        for (uint64_t seed = 0; seed < 8; ++seed) {
            ExecOutcome one = execute(p, locate(empty_graph()), {seed, 100});
            bool found = false;
            for (const LocatedGraph& r : all.results)
                if (located_isomorphic(r, one.result)) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("apply_rule policies") {
    ExecFreshIds gen;
    LocatedGraph lg = locate(fixtures::parallel_tok(3));
    Rule r = parallel_deleter();
    auto all = apply_rule(lg, r, false, gen);
    CHECK(all.size() == 6);  // ordered pairs of distinct edges
    for (const auto& [h, i] : all) {
        CHECK(h.graph.edge_count() == 2);
        CHECK(morphism_valid(h.marking));
        CHECK(i.total());
    }
    auto first = apply_rule(lg, r, false, gen, MatchPolicy::First);
    REQUIRE(first.size() == 1);
    auto seeded_a = apply_rule(lg, r, false, gen, MatchPolicy::SeededRandom, 4);
    auto seeded_b = apply_rule(lg, r, false, gen, MatchPolicy::SeededRandom, 4);
    REQUIRE(seeded_a.size() == 1);
    CHECK(seeded_a.front().first.graph == seeded_b.front().first.graph);
    CHECK(apply_rule(locate(fixtures::pl_node()), r, false, gen).empty());
}

TEST_CASE("structural rule properties") {
    CHECK(is_decreasing(parallel_deleter().plain));
    CHECK(is_increasing(adder("Pl").plain));
    CHECK_FALSE(is_increasing(identity_rule(fixtures::pl_node())));
    CHECK_FALSE(is_decreasing(identity_rule(fixtures::pl_node())));
}
