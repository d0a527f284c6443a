#pragma once

#include <graphmend/condition.hpp>
#include <graphmend/graph.hpp>

namespace fixtures {

using namespace graphmend;

/// The Petri-net type graph: PetriNet, Place, Transition, Token, PTArc, TPArc;
/// containment places/trans/ptarcs/tparcs/tok; opposite src/out and tgt/in
/// pairs on both arc kinds.
inline TypeGraph petri() {
    TypeGraph tg;
    tg.add_node("PN");
    tg.add_node("Pl");
    tg.add_node("Tr");
    tg.add_node("Tk");
    tg.add_node("PTArc");
    tg.add_node("TPArc");
    tg.add_edge("places", "PN", "Pl", true);
    tg.add_edge("trans", "PN", "Tr", true);
    tg.add_edge("ptarcs", "PN", "PTArc", true);
    tg.add_edge("tparcs", "PN", "TPArc", true);
    tg.add_edge("tok", "Pl", "Tk", true);
    tg.add_edge("pt_src", "PTArc", "Pl");
    tg.add_edge("pl_out", "Pl", "PTArc");
    tg.add_edge("pt_tgt", "PTArc", "Tr");
    tg.add_edge("tr_in", "Tr", "PTArc");
    tg.add_edge("tp_src", "TPArc", "Tr");
    tg.add_edge("tr_out", "Tr", "TPArc");
    tg.add_edge("tp_tgt", "TPArc", "Pl");
    tg.add_edge("pl_in", "Pl", "TPArc");
    tg.add_opposite("pt_src", "pl_out");
    tg.add_opposite("pt_tgt", "tr_in");
    tg.add_opposite("tp_src", "tr_out");
    tg.add_opposite("tp_tgt", "pl_in");
    return tg;
}

/// A smaller slice of the Petri type graph (Pl, Tk, tok) for exhaustive sweeps.
inline TypeGraph petri_small() {
    TypeGraph tg;
    tg.add_node("Pl");
    tg.add_node("Tk");
    tg.add_edge("tok", "Pl", "Tk", true);
    return tg;
}

/// One node type, one edge type N -> N: the untyped-graph setting of the
/// preservation counterexamples.
inline TypeGraph single_type() {
    TypeGraph tg;
    tg.add_node("N");
    tg.add_edge("e", "N", "N");
    return tg;
}

inline TypedGraph pl_node() {
    TypedGraph g;
    g.add_node("p", "Pl");
    return g;
}

/// p:Pl --tok--> k:Tk
inline TypedGraph pl_tok_tk() {
    TypedGraph g;
    g.add_node("p", "Pl");
    g.add_node("k", "Tk");
    g.add_edge("t", "tok", "p", "k");
    return g;
}

/// p:Pl  k:Tk (no edge)
inline TypedGraph pl_and_tk() {
    TypedGraph g;
    g.add_node("p", "Pl");
    g.add_node("k", "Tk");
    return g;
}

/// The "two containers" graph: p1 --tok--> k <--tok-- p2.
inline TypedGraph two_container() {
    TypedGraph g;
    g.add_node("p1", "Pl");
    g.add_node("p2", "Pl");
    g.add_node("k", "Tk");
    g.add_edge("t1", "tok", "p1", "k");
    g.add_edge("t2", "tok", "p2", "k");
    return g;
}

/// n parallel tok edges between one Pl and one Tk.
inline TypedGraph parallel_tok(int n) {
    TypedGraph g;
    g.add_node("p", "Pl");
    g.add_node("k", "Tk");
    for (int i = 1; i <= n; ++i)
        g.add_edge("t" + std::to_string(i), "tok", "p", "k");
    return g;
}

// --- constraints over the Petri type graph ---

/// d = ∄(Pl ⇉tok Tk): no two parallel tok edges.
inline ConditionPtr no_parallel_tok() {
    return nexists(empty_graph(), parallel_tok(2));
}

/// d1 = ∄(two-container): no token with two containers.
inline ConditionPtr no_two_container() {
    return nexists(empty_graph(), two_container());
}

/// d2 = ∀(Pl, ∃ Pl --tok--> Tk): every place has a token.
inline ConditionPtr every_pl_has_tok() {
    return forall(empty_graph(), pl_node(), exists_some(pl_node(), pl_tok_tk()));
}

/// ∃ Pl: a place exists.
inline ConditionPtr some_pl() { return exists_some(empty_graph(), pl_node()); }

// --- fixtures over the single-type graph ---

inline TypedGraph one_node() {
    TypedGraph g;
    g.add_node("v", "N");
    return g;
}
inline TypedGraph node_with_loop() {
    TypedGraph g = one_node();
    g.add_edge("l", "e", "v", "v");
    return g;
}
inline TypedGraph two_nodes_edge() {
    TypedGraph g = one_node();
    g.add_node("w", "N");
    g.add_edge("x", "e", "v", "w");
    return g;
}
inline TypedGraph two_nodes_edge_plus_node() {
    TypedGraph g = two_nodes_edge();
    g.add_node("u", "N");
    return g;
}

/// ∀(node, ∃ loop at it).
inline ConditionPtr every_node_has_loop() {
    return forall(empty_graph(), one_node(), exists_some(one_node(), node_with_loop()));
}
/// ∀(node, ∃ outgoing edge to another node).
inline ConditionPtr every_node_has_edge() {
    return forall(empty_graph(), one_node(), exists_some(one_node(), two_nodes_edge()));
}
/// ∀(edge pair, ∃ a further node).
inline ConditionPtr every_edge_has_third_node() {
    return forall(empty_graph(), two_nodes_edge(),
                  exists_some(two_nodes_edge(), two_nodes_edge_plus_node()));
}

}  // namespace fixtures
