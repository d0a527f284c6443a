#pragma once

#include "graphmend/graphgen.hpp"
#include "graphmend/program.hpp"
#include "graphmend/transform.hpp"

namespace graphmend {

struct NotProper : Error {
    explicit NotProper(const std::string& what) : Error(what) {}
};
struct NotLegit : Error {
    explicit NotLegit(const std::string& what) : Error(what) {}
};
struct NoEstablishedSequentialization : Error {
    explicit NoEstablishedSequentialization(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Repairing rule sets
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Rule> dedup_span_isomorphic(std::vector<Rule> rules) {
    std::vector<Rule> out;
    for (Rule& r : rules) {
        bool dup = false;
        for (const Rule& k : out)
            if (span_isomorphic(k, r)) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(r));
    }
    return out;
}

}  // namespace detail

/// R_a for a real inclusion a: A ⊂ C: one increasing rule ⟨b, B ⇒ C, ac ∧
/// ac_B, a⟩ per intermediate subgraph A ⊆ B ⊂ C, where ac requires the
/// condition ∃a to be violated at the marked A and ac_B blocks matches that
/// extend to a larger subgraph of C. Deduplicated up to span isomorphism.
inline std::vector<Rule> repairing_set_exists(const TypedGraph& a, const TypedGraph& c) {
    std::vector<Rule> rules;
    int i = 0;
    for (const TypedGraph& b : subgraphs_between(a, c)) {
        std::vector<ConditionPtr> parts;
        parts.push_back(shift(inclusion(a, b), nexists(a, c)));
        for (const TypedGraph& bp : subgraphs_between(b, c))
            if (!(bp == b)) parts.push_back(nexists(b, bp));
        parts.push_back(nexists(b, c));
        ConditionPtr ac = conj(b, std::move(parts));
        rules.push_back(make_rule("add" + std::to_string(++i), PlainRule{b, b, c},
                                  inclusion(a, b), inclusion(a, c), ac));
    }
    return detail::dedup_span_isomorphic(std::move(rules));
}

/// S_a for a real inclusion a: A ⊂ C: decreasing rules ⟨a, C ⇒ B, b⟩ deleting
/// exactly one edge when C has edges beyond A, and exactly one node otherwise.
inline std::vector<Rule> repairing_set_absence(const TypedGraph& a, const TypedGraph& c) {
    std::vector<Rule> rules;
    bool extra_edges = c.edge_count() > a.edge_count();
    int i = 0;
    for (const TypedGraph& b : subgraphs_between(a, c)) {
        bool keep = extra_edges
                        ? (b.node_count() == c.node_count() && b.edge_count() + 1 == c.edge_count())
                        : (b.node_count() + 1 == c.node_count());
        if (!keep) continue;
        rules.push_back(make_rule("del" + std::to_string(++i), PlainRule{c, b, b},
                                  inclusion(a, c), inclusion(a, b), truth(c)));
    }
    return detail::dedup_span_isomorphic(std::move(rules));
}

// ---------------------------------------------------------------------------
// Repair plans
// ---------------------------------------------------------------------------

struct Guarantees {
    bool stable = false;
    bool terminating = false;
    bool increasing = false;
    bool decreasing = false;
    // "maximally preserving" is claimed by the underlying construction but not
    // verified here; kept as metadata only.
    bool maximally_preserving_unverified = true;
};

struct RepairPlan {
    ConditionPtr condition;
    ProgramPtr program;
    ConditionClass cls;
    Guarantees guarantees;
    std::vector<std::string> provenance;  // which construction produced what
};

/// Plans for subconditions supplied from outside (generalized-proper support);
/// keyed by structural identity of the condition.
class PlanRegistry {
public:
    void add(ConditionPtr c, RepairPlan plan) { entries_.emplace_back(std::move(c), std::move(plan)); }
    const RepairPlan* find(const ConditionPtr& c) const {
        for (const auto& [key, plan] : entries_)
            if (cond_equal(key, c)) return &plan;
        return nullptr;
    }
    bool empty() const { return entries_.empty(); }

private:
    std::vector<std::pair<ConditionPtr, RepairPlan>> entries_;
};

struct SynthesisOptions {
    const TypeGraph* type_graph = nullptr;  // enables bounded preservation/satisfiability probes
    GenBounds check_bounds{2, 3};
    std::vector<ConditionPtr> declared_order;  // user-declared sequentialization
    PlanRegistry registry;
    bool check_universal_preservation = true;
};

// ---------------------------------------------------------------------------
// Bounded preservation checking
// ---------------------------------------------------------------------------

struct PreservationCounterexample {
    TypedGraph before;
    TypedGraph after;
    std::string rule;
};

struct PreservationResult {
    bool preserved = true;
    std::optional<PreservationCounterexample> cex;
};

/// Empirical falsifier: applies every rule of P at every match on every typed
/// graph within bounds that satisfies d, and reports the first result that
/// violates d. "Preserved" is relative to the bounds.
inline PreservationResult check_preserving_bounded(const ProgramPtr& p, const ConditionPtr& d,
                                                   const TypeGraph& tg, const GenBounds& bounds) {
    std::vector<std::pair<Rule, bool>> rules = collect_rules(p);
    ExecFreshIds gen;
    for (const TypedGraph& g : enumerate_typed_graphs(tg, bounds)) {
        if (!satisfies_constraint(g, d)) continue;
        for (const auto& [rule, spo] : rules) {
            for (const Morphism& m : enumerate_morphisms(rule.plain.left, g)) {
                if (!spo && !dangling_condition_holds(rule.plain, m)) continue;
                if (!satisfies(m, rule.ac)) continue;
                DirectTransformation t = apply_at(rule, g, m, spo, gen);
                if (!satisfies_constraint(t.result.graph, d))
                    return {false, PreservationCounterexample{g, t.result.graph, rule.name}};
            }
        }
    }
    return {true, std::nullopt};
}

// ---------------------------------------------------------------------------
// Preservation wrappers
// ---------------------------------------------------------------------------

/// P^d: every non-identity rule gains the application condition cpres(ρ, d).
/// Identity plain rules (select/unselect/skip) cannot change the graph, so
/// their cpres conjunct is a tautology and is skipped.
inline RepairPlan make_preserving(const RepairPlan& plan, const ConditionPtr& d) {
    if (!d->anchor.empty()) throw Error("make_preserving: d must be a constraint");
    RepairPlan out = plan;
    if (is_true(d)) return out;
    out.program = map_rules(plan.program, [&](const Rule& rho) {
        if (rho.plain.left == rho.plain.mid && rho.plain.mid == rho.plain.right) return rho;
        return make_preserving_rule(rho, d);
    });
    out.provenance.push_back("preserving-wrap: cpres against " + to_string(d));
    return out;
}

/// P'^{e1} = ⟨P^{e1}; P_∄a^id⟩ for a plan of a universal condition ∀(a, c):
/// the destructive fallback marks an occurrence of C still violating c and
/// deletes (SPO-style) one of its items, as long as possible.
inline RepairPlan make_preserving_universal(const RepairPlan& plan, const ConditionPtr& e1) {
    CondView v = view(plan.condition);
    if (v.shape != CondView::Forall)
        throw Error("make_preserving_universal: plan is not for a universal condition");
    if (!e1->anchor.empty()) throw Error("make_preserving_universal: e1 must be a constraint");
    for (const ConditionPtr& part :
         e1->kind == CKind::And ? e1->subs : std::vector<ConditionPtr>{e1})
        if (!is_true(part) && !is_negative_basic(part))
            throw Error("make_preserving_universal: e1 must be a negative conjunction");

    auto [a_graph, c_graph] = quantifier_span(plan.condition);
    const TypedGraph& a = *a_graph;
    const TypedGraph& c = *c_graph;

    RepairPlan wrapped = make_preserving(plan, e1);

    std::vector<ProgramPtr> del_steps;
    for (Rule r : repairing_set_absence(a, c)) {
        r.left_iface = identity_morphism(c);  // S_a^id: match exactly the marked C
        r.name = "del-marked";
        del_steps.push_back(rule_step(std::move(r), /*spo=*/true));
    }
    ProgramPtr fallback = alap(seq(
        {rule_step(make_select(inclusion(a, c), neg(v.body))), choice(std::move(del_steps))}));

    RepairPlan out = wrapped;
    out.program = seq({wrapped.program, fallback});
    out.guarantees.increasing = false;  // the fallback deletes
    out.provenance.push_back("universal-fallback: delete occurrences still violating the body");
    return out;
}

// ---------------------------------------------------------------------------
// Construction for proper (and generalized proper) conditions
// ---------------------------------------------------------------------------

RepairPlan synthesize_legit(const ConditionPtr& d, const SynthesisOptions& opts);

namespace detail {

inline ProgramPtr rule_choice(const std::vector<Rule>& rules, bool spo) {
    std::vector<ProgramPtr> steps;
    for (const Rule& r : rules) steps.push_back(rule_step(r, spo));
    return choice(std::move(steps));
}

inline RepairPlan synthesize_quantified(const ConditionPtr& d, const SynthesisOptions& opts) {
    CondView v = view(d);
    RepairPlan plan;
    plan.condition = d;
    plan.cls = classify(d, [&](const ConditionPtr& c) {
        return opts.registry.find(c) != nullptr || classify(c).legit;
    });
    plan.guarantees.stable = true;
    plan.guarantees.terminating = true;

    switch (v.shape) {
        case CondView::True:
            plan.program = skip(d->anchor);
            plan.provenance.push_back("true: Skip");
            return plan;
        case CondView::Exists: {
            auto [a, c] = quantifier_span(d);
            std::vector<Rule> ra = repairing_set_exists(*a, *c);
            ProgramPtr establish = try_(rule_choice(ra, false));
            plan.guarantees.increasing = true;
            if (is_true(v.body)) {
                plan.program = establish;
                plan.provenance.push_back("positive: try R_a with " + std::to_string(ra.size()) +
                                          " rules");
                return plan;
            }
            RepairPlan body = synthesize_legit(v.body, opts);
            // The repair phase runs only while the condition is still violated;
            // an unguarded select could rewrite a satisfying graph by marking
            // an occurrence other than the witnessing one.
            Rule guard = make_rule("unless-satisfied", identity_rule(d->anchor),
                                   identity_morphism(d->anchor), identity_morphism(d->anchor),
                                   neg(d));
            plan.program = seq(
                {establish,
                 try_(seq({rule_step(guard), rule_step(make_select(inclusion(*a, *c))),
                           body.program, rule_step(make_unselect(inclusion(*a, *c)))}))});
            plan.guarantees.terminating &= body.guarantees.terminating;
            plan.guarantees.increasing &= body.guarantees.increasing;
            plan.provenance.push_back(
                "existential: try R_a, then repair the body at a marked occurrence (guarded "
                "for stability)");
            plan.provenance.insert(plan.provenance.end(), body.provenance.begin(),
                                   body.provenance.end());
            return plan;
        }
        case CondView::NotExists: {
            if (!is_true(v.body))
                throw NotProper("negated nesting ∄(a, c) has no repair construction: " +
                                to_string(d));
            auto [a, c] = quantifier_span(d);
            std::vector<Rule> sa = repairing_set_absence(*a, *c);
            plan.program = alap(rule_choice(sa, /*spo=*/true));
            plan.guarantees.decreasing = true;
            plan.provenance.push_back("negative: S_a'↓ with " + std::to_string(sa.size()) +
                                      " rules");
            return plan;
        }
        case CondView::Forall: {
            auto [a, c] = quantifier_span(d);
            RepairPlan body = synthesize_legit(v.body, opts);
            plan.program =
                alap(seq({rule_step(make_select(inclusion(*a, *c), neg(v.body))), body.program,
                          rule_step(make_unselect(inclusion(*a, *c)))}));
            plan.guarantees.increasing = body.guarantees.increasing;
            plan.guarantees.stable &= body.guarantees.stable;
            plan.guarantees.terminating &= body.guarantees.terminating;
            plan.provenance.push_back("universal: ⟨select(a,¬c); P_c; unselect(a)⟩↓");
            plan.provenance.insert(plan.provenance.end(), body.provenance.begin(),
                                   body.provenance.end());
            return plan;
        }
        default: break;
    }
    throw NotProper("no construction for condition " + to_string(d));
}

}  // namespace detail

/// The inductive construction for proper conditions (and, via the registry
/// or recursion, generalized proper ones).
inline RepairPlan synthesize_proper(const ConditionPtr& d, const SynthesisOptions& opts = {}) {
    ConditionClass cls = classify(d, [&](const ConditionPtr& c) {
        return opts.registry.find(c) != nullptr || classify(c).legit;
    });
    if (!cls.proper && !cls.generalized_proper)
        throw NotProper("condition is not proper: " + to_string(d));
    return detail::synthesize_quantified(d, opts);
}

// ---------------------------------------------------------------------------
// Conjunctions
// ---------------------------------------------------------------------------

enum class SeqKind {
    Negative,
    Positive,
    PreservingDeclared,
    PreservingChecked,
    MixedCase2,
    MixedCase3,
};

struct Sequentialization {
    std::vector<ConditionPtr> conditions;
    std::vector<RepairPlan> plans;
    SeqKind kind;
    size_t split = 0;  // |ds1| for the mixed cases
};

/// Composes repair plans for a conjunction along an established
/// sequentialization: plain sequencing for cases 1 and 2, and the
/// e1-preserving wrap with destructive fallback for case 3.
inline RepairPlan compose_conjunction(const Sequentialization& s) {
    if (s.plans.empty()) throw Error("compose_conjunction: empty sequentialization");
    const TypedGraph& anchor = s.conditions.front()->anchor;
    RepairPlan out;
    out.condition = conj(anchor, s.conditions);
    out.guarantees.stable = true;
    out.guarantees.terminating = true;
    out.guarantees.increasing = true;
    out.guarantees.decreasing = true;
    for (const RepairPlan& p : s.plans) {
        out.guarantees.stable &= p.guarantees.stable;
        out.guarantees.terminating &= p.guarantees.terminating;
        out.guarantees.increasing &= p.guarantees.increasing;
        out.guarantees.decreasing &= p.guarantees.decreasing;
    }

    std::vector<ProgramPtr> steps;
    switch (s.kind) {
        case SeqKind::Negative:
        case SeqKind::Positive:
        case SeqKind::PreservingDeclared:
        case SeqKind::PreservingChecked:
        case SeqKind::MixedCase2: {
            for (const RepairPlan& p : s.plans) steps.push_back(p.program);
            out.provenance.push_back(
                s.kind == SeqKind::MixedCase2
                    ? "conjunction case 2: positives, then increasing existential/universal part"
                    : "conjunction case 1: sequential composition");
            break;
        }
        case SeqKind::MixedCase3: {
            std::vector<ConditionPtr> negs(s.conditions.begin(),
                                           s.conditions.begin() + s.split);
            ConditionPtr e1 = negs.empty() ? truth(anchor) : conj(anchor, negs);
            for (size_t i = 0; i < s.split; ++i) steps.push_back(s.plans[i].program);
            for (size_t i = s.split; i < s.plans.size(); ++i) {
                RepairPlan wrapped = make_preserving_universal(s.plans[i], e1);
                steps.push_back(wrapped.program);
                out.guarantees.increasing = false;
            }
            out.provenance.push_back(
                "conjunction case 3: negatives, then e1-preserving universals with fallback");
            break;
        }
    }
    for (const RepairPlan& p : s.plans)
        out.provenance.insert(out.provenance.end(), p.provenance.begin(), p.provenance.end());
    out.program = steps.size() == 1 ? steps.front() : seq(std::move(steps));
    out.cls = classify(out.condition);
    return out;
}

// ---------------------------------------------------------------------------
// Disjunctions
// ---------------------------------------------------------------------------

/// A repair program for any disjunct repairs the disjunction; with several
/// available plans the nondeterministic choice over all of them is used. A
/// plain choice would rewrite graphs that already satisfy the disjunction
/// through another disjunct, so every branch is guarded by an identity rule
/// applicable only while the disjunction is violated, wrapped in try; this
/// keeps the combined program stable.
inline RepairPlan synthesize_disjunction(const ConditionPtr& target,
                                         const std::vector<RepairPlan>& plans) {
    if (plans.empty()) throw NotLegit("disjunction without a repairable disjunct");
    RepairPlan out;
    out.condition = target;
    out.cls = classify(target);
    if (plans.size() == 1) {
        out.program = plans.front().program;
        out.guarantees = plans.front().guarantees;
        out.provenance = plans.front().provenance;
        out.provenance.push_back("disjunction: the single available disjunct plan repairs it");
        return out;
    }
    const TypedGraph& anchor = target->anchor;
    Rule guard = make_rule("unless-satisfied", identity_rule(anchor),
                           identity_morphism(anchor), identity_morphism(anchor), neg(target));
    std::vector<ProgramPtr> branches;
    out.guarantees.stable = true;
    out.guarantees.terminating = true;
    for (const RepairPlan& p : plans) {
        branches.push_back(seq({rule_step(guard), p.program}));
        out.guarantees.terminating &= p.guarantees.terminating;
        out.provenance.insert(out.provenance.end(), p.provenance.begin(), p.provenance.end());
    }
    out.program = try_(choice(std::move(branches)));
    out.provenance.push_back("disjunction: guarded choice among " + std::to_string(plans.size()) +
                             " disjunct plans");
    return out;
}

// ---------------------------------------------------------------------------
// Legit conditions (main entry)
// ---------------------------------------------------------------------------

namespace detail {

inline bool sequence_preserving_checked(const std::vector<ConditionPtr>& conditions,
                                        const std::vector<RepairPlan>& plans,
                                        const SynthesisOptions& opts,
                                        std::vector<std::string>& notes) {
    if (!opts.type_graph) {
        notes.push_back("preservation assumed (no type graph for bounded checking)");
        return true;
    }
    for (size_t k = 1; k < plans.size(); ++k) {
        ConditionPtr prior = conj(conditions.front()->anchor,
                                  {conditions.begin(), conditions.begin() + k});
        PreservationResult r =
            check_preserving_bounded(plans[k].program, prior, *opts.type_graph, opts.check_bounds);
        if (!r.preserved) {
            notes.push_back("preservation falsified for step " + std::to_string(k + 1) +
                            " by rule " + r.cex->rule);
            return false;
        }
    }
    notes.push_back("preservation checked within bounds");
    return true;
}

inline RepairPlan synthesize_conjunction(const ConditionPtr& d, const SynthesisOptions& opts) {
    const std::vector<ConditionPtr>& subs = d->subs;
    std::vector<RepairPlan> plans;
    for (const ConditionPtr& s : subs) plans.push_back(synthesize_legit(s, opts));

    std::vector<std::string> notes;
    if (opts.type_graph) {
        bool satisfiable = false;
        for (const TypedGraph& g : enumerate_typed_graphs(*opts.type_graph, opts.check_bounds))
            if (satisfies_constraint(g, d)) {
                satisfiable = true;
                break;
            }
        notes.push_back(satisfiable ? "satisfiability: model found within bounds"
                                    : "satisfiability assumed (no model within bounds)");
    } else {
        notes.push_back("satisfiability assumed");
    }

    auto finish = [&](Sequentialization s) {
        RepairPlan out = compose_conjunction(s);
        out.provenance.insert(out.provenance.end(), notes.begin(), notes.end());
        out.cls = classify(d);
        return out;
    };

    bool all_neg = true, all_pos = true, neg_univ = true, pos_exis_univ = true;
    for (size_t i = 0; i < subs.size(); ++i) {
        CondView v = view(subs[i]);
        bool n = is_negative_basic(subs[i]);
        bool p = is_positive_basic(subs[i]);
        bool uni = v.shape == CondView::Forall;
        bool exi = v.shape == CondView::Exists;
        all_neg &= n;
        all_pos &= p;
        neg_univ &= (n || uni);
        pos_exis_univ &= (p || exi || uni);
    }

    if (all_neg)
        return finish({subs, plans, SeqKind::Negative, 0});
    if (all_pos)
        return finish({subs, plans, SeqKind::Positive, 0});

    if (neg_univ) {
        // Case 3: negatives first, then the universal part wrapped to preserve
        // them; the universal subsequence must be preserving.
        std::vector<ConditionPtr> order;
        std::vector<RepairPlan> ordered;
        for (size_t i = 0; i < subs.size(); ++i)
            if (is_negative_basic(subs[i])) {
                order.push_back(subs[i]);
                ordered.push_back(plans[i]);
            }
        size_t split = order.size();
        std::vector<ConditionPtr> ds2;
        std::vector<RepairPlan> ds2_plans;
        for (size_t i = 0; i < subs.size(); ++i)
            if (!is_negative_basic(subs[i])) {
                ds2.push_back(subs[i]);
                ds2_plans.push_back(plans[i]);
            }
        bool ok = true;
        if (opts.check_universal_preservation) {
            // Falsify against the wrapped plans: the destructive fallback is
            // what can disturb earlier universals.
            ConditionPtr e1 = order.empty() ? truth(d->anchor) : conj(d->anchor, order);
            std::vector<RepairPlan> wrapped;
            for (const RepairPlan& p : ds2_plans)
                wrapped.push_back(make_preserving_universal(p, e1));
            ok = sequence_preserving_checked(ds2, wrapped, opts, notes);
        }
        if (ok) {
            order.insert(order.end(), ds2.begin(), ds2.end());
            ordered.insert(ordered.end(), ds2_plans.begin(), ds2_plans.end());
            return finish({order, ordered, SeqKind::MixedCase3, split});
        }
    } else if (pos_exis_univ) {
        // Case 2: positives first; the increasing remainder preserves them.
        std::vector<ConditionPtr> order;
        std::vector<RepairPlan> ordered;
        for (size_t i = 0; i < subs.size(); ++i)
            if (is_positive_basic(subs[i])) {
                order.push_back(subs[i]);
                ordered.push_back(plans[i]);
            }
        size_t split = order.size();
        std::vector<ConditionPtr> ds2;
        std::vector<RepairPlan> ds2_plans;
        for (size_t i = 0; i < subs.size(); ++i)
            if (!is_positive_basic(subs[i])) {
                ds2.push_back(subs[i]);
                ds2_plans.push_back(plans[i]);
            }
        bool ok = !opts.check_universal_preservation ||
                  sequence_preserving_checked(ds2, ds2_plans, opts, notes);
        if (ok) {
            order.insert(order.end(), ds2.begin(), ds2.end());
            ordered.insert(ordered.end(), ds2_plans.begin(), ds2_plans.end());
            return finish({order, ordered, SeqKind::MixedCase2, split});
        }
    }

    // User-declared order.
    if (opts.declared_order.size() == subs.size()) {
        std::vector<RepairPlan> ordered;
        bool match = true;
        for (const ConditionPtr& want : opts.declared_order) {
            bool found = false;
            for (size_t i = 0; i < subs.size(); ++i)
                if (cond_equal(subs[i], want)) {
                    ordered.push_back(plans[i]);
                    found = true;
                    break;
                }
            match &= found;
        }
        if (match) {
            notes.push_back("sequentialization declared by the caller");
            return finish({opts.declared_order, ordered, SeqKind::PreservingDeclared, 0});
        }
    }

    // Permutation search, smallest conditions first, with the bounded checker
    // as falsifier.
    if (opts.type_graph) {
        std::vector<size_t> idx(subs.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        auto size_of = [&](size_t i) {
            size_t s = 0;
            ConditionPtr c = subs[i];
            if (c->kind == CKind::Exists || (c->kind == CKind::Not && c->sub->kind == CKind::Exists)) {
                const Condition* e = c->kind == CKind::Exists ? c.get() : c->sub.get();
                s = e->extension.node_count() + e->extension.edge_count();
            }
            return s;
        };
        std::sort(idx.begin(), idx.end(), [&](size_t x, size_t y) {
            if (size_of(x) != size_of(y)) return size_of(x) < size_of(y);
            return x < y;
        });
        do {
            std::vector<ConditionPtr> order;
            std::vector<RepairPlan> ordered;
            for (size_t i : idx) {
                order.push_back(subs[i]);
                ordered.push_back(plans[i]);
            }
            std::vector<std::string> perm_notes;
            if (sequence_preserving_checked(order, ordered, opts, perm_notes)) {
                notes.push_back("sequentialization found by permutation search");
                notes.insert(notes.end(), perm_notes.begin(), perm_notes.end());
                return finish({order, ordered, SeqKind::PreservingChecked, 0});
            }
        } while (std::next_permutation(idx.begin(), idx.end()));
    }

    throw NoEstablishedSequentialization(
        "no preserving sequentialization established for " + to_string(d));
}

}  // namespace detail

/// Repair synthesis for legit conditions: dispatches on the condition shape
/// to the proper construction, conjunction composition, or disjunction choice.
inline RepairPlan synthesize_legit(const ConditionPtr& d, const SynthesisOptions& opts) {
    if (const RepairPlan* reg = opts.registry.find(d)) return *reg;
    switch (d->kind) {
        case CKind::And: return detail::synthesize_conjunction(d, opts);
        case CKind::Or: {
            std::vector<RepairPlan> plans;
            std::string failures;
            for (const ConditionPtr& s : d->subs) {
                try {
                    plans.push_back(synthesize_legit(s, opts));
                } catch (const Error& e) {
                    failures += std::string("\n  disjunct failed: ") + e.what();
                }
            }
            if (plans.empty())
                throw NotLegit("no repairable disjunct in " + to_string(d) + failures);
            return synthesize_disjunction(d, plans);
        }
        default: break;
    }
    ConditionClass cls = classify(d, [&](const ConditionPtr& c) {
        return opts.registry.find(c) != nullptr || classify(c).legit;
    });
    if (cls.proper || cls.generalized_proper) return detail::synthesize_quantified(d, opts);
    throw NotLegit("condition is not legit: " + to_string(d));
}

inline RepairPlan synthesize_legit(const ConditionPtr& d) {
    return synthesize_legit(d, SynthesisOptions{});
}

}  // namespace graphmend
