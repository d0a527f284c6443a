#pragma once

#include <random>

#include "graphmend/rule.hpp"

namespace graphmend {

// ---------------------------------------------------------------------------
// Typed graph programs
// ---------------------------------------------------------------------------

enum class PKind { RuleStep, Choice, Seq, Try, Alap, Skip };

struct Program;
using ProgramPtr = std::shared_ptr<const Program>;

/// Program AST: rule | {P,...} | ⟨P;...⟩ | try P | P↓ | Skip. Executed on
/// located graphs; interfaces chain through sequences.
struct Program {
    PKind kind;
    Rule rule;                        // RuleStep
    bool spo = false;                 // RuleStep: apply with the dangling edges operator
    std::vector<ProgramPtr> children; // Choice, Seq
    ProgramPtr child;                 // Try, Alap
    TypedGraph iface;                 // Skip
};

inline ProgramPtr rule_step(Rule r, bool spo = false) {
    auto p = std::make_shared<Program>();
    p->kind = PKind::RuleStep;
    p->rule = std::move(r);
    p->spo = spo;
    return p;
}
inline ProgramPtr skip(TypedGraph x) {
    auto p = std::make_shared<Program>();
    p->kind = PKind::Skip;
    p->iface = std::move(x);
    return p;
}
inline ProgramPtr choice(std::vector<ProgramPtr> children) {
    if (children.empty()) throw Error("choice: needs at least one branch");
    if (children.size() == 1) return children.front();
    auto p = std::make_shared<Program>();
    p->kind = PKind::Choice;
    p->children = std::move(children);
    return p;
}
inline ProgramPtr seq(std::vector<ProgramPtr> children) {
    if (children.empty()) throw Error("seq: needs at least one step");
    if (children.size() == 1) return children.front();
    auto p = std::make_shared<Program>();
    p->kind = PKind::Seq;
    p->children = std::move(children);
    return p;
}
inline ProgramPtr try_(ProgramPtr child) {
    auto p = std::make_shared<Program>();
    p->kind = PKind::Try;
    p->child = std::move(child);
    return p;
}
inline ProgramPtr alap(ProgramPtr child) {
    auto p = std::make_shared<Program>();
    p->kind = PKind::Alap;
    p->child = std::move(child);
    return p;
}

inline const TypedGraph& in_interface(const ProgramPtr& p) {
    switch (p->kind) {
        case PKind::RuleStep: return p->rule.left_iface.dom;
        case PKind::Skip: return p->iface;
        case PKind::Choice:
        case PKind::Seq: return in_interface(p->children.front());
        case PKind::Try:
        case PKind::Alap: return in_interface(p->child);
    }
    throw Error("in_interface: bad program");
}
inline const TypedGraph& out_interface(const ProgramPtr& p) {
    switch (p->kind) {
        case PKind::RuleStep: return p->rule.right_iface.dom;
        case PKind::Skip: return p->iface;
        case PKind::Choice: return out_interface(p->children.front());
        case PKind::Seq: return out_interface(p->children.back());
        case PKind::Try:
        case PKind::Alap: return out_interface(p->child);
    }
    throw Error("out_interface: bad program");
}

/// Validates interface chaining: sequences thread interfaces, choice branches
/// agree, and try/alap bodies return to their input interface.
inline void check_program(const ProgramPtr& p) {
    switch (p->kind) {
        case PKind::RuleStep:
        case PKind::Skip: return;
        case PKind::Choice:
            for (const auto& c : p->children) {
                check_program(c);
                if (!(in_interface(c) == in_interface(p->children.front())) ||
                    !(out_interface(c) == out_interface(p->children.front())))
                    throw Error("choice: branch interfaces differ");
            }
            return;
        case PKind::Seq:
            for (size_t i = 0; i < p->children.size(); ++i) {
                check_program(p->children[i]);
                if (i > 0 && !(out_interface(p->children[i - 1]) == in_interface(p->children[i])))
                    throw Error("seq: interface mismatch between steps");
            }
            return;
        case PKind::Try:
        case PKind::Alap:
            check_program(p->child);
            if (!(in_interface(p->child) == out_interface(p->child)))
                throw Error("try/alap: body must preserve its interface");
            return;
    }
}

/// All rules occurring in a program, with their application mode.
inline void collect_rules(const ProgramPtr& p, std::vector<std::pair<Rule, bool>>& out) {
    switch (p->kind) {
        case PKind::RuleStep: out.emplace_back(p->rule, p->spo); return;
        case PKind::Skip: return;
        case PKind::Choice:
        case PKind::Seq:
            for (const auto& c : p->children) collect_rules(c, out);
            return;
        case PKind::Try:
        case PKind::Alap: collect_rules(p->child, out); return;
    }
}
inline std::vector<std::pair<Rule, bool>> collect_rules(const ProgramPtr& p) {
    std::vector<std::pair<Rule, bool>> out;
    collect_rules(p, out);
    return out;
}

/// Rewrites every rule of a program; structure is kept.
inline ProgramPtr map_rules(const ProgramPtr& p, const std::function<Rule(const Rule&)>& f) {
    switch (p->kind) {
        case PKind::RuleStep: return rule_step(f(p->rule), p->spo);
        case PKind::Skip: return p;
        case PKind::Choice:
        case PKind::Seq: {
            std::vector<ProgramPtr> cs;
            for (const auto& c : p->children) cs.push_back(map_rules(c, f));
            auto q = std::make_shared<Program>(*p);
            q->children = std::move(cs);
            return q;
        }
        case PKind::Try:
        case PKind::Alap: {
            auto q = std::make_shared<Program>(*p);
            q->child = map_rules(p->child, f);
            return q;
        }
    }
    throw Error("map_rules: bad program");
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct ExecOptions {
    uint64_t seed = 0;
    long long max_steps = 10000;
};

struct ExecStats {
    long long steps = 0;
    std::vector<long long> alap_iterations;  // one entry per completed ↓ loop
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

namespace detail {

/// Single-derivation interpreter. Nondeterminism (match and branch selection)
/// is resolved by a seeded uniform draw; dead ends backtrack through match and
/// choice points. A completed try/alap commits to its chosen result.
class Executor {
public:
    Executor(const ExecOptions& opts) : opts_(opts), rng_(opts.seed) {}

    std::optional<LocatedGraph> execute(const ProgramPtr& prog, const LocatedGraph& lg) {
        check_program(prog);
        if (!(in_interface(prog) == lg.marking.dom))
            throw Error("execute: program interface differs from the marked interface");
        std::optional<LocatedGraph> out;
        run(prog, lg, [&](const LocatedGraph& h, const PartialMap&) {
            out = h;
            return true;
        });
        return out;
    }

    ExecStats stats;

private:
    using Cont = std::function<bool(const LocatedGraph&, const PartialMap&)>;

    PartialMap identity_partial(const TypedGraph& x) { return as_partial(identity_morphism(x)); }

    void count_step() {
        if (++stats.steps > opts_.max_steps)
            throw BudgetExceeded("step budget of " + std::to_string(opts_.max_steps) +
                                 " exceeded");
    }

    // Fisher-Yates with raw engine draws: the sequence depends only on the
    // seed, not on the standard library's distribution internals.
    template <class T>
    std::vector<T> shuffled(std::vector<T> xs) {
        for (size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[rng_() % i]);
        return xs;
    }

    bool run(const ProgramPtr& p, const LocatedGraph& lg, const Cont& k) {
        switch (p->kind) {
            case PKind::Skip: return k(lg, identity_partial(p->iface));
            case PKind::RuleStep: {
                for (const Morphism& m : shuffled(find_matches(p->rule, lg, p->spo))) {
                    count_step();
                    DirectTransformation t = apply_at(p->rule, lg.graph, m, p->spo, fresh_);
                    if (k(t.result, interface_map(p->rule))) return true;
                }
                return false;
            }
            case PKind::Choice: {
                for (const ProgramPtr& c : shuffled(p->children))
                    if (run(c, lg, k)) return true;
                return false;
            }
            case PKind::Seq: return run_seq(p->children, 0, lg, std::nullopt, k);
            case PKind::Try: {
                bool produced = false;
                bool done = run(p->child, lg, [&](const LocatedGraph& h, const PartialMap& i) {
                    produced = true;
                    return k(h, i);
                });
                if (done) return true;
                if (produced) return false;  // the body had derivations; identity is not offered
                return k(lg, identity_partial(in_interface(p->child)));
            }
            case PKind::Alap: return run_alap(p, lg, k);
        }
        return false;
    }

    bool run_seq(const std::vector<ProgramPtr>& steps, size_t idx, const LocatedGraph& lg,
                 std::optional<PartialMap> acc, const Cont& k) {
        if (idx == steps.size())
            return k(lg, acc ? *acc : identity_partial(lg.marking.dom));
        return run(steps[idx], lg, [&](const LocatedGraph& h, const PartialMap& i) {
            PartialMap next = acc ? compose(*acc, i) : i;
            return run_seq(steps, idx + 1, h, std::move(next), k);
        });
    }

    /// One Fix(P) iteration: body result re-anchored at the input interface via
    /// h ∘ i. Results that drop interface items (partial i) or change nothing
    /// (isomorphic located graph) do not count as progress; the loop stops when
    /// no progressing iteration exists.
    bool run_alap(const ProgramPtr& p, const LocatedGraph& lg, const Cont& k) {
        const TypedGraph& x = in_interface(p->child);
        LocatedGraph state = lg;
        long long iterations = 0;
        for (;;) {
            std::optional<LocatedGraph> next;
            run(p->child, state, [&](const LocatedGraph& h, const PartialMap& i) {
                if (!i.total()) return false;
                Morphism remark{x, h.graph, {}, {}};
                for (const auto& [a, b] : i.node_map) remark.node_map[a] = h.marking.at_node(b);
                for (const auto& [a, b] : i.edge_map) remark.edge_map[a] = h.marking.at_edge(b);
                LocatedGraph cand{h.graph, remark};
                if (located_isomorphic(cand, state)) return false;
                next = std::move(cand);
                return true;
            });
            if (!next) break;
            state = *next;
            ++iterations;
            if (iterations > opts_.max_steps)
                throw BudgetExceeded("alap iteration budget exceeded");
        }
        stats.alap_iterations.push_back(iterations);
        return k(state, identity_partial(x));
    }

    ExecOptions opts_;
    std::mt19937_64 rng_;
    ExecFreshIds fresh_;
};

}  // namespace detail

struct ExecOutcome {
    LocatedGraph result;
    ExecStats stats;
};

/// Runs one seeded derivation of prog from lg. Throws when the program admits
/// no derivation or the step budget is exhausted.
inline ExecOutcome execute(const ProgramPtr& prog, const LocatedGraph& lg,
                           const ExecOptions& opts = {}) {
    detail::Executor ex(opts);
    std::optional<LocatedGraph> out = ex.execute(prog, lg);
    if (!out) throw Error("execute: the program admits no derivation here");
    return ExecOutcome{*out, ex.stats};
}

// ---------------------------------------------------------------------------
// Bounded exhaustive execution
// ---------------------------------------------------------------------------

struct AllOptions {
    size_t max_results = 512;
    long long max_steps = 100000;
};

struct AllResults {
    std::vector<LocatedGraph> results;  // deduplicated up to located isomorphism
    bool complete = true;
};

namespace detail {

/// Breadth-first enumeration of the nondeterministic semantics ⟦P⟧ up to
/// bounds; result sets are deduplicated up to located isomorphism.
class AllExecutor {
public:
    AllExecutor(const AllOptions& opts) : opts_(opts) {}

    AllResults run_all(const ProgramPtr& prog, const LocatedGraph& lg) {
        check_program(prog);
        if (!(in_interface(prog) == lg.marking.dom))
            throw Error("execute_all: program interface differs from the marked interface");
        AllResults out;
        for (auto& [h, i] : enumerate(prog, lg)) push_unique(out.results, h);
        out.complete = complete_;
        return out;
    }

private:
    using Outcome = std::pair<LocatedGraph, PartialMap>;

    static void push_unique(std::vector<LocatedGraph>& xs, const LocatedGraph& h) {
        for (const LocatedGraph& x : xs)
            if (located_isomorphic(x, h)) return;
        xs.push_back(h);
    }
    static void push_unique(std::vector<Outcome>& xs, Outcome o) {
        for (const Outcome& x : xs)
            if (x.second == o.second && located_isomorphic(x.first, o.first)) return;
        xs.push_back(std::move(o));
    }

    bool budget_ok() {
        if (steps_ > opts_.max_steps) {
            complete_ = false;
            return false;
        }
        return true;
    }

    std::vector<Outcome> enumerate(const ProgramPtr& p, const LocatedGraph& lg) {
        std::vector<Outcome> out;
        switch (p->kind) {
            case PKind::Skip:
                out.emplace_back(lg, as_partial(identity_morphism(p->iface)));
                return out;
            case PKind::RuleStep: {
                for (const Morphism& m : find_matches(p->rule, lg, p->spo)) {
                    if (++steps_, !budget_ok()) break;
                    DirectTransformation t = apply_at(p->rule, lg.graph, m, p->spo, fresh_);
                    push_unique(out, {t.result, interface_map(p->rule)});
                }
                return out;
            }
            case PKind::Choice: {
                for (const auto& c : p->children)
                    for (auto& o : enumerate(c, lg)) push_unique(out, std::move(o));
                return out;
            }
            case PKind::Seq: {
                std::vector<Outcome> cur;
                cur.emplace_back(lg, as_partial(identity_morphism(in_interface(p))));
                for (const auto& step : p->children) {
                    std::vector<Outcome> next;
                    for (const auto& [h, i] : cur)
                        for (auto& [h2, i2] : enumerate(step, h))
                            push_unique(next, {h2, compose(i, i2)});
                    cur = std::move(next);
                    if (cur.size() > opts_.max_results) {
                        complete_ = false;
                        cur.resize(opts_.max_results);
                    }
                }
                return cur;
            }
            case PKind::Try: {
                out = enumerate(p->child, lg);
                if (out.empty())
                    out.emplace_back(lg, as_partial(identity_morphism(in_interface(p->child))));
                return out;
            }
            case PKind::Alap: return enumerate_alap(p, lg);
        }
        return out;
    }

    std::vector<Outcome> enumerate_alap(const ProgramPtr& p, const LocatedGraph& lg) {
        const TypedGraph& x = in_interface(p->child);
        std::vector<LocatedGraph> frontier{lg}, visited{lg}, terminal;
        while (!frontier.empty() && budget_ok()) {
            std::vector<LocatedGraph> next;
            for (const LocatedGraph& s : frontier) {
                bool progressed = false;
                for (const auto& [h, i] : enumerate(p->child, s)) {
                    if (!i.total()) continue;
                    Morphism remark{x, h.graph, {}, {}};
                    for (const auto& [a, b] : i.node_map) remark.node_map[a] = h.marking.at_node(b);
                    for (const auto& [a, b] : i.edge_map) remark.edge_map[a] = h.marking.at_edge(b);
                    LocatedGraph cand{h.graph, remark};
                    if (located_isomorphic(cand, s)) continue;
                    progressed = true;
                    bool seen = false;
                    for (const LocatedGraph& v : visited)
                        if (located_isomorphic(v, cand)) {
                            seen = true;
                            break;
                        }
                    if (!seen) {
                        visited.push_back(cand);
                        next.push_back(cand);
                        if (visited.size() > opts_.max_results) complete_ = false;
                    }
                }
                if (!progressed) push_unique(terminal, s);
            }
            frontier = std::move(next);
            if (!complete_) break;
        }
        std::vector<Outcome> out;
        for (const LocatedGraph& t : terminal)
            out.emplace_back(t, as_partial(identity_morphism(x)));
        return out;
    }

    AllOptions opts_;
    long long steps_ = 0;
    bool complete_ = true;
    ExecFreshIds fresh_;
};

}  // namespace detail

/// Enumerates derivation results of prog from lg up to the given bounds,
/// deduplicated up to isomorphism. `complete` is false when a bound was hit.
inline AllResults execute_all(const ProgramPtr& prog, const LocatedGraph& lg,
                              const AllOptions& opts = {}) {
    detail::AllExecutor ex(opts);
    return ex.run_all(prog, lg);
}

}  // namespace graphmend
