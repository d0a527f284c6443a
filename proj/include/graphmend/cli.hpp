#pragma once

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "graphmend/dot.hpp"
#include "graphmend/emf.hpp"
#include "graphmend/json_io.hpp"

namespace graphmend {

namespace cli_detail {

inline json violations_to_json(const std::vector<Violation>& vs) {
    json arr = json::array();
    for (const Violation& v : vs)
        arr.push_back({{"property", v.property}, {"detail", v.detail}, {"items", v.items}});
    return arr;
}

inline long long default_max_steps() {
    if (const char* env = std::getenv("GRAPH_MEND_MAX_STEPS")) {
        try {
            return std::stoll(env);
        } catch (...) {
            throw ParseError("GRAPH_MEND_MAX_STEPS is not a number");
        }
    }
    return 10000;
}

/// insert an index before the extension: out.json -> out.2.json
inline std::string indexed_path(const std::string& path, size_t i) {
    size_t dot = path.rfind('.');
    size_t slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "." + std::to_string(i);
    return path.substr(0, dot) + "." + std::to_string(i) + path.substr(dot);
}

inline std::string dot_path(const std::string& path) {
    size_t dot = path.rfind('.');
    size_t slash = path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ".dot";
    return path.substr(0, dot) + ".dot";
}

inline void emit_graph(const TypedGraph& g, const TypeGraph& tg, const std::string& out,
                       bool dot) {
    if (out.empty()) {
        if (dot)
            std::cout << to_dot(g, tg);
        else
            std::cout << to_json(g).dump(2) << "\n";
        return;
    }
    save_json_file(out, to_json(g));
    if (dot) {
        std::ofstream df(dot_path(out));
        df << to_dot(g, tg);
    }
}

struct CommonArgs {
    std::string typegraph;
    std::string graph;
    std::string constraint;
    std::string program;
    std::string out;
    uint64_t seed = 0;
    long long max_steps = 0;  // 0: use default/env
    bool all = false;
    bool dot = false;
    bool trace = false;
    int emfk = 0;

    long long steps() const { return max_steps > 0 ? max_steps : default_max_steps(); }
};

inline int cmd_validate(const CommonArgs& args) {
    TypeGraph tg_raw;
    json report;
    json tgj = load_json_file(args.typegraph);
    // assemble without the parse-side validation so violations reach the
    // report instead of aborting
    try {
        for (const json& n : tgj.at("nodes")) tg_raw.add_node(n.at("id").get<std::string>());
        for (const json& e : tgj.at("edges"))
            tg_raw.add_edge(e.at("id").get<std::string>(), e.at("src").get<std::string>(),
                            e.at("tgt").get<std::string>(), e.value("containment", false));
        for (const json& o : tgj.value("opposites", json::array()))
            tg_raw.add_opposite(o.at(0).get<std::string>(), o.at(1).get<std::string>());
    } catch (const json::exception& e) {
        throw ParseError(std::string("type graph: ") + e.what());
    }
    std::vector<Violation> tgv = validate_type_graph(tg_raw);
    report["typeGraph"] = {{"ok", tgv.empty()}, {"violations", violations_to_json(tgv)}};
    bool ok = tgv.empty();
    if (!args.graph.empty()) {
        TypedGraph g = typed_graph_from_json(load_json_file(args.graph));
        std::vector<Violation> gv = validate_typed_graph(g, tg_raw);
        std::vector<Violation> ev = emf_violations(g, tg_raw);
        report["graph"] = {{"ok", gv.empty()},
                           {"violations", violations_to_json(gv)},
                           {"emf", {{"ok", ev.empty()}, {"violations", violations_to_json(ev)}}}};
        ok = ok && gv.empty() && ev.empty();
    }
    report["ok"] = ok;
    std::cout << report.dump(2) << "\n";
    return ok ? 0 : 1;
}

inline int cmd_check(const CommonArgs& args) {
    TypeGraph tg = type_graph_from_json(load_json_file(args.typegraph));
    TypedGraph g = typed_graph_from_json(load_json_file(args.graph));
    std::vector<Violation> gv = validate_typed_graph(g, tg);
    if (!gv.empty())
        throw ParseError("graph is not typed over the type graph: " + gv.front().detail);
    ConditionPtr d = constraint_from_json(load_json_file(args.constraint));
    bool ok = satisfies_constraint(g, d);
    std::cout << json{{"satisfied", ok}}.dump(2) << "\n";
    return ok ? 0 : 1;
}

inline RepairPlan synthesize_from_args(const TypeGraph& tg, const CommonArgs& args) {
    if (args.emfk > 0) {
        EmfkConstraintSet set = generate_emfk(tg, args.emfk);
        return emfk_repair_program(tg, {}, set.instances);
    }
    ConditionPtr d = constraint_from_json(load_json_file(args.constraint));
    SynthesisOptions opts;
    opts.type_graph = &tg;
    return synthesize_legit(d, opts);
}

inline int cmd_synthesize(const CommonArgs& args) {
    TypeGraph tg = type_graph_from_json(load_json_file(args.typegraph));
    RepairPlan plan;
    try {
        plan = synthesize_from_args(tg, args);
    } catch (const NotLegit& e) {
        std::cerr << "not legit: " << e.what() << "\n";
        return 1;
    } catch (const NotProper& e) {
        std::cerr << "not proper: " << e.what() << "\n";
        return 1;
    } catch (const NoEstablishedSequentialization& e) {
        std::cerr << "no sequentialization: " << e.what() << "\n";
        return 1;
    }
    json out = program_to_json(plan.program);
    if (args.trace) {
        json trace = json::array();
        for (const std::string& line : plan.provenance) trace.push_back(line);
        out = json{{"program", out}, {"trace", trace}};
    }
    if (args.out.empty())
        std::cout << out.dump(2) << "\n";
    else
        save_json_file(args.out, out);
    return 0;
}

inline ProgramPtr load_program(const std::string& path) {
    json j = load_json_file(path);
    if (j.contains("program")) j = j.at("program");
    return program_from_json(j);
}

inline int run_repair(const CommonArgs& args, const TypeGraph& tg, const ProgramPtr& prog,
                      const TypedGraph& g) {
    check_program(prog);
    ExecOptions eo{args.seed, args.steps()};
    if (args.all) {
        AllOptions ao;
        ao.max_steps = args.steps();
        AllResults all = execute_all(prog, locate(g), ao);
        if (!all.complete)
            std::cerr << "warning: exploration bounds hit, result set incomplete\n";
        if (all.results.empty()) {
            std::cerr << "the program admits no derivation on this graph\n";
            return 1;
        }
        if (args.out.empty()) {
            json arr = json::array();
            for (const LocatedGraph& r : all.results) arr.push_back(to_json(r.graph));
            std::cout << arr.dump(2) << "\n";
        } else {
            for (size_t i = 0; i < all.results.size(); ++i)
                emit_graph(all.results[i].graph, tg,
                           all.results.size() == 1 ? args.out : indexed_path(args.out, i + 1),
                           args.dot);
            std::cerr << all.results.size() << " result(s) written\n";
        }
        return 0;
    }
    ExecOutcome out = execute(prog, locate(g), eo);
    emit_graph(out.result.graph, tg, args.out, args.dot);
    return 0;
}

inline int cmd_repair(const CommonArgs& args) {
    TypeGraph tg = type_graph_from_json(load_json_file(args.typegraph));
    TypedGraph g = typed_graph_from_json(load_json_file(args.graph));
    std::vector<Violation> gv = validate_typed_graph(g, tg);
    if (!gv.empty())
        throw ParseError("graph is not typed over the type graph: " + gv.front().detail);
    ProgramPtr prog;
    if (!args.program.empty()) {
        prog = load_program(args.program);
    } else {
        RepairPlan plan = synthesize_from_args(tg, args);
        prog = plan.program;
    }
    return run_repair(args, tg, prog, g);
}

inline int cmd_complete(const CommonArgs& args) {
    TypeGraph tg = type_graph_from_json(load_json_file(args.typegraph));
    TypedGraph g = typed_graph_from_json(load_json_file(args.graph));
    std::vector<Violation> gv = validate_typed_graph(g, tg);
    if (!gv.empty())
        throw ParseError("graph is not typed over the type graph: " + gv.front().detail);
    CompletionOutcome out = emf_complete_outcome(g, tg, {args.seed, args.steps()});
    if (!out.node_count_preserved)
        std::cerr << "note: the completion plan does not preserve node counts; the result is "
                     "checked against the k-bounded constraints only\n";
    emit_graph(out.result, tg, args.out, args.dot);
    std::vector<Violation> ev = emf_violations(out.result, tg);
    if (!ev.empty()) {
        std::cerr << "completion left EMF violations (k-bounded repair): " << ev.front().property
                  << "\n";
        return 1;
    }
    return 0;
}

}  // namespace cli_detail

/// Entry point of the graph-mend tool. Exit codes: 0 ok, 1 semantic failure,
/// 2 usage or parse/IO errors.
inline int run_cli(int argc, char** argv) {
    using cli_detail::CommonArgs;
    CLI::App app{"graph-mend: repair-program synthesis and execution for typed graphs"};
    app.require_subcommand(1);
    CommonArgs args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--typegraph", args.typegraph, "type graph JSON file")->required();
        sub->add_option("--graph", args.graph, "typed graph JSON file")->required();
    };

    CLI::App* validate = app.add_subcommand(
        "validate", "validate a type graph and optionally a typed graph (incl. EMF conditions)");
    validate->add_option("--typegraph", args.typegraph, "type graph JSON file")->required();
    validate->add_option("--graph", args.graph, "typed graph JSON file");

    CLI::App* check = app.add_subcommand("check", "check a typed graph against a constraint");
    add_common(check);
    check->add_option("--constraint", args.constraint, "constraint JSON file")->required();

    CLI::App* synth = app.add_subcommand("synthesize", "synthesize a repair program");
    synth->add_option("--typegraph", args.typegraph, "type graph JSON file")->required();
    synth->add_option("--constraint", args.constraint, "constraint JSON file");
    synth->add_option("--emfk", args.emfk, "use the full EMFk constraint set for this k");
    synth->add_flag("--trace", args.trace, "include the construction trace in the output");
    synth->add_option("--out", args.out, "output program file (default: stdout)");

    CLI::App* repair = app.add_subcommand(
        "repair", "apply a repair program (or synthesize one from a constraint) to a graph");
    add_common(repair);
    repair->add_option("--program", args.program, "program JSON file");
    repair->add_option("--constraint", args.constraint, "constraint JSON file to synthesize from");
    repair->add_option("--emfk", args.emfk, "synthesize the EMFk completion program for this k");
    repair->add_option("--seed", args.seed, "derivation seed");
    repair->add_option("--max-steps", args.max_steps,
                       "step budget (default 10000 or GRAPH_MEND_MAX_STEPS)");
    repair->add_flag("--all", args.all, "write every isomorphism-distinct result");
    repair->add_flag("--dot", args.dot, "also render DOT output");
    repair->add_option("--out", args.out, "output graph file (default: stdout)");

    CLI::App* complete =
        app.add_subcommand("complete", "complete a typed graph to an EMF model graph");
    add_common(complete);
    complete->add_option("--seed", args.seed, "derivation seed");
    complete->add_option("--max-steps", args.max_steps, "step budget");
    complete->add_flag("--dot", args.dot, "also render DOT output");
    complete->add_option("--out", args.out, "output graph file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cli_detail::cmd_validate(args);
        if (check->parsed()) return cli_detail::cmd_check(args);
        if (synth->parsed()) {
            if (args.constraint.empty() == (args.emfk == 0)) {
                std::cerr << "exactly one of --constraint and --emfk is required\n";
                return 2;
            }
            return cli_detail::cmd_synthesize(args);
        }
        if (repair->parsed()) {
            int sources = (!args.program.empty()) + (!args.constraint.empty()) + (args.emfk > 0);
            if (sources != 1) {
                std::cerr << "exactly one of --program, --constraint, --emfk is required\n";
                return 2;
            }
            return cli_detail::cmd_repair(args);
        }
        if (complete->parsed()) return cli_detail::cmd_complete(args);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace graphmend
