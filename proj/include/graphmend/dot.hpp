#pragma once

#include <sstream>

#include "graphmend/graph.hpp"

namespace graphmend {

namespace detail {

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

/// DOT rendering: containment edges carry a diamond at the source,
/// opposite-typed edge pairs collapse into one bidirectional edge labelled at
/// both ends.
inline std::string to_dot(const TypedGraph& g, const TypeGraph& tg,
                          const std::string& name = "G") {
    std::ostringstream os;
    os << "digraph " << detail::dot_quote(name) << " {\n";
    os << "  node [shape=box];\n";
    for (const Node& n : g.nodes)
        os << "  " << detail::dot_quote(n.id) << " [label=" << detail::dot_quote(n.id + ":" + n.type)
           << "];\n";
    std::set<Id> paired;
    for (const Edge& e : g.edges) {
        if (paired.count(e.id)) continue;
        std::optional<Id> opp_type = tg.opposite_of(e.type);
        const Edge* partner = nullptr;
        if (opp_type) {
            for (const Edge& f : g.edges)
                if (!paired.count(f.id) && f.id != e.id && f.type == *opp_type &&
                    f.src == e.tgt && f.tgt == e.src) {
                    partner = &f;
                    break;
                }
        }
        if (partner) {
            paired.insert(e.id);
            paired.insert(partner->id);
            os << "  " << detail::dot_quote(e.src) << " -> " << detail::dot_quote(e.tgt)
               << " [dir=both, label=" << detail::dot_quote(e.type + " / " + partner->type)
               << "];\n";
            continue;
        }
        os << "  " << detail::dot_quote(e.src) << " -> " << detail::dot_quote(e.tgt)
           << " [label=" << detail::dot_quote(e.id + ":" + e.type);
        if (tg.is_containment(e.type)) os << ", dir=both, arrowtail=diamond";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace graphmend
