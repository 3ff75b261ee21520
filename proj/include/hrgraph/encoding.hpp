#pragma once

#include <string>

#include "graph.hpp"
#include "structure.hpp"

namespace hrgraph {

inline std::string edge_relation(const std::string& label) { return "r_" + label; }
inline std::string source_relation(const SourceLabel& s) { return "r_" + s.name; }

/// Incidence encoding: vertices and edges both become elements; r_a holds
/// (edge, attached vertices...) and r_s holds the s-source.
inline Structure encode_graph(const Graph& g) {
    require_valid(g, "encode_graph");
    Structure s;
    for (Id v : g.vertices) s.universe.push_back(v);
    for (const Edge& e : g.edges) s.universe.push_back(e.id);
    s.normalize();
    for (const Edge& e : g.edges) {
        const std::string name = edge_relation(e.label.name);
        s.declare(name, e.label.arity + 1);
        std::vector<Id> tuple{e.id};
        tuple.insert(tuple.end(), e.attach.begin(), e.attach.end());
        s.add(name, std::move(tuple));
    }
    for (const auto& [label, v] : g.sources) {
        const std::string name = source_relation(label);
        if (auto it = s.relations.find(name); it != s.relations.end())
            throw InputError("encode_graph: source label " + label.name + " collides with an edge label");
        s.declare(name, 1);
        s.add(name, {v});
    }
    return s;
}

}  // namespace hrgraph
