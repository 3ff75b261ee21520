#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "labels.hpp"

namespace hrgraph {

/// Opaque vertex/edge identifier. Vertices and edges of one graph share the id space.
using Id = int;

struct Edge {
    Id id = 0;
    EdgeLabel label;
    std::vector<Id> attach;

    bool operator==(const Edge&) const = default;
};

/// Concrete graph with sources. Graphs are compared by isomorphism, never by ids.
struct Graph {
    std::vector<Id> vertices;
    std::vector<Edge> edges;
    std::map<SourceLabel, Id> sources;

    SortSet sort() const {
        SortSet s;
        for (const auto& [label, v] : sources) s.insert(label);
        return s;
    }

    /// Largest id in use, or -1 for the empty graph.
    Id max_id() const {
        Id m = -1;
        for (Id v : vertices) m = std::max(m, v);
        for (const Edge& e : edges) m = std::max(m, e.id);
        return m;
    }

    bool has_vertex(Id v) const { return std::find(vertices.begin(), vertices.end(), v) != vertices.end(); }

    std::optional<Id> source(const SourceLabel& s) const {
        auto it = sources.find(s);
        if (it == sources.end()) return std::nullopt;
        return it->second;
    }

    /// Sorts vertices and edges by id.
    Graph& normalize() {
        std::sort(vertices.begin(), vertices.end());
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });
        return *this;
    }
};

/// Returns std::nullopt when every graph invariant holds, otherwise a description
/// of the first violation found.
inline std::optional<std::string> validate_graph(const Graph& g) {
    std::set<Id> verts;
    for (Id v : g.vertices)
        if (!verts.insert(v).second) return "duplicate vertex id " + std::to_string(v);
    std::set<Id> edge_ids;
    std::map<std::string, int> arities;
    for (const Edge& e : g.edges) {
        if (verts.count(e.id)) return "edge id " + std::to_string(e.id) + " is also a vertex id";
        if (!edge_ids.insert(e.id).second) return "duplicate edge id " + std::to_string(e.id);
        if (e.label.arity < 1) return "edge label " + e.label.name + " has arity < 1";
        if (static_cast<int>(e.attach.size()) != e.label.arity)
            return "arity mismatch on edge " + std::to_string(e.id) + ": label " + e.label.name + " has arity " +
                   std::to_string(e.label.arity) + " but " + std::to_string(e.attach.size()) + " attached vertices";
        auto [it, fresh] = arities.emplace(e.label.name, e.label.arity);
        if (!fresh && it->second != e.label.arity) return "edge label " + e.label.name + " used with two arities";
        for (Id v : e.attach)
            if (!verts.count(v)) return "edge " + std::to_string(e.id) + " attached to unknown vertex " + std::to_string(v);
    }
    std::set<Id> images;
    for (const auto& [label, v] : g.sources) {
        if (label.name.empty()) return "empty source label";
        if (!verts.count(v)) return "source " + label.name + " maps to unknown vertex " + std::to_string(v);
        if (!images.insert(v).second) return "src not injective: vertex " + std::to_string(v) + " carries two source labels";
    }
    return std::nullopt;
}

inline void require_valid(const Graph& g, const char* what) {
    if (auto err = validate_graph(g)) throw InputError(std::string(what) + ": invalid graph: " + *err);
}

/// Vertex adjacency through shared edges (the Gaifman graph), self-loops omitted.
inline std::map<Id, std::set<Id>> gaifman_adjacency(const Graph& g) {
    std::map<Id, std::set<Id>> adj;
    for (Id v : g.vertices) adj[v];
    for (const Edge& e : g.edges)
        for (Id a : e.attach)
            for (Id b : e.attach)
                if (a != b) adj[a].insert(b);
    return adj;
}

}  // namespace hrgraph
