#pragma once

// Tree decompositions: validation, width, exact and min-fill construction,
// rotation, bag colouring, and conversion of a coloured decomposition into a
// parse tree whose canonical evaluation is the decomposed graph.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "encoding.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "parse_tree.hpp"

namespace hrgraph {

struct TreeDecomposition {
    std::vector<Id> nodes;
    std::map<Id, Id> parent;  // child -> parent
    std::map<Id, std::set<Id>> bags;

    /// The unique parentless node, if there is exactly one.
    std::optional<Id> root() const {
        std::optional<Id> r;
        for (Id n : nodes) {
            if (parent.count(n)) continue;
            if (r) return std::nullopt;
            r = n;
        }
        return r;
    }

    const std::set<Id>& bag(Id n) const {
        static const std::set<Id> none;
        auto it = bags.find(n);
        return it == bags.end() ? none : it->second;
    }

    std::map<Id, std::vector<Id>> children() const {
        std::map<Id, std::vector<Id>> out;
        for (Id n : nodes) out[n];
        for (const auto& [c, p] : parent) out[p].push_back(c);
        for (auto& [n, cs] : out) std::sort(cs.begin(), cs.end());
        return out;
    }

    int depth(Id n) const {
        int d = 0;
        for (auto it = parent.find(n); it != parent.end(); it = parent.find(it->second)) {
            if (++d > static_cast<int>(nodes.size())) break;
        }
        return d;
    }
};

/// Verifies the tree shape and the three decomposition conditions, reporting the first failure.
inline std::optional<std::string> check_decomposition(const Graph& g, const TreeDecomposition& d) {
    if (auto err = validate_graph(g)) return "invalid graph: " + *err;
    if (d.nodes.empty()) return std::string("decomposition has no nodes");
    std::set<Id> node_set(d.nodes.begin(), d.nodes.end());
    if (node_set.size() != d.nodes.size()) return std::string("duplicate node id");
    for (const auto& [c, p] : d.parent) {
        if (!node_set.count(c) || !node_set.count(p)) return "parent pair (" + std::to_string(p) + ", " + std::to_string(c) + ") mentions an unknown node";
        if (c == p) return "node " + std::to_string(c) + " is its own parent";
    }
    for (const auto& [n, b] : d.bags)
        if (!node_set.count(n)) return "bag given for unknown node " + std::to_string(n);
    auto root = d.root();
    if (!root) return std::string("decomposition does not have exactly one root");
    for (Id n : d.nodes) {
        Id cur = n;
        std::size_t steps = 0;
        while (cur != *root) {
            cur = d.parent.at(cur);
            if (++steps > d.nodes.size()) return "parent relation has a cycle through node " + std::to_string(n);
        }
    }
    std::set<Id> verts(g.vertices.begin(), g.vertices.end());
    for (const auto& [n, b] : d.bags)
        for (Id v : b)
            if (!verts.count(v)) return "bag of node " + std::to_string(n) + " mentions unknown vertex " + std::to_string(v);

    for (const Edge& e : g.edges) {
        bool covered = std::any_of(d.nodes.begin(), d.nodes.end(), [&](Id n) {
            const auto& b = d.bag(n);
            return std::all_of(e.attach.begin(), e.attach.end(), [&](Id v) { return b.count(v) > 0; });
        });
        if (!covered) return "condition (1) violated: edge " + std::to_string(e.id) + " is not covered by any bag";
    }
    for (Id v : g.vertices) {
        int tops = 0;
        for (Id n : d.nodes) {
            if (!d.bag(n).count(v)) continue;
            auto it = d.parent.find(n);
            if (it == d.parent.end() || !d.bag(it->second).count(v)) ++tops;
        }
        if (tops == 0) return "condition (2) violated: vertex " + std::to_string(v) + " occurs in no bag";
        if (tops > 1) return "condition (2) violated: bags containing vertex " + std::to_string(v) + " are not connected";
    }
    for (const auto& [s, v] : g.sources)
        if (!d.bag(*root).count(v)) return "condition (3) violated: root bag misses the " + s.name + "-source";
    return std::nullopt;
}

/// Largest bag size minus one; -1 when every bag is empty.
inline int width(const TreeDecomposition& d) {
    if (d.nodes.empty()) throw InputError("width: decomposition has no nodes");
    int w = -1;
    for (Id n : d.nodes) w = std::max(w, static_cast<int>(d.bag(n).size()) - 1);
    return w;
}

/// Reverses parent pointers along the path from the current root to `new_root`.
inline TreeDecomposition rotate(const TreeDecomposition& d, Id new_root) {
    if (std::find(d.nodes.begin(), d.nodes.end(), new_root) == d.nodes.end())
        throw InputError("rotate: unknown node " + std::to_string(new_root));
    TreeDecomposition out = d;
    std::vector<Id> path{new_root};
    for (auto it = d.parent.find(new_root); it != d.parent.end(); it = d.parent.find(it->second)) {
        path.push_back(it->second);
        if (path.size() > d.nodes.size()) throw InputError("rotate: parent relation has a cycle");
    }
    out.parent.erase(new_root);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) out.parent[path[i + 1]] = path[i];
    return out;
}

namespace detail {

/// Gaifman graph plus a clique on the sources, over indices 0..n-1.
struct DecompGraph {
    std::vector<Id> ids;
    std::vector<std::set<int>> adj;

    explicit DecompGraph(const Graph& g) {
        ids = g.vertices;
        std::sort(ids.begin(), ids.end());
        std::map<Id, int> index;
        for (int i = 0; i < static_cast<int>(ids.size()); ++i) index[ids[i]] = i;
        adj.resize(ids.size());
        auto link = [&](int a, int b) {
            if (a == b) return;
            adj[a].insert(b);
            adj[b].insert(a);
        };
        for (const Edge& e : g.edges)
            for (Id a : e.attach)
                for (Id b : e.attach) link(index.at(a), index.at(b));
        std::vector<int> srcs;
        for (const auto& [s, v] : g.sources) srcs.push_back(index.at(v));
        for (int a : srcs)
            for (int b : srcs) link(a, b);
    }
};

/// Decomposition induced by eliminating vertices in `order`; node ids are vertex indices.
inline TreeDecomposition from_elimination(const Graph& g, const DecompGraph& h, const std::vector<int>& order) {
    const int n = static_cast<int>(h.ids.size());
    TreeDecomposition d;
    if (n == 0) {
        d.nodes = {0};
        d.bags[0] = {};
    } else {
        std::vector<int> pos(n);
        for (int i = 0; i < n; ++i) pos[order[i]] = i;
        std::vector<std::set<int>> fill = h.adj;
        std::vector<int> roots;
        for (int v : order) {
            std::vector<int> later;
            for (int w : fill[v])
                if (pos[w] > pos[v]) later.push_back(w);
            for (int a : later)
                for (int b : later)
                    if (a != b) fill[a].insert(b);
            d.nodes.push_back(v);
            std::set<Id>& bag = d.bags[v];
            bag.insert(h.ids[v]);
            for (int w : later) bag.insert(h.ids[w]);
            if (later.empty()) {
                roots.push_back(v);
            } else {
                int p = *std::min_element(later.begin(), later.end(), [&](int a, int b) { return pos[a] < pos[b]; });
                d.parent[v] = p;
            }
        }
        // Join the components of an elimination forest under the last root.
        for (std::size_t i = 0; i + 1 < roots.size(); ++i) d.parent[roots[i]] = roots.back();
        std::sort(d.nodes.begin(), d.nodes.end());
    }
    std::set<Id> sources;
    for (const auto& [s, v] : g.sources) sources.insert(v);
    for (Id node : d.nodes) {
        const auto& b = d.bag(node);
        if (std::includes(b.begin(), b.end(), sources.begin(), sources.end())) return rotate(d, node);
    }
    throw InputError("internal: no bag covers the sources");
}

}  // namespace detail

struct ExactTreewidth {
    int width;
    TreeDecomposition decomposition;
};

/// Minimum width over decompositions whose root bag holds every source,
/// by dynamic programming over vertex subsets.
inline ExactTreewidth treewidth_exact(const Graph& g, const Limits& limits = {}) {
    require_valid(g, "treewidth_exact");
    const int n = static_cast<int>(g.vertices.size());
    if (n > limits.max_exact_vertices)
        throw ResourceError("treewidth_exact: graph has " + std::to_string(n) + " vertices, bound is " +
                            std::to_string(limits.max_exact_vertices));
    if (n > 24) throw ResourceError("treewidth_exact: more than 24 vertices is not supported");
    detail::DecompGraph h(g);
    using Mask = std::uint32_t;
    std::vector<std::uint32_t> nbr(n, 0);
    for (int v = 0; v < n; ++v)
        for (int w : h.adj[v]) nbr[v] |= Mask{1} << w;

    // Vertices outside S ∪ {v} reachable from v through S.
    auto q_size = [&](Mask s, int v) {
        Mask seen = Mask{1} << v, frontier = Mask{1} << v, outside = 0;
        while (frontier) {
            int u = std::countr_zero(frontier);
            frontier &= frontier - 1;
            Mask next = nbr[u] & ~seen;
            seen |= next;
            outside |= next & ~s;
            frontier |= next & s;
        }
        return std::popcount(outside);
    };

    const Mask full = n == 0 ? 0 : static_cast<Mask>((std::uint64_t{1} << n) - 1);
    std::vector<int> tw(std::size_t{full} + 1, std::numeric_limits<int>::max());
    std::vector<signed char> last(std::size_t{full} + 1, -1);
    tw[0] = -1;
    for (Mask s = 1; s <= full && s != 0; ++s) {
        for (Mask rest = s; rest; rest &= rest - 1) {
            int v = std::countr_zero(rest);
            Mask without = s & ~(Mask{1} << v);
            int cand = std::max(tw[without], q_size(without, v));
            if (cand < tw[s]) {
                tw[s] = cand;
                last[s] = static_cast<signed char>(v);
            }
        }
        if (s == full) break;
    }
    std::vector<int> order(n);
    for (Mask s = full; s; s &= ~(Mask{1} << last[s])) order[std::popcount(s) - 1] = last[s];
    TreeDecomposition d = detail::from_elimination(g, h, order);
    return {std::max(tw[full], n == 0 ? -1 : 0), std::move(d)};
}

/// Min-fill elimination on the Gaifman graph (plus a source clique), ties broken by vertex id.
inline TreeDecomposition decompose_minfill(const Graph& g) {
    require_valid(g, "decompose_minfill");
    detail::DecompGraph h(g);
    const int n = static_cast<int>(h.ids.size());
    std::vector<std::set<int>> adj = h.adj;
    std::vector<bool> gone(n, false);
    std::vector<int> order;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        long best_fill = -1;
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            long fill = 0;
            for (auto a = adj[v].begin(); a != adj[v].end(); ++a)
                for (auto b = std::next(a); b != adj[v].end(); ++b)
                    if (!adj[*a].count(*b)) ++fill;
            if (best < 0 || fill < best_fill) {
                best = v;
                best_fill = fill;
            }
        }
        for (int a : adj[best])
            for (int b : adj[best])
                if (a != b) adj[a].insert(b);
        for (int a : adj[best]) adj[a].erase(best);
        adj[best].clear();
        gone[best] = true;
        order.push_back(best);
    }
    return detail::from_elimination(g, h, order);
}

/// Vertex colouring by source labels.
using Coloring = std::map<Id, SourceLabel>;

inline std::optional<std::string> check_coloring(const Graph& g, const TreeDecomposition& d, const Coloring& col, const SortSet& tau) {
    for (Id v : g.vertices) {
        auto it = col.find(v);
        if (it == col.end()) return "vertex " + std::to_string(v) + " is not coloured";
        if (!tau.count(it->second)) return "vertex " + std::to_string(v) + " coloured outside the sort";
    }
    for (Id n : d.nodes) {
        std::set<SourceLabel> seen;
        for (Id v : d.bag(n))
            if (!seen.insert(col.at(v)).second) return "two vertices of bag " + std::to_string(n) + " share colour " + col.at(v).name;
    }
    for (const auto& [s, v] : g.sources)
        if (col.at(v) != s) return "the " + s.name + "-source is not coloured " + s.name;
    return std::nullopt;
}

/// Top-down colouring: sources keep their own label, every other vertex takes the
/// smallest label not used in the bag where it first appears.
inline Coloring color_decomposition(const Graph& g, const TreeDecomposition& d, const SortSet& tau) {
    if (auto err = check_decomposition(g, d)) throw InputError("color_decomposition: " + *err);
    if (width(d) > static_cast<int>(tau.size()) - 1)
        throw InputError("color_decomposition: width " + std::to_string(width(d)) + " too large for a sort of " +
                         std::to_string(tau.size()) + " labels");
    if (!is_subset(g.sort(), tau)) throw InputError("color_decomposition: a source label of the graph is outside the sort");
    Coloring col;
    for (const auto& [s, v] : g.sources) col[v] = s;
    const auto kids = d.children();
    std::function<void(Id)> visit = [&](Id n) {
        std::set<SourceLabel> used;
        for (Id v : d.bag(n))
            if (auto it = col.find(v); it != col.end()) used.insert(it->second);
        for (Id v : d.bag(n)) {
            if (col.count(v)) continue;
            auto free = std::find_if(tau.begin(), tau.end(), [&](const SourceLabel& s) { return !used.count(s); });
            col[v] = *free;
            used.insert(*free);
        }
        for (Id c : kids.at(n)) visit(c);
    };
    visit(*d.root());
    return col;
}

/// Builds, bottom-up over the decomposition, a parse tree over the labels of `tau`
/// whose canonical evaluation is isomorphic to `g`.
inline ParseTree decomposition_to_parse_tree(const Graph& g, const TreeDecomposition& d, const Coloring& col, const SortSet& tau) {
    if (auto err = check_decomposition(g, d)) throw InputError("decomposition_to_parse_tree: " + *err);
    if (auto err = check_coloring(g, d, col, tau)) throw InputError("decomposition_to_parse_tree: " + *err);
    if (!is_subset(g.sort(), tau)) throw InputError("decomposition_to_parse_tree: graph sort not inside the label set");

    // node(e): the bag closest to the root holding every endpoint of e.
    std::map<Id, std::vector<const Edge*>> placed;
    for (const Edge& e : g.edges) {
        std::optional<Id> best;
        for (Id n : d.nodes) {
            const auto& b = d.bag(n);
            if (!std::all_of(e.attach.begin(), e.attach.end(), [&](Id v) { return b.count(v) > 0; })) continue;
            if (!best || d.depth(n) < d.depth(*best)) best = n;
        }
        placed[*best].push_back(&e);
    }
    auto colors_of = [&](const std::set<Id>& vs) {
        SortSet out;
        for (Id v : vs) out.insert(col.at(v));
        return out;
    };
    const auto kids = d.children();
    std::function<Tree(Id)> build = [&](Id n) {
        Tree acc = parse_leaf(ParseLabel::empty(colors_of(d.bag(n))));
        for (const Edge* e : placed[n]) {
            std::vector<SourceLabel> ss;
            for (Id v : e->attach) ss.push_back(col.at(v));
            acc = tree_compose(acc, parse_leaf(ParseLabel::edge_of(e->label, ss)));
        }
        for (Id c : kids.at(n)) {
            std::set<Id> shared;
            const auto& bn = d.bag(n);
            const auto& bc = d.bag(c);
            std::set_intersection(bn.begin(), bn.end(), bc.begin(), bc.end(), std::inserter(shared, shared.end()));
            acc = tree_compose(acc, parse_append(ParseLabel::restrict(colors_of(shared)), build(c)));
        }
        return acc;
    };
    Tree body = build(*d.root());
    return ParseTree(parse_append(ParseLabel::restrict(g.sort()), body), tau);
}

/// Incidence encoding of the graph extended with node, bag(v, n) and parent(n, m)
/// (n the parent of m). Node elements are numbered after the graph's ids.
inline Structure encode_decomposition(const Graph& g, const TreeDecomposition& d) {
    if (auto err = check_decomposition(g, d)) throw InputError("encode_decomposition: " + *err);
    Structure s = encode_graph(g);
    std::vector<Id> nodes = d.nodes;
    std::sort(nodes.begin(), nodes.end());
    std::map<Id, Id> elem;
    Id next = g.max_id() + 1;
    for (Id n : nodes) {
        elem[n] = next;
        s.universe.push_back(next++);
    }
    s.normalize();
    s.declare("node", 1);
    s.declare("bag", 2);
    s.declare("parent", 2);
    for (Id n : nodes) s.add("node", {elem[n]});
    for (Id n : nodes)
        for (Id v : d.bag(n)) s.add("bag", {v, elem[n]});
    for (const auto& [c, p] : d.parent) s.add("parent", {elem[p], elem[c]});
    return s;
}

}  // namespace hrgraph
