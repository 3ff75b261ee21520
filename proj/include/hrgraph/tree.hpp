#pragma once

// Trees as a derived graph algebra: a tree is a graph of sort {root} whose
// binary edges point from parent to child and whose leaves carry unary edges.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <optional>
#include <string>
#include <vector>

#include "hr_algebra.hpp"

namespace hrgraph {

inline const SourceLabel kRootLabel{"root"};
inline const SourceLabel kAuxLabel{"aux"};

/// Returns std::nullopt when `g` is a well-formed tree.
inline std::optional<std::string> validate_tree(const Graph& g) {
    if (auto err = validate_graph(g)) return err;
    if (g.sort() != SortSet{kRootLabel}) return std::string("tree must have exactly the root source");
    const Id root = g.sources.at(kRootLabel);
    std::map<Id, int> in_degree;
    std::map<Id, std::vector<Id>> kids;
    std::map<Id, int> unary;
    for (const Edge& e : g.edges) {
        if (e.label.arity == 1) {
            ++unary[e.attach[0]];
        } else if (e.label.arity == 2) {
            ++in_degree[e.attach[1]];
            kids[e.attach[0]].push_back(e.attach[1]);
        } else {
            return "tree edge " + std::to_string(e.id) + " has arity " + std::to_string(e.label.arity);
        }
    }
    if (in_degree[root] != 0) return std::string("root has a parent");
    for (Id v : g.vertices)
        if (v != root && in_degree[v] != 1) return "node " + std::to_string(v) + " does not have exactly one parent";
    std::vector<Id> stack{root};
    std::set<Id> seen{root};
    while (!stack.empty()) {
        Id v = stack.back();
        stack.pop_back();
        for (Id c : kids[v])
            if (seen.insert(c).second) stack.push_back(c);
    }
    if (seen.size() != g.vertices.size()) return std::string("tree is not connected or contains a cycle");
    for (Id v : g.vertices)
        if (kids[v].empty() && unary[v] == 0) return "leaf " + std::to_string(v) + " carries no unary edge";
    return std::nullopt;
}

class Tree {
public:
    /// Wraps a graph, throwing InputError unless it is a tree.
    static Tree from_graph(Graph g) {
        if (auto err = validate_tree(g)) throw InputError("not a tree: " + *err);
        Tree t;
        t.g_ = std::move(g);
        return t;
    }

    const Graph& graph() const { return g_; }
    Id root() const { return g_.sources.at(kRootLabel); }

    /// Unary edges and (binary edge, child) pairs at each node.
    struct NodeView {
        std::vector<const Edge*> unary;
        std::vector<std::pair<const Edge*, Id>> children;
    };
    std::map<Id, NodeView> nodes() const {
        std::map<Id, NodeView> out;
        for (Id v : g_.vertices) out[v];
        for (const Edge& e : g_.edges) {
            if (e.label.arity == 1)
                out[e.attach[0]].unary.push_back(&e);
            else
                out[e.attach[0]].children.emplace_back(&e, e.attach[1]);
        }
        return out;
    }

    int height() const {
        auto view = nodes();
        std::function<int(Id)> h = [&](Id v) {
            int best = 0;
            for (const auto& [e, c] : view.at(v).children) best = std::max(best, 1 + h(c));
            return best;
        };
        return h(root());
    }

private:
    Graph g_;
};

/// A single root carrying one unary edge labelled `c`.
inline Tree tree_leaf(const EdgeLabel& c) {
    if (c.arity != 1) throw InputError("tree_leaf: label " + c.name + " is not unary");
    return Tree::from_graph(const_edge(c, {kRootLabel}));
}

/// rename_{root<->aux}(restrict_{aux}(b_(aux,root) || t)): a new root above t.
inline Tree tree_append(const EdgeLabel& b, const Tree& t) {
    if (b.arity != 2) throw InputError("tree_append: label " + b.name + " is not binary");
    Graph joined = parallel(const_edge(b, {kAuxLabel, kRootLabel}), t.graph());
    Graph lifted = rename(Permutation::transposition(kRootLabel, kAuxLabel), restrict(SortSet{kAuxLabel}, joined));
    return Tree::from_graph(std::move(lifted));
}

/// Fuses the two roots.
inline Tree tree_compose(const Tree& a, const Tree& b) { return Tree::from_graph(parallel(a.graph(), b.graph())); }

/// Term over the tree signature: (leaf c), (append b t), (compose t1 t2 ...).
struct TreeTerm {
    enum class Kind { Leaf, Append, Compose };
    Kind kind = Kind::Leaf;
    std::string label;
    std::vector<TreeTerm> children;

    std::string str() const {
        switch (kind) {
            case Kind::Leaf: return "(leaf " + label + ")";
            case Kind::Append: return "(append " + label + " " + children[0].str() + ")";
            case Kind::Compose: {
                std::string s = "(compose";
                for (const TreeTerm& c : children) s += " " + c.str();
                return s + ")";
            }
        }
        return {};
    }

    bool operator==(const TreeTerm& o) const { return str() == o.str(); }
};

/// Unique representation modulo commutativity/associativity of composition:
/// composition is flattened and its operands are sorted by serialized form.
inline TreeTerm canonical_term(const Tree& t) {
    const auto view = t.nodes();
    std::function<TreeTerm(Id)> build = [&](Id v) {
        std::vector<TreeTerm> items;
        const auto& node = view.at(v);
        for (const Edge* e : node.unary) items.push_back(TreeTerm{TreeTerm::Kind::Leaf, e->label.name, {}});
        for (const auto& [e, c] : node.children)
            items.push_back(TreeTerm{TreeTerm::Kind::Append, e->label.name, {build(c)}});
        std::vector<std::pair<std::string, TreeTerm>> keyed;
        for (TreeTerm& it : items) keyed.emplace_back(it.str(), std::move(it));
        std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        if (keyed.size() == 1) return std::move(keyed.front().second);
        TreeTerm comp{TreeTerm::Kind::Compose, {}, {}};
        for (auto& [k, it] : keyed) comp.children.push_back(std::move(it));
        return comp;
    };
    return build(t.root());
}

/// Evaluates a tree-signature term back into a tree.
inline Tree tree_from_term(const TreeTerm& term, const std::function<EdgeLabel(const std::string&, int)>& label_of) {
    switch (term.kind) {
        case TreeTerm::Kind::Leaf: return tree_leaf(label_of(term.label, 1));
        case TreeTerm::Kind::Append: return tree_append(label_of(term.label, 2), tree_from_term(term.children[0], label_of));
        case TreeTerm::Kind::Compose: {
            if (term.children.empty()) throw InputError("compose with no operands");
            Tree acc = tree_from_term(term.children[0], label_of);
            for (std::size_t i = 1; i < term.children.size(); ++i) acc = tree_compose(acc, tree_from_term(term.children[i], label_of));
            return acc;
        }
    }
    throw InputError("malformed tree term");
}

}  // namespace hrgraph
