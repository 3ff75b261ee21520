#pragma once

// The HR operations on graphs (empty, single edge, restrict, rename,
// parallel composition) and evaluation of terms built from them.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"
#include "labels.hpp"

namespace hrgraph {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Term over the HR signature, possibly with nonterminal leaves (grammar right-hand sides).
struct Term {
    enum class Kind { Empty, Edge, Restrict, Rename, Parallel, Nonterminal };

    Kind kind = Kind::Empty;
    SortSet sort;                        // Empty, Restrict
    EdgeLabel label;                     // Edge
    std::vector<SourceLabel> sources;    // Edge
    Permutation perm;                    // Rename
    std::vector<TermPtr> children;       // Restrict, Rename: one; Parallel: two
    std::string name;                    // Nonterminal

    static TermPtr empty(SortSet tau) {
        auto t = std::make_shared<Term>();
        t->kind = Kind::Empty;
        t->sort = std::move(tau);
        return t;
    }
    static TermPtr edge(EdgeLabel a, std::vector<SourceLabel> ss) {
        if (static_cast<int>(ss.size()) != a.arity)
            throw InputError("edge term: label " + a.name + " has arity " + std::to_string(a.arity) + " but " +
                             std::to_string(ss.size()) + " source labels were given");
        auto t = std::make_shared<Term>();
        t->kind = Kind::Edge;
        t->label = std::move(a);
        t->sources = std::move(ss);
        return t;
    }
    static TermPtr restrict(SortSet tau, TermPtr arg) {
        auto t = std::make_shared<Term>();
        t->kind = Kind::Restrict;
        t->sort = std::move(tau);
        t->children = {std::move(arg)};
        return t;
    }
    static TermPtr rename(Permutation alpha, TermPtr arg) {
        auto t = std::make_shared<Term>();
        t->kind = Kind::Rename;
        t->perm = std::move(alpha);
        t->children = {std::move(arg)};
        return t;
    }
    static TermPtr par(TermPtr a, TermPtr b) {
        auto t = std::make_shared<Term>();
        t->kind = Kind::Parallel;
        t->children = {std::move(a), std::move(b)};
        return t;
    }
    static TermPtr nonterminal(std::string n) {
        auto t = std::make_shared<Term>();
        t->kind = Kind::Nonterminal;
        t->name = std::move(n);
        return t;
    }
};

inline bool is_ground(const Term& t) {
    if (t.kind == Term::Kind::Nonterminal) return false;
    return std::all_of(t.children.begin(), t.children.end(), [](const TermPtr& c) { return is_ground(*c); });
}

/// Every source label mentioned anywhere in the term.
inline SortSet labels_used(const Term& t) {
    SortSet out;
    switch (t.kind) {
        case Term::Kind::Empty:
        case Term::Kind::Restrict: out = t.sort; break;
        case Term::Kind::Edge: out.insert(t.sources.begin(), t.sources.end()); break;
        case Term::Kind::Rename: out = t.perm.support(); break;
        default: break;
    }
    for (const TermPtr& c : t.children) out = unite(out, labels_used(*c));
    return out;
}

inline std::size_t edge_leaf_count(const Term& t) {
    std::size_t n = t.kind == Term::Kind::Edge ? 1 : 0;
    for (const TermPtr& c : t.children) n += edge_leaf_count(*c);
    return n;
}

/// Height of the term; leaves have height 1.
inline int term_height(const Term& t) {
    int h = 0;
    for (const TermPtr& c : t.children) h = std::max(h, term_height(*c));
    return h + 1;
}

/// Sort of the term's value. Nonterminals contribute their declared sort, so the
/// result is an upper bound when nonterminals are present and exact otherwise.
inline SortSet static_sort(const Term& t, const std::map<std::string, SortSet>& nonterminal_sorts = {}) {
    switch (t.kind) {
        case Term::Kind::Empty: return t.sort;
        case Term::Kind::Edge: return SortSet(t.sources.begin(), t.sources.end());
        case Term::Kind::Restrict: return intersect(t.sort, static_sort(*t.children[0], nonterminal_sorts));
        case Term::Kind::Rename: return t.perm.inverse().image(static_sort(*t.children[0], nonterminal_sorts));
        case Term::Kind::Parallel:
            return unite(static_sort(*t.children[0], nonterminal_sorts), static_sort(*t.children[1], nonterminal_sorts));
        case Term::Kind::Nonterminal: {
            auto it = nonterminal_sorts.find(t.name);
            if (it == nonterminal_sorts.end()) throw InputError("undeclared nonterminal " + t.name);
            return it->second;
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Graph operations

inline Graph const_empty(const SortSet& tau) {
    Graph g;
    Id next = 0;
    for (const SourceLabel& s : tau) {
        g.vertices.push_back(next);
        g.sources.emplace(s, next);
        ++next;
    }
    return g;
}

inline Graph const_edge(const EdgeLabel& a, const std::vector<SourceLabel>& ss) {
    if (a.arity < 1) throw InputError("const_edge: label " + a.name + " has arity < 1");
    if (static_cast<int>(ss.size()) != a.arity)
        throw InputError("const_edge: arity mismatch for label " + a.name + ": expected " + std::to_string(a.arity) +
                         " source labels, got " + std::to_string(ss.size()));
    Graph g;
    Id next = 0;
    Edge e;
    e.label = a;
    for (const SourceLabel& s : ss) {
        auto it = g.sources.find(s);
        if (it == g.sources.end()) {
            g.vertices.push_back(next);
            it = g.sources.emplace(s, next).first;
            ++next;
        }
        e.attach.push_back(it->second);
    }
    e.id = next;
    g.edges.push_back(std::move(e));
    return g;
}

/// Keeps the sources whose labels are in tau; vertices and edges are unchanged.
inline Graph restrict(const SortSet& tau, const Graph& g) {
    Graph out = g;
    std::erase_if(out.sources, [&](const auto& kv) { return !tau.count(kv.first); });
    return out;
}

/// Result sort is alpha^{-1}(sort(g)); the s-source of the result is the alpha(s)-source of g.
inline Graph rename(const Permutation& alpha, const Graph& g) {
    Graph out = g;
    out.sources.clear();
    const Permutation inv = alpha.inverse();
    for (const auto& [label, v] : g.sources) out.sources.emplace(inv(label), v);
    return out;
}

/// Disjoint union with equally labelled sources fused. Ids of g1 are kept, ids of
/// g2 are shifted past them; each fused class is represented by its smallest id.
inline Graph parallel(const Graph& g1, const Graph& g2) {
    const Id offset = g1.max_id() + 1;
    std::map<Id, Id> parent;
    for (Id v : g1.vertices) parent[v] = v;
    for (Id v : g2.vertices) parent[v + offset] = v + offset;
    std::function<Id(Id)> find = [&](Id x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [label, v1] : g1.sources) {
        auto it = g2.sources.find(label);
        if (it == g2.sources.end()) continue;
        Id a = find(v1), b = find(it->second + offset);
        if (a == b) continue;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
    Graph out;
    for (const auto& [v, p] : parent)
        if (find(v) == v) out.vertices.push_back(v);
    for (const Edge& e : g1.edges) {
        Edge f = e;
        for (Id& v : f.attach) v = find(v);
        out.edges.push_back(std::move(f));
    }
    for (const Edge& e : g2.edges) {
        Edge f = e;
        f.id += offset;
        for (Id& v : f.attach) v = find(v + offset);
        out.edges.push_back(std::move(f));
    }
    for (const auto& [label, v] : g1.sources) out.sources.emplace(label, find(v));
    for (const auto& [label, v] : g2.sources) out.sources.emplace(label, find(v + offset));
    return out.normalize();
}

/// Bottom-up evaluation of a ground term.
inline Graph eval_term(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Empty: return const_empty(t.sort);
        case Term::Kind::Edge: return const_edge(t.label, t.sources);
        case Term::Kind::Restrict: return restrict(t.sort, eval_term(*t.children[0]));
        case Term::Kind::Rename: return rename(t.perm, eval_term(*t.children[0]));
        case Term::Kind::Parallel: return parallel(eval_term(*t.children[0]), eval_term(*t.children[1]));
        case Term::Kind::Nonterminal: throw InputError("eval_term: term is not ground (nonterminal " + t.name + ")");
    }
    return {};
}

/// Replaces every nonterminal leaf by the term chosen by `subst`.
inline TermPtr substitute(const TermPtr& t, const std::function<TermPtr(const Term&)>& subst) {
    if (t->kind == Term::Kind::Nonterminal) return subst(*t);
    if (t->children.empty()) return t;
    auto copy = std::make_shared<Term>(*t);
    for (TermPtr& c : copy->children) c = substitute(c, subst);
    return copy;
}

}  // namespace hrgraph
