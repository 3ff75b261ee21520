#pragma once

// Parse trees: trees whose edges carry HR operations. Unary edges are the
// constants (empty, single edge); binary edges are restrict and rename.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hr_text.hpp"
#include "tree.hpp"

namespace hrgraph {

struct ParseLabel {
    enum class Kind { EmptyU, EdgeU, RestrictB, RenameB };

    Kind kind = Kind::EmptyU;
    SortSet sort;                      // EmptyU, RestrictB
    EdgeLabel edge;                    // EdgeU
    std::vector<SourceLabel> sources;  // EdgeU
    Permutation perm;                  // RenameB

    static ParseLabel empty(SortSet tau) { return ParseLabel{Kind::EmptyU, std::move(tau), {}, {}, {}}; }
    static ParseLabel edge_of(EdgeLabel a, std::vector<SourceLabel> ss) {
        if (static_cast<int>(ss.size()) != a.arity) throw InputError("edge parse label: arity mismatch for " + a.name);
        return ParseLabel{Kind::EdgeU, {}, std::move(a), std::move(ss), {}};
    }
    static ParseLabel restrict(SortSet tau) { return ParseLabel{Kind::RestrictB, std::move(tau), {}, {}, {}}; }
    static ParseLabel rename(Permutation p) { return ParseLabel{Kind::RenameB, {}, {}, {}, std::move(p)}; }

    int arity() const { return kind == Kind::EmptyU || kind == Kind::EdgeU ? 1 : 2; }

    /// Source labels this symbol mentions.
    SortSet labels() const {
        switch (kind) {
            case Kind::EmptyU:
            case Kind::RestrictB: return sort;
            case Kind::EdgeU: return SortSet(sources.begin(), sources.end());
            case Kind::RenameB: return perm.support();
        }
        return {};
    }

    sx::Sexpr to_sexpr() const {
        switch (kind) {
            case Kind::EmptyU: return sx::list({sx::atom("empty"), sort_to_sexpr(sort)});
            case Kind::EdgeU: {
                std::vector<sx::Sexpr> xs{sx::atom("edge"), sx::atom(edge.name)};
                for (const SourceLabel& s : sources) xs.push_back(sx::atom(s.name));
                return sx::list(std::move(xs));
            }
            case Kind::RestrictB: return sx::list({sx::atom("restrict"), sort_to_sexpr(sort)});
            case Kind::RenameB: return sx::list({sx::atom("rename"), perm_to_sexpr(perm)});
        }
        return {};
    }

    static ParseLabel from_sexpr(const sx::Sexpr& e) {
        const std::string head = e.head();
        if (head == "empty" && e.size() == 2) return empty(sort_from_sexpr(e[1]));
        if (head == "edge" && e.size() >= 3) {
            const std::string& name = e[1].as_atom();
            if (!is_valid_label_name(name)) throw InputError("invalid edge label '" + name + "'");
            std::vector<SourceLabel> ss;
            for (std::size_t i = 2; i < e.size(); ++i) ss.push_back(label_from_sexpr(e[i]));
            const int k = static_cast<int>(ss.size());
            return edge_of(EdgeLabel{name, k}, std::move(ss));
        }
        if (head == "restrict" && e.size() == 2) return restrict(sort_from_sexpr(e[1]));
        if (head == "rename" && e.size() == 2) return rename(perm_from_sexpr(e[1]));
        throw InputError("unknown parse label: " + e.str());
    }

    std::string name() const { return to_sexpr().str(); }

    /// The tree edge label encoding this symbol.
    EdgeLabel as_edge_label() const { return EdgeLabel{name(), arity()}; }

    static ParseLabel from_edge_label(const EdgeLabel& l) {
        ParseLabel p = from_sexpr(sx::parse(l.name));
        if (p.arity() != l.arity) throw InputError("parse label " + l.name + " used with the wrong arity");
        return p;
    }

    bool operator==(const ParseLabel& o) const { return name() == o.name(); }
};

/// A tree over parse labels drawn from the finite alphabet restricted to `sort()`.
class ParseTree {
public:
    ParseTree(Tree tree, SortSet tau) : tree_(std::move(tree)), tau_(std::move(tau)) {
        for (const Edge& e : tree_.graph().edges) {
            ParseLabel p = ParseLabel::from_edge_label(e.label);
            if (!is_subset(p.labels(), tau_))
                throw InputError("parse label " + p.name() + " uses source labels outside the declared sort");
            labels_.emplace(e.id, std::move(p));
        }
    }

    const Tree& tree() const { return tree_; }
    const SortSet& sort() const { return tau_; }
    const ParseLabel& label(const Edge& e) const { return labels_.at(e.id); }

private:
    Tree tree_;
    SortSet tau_;
    std::map<Id, ParseLabel> labels_;
};

inline Tree parse_leaf(const ParseLabel& c) {
    if (c.arity() != 1) throw InputError("tree_leaf: parse label " + c.name() + " is not unary");
    return tree_leaf(c.as_edge_label());
}

inline Tree parse_append(const ParseLabel& b, const Tree& t) {
    if (b.arity() != 2) throw InputError("tree_append: parse label " + b.name() + " is not binary");
    return tree_append(b.as_edge_label(), t);
}

namespace detail {
inline Tree term_to_tree(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Empty: return parse_leaf(ParseLabel::empty(t.sort));
        case Term::Kind::Edge: return parse_leaf(ParseLabel::edge_of(t.label, t.sources));
        case Term::Kind::Restrict: return parse_append(ParseLabel::restrict(t.sort), term_to_tree(*t.children[0]));
        case Term::Kind::Rename: return parse_append(ParseLabel::rename(t.perm), term_to_tree(*t.children[0]));
        case Term::Kind::Parallel: return tree_compose(term_to_tree(*t.children[0]), term_to_tree(*t.children[1]));
        case Term::Kind::Nonterminal: break;
    }
    throw InputError("term_to_parse_tree: term is not ground (nonterminal " + t.name + ")");
}
}  // namespace detail

/// Moves operation symbols onto edges and collapses adjacent compositions.
inline ParseTree term_to_parse_tree(const Term& t) {
    if (!is_ground(t)) throw InputError("term_to_parse_tree: term is not ground");
    return ParseTree(detail::term_to_tree(t), labels_used(t));
}

/// Canonical evaluation; independent of sibling order.
inline Graph val(const ParseTree& pt) {
    const auto view = pt.tree().nodes();
    std::function<Graph(Id)> eval = [&](Id v) {
        const auto& node = view.at(v);
        std::vector<Graph> parts;
        for (const Edge* e : node.unary) {
            const ParseLabel& p = pt.label(*e);
            parts.push_back(p.kind == ParseLabel::Kind::EmptyU ? const_empty(p.sort) : const_edge(p.edge, p.sources));
        }
        for (const auto& [e, child] : node.children) {
            const ParseLabel& p = pt.label(*e);
            Graph sub = eval(child);
            parts.push_back(p.kind == ParseLabel::Kind::RestrictB ? restrict(p.sort, sub) : rename(p.perm, sub));
        }
        if (parts.empty()) throw InputError("val: node without operations");
        Graph acc = std::move(parts.front());
        for (std::size_t i = 1; i < parts.size(); ++i) acc = parallel(acc, parts[i]);
        return acc;
    };
    return eval(pt.tree().root());
}

/// Whether val(pt) has an s-source, decided on the tree: s must reach a constant
/// mentioning it along a root path that keeps it under restrictions and maps it
/// through renamings.
inline bool source_present(const ParseTree& pt, const SourceLabel& s) {
    const auto view = pt.tree().nodes();
    std::function<bool(Id, const SourceLabel&)> present = [&](Id v, const SourceLabel& label) {
        const auto& node = view.at(v);
        for (const Edge* e : node.unary) {
            const ParseLabel& p = pt.label(*e);
            if (p.labels().count(label)) return true;
        }
        for (const auto& [e, child] : node.children) {
            const ParseLabel& p = pt.label(*e);
            if (p.kind == ParseLabel::Kind::RestrictB) {
                if (p.sort.count(label) && present(child, label)) return true;
            } else if (present(child, p.perm(label))) {
                return true;
            }
        }
        return false;
    };
    return present(pt.tree().root(), s);
}

}  // namespace hrgraph
