#pragma once

// HR graph grammars: bounded Kleene iteration of the least solution,
// membership, the universal grammar of a sort, and the product with a finite
// recognizer.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "hr_algebra.hpp"
#include "hr_text.hpp"
#include "isomorphism.hpp"
#include "recognizer.hpp"

namespace hrgraph {

struct Rule {
    std::string lhs;
    TermPtr rhs;
};

/// Each nonterminal is declared with an upper bound on the sorts of its graphs.
struct Grammar {
    SortSet tau;
    std::map<std::string, SortSet> nonterminals;
    std::vector<Rule> rules;
};

namespace detail {

inline void nonterminals_in(const Term& t, std::vector<std::string>& out) {
    if (t.kind == Term::Kind::Nonterminal) out.push_back(t.name);
    for (const auto& c : t.children) nonterminals_in(*c, out);
}

}  // namespace detail

inline std::optional<std::string> validate_grammar(const Grammar& g) {
    for (const auto& [name, s] : g.nonterminals)
        if (!is_subset(s, g.tau)) return "nonterminal " + name + " is declared with labels outside the grammar's sort";
    for (const Rule& r : g.rules) {
        if (!g.nonterminals.count(r.lhs)) return "rule for undeclared nonterminal " + r.lhs;
        std::vector<std::string> used;
        detail::nonterminals_in(*r.rhs, used);
        for (const auto& n : used)
            if (!g.nonterminals.count(n)) return "rule for " + r.lhs + " uses undeclared nonterminal " + n;
        if (!is_subset(labels_used(*r.rhs), g.tau))
            return "rule for " + r.lhs + " uses labels outside the grammar's sort: " + term_to_string(*r.rhs);
        if (!is_subset(static_sort(*r.rhs, g.nonterminals), g.nonterminals.at(r.lhs)))
            return "ill-sorted rule " + r.lhs + " -> " + term_to_string(*r.rhs) + ": right-hand side sort exceeds the declared sort";
    }
    return std::nullopt;
}

struct LanguageEntry {
    Graph graph;
    TermPtr witness;  // ground term evaluating to graph
};

/// Graphs of every nonterminal after `depth` Kleene iterations, up to isomorphism.
struct LanguageSample {
    int depth = 0;
    std::map<std::string, std::vector<LanguageEntry>> sets;

    const std::vector<LanguageEntry>& of(const std::string& nonterminal) const {
        static const std::vector<LanguageEntry> none;
        auto it = sets.find(nonterminal);
        return it == sets.end() ? none : it->second;
    }
};

namespace detail {

/// Isomorphism-deduplicated collection bucketed by invariant hash.
class GraphSet {
public:
    bool insert(LanguageEntry e, const Limits& limits) {
        check_iso_bound(e.graph, limits);
        const std::uint64_t h = invariant_hash(e.graph);
        auto& bucket = buckets_[h];
        for (std::size_t i : bucket)
            if (is_isomorphic(entries_[i].graph, e.graph, limits)) return false;
        bucket.push_back(entries_.size());
        entries_.push_back(std::move(e));
        return true;
    }
    std::size_t size() const { return entries_.size(); }
    std::vector<LanguageEntry> take() { return std::move(entries_); }

private:
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
    std::vector<LanguageEntry> entries_;
};

struct Instantiated {
    Graph graph;
    TermPtr witness;
};

/// Evaluates `t` with its nonterminal occurrences, left to right, replaced by `args`.
inline Instantiated instantiate(const Term& t, const std::vector<const LanguageEntry*>& args, std::size_t& next) {
    switch (t.kind) {
        case Term::Kind::Nonterminal: {
            const LanguageEntry* e = args[next++];
            return {e->graph, e->witness};
        }
        case Term::Kind::Empty: return {const_empty(t.sort), Term::empty(t.sort)};
        case Term::Kind::Edge: return {const_edge(t.label, t.sources), Term::edge(t.label, t.sources)};
        case Term::Kind::Restrict: {
            auto c = instantiate(*t.children[0], args, next);
            return {restrict(t.sort, c.graph), Term::restrict(t.sort, c.witness)};
        }
        case Term::Kind::Rename: {
            auto c = instantiate(*t.children[0], args, next);
            return {rename(t.perm, c.graph), Term::rename(t.perm, c.witness)};
        }
        case Term::Kind::Parallel: {
            auto a = instantiate(*t.children[0], args, next);
            auto b = instantiate(*t.children[1], args, next);
            return {parallel(a.graph, b.graph), Term::par(a.witness, b.witness)};
        }
    }
    return {};
}

}  // namespace detail

/// Stage 0 is empty; stage d+1 applies every rule to stage-d graphs.
inline LanguageSample enumerate_all(const Grammar& g, int depth, const Limits& limits = {}) {
    if (depth < 0) throw InputError("enumerate_language: depth must be non-negative");
    if (auto err = validate_grammar(g)) throw InputError("invalid grammar: " + *err);
    LanguageSample stage;
    for (const auto& [name, s] : g.nonterminals) stage.sets[name];
    for (int d = 1; d <= depth; ++d) {
        std::map<std::string, detail::GraphSet> next;
        for (const auto& [name, s] : g.nonterminals) next[name];
        for (const Rule& r : g.rules) {
            std::vector<std::string> occ;
            detail::nonterminals_in(*r.rhs, occ);
            std::vector<const std::vector<LanguageEntry>*> pools;
            bool empty = false;
            for (const auto& n : occ) {
                pools.push_back(&stage.sets.at(n));
                empty = empty || pools.back()->empty();
            }
            if (empty) continue;
            std::vector<std::size_t> pos(occ.size(), 0);
            std::vector<const LanguageEntry*> args(occ.size());
            auto& target = next.at(r.lhs);
            for (;;) {
                for (std::size_t i = 0; i < occ.size(); ++i) args[i] = &(*pools[i])[pos[i]];
                std::size_t k = 0;
                auto inst = detail::instantiate(*r.rhs, args, k);
                target.insert({std::move(inst.graph), std::move(inst.witness)}, limits);
                if (static_cast<int>(target.size()) > limits.stage_cap)
                    throw ResourceError("enumeration: stage " + std::to_string(d) + " of " + r.lhs + " exceeds " +
                                        std::to_string(limits.stage_cap) + " graphs");
                std::size_t i = occ.size();
                while (i > 0 && ++pos[i - 1] == pools[i - 1]->size()) pos[--i] = 0;
                if (i == 0) break;
            }
        }
        LanguageSample s;
        s.depth = d;
        for (auto& [name, set] : next) s.sets[name] = set.take();
        stage = std::move(s);
    }
    stage.depth = depth;
    return stage;
}

inline std::vector<LanguageEntry> enumerate_language(const Grammar& g, const std::string& nonterminal, int depth,
                                                     const Limits& limits = {}) {
    if (!g.nonterminals.count(nonterminal)) throw InputError("unknown nonterminal " + nonterminal);
    return enumerate_all(g, depth, limits).of(nonterminal);
}

/// Bounded membership: false only means "not derived within depth iterations".
inline bool member(const Grammar& g, const std::string& nonterminal, const Graph& x, int depth, const Limits& limits = {}) {
    require_valid(x, "member");
    for (const auto& e : enumerate_language(g, nonterminal, depth, limits))
        if (is_isomorphic(e.graph, x, limits)) return true;
    return false;
}

/// Single nonterminal X generating every graph built from the HR operations
/// over tau and the given edge labels. Renames are the identity and the
/// transpositions of tau.
inline Grammar universal_grammar(const SortSet& tau, const std::vector<EdgeLabel>& labels, const std::string& x = "X") {
    Grammar g;
    g.tau = tau;
    g.nonterminals[x] = tau;
    const TermPtr nt = Term::nonterminal(x);
    for (const SortSet& s : subsets_of(tau)) g.rules.push_back({x, Term::empty(s)});
    for (const EdgeLabel& l : labels)
        for (const auto& ss : detail::tuples_over(tau, l.arity)) g.rules.push_back({x, Term::edge(l, ss)});
    for (const SortSet& s : subsets_of(tau)) g.rules.push_back({x, Term::restrict(s, nt)});
    g.rules.push_back({x, Term::rename(Permutation{}, nt)});
    for (auto a = tau.begin(); a != tau.end(); ++a)
        for (auto b = std::next(a); b != tau.end(); ++b) g.rules.push_back({x, Term::rename(Permutation::transposition(*a, *b), nt)});
    g.rules.push_back({x, Term::par(nt, nt)});
    return g;
}

inline std::string product_name(const std::string& nonterminal, const std::string& element) { return nonterminal + "." + element; }

namespace detail {

/// Table evaluation with nonterminal occurrences replaced by `args`; nullopt on a missing entry.
inline std::optional<std::string> eval_open(const FiniteAlgebra& a, const Term& t, const std::vector<std::string>& args,
                                            std::size_t& next) {
    if (t.kind == Term::Kind::Nonterminal) return args[next++];
    std::vector<std::string> vals;
    for (const auto& c : t.children) {
        auto v = eval_open(a, *c, args, next);
        if (!v) return std::nullopt;
        vals.push_back(*v);
    }
    return a.apply(op_symbol(t), vals);
}

inline TermPtr rename_nonterminals(const TermPtr& t, const std::vector<std::string>& names, std::size_t& next) {
    switch (t->kind) {
        case Term::Kind::Nonterminal: return Term::nonterminal(names[next++]);
        case Term::Kind::Restrict: return Term::restrict(t->sort, rename_nonterminals(t->children[0], names, next));
        case Term::Kind::Rename: return Term::rename(t->perm, rename_nonterminals(t->children[0], names, next));
        case Term::Kind::Parallel: {
            auto l = rename_nonterminals(t->children[0], names, next);
            auto r = rename_nonterminals(t->children[1], names, next);
            return Term::par(l, r);
        }
        default: return t;
    }
}

}  // namespace detail

/// Product of a grammar with a finite algebra. Nonterminal U.q derives the
/// graphs of U whose value is q. Each original nonterminal U is kept as the
/// start symbol for the accepted values: its rules are the right-hand sides of
/// the rules of U.q for q in `accept`, so depths match the original grammar.
inline Grammar filter_grammar(const Grammar& g, const FiniteAlgebra& a, const std::set<std::string>& accept) {
    if (auto err = validate_grammar(g)) throw InputError("invalid grammar: " + *err);
    if (auto err = validate_algebra(a)) throw InputError("invalid algebra: " + *err);
    if (!is_subset(g.tau, a.tau))
        throw InputError("sort mismatch: grammar labels " + sort_to_sexpr(g.tau).str() + " are not covered by the algebra's " +
                         sort_to_sexpr(a.tau).str());
    const std::set<std::string> all = a.elements();
    for (const auto& q : accept)
        if (!all.count(q)) throw InputError("accepting element " + q + " is not in the algebra");

    Grammar out;
    out.tau = g.tau;
    std::map<std::string, std::set<std::string>> values;
    for (const auto& [name, s] : g.nonterminals) {
        values[name] = a.elements_within(s);
        out.nonterminals[name] = s;
        for (const auto& q : values[name]) {
            if (g.nonterminals.count(product_name(name, q)))
                throw InputError("product nonterminal " + product_name(name, q) + " clashes with an existing nonterminal");
            out.nonterminals[product_name(name, q)] = s;
        }
    }
    std::vector<Rule> start_rules;
    for (const Rule& r : g.rules) {
        std::vector<std::string> occ;
        detail::nonterminals_in(*r.rhs, occ);
        std::vector<std::vector<std::string>> pools;
        for (const auto& n : occ) pools.emplace_back(values.at(n).begin(), values.at(n).end());
        bool empty = false;
        for (const auto& p : pools) empty = empty || p.empty();
        if (empty) continue;
        std::vector<std::size_t> pos(occ.size(), 0);
        for (;;) {
            std::vector<std::string> qs, names;
            for (std::size_t i = 0; i < occ.size(); ++i) {
                qs.push_back(pools[i][pos[i]]);
                names.push_back(product_name(occ[i], qs.back()));
            }
            std::size_t k = 0;
            if (auto q = detail::eval_open(a, *r.rhs, qs, k); q && values.at(r.lhs).count(*q)) {
                std::size_t m = 0;
                TermPtr rhs = detail::rename_nonterminals(r.rhs, names, m);
                out.rules.push_back({product_name(r.lhs, *q), rhs});
                if (accept.count(*q)) start_rules.push_back({r.lhs, rhs});
            }
            std::size_t i = occ.size();
            while (i > 0 && ++pos[i - 1] == pools[i - 1].size()) pos[--i] = 0;
            if (i == 0) break;
        }
    }
    out.rules.insert(out.rules.end(), start_rules.begin(), start_rules.end());
    return out;
}

// ---------------------------------------------------------------------------
// Text form:
//   (grammar (sort (s1 s2)) (nonterminal X (s1 s2)) (rule X <term>) ...)

inline Grammar grammar_from_sexpr(const sx::Sexpr& e) {
    if (e.head() != "grammar") throw InputError("expected (grammar ...), got " + e.str());
    Grammar g;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const auto& sec = e[i].expect_list();
        const std::string h = sec.head();
        if (h == "sort") {
            g.tau = sort_from_sexpr(sec[1]);
        } else if (h == "nonterminal") {
            const std::string& name = sec[1].as_atom();
            if (g.nonterminals.count(name)) throw InputError("duplicate nonterminal " + name);
            g.nonterminals[name] = sort_from_sexpr(sec[2]);
        } else if (h == "rule") {
            if (sec.size() != 3) throw InputError("rule must be (rule X term), got " + sec.str());
            g.rules.push_back({sec[1].as_atom(), term_from_sexpr(sec[2])});
        } else {
            throw InputError("grammar: unknown section " + sec.str());
        }
    }
    if (auto err = validate_grammar(g)) throw InputError("invalid grammar: " + *err);
    return g;
}

inline sx::Sexpr grammar_to_sexpr(const Grammar& g) {
    using sx::atom;
    using sx::list;
    std::vector<sx::Sexpr> xs{atom("grammar"), list({atom("sort"), sort_to_sexpr(g.tau)})};
    for (const auto& [name, s] : g.nonterminals) xs.push_back(list({atom("nonterminal"), atom(name), sort_to_sexpr(s)}));
    for (const Rule& r : g.rules) xs.push_back(list({atom("rule"), atom(r.lhs), term_to_sexpr(*r.rhs)}));
    return list(std::move(xs));
}

}  // namespace hrgraph
