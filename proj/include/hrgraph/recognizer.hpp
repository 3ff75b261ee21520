#pragma once

// Finite algebras over the HR signature, used as recognizers, and a bounded
// refutation test for the syntactic congruence of a graph language.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "hr_algebra.hpp"
#include "hr_text.hpp"
#include "isomorphism.hpp"
#include "sexpr.hpp"

namespace hrgraph {

/// Operation symbol of a term node, e.g. "(empty (s1))", "(edge a s1 s2)",
/// "(restrict (s1))", "(rename ((s1 s2)))" or "par".
inline std::string op_symbol(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Empty:
        case Term::Kind::Edge: return term_to_sexpr(t).str();
        case Term::Kind::Restrict: return sx::list({sx::atom("restrict"), sort_to_sexpr(t.sort)}).str();
        case Term::Kind::Rename: return sx::list({sx::atom("rename"), perm_to_sexpr(t.perm)}).str();
        case Term::Kind::Parallel: return "par";
        case Term::Kind::Nonterminal: throw InputError("nonterminal " + t.name + " has no operation symbol");
    }
    return {};
}

/// Normalised symbol for a symbol written in a file.
inline std::string op_symbol_from_sexpr(const sx::Sexpr& e) {
    if (e.is_atom) {
        if (e.atom == "par") return "par";
        throw InputError("unknown operation symbol " + e.atom);
    }
    const std::string h = e.head();
    if (h == "empty" || h == "edge") return op_symbol(*term_from_sexpr(e));
    if (h == "restrict" && e.size() == 2) return op_symbol(*Term::restrict(sort_from_sexpr(e[1]), Term::empty({})));
    if (h == "rename" && e.size() == 2) return op_symbol(*Term::rename(perm_from_sexpr(e[1]), Term::empty({})));
    throw InputError("unknown operation symbol " + e.str());
}

/// Element names are shared between sorts; tables are keyed by names only.
struct FiniteAlgebra {
    SortSet tau;
    std::map<SortSet, std::vector<std::string>> carrier;
    std::map<std::string, std::map<std::vector<std::string>, std::string>> ops;

    std::set<std::string> elements() const {
        std::set<std::string> out;
        for (const auto& [s, es] : carrier) out.insert(es.begin(), es.end());
        return out;
    }
    /// Elements that can be the value of a graph whose sort is contained in `upper`.
    std::set<std::string> elements_within(const SortSet& upper) const {
        std::set<std::string> out;
        for (const auto& [s, es] : carrier)
            if (is_subset(s, upper)) out.insert(es.begin(), es.end());
        return out;
    }
    bool in_carrier(const SortSet& s, const std::string& e) const {
        auto it = carrier.find(s);
        return it != carrier.end() && std::find(it->second.begin(), it->second.end(), e) != it->second.end();
    }
    void set_op(const std::string& symbol, std::vector<std::string> args, std::string result) {
        ops[symbol][std::move(args)] = std::move(result);
    }
    std::optional<std::string> apply(const std::string& symbol, const std::vector<std::string>& args) const {
        auto it = ops.find(symbol);
        if (it == ops.end()) return std::nullopt;
        auto jt = it->second.find(args);
        if (jt == it->second.end()) return std::nullopt;
        return jt->second;
    }
};

inline std::optional<std::string> validate_algebra(const FiniteAlgebra& a) {
    for (const auto& [s, es] : a.carrier) {
        if (!is_subset(s, a.tau)) return "carrier declared for a sort outside the algebra's labels";
        if (std::set<std::string>(es.begin(), es.end()).size() != es.size()) return "duplicate element in a carrier";
    }
    const std::set<std::string> all = a.elements();
    for (const auto& [sym, table] : a.ops)
        for (const auto& [args, res] : table) {
            for (const auto& x : args)
                if (!all.count(x)) return "operation " + sym + " mentions unknown element " + x;
            if (!all.count(res)) return "operation " + sym + " yields unknown element " + res;
        }
    return std::nullopt;
}

/// Bottom-up table evaluation of a ground term.
inline std::string hom_eval(const FiniteAlgebra& a, const Term& t) {
    std::vector<std::string> args;
    for (const auto& c : t.children) args.push_back(hom_eval(a, *c));
    if (t.kind == Term::Kind::Nonterminal) throw InputError("hom_eval: term is not ground (nonterminal " + t.name + ")");
    const std::string sym = op_symbol(t);
    auto r = a.apply(sym, args);
    if (!r) {
        std::string msg = "hom_eval: missing table entry for " + sym + " on (";
        for (std::size_t i = 0; i < args.size(); ++i) msg += (i ? " " : "") + args[i];
        throw InputError(msg + ")");
    }
    const SortSet s = static_sort(t);
    if (!a.in_carrier(s, *r)) throw InputError("hom_eval: sort mismatch, " + *r + " is not in the carrier of sort " + sort_to_sexpr(s).str());
    return *r;
}

inline bool accepts(const FiniteAlgebra& a, const std::set<std::string>& accept, const Term& t) {
    return accept.count(hom_eval(a, t)) > 0;
}

namespace detail {

inline std::vector<std::vector<SourceLabel>> tuples_over(const SortSet& tau, int k) {
    std::vector<std::vector<SourceLabel>> out{{}};
    for (int i = 0; i < k; ++i) {
        std::vector<std::vector<SourceLabel>> next;
        for (const auto& t : out)
            for (const SourceLabel& s : tau) {
                auto u = t;
                u.push_back(s);
                next.push_back(std::move(u));
            }
        out = std::move(next);
    }
    return out;
}

inline std::vector<Permutation> permutations_of(const SortSet& tau) {
    std::vector<SourceLabel> xs(tau.begin(), tau.end());
    std::vector<SourceLabel> ys = xs;
    std::vector<Permutation> out;
    do {
        std::map<SourceLabel, SourceLabel> m;
        for (std::size_t i = 0; i < xs.size(); ++i) m[xs[i]] = ys[i];
        out.emplace_back(m);
    } while (std::next_permutation(ys.begin(), ys.end()));
    return out;
}

}  // namespace detail

/// Edge-count parity over every sort contained in tau: elements "even" and "odd".
inline FiniteAlgebra parity_algebra(const SortSet& tau, const std::vector<EdgeLabel>& labels) {
    FiniteAlgebra a;
    a.tau = tau;
    const std::vector<std::string> both{"even", "odd"};
    for (const SortSet& s : subsets_of(tau)) {
        a.carrier[s] = both;
        a.set_op(op_symbol(*Term::empty(s)), {}, "even");
        for (const auto& x : both) a.set_op(op_symbol(*Term::restrict(s, Term::empty({}))), {x}, x);
    }
    for (const EdgeLabel& l : labels)
        for (const auto& ss : detail::tuples_over(tau, l.arity)) a.set_op(op_symbol(*Term::edge(l, ss)), {}, "odd");
    for (const Permutation& p : detail::permutations_of(tau))
        for (const auto& x : both) a.set_op(op_symbol(*Term::rename(p, Term::empty({}))), {x}, x);
    for (const auto& x : both)
        for (const auto& y : both) a.set_op("par", {x, y}, x == y ? "even" : "odd");
    return a;
}

struct CongruenceVerdict {
    bool congruent = true;
    // populated when a context separates the two graphs
    std::optional<Graph> context;
    SortSet restriction;
    std::optional<Permutation> rename;
};

/// Looks for a context restrict_t(x || G), optionally followed by a rename of
/// t_limit, on which the oracle separates g1 and g2. Contexts are tried in the
/// given order, restrictions by size then lexicographically.
inline CongruenceVerdict congruent_bounded(const std::function<bool(const Graph&)>& member, const Graph& g1, const Graph& g2,
                                           const std::vector<Graph>& contexts, const SortSet& tau_limit,
                                           bool with_renames = false) {
    if (g1.sort() != g2.sort())
        throw InputError("congruent_bounded: graphs have different sorts " + sort_to_sexpr(g1.sort()).str() + " and " +
                         sort_to_sexpr(g2.sort()).str());
    require_valid(g1, "congruent_bounded");
    require_valid(g2, "congruent_bounded");
    std::vector<Permutation> perms{Permutation{}};
    if (with_renames) perms = detail::permutations_of(tau_limit);
    for (const Graph& ctx : contexts) {
        require_valid(ctx, "congruent_bounded context");
        const Graph h1 = parallel(g1, ctx);
        const Graph h2 = parallel(g2, ctx);
        for (const SortSet& t : subsets_of(tau_limit)) {
            const Graph r1 = restrict(t, h1), r2 = restrict(t, h2);
            for (const Permutation& p : perms) {
                if (member(rename(p, r1)) != member(rename(p, r2))) {
                    CongruenceVerdict v;
                    v.congruent = false;
                    v.context = ctx;
                    v.restriction = t;
                    if (!p.is_identity()) v.rename = p;
                    return v;
                }
            }
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Text form:
//   (algebra (sorts () (s1)) (carrier (s1) even odd)
//            (op par ((even odd) -> odd) ...) (op (edge a s1) (() -> odd)))
// (sorts ...) lists the sorts; their union is the algebra's label set.

inline FiniteAlgebra algebra_from_sexpr(const sx::Sexpr& e) {
    if (e.head() != "algebra") throw InputError("expected (algebra ...), got " + e.str());
    FiniteAlgebra a;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const auto& sec = e[i].expect_list();
        const std::string h = sec.head();
        if (h == "sorts") {
            for (std::size_t j = 1; j < sec.size(); ++j) {
                SortSet s = sort_from_sexpr(sec[j]);
                a.tau = unite(a.tau, s);
                a.carrier.emplace(s, std::vector<std::string>{});
            }
        } else if (h == "carrier") {
            SortSet s = sort_from_sexpr(sec[1]);
            a.tau = unite(a.tau, s);
            auto& es = a.carrier[s];
            for (std::size_t j = 2; j < sec.size(); ++j) es.push_back(sec[j].as_atom());
        } else if (h == "op") {
            const std::string sym = op_symbol_from_sexpr(sec[1]);
            for (std::size_t j = 2; j < sec.size(); ++j) {
                const auto& entry = sec[j].expect_list();
                if (entry.size() != 3 || !entry[1].is_atom || entry[1].atom != "->")
                    throw InputError("op entry must be ((args...) -> result), got " + entry.str());
                std::vector<std::string> args;
                for (const auto& x : entry[0].expect_list().items) args.push_back(x.as_atom());
                auto& table = a.ops[sym];
                if (table.count(args)) throw InputError("duplicate table entry for " + sym + " in " + entry.str());
                table[args] = entry[2].as_atom();
            }
        } else {
            throw InputError("algebra: unknown section " + sec.str());
        }
    }
    if (auto err = validate_algebra(a)) throw InputError("invalid algebra: " + *err);
    return a;
}

inline sx::Sexpr algebra_to_sexpr(const FiniteAlgebra& a) {
    using sx::atom;
    using sx::list;
    std::vector<sx::Sexpr> xs{atom("algebra")};
    std::vector<sx::Sexpr> sorts{atom("sorts")};
    for (const auto& [s, es] : a.carrier) sorts.push_back(sort_to_sexpr(s));
    xs.push_back(list(std::move(sorts)));
    for (const auto& [s, es] : a.carrier) {
        std::vector<sx::Sexpr> c{atom("carrier"), sort_to_sexpr(s)};
        for (const auto& x : es) c.push_back(atom(x));
        xs.push_back(list(std::move(c)));
    }
    for (const auto& [sym, table] : a.ops) {
        std::vector<sx::Sexpr> op{atom("op"), sym == "par" ? atom("par") : sx::parse(sym)};
        for (const auto& [args, res] : table) {
            std::vector<sx::Sexpr> as;
            for (const auto& x : args) as.push_back(atom(x));
            op.push_back(list({list(std::move(as)), atom("->"), atom(res)}));
        }
        xs.push_back(list(std::move(op)));
    }
    return list(std::move(xs));
}

}  // namespace hrgraph
