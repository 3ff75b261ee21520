#pragma once

// CMSO over finite relational structures: syntax, free variables and exact
// satisfaction. First-order quantifiers range over the universe, second-order
// quantifiers over its subsets.
//
// The evaluator narrows first-order quantifiers to candidate values read off
// relation atoms, equalities and memberships that the body must satisfy, and
// narrows a second-order quantifier whose body contains a conjunct
// `forall x. X(x) -> g(x)` (with g independent of X) to subsets of {u : g(u)}.
// Both narrowings only skip valuations that falsify the body.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "sexpr.hpp"
#include "structure.hpp"

namespace hrgraph {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { EqFO, Rel, Member, Card, Not, And, ExistsFO, ExistsSO };

    Kind kind = Kind::EqFO;
    std::string symbol;              // Rel: relation symbol; Member/Card/ExistsSO: set variable
    std::vector<std::string> vars;   // EqFO: two; Rel: arguments; Member: one; ExistsFO: bound variable
    int q = 1, p = 0;                // Card
    std::vector<FormulaPtr> sub;     // Not: one; And: two; quantifiers: one
};

/// Raw constructors: one per syntax node, no simplification.
namespace fo {

inline FormulaPtr eq(std::string x, std::string y) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::EqFO;
    f->vars = {std::move(x), std::move(y)};
    return f;
}
inline FormulaPtr rel(std::string r, std::vector<std::string> args) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Rel;
    f->symbol = std::move(r);
    f->vars = std::move(args);
    return f;
}
inline FormulaPtr member(std::string set, std::string x) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Member;
    f->symbol = std::move(set);
    f->vars = {std::move(x)};
    return f;
}
/// card(X) = k*q + p for some k >= 0.
inline FormulaPtr card(std::string set, int q, int p) {
    if (q < 1 || p < 0 || p > q - 1)
        throw InputError("card: require q >= 1 and 0 <= p <= q-1, got q=" + std::to_string(q) + " p=" + std::to_string(p));
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Card;
    f->symbol = std::move(set);
    f->q = q;
    f->p = p;
    return f;
}
inline FormulaPtr neg(FormulaPtr a) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::Not;
    f->sub = {std::move(a)};
    return f;
}
inline FormulaPtr conj(FormulaPtr a, FormulaPtr b) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::And;
    f->sub = {std::move(a), std::move(b)};
    return f;
}
inline FormulaPtr exists(std::string x, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::ExistsFO;
    f->vars = {std::move(x)};
    f->sub = {std::move(body)};
    return f;
}
inline FormulaPtr exists_so(std::string set, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = Formula::Kind::ExistsSO;
    f->symbol = std::move(set);
    f->sub = {std::move(body)};
    return f;
}

// Derived connectives, desugared into the core syntax.

/// Negation that cancels an existing negation.
inline FormulaPtr negate(FormulaPtr a) {
    if (a->kind == Formula::Kind::Not) return a->sub[0];
    return neg(std::move(a));
}
inline FormulaPtr falsum() { return exists("_f", negate(eq("_f", "_f"))); }
inline FormulaPtr verum() { return negate(falsum()); }
inline FormulaPtr all(std::vector<FormulaPtr> xs) {
    if (xs.empty()) return verum();
    FormulaPtr acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) acc = conj(xs[i], acc);
    return acc;
}
inline FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return negate(conj(negate(std::move(a)), negate(std::move(b)))); }
inline FormulaPtr any(std::vector<FormulaPtr> xs) {
    if (xs.empty()) return falsum();
    FormulaPtr acc = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > 0;) acc = disj(xs[i], acc);
    return acc;
}
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return negate(conj(std::move(a), negate(std::move(b)))); }
inline FormulaPtr iff(const FormulaPtr& a, const FormulaPtr& b) { return conj(implies(a, b), implies(b, a)); }
inline FormulaPtr forall(std::string x, FormulaPtr body) { return negate(exists(std::move(x), negate(std::move(body)))); }
inline FormulaPtr forall_so(std::string set, FormulaPtr body) { return negate(exists_so(std::move(set), negate(std::move(body)))); }
inline FormulaPtr exists_n(const std::vector<std::string>& xs, FormulaPtr body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = exists(*it, std::move(body));
    return body;
}

}  // namespace fo

struct FreeVars {
    std::set<std::string> first;
    std::set<std::string> second;

    bool empty() const { return first.empty() && second.empty(); }
    bool operator==(const FreeVars&) const = default;
};

inline FreeVars free_vars(const Formula& f) {
    FreeVars out;
    switch (f.kind) {
        case Formula::Kind::EqFO:
        case Formula::Kind::Rel: out.first.insert(f.vars.begin(), f.vars.end()); break;
        case Formula::Kind::Member:
            out.second.insert(f.symbol);
            out.first.insert(f.vars[0]);
            break;
        case Formula::Kind::Card: out.second.insert(f.symbol); break;
        case Formula::Kind::Not:
        case Formula::Kind::And:
            for (const auto& s : f.sub) {
                FreeVars fv = free_vars(*s);
                out.first.insert(fv.first.begin(), fv.first.end());
                out.second.insert(fv.second.begin(), fv.second.end());
            }
            break;
        case Formula::Kind::ExistsFO:
            out = free_vars(*f.sub[0]);
            out.first.erase(f.vars[0]);
            break;
        case Formula::Kind::ExistsSO:
            out = free_vars(*f.sub[0]);
            out.second.erase(f.symbol);
            break;
    }
    return out;
}

inline bool is_sentence(const Formula& f) { return free_vars(f).empty(); }

inline bool has_so_quantifier(const Formula& f) {
    if (f.kind == Formula::Kind::ExistsSO) return true;
    return std::any_of(f.sub.begin(), f.sub.end(), [](const FormulaPtr& s) { return has_so_quantifier(*s); });
}

inline int formula_depth(const Formula& f) {
    int d = 0;
    for (const auto& s : f.sub) d = std::max(d, formula_depth(*s));
    return d + 1;
}

/// Variable assignment: first-order variables to elements, set variables to subsets.
struct Store {
    std::map<std::string, Id> fo;
    std::map<std::string, std::set<Id>> so;
};

namespace detail {

class DenseSet {
public:
    DenseSet() = default;
    explicit DenseSet(std::size_t n) : words_((n + 63) / 64, 0) {}
    bool test(int i) const { return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1U; }
    void flip(int i) { words_[static_cast<std::size_t>(i) >> 6] ^= std::uint64_t{1} << (i & 63); }
    void set(int i) { words_[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }
    int count() const {
        int c = 0;
        for (std::uint64_t w : words_) c += std::popcount(w);
        return c;
    }
    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            for (std::uint64_t bits = words_[w]; bits; bits &= bits - 1) f(static_cast<int>(w * 64 + std::countr_zero(bits)));
    }

private:
    std::vector<std::uint64_t> words_;
};

struct IndexedRelation {
    int arity = 0;
    std::vector<std::vector<int>> tuples;
    std::vector<std::vector<std::vector<int>>> by_position;  // [pos][elem] -> tuple indices
    std::unordered_set<std::uint64_t> encoded;
    std::set<std::vector<int>> fallback;
    bool use_fallback = false;
};

/// Formula compiled against one structure: variables resolved to slots.
class Evaluator {
public:
    Evaluator(const Structure& s, const Formula& f, const std::vector<std::string>& fo_free,
              const std::vector<std::string>& so_free, const Limits& limits)
        : limits_(limits) {
        n_ = static_cast<int>(s.universe.size());
        for (int i = 0; i < n_; ++i) index_[s.universe[i]] = i;
        for (const auto& [name, rel] : s.relations) rel_ids_[name] = add_relation(rel);

        std::map<std::string, int> fo_env, so_env;
        for (const auto& x : fo_free) {
            if (fo_env.count(x)) throw InputError("duplicate free variable " + x);
            fo_env[x] = new_fo_slot();
            fo_bound_[fo_env[x]] = true;
        }
        for (const auto& x : so_free) {
            if (so_env.count(x)) throw InputError("duplicate free set variable " + x);
            so_env[x] = new_so_slot();
            so_bound_[so_env[x]] = true;
        }
        root_ = compile(f, fo_env, so_env);
    }

    /// Binds the i-th free first-order variable.
    void bind(std::size_t i, Id u) {
        auto it = index_.find(u);
        if (it == index_.end()) throw InputError("variable bound to element " + std::to_string(u) + " outside the universe");
        fo_val_[i] = it->second;
    }

    /// Binds the i-th free set variable.
    void bind_set(std::size_t i, const std::set<Id>& us) {
        DenseSet d(static_cast<std::size_t>(n_));
        for (Id u : us) {
            auto it = index_.find(u);
            if (it == index_.end()) throw InputError("set variable contains element " + std::to_string(u) + " outside the universe");
            d.set(it->second);
        }
        so_val_[i] = std::move(d);
    }

    bool run() { return eval(root_); }

private:
    struct Node {
        Formula::Kind kind;
        int rel = -1;
        std::vector<int> args;  // fo slots
        int set = -1;           // so slot
        int q = 1, p = 0;
        std::vector<int> kids;
        int slot = -1;          // quantified slot
        // guarded second-order quantifier: domain = {u : not eval(guard_neg) with guard_var = u}
        int guard_neg = -1;
        int guard_var = -1;
    };

    int add_relation(const Relation& rel) {
        IndexedRelation r;
        r.arity = rel.arity;
        r.by_position.assign(rel.arity, std::vector<std::vector<int>>(n_));
        long double space = 1;
        for (int i = 0; i < rel.arity; ++i) space *= std::max(n_, 1);
        r.use_fallback = space > 1.8e19L;
        for (const auto& t : rel.tuples) {
            std::vector<int> it;
            for (Id u : t) {
                auto f = index_.find(u);
                if (f == index_.end()) throw InputError("relation tuple mentions an element outside the universe");
                it.push_back(f->second);
            }
            const int ti = static_cast<int>(r.tuples.size());
            for (int pos = 0; pos < rel.arity; ++pos) r.by_position[pos][it[pos]].push_back(ti);
            if (r.use_fallback)
                r.fallback.insert(it);
            else
                r.encoded.insert(encode(it));
            r.tuples.push_back(std::move(it));
        }
        rels_.push_back(std::move(r));
        return static_cast<int>(rels_.size()) - 1;
    }

    std::uint64_t encode(const std::vector<int>& t) const {
        std::uint64_t h = 0;
        for (int x : t) h = h * static_cast<std::uint64_t>(std::max(n_, 1)) + static_cast<std::uint64_t>(x);
        return h;
    }

    int new_fo_slot() {
        fo_val_.push_back(-1);
        fo_bound_.push_back(false);
        return static_cast<int>(fo_val_.size()) - 1;
    }
    int new_so_slot() {
        so_val_.emplace_back(static_cast<std::size_t>(n_));
        so_bound_.push_back(false);
        return static_cast<int>(so_val_.size()) - 1;
    }

    static int lookup(const std::map<std::string, int>& env, const std::string& x, const char* what) {
        auto it = env.find(x);
        if (it == env.end()) throw InputError(std::string("unbound ") + what + " variable " + x);
        return it->second;
    }

    int compile(const Formula& f, std::map<std::string, int>& fo_env, std::map<std::string, int>& so_env) {
        Node node;
        node.kind = f.kind;
        switch (f.kind) {
            case Formula::Kind::EqFO:
                node.args = {lookup(fo_env, f.vars[0], "first-order"), lookup(fo_env, f.vars[1], "first-order")};
                break;
            case Formula::Kind::Rel: {
                auto it = rel_ids_.find(f.symbol);
                if (it == rel_ids_.end()) throw InputError("unknown relation symbol " + f.symbol);
                if (rels_[it->second].arity != static_cast<int>(f.vars.size()))
                    throw InputError("relation " + f.symbol + " has arity " + std::to_string(rels_[it->second].arity) +
                                     " but is applied to " + std::to_string(f.vars.size()) + " arguments");
                node.rel = it->second;
                for (const auto& x : f.vars) node.args.push_back(lookup(fo_env, x, "first-order"));
                break;
            }
            case Formula::Kind::Member:
                node.set = lookup(so_env, f.symbol, "second-order");
                node.args = {lookup(fo_env, f.vars[0], "first-order")};
                break;
            case Formula::Kind::Card:
                node.set = lookup(so_env, f.symbol, "second-order");
                node.q = f.q;
                node.p = f.p;
                break;
            case Formula::Kind::Not:
            case Formula::Kind::And:
                for (const auto& s : f.sub) node.kids.push_back(compile(*s, fo_env, so_env));
                break;
            case Formula::Kind::ExistsFO: {
                const std::string& x = f.vars[0];
                const auto it = fo_env.find(x);
                const bool shadows = it != fo_env.end();
                const int saved = shadows ? it->second : -1;
                node.slot = new_fo_slot();
                fo_env[x] = node.slot;
                node.kids.push_back(compile(*f.sub[0], fo_env, so_env));
                if (shadows) fo_env[x] = saved; else fo_env.erase(x);
                break;
            }
            case Formula::Kind::ExistsSO: {
                const std::string& x = f.symbol;
                const auto it = so_env.find(x);
                const bool shadows = it != so_env.end();
                const int saved = shadows ? it->second : -1;
                node.slot = new_so_slot();
                so_env[x] = node.slot;
                node.kids.push_back(compile(*f.sub[0], fo_env, so_env));
                if (shadows) so_env[x] = saved; else so_env.erase(x);
                break;
            }
        }
        nodes_.push_back(std::move(node));
        const int id = static_cast<int>(nodes_.size()) - 1;
        if (f.kind == Formula::Kind::ExistsSO) find_guard(id);
        return id;
    }

    bool mentions_set(int id, int set) const {
        const Node& n = nodes_[id];
        if (n.set == set) return true;
        return std::any_of(n.kids.begin(), n.kids.end(), [&](int k) { return mentions_set(k, set); });
    }

    void collect_conjuncts(int id, std::vector<int>& out) const {
        if (nodes_[id].kind == Formula::Kind::And) {
            for (int k : nodes_[id].kids) collect_conjuncts(k, out);
        } else {
            out.push_back(id);
        }
    }

    // Looks for a conjunct  not exists x. (X(x) and N)  with N free of X.
    void find_guard(int id) {
        Node& q = nodes_[id];
        std::vector<int> conjuncts;
        collect_conjuncts(q.kids[0], conjuncts);
        for (int c : conjuncts) {
            const Node& nn = nodes_[c];
            if (nn.kind != Formula::Kind::Not) continue;
            const Node& ex = nodes_[nn.kids[0]];
            if (ex.kind != Formula::Kind::ExistsFO) continue;
            const Node& body = nodes_[ex.kids[0]];
            if (body.kind != Formula::Kind::And) continue;
            for (int side = 0; side < 2; ++side) {
                const Node& m = nodes_[body.kids[side]];
                const int other = body.kids[1 - side];
                if (m.kind == Formula::Kind::Member && m.set == q.slot && m.args[0] == ex.slot && !mentions_set(other, q.slot)) {
                    q.guard_neg = other;
                    q.guard_var = ex.slot;
                    return;
                }
            }
        }
    }

    bool tuple_in(const IndexedRelation& r, const std::vector<int>& t) const {
        return r.use_fallback ? r.fallback.count(t) > 0 : r.encoded.count(encode(t)) > 0;
    }

    /// Values of slot v that can possibly satisfy node `id`, or nullopt for "any".
    std::optional<std::vector<int>> candidates(int v, int id) const {
        const Node& n = nodes_[id];
        switch (n.kind) {
            case Formula::Kind::Rel: {
                if (std::find(n.args.begin(), n.args.end(), v) == n.args.end()) return std::nullopt;
                const IndexedRelation& r = rels_[n.rel];
                const std::vector<int>* pool = nullptr;
                for (std::size_t pos = 0; pos < n.args.size(); ++pos) {
                    const int a = n.args[pos];
                    if (a == v || !fo_bound_[a]) continue;
                    const auto& lst = r.by_position[pos][fo_val_[a]];
                    if (!pool || lst.size() < pool->size()) pool = &lst;
                }
                std::vector<int> out;
                auto consider = [&](const std::vector<int>& t) {
                    int val = -1;
                    for (std::size_t pos = 0; pos < n.args.size(); ++pos) {
                        const int a = n.args[pos];
                        if (a == v) {
                            if (val >= 0 && val != t[pos]) return;
                            val = t[pos];
                        } else if (fo_bound_[a] && fo_val_[a] != t[pos]) {
                            return;
                        }
                    }
                    out.push_back(val);
                };
                if (pool)
                    for (int ti : *pool) consider(r.tuples[ti]);
                else
                    for (const auto& t : r.tuples) consider(t);
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
                return out;
            }
            case Formula::Kind::Member: {
                if (n.args[0] != v || !so_bound_[n.set]) return std::nullopt;
                std::vector<int> out;
                so_val_[n.set].for_each([&](int u) { out.push_back(u); });
                return out;
            }
            case Formula::Kind::EqFO: {
                const int a = n.args[0], b = n.args[1];
                if (a == v && b != v && fo_bound_[b]) return std::vector<int>{fo_val_[b]};
                if (b == v && a != v && fo_bound_[a]) return std::vector<int>{fo_val_[a]};
                return std::nullopt;
            }
            case Formula::Kind::And: {
                auto l = candidates(v, n.kids[0]);
                if (l && l->empty()) return l;
                auto r = candidates(v, n.kids[1]);
                if (!l) return r;
                if (!r) return l;
                std::vector<int> out;
                std::set_intersection(l->begin(), l->end(), r->begin(), r->end(), std::back_inserter(out));
                return out;
            }
            case Formula::Kind::ExistsFO:
            case Formula::Kind::ExistsSO: return candidates(v, n.kids[0]);
            default: return std::nullopt;
        }
    }

    bool eval(int id) {
        const Node& n = nodes_[id];
        switch (n.kind) {
            case Formula::Kind::EqFO: return fo_val_[n.args[0]] == fo_val_[n.args[1]];
            case Formula::Kind::Rel: {
                std::vector<int> t;
                t.reserve(n.args.size());
                for (int a : n.args) t.push_back(fo_val_[a]);
                return tuple_in(rels_[n.rel], t);
            }
            case Formula::Kind::Member: return so_val_[n.set].test(fo_val_[n.args[0]]);
            case Formula::Kind::Card: return so_val_[n.set].count() % n.q == n.p;
            case Formula::Kind::Not: return !eval(n.kids[0]);
            case Formula::Kind::And: return eval(n.kids[0]) && eval(n.kids[1]);
            case Formula::Kind::ExistsFO: {
                const int slot = n.slot, body = n.kids[0];
                auto cands = candidates(slot, body);
                fo_bound_[slot] = true;
                bool found = false;
                if (cands) {
                    for (int u : *cands) {
                        fo_val_[slot] = u;
                        if (eval(body)) {
                            found = true;
                            break;
                        }
                    }
                } else {
                    for (int u = 0; u < n_ && !found; ++u) {
                        fo_val_[slot] = u;
                        found = eval(body);
                    }
                }
                fo_bound_[slot] = false;
                return found;
            }
            case Formula::Kind::ExistsSO: return eval_exists_so(n);
        }
        return false;
    }

    bool eval_exists_so(const Node& n) {
        std::vector<int> domain;
        if (n.guard_neg >= 0) {
            fo_bound_[n.guard_var] = true;
            for (int u = 0; u < n_; ++u) {
                fo_val_[n.guard_var] = u;
                if (!eval(n.guard_neg)) domain.push_back(u);
            }
            fo_bound_[n.guard_var] = false;
        } else {
            for (int u = 0; u < n_; ++u) domain.push_back(u);
        }
        if (static_cast<int>(domain.size()) > limits_.max_so_domain)
            throw ResourceError("set quantifier over " + std::to_string(domain.size()) + " elements exceeds the bound of " +
                                std::to_string(limits_.max_so_domain));
        const int slot = n.slot;
        so_val_[slot] = DenseSet(static_cast<std::size_t>(n_));
        so_bound_[slot] = true;
        bool found = eval(n.kids[0]);
        const std::uint64_t total = std::uint64_t{1} << domain.size();
        for (std::uint64_t i = 1; i < total && !found; ++i) {
            // Gray code: flip the bit that changes between i-1 and i.
            so_val_[slot].flip(domain[std::countr_zero(i)]);
            found = eval(n.kids[0]);
        }
        so_bound_[slot] = false;
        return found;
    }

    Limits limits_;
    int n_ = 0;
    std::unordered_map<Id, int> index_;
    std::map<std::string, int> rel_ids_;
    std::vector<IndexedRelation> rels_;
    std::vector<Node> nodes_;
    int root_ = -1;
    std::vector<int> fo_val_;
    std::vector<bool> fo_bound_;
    std::vector<DenseSet> so_val_;
    std::vector<bool> so_bound_;
};

}  // namespace detail

/// Formula compiled once against a structure, evaluated under changing bindings
/// of a fixed list of free variables.
class PreparedFormula {
public:
    PreparedFormula(const Structure& s, const Formula& f, std::vector<std::string> fo_free,
                    std::vector<std::string> so_free = {}, const Limits& limits = {})
        : eval_(s, f, fo_free, so_free, limits) {
        FreeVars fv = free_vars(f);
        for (const auto& x : fv.first)
            if (std::find(fo_free.begin(), fo_free.end(), x) == fo_free.end()) throw InputError("unbound first-order variable " + x);
        for (const auto& x : fv.second)
            if (std::find(so_free.begin(), so_free.end(), x) == so_free.end()) throw InputError("unbound second-order variable " + x);
        fo_bound_.assign(fo_free.size(), false);
        so_bound_.assign(so_free.size(), false);
    }

    PreparedFormula& bind(std::size_t i, Id u) {
        eval_.bind(i, u);
        fo_bound_.at(i) = true;
        return *this;
    }
    PreparedFormula& bind_set(std::size_t i, const std::set<Id>& us) {
        eval_.bind_set(i, us);
        so_bound_.at(i) = true;
        return *this;
    }

    bool operator()() {
        if (std::find(fo_bound_.begin(), fo_bound_.end(), false) != fo_bound_.end() ||
            std::find(so_bound_.begin(), so_bound_.end(), false) != so_bound_.end())
            throw InputError("prepared formula evaluated before all free variables were bound");
        return eval_.run();
    }

private:
    detail::Evaluator eval_;
    std::vector<bool> fo_bound_, so_bound_;
};

/// Exact satisfaction of `f` in `s` under `store`.
inline bool satisfies(const Structure& s, const Store& store, const Formula& f, const Limits& limits = {}) {
    std::vector<std::string> fo_names, so_names;
    for (const auto& [x, u] : store.fo) fo_names.push_back(x);
    for (const auto& [x, us] : store.so) so_names.push_back(x);
    PreparedFormula pf(s, f, fo_names, so_names, limits);
    std::size_t i = 0;
    for (const auto& [x, u] : store.fo) pf.bind(i++, u);
    i = 0;
    for (const auto& [x, us] : store.so) pf.bind_set(i++, us);
    return pf();
}

inline bool models(const Structure& s, const Formula& f, const Limits& limits = {}) {
    if (!is_sentence(f)) throw InputError("models: formula has free variables");
    return satisfies(s, Store{}, f, limits);
}

// ---------------------------------------------------------------------------
// Text form

inline sx::Sexpr formula_to_sexpr(const Formula& f) {
    using sx::atom;
    using sx::list;
    switch (f.kind) {
        case Formula::Kind::EqFO: return list({atom("="), atom(f.vars[0]), atom(f.vars[1])});
        case Formula::Kind::Rel: {
            std::vector<sx::Sexpr> xs{atom("rel"), atom(f.symbol)};
            for (const auto& x : f.vars) xs.push_back(atom(x));
            return list(std::move(xs));
        }
        case Formula::Kind::Member: return list({atom("member"), atom(f.symbol), atom(f.vars[0])});
        case Formula::Kind::Card: return list({atom("card"), atom(f.symbol), atom(std::to_string(f.q)), atom(std::to_string(f.p))});
        case Formula::Kind::Not: return list({atom("not"), formula_to_sexpr(*f.sub[0])});
        case Formula::Kind::And: return list({atom("and"), formula_to_sexpr(*f.sub[0]), formula_to_sexpr(*f.sub[1])});
        case Formula::Kind::ExistsFO: return list({atom("exists"), atom(f.vars[0]), formula_to_sexpr(*f.sub[0])});
        case Formula::Kind::ExistsSO: return list({atom("exists-so"), atom(f.symbol), formula_to_sexpr(*f.sub[0])});
    }
    return {};
}

inline std::string formula_to_string(const Formula& f) { return formula_to_sexpr(f).str(); }

/// Reads the core forms plus the sugar: true, false, or, implies, iff, forall,
/// forall-so, and variadic and/or; quantifiers accept a variable list.
inline FormulaPtr formula_from_sexpr(const sx::Sexpr& e) {
    if (e.is_atom) {
        if (e.atom == "true") return fo::verum();
        if (e.atom == "false") return fo::falsum();
        throw InputError("unknown formula atom " + e.atom);
    }
    const std::string head = e.head();
    auto arg = [&](std::size_t i) { return formula_from_sexpr(e[i]); };
    auto need = [&](std::size_t n) {
        if (e.size() != n) throw InputError("formula form " + head + " expects " + std::to_string(n - 1) + " arguments: " + e.str());
    };
    auto bind = [&](bool second, bool universal) {
        need(3);
        std::vector<std::string> names;
        if (e[1].is_atom)
            names.push_back(e[1].atom);
        else
            for (const auto& x : e[1].items) names.push_back(x.as_atom());
        FormulaPtr body = arg(2);
        for (auto it = names.rbegin(); it != names.rend(); ++it) {
            if (second)
                body = universal ? fo::forall_so(*it, body) : fo::exists_so(*it, body);
            else
                body = universal ? fo::forall(*it, body) : fo::exists(*it, body);
        }
        return body;
    };
    if (head == "=") {
        need(3);
        return fo::eq(e[1].as_atom(), e[2].as_atom());
    }
    if (head == "rel") {
        if (e.size() < 2) throw InputError("rel: missing relation symbol");
        std::vector<std::string> args;
        for (std::size_t i = 2; i < e.size(); ++i) args.push_back(e[i].as_atom());
        return fo::rel(e[1].as_atom(), std::move(args));
    }
    if (head == "member" || head == "in") {
        need(3);
        return fo::member(e[1].as_atom(), e[2].as_atom());
    }
    if (head == "card") {
        need(4);
        return fo::card(e[1].as_atom(), e[2].as_int(), e[3].as_int());
    }
    if (head == "not") {
        need(2);
        return fo::neg(arg(1));
    }
    if (head == "and" || head == "or") {
        std::vector<FormulaPtr> xs;
        for (std::size_t i = 1; i < e.size(); ++i) xs.push_back(arg(i));
        if (head == "or") return fo::any(std::move(xs));
        if (xs.size() == 1) return xs[0];
        return fo::all(std::move(xs));
    }
    if (head == "implies") {
        need(3);
        return fo::implies(arg(1), arg(2));
    }
    if (head == "iff") {
        need(3);
        return fo::iff(arg(1), arg(2));
    }
    if (head == "exists") return bind(false, false);
    if (head == "forall") return bind(false, true);
    if (head == "exists-so") return bind(true, false);
    if (head == "forall-so") return bind(true, true);
    throw InputError("unknown formula form: " + e.str());
}

inline FormulaPtr parse_formula(std::string_view text) { return formula_from_sexpr(sx::parse(text)); }

}  // namespace hrgraph
