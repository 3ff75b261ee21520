#pragma once

// k-copying parameterized transduction schemes over finite structures.
// Layer formulas use the free variable x1; output formulas for a symbol of
// arity r use x1..xr; parameters are free set variables.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "isomorphism.hpp"
#include "logic.hpp"
#include "sexpr.hpp"
#include "structure.hpp"

namespace hrgraph {

using Signature = std::map<std::string, int>;

inline std::string layer_var(int i) { return "x" + std::to_string(i); }

struct OutputKey {
    std::string symbol;
    std::vector<int> layers;  // 1-based, one per argument position

    auto operator<=>(const OutputKey&) const = default;
};

struct TransductionScheme {
    int copies = 1;
    std::vector<std::string> params;
    Signature input;
    Signature output;
    FormulaPtr domain;
    std::map<int, FormulaPtr> layers;          // missing layer: false
    std::map<OutputKey, FormulaPtr> outputs;   // missing entry: false
};

inline std::optional<std::string> validate_scheme(const TransductionScheme& t) {
    if (t.copies < 1) return "copies must be at least 1";
    if (!t.domain) return "missing domain formula";
    const std::set<std::string> params(t.params.begin(), t.params.end());
    if (params.size() != t.params.size()) return "duplicate parameter name";
    auto check = [&](const Formula& f, int arity, const std::string& what) -> std::optional<std::string> {
        FreeVars fv = free_vars(f);
        for (const auto& x : fv.second)
            if (!params.count(x)) return what + ": free set variable " + x + " is not a parameter";
        for (const auto& x : fv.first) {
            bool ok = false;
            for (int i = 1; i <= arity; ++i) ok = ok || x == layer_var(i);
            if (!ok) return what + ": free variable " + x + " is not among x1..x" + std::to_string(arity);
        }
        return std::nullopt;
    };
    if (auto e = check(*t.domain, 0, "domain")) return e;
    for (const auto& [i, psi] : t.layers) {
        if (i < 1 || i > t.copies) return "layer " + std::to_string(i) + " out of range";
        if (auto e = check(*psi, 1, "layer " + std::to_string(i))) return e;
    }
    for (const auto& [key, theta] : t.outputs) {
        auto it = t.output.find(key.symbol);
        if (it == t.output.end()) return "output formula for undeclared symbol " + key.symbol;
        if (static_cast<int>(key.layers.size()) != it->second)
            return "output formula for " + key.symbol + " has " + std::to_string(key.layers.size()) + " layers, arity is " +
                   std::to_string(it->second);
        for (int i : key.layers)
            if (i < 1 || i > t.copies) return "output formula for " + key.symbol + " uses layer " + std::to_string(i) + " out of range";
        if (auto e = check(*theta, it->second, "output " + key.symbol)) return e;
    }
    return std::nullopt;
}

namespace detail {

/// Copy of `s` with every input symbol declared; rejects symbols outside the signature.
inline Structure conform(const Structure& s, const Signature& sig) {
    Structure out = s;
    for (const auto& [name, rel] : s.relations) {
        auto it = sig.find(name);
        if (it == sig.end()) throw InputError("signature mismatch: structure has symbol " + name + " not in the scheme's input signature");
        if (it->second != rel.arity)
            throw InputError("signature mismatch: symbol " + name + " has arity " + std::to_string(rel.arity) + ", expected " +
                             std::to_string(it->second));
    }
    for (const auto& [name, arity] : sig) out.declare(name, arity);
    return out;
}

}  // namespace detail

/// def_Θ for one parameter valuation; nullopt when the input is outside the domain.
inline std::optional<Structure> apply_scheme(const TransductionScheme& t, const Structure& s, const Store& params,
                                             const Limits& limits = {}) {
    if (auto err = validate_scheme(t)) throw InputError("invalid scheme: " + *err);
    if (auto err = validate_structure(s)) throw InputError("invalid structure: " + *err);
    if (params.so.size() != t.params.size() || !params.fo.empty())
        throw InputError("parameter arity mismatch: scheme has " + std::to_string(t.params.size()) + " parameters, got " +
                         std::to_string(params.so.size()) + " set and " + std::to_string(params.fo.size()) + " element bindings");
    for (const auto& x : t.params)
        if (!params.so.count(x)) throw InputError("parameter arity mismatch: no value for parameter " + x);

    const Structure in = detail::conform(s, t.input);
    if (!satisfies(in, params, *t.domain, limits)) return std::nullopt;

    auto prepare = [&](const Formula& f, int arity) {
        std::vector<std::string> fo;
        for (int i = 1; i <= arity; ++i) fo.push_back(layer_var(i));
        PreparedFormula pf(in, f, fo, t.params, limits);
        for (std::size_t i = 0; i < t.params.size(); ++i) pf.bind_set(i, params.so.at(t.params[i]));
        return pf;
    };

    // Output elements are numbered in (element, layer) order.
    std::vector<std::vector<Id>> selected(t.copies + 1);  // per layer, input elements
    std::map<std::pair<Id, int>, Id> out_id;
    {
        std::vector<std::pair<Id, int>> pairs;
        for (const auto& [i, psi] : t.layers) {
            PreparedFormula pf = prepare(*psi, 1);
            for (Id u : in.universe)
                if (pf.bind(0, u)()) pairs.emplace_back(u, i);
        }
        std::sort(pairs.begin(), pairs.end());
        for (const auto& pr : pairs) {
            out_id.emplace(pr, static_cast<Id>(out_id.size()));
            selected[pr.second].push_back(pr.first);
        }
    }

    Structure out;
    for (Id k = 0; k < static_cast<Id>(out_id.size()); ++k) out.universe.push_back(k);
    for (const auto& [name, arity] : t.output) out.declare(name, arity);

    for (const auto& [key, theta] : t.outputs) {
        const int arity = static_cast<int>(key.layers.size());
        PreparedFormula pf = prepare(*theta, arity);
        std::vector<std::size_t> pos(arity, 0);
        bool empty = false;
        for (int j = 0; j < arity; ++j) empty = empty || selected[key.layers[j]].empty();
        if (empty) continue;
        std::vector<Id> tuple(arity);
        for (;;) {
            for (int j = 0; j < arity; ++j) pf.bind(j, selected[key.layers[j]][pos[j]]);
            if (pf()) {
                for (int j = 0; j < arity; ++j) tuple[j] = out_id.at({selected[key.layers[j]][pos[j]], key.layers[j]});
                out.add(key.symbol, tuple);
            }
            int j = arity - 1;
            while (j >= 0 && ++pos[j] == selected[key.layers[j]].size()) pos[j--] = 0;
            if (j < 0) break;
        }
    }
    return out;
}

namespace detail {

inline void add_unique(std::vector<Structure>& acc, Structure s) {
    const std::uint64_t h = invariant_hash(s);
    for (const auto& t : acc)
        if (invariant_hash(t) == h && is_isomorphic(t, s)) return;
    acc.push_back(std::move(s));
}

}  // namespace detail

/// Outputs over every parameter valuation, deduplicated up to isomorphism.
inline std::vector<Structure> enumerate_outputs(const TransductionScheme& t, const Structure& s, const Limits& limits = {}) {
    const std::size_t n = s.universe.size();
    const std::size_t k = t.params.size();
    if (k > 0) {
        if (static_cast<int>(n) > limits.max_param_universe)
            throw ResourceError("parameter enumeration: universe of " + std::to_string(n) + " elements exceeds the bound of " +
                                std::to_string(limits.max_param_universe));
        if (static_cast<long long>(n * k) > limits.max_param_bits)
            throw ResourceError("parameter enumeration: " + std::to_string(k) + " parameters over " + std::to_string(n) +
                                " elements exceed the bound of " + std::to_string(limits.max_param_bits) + " bits");
    }
    std::vector<Structure> outs;
    const std::uint64_t total = std::uint64_t{1} << (n * k);
    for (std::uint64_t bits = 0; bits < total; ++bits) {
        Store store;
        for (std::size_t p = 0; p < k; ++p) {
            auto& set = store.so[t.params[p]];
            for (std::size_t i = 0; i < n; ++i)
                if ((bits >> (p * n + i)) & 1U) set.insert(s.universe[i]);
        }
        if (auto r = apply_scheme(t, s, store, limits)) detail::add_unique(outs, std::move(*r));
    }
    return outs;
}

struct Pipeline {
    std::vector<TransductionScheme> stages;
};

inline std::optional<std::string> validate_pipeline(const Pipeline& p) {
    for (std::size_t j = 0; j + 1 < p.stages.size(); ++j)
        if (p.stages[j].output != p.stages[j + 1].input)
            return "stage signature mismatch between stage " + std::to_string(j + 1) + " and stage " + std::to_string(j + 2);
    return std::nullopt;
}

/// Relational composition of the stages. Intermediate results are kept as
/// concrete structures; deduplication happens on the final set.
inline std::vector<Structure> pipeline_apply(const Pipeline& p, const Structure& s, const Limits& limits = {}) {
    if (auto err = validate_pipeline(p)) throw InputError(*err);
    std::vector<Structure> current{s};
    for (const auto& stage : p.stages) {
        std::vector<Structure> next;
        for (const auto& x : current)
            for (auto& y : enumerate_outputs(stage, x, limits)) next.push_back(std::move(y));
        current = std::move(next);
    }
    std::vector<Structure> out;
    for (auto& x : current) detail::add_unique(out, std::move(x));
    return out;
}

// ---------------------------------------------------------------------------
// Trees with linked leaves. Binary trees are encoded with vertex elements and
// edge elements e, with r_left(e, parent, child) and r_right(e, parent, child).

namespace tll {

inline const std::string kLeft = "r_left";
inline const std::string kRight = "r_right";
inline const std::string kNext = "r_next";

inline FormulaPtr forall_n(const std::vector<std::string>& xs, FormulaPtr body) {
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = fo::forall(*it, std::move(body));
    return body;
}

inline FormulaPtr edge_to(const std::string& r, const std::string& p, const std::string& c) {
    return fo::exists("_e", fo::rel(r, {"_e", p, c}));
}
inline FormulaPtr child(const std::string& p, const std::string& c) {
    return fo::disj(edge_to(kLeft, p, c), edge_to(kRight, p, c));
}
inline FormulaPtr has_parent(const std::string& x) { return fo::exists("_q", child("_q", x)); }
/// Not the edge component of any tuple.
inline FormulaPtr vertex(const std::string& x) {
    return fo::conj(fo::negate(fo::exists_n({"_va", "_vb"}, fo::rel(kLeft, {x, "_va", "_vb"}))),
                    fo::negate(fo::exists_n({"_va", "_vb"}, fo::rel(kRight, {x, "_va", "_vb"}))));
}
inline FormulaPtr leaf(const std::string& x) {
    return fo::conj(vertex(x), fo::negate(fo::exists("_c", child(x, "_c"))));
}

/// y is reached from x by following only r-edges (x itself included).
inline FormulaPtr spine(const std::string& r, const std::string& x, const std::string& y) {
    const std::string path = "_P";
    auto in = [&](const std::string& v) { return fo::member(path, v); };
    return fo::exists_so(
        path, fo::all({fo::forall("_u", fo::implies(in("_u"), fo::disj(fo::eq("_u", x), fo::exists("_q", edge_to(r, "_q", "_u"))))), in(x), in(y),
                       fo::forall("_u", fo::implies(fo::conj(in("_u"), fo::negate(fo::eq("_u", x))),
                                                    fo::exists("_p", fo::conj(in("_p"), edge_to(r, "_p", "_u")))))}));
}

/// For leaves x and y: y is the leaf right after x in left-to-right order.
inline FormulaPtr successor(const std::string& x, const std::string& y) {
    return fo::exists_n({"_z", "_l", "_r"}, fo::all({edge_to(kLeft, "_z", "_l"), edge_to(kRight, "_z", "_r"), spine(kRight, "_l", x),
                                                     spine(kLeft, "_r", y)}));
}

/// Rooted, connected, acyclic, and every inner vertex has exactly one left and one right child.
inline FormulaPtr binary_tree() {
    using namespace fo;
    std::vector<FormulaPtr> parts;
    const std::string rels[2] = {kLeft, kRight};
    // each edge element carries exactly one tuple
    for (const auto& r1 : rels)
        for (const auto& r2 : rels) {
            FormulaPtr same = r1 == r2 ? conj(eq("_a", "_c"), eq("_b", "_d")) : falsum();
            parts.push_back(forall_n({"_e", "_a", "_b", "_c", "_d"}, implies(conj(rel(r1, {"_e", "_a", "_b"}), rel(r2, {"_e", "_c", "_d"})), same)));
        }
    // tuple endpoints are vertices
    for (const auto& r : rels)
        parts.push_back(forall_n({"_e", "_a", "_b"}, implies(rel(r, {"_e", "_a", "_b"}), conj(vertex("_a"), vertex("_b")))));
    // at most one incoming edge per vertex
    for (const auto& r1 : rels)
        for (const auto& r2 : rels)
            parts.push_back(forall_n({"_e", "_f", "_a", "_b", "_c"},
                                     implies(conj(rel(r1, {"_e", "_a", "_c"}), rel(r2, {"_f", "_b", "_c"})), eq("_e", "_f"))));
    // exactly one root
    parts.push_back(exists("_t", all({vertex("_t"), negate(has_parent("_t")),
                                      forall("_y", implies(conj(vertex("_y"), negate(has_parent("_y"))), eq("_y", "_t")))})));
    // inner vertices have one left and one right child
    parts.push_back(forall("_x", implies(conj(vertex("_x"), exists("_k", child("_x", "_k"))),
                                         conj(exists("_k", edge_to(kLeft, "_x", "_k")), exists("_k", edge_to(kRight, "_x", "_k"))))));
    for (const auto& r : rels)
        parts.push_back(forall_n({"_x", "_e", "_f", "_c", "_d"},
                                 implies(conj(rel(r, {"_e", "_x", "_c"}), rel(r, {"_f", "_x", "_d"})), eq("_e", "_f"))));
    // no nonempty set of vertices in which every member has its parent
    parts.push_back(negate(exists_so(
        "_X", all({forall("_x", implies(member("_X", "_x"), vertex("_x"))), exists("_x", member("_X", "_x")),
                   forall("_x", implies(member("_X", "_x"), exists("_p", conj(member("_X", "_p"), child("_p", "_x")))))}))));
    return all(std::move(parts));
}

}  // namespace tll

/// The tree-with-linked-leaves transduction and its inverse. The first adds an
/// r_next edge from every leaf to its successor leaf; the second deletes them.
inline std::pair<TransductionScheme, TransductionScheme> builtin_tll() {
    using namespace fo;
    using tll::kLeft, tll::kNext, tll::kRight;
    const std::vector<std::string> xs{"x1", "x2", "x3"};

    TransductionScheme add;
    add.copies = 2;
    add.input = {{kLeft, 3}, {kRight, 3}};
    add.output = {{kLeft, 3}, {kRight, 3}, {kNext, 3}};
    add.domain = tll::binary_tree();
    add.layers[1] = verum();
    add.layers[2] = conj(tll::leaf("x1"), exists("y", conj(tll::leaf("y"), tll::successor("x1", "y"))));
    add.outputs[{kLeft, {1, 1, 1}}] = rel(kLeft, xs);
    add.outputs[{kRight, {1, 1, 1}}] = rel(kRight, xs);
    add.outputs[{kNext, {2, 1, 1}}] = all({eq("x1", "x2"), tll::leaf("x2"), tll::leaf("x3"), tll::successor("x2", "x3")});

    TransductionScheme remove;
    remove.copies = 1;
    remove.input = add.output;
    remove.output = add.input;
    remove.domain = verum();
    remove.layers[1] = tll::forall_n({"y", "z"}, negate(rel(kNext, {"x1", "y", "z"})));
    remove.outputs[{kLeft, {1, 1, 1}}] = rel(kLeft, xs);
    remove.outputs[{kRight, {1, 1, 1}}] = rel(kRight, xs);
    return {add, remove};
}

// ---------------------------------------------------------------------------
// Text form:
//   (scheme (copies k) (params X ...) (input (r 3) ...) (output (q 2) ...)
//           (domain phi) (layer i psi) (out q (i1 ... ir) theta) ...)
// input/output default to the symbols used by the formulas.

namespace detail {

inline void collect_symbols(const Formula& f, Signature& sig) {
    if (f.kind == Formula::Kind::Rel) {
        auto [it, fresh] = sig.emplace(f.symbol, static_cast<int>(f.vars.size()));
        if (!fresh && it->second != static_cast<int>(f.vars.size()))
            throw InputError("relation " + f.symbol + " used with arities " + std::to_string(it->second) + " and " +
                             std::to_string(f.vars.size()));
    }
    for (const auto& s : f.sub) collect_symbols(*s, sig);
}

inline Signature signature_from_sexpr(const sx::Sexpr& e) {
    Signature sig;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const auto& d = e[i].expect_list();
        if (d.size() != 2) throw InputError("signature entry must be (symbol arity): " + d.str());
        sig[d[0].as_atom()] = d[1].as_int();
    }
    return sig;
}

inline sx::Sexpr signature_to_sexpr(const std::string& head, const Signature& sig) {
    std::vector<sx::Sexpr> xs{sx::atom(head)};
    for (const auto& [name, arity] : sig) xs.push_back(sx::list({sx::atom(name), sx::atom(std::to_string(arity))}));
    return sx::list(std::move(xs));
}

}  // namespace detail

inline TransductionScheme scheme_from_sexpr(const sx::Sexpr& e) {
    if (e.head() != "scheme") throw InputError("expected (scheme ...), got " + e.str());
    TransductionScheme t;
    bool have_input = false, have_output = false, have_copies = false;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const auto& sec = e[i].expect_list();
        const std::string h = sec.head();
        if (h == "copies") {
            t.copies = sec[1].as_int();
            have_copies = true;
        } else if (h == "params") {
            for (std::size_t j = 1; j < sec.size(); ++j) t.params.push_back(sec[j].as_atom());
        } else if (h == "input") {
            t.input = detail::signature_from_sexpr(sec);
            have_input = true;
        } else if (h == "output") {
            t.output = detail::signature_from_sexpr(sec);
            have_output = true;
        } else if (h == "domain") {
            if (t.domain) throw InputError("scheme: duplicate domain section");
            t.domain = formula_from_sexpr(sec[1]);
        } else if (h == "layer") {
            const int k = sec[1].as_int();
            if (t.layers.count(k)) throw InputError("scheme: duplicate layer " + std::to_string(k));
            t.layers[k] = formula_from_sexpr(sec[2]);
        } else if (h == "out") {
            OutputKey key{sec[1].as_atom(), {}};
            for (const auto& x : sec[2].expect_list().items) key.layers.push_back(x.as_int());
            if (t.outputs.count(key)) throw InputError("scheme: duplicate out section for " + key.symbol);
            t.outputs[key] = formula_from_sexpr(sec[3]);
        } else {
            throw InputError("scheme: unknown section " + sec.str());
        }
    }
    if (!have_copies) throw InputError("scheme: missing (copies k)");
    if (!t.domain) t.domain = fo::verum();
    if (!have_input) {
        detail::collect_symbols(*t.domain, t.input);
        for (const auto& [i, f] : t.layers) detail::collect_symbols(*f, t.input);
        for (const auto& [k, f] : t.outputs) detail::collect_symbols(*f, t.input);
    }
    if (!have_output)
        for (const auto& [k, f] : t.outputs) t.output[k.symbol] = static_cast<int>(k.layers.size());
    if (auto err = validate_scheme(t)) throw InputError("invalid scheme: " + *err);
    return t;
}

inline sx::Sexpr scheme_to_sexpr(const TransductionScheme& t) {
    using sx::atom;
    using sx::list;
    std::vector<sx::Sexpr> xs{atom("scheme"), list({atom("copies"), atom(std::to_string(t.copies))})};
    std::vector<sx::Sexpr> ps{atom("params")};
    for (const auto& p : t.params) ps.push_back(atom(p));
    xs.push_back(list(std::move(ps)));
    xs.push_back(detail::signature_to_sexpr("input", t.input));
    xs.push_back(detail::signature_to_sexpr("output", t.output));
    xs.push_back(list({atom("domain"), formula_to_sexpr(*t.domain)}));
    for (const auto& [i, f] : t.layers) xs.push_back(list({atom("layer"), atom(std::to_string(i)), formula_to_sexpr(*f)}));
    for (const auto& [k, f] : t.outputs) {
        std::vector<sx::Sexpr> ls;
        for (int i : k.layers) ls.push_back(atom(std::to_string(i)));
        xs.push_back(list({atom("out"), atom(k.symbol), list(std::move(ls)), formula_to_sexpr(*f)}));
    }
    return list(std::move(xs));
}

}  // namespace hrgraph
