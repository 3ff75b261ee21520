#pragma once

// S-expression forms of sorts, permutations and HR terms:
//   (empty (s1 s2))  (edge a s1 s2)  (restrict (s1) t)
//   (rename ((s1 s2) (s2 s3)) t)  (par t1 t2)  (nt X)

#include <string>
#include <vector>

#include "hr_algebra.hpp"
#include "sexpr.hpp"

namespace hrgraph {

inline sx::Sexpr sort_to_sexpr(const SortSet& tau) {
    std::vector<sx::Sexpr> xs;
    for (const SourceLabel& s : tau) xs.push_back(sx::atom(s.name));
    return sx::list(std::move(xs));
}

inline SourceLabel label_from_sexpr(const sx::Sexpr& e) {
    const std::string& name = e.as_atom();
    if (!is_valid_label_name(name)) throw InputError("invalid source label '" + name + "'");
    return SourceLabel{name};
}

inline SortSet sort_from_sexpr(const sx::Sexpr& e) {
    SortSet tau;
    for (const sx::Sexpr& x : e.expect_list().items)
        if (!tau.insert(label_from_sexpr(x)).second) throw InputError("duplicate label " + x.atom + " in sort " + e.str());
    return tau;
}

inline sx::Sexpr perm_to_sexpr(const Permutation& p) {
    std::vector<sx::Sexpr> xs;
    for (const auto& [a, b] : p.to_transpositions()) xs.push_back(sx::list({sx::atom(a.name), sx::atom(b.name)}));
    return sx::list(std::move(xs));
}

inline Permutation perm_from_sexpr(const sx::Sexpr& e) {
    std::vector<std::pair<SourceLabel, SourceLabel>> ts;
    for (const sx::Sexpr& t : e.expect_list().items) {
        if (t.is_atom || t.size() != 2) throw InputError("transposition must be a pair, got " + t.str());
        ts.emplace_back(label_from_sexpr(t[0]), label_from_sexpr(t[1]));
    }
    return Permutation::from_transpositions(ts);
}

inline sx::Sexpr term_to_sexpr(const Term& t) {
    switch (t.kind) {
        case Term::Kind::Empty: return sx::list({sx::atom("empty"), sort_to_sexpr(t.sort)});
        case Term::Kind::Edge: {
            std::vector<sx::Sexpr> xs{sx::atom("edge"), sx::atom(t.label.name)};
            for (const SourceLabel& s : t.sources) xs.push_back(sx::atom(s.name));
            return sx::list(std::move(xs));
        }
        case Term::Kind::Restrict:
            return sx::list({sx::atom("restrict"), sort_to_sexpr(t.sort), term_to_sexpr(*t.children[0])});
        case Term::Kind::Rename:
            return sx::list({sx::atom("rename"), perm_to_sexpr(t.perm), term_to_sexpr(*t.children[0])});
        case Term::Kind::Parallel:
            return sx::list({sx::atom("par"), term_to_sexpr(*t.children[0]), term_to_sexpr(*t.children[1])});
        case Term::Kind::Nonterminal: return sx::list({sx::atom("nt"), sx::atom(t.name)});
    }
    return {};
}

inline std::string term_to_string(const Term& t) { return term_to_sexpr(t).str(); }

inline TermPtr term_from_sexpr(const sx::Sexpr& e) {
    const std::string head = e.head();
    if (head == "empty") {
        if (e.size() != 2) throw InputError("empty: expected (empty (labels...)), got " + e.str());
        return Term::empty(sort_from_sexpr(e[1]));
    }
    if (head == "edge") {
        if (e.size() < 3) throw InputError("edge: expected (edge label s1 ... sk) with k >= 1, got " + e.str());
        const std::string& name = e[1].as_atom();
        if (!is_valid_label_name(name)) throw InputError("invalid edge label '" + name + "'");
        std::vector<SourceLabel> ss;
        for (std::size_t i = 2; i < e.size(); ++i) ss.push_back(label_from_sexpr(e[i]));
        const int k = static_cast<int>(ss.size());
        return Term::edge(EdgeLabel{name, k}, std::move(ss));
    }
    if (head == "restrict") {
        if (e.size() != 3) throw InputError("restrict: expected (restrict (labels...) term), got " + e.str());
        return Term::restrict(sort_from_sexpr(e[1]), term_from_sexpr(e[2]));
    }
    if (head == "rename") {
        if (e.size() != 3) throw InputError("rename: expected (rename ((a b)...) term), got " + e.str());
        return Term::rename(perm_from_sexpr(e[1]), term_from_sexpr(e[2]));
    }
    if (head == "par") {
        if (e.size() < 3) throw InputError("par: expected at least two arguments, got " + e.str());
        TermPtr acc = term_from_sexpr(e[1]);
        for (std::size_t i = 2; i < e.size(); ++i) acc = Term::par(acc, term_from_sexpr(e[i]));
        return acc;
    }
    if (head == "nt") {
        if (e.size() != 2) throw InputError("nt: expected (nt Name), got " + e.str());
        return Term::nonterminal(e[1].as_atom());
    }
    throw InputError("unknown term form: " + e.str());
}

inline TermPtr parse_term(std::string_view text) { return term_from_sexpr(sx::parse(text)); }

}  // namespace hrgraph
