#include <random>

#include "catch_amalgamated.hpp"
#include "generators.hpp"
#include "hrgraph/hrgraph.hpp"

using namespace hrgraph;

namespace {

const EdgeLabel kA{"a", 1};

Grammar star_grammar() {
    Grammar g;
    g.tau = sort_of({"s1"});
    g.nonterminals["X"] = g.tau;
    g.rules.push_back({"X", Term::edge(kA, {"s1"})});
    g.rules.push_back({"X", Term::par(Term::nonterminal("X"), Term::nonterminal("X"))});
    return g;
}

Graph star(int edges) {
    Graph g = const_empty({"s1"});
    for (int i = 0; i < edges; ++i) g = parallel(g, const_edge(kA, {"s1"}));
    return g;
}

bool contains(const std::vector<LanguageEntry>& xs, const Graph& g) {
    return std::any_of(xs.begin(), xs.end(), [&](const LanguageEntry& e) { return is_isomorphic(e.graph, g); });
}

bool same_language(const std::vector<LanguageEntry>& a, const std::vector<LanguageEntry>& b) {
    if (a.size() != b.size()) return false;
    return std::all_of(a.begin(), a.end(), [&](const LanguageEntry& e) { return contains(b, e.graph); });
}

std::set<std::size_t> edge_counts(const std::vector<LanguageEntry>& xs) {
    std::set<std::size_t> out;
    for (const auto& e : xs) out.insert(e.graph.edges.size());
    return out;
}

}  // namespace

TEST_CASE("single empty rule", "[grammar]") {
    Grammar g;
    g.nonterminals["X"] = {};
    g.rules.push_back({"X", Term::empty({})});
    const auto l = enumerate_language(g, "X", 1);
    REQUIRE(l.size() == 1);
    CHECK(l[0].graph.vertices.empty());
    CHECK(member(g, "X", Graph{}, 1));
    CHECK_FALSE(member(g, "X", Graph{}, 0));
}

TEST_CASE("star grammar", "[grammar]") {
    const Grammar g = star_grammar();
    const auto l = enumerate_language(g, "X", 3);
    CHECK(l.size() == 4);
    CHECK(edge_counts(l) == std::set<std::size_t>{1, 2, 3, 4});
    for (const auto& e : l) {
        CHECK(e.graph.vertices.size() == 1);
        CHECK(is_isomorphic(eval_term(*e.witness), e.graph));
    }
    CHECK_FALSE(member(g, "X", star(5), 2));
    CHECK(member(g, "X", star(5), 4));
    CHECK_FALSE(member(g, "X", star(1), 0));
    CHECK(enumerate_language(g, "X", 0).empty());
}

TEST_CASE("enumeration is monotone in depth", "[grammar]") {
    const Grammar g = universal_grammar(sort_of({"s1"}), {kA, {"b", 2}});
    std::vector<LanguageEntry> prev;
    for (int d = 0; d <= 3; ++d) {
        const auto cur = enumerate_language(g, "X", d);
        for (const auto& e : prev) CHECK(contains(cur, e.graph));
        CHECK(cur.size() >= prev.size());
        prev = cur;
    }
}

TEST_CASE("enumeration errors", "[grammar]") {
    Grammar g = star_grammar();
    CHECK_THROWS_AS(enumerate_language(g, "Y", 1), InputError);
    CHECK_THROWS_AS(enumerate_language(g, "X", -1), InputError);
    Grammar ill = g;
    ill.rules.push_back({"X", Term::empty({"s2"})});
    CHECK(validate_grammar(ill));
    CHECK_THROWS_AS(enumerate_language(ill, "X", 1), InputError);
    Grammar undeclared = g;
    undeclared.rules.push_back({"X", Term::nonterminal("Z")});
    CHECK(validate_grammar(undeclared));
    Limits l;
    l.stage_cap = 3;
    CHECK_THROWS_AS(enumerate_language(g, "X", 4, l), ResourceError);
}

TEST_CASE("nonterminal sorts bound the generated sorts", "[grammar]") {
    Grammar g;
    g.tau = sort_of({"s1", "s2"});
    g.nonterminals["X"] = g.tau;
    g.nonterminals["Y"] = {};
    g.rules.push_back({"X", Term::empty({"s1"})});
    g.rules.push_back({"X", Term::edge({"b", 2}, {"s1", "s2"})});
    g.rules.push_back({"Y", Term::restrict({}, Term::nonterminal("X"))});
    CHECK_FALSE(validate_grammar(g));
    const auto y = enumerate_language(g, "Y", 2);
    CHECK(y.size() == 2);
    for (const auto& e : y) CHECK(e.graph.sort().empty());
    g.rules.push_back({"Y", Term::nonterminal("X")});
    CHECK(validate_grammar(g));
}

TEST_CASE("universal grammar rule families", "[grammar]") {
    const Grammar g = universal_grammar(sort_of({"s1"}), {kA});
    CHECK(g.rules.size() == 7);
    int empties = 0, edges = 0, restricts = 0, renames = 0, pars = 0;
    for (const Rule& r : g.rules) switch (r.rhs->kind) {
            case Term::Kind::Empty: ++empties; break;
            case Term::Kind::Edge: ++edges; break;
            case Term::Kind::Restrict: ++restricts; break;
            case Term::Kind::Rename: ++renames; break;
            case Term::Kind::Parallel: ++pars; break;
            case Term::Kind::Nonterminal: break;
        }
    CHECK(empties == 2);
    CHECK(edges == 1);
    CHECK(restricts == 2);
    CHECK(renames == 1);
    CHECK(pars == 1);

    // 2 labels: 4 empties, 4 binary edges, 4 restricts, identity + 1 transposition, par
    CHECK(universal_grammar(sort_of({"s1", "s2"}), {{"b", 2}}).rules.size() == 4 + 4 + 4 + 2 + 1);
}

TEST_CASE("universal grammar generates bounded-treewidth graphs only", "[grammar]") {
    const SortSet tau = sort_of({"s1", "s2"});
    const auto l = enumerate_language(universal_grammar(tau, {{"b", 2}}), "X", 3);
    REQUIRE(!l.empty());
    for (const auto& e : l) {
        CHECK(treewidth_exact(e.graph).width <= 1);
        CHECK(is_subset(e.graph.sort(), tau));
        CHECK(is_isomorphic(eval_term(*e.witness), e.graph));
    }
}

TEST_CASE("universal grammar derives random terms", "[grammar]") {
    std::mt19937 rng(51);
    const SortSet tau = sort_of({"s1", "s2"});
    const std::vector<EdgeLabel> labels{{"b", 2}};
    const Grammar g = universal_grammar(tau, labels);
    const auto l = enumerate_language(g, "X", 3);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 25; ++i) {
        const TermPtr t = gen::random_term(rng, tau, 3, labels);
        // leaves appear at iteration 1, so a term of height h is derived by iteration h;
        // with two labels every rename is the identity or the transposition
        if (term_height(*t) > 3) continue;
        ++checked;
        CHECK(contains(l, eval_term(*t)));
    }
    CHECK(checked >= 10);
}

TEST_CASE("filtering by edge parity", "[grammar]") {
    const Grammar g = star_grammar();
    const FiniteAlgebra a = parity_algebra(g.tau, {kA});
    const Grammar even = filter_grammar(g, a, {"even"});
    CHECK_FALSE(validate_grammar(even));
    CHECK(even.nonterminals.count(product_name("X", "even")));
    for (int d = 0; d <= 4; ++d) {
        const auto all = enumerate_language(g, "X", d);
        std::vector<LanguageEntry> expected;
        for (const auto& e : all)
            if (e.graph.edges.size() % 2 == 0) expected.push_back(e);
        const auto got = enumerate_language(even, "X", d);
        CHECK(same_language(got, expected));
        for (const auto& e : got) CHECK(accepts(a, {"even"}, *e.witness));
    }
    CHECK(edge_counts(enumerate_language(even, "X", 4)) == std::set<std::size_t>{2, 4, 6, 8});
}

TEST_CASE("filtering with trivial accepting sets", "[grammar]") {
    const Grammar g = universal_grammar(sort_of({"s1"}), {kA, {"b", 2}});
    const FiniteAlgebra a = parity_algebra(g.tau, {kA, {"b", 2}});
    const Grammar everything = filter_grammar(g, a, {"even", "odd"});
    const Grammar nothing = filter_grammar(g, a, {});
    for (int d = 0; d <= 3; ++d) {
        CHECK(same_language(enumerate_language(everything, "X", d), enumerate_language(g, "X", d)));
        CHECK(enumerate_language(nothing, "X", d).empty());
    }
}

TEST_CASE("filtering matches post-filtering on the universal grammar", "[grammar]") {
    const SortSet tau = sort_of({"s1", "s2"});
    const std::vector<EdgeLabel> labels{{"b", 2}};
    const Grammar g = universal_grammar(tau, labels);
    const FiniteAlgebra a = parity_algebra(tau, labels);
    const Grammar odd = filter_grammar(g, a, {"odd"});
    for (int d = 1; d <= 3; ++d) {
        std::vector<LanguageEntry> expected;
        for (const auto& e : enumerate_language(g, "X", d))
            if (hom_eval(a, *e.witness) == "odd") expected.push_back(e);
        const auto got = enumerate_language(odd, "X", d);
        CHECK(same_language(got, expected));
        for (const auto& e : got) CHECK(accepts(a, {"odd"}, *e.witness));
    }
}

TEST_CASE("filter errors", "[grammar]") {
    const Grammar g = star_grammar();
    CHECK_THROWS_AS(filter_grammar(g, parity_algebra({}, {kA}), {"even"}), InputError);
    CHECK_THROWS_AS(filter_grammar(g, parity_algebra(g.tau, {kA}), {"purple"}), InputError);
}

TEST_CASE("grammar text round trip", "[grammar]") {
    const Grammar g = universal_grammar(sort_of({"s1", "s2"}), {kA, {"b", 2}});
    const Grammar h = grammar_from_sexpr(grammar_to_sexpr(g));
    CHECK(grammar_to_sexpr(h).str() == grammar_to_sexpr(g).str());
    CHECK(same_language(enumerate_language(h, "X", 2), enumerate_language(g, "X", 2)));
    CHECK_THROWS_AS(grammar_from_sexpr(sx::parse("(grammar (sort (s1)) (nonterminal X ()) (rule X (empty (s1))))")),
                    InputError);
    CHECK_THROWS_AS(grammar_from_sexpr(sx::parse("(grammar (rules))")), InputError);
}
