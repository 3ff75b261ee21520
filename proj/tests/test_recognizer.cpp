#include <random>

#include "catch_amalgamated.hpp"
#include "generators.hpp"
#include "hrgraph/hrgraph.hpp"

using namespace hrgraph;

namespace {

const EdgeLabel kA{"a", 1};

bool even_sourceless(const Graph& g) { return g.sort().empty() && g.edges.size() % 2 == 0; }

Graph with_edges(int n) {
    Graph g = const_empty({"s1"});
    for (int i = 0; i < n; ++i) g = parallel(g, const_edge(kA, {"s1"}));
    return g;
}

// Graphs of sort within {s1} with at most two a-edges, the 0_{s1} context first.
std::vector<Graph> small_contexts() {
    std::vector<Graph> out{const_empty({"s1"}), const_empty({})};
    for (int n = 1; n <= 2; ++n) {
        out.push_back(with_edges(n));
        out.push_back(restrict({}, with_edges(n)));
    }
    out.push_back(parallel(const_edge(kA, {"s1"}), restrict({}, const_edge(kA, {"s1"}))));
    return out;
}

}  // namespace

TEST_CASE("parity hom_eval", "[recognizer]") {
    const SortSet tau = sort_of({"s1", "s2"});
    const FiniteAlgebra a = parity_algebra(tau, {{"a", 2}});
    CHECK_FALSE(validate_algebra(a));
    CHECK(hom_eval(a, *Term::empty({})) == "even");
    CHECK(hom_eval(a, *Term::empty(tau)) == "even");
    CHECK(hom_eval(a, *Term::edge({"a", 2}, {"s1", "s2"})) == "odd");
    const auto e = Term::edge({"a", 2}, {"s1", "s2"});
    CHECK(hom_eval(a, *Term::par(e, e)) == "even");
    CHECK(hom_eval(a, *Term::par(e, Term::empty({"s1"}))) == "odd");
    CHECK(hom_eval(a, *Term::rename(Permutation::transposition("s1", "s2"), Term::restrict({}, e))) == "odd");
}

TEST_CASE("hom_eval agrees with edge counts", "[recognizer]") {
    std::mt19937 rng(61);
    const SortSet tau = gen::first_labels(3);
    const FiniteAlgebra a = parity_algebra(tau, gen::default_labels());
    for (int i = 0; i < 100; ++i) {
        const TermPtr t = gen::random_term(rng, tau, 6);
        CHECK(hom_eval(a, *t) == (eval_term(*t).edges.size() % 2 ? "odd" : "even"));
    }
}

TEST_CASE("hom_eval errors", "[recognizer]") {
    FiniteAlgebra a = parity_algebra(sort_of({"s1"}), {kA});
    CHECK_THROWS_AS(hom_eval(a, *Term::edge({"b", 1}, {"s1"})), InputError);
    CHECK_THROWS_AS(hom_eval(a, *Term::nonterminal("X")), InputError);
    // a value outside the carrier of the term's sort
    FiniteAlgebra b;
    b.tau = sort_of({"s1"});
    b.carrier[{}] = {"zero"};
    b.carrier[sort_of({"s1"})] = {"one"};
    b.set_op(op_symbol(*Term::empty({"s1"})), {}, "zero");
    CHECK_FALSE(validate_algebra(b));
    CHECK_THROWS_AS(hom_eval(b, *Term::empty({"s1"})), InputError);
    b.set_op("par", {"zero", "nothing"}, "zero");
    CHECK(validate_algebra(b));
}

TEST_CASE("accepts", "[recognizer]") {
    const FiniteAlgebra a = parity_algebra(sort_of({"s1", "s2"}), {{"a", 2}});
    const auto e = Term::edge({"a", 2}, {"s1", "s2"});
    const auto two = Term::par(e, Term::restrict({}, e));
    CHECK(accepts(a, {"even"}, *two));
    std::mt19937 rng(62);
    for (int i = 0; i < 30; ++i) {
        const TermPtr t = gen::random_term(rng, sort_of({"s1", "s2"}), 5, {{"a", 2}});
        CHECK_FALSE(accepts(a, {}, *t));
        CHECK(accepts(a, {"even", "odd"}, *t));
    }
}

TEST_CASE("parallel tables are commutative", "[recognizer]") {
    const FiniteAlgebra a = parity_algebra(sort_of({"s1", "s2"}), {{"a", 2}});
    for (const auto& [args, r] : a.ops.at("par")) CHECK(a.apply("par", {args[1], args[0]}) == r);
    std::mt19937 rng(63);
    for (int i = 0; i < 30; ++i) {
        const TermPtr x = gen::random_term(rng, sort_of({"s1", "s2"}), 4, {{"a", 2}});
        const TermPtr y = gen::random_term(rng, sort_of({"s1", "s2"}), 4, {{"a", 2}});
        CHECK(hom_eval(a, *Term::par(x, y)) == hom_eval(a, *Term::par(y, x)));
    }
}

TEST_CASE("congruence on even sourceless graphs", "[recognizer]") {
    const SortSet tau = sort_of({"s1"});
    const Graph g1 = const_empty({"s1"});
    const Graph g2 = with_edges(2);
    const Graph g3 = with_edges(1);
    const auto ctx = small_contexts();

    CHECK(congruent_bounded(even_sourceless, g1, g2, ctx, tau).congruent);

    const auto v = congruent_bounded(even_sourceless, g1, g3, ctx, tau);
    REQUIRE_FALSE(v.congruent);
    REQUIRE(v.context);
    CHECK(is_isomorphic(*v.context, const_empty({"s1"})));
    CHECK(v.restriction.empty());
    CHECK_FALSE(v.rename);

    CHECK(congruent_bounded(even_sourceless, g3, g3, ctx, tau).congruent);
    CHECK_THROWS_AS(congruent_bounded(even_sourceless, g1, const_empty({}), ctx, tau), InputError);
}

TEST_CASE("congruence never separates isomorphic graphs", "[recognizer]") {
    std::mt19937 rng(64);
    const SortSet tau = sort_of({"s1", "s2"});
    const auto oracle = [](const Graph& g) { return g.edges.size() % 3 == 1 || g.sort().size() == 1; };
    std::vector<Graph> ctx;
    for (int i = 0; i < 6; ++i) ctx.push_back(gen::random_sample(rng, 4, 3).graph);
    for (int i = 0; i < 20; ++i) {
        const Graph g = eval_term(*gen::random_term(rng, tau, 4));
        const Graph h = gen::shuffle_ids(rng, g);
        CHECK(congruent_bounded(oracle, g, h, ctx, tau).congruent);
        CHECK(congruent_bounded(oracle, g, h, ctx, tau, true).congruent);
    }
}

TEST_CASE("renaming contexts", "[recognizer]") {
    // L: graphs whose s1-source carries an edge; only a rename can expose s2
    const auto oracle = [](const Graph& g) {
        auto s = g.source("s1");
        if (!s) return false;
        return std::any_of(g.edges.begin(), g.edges.end(), [&](const Edge& e) { return e.attach[0] == *s; });
    };
    const SortSet tau = sort_of({"s1", "s2"});
    const Graph g1 = const_empty(tau);
    const Graph g2 = parallel(const_empty(tau), const_edge(kA, {"s2"}));
    const std::vector<Graph> ctx{const_empty({})};
    CHECK(congruent_bounded(oracle, g1, g2, ctx, tau).congruent);
    const auto v = congruent_bounded(oracle, g1, g2, ctx, tau, true);
    REQUIRE_FALSE(v.congruent);
    REQUIRE(v.rename);
    CHECK(v.rename->mapping().size() == 2);
}

TEST_CASE("algebra text round trip", "[recognizer]") {
    const FiniteAlgebra a = parity_algebra(sort_of({"s1", "s2"}), {{"a", 2}, kA});
    const FiniteAlgebra b = algebra_from_sexpr(algebra_to_sexpr(a));
    CHECK(b.tau == a.tau);
    CHECK(b.carrier == a.carrier);
    CHECK(b.ops == a.ops);
    const FiniteAlgebra c = algebra_from_sexpr(sx::parse(
        "(algebra (sorts () (s1)) (carrier () even odd) (carrier (s1) even odd)"
        " (op (empty ()) (() -> even)) (op (empty (s1)) (() -> even)) (op (edge a s1) (() -> odd))"
        " (op (restrict ()) ((even) -> even) ((odd) -> odd))"
        " (op par ((even even) -> even) ((even odd) -> odd) ((odd even) -> odd) ((odd odd) -> even)))"));
    CHECK(hom_eval(c, *Term::restrict({}, Term::par(Term::edge(kA, {"s1"}), Term::edge(kA, {"s1"})))) == "even");
    CHECK_THROWS_AS(algebra_from_sexpr(sx::parse("(algebra (carrier () x) (op par ((x x) -> y)))")), InputError);
    CHECK_THROWS_AS(algebra_from_sexpr(sx::parse("(algebra (op frob))")), InputError);
}
