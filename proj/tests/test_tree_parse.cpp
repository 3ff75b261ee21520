#include <random>

#include "catch_amalgamated.hpp"
#include "generators.hpp"
#include "hrgraph/hrgraph.hpp"

using namespace hrgraph;

namespace {

const EdgeLabel c1{"c1", 1}, c2{"c2", 1}, b1{"b1", 2}, b2{"b2", 2};

EdgeLabel label_of(const std::string& name, int arity) { return EdgeLabel{name, arity}; }

// Every tree with at most `nodes` nodes over {c1, c2} leaves and {b1} edges, each
// node carrying exactly one constant.
std::vector<Tree> small_trees(int nodes) {
    if (nodes == 1) return {tree_leaf(c1), tree_leaf(c2)};
    std::vector<Tree> out = small_trees(nodes - 1);
    const std::size_t before = out.size();
    for (std::size_t i = 0; i < before; ++i) {
        if (static_cast<int>(out[i].graph().vertices.size()) != nodes - 1) continue;
        out.push_back(tree_append(b1, out[i]));
        out.push_back(tree_compose(out[i], tree_append(b1, tree_leaf(c1))));
        out.push_back(tree_compose(out[i], tree_append(b2, tree_leaf(c2))));
    }
    return out;
}

}  // namespace

TEST_CASE("tree_leaf", "[tree_parse]") {
    const Tree t = parse_leaf(ParseLabel::empty({}));
    CHECK(t.graph().vertices.size() == 1);
    CHECK(t.graph().edges.size() == 1);
    const Tree u = parse_leaf(ParseLabel::edge_of({"a", 2}, {"s1", "s2"}));
    CHECK(u.graph().vertices.size() == 1);
    CHECK(u.graph().edges.size() == 1);
    CHECK(u.graph().sort() == SortSet{kRootLabel});
    CHECK_THROWS_AS(parse_leaf(ParseLabel::restrict({})), InputError);
    CHECK_THROWS_AS(tree_leaf(b1), InputError);
}

TEST_CASE("tree_append", "[tree_parse]") {
    const Tree leaf = parse_leaf(ParseLabel::empty({"s1"}));
    const Tree t = parse_append(ParseLabel::restrict({}), leaf);
    CHECK(t.graph().vertices.size() == 2);
    REQUIRE(t.graph().edges.size() == 2);
    CHECK(t.height() == leaf.height() + 1);
    const Edge* bin = nullptr;
    for (const Edge& e : t.graph().edges)
        if (e.label.arity == 2) bin = &e;
    REQUIRE(bin);
    CHECK(bin->attach[0] == t.root());
    CHECK(tree_append(b1, t).height() == 2);
    CHECK_THROWS_AS(parse_append(ParseLabel::empty({}), leaf), InputError);

    Graph not_tree = gen::cycle(3);
    not_tree.sources[kRootLabel] = 0;
    CHECK_THROWS_AS(Tree::from_graph(not_tree), InputError);
}

TEST_CASE("tree_compose", "[tree_parse]") {
    const Tree t = tree_compose(tree_leaf(c1), tree_leaf(c1));
    CHECK(t.graph().vertices.size() == 1);
    CHECK(t.graph().edges.size() == 2);

    const Tree deep = tree_append(b1, tree_leaf(c1));
    const Tree more = tree_compose(deep, tree_leaf(c2));
    CHECK(more.graph().edges.size() == deep.graph().edges.size() + 1);
    CHECK(more.nodes().at(more.root()).unary.size() == 1);
    CHECK(is_isomorphic(tree_compose(deep, tree_leaf(c2)).graph(), tree_compose(tree_leaf(c2), deep).graph()));
}

TEST_CASE("canonical_term", "[tree_parse]") {
    CHECK(canonical_term(tree_leaf(c1)).str() == "(leaf c1)");
    CHECK(canonical_term(tree_compose(tree_leaf(c2), tree_leaf(c1))) ==
          canonical_term(tree_compose(tree_leaf(c1), tree_leaf(c2))));
    const Tree two_level = tree_compose(tree_leaf(c2), tree_append(b1, tree_compose(tree_leaf(c2), tree_leaf(c1))));
    CHECK(canonical_term(two_level).str() == "(compose (append b1 (compose (leaf c1) (leaf c2))) (leaf c2))");
}

TEST_CASE("canonical_term decides tree isomorphism", "[tree_parse]") {
    const auto trees = small_trees(4);
    REQUIRE(trees.size() > 20);
    for (std::size_t i = 0; i < trees.size(); ++i)
        for (std::size_t j = i; j < trees.size(); ++j) {
            const bool iso = is_isomorphic(trees[i].graph(), trees[j].graph());
            CHECK((canonical_term(trees[i]) == canonical_term(trees[j])) == iso);
        }
    for (const Tree& t : trees) CHECK(is_isomorphic(tree_from_term(canonical_term(t), label_of).graph(), t.graph()));
}

TEST_CASE("term_to_parse_tree", "[tree_parse]") {
    const ParseTree a = term_to_parse_tree(*Term::empty({"s1"}));
    CHECK(canonical_term(a.tree()).str() == "(leaf (empty (s1)))");

    const ParseTree b = term_to_parse_tree(*Term::par(Term::empty({}), Term::edge({"a", 1}, {"s1"})));
    CHECK(b.tree().graph().vertices.size() == 1);
    CHECK(b.tree().graph().edges.size() == 2);

    const ParseTree c = term_to_parse_tree(*Term::restrict({}, Term::edge({"a", 2}, {"s1", "s2"})));
    CHECK(canonical_term(c.tree()).str() == "(append (restrict ()) (leaf (edge a s1 s2)))");

    CHECK_THROWS_AS(term_to_parse_tree(*Term::nonterminal("X")), InputError);
}

TEST_CASE("parse trees reject labels outside their sort", "[tree_parse]") {
    const Tree t = parse_leaf(ParseLabel::empty({"s1", "s2"}));
    CHECK_THROWS_AS(ParseTree(t, sort_of({"s1"})), InputError);
    CHECK_NOTHROW(ParseTree(t, sort_of({"s1", "s2", "s3"})));
}

TEST_CASE("val", "[tree_parse]") {
    const ParseTree a = term_to_parse_tree(*Term::empty({"s1"}));
    CHECK(is_isomorphic(val(a), const_empty({"s1"})));

    std::mt19937 rng(11);
    for (int i = 0; i < 150; ++i) {
        const TermPtr t = gen::random_term(rng, gen::first_labels(3), 6);
        CHECK(is_isomorphic(val(term_to_parse_tree(*t)), eval_term(*t)));
    }
}

TEST_CASE("val ignores sibling order", "[tree_parse]") {
    const auto e = parse_leaf(ParseLabel::edge_of({"a", 2}, {"s1", "s2"}));
    const auto r = parse_append(ParseLabel::rename(Permutation::transposition("s1", "s2")),
                                parse_leaf(ParseLabel::edge_of({"b", 1}, {"s1"})));
    const auto x = parse_append(ParseLabel::restrict({"s2"}), parse_leaf(ParseLabel::edge_of({"c", 2}, {"s2", "s1"})));
    const SortSet tau = sort_of({"s1", "s2"});
    const Graph g1 = val(ParseTree(tree_compose(tree_compose(e, r), x), tau));
    const Graph g2 = val(ParseTree(tree_compose(x, tree_compose(r, e)), tau));
    const Graph g3 = val(ParseTree(tree_compose(r, tree_compose(x, e)), tau));
    CHECK(is_isomorphic(g1, g2));
    CHECK(is_isomorphic(g1, g3));
    CHECK(g1.edges.size() == 3);
}

TEST_CASE("source_present", "[tree_parse]") {
    const ParseTree a = ParseTree(parse_leaf(ParseLabel::edge_of({"a", 2}, {"s1", "s2"})), sort_of({"s1", "s2"}));
    CHECK(source_present(a, "s1"));
    CHECK_FALSE(source_present(a, "s3"));

    const ParseTree b = term_to_parse_tree(*Term::restrict({}, Term::edge({"a", 2}, {"s1", "s2"})));
    CHECK_FALSE(source_present(b, "s1"));
    CHECK(val(b).sort().empty());

    const ParseTree c = term_to_parse_tree(*Term::rename(Permutation::transposition("s1", "s2"), Term::empty({"s1"})));
    CHECK(source_present(c, "s2"));
    CHECK_FALSE(source_present(c, "s1"));
    CHECK(val(c).sort() == sort_of({"s2"}));
}

TEST_CASE("source_present agrees with the sort of val", "[tree_parse]") {
    std::mt19937 rng(12);
    const SortSet tau = gen::first_labels(4);
    for (int i = 0; i < 200; ++i) {
        const ParseTree pt = term_to_parse_tree(*gen::random_term(rng, tau, 7));
        const SortSet sort = val(pt).sort();
        for (const SourceLabel& s : tau) CHECK(source_present(pt, s) == (sort.count(s) > 0));
    }
}
