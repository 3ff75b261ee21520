// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "generators.hpp"
#include "hrgraph/hrgraph.hpp"
#include "naive_mso.hpp"

using namespace hrgraph;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Corpus {
    std::vector<gen::Sample> samples;
};

const Corpus& corpus() {
    static const Corpus c = [] {
        Corpus out;
        std::mt19937 rng(20240601);
        for (int i = 0; i < 200; ++i) out.samples.push_back(gen::random_sample(rng));
        return out;
    }();
    return c;
}

bool round_trip(const Graph& g, const TreeDecomposition& d, const SortSet& tau) {
    const Coloring col = color_decomposition(g, d, tau);
    return is_isomorphic(val(decomposition_to_parse_tree(g, d, col, tau)), g);
}

/// tau plus fresh labels so that its size exceeds the width.
SortSet widened(const SortSet& tau, int w) {
    SortSet out = tau;
    for (int i = 1; static_cast<int>(out.size()) < w + 1; ++i) out.insert(SourceLabel{"t" + std::to_string(i)});
    return out;
}

Outcome criterion1() {
    int ok = 0, extended = 0;
    for (const auto& s : corpus().samples) {
        const auto exact = treewidth_exact(s.graph);
        const TreeDecomposition mf = decompose_minfill(s.graph);
        const int w = width(mf);
        if (w > static_cast<int>(s.tau.size()) - 1) ++extended;
        if (round_trip(s.graph, exact.decomposition, s.tau) && round_trip(s.graph, mf, widened(s.tau, w))) ++ok;
    }
    return {ok == 200, std::to_string(ok) + "/200 exact and min-fill round trips (" + std::to_string(extended) +
                           " min-fill cases needed extra labels)"};
}

Outcome criterion2() {
    int ok = 0, worst = 0;
    for (const auto& s : corpus().samples) {
        const int w = treewidth_exact(s.graph).width;
        worst = std::max(worst, w - (static_cast<int>(s.tau.size()) - 1));
        if (w <= static_cast<int>(s.tau.size()) - 1) ++ok;
    }
    return {ok == 200, std::to_string(ok) + "/200 within |tau|-1 (max excess " + std::to_string(worst) + ")"};
}

Outcome criterion3() {
    const int w2 = treewidth_exact(gen::grid(2)).width;
    const int w3 = treewidth_exact(gen::grid(3)).width;
    return {w2 == 2 && w3 == 3, "2x2 grid " + std::to_string(w2) + ", 3x3 grid " + std::to_string(w3)};
}

Outcome criterion4() {
    const auto [add, remove] = builtin_tll();
    const Pipeline p{{add, remove}};
    int total = 0, ok = 0;
    for (int leaves = 1; leaves <= 6; ++leaves)
        for (const auto& shape : gen::binary_shapes(leaves)) {
            ++total;
            const Structure s = gen::tree_structure(shape);
            const auto linked = apply_scheme(add, s, {});
            if (!linked) continue;
            const auto next = linked->relations.find("r_next");
            const std::size_t edges = next == linked->relations.end() ? 0 : next->second.tuples.size();
            const auto back = pipeline_apply(p, s);
            if (edges == static_cast<std::size_t>(leaves - 1) && back.size() == 1 && is_isomorphic(back[0], s)) ++ok;
        }
    return {ok == total && total == 65, std::to_string(ok) + "/" + std::to_string(total) + " trees"};
}

Outcome criterion5() {
    Grammar g;
    g.tau = gen::first_labels(1);
    g.nonterminals["X"] = g.tau;
    const EdgeLabel a{"a", 1};
    g.rules.push_back({"X", Term::edge(a, {"s1"})});
    g.rules.push_back({"X", Term::par(Term::nonterminal("X"), Term::nonterminal("X"))});
    const FiniteAlgebra alg = parity_algebra(g.tau, {a});
    const std::set<std::string> accept{"even"};
    const Grammar filtered = filter_grammar(g, alg, accept);
    std::string detail;
    bool pass = true;
    for (int d = 0; d <= 6; ++d) {
        const auto lhs = enumerate_language(filtered, "X", d);
        std::vector<Graph> rhs;
        for (const auto& e : enumerate_language(g, "X", d))
            if (accepts(alg, accept, *e.witness)) rhs.push_back(e.graph);
        bool same = lhs.size() == rhs.size();
        for (const auto& e : lhs) {
            bool found = false;
            for (const auto& h : rhs) found = found || is_isomorphic(e.graph, h);
            same = same && found;
        }
        pass = pass && same;
        detail += (d ? " " : "") + std::to_string(lhs.size()) + "/" + std::to_string(rhs.size());
    }
    return {pass, "filtered/post-filtered sizes at depth 0..6: " + detail};
}

Outcome criterion6() {
    std::mt19937 rng(6);
    int ok = 0;
    for (int i = 0; i < 500; ++i) {
        const auto x = gen::random_sample(rng), y = gen::random_sample(rng), z = gen::random_sample(rng);
        const SortSet tau = unite(unite(x.tau, y.tau), z.tau);
        const SortSet t1 = gen::random_subset(rng, tau), t2 = gen::random_subset(rng, tau);
        const Permutation p1 = gen::random_permutation(rng, tau), p2 = gen::random_permutation(rng, tau);
        const Graph& g1 = x.graph;
        const Graph& g2 = y.graph;
        const Graph& g3 = z.graph;
        const bool laws = is_isomorphic(parallel(g1, g2), parallel(g2, g1)) &&
                          is_isomorphic(parallel(parallel(g1, g2), g3), parallel(g1, parallel(g2, g3))) &&
                          is_isomorphic(restrict(t1, restrict(t2, g1)), restrict(intersect(t1, t2), g1)) &&
                          is_isomorphic(rename(p1, rename(p2, g1)), rename(p2.after(p1), g1)) &&
                          is_isomorphic(parallel(const_empty({}), g1), g1);
        if (laws) ++ok;
    }
    return {ok == 500, std::to_string(ok) + "/500 instances satisfy all five laws"};
}

Outcome criterion7() {
    std::mt19937 rng(7);
    int agree = 0, laws = 0;
    for (int i = 0; i < 100; ++i) {
        const Structure s = gen::random_structure(rng);
        int fresh = 0;
        const FormulaPtr a = gen::random_formula(rng, 4, {"x", "y"}, {"X"}, fresh);
        const FormulaPtr b = gen::random_formula(rng, 4, {"x", "y"}, {"X"}, fresh);
        Store store;
        naive::Env env;
        if (!s.universe.empty()) {
            store.fo["x"] = env.fo["x"] = s.universe[rng() % s.universe.size()];
            store.fo["y"] = env.fo["y"] = s.universe[rng() % s.universe.size()];
        } else {
            // no element to bind: close the formulas instead
            store.fo.clear();
        }
        std::set<Id> xs;
        for (Id u : s.universe)
            if (rng() & 1U) xs.insert(u);
        store.so["X"] = env.so["X"] = xs;
        auto close = [&](const FormulaPtr& f) { return s.universe.empty() ? fo::exists_n({"x", "y"}, f) : f; };
        const FormulaPtr fa = close(a), fb = close(b);
        const bool sa = satisfies(s, store, *fa), sb = satisfies(s, store, *fb);
        if (sa == naive::holds(s, *fa, env) && sb == naive::holds(s, *fb, env)) ++agree;
        const bool de_morgan_and = satisfies(s, store, *fo::neg(fo::conj(fa, fb))) == (!sa || !sb);
        const bool de_morgan_or = satisfies(s, store, *fo::neg(fo::disj(fa, fb))) == (!sa && !sb);
        const bool double_neg = satisfies(s, store, *fo::neg(fo::neg(fa))) == sa;
        const bool card10 = satisfies(s, store, *fo::card("X", 1, 0)) && models(s, *fo::forall_so("Y", fo::card("Y", 1, 0)));
        if (de_morgan_and && de_morgan_or && double_neg && card10) ++laws;
    }
    return {agree == 100 && laws == 100,
            std::to_string(agree) + "/100 agree with the reference evaluator, " + std::to_string(laws) + "/100 satisfy the laws"};
}

Outcome criterion8() {
    std::mt19937 rng(8);
    int ok = 0;
    for (int i = 0; i < 300; ++i) {
        const SortSet tau = gen::first_labels(1 + static_cast<int>(rng() % 3));
        const ParseTree pt = term_to_parse_tree(*gen::random_term(rng, tau, 1 + static_cast<int>(rng() % 6)));
        const SortSet s = val(pt).sort();
        bool all = true;
        for (const auto& l : unite(pt.sort(), tau)) all = all && source_present(pt, l) == (s.count(l) > 0);
        if (all) ++ok;
    }
    return {ok == 300, std::to_string(ok) + "/300 parse trees"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"round-trip parsability", criterion1}, {"treewidth bound", criterion2},  {"grid treewidth", criterion3},
        {"tll identity", criterion4},           {"filtering", criterion5},        {"algebra laws", criterion6},
        {"cmso semantics", criterion7},         {"source presence", criterion8},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu %s: %s (%s; %.2fs)\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
