// hrtool: command-line front end over the hrgraph headers.
// Exit status: 0 success, 1 negative verdict, 2 input error, 3 resource bound.

#include <array>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hrgraph/hrgraph.hpp"

using namespace hrgraph;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kResource = 3;

struct Options {
    int depth = 3;
    std::string sort;
    int max_vertices = -1;
    bool exact = false;
    bool minfill = false;
    std::string out;
    bool renames = false;
};

Limits limits_from(const Options& o) {
    Limits l;
    if (const char* cap = std::getenv("HRTOOL_RESOURCE_CAP")) {
        try {
            l.stage_cap = std::stoi(cap);
        } catch (const std::exception&) {
            throw InputError(std::string("HRTOOL_RESOURCE_CAP must be an integer, got ") + cap);
        }
        if (l.stage_cap <= 0) throw InputError("HRTOOL_RESOURCE_CAP must be positive");
    }
    if (o.max_vertices > 0) {
        l.max_exact_vertices = o.max_vertices;
        l.max_iso_vertices = std::max(l.max_iso_vertices, o.max_vertices);
    }
    return l;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty())
        std::cout << text;
    else
        write_text(o.out, text);
}

std::string verdict(bool b) { return b ? "true\n" : "false\n"; }

NamedGraph load_graph(const std::string& path) { return named_graph_from_sexpr(sx::parse(read_text(path))); }

std::vector<Graph> load_graphs(const std::string& path) {
    std::vector<Graph> out;
    for (const auto& e : sx::parse_all(read_text(path))) out.push_back(graph_from_sexpr(e));
    return out;
}

Structure load_structure(const std::string& path) { return parse_structure(read_text(path)); }

TransductionScheme load_scheme(const std::string& spec) {
    if (spec == "builtin:tll") return builtin_tll().first;
    if (spec == "builtin:tll-inverse") return builtin_tll().second;
    return scheme_from_sexpr(sx::parse(read_text(spec)));
}

std::string outputs_to_string(const std::vector<Structure>& outs) {
    std::string text;
    for (const auto& s : outs) text += structure_to_string(s);
    return text;
}

TreeDecomposition decompose(const Graph& g, const Options& o, const Limits& l) {
    if (o.minfill) return decompose_minfill(g);
    return treewidth_exact(g, l).decomposition;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperedge-replacement graph toolkit"};
    app.require_subcommand(1);
    Options o;
    std::vector<std::string> files;
    std::vector<std::string> extra;
    // single positionals followed by more positionals; a vector there would swallow the rest
    std::array<std::string, 4> lead;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "Write the result to this path");
        sub->add_option("--max-vertices", o.max_vertices, "Vertex bound for exact treewidth and isomorphism")->check(CLI::PositiveNumber);
    };

    auto* eval = app.add_subcommand("eval", "Evaluate a term file to a graph");
    eval->add_option("term", files, "Term file")->required()->expected(1);
    common(eval);

    auto* iso = app.add_subcommand("iso", "Decide isomorphism of two graphs");
    iso->add_option("graphs", files, "Two graph files")->required()->expected(2);
    common(iso);

    auto* encode = app.add_subcommand("encode", "Incidence encoding of a graph");
    encode->add_option("graph", files, "Graph file")->required()->expected(1);
    common(encode);

    auto* tw = app.add_subcommand("tw", "Treewidth and a tree decomposition");
    tw->add_option("graph", files, "Graph file")->required()->expected(1);
    auto* tw_exact = tw->add_flag("--exact", o.exact, "Exact treewidth (default)");
    tw->add_flag("--minfill", o.minfill, "Min-fill heuristic")->excludes(tw_exact);
    common(tw);

    auto* tdcheck = app.add_subcommand("td-check", "Validate a tree decomposition");
    tdcheck->add_option("files", files, "Graph file and decomposition file")->required()->expected(2);
    common(tdcheck);

    auto* parse = app.add_subcommand("parse", "Parse tree of a graph");
    parse->add_option("graph", files, "Graph file")->required()->expected(1);
    parse->add_option("--sort", o.sort, "Label set for the parse tree, e.g. \"(s1 s2)\"");
    auto* parse_exact = parse->add_flag("--exact", o.exact, "Exact decomposition (default)");
    parse->add_flag("--minfill", o.minfill, "Min-fill decomposition")->excludes(parse_exact);
    common(parse);

    auto* valc = app.add_subcommand("val", "Canonical evaluation of a parse tree");
    valc->add_option("parse-tree", files, "Parse-tree file")->required()->expected(1);
    common(valc);

    auto* mc = app.add_subcommand("mc", "Model-check a sentence");
    mc->add_option("files", files, "Structure file and formula file")->required()->expected(2);
    common(mc);

    auto* transduce = app.add_subcommand("transduce", "Apply a pipeline of schemes to a structure");
    transduce->add_option("structure", lead[0], "Structure file")->required();
    transduce->add_option("schemes", extra, "Scheme files, or builtin:tll / builtin:tll-inverse")->required()->expected(1, -1);
    common(transduce);

    auto* enumc = app.add_subcommand("enum", "Enumerate a grammar's language");
    enumc->add_option("grammar", lead[0], "Grammar file")->required();
    enumc->add_option("nonterminal", extra, "Nonterminal")->required()->expected(1);
    enumc->add_option("--depth", o.depth, "Kleene iterations")->check(CLI::NonNegativeNumber);
    common(enumc);

    auto* filter = app.add_subcommand("filter", "Product of a grammar with a finite algebra");
    filter->add_option("grammar", lead[0], "Grammar file")->required();
    filter->add_option("algebra", lead[1], "Algebra file")->required();
    filter->add_option("accept", extra, "Accepting elements")->expected(0, -1);
    common(filter);

    auto* congr = app.add_subcommand("congr", "Bounded syntactic-congruence test");
    congr->add_option("graph1", lead[0], "First graph file")->required();
    congr->add_option("graph2", lead[1], "Second graph file")->required();
    congr->add_option("grammar", lead[2], "Grammar file")->required();
    congr->add_option("contexts", lead[3], "Contexts file")->required();
    congr->add_option("nonterminal", extra, "Nonterminal of the grammar used as the language")->required()->expected(1);
    congr->add_option("--depth", o.depth, "Kleene iterations for the membership oracle")->check(CLI::NonNegativeNumber);
    congr->add_option("--sort", o.sort, "Restriction labels to try, e.g. \"(s1)\"");
    congr->add_flag("--renames", o.renames, "Also try renamings of the restriction labels");
    common(congr);

    auto* dot = app.add_subcommand("dot", "Graphviz export of a graph");
    dot->add_option("graph", files, "Graph file")->required()->expected(1);
    common(dot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }
    for (const auto& l : lead)
        if (!l.empty()) files.push_back(l);

    try {
        const Limits limits = limits_from(o);
        if (eval->parsed()) {
            emit(o, graph_to_string(eval_term(*parse_term(read_text(files[0])))));
            return kOk;
        }
        if (iso->parsed()) {
            const bool same = is_isomorphic(load_graph(files[0]).graph, load_graph(files[1]).graph, limits);
            emit(o, verdict(same));
            return same ? kOk : kNegative;
        }
        if (encode->parsed()) {
            emit(o, structure_to_string(encode_graph(load_graph(files[0]).graph)));
            return kOk;
        }
        if (dot->parsed()) {
            emit(o, graph_to_dot(load_graph(files[0]).graph));
            return kOk;
        }
        if (tw->parsed()) {
            const Graph g = load_graph(files[0]).graph;
            const TreeDecomposition d = decompose(g, o, limits);
            emit(o, std::to_string(width(d)) + "\n" + td_to_string(d));
            return kOk;
        }
        if (tdcheck->parsed()) {
            const NamedGraph g = load_graph(files[0]);
            const TreeDecomposition d = td_from_sexpr(sx::parse(read_text(files[1])), g.vertices);
            if (auto err = check_decomposition(g.graph, d)) {
                emit(o, "invalid: " + *err + "\n");
                return kNegative;
            }
            emit(o, "ok width " + std::to_string(width(d)) + "\n");
            return kOk;
        }
        if (parse->parsed()) {
            const Graph g = load_graph(files[0]).graph;
            const TreeDecomposition d = decompose(g, o, limits);
            SortSet tau;
            if (!o.sort.empty()) {
                tau = sort_from_sexpr(sx::parse(o.sort));
            } else {
                for (int i = 1; i <= width(d) + 1; ++i) tau.insert(SourceLabel{"t" + std::to_string(i)});
                tau = unite(tau, g.sort());
            }
            const ParseTree pt = decomposition_to_parse_tree(g, d, color_decomposition(g, d, tau), tau);
            emit(o, "; sort " + sort_to_sexpr(tau).str() + "\n" + parse_tree_to_sexpr(pt).str() + "\n");
            return kOk;
        }
        if (valc->parsed()) {
            emit(o, graph_to_string(val(parse_tree_from_sexpr(sx::parse(read_text(files[0]))))));
            return kOk;
        }
        if (mc->parsed()) {
            const FormulaFile f = parse_formula_file(read_text(files[1]));
            const bool holds = models(with_signature(load_structure(files[0]), f.signature), *f.formula, limits);
            emit(o, verdict(holds));
            return holds ? kOk : kNegative;
        }
        if (transduce->parsed()) {
            Pipeline p;
            for (const auto& s : extra) p.stages.push_back(load_scheme(s));
            const auto outs = pipeline_apply(p, load_structure(files[0]), limits);
            emit(o, outs.empty() ? std::string("; no output\n") : outputs_to_string(outs));
            return outs.empty() ? kNegative : kOk;
        }
        if (enumc->parsed()) {
            const Grammar g = grammar_from_sexpr(sx::parse(read_text(files[0])));
            std::string text;
            for (const auto& e : enumerate_language(g, extra[0], o.depth, limits))
                text += "; term " + term_to_string(*e.witness) + "\n" + graph_to_string(e.graph);
            emit(o, text);
            return kOk;
        }
        if (filter->parsed()) {
            const Grammar g = grammar_from_sexpr(sx::parse(read_text(files[0])));
            const FiniteAlgebra a = algebra_from_sexpr(sx::parse(read_text(files[1])));
            const std::set<std::string> accept(extra.begin(), extra.end());
            emit(o, grammar_to_sexpr(filter_grammar(g, a, accept)).str() + "\n");
            return kOk;
        }
        if (congr->parsed()) {
            const Graph g1 = load_graph(files[0]).graph;
            const Graph g2 = load_graph(files[1]).graph;
            const Grammar gr = grammar_from_sexpr(sx::parse(read_text(files[2])));
            const std::vector<Graph> contexts = load_graphs(files[3]);
            const auto language = enumerate_language(gr, extra[0], o.depth, limits);
            auto member_of = [&](const Graph& x) {
                for (const auto& e : language)
                    if (is_isomorphic(e.graph, x, limits)) return true;
                return false;
            };
            const SortSet tau_limit = o.sort.empty() ? gr.tau : sort_from_sexpr(sx::parse(o.sort));
            const CongruenceVerdict v = congruent_bounded(member_of, g1, g2, contexts, tau_limit, o.renames);
            if (v.congruent) {
                emit(o, "congruent (bounded)\n");
                return kOk;
            }
            std::string text = "distinguished-by restrict " + sort_to_sexpr(v.restriction).str();
            if (v.rename) text += " rename " + perm_to_sexpr(*v.rename).str();
            emit(o, text + "\n" + graph_to_string(*v.context));
            return kNegative;
        }
    } catch (const ResourceError& e) {
        std::cerr << "resource bound: " << e.what() << "\n";
        return kResource;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
