#pragma once

// File formats. Element names in files are arbitrary atoms; readers assign
// integer ids in order of appearance and writers print v<id> / e<id> / n<id>.
//
//   (graph (vertices v1 v2) (edges (e1 a v1 v2)) (sources (s1 v1)))
//   (structure (universe u1 u2) (relation r 2 (u1 u2)))
//   (td (node n1 (bag v1 v2)) (parent n1 n2) (root n1))      ; (parent p c)
//   (parse-tree (sort (s1)) (node (u <label>) (b <label> <node>)))
//   (signature (r 2) ...) <formula>

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "decomposition.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "logic.hpp"
#include "parse_tree.hpp"
#include "sexpr.hpp"
#include "structure.hpp"
#include "transduction.hpp"

namespace hrgraph {

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

using NameTable = std::map<std::string, Id>;

namespace detail {

inline Id intern(NameTable& names, const std::string& name, const char* what) {
    auto [it, fresh] = names.emplace(name, static_cast<Id>(names.size()));
    if (!fresh) throw InputError(std::string("duplicate ") + what + " id " + name);
    return it->second;
}

inline Id resolve(const NameTable& names, const sx::Sexpr& e, const char* what) {
    auto it = names.find(e.as_atom());
    if (it == names.end()) throw InputError(std::string("unknown ") + what + " " + e.atom);
    return it->second;
}

inline std::string vname(Id v) { return "v" + std::to_string(v); }
inline std::string ename(Id e) { return "e" + std::to_string(e); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Graphs

struct NamedGraph {
    Graph graph;
    NameTable vertices;  // file name -> id
};

inline NamedGraph named_graph_from_sexpr(const sx::Sexpr& e) {
    if (e.head() != "graph") throw InputError("expected (graph ...), got " + e.str());
    NamedGraph out;
    NameTable all;  // vertices and edges share one id space
    std::vector<const sx::Sexpr*> edges, sources;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const auto& sec = e[i].expect_list();
        const std::string h = sec.head();
        if (h == "vertices") {
            for (std::size_t j = 1; j < sec.size(); ++j) {
                const Id v = detail::intern(all, sec[j].as_atom(), "vertex/edge");
                out.vertices[sec[j].atom] = v;
                out.graph.vertices.push_back(v);
            }
        } else if (h == "edges") {
            for (std::size_t j = 1; j < sec.size(); ++j) edges.push_back(&sec[j]);
        } else if (h == "sources") {
            for (std::size_t j = 1; j < sec.size(); ++j) sources.push_back(&sec[j]);
        } else {
            throw InputError("graph: unknown section " + sec.str());
        }
    }
    for (const sx::Sexpr* d : edges) {
        const auto& ed = d->expect_list();
        if (ed.size() < 2) throw InputError("edge must be (id label v1 ... vk), got " + ed.str());
        Edge edge;
        edge.id = detail::intern(all, ed[0].as_atom(), "vertex/edge");
        const std::string& label = ed[1].as_atom();
        if (!is_valid_label_name(label)) throw InputError("invalid edge label '" + label + "'");
        for (std::size_t j = 2; j < ed.size(); ++j) edge.attach.push_back(detail::resolve(out.vertices, ed[j], "vertex"));
        edge.label = EdgeLabel{label, static_cast<int>(edge.attach.size())};
        out.graph.edges.push_back(std::move(edge));
    }
    for (const sx::Sexpr* d : sources) {
        const auto& sd = d->expect_list();
        if (sd.size() != 2) throw InputError("source must be (label vertex), got " + sd.str());
        const std::string& label = sd[0].as_atom();
        if (!is_valid_label_name(label)) throw InputError("invalid source label '" + label + "'");
        if (!out.graph.sources.emplace(label, detail::resolve(out.vertices, sd[1], "vertex")).second)
            throw InputError("duplicate source label " + label);
    }
    require_valid(out.graph, "graph file");
    return out;
}

inline Graph graph_from_sexpr(const sx::Sexpr& e) { return named_graph_from_sexpr(e).graph; }
inline Graph parse_graph(std::string_view text) { return graph_from_sexpr(sx::parse(text)); }

inline sx::Sexpr graph_to_sexpr(const Graph& g) {
    using sx::atom;
    using sx::list;
    std::vector<sx::Sexpr> vs{atom("vertices")}, es{atom("edges")}, ss{atom("sources")};
    for (Id v : g.vertices) vs.push_back(atom(detail::vname(v)));
    for (const Edge& e : g.edges) {
        std::vector<sx::Sexpr> d{atom(detail::ename(e.id)), atom(e.label.name)};
        for (Id v : e.attach) d.push_back(atom(detail::vname(v)));
        es.push_back(list(std::move(d)));
    }
    for (const auto& [s, v] : g.sources) ss.push_back(list({atom(s.name), atom(detail::vname(v))}));
    return list({atom("graph"), list(std::move(vs)), list(std::move(es)), list(std::move(ss))});
}

/// One section per line.
inline std::string graph_to_string(const Graph& g) {
    const sx::Sexpr e = graph_to_sexpr(g);
    std::string out = "(graph\n";
    for (std::size_t i = 1; i < e.size(); ++i) out += "  " + e[i].str() + "\n";
    return out + ")\n";
}

inline std::string graph_to_dot(const Graph& g) {
    std::ostringstream out;
    out << "graph G {\n  node [shape=circle];\n";
    std::map<Id, std::string> src;
    for (const auto& [s, v] : g.sources) src[v] += (src[v].empty() ? "" : ",") + s.name;
    for (Id v : g.vertices) {
        out << "  v" << v << " [label=\"" << v;
        if (src.count(v)) out << "\\n" << src[v];
        out << "\"];\n";
    }
    for (const Edge& e : g.edges) {
        out << "  e" << e.id << " [shape=box,label=\"" << e.label.name << "\"];\n";
        for (std::size_t i = 0; i < e.attach.size(); ++i)
            out << "  e" << e.id << " -- v" << e.attach[i] << " [label=\"" << i + 1 << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Structures

inline Structure structure_from_sexpr(const sx::Sexpr& e) {
    if (e.head() != "structure") throw InputError("expected (structure ...), got " + e.str());
    Structure s;
    NameTable names;
    std::vector<const sx::Sexpr*> rels;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const auto& sec = e[i].expect_list();
        if (sec.head() == "universe") {
            for (std::size_t j = 1; j < sec.size(); ++j) s.universe.push_back(detail::intern(names, sec[j].as_atom(), "element"));
        } else if (sec.head() == "relation") {
            rels.push_back(&sec);
        } else {
            throw InputError("structure: unknown section " + sec.str());
        }
    }
    for (const sx::Sexpr* r : rels) {
        const std::string& name = (*r)[1].as_atom();
        const int arity = (*r)[2].as_int();
        if (arity < 0) throw InputError("relation " + name + " has negative arity");
        if (s.relations.count(name)) throw InputError("duplicate relation " + name);
        s.declare(name, arity);
        for (std::size_t j = 3; j < r->size(); ++j) {
            const auto& t = (*r)[j].expect_list();
            if (static_cast<int>(t.size()) != arity)
                throw InputError("tuple " + t.str() + " does not match the arity of " + name);
            std::vector<Id> tuple;
            for (const auto& x : t.items) tuple.push_back(detail::resolve(names, x, "element"));
            s.add(name, std::move(tuple));
        }
    }
    s.normalize();
    return s;
}

inline Structure parse_structure(std::string_view text) { return structure_from_sexpr(sx::parse(text)); }

inline sx::Sexpr structure_to_sexpr(const Structure& s) {
    using sx::atom;
    using sx::list;
    std::vector<sx::Sexpr> u{atom("universe")};
    for (Id x : s.universe) u.push_back(atom("u" + std::to_string(x)));
    std::vector<sx::Sexpr> xs{atom("structure"), list(std::move(u))};
    for (const auto& [name, rel] : s.relations) {
        std::vector<sx::Sexpr> r{atom("relation"), atom(name), atom(std::to_string(rel.arity))};
        for (const auto& t : rel.tuples) {
            std::vector<sx::Sexpr> ts;
            for (Id x : t) ts.push_back(atom("u" + std::to_string(x)));
            r.push_back(list(std::move(ts)));
        }
        xs.push_back(list(std::move(r)));
    }
    return list(std::move(xs));
}

inline std::string structure_to_string(const Structure& s) {
    const sx::Sexpr e = structure_to_sexpr(s);
    std::string out = "(structure\n";
    for (std::size_t i = 1; i < e.size(); ++i) out += "  " + e[i].str() + "\n";
    return out + ")\n";
}

// ---------------------------------------------------------------------------
// Tree decompositions; bags name vertices of an accompanying graph file.

inline TreeDecomposition td_from_sexpr(const sx::Sexpr& e, const NameTable& vertices) {
    if (e.head() != "td") throw InputError("expected (td ...), got " + e.str());
    TreeDecomposition d;
    NameTable nodes;
    std::vector<const sx::Sexpr*> parents;
    std::optional<std::string> root;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const auto& sec = e[i].expect_list();
        const std::string h = sec.head();
        if (h == "node") {
            const Id n = detail::intern(nodes, sec[1].as_atom(), "node");
            d.nodes.push_back(n);
            auto& bag = d.bags[n];
            for (std::size_t j = 2; j < sec.size(); ++j) {
                const auto& b = sec[j].expect_list();
                if (b.head() != "bag") throw InputError("node entries must be (bag v ...), got " + b.str());
                for (std::size_t k = 1; k < b.size(); ++k) bag.insert(detail::resolve(vertices, b[k], "vertex"));
            }
        } else if (h == "parent") {
            if (sec.size() != 3) throw InputError("parent must be (parent p c), got " + sec.str());
            parents.push_back(&sec);
        } else if (h == "root") {
            root = sec[1].as_atom();
        } else {
            throw InputError("td: unknown section " + sec.str());
        }
    }
    for (const sx::Sexpr* p : parents) {
        const Id par = detail::resolve(nodes, (*p)[1], "node");
        const Id child = detail::resolve(nodes, (*p)[2], "node");
        if (!d.parent.emplace(child, par).second) throw InputError("node " + (*p)[2].atom + " has two parents");
    }
    if (root) {
        const Id r = detail::resolve(nodes, sx::atom(*root), "node");
        if (d.root() != r) throw InputError("declared root " + *root + " is not the unique parentless node");
    }
    return d;
}

inline sx::Sexpr td_to_sexpr(const TreeDecomposition& d) {
    using sx::atom;
    using sx::list;
    auto nname = [](Id n) { return atom("n" + std::to_string(n)); };
    std::vector<sx::Sexpr> xs{atom("td")};
    for (Id n : d.nodes) {
        std::vector<sx::Sexpr> bag{atom("bag")};
        for (Id v : d.bag(n)) bag.push_back(atom(detail::vname(v)));
        xs.push_back(list({atom("node"), nname(n), list(std::move(bag))}));
    }
    for (const auto& [c, p] : d.parent) xs.push_back(list({atom("parent"), nname(p), nname(c)}));
    if (auto r = d.root()) xs.push_back(list({atom("root"), nname(*r)}));
    return list(std::move(xs));
}

inline std::string td_to_string(const TreeDecomposition& d) {
    const sx::Sexpr e = td_to_sexpr(d);
    std::string out = "(td\n";
    for (std::size_t i = 1; i < e.size(); ++i) out += "  " + e[i].str() + "\n";
    return out + ")\n";
}

// ---------------------------------------------------------------------------
// Parse trees

namespace detail {

inline sx::Sexpr parse_node_to_sexpr(const ParseTree& pt, const std::map<Id, Tree::NodeView>& view, Id v) {
    const auto& node = view.at(v);
    std::vector<std::pair<std::string, sx::Sexpr>> items;
    for (const Edge* e : node.unary) {
        sx::Sexpr s = sx::list({sx::atom("u"), pt.label(*e).to_sexpr()});
        items.emplace_back(s.str(), std::move(s));
    }
    for (const auto& [e, c] : node.children) {
        sx::Sexpr s = sx::list({sx::atom("b"), pt.label(*e).to_sexpr(), parse_node_to_sexpr(pt, view, c)});
        items.emplace_back(s.str(), std::move(s));
    }
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<sx::Sexpr> xs{sx::atom("node")};
    for (auto& [k, s] : items) xs.push_back(std::move(s));
    return sx::list(std::move(xs));
}

inline Tree parse_node_from_sexpr(const sx::Sexpr& e) {
    if (e.head() != "node") throw InputError("expected (node ...), got " + e.str());
    if (e.size() < 2) throw InputError("parse-tree node without operations");
    std::optional<Tree> acc;
    for (std::size_t i = 1; i < e.size(); ++i) {
        const auto& it = e[i].expect_list();
        Tree part = [&] {
            if (it.head() == "u" && it.size() == 2) return parse_leaf(ParseLabel::from_sexpr(it[1]));
            if (it.head() == "b" && it.size() == 3) return parse_append(ParseLabel::from_sexpr(it[1]), parse_node_from_sexpr(it[2]));
            throw InputError("node items must be (u label) or (b label node), got " + it.str());
        }();
        acc = acc ? tree_compose(*acc, part) : std::move(part);
    }
    return *acc;
}

}  // namespace detail

inline sx::Sexpr parse_tree_to_sexpr(const ParseTree& pt) {
    return sx::list({sx::atom("parse-tree"), sx::list({sx::atom("sort"), sort_to_sexpr(pt.sort())}),
                     detail::parse_node_to_sexpr(pt, pt.tree().nodes(), pt.tree().root())});
}

inline ParseTree parse_tree_from_sexpr(const sx::Sexpr& e) {
    if (e.head() != "parse-tree" || e.size() != 3) throw InputError("expected (parse-tree (sort ...) (node ...)), got " + e.str());
    if (e[1].head() != "sort") throw InputError("parse-tree: missing (sort ...)");
    return ParseTree(detail::parse_node_from_sexpr(e[2]), sort_from_sexpr(e[1][1]));
}

// ---------------------------------------------------------------------------
// Formula files: an optional signature header followed by one formula. Without a
// header the signature is read off the formula.

struct FormulaFile {
    Signature signature;
    FormulaPtr formula;
};

namespace detail {

inline void check_symbols(const Formula& f, const Signature& sig) {
    if (f.kind == Formula::Kind::Rel) {
        auto it = sig.find(f.symbol);
        if (it == sig.end()) throw InputError("formula uses undeclared relation symbol " + f.symbol);
        if (it->second != static_cast<int>(f.vars.size()))
            throw InputError("relation " + f.symbol + " declared with arity " + std::to_string(it->second) + " but used with " +
                             std::to_string(f.vars.size()) + " arguments");
    }
    for (const auto& s : f.sub) check_symbols(*s, sig);
}

}  // namespace detail

inline FormulaFile parse_formula_file(std::string_view text) {
    auto forms = sx::parse_all(text);
    FormulaFile out;
    std::size_t i = 0;
    if (!forms.empty() && forms[0].head() == "signature") {
        out.signature = detail::signature_from_sexpr(forms[0]);
        i = 1;
    }
    if (forms.size() != i + 1) throw InputError("formula file must contain a signature header and exactly one formula");
    out.formula = formula_from_sexpr(forms[i]);
    if (i == 1)
        detail::check_symbols(*out.formula, out.signature);
    else
        detail::collect_symbols(*out.formula, out.signature);
    return out;
}

inline std::string formula_file_to_string(const FormulaFile& f) {
    return detail::signature_to_sexpr("signature", f.signature).str() + "\n" + formula_to_string(*f.formula) + "\n";
}

/// Declares the signature's symbols in `s`, rejecting arity clashes.
inline Structure with_signature(Structure s, const Signature& sig) {
    for (const auto& [name, arity] : sig) s.declare(name, arity);
    return s;
}

}  // namespace hrgraph
