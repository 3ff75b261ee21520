#pragma once

// Backtracking isomorphism for small relational structures, pruned by
// iterated colour refinement over the incidence of elements in tuples.
// Graph isomorphism is decided on the incidence encodings.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "encoding.hpp"
#include "error.hpp"
#include "structure.hpp"

namespace hrgraph {

namespace detail {

inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t combine(std::uint64_t seed, std::uint64_t v) { return mix(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2))); }

struct Incidence {
    int rel;
    int tuple;
    int pos;
};

/// Index-based view of a structure used by refinement and search.
struct IndexedStructure {
    std::vector<Id> elems;
    std::vector<std::string> rel_names;  // nonempty relations only, sorted
    std::vector<std::vector<std::vector<int>>> tuples;
    std::vector<std::set<std::vector<int>>> tuple_sets;
    std::vector<std::vector<Incidence>> incidence;
    std::vector<std::uint64_t> colors;

    explicit IndexedStructure(const Structure& s) : elems(s.universe) {
        std::unordered_map<Id, int> index;
        for (int i = 0; i < static_cast<int>(elems.size()); ++i) index[elems[i]] = i;
        incidence.resize(elems.size());
        for (const auto& [name, rel] : s.relations) {
            if (rel.tuples.empty()) continue;
            const int r = static_cast<int>(rel_names.size());
            rel_names.push_back(name);
            tuples.emplace_back();
            tuple_sets.emplace_back();
            for (const auto& t : rel.tuples) {
                std::vector<int> it;
                it.reserve(t.size());
                for (Id u : t) it.push_back(index.at(u));
                const int ti = static_cast<int>(tuples[r].size());
                for (int p = 0; p < static_cast<int>(it.size()); ++p) incidence[it[p]].push_back({r, ti, p});
                tuple_sets[r].insert(it);
                tuples[r].push_back(std::move(it));
            }
        }
        refine();
    }

    std::size_t class_count() const { return std::set<std::uint64_t>(colors.begin(), colors.end()).size(); }

    void refine() {
        const std::size_t n = elems.size();
        std::vector<std::uint64_t> rel_hash(rel_names.size());
        for (std::size_t r = 0; r < rel_names.size(); ++r) rel_hash[r] = std::hash<std::string>{}(rel_names[r]);
        colors.assign(n, 1);
        std::size_t classes = n == 0 ? 0 : 1;
        for (std::size_t round = 0; round <= n; ++round) {
            std::vector<std::uint64_t> next(n);
            for (std::size_t u = 0; u < n; ++u) {
                std::vector<std::uint64_t> sigs;
                sigs.reserve(incidence[u].size());
                for (const Incidence& inc : incidence[u]) {
                    std::uint64_t h = combine(rel_hash[inc.rel], static_cast<std::uint64_t>(inc.pos));
                    for (int w : tuples[inc.rel][inc.tuple]) h = combine(h, colors[w]);
                    sigs.push_back(h);
                }
                std::sort(sigs.begin(), sigs.end());
                std::uint64_t h = combine(colors[u], sigs.size());
                for (std::uint64_t x : sigs) h = combine(h, x);
                next[u] = h;
            }
            colors = std::move(next);
            const std::size_t now = class_count();
            if (now == classes && round > 0) break;
            classes = now;
        }
    }

    std::uint64_t invariant() const {
        std::vector<std::uint64_t> sorted = colors;
        std::sort(sorted.begin(), sorted.end());
        std::uint64_t h = combine(0x51ed270b27c3ULL, elems.size());
        for (std::size_t r = 0; r < rel_names.size(); ++r) {
            h = combine(h, std::hash<std::string>{}(rel_names[r]));
            h = combine(h, tuples[r].size());
        }
        for (std::uint64_t c : sorted) h = combine(h, c);
        return h;
    }
};

class IsoSearch {
public:
    IsoSearch(const IndexedStructure& a, const IndexedStructure& b) : a_(a), b_(b) {}

    bool run() {
        const std::size_t n = a_.elems.size();
        if (n != b_.elems.size()) return false;
        if (a_.rel_names != b_.rel_names) return false;
        for (std::size_t r = 0; r < a_.tuples.size(); ++r)
            if (a_.tuples[r].size() != b_.tuples[r].size()) return false;
        std::vector<std::uint64_t> ca = a_.colors, cb = b_.colors;
        std::sort(ca.begin(), ca.end());
        std::sort(cb.begin(), cb.end());
        if (ca != cb) return false;

        for (std::size_t v = 0; v < n; ++v) by_color_[b_.colors[v]].push_back(static_cast<int>(v));
        build_order();
        map_.assign(n, -1);
        used_.assign(n, false);
        return extend(0);
    }

private:
    void build_order() {
        const std::size_t n = a_.elems.size();
        std::vector<bool> placed(n, false);
        std::vector<int> touch(n, 0);
        for (std::size_t step = 0; step < n; ++step) {
            int best = -1;
            for (std::size_t u = 0; u < n; ++u) {
                if (placed[u]) continue;
                if (best < 0) {
                    best = static_cast<int>(u);
                    continue;
                }
                const auto cls_u = by_color_[a_.colors[u]].size();
                const auto cls_b = by_color_[a_.colors[best]].size();
                if (touch[u] > touch[best] || (touch[u] == touch[best] && cls_u < cls_b)) best = static_cast<int>(u);
            }
            placed[best] = true;
            order_.push_back(best);
            for (const Incidence& inc : a_.incidence[best])
                for (int w : a_.tuples[inc.rel][inc.tuple]) ++touch[w];
        }
    }

    bool consistent(int u) const {
        for (const Incidence& inc : a_.incidence[u]) {
            const auto& t = a_.tuples[inc.rel][inc.tuple];
            std::vector<int> image;
            image.reserve(t.size());
            bool complete = true;
            for (int w : t) {
                if (map_[w] < 0) {
                    complete = false;
                    break;
                }
                image.push_back(map_[w]);
            }
            if (complete && !b_.tuple_sets[inc.rel].count(image)) return false;
        }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == order_.size()) return true;
        const int u = order_[depth];
        auto it = by_color_.find(a_.colors[u]);
        if (it == by_color_.end()) return false;
        for (int v : it->second) {
            if (used_[v]) continue;
            map_[u] = v;
            used_[v] = true;
            if (consistent(u) && extend(depth + 1)) return true;
            used_[v] = false;
            map_[u] = -1;
        }
        return false;
    }

    const IndexedStructure& a_;
    const IndexedStructure& b_;
    std::map<std::uint64_t, std::vector<int>> by_color_;
    std::vector<int> order_;
    std::vector<int> map_;
    std::vector<bool> used_;
};

}  // namespace detail

inline bool is_isomorphic(const Structure& s1, const Structure& s2) {
    detail::IndexedStructure a(s1), b(s2);
    return detail::IsoSearch(a, b).run();
}

/// Isomorphism-invariant hash; equal for isomorphic structures.
inline std::uint64_t invariant_hash(const Structure& s) { return detail::IndexedStructure(s).invariant(); }

inline void check_iso_bound(const Graph& g, const Limits& limits) {
    if (static_cast<int>(g.vertices.size()) > limits.max_iso_vertices)
        throw ResourceError("is_isomorphic: graph has " + std::to_string(g.vertices.size()) + " vertices, bound is " +
                            std::to_string(limits.max_iso_vertices));
}

/// True iff there is a vertex+edge bijection preserving labels, attachment order and sources.
inline bool is_isomorphic(const Graph& g1, const Graph& g2, const Limits& limits = {}) {
    check_iso_bound(g1, limits);
    check_iso_bound(g2, limits);
    if (g1.vertices.size() != g2.vertices.size() || g1.edges.size() != g2.edges.size() || g1.sort() != g2.sort())
        return false;
    return is_isomorphic(encode_graph(g1), encode_graph(g2));
}

inline std::uint64_t invariant_hash(const Graph& g) { return invariant_hash(encode_graph(g)); }

}  // namespace hrgraph
