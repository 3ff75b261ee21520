#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace hrgraph {

/// Name of a source. Labels are totally ordered lexicographically.
struct SourceLabel {
    std::string name;

    SourceLabel() = default;
    SourceLabel(std::string n) : name(std::move(n)) {}  // NOLINT: implicit by design of the label literals
    SourceLabel(const char* n) : name(n) {}             // NOLINT

    auto operator<=>(const SourceLabel&) const = default;
    bool operator==(const SourceLabel&) const = default;
};

/// Edge label with a fixed positive arity.
struct EdgeLabel {
    std::string name;
    int arity = 1;

    auto operator<=>(const EdgeLabel&) const = default;
    bool operator==(const EdgeLabel&) const = default;
};

inline bool is_valid_label_name(const std::string& s) {
    if (s.empty()) return false;
    return std::none_of(s.begin(), s.end(), [](char c) { return c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' || c == '\n'; });
}

/// A sort: a finite set of source labels.
using SortSet = std::set<SourceLabel>;

inline SortSet sort_of(std::initializer_list<const char*> names) {
    SortSet s;
    for (const char* n : names) s.insert(SourceLabel{n});
    return s;
}

inline SortSet intersect(const SortSet& a, const SortSet& b) {
    SortSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

inline SortSet unite(const SortSet& a, const SortSet& b) {
    SortSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

inline bool is_subset(const SortSet& a, const SortSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

/// All subsets of `s`, ordered by size and then lexicographically.
inline std::vector<SortSet> subsets_of(const SortSet& s) {
    std::vector<SourceLabel> elems(s.begin(), s.end());
    const std::size_t n = elems.size();
    std::vector<SortSet> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        SortSet sub;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) sub.insert(elems[i]);
        out.push_back(std::move(sub));
    }
    std::stable_sort(out.begin(), out.end(), [](const SortSet& a, const SortSet& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

/// Finite permutation of source labels; identity outside its support.
class Permutation {
public:
    Permutation() = default;

    /// Builds from an explicit mapping; throws unless it is a bijection of its domain onto itself.
    explicit Permutation(std::map<SourceLabel, SourceLabel> mapping) {
        std::set<SourceLabel> dom, img;
        for (const auto& [k, v] : mapping) {
            dom.insert(k);
            img.insert(v);
        }
        if (dom != img) throw InputError("permutation is not a bijection on its support");
        for (auto& [k, v] : mapping)
            if (k != v) map_.emplace(k, v);
    }

    static Permutation transposition(const SourceLabel& a, const SourceLabel& b) {
        if (a == b) return {};
        return Permutation({{a, b}, {b, a}});
    }

    /// Product of transpositions, the first listed applied first.
    static Permutation from_transpositions(const std::vector<std::pair<SourceLabel, SourceLabel>>& ts) {
        Permutation p;
        for (const auto& [a, b] : ts) p = transposition(a, b).after(p);
        return p;
    }

    SourceLabel operator()(const SourceLabel& s) const {
        auto it = map_.find(s);
        return it == map_.end() ? s : it->second;
    }

    /// (this ∘ other)(s) = this(other(s)).
    Permutation after(const Permutation& other) const {
        std::map<SourceLabel, SourceLabel> m;
        std::set<SourceLabel> support;
        for (const auto& [k, v] : map_) support.insert(k);
        for (const auto& [k, v] : other.map_) support.insert(k);
        for (const auto& s : support) m.emplace(s, (*this)(other(s)));
        return Permutation(std::move(m));
    }

    Permutation inverse() const {
        std::map<SourceLabel, SourceLabel> m;
        for (const auto& [k, v] : map_) m.emplace(v, k);
        return Permutation(std::move(m));
    }

    bool is_identity() const { return map_.empty(); }
    const std::map<SourceLabel, SourceLabel>& mapping() const { return map_; }

    SortSet support() const {
        SortSet s;
        for (const auto& [k, v] : map_) s.insert(k);
        return s;
    }

    /// Image of a sort under the permutation.
    SortSet image(const SortSet& sort) const {
        SortSet out;
        for (const auto& s : sort) out.insert((*this)(s));
        return out;
    }

    /// Transpositions t1..tm such that applying them in order yields this permutation.
    std::vector<std::pair<SourceLabel, SourceLabel>> to_transpositions() const {
        std::vector<std::pair<SourceLabel, SourceLabel>> out;
        Permutation rest = *this;
        while (!rest.is_identity()) {
            const SourceLabel s = rest.map_.begin()->first;
            const SourceLabel pre = rest.inverse()(s);
            Permutation t = transposition(s, pre);
            out.emplace_back(std::min(s, pre), std::max(s, pre));
            rest = rest.after(t);
        }
        return out;
    }

    bool operator==(const Permutation&) const = default;
    auto operator<=>(const Permutation&) const = default;

private:
    std::map<SourceLabel, SourceLabel> map_;
};

}  // namespace hrgraph
