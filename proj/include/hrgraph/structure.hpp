#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "graph.hpp"

namespace hrgraph {

struct Relation {
    int arity = 0;
    std::set<std::vector<Id>> tuples;

    bool operator==(const Relation&) const = default;
};

/// Finite relational structure. Symbols may be declared with an empty interpretation.
struct Structure {
    std::vector<Id> universe;
    std::map<std::string, Relation> relations;

    bool contains(Id u) const { return std::binary_search(universe.begin(), universe.end(), u); }

    void declare(const std::string& symbol, int arity) {
        auto [it, fresh] = relations.emplace(symbol, Relation{arity, {}});
        if (!fresh && it->second.arity != arity) throw InputError("relation " + symbol + " redeclared with a different arity");
    }

    void add(const std::string& symbol, std::vector<Id> tuple) {
        auto it = relations.find(symbol);
        if (it == relations.end()) it = relations.emplace(symbol, Relation{static_cast<int>(tuple.size()), {}}).first;
        it->second.tuples.insert(std::move(tuple));
    }

    std::size_t tuple_count() const {
        std::size_t n = 0;
        for (const auto& [name, rel] : relations) n += rel.tuples.size();
        return n;
    }

    Structure& normalize() {
        std::sort(universe.begin(), universe.end());
        universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
        return *this;
    }

    bool operator==(const Structure&) const = default;
};

inline std::optional<std::string> validate_structure(const Structure& s) {
    if (!std::is_sorted(s.universe.begin(), s.universe.end()) ||
        std::adjacent_find(s.universe.begin(), s.universe.end()) != s.universe.end())
        return "universe is not a sorted set";
    for (const auto& [name, rel] : s.relations) {
        if (rel.arity < 0) return "relation " + name + " has negative arity";
        for (const auto& t : rel.tuples) {
            if (static_cast<int>(t.size()) != rel.arity) return "tuple of wrong length in relation " + name;
            for (Id u : t)
                if (!s.contains(u)) return "relation " + name + " mentions element " + std::to_string(u) + " outside the universe";
        }
    }
    return std::nullopt;
}

}  // namespace hrgraph
