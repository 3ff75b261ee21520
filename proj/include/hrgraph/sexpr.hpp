#pragma once

// Minimal s-expression reader/writer shared by every text format.
// Atoms are bare tokens; lists are parenthesised; ';' starts a comment
// that runs to the end of the line.

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"

namespace hrgraph::sx {

struct Sexpr {
    bool is_atom = false;
    std::string atom;
    std::vector<Sexpr> items;

    static Sexpr make_atom(std::string s) {
        Sexpr e;
        e.is_atom = true;
        e.atom = std::move(s);
        return e;
    }
    static Sexpr make_list(std::vector<Sexpr> xs = {}) {
        Sexpr e;
        e.items = std::move(xs);
        return e;
    }

    bool is_list() const { return !is_atom; }
    std::size_t size() const { return items.size(); }
    const Sexpr& operator[](std::size_t i) const {
        if (is_atom || i >= items.size()) throw InputError("s-expression: missing element " + std::to_string(i) + " in " + str());
        return items[i];
    }
    /// Head symbol of a list, or empty string.
    std::string head() const {
        if (is_atom || items.empty() || !items[0].is_atom) return {};
        return items[0].atom;
    }
    const std::string& as_atom() const {
        if (!is_atom) throw InputError("s-expression: expected atom, got " + str());
        return atom;
    }
    const Sexpr& expect_list() const {
        if (is_atom) throw InputError("s-expression: expected list, got " + atom);
        return *this;
    }
    int as_int() const {
        const std::string& a = as_atom();
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(a, &pos);
        } catch (const std::exception&) {
            throw InputError("s-expression: expected integer, got " + a);
        }
        if (pos != a.size()) throw InputError("s-expression: expected integer, got " + a);
        return v;
    }

    std::string str() const {
        if (is_atom) return atom;
        std::string out = "(";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) out += ' ';
            out += items[i].str();
        }
        out += ')';
        return out;
    }
};

namespace detail {

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    std::vector<Sexpr> read_all() {
        std::vector<Sexpr> out;
        skip();
        while (pos_ < text_.size()) {
            out.push_back(read_one());
            skip();
        }
        return out;
    }

private:
    void skip() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    Sexpr read_one() {
        skip();
        if (pos_ >= text_.size()) throw InputError("s-expression: unexpected end of input");
        char c = text_[pos_];
        if (c == ')') throw InputError("s-expression: unbalanced ')' at offset " + std::to_string(pos_));
        if (c == '(') {
            ++pos_;
            Sexpr list = Sexpr::make_list();
            for (;;) {
                skip();
                if (pos_ >= text_.size()) throw InputError("s-expression: missing ')'");
                if (text_[pos_] == ')') {
                    ++pos_;
                    return list;
                }
                list.items.push_back(read_one());
            }
        }
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char d = text_[pos_];
            if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
            ++pos_;
        }
        return Sexpr::make_atom(std::string(text_.substr(start, pos_ - start)));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline std::vector<Sexpr> parse_all(std::string_view text) { return detail::Reader(text).read_all(); }

/// Parses exactly one top-level expression.
inline Sexpr parse(std::string_view text) {
    auto all = parse_all(text);
    if (all.size() != 1)
        throw InputError("s-expression: expected exactly one top-level form, found " + std::to_string(all.size()));
    return std::move(all.front());
}

inline Sexpr atom(std::string s) { return Sexpr::make_atom(std::move(s)); }
inline Sexpr list(std::vector<Sexpr> xs = {}) { return Sexpr::make_list(std::move(xs)); }

}  // namespace hrgraph::sx
