//
// Copyright (c) 2026 The credal-plp authors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to
// deal in the Software without restriction, including without limitation the
// rights to use, copy, modify, merge, publish, distribute, sublicense, and/or
// sell copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
// FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS
// IN THE SOFTWARE.
//

#pragma once

#include "plp/error.hpp"
#include "plp/rational.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace plp {

/////////////////////////////////////////////////////////////////////////////////////////
// Abstract syntax
/////////////////////////////////////////////////////////////////////////////////////////
enum class TermKind : std::uint8_t { constant, variable };

struct Term {
    TermKind kind = TermKind::constant;
    std::string name;

    static Term constant(std::string n) { return {TermKind::constant, std::move(n)}; }
    static Term variable(std::string n) { return {TermKind::variable, std::move(n)}; }
    bool is_variable() const { return kind == TermKind::variable; }
    friend bool operator==(const Term&, const Term&) = default;
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    std::size_t arity() const { return args.size(); }
    bool is_ground() const {
        for (const auto& t : args) {
            if (t.is_variable()) { return false; }
        }
        return true;
    }
    friend bool operator==(const Atom&, const Atom&) = default;
};

inline std::string to_string(const Atom& a) {
    std::string out = a.predicate;
    if (!a.args.empty()) {
        out += '(';
        for (std::size_t i = 0; i != a.args.size(); ++i) {
            if (i) { out += ','; }
            out += a.args[i].name;
        }
        out += ')';
    }
    return out;
}

struct Subgoal {
    Atom atom;
    bool negated = false;
    friend bool operator==(const Subgoal&, const Subgoal&) = default;
};

struct Rule {
    Atom head;
    std::vector<Subgoal> body;

    bool is_fact() const { return body.empty(); }
    friend bool operator==(const Rule&, const Rule&) = default;
};

struct ProbFact {
    Atom atom;
    Rational prob;
    friend bool operator==(const ProbFact&, const ProbFact&) = default;
};

struct Program {
    std::vector<Rule> rules;
    std::vector<ProbFact> prob_facts;
    friend bool operator==(const Program&, const Program&) = default;
};

enum class TruthValue : std::uint8_t { False, True, Undefined };

inline std::string_view to_string(TruthValue v) {
    switch (v) {
        case TruthValue::True: return "true";
        case TruthValue::False: return "false";
        default: return "undefined";
    }
}

struct Assignment {
    Atom atom;
    TruthValue value = TruthValue::True;
    friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct Query {
    std::vector<Assignment> q;
    std::vector<Assignment> e;
};

struct Diagnostic {
    enum class Level : std::uint8_t { error, warning };
    Level level = Level::error;
    std::size_t line = 0;
    std::size_t column = 0;
    std::string message;

    /// "LEVEL file:line:col message"
    std::string render(std::string_view file) const {
        std::string out = level == Level::error ? "ERROR " : "WARNING ";
        out.append(file);
        out += ':' + std::to_string(line) + ':' + std::to_string(column) + ' ' + message;
        return out;
    }
};

struct ParseOptions {
    bool warnings = true;
};

struct ParseResult {
    std::optional<Program> program;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return program.has_value(); }
    std::size_t error_count() const {
        std::size_t n = 0;
        for (const auto& d : diagnostics) { n += d.level == Diagnostic::Level::error; }
        return n;
    }
};

/////////////////////////////////////////////////////////////////////////////////////////
// Lexer
/////////////////////////////////////////////////////////////////////////////////////////
namespace detail {

enum class Tok : std::uint8_t {
    ident, variable, number, colon_colon, colon_dash, lparen, rparen, comma, dot, slash, equals, kw_not, end, bad
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_blanks();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size()) { return t; }
        const char c = src_[pos_];
        auto single = [&](Tok k) {
            t.kind = k;
            t.text = std::string(1, c);
            advance();
            return t;
        };
        if (std::islower(static_cast<unsigned char>(c))) {
            t.text = take_word();
            t.kind = t.text == "not" ? Tok::kw_not : Tok::ident;
            return t;
        }
        if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::variable;
            t.text = take_word();
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Tok::number;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                t.text += src_[pos_];
                advance();
            }
            // a dot followed by a digit continues a decimal literal; otherwise it ends the clause
            if (pos_ + 1 < src_.size() && src_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                t.text += '.';
                advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    t.text += src_[pos_];
                    advance();
                }
            }
            return t;
        }
        switch (c) {
            case '(': return single(Tok::lparen);
            case ')': return single(Tok::rparen);
            case ',': return single(Tok::comma);
            case '.': return single(Tok::dot);
            case '/': return single(Tok::slash);
            case '=': return single(Tok::equals);
            case ':':
                if (pos_ + 1 < src_.size() && (src_[pos_ + 1] == ':' || src_[pos_ + 1] == '-')) {
                    t.kind = src_[pos_ + 1] == ':' ? Tok::colon_colon : Tok::colon_dash;
                    t.text = std::string(src_.substr(pos_, 2));
                    advance();
                    advance();
                    return t;
                }
                break;
            case '\\':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '+') {
                    t.kind = Tok::kw_not;
                    t.text = "\\+";
                    advance();
                    advance();
                    return t;
                }
                break;
            default: break;
        }
        return single(Tok::bad);
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_blanks() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') { advance(); }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }
    std::string take_word() {
        std::string w;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            w += src_[pos_];
            advance();
        }
        return w;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

struct SyntaxFailure {
    Token at;
    std::string message;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

    const Token& peek() const { return cur_; }
    Token take() {
        Token t = cur_;
        cur_ = lex_.next();
        return t;
    }
    bool accept(Tok k) {
        if (cur_.kind != k) { return false; }
        take();
        return true;
    }
    Token expect(Tok k, const char* what) {
        if (cur_.kind != k) { fail(std::string("expected ") + what + describe(cur_)); }
        return take();
    }
    [[noreturn]] void fail(std::string msg) const { throw SyntaxFailure{cur_, std::move(msg)}; }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::end) { return ", found end of input"; }
        return ", found '" + t.text + "'";
    }

    Term term() {
        if (cur_.kind == Tok::ident) { return Term::constant(take().text); }
        if (cur_.kind == Tok::variable) { return Term::variable(take().text); }
        if (cur_.kind == Tok::number) {
            if (cur_.text.find('.') != std::string::npos) { fail("decimal number is not a valid term"); }
            return Term::constant(normalize_integer(take().text));
        }
        fail("expected a term" + describe(cur_));
    }

    Atom atom() {
        if (cur_.kind != Tok::ident) { fail("expected an atom" + describe(cur_)); }
        Atom a;
        a.predicate = take().text;
        if (accept(Tok::lparen)) {
            a.args.push_back(term());
            while (accept(Tok::comma)) { a.args.push_back(term()); }
            expect(Tok::rparen, "')'");
        }
        return a;
    }

    // number ['/' number]
    Rational probability() {
        Token first = expect(Tok::number, "a probability");
        std::string text = first.text;
        if (accept(Tok::slash)) { text += '/' + expect(Tok::number, "a denominator").text; }
        auto r = parse_rational(text);
        if (!r) { throw SyntaxFailure{first, "malformed probability literal '" + text + "'"}; }
        if (*r < 0 || *r > 1) { throw SyntaxFailure{first, "probability out of range [0,1]: " + text}; }
        return *r;
    }

    // Skips to just past the next '.' (or end of input).
    void recover() {
        while (cur_.kind != Tok::end) {
            if (take().kind == Tok::dot) { return; }
        }
    }

private:
    static std::string normalize_integer(const std::string& s) {
        auto nz = s.find_first_not_of('0');
        return nz == std::string::npos ? "0" : s.substr(nz);
    }

    Lexer lex_;
    Token cur_;
};

/// Most general unifier existence for two atoms with disjoint variable scopes.
inline bool unifiable(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate || a.arity() != b.arity()) { return false; }
    // union-find over variable names (prefixed by side) and constants
    std::map<std::string, std::string> parent;
    auto key = [](char side, const Term& t) {
        return t.is_variable() ? std::string(1, side) + t.name : "#" + t.name;
    };
    auto find = [&](std::string x) {
        while (true) {
            auto it = parent.find(x);
            if (it == parent.end() || it->second == x) { return x; }
            x = it->second;
        }
    };
    for (std::size_t i = 0; i != a.arity(); ++i) {
        std::string x = find(key('a', a.args[i]));
        std::string y = find(key('b', b.args[i]));
        if (x == y) { continue; }
        const bool xc = x[0] == '#', yc = y[0] == '#';
        if (xc && yc) { return false; }
        if (xc) { parent[y] = x; } else { parent[x] = y; }
    }
    return true;
}

} // namespace detail

/////////////////////////////////////////////////////////////////////////////////////////
// Program parsing
/////////////////////////////////////////////////////////////////////////////////////////
inline ParseResult parse_program(std::string_view text, const ParseOptions& opts = {}) {
    using detail::Tok;
    ParseResult result;
    Program prog;
    struct Located { std::size_t line, column; };
    std::vector<Located> prob_pos;
    std::map<std::string, std::pair<std::size_t, Located>> arity;

    auto error = [&](std::size_t line, std::size_t col, std::string msg) {
        result.diagnostics.push_back({Diagnostic::Level::error, line, col, std::move(msg)});
    };
    auto check_arity = [&](const Atom& a, const detail::Token& where) {
        auto [it, fresh] = arity.try_emplace(a.predicate, a.arity(), Located{where.line, where.column});
        if (!fresh && it->second.first != a.arity()) {
            error(where.line, where.column,
                  "inconsistent arity for predicate '" + a.predicate + "': " + std::to_string(a.arity()) +
                      " here, " + std::to_string(it->second.first) + " at line " +
                      std::to_string(it->second.second.line));
        }
    };

    detail::Parser p(text);
    while (p.peek().kind != Tok::end) {
        const detail::Token start = p.peek();
        try {
            if (start.kind == Tok::number) {
                Rational prob = p.probability();
                p.expect(Tok::colon_colon, "'::'");
                const detail::Token at = p.peek();
                Atom a = p.atom();
                p.expect(Tok::dot, "'.'");
                check_arity(a, at);
                prog.prob_facts.push_back({std::move(a), std::move(prob)});
                prob_pos.push_back({start.line, start.column});
                continue;
            }
            Rule r;
            r.head = p.atom();
            check_arity(r.head, start);
            if (p.accept(Tok::colon_dash)) {
                do {
                    Subgoal g;
                    g.negated = p.accept(Tok::kw_not);
                    const detail::Token at = p.peek();
                    g.atom = p.atom();
                    check_arity(g.atom, at);
                    r.body.push_back(std::move(g));
                } while (p.accept(Tok::comma));
            }
            p.expect(Tok::dot, "'.'");
            prog.rules.push_back(std::move(r));
        } catch (const detail::SyntaxFailure& f) {
            error(f.at.line, f.at.column, f.message);
            p.recover();
        }
    }

    if (opts.warnings) {
        for (std::size_t i = 0; i != prog.prob_facts.size(); ++i) {
            for (const auto& r : prog.rules) {
                if (detail::unifiable(prog.prob_facts[i].atom, r.head)) {
                    result.diagnostics.push_back(
                        {Diagnostic::Level::warning, prob_pos[i].line, prob_pos[i].column,
                         "probabilistic fact " + to_string(prog.prob_facts[i].atom) + " unifies with the head of " +
                             (r.is_fact() ? "fact " : "rule for ") + to_string(r.head) +
                             " (disjointness condition violated)"});
                    break;
                }
            }
        }
    }
    if (result.error_count() == 0) { result.program = std::move(prog); }
    return result;
}

/// Parses and throws InputError with the first error diagnostic on failure.
inline Program parse_program_or_throw(std::string_view text, std::string_view file = "<input>") {
    auto res = parse_program(text, {.warnings = false});
    if (!res.ok()) {
        for (const auto& d : res.diagnostics) {
            if (d.level == Diagnostic::Level::error) { throw InputError(d.render(file)); }
        }
    }
    return std::move(*res.program);
}

/////////////////////////////////////////////////////////////////////////////////////////
// Query parsing
/////////////////////////////////////////////////////////////////////////////////////////
/// Comma-separated `atom[=true|false|undefined]` list. Empty text yields an empty list.
inline std::vector<Assignment> parse_assignments(std::string_view text) {
    using detail::Tok;
    std::vector<Assignment> out;
    detail::Parser p(text);
    if (p.peek().kind == Tok::end) { return out; }
    try {
        do {
            const detail::Token at = p.peek();
            Assignment as;
            as.atom = p.atom();
            if (!as.atom.is_ground()) {
                throw detail::SyntaxFailure{at, "query atom " + to_string(as.atom) + " is not ground"};
            }
            if (p.accept(Tok::equals)) {
                const detail::Token v = p.peek();
                const std::string word = v.kind == Tok::ident ? p.take().text : std::string();
                if (word == "true") {
                    as.value = TruthValue::True;
                } else if (word == "false") {
                    as.value = TruthValue::False;
                } else if (word == "undefined") {
                    as.value = TruthValue::Undefined;
                } else {
                    throw detail::SyntaxFailure{v, "unknown truth value '" + v.text + "'"};
                }
            }
            bool duplicate = false;
            for (const auto& prev : out) {
                if (prev.atom == as.atom) {
                    if (prev.value != as.value) {
                        throw detail::SyntaxFailure{at, "conflicting assignments for " + to_string(as.atom)};
                    }
                    duplicate = true;
                }
            }
            if (!duplicate) { out.push_back(std::move(as)); }
        } while (p.accept(Tok::comma));
        if (p.peek().kind != Tok::end) { p.fail("unexpected token in query" + detail::Parser::describe(p.peek())); }
    } catch (const detail::SyntaxFailure& f) {
        throw InputError("query:" + std::to_string(f.at.column) + ": " + f.message);
    }
    return out;
}

inline Query parse_query(std::string_view q, std::string_view e = {}) {
    return Query{parse_assignments(q), parse_assignments(e)};
}

inline bool has_undefined(const std::vector<Assignment>& as) {
    for (const auto& a : as) {
        if (a.value == TruthValue::Undefined) { return true; }
    }
    return false;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Pretty printing
/////////////////////////////////////////////////////////////////////////////////////////
inline std::string format_rule(const Rule& r) {
    std::string out = to_string(r.head);
    for (std::size_t i = 0; i != r.body.size(); ++i) {
        out += i ? ", " : " :- ";
        if (r.body[i].negated) { out += "not "; }
        out += to_string(r.body[i].atom);
    }
    return out + '.';
}

/// Canonical text: probabilistic facts first, then rules, one clause per line.
inline std::string format_program(const Program& p) {
    std::string out;
    for (const auto& pf : p.prob_facts) { out += to_literal(pf.prob) + "::" + to_string(pf.atom) + ".\n"; }
    for (const auto& r : p.rules) { out += format_rule(r) + '\n'; }
    return out;
}

} // namespace plp
