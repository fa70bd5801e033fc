#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stj/config.hpp"
#include "stj/errors.hpp"
#include "stj/poly.hpp"
#include "stj/rational.hpp"

// Text language for scalars, piecewise functions, integrators, and queries.
// Recursive descent, single-token lookahead; the first error aborts the parse
// with a positioned Diagnostic.  print() emits the canonical interchange form
// and parse(print(parse(s))) == parse(s).

namespace stj::dsl {

// ---------------------------------------------------------------------------
// Tokens

struct Token {
    enum class Kind { Ident, Int, Decimal, Sym, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 1;
    int col = 1;
};

namespace detail {

inline bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
inline bool digit(char c) { return c >= '0' && c <= '9'; }

inline std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto bump = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    };
    static const std::string syms = "=;+-*^()[]{},:/";
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            bump(c);
            ++i;
            continue;
        }
        if (c == '#') {  // comment to end of line
            while (i < text.size() && text[i] != '\n') {
                bump(text[i]);
                ++i;
            }
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (ident_start(c)) {
            size_t j = i;
            while (j < text.size() && ident_char(text[j])) ++j;
            t.kind = Token::Kind::Ident;
            t.text = std::string(text.substr(i, j - i));
            while (i < j) {
                bump(text[i]);
                ++i;
            }
        } else if (digit(c)) {
            size_t j = i;
            while (j < text.size() && digit(text[j])) ++j;
            bool decimal = false;
            if (j + 1 < text.size() && text[j] == '.' && digit(text[j + 1])) {
                decimal = true;
                ++j;
                while (j < text.size() && digit(text[j])) ++j;
            }
            t.kind = decimal ? Token::Kind::Decimal : Token::Kind::Int;
            t.text = std::string(text.substr(i, j - i));
            while (i < j) {
                bump(text[i]);
                ++i;
            }
        } else if (syms.find(c) != std::string::npos) {
            t.kind = Token::Kind::Sym;
            t.text = std::string(1, c);
            bump(c);
            ++i;
        } else {
            throw diagnostic_error(
                {line, col, "unexpected character '" + std::string(1, c) + "'", {}});
        }
        out.push_back(std::move(t));
    }
    out.push_back({Token::Kind::End, "", line, col});
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// AST

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct PiecewiseLit {
    Rational lo, hi;
    std::vector<Rational> breaks;   // lo ... hi
    std::vector<Poly> pieces;       // one per open interval
    std::vector<Rational> values;   // one per breakpoint

    friend bool operator==(const PiecewiseLit& a, const PiecewiseLit& b) {
        return a.lo == b.lo && a.hi == b.hi && a.breaks == b.breaks && a.pieces == b.pieces &&
               a.values == b.values;
    }
};

struct Atom {
    enum class Kind { Scalar, X, Name, Heaviside, Dirichlet, Piecewise, Sub, Pow };
    Kind kind = Kind::X;
    Rational scalar;                 // Scalar
    std::string name;                // Name
    Rational h_c, h_at;              // Heaviside
    std::shared_ptr<PiecewiseLit> pw;  // Piecewise
    ExprPtr sub;                     // Sub
    std::shared_ptr<const Atom> base;  // Pow
    unsigned exp = 0;                // Pow

    friend bool operator==(const Atom& a, const Atom& b);
};

struct Term {
    std::optional<Rational> coef;  // scalar "*" atom
    Atom atom;

    friend bool operator==(const Term& a, const Term& b) {
        return a.coef == b.coef && a.atom == b.atom;
    }
};

struct Expr {
    std::vector<std::pair<int, Term>> terms;  // sign is +1 or -1; first is +1

    friend bool operator==(const Expr& a, const Expr& b) { return a.terms == b.terms; }
};

inline bool operator==(const Atom& a, const Atom& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Atom::Kind::Scalar: return a.scalar == b.scalar;
        case Atom::Kind::X: return true;
        case Atom::Kind::Name: return a.name == b.name;
        case Atom::Kind::Heaviside: return a.h_c == b.h_c && a.h_at == b.h_at;
        case Atom::Kind::Dirichlet: return true;
        case Atom::Kind::Piecewise: return *a.pw == *b.pw;
        case Atom::Kind::Sub: return *a.sub == *b.sub;
        case Atom::Kind::Pow: return a.exp == b.exp && *a.base == *b.base;
    }
    return false;
}

enum class QueryKind { Integrate, Compare, Parts, Decompose, Check, Sums };
enum class ProbeKind { Mrs, Rps, Rrs };

struct Query {
    QueryKind kind = QueryKind::Integrate;
    ProbeKind probe = ProbeKind::Mrs;     // Sums only
    std::string f, g;                     // g empty for Decompose
    std::vector<Rational> deltas;         // Sums mrs/rrs args (empty = defaults)
    std::vector<Rational> base;           // Sums rps base points (empty = auto)
    std::optional<int> rounds;            // Sums rps
    Rational lo, hi;

    friend bool operator==(const Query& a, const Query& b) {
        return a.kind == b.kind && a.probe == b.probe && a.f == b.f && a.g == b.g &&
               a.deltas == b.deltas && a.base == b.base && a.rounds == b.rounds && a.lo == b.lo &&
               a.hi == b.hi;
    }
};

struct Program {
    std::vector<std::pair<std::string, Expr>> bindings;
    std::vector<Query> queries;

    friend bool operator==(const Program& a, const Program& b) {
        return a.bindings == b.bindings && a.queries == b.queries;
    }
};

// ---------------------------------------------------------------------------
// Parser

namespace detail {

inline const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words{
        "let",     "on",      "at",        "x",     "heaviside", "dirichlet",
        "piecewise", "integrate", "compare", "parts", "decompose", "check",
        "sums",    "mrs",     "rps",       "rrs"};
    return words;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Program parse_program() {
        Program prog;
        while (!at_end()) {
            if (peek_ident("let")) {
                prog.bindings.push_back(parse_binding());
            } else {
                prog.queries.push_back(parse_query());
            }
        }
        return prog;
    }

    // Entry point for parsing a bare expression (used by the CLI).
    Expr parse_expression_only() {
        Expr e = parse_expr();
        expect_end();
        return e;
    }

private:
    [[noreturn]] void fail(const Token& t, std::string message,
                           std::vector<std::string> expected = {}) {
        std::string what = std::move(message);
        if (!expected.empty()) {
            what += "; expected ";
            for (size_t i = 0; i < expected.size(); ++i) {
                if (i) what += expected.size() == 2 ? " or " : (i + 1 == expected.size() ? ", or " : ", ");
                what += expected[i];
            }
        }
        throw diagnostic_error({t.line, t.col, what, std::move(expected)});
    }

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }

    bool peek_sym(const char* s) const {
        return peek().kind == Token::Kind::Sym && peek().text == s;
    }
    bool peek_ident(const char* s) const {
        return peek().kind == Token::Kind::Ident && peek().text == s;
    }
    bool accept_sym(const char* s) {
        if (!peek_sym(s)) return false;
        ++pos_;
        return true;
    }
    void expect_sym(const char* s) {
        if (!accept_sym(s))
            fail(peek(), describe(peek()), {std::string("'") + s + "'"});
    }
    void expect_ident(const char* s) {
        if (!peek_ident(s)) fail(peek(), describe(peek()), {std::string("'") + s + "'"});
        ++pos_;
    }
    void expect_end() {
        if (!at_end()) fail(peek(), describe(peek()), {"end of input"});
    }

    static std::string describe(const Token& t) {
        if (t.kind == Token::Kind::End) return "unexpected end of input";
        return "unexpected '" + t.text + "'";
    }

    // ------------------------------------------------------ scalars

    bool peek_scalar_start() const {
        if (peek().kind == Token::Kind::Int || peek().kind == Token::Kind::Decimal) return true;
        if (peek_sym("-")) {
            const Token& n = toks_[pos_ + 1];
            return n.kind == Token::Kind::Int || n.kind == Token::Kind::Decimal;
        }
        return false;
    }

    Rational parse_scalar() {
        bool neg = false;
        if (peek_sym("-")) {
            neg = true;
            ++pos_;
        }
        const Token& t = peek();
        Rational v;
        if (t.kind == Token::Kind::Int) {
            Integer n{t.text};
            ++pos_;
            if (accept_sym("/")) {
                const Token& d = peek();
                if (d.kind != Token::Kind::Int) fail(d, describe(d), {"integer denominator"});
                Integer den{d.text};
                if (den == 0) fail(d, "zero denominator");
                ++pos_;
                v = Rational(n, den);
            } else {
                v = Rational(n);
            }
        } else if (t.kind == Token::Kind::Decimal) {
            auto dot = t.text.find('.');
            Integer ip{t.text.substr(0, dot)};
            std::string frac = t.text.substr(dot + 1);
            Integer num{frac};
            Integer den = 1;
            for (size_t k = 0; k < frac.size(); ++k) den *= 10;
            v = Rational(ip) + Rational(num, den);  // exact, no float intermediary
            ++pos_;
        } else {
            fail(t, describe(t), {"number"});
        }
        return neg ? -v : v;
    }

    // interval := "[" scalar "," scalar "]" | "(" scalar "," scalar ")"
    struct Interval {
        bool closed;
        Rational lo, hi;
    };

    Interval parse_interval() {
        const Token& open = peek();
        bool closed;
        if (accept_sym("[")) {
            closed = true;
        } else if (accept_sym("(")) {
            closed = false;
        } else {
            fail(open, describe(open), {"'['", "'('"});
        }
        Rational lo = parse_scalar();
        expect_sym(",");
        Rational hi = parse_scalar();
        const Token& close = peek();
        if (closed) {
            expect_sym("]");
        } else {
            expect_sym(")");
        }
        if (!(lo < hi)) fail(open, "empty interval: " + lo.str() + " must be below " + hi.str());
        (void)close;
        return {closed, std::move(lo), std::move(hi)};
    }

    // ------------------------------------------------------ expressions

    Expr parse_expr() {
        Expr e;
        e.terms.emplace_back(1, parse_term());
        while (peek_sym("+") || peek_sym("-")) {
            int sign = peek_sym("+") ? 1 : -1;
            ++pos_;
            e.terms.emplace_back(sign, parse_term());
        }
        return e;
    }

    Term parse_term() {
        if (peek_scalar_start()) {
            size_t save = pos_;
            Rational c = parse_scalar();
            if (accept_sym("*")) {
                Term t;
                t.coef = std::move(c);
                t.atom = parse_atom();
                return t;
            }
            pos_ = save;
        }
        Term t;
        t.atom = parse_atom();
        return t;
    }

    Atom parse_atom() {
        Atom a = parse_base_atom();
        while (peek_sym("^")) {
            ++pos_;
            const Token& e = peek();
            if (e.kind != Token::Kind::Int) fail(e, describe(e), {"integer exponent"});
            long long k = std::stoll(e.text.size() > 6 ? "1000000" : e.text);
            if (k > 10000) fail(e, "exponent too large");
            ++pos_;
            Atom p;
            p.kind = Atom::Kind::Pow;
            p.base = std::make_shared<Atom>(std::move(a));
            p.exp = static_cast<unsigned>(k);
            a = std::move(p);
        }
        return a;
    }

    Atom parse_base_atom() {
        const Token& t = peek();
        Atom a;
        if (peek_scalar_start()) {
            a.kind = Atom::Kind::Scalar;
            a.scalar = parse_scalar();
            return a;
        }
        if (accept_sym("(")) {
            Expr inner = parse_expr();
            expect_sym(")");
            // A parenthesized single positive bare atom is just that atom.
            if (inner.terms.size() == 1 && inner.terms[0].first == 1 &&
                !inner.terms[0].second.coef) {
                return inner.terms[0].second.atom;
            }
            a.kind = Atom::Kind::Sub;
            a.sub = std::make_shared<Expr>(std::move(inner));
            return a;
        }
        if (t.kind != Token::Kind::Ident)
            fail(t, describe(t),
                 {"'x'", "scalar", "name", "'heaviside'", "'dirichlet'", "'piecewise'", "'('"});
        if (t.text == "x") {
            ++pos_;
            a.kind = Atom::Kind::X;
            return a;
        }
        if (t.text == "heaviside") {
            ++pos_;
            expect_sym("(");
            expect_ident("c");
            expect_sym("=");
            a.h_c = parse_scalar();
            expect_sym(",");
            expect_ident("at");
            expect_sym("=");
            a.h_at = parse_scalar();
            expect_sym(")");
            a.kind = Atom::Kind::Heaviside;
            return a;
        }
        if (t.text == "dirichlet") {
            ++pos_;
            a.kind = Atom::Kind::Dirichlet;
            return a;
        }
        if (t.text == "piecewise") {
            ++pos_;
            a.kind = Atom::Kind::Piecewise;
            a.pw = std::make_shared<PiecewiseLit>(parse_piecewise_literal());
            return a;
        }
        if (reserved_words().count(t.text))
            fail(t, "reserved word '" + t.text + "' cannot be used here");
        if (!defined_.count(t.text))
            fail(t, "unknown name '" + t.text + "' (names must be bound before use)");
        ++pos_;
        a.kind = Atom::Kind::Name;
        a.name = t.text;
        return a;
    }

    // Pieces may appear in any order; the literal is normalized to ascending
    // order and validated to tile the stated interval with a value at every
    // breakpoint.
    PiecewiseLit parse_piecewise_literal() {
        expect_ident("on");
        const Token& ivt = peek();
        Interval dom = parse_interval();
        if (!dom.closed) fail(ivt, "piecewise domain must be a closed interval");
        expect_sym("{");
        struct PieceEntry {
            Rational lo, hi;
            Poly poly;
            Token pos;
        };
        std::vector<PieceEntry> entries;
        std::vector<std::pair<Rational, Rational>> atvals;
        while (true) {
            const Token& pt = peek();
            if (peek_ident("at")) {
                ++pos_;
                Rational x = parse_scalar();
                expect_sym(":");
                Rational v = parse_scalar();
                for (const auto& [px, pv] : atvals)
                    if (px == x) fail(pt, "duplicate point value at " + x.str());
                if (x < dom.lo || x > dom.hi)
                    fail(pt, "point value at " + x.str() + " outside the domain");
                atvals.emplace_back(std::move(x), std::move(v));
            } else {
                Interval iv = parse_interval();
                if (iv.closed) fail(pt, "piece intervals must be open");
                expect_sym(":");
                Poly p = parse_polyexpr();
                entries.push_back({std::move(iv.lo), std::move(iv.hi), std::move(p), pt});
            }
            if (accept_sym(";")) {
                if (peek_sym("}")) break;  // trailing separator
                continue;
            }
            break;
        }
        expect_sym("}");

        std::sort(entries.begin(), entries.end(),
                  [](const PieceEntry& a, const PieceEntry& b) { return a.lo < b.lo; });
        PiecewiseLit lit;
        lit.lo = dom.lo;
        lit.hi = dom.hi;
        Rational cursor = dom.lo;
        lit.breaks.push_back(dom.lo);
        for (const auto& e : entries) {
            if (e.lo != cursor)
                fail(e.pos, "pieces must tile the domain: expected a piece starting at " +
                                cursor.str());
            if (!(e.hi <= dom.hi)) fail(e.pos, "piece extends beyond the domain");
            lit.pieces.push_back(e.poly);
            lit.breaks.push_back(e.hi);
            cursor = e.hi;
        }
        if (entries.empty() || cursor != dom.hi)
            fail(ivt, "pieces must tile the domain up to " + dom.hi.str());
        lit.values.assign(lit.breaks.size(), Rational(0));
        std::vector<bool> seen(lit.breaks.size(), false);
        for (const auto& [x, v] : atvals) {
            auto it = std::find(lit.breaks.begin(), lit.breaks.end(), x);
            if (it == lit.breaks.end())
                fail(ivt, "point value at " + x.str() + " is not a breakpoint of the literal");
            size_t idx = static_cast<size_t>(it - lit.breaks.begin());
            lit.values[idx] = v;
            seen[idx] = true;
        }
        for (size_t i = 0; i < seen.size(); ++i)
            if (!seen[i])
                fail(ivt, "missing point value: add 'at " + lit.breaks[i].str() + ": ...'");
        return lit;
    }

    // polyexpr: x, scalars, +, -, scalar*, ^, parentheses; folded to a Poly.
    Poly parse_polyexpr() {
        Poly acc = parse_polyterm();
        while (peek_sym("+") || peek_sym("-")) {
            bool minus = peek_sym("-");
            ++pos_;
            Poly t = parse_polyterm();
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }

    Poly parse_polyterm() {
        if (peek_scalar_start()) {
            size_t save = pos_;
            Rational c = parse_scalar();
            if (accept_sym("*")) return parse_polyatom().scaled(c);
            pos_ = save;
        }
        return parse_polyatom();
    }

    Poly parse_polyatom() {
        const Token& t = peek();
        Poly base;
        if (peek_scalar_start()) {
            base = Poly::constant(parse_scalar());
        } else if (accept_sym("(")) {
            base = parse_polyexpr();
            expect_sym(")");
        } else if (peek_ident("x")) {
            ++pos_;
            base = Poly::identity();
        } else {
            fail(t, describe(t), {"'x'", "scalar", "'('"});
        }
        while (peek_sym("^")) {
            ++pos_;
            const Token& e = peek();
            if (e.kind != Token::Kind::Int) fail(e, describe(e), {"integer exponent"});
            long long k = std::stoll(e.text.size() > 6 ? "1000000" : e.text);
            if (k > 10000) fail(e, "exponent too large");
            ++pos_;
            base = base.pow(static_cast<unsigned>(k));
        }
        if (base.degree() > config::max_poly_degree())
            fail(t, "piece degree " + std::to_string(base.degree()) + " exceeds the cap " +
                        std::to_string(config::max_poly_degree()));
        return base;
    }

    // ------------------------------------------------------ top level

    std::pair<std::string, Expr> parse_binding() {
        expect_ident("let");
        const Token& nt = peek();
        if (nt.kind != Token::Kind::Ident) fail(nt, describe(nt), {"name"});
        if (reserved_words().count(nt.text))
            fail(nt, "reserved word '" + nt.text + "' cannot name a binding");
        if (defined_.count(nt.text)) fail(nt, "duplicate name '" + nt.text + "'");
        std::string name = nt.text;
        ++pos_;
        expect_sym("=");
        Expr e = parse_expr();
        expect_sym(";");
        defined_.insert(name);
        return {std::move(name), std::move(e)};
    }

    std::string parse_name_ref() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident || reserved_words().count(t.text))
            fail(t, describe(t), {"bound name"});
        if (!defined_.count(t.text)) fail(t, "unknown name '" + t.text + "'");
        ++pos_;
        return t.text;
    }

    // "d" is a keyword prefix: dalpha names the integrator alpha.
    std::string parse_dname() {
        const Token& t = peek();
        if (t.kind != Token::Kind::Ident || t.text.size() < 2 || t.text[0] != 'd')
            fail(t, describe(t), {"d<name> naming the integrator"});
        std::string name = t.text.substr(1);
        if (!defined_.count(name)) fail(t, "unknown name '" + name + "' in '" + t.text + "'");
        ++pos_;
        return name;
    }

    Query parse_query() {
        const Token& kw = peek();
        if (kw.kind != Token::Kind::Ident)
            fail(kw, describe(kw),
                 {"'let'", "'integrate'", "'compare'", "'parts'", "'decompose'", "'check'",
                  "'sums'"});
        Query q;
        if (kw.text == "integrate" || kw.text == "compare" || kw.text == "check") {
            ++pos_;
            q.kind = kw.text == "integrate" ? QueryKind::Integrate
                     : kw.text == "compare" ? QueryKind::Compare
                                            : QueryKind::Check;
            q.f = parse_name_ref();
            q.g = parse_dname();
        } else if (kw.text == "parts") {
            ++pos_;
            q.kind = QueryKind::Parts;
            q.f = parse_name_ref();
            q.g = parse_name_ref();
        } else if (kw.text == "decompose") {
            ++pos_;
            q.kind = QueryKind::Decompose;
            q.f = parse_name_ref();
        } else if (kw.text == "sums") {
            ++pos_;
            q.kind = QueryKind::Sums;
            const Token& pt = peek();
            if (peek_ident("mrs")) q.probe = ProbeKind::Mrs;
            else if (peek_ident("rps")) q.probe = ProbeKind::Rps;
            else if (peek_ident("rrs")) q.probe = ProbeKind::Rrs;
            else fail(pt, describe(pt), {"'mrs'", "'rps'", "'rrs'"});
            ++pos_;
            q.f = parse_name_ref();
            q.g = parse_dname();
            while (peek().kind == Token::Kind::Ident &&
                   (peek_ident("deltas") || peek_ident("base") || peek_ident("rounds"))) {
                const Token& at = peek();
                if (peek_ident("deltas")) {
                    if (q.probe == ProbeKind::Rps)
                        fail(at, "'deltas' applies to mrs and rrs probes only");
                    ++pos_;
                    expect_sym("(");
                    do {
                        const Token& st = peek();
                        Rational d = parse_scalar();
                        if (d.sign() <= 0) fail(st, "mesh targets must be positive");
                        q.deltas.push_back(std::move(d));
                    } while (accept_sym(","));
                    expect_sym(")");
                } else if (peek_ident("base")) {
                    if (q.probe != ProbeKind::Rps) fail(at, "'base' applies to the rps probe only");
                    ++pos_;
                    expect_sym("(");
                    do {
                        q.base.push_back(parse_scalar());
                    } while (accept_sym(","));
                    expect_sym(")");
                } else {
                    if (q.probe != ProbeKind::Rps)
                        fail(at, "'rounds' applies to the rps probe only");
                    ++pos_;
                    expect_sym("=");
                    const Token& rt = peek();
                    if (rt.kind != Token::Kind::Int) fail(rt, describe(rt), {"integer"});
                    long long r = std::stoll(rt.text.size() > 4 ? "10000" : rt.text);
                    if (r > 64) fail(rt, "round count too large");
                    ++pos_;
                    q.rounds = static_cast<int>(r);
                }
            }
        } else {
            fail(kw, describe(kw),
                 {"'let'", "'integrate'", "'compare'", "'parts'", "'decompose'", "'check'",
                  "'sums'"});
        }
        expect_ident("on");
        const Token& ivt = peek();
        Interval iv = parse_interval();
        if (!iv.closed) fail(ivt, "query intervals must be closed");
        q.lo = std::move(iv.lo);
        q.hi = std::move(iv.hi);
        expect_sym(";");
        return q;
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::set<std::string> defined_;
};

}  // namespace detail

inline Program parse(std::string_view text) {
    return detail::Parser(text).parse_program();
}

inline Expr parse_expression(std::string_view text) {
    return detail::Parser(text).parse_expression_only();
}

// ---------------------------------------------------------------------------
// Canonical printing

namespace detail {

inline std::string scalar_str(const Rational& r) { return r.str(); }

inline std::string xpow_str(int k) {
    return k == 1 ? "x" : "x^" + std::to_string(k);
}

// DSL form of a polynomial, e.g. "2*x^3 - x + 1" (grammar requires '*').
inline std::string poly_dsl_str(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    for (int k = p.degree(); k >= 0; --k) {
        Rational c = p.coeff(static_cast<size_t>(k));
        if (c.is_zero()) continue;
        Rational mag = abs(c);
        std::string body;
        if (k == 0) {
            body = mag.str();
        } else if (mag == Rational(1)) {
            body = xpow_str(k);
        } else {
            body = mag.str() + "*" + xpow_str(k);
        }
        if (out.empty()) {
            if (c.sign() < 0) {
                // canonical leading negative: "-1*x^k" keeps scalar*atom shape
                out = (k == 0) ? "-" + mag.str()
                               : (mag == Rational(1) ? "-1*" + xpow_str(k) : "-" + body);
            } else {
                out = body;
            }
        } else {
            out += (c.sign() < 0 ? " - " : " + ") + body;
        }
    }
    return out;
}

inline std::string expr_str(const Expr& e);

inline std::string atom_str(const Atom& a) {
    switch (a.kind) {
        case Atom::Kind::Scalar: return scalar_str(a.scalar);
        case Atom::Kind::X: return "x";
        case Atom::Kind::Name: return a.name;
        case Atom::Kind::Heaviside:
            return "heaviside(c=" + scalar_str(a.h_c) + ", at=" + scalar_str(a.h_at) + ")";
        case Atom::Kind::Dirichlet: return "dirichlet";
        case Atom::Kind::Piecewise: {
            const PiecewiseLit& p = *a.pw;
            std::string out = "piecewise on [" + p.lo.str() + "," + p.hi.str() + "] { ";
            for (size_t i = 0; i < p.breaks.size(); ++i) {
                if (i) out += "; ";
                out += "at " + p.breaks[i].str() + ": " + p.values[i].str();
                if (i < p.pieces.size())
                    out += "; (" + p.breaks[i].str() + "," + p.breaks[i + 1].str() +
                           "): " + poly_dsl_str(p.pieces[i]);
            }
            return out + " }";
        }
        case Atom::Kind::Sub: return "(" + expr_str(*a.sub) + ")";
        case Atom::Kind::Pow: return atom_str(*a.base) + "^" + std::to_string(a.exp);
    }
    return "?";
}

inline std::string term_str(const Term& t) {
    if (t.coef) return scalar_str(*t.coef) + "*" + atom_str(t.atom);
    return atom_str(t.atom);
}

inline std::string expr_str(const Expr& e) {
    std::string out;
    for (size_t i = 0; i < e.terms.size(); ++i) {
        const auto& [sign, term] = e.terms[i];
        if (i == 0) {
            out = term_str(term);
        } else {
            out += (sign < 0 ? " - " : " + ") + term_str(term);
        }
    }
    return out;
}

inline std::string interval_str(const Rational& lo, const Rational& hi) {
    return "[" + lo.str() + "," + hi.str() + "]";
}

inline std::string query_str(const Query& q) {
    std::string out;
    switch (q.kind) {
        case QueryKind::Integrate: out = "integrate " + q.f + " d" + q.g; break;
        case QueryKind::Compare: out = "compare " + q.f + " d" + q.g; break;
        case QueryKind::Parts: out = "parts " + q.f + " " + q.g; break;
        case QueryKind::Decompose: out = "decompose " + q.f; break;
        case QueryKind::Check: out = "check " + q.f + " d" + q.g; break;
        case QueryKind::Sums: {
            out = "sums ";
            out += q.probe == ProbeKind::Mrs ? "mrs" : (q.probe == ProbeKind::Rps ? "rps" : "rrs");
            out += " " + q.f + " d" + q.g;
            if (!q.deltas.empty()) {
                out += " deltas(";
                for (size_t i = 0; i < q.deltas.size(); ++i)
                    out += (i ? ", " : "") + q.deltas[i].str();
                out += ")";
            }
            if (!q.base.empty()) {
                out += " base(";
                for (size_t i = 0; i < q.base.size(); ++i) out += (i ? ", " : "") + q.base[i].str();
                out += ")";
            }
            if (q.rounds) out += " rounds=" + std::to_string(*q.rounds);
            break;
        }
    }
    return out + " on " + interval_str(q.lo, q.hi) + ";";
}

}  // namespace detail

inline std::string print(const Program& p) {
    std::string out;
    for (const auto& [name, e] : p.bindings)
        out += "let " + name + " = " + detail::expr_str(e) + ";\n";
    for (const Query& q : p.queries) out += detail::query_str(q) + "\n";
    return out;
}

}  // namespace stj::dsl
