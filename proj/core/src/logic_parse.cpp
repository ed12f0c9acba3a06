#include <cctype>
#include <optional>
#include <type_traits>

#include "msograph/logic.hpp"

namespace mso {

namespace {

struct Token {
    enum Kind { Ident, Int, Punct, End };
    Kind kind;
    std::string text;
    size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : src_(s) { advance(); }
    const Token& cur() const { return cur_; }
    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_])))
            ++i_;
        cur_.pos = i_;
        if (i_ >= src_.size()) {
            cur_ = {Token::End, "", i_};
            return;
        }
        char c = src_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i_;
            while (j < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_' ||
                    src_[j] == '\''))
                ++j;
            cur_ = {Token::Ident, src_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i_;
            while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j])))
                ++j;
            cur_ = {Token::Int, src_.substr(i_, j - i_), i_};
            i_ = j;
            return;
        }
        if (c == '-' && i_ + 1 < src_.size() && src_[i_ + 1] == '>') {
            cur_ = {Token::Punct, "->", i_};
            i_ += 2;
            return;
        }
        if (c == '<' && i_ + 2 < src_.size() && src_[i_ + 1] == '-' && src_[i_ + 2] == '>') {
            cur_ = {Token::Punct, "<->", i_};
            i_ += 3;
            return;
        }
        cur_ = {Token::Punct, std::string(1, c), i_};
        ++i_;
    }

private:
    const std::string& src_;
    size_t i_ = 0;
    Token cur_{Token::End, "", 0};
};

[[noreturn]] void fail(const Token& t, const std::string& what) {
    throw Error(ErrorCode::SyntaxError,
                "at offset " + std::to_string(t.pos) + ": " + what +
                    (t.kind == Token::End ? " (found end of input)"
                                          : " (found \"" + t.text + "\")"));
}

// A term as parsed, before sorts are fully known: unannotated `empty` and
// unseen variables adopt the sort expected by the enclosing atom.
struct PTerm {
    enum Kind { Var, Empty, TermOf };
    Kind kind;
    std::string name;
    std::optional<Sort> sort;
    std::set<int> K;
    std::shared_ptr<PTerm> base;
};
using PTermPtr = std::shared_ptr<PTerm>;

template <typename FormulaPtr> struct Builder;

// Parses both languages; `direct` selects element atoms (=, in) and makes
// element sorts legal in binders.
class Parser {
public:
    Parser(const std::string& text, bool direct) : lex_(text), direct_(direct) {}

    CFormulaPtr run_circuit() {
        auto f = formula_c();
        if (lex_.cur().kind != Token::End)
            fail(lex_.cur(), "trailing input");
        return f;
    }

    DFormulaPtr run_direct() {
        auto f = formula_d();
        if (lex_.cur().kind != Token::End)
            fail(lex_.cur(), "trailing input");
        return f;
    }

private:
    Lexer lex_;
    bool direct_;
    std::vector<std::pair<std::string, Sort>> env_;
    std::map<std::string, Sort> free_;

    bool at_punct(const std::string& p) {
        return lex_.cur().kind == Token::Punct && lex_.cur().text == p;
    }
    bool at_ident(const std::string& w) {
        return lex_.cur().kind == Token::Ident && lex_.cur().text == w;
    }
    void expect_punct(const std::string& p) {
        if (!at_punct(p))
            fail(lex_.cur(), "expected \"" + p + "\"");
        lex_.advance();
    }
    int expect_int() {
        if (lex_.cur().kind != Token::Int)
            fail(lex_.cur(), "expected a number");
        int v = std::stoi(lex_.cur().text);
        lex_.advance();
        return v;
    }
    std::string expect_ident() {
        if (lex_.cur().kind != Token::Ident)
            fail(lex_.cur(), "expected an identifier");
        std::string s = lex_.cur().text;
        lex_.advance();
        return s;
    }

    Sort parse_sort() {
        Token t = lex_.cur();
        std::string s = expect_ident();
        if (s == "V") return Sort::VertexSet;
        if (s == "E") return Sort::EdgeSet;
        if (s == "v") {
            if (!direct_) fail(t, "element sorts belong to the element language");
            return Sort::VertexElem;
        }
        if (s == "e") {
            if (!direct_) fail(t, "element sorts belong to the element language");
            return Sort::EdgeElem;
        }
        fail(t, "expected a sort (V, E, v, e)");
    }

    std::optional<Sort> lookup(const std::string& name) {
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
            if (it->first == name)
                return it->second;
        auto f = free_.find(name);
        if (f != free_.end())
            return f->second;
        return std::nullopt;
    }

    // ---- shared connective layer ------------------------------------------
    template <typename F>
    auto formula_any(F&& atom) -> decltype(atom()) {
        auto lhs = or_level(atom);
        if (at_punct("->")) {
            lex_.advance();
            auto rhs = formula_any(atom);
            return std::remove_reference_t<decltype(*lhs)>::implies(lhs, rhs);
        }
        if (at_punct("<->")) {
            lex_.advance();
            auto rhs = formula_any(atom);
            using T = std::remove_reference_t<decltype(*lhs)>;
            return T::land({T::implies(lhs, rhs), T::implies(rhs, lhs)});
        }
        return lhs;
    }

    template <typename F>
    auto or_level(F&& atom) -> decltype(atom()) {
        auto lhs = and_level(atom);
        while (at_punct("|")) {
            lex_.advance();
            auto rhs = and_level(atom);
            lhs = std::remove_reference_t<decltype(*lhs)>::lor(lhs, rhs);
        }
        return lhs;
    }

    template <typename F>
    auto and_level(F&& atom) -> decltype(atom()) {
        auto lhs = unary_level(atom);
        using T = std::remove_reference_t<decltype(*lhs)>;
        std::vector<decltype(lhs)> ks = {lhs};
        while (at_punct("&")) {
            lex_.advance();
            ks.push_back(unary_level(atom));
        }
        return ks.size() == 1 ? lhs : T::land(std::move(ks));
    }

    template <typename F>
    auto unary_level(F&& atom) -> decltype(atom()) {
        using T = std::remove_reference_t<decltype(*atom())>;
        if (at_punct("!")) {
            lex_.advance();
            return T::lnot(unary_level(atom));
        }
        if (at_ident("forall") || at_ident("exists")) {
            bool uni = lex_.cur().text == "forall";
            lex_.advance();
            std::string v = expect_ident();
            expect_punct(":");
            Sort s = parse_sort();
            expect_punct(".");
            env_.emplace_back(v, s);
            auto body = formula_any(atom);
            env_.pop_back();
            return uni ? T::forall(v, s, body) : T::exists(v, s, body);
        }
        if (at_punct("(")) {
            lex_.advance();
            auto f = formula_any(atom);
            expect_punct(")");
            return f;
        }
        return atom();
    }

    CFormulaPtr formula_c() {
        return formula_any([this] { return atom_c(); });
    }
    DFormulaPtr formula_d() {
        return formula_any([this] { return atom_d(); });
    }

    // ---- terms -------------------------------------------------------------
    PTermPtr parse_pterm() {
        Token t = lex_.cur();
        if (at_ident("empty")) {
            lex_.advance();
            auto p = std::make_shared<PTerm>();
            p->kind = PTerm::Empty;
            if (at_punct(":")) {
                lex_.advance();
                Sort s = parse_sort();
                if (!is_set_sort(s))
                    fail(t, "empty is set-sorted");
                p->sort = s;
            }
            return p;
        }
        if (at_ident("term")) {
            lex_.advance();
            expect_punct("{");
            std::set<int> K;
            if (!at_punct("}")) {
                K.insert(expect_int());
                while (at_punct(",")) {
                    lex_.advance();
                    K.insert(expect_int());
                }
            }
            expect_punct("}");
            expect_punct("(");
            auto base = parse_pterm();
            expect_punct(")");
            auto p = std::make_shared<PTerm>();
            p->kind = PTerm::TermOf;
            p->K = std::move(K);
            p->base = std::move(base);
            p->sort = p->base->sort;
            return p;
        }
        if (lex_.cur().kind != Token::Ident)
            fail(t, "expected a term");
        auto p = std::make_shared<PTerm>();
        p->kind = PTerm::Var;
        p->name = expect_ident();
        if (auto s = lookup(p->name))
            p->sort = *s;
        if (at_punct(":")) {
            lex_.advance();
            Sort s = parse_sort();
            if (p->sort && *p->sort != s)
                throw Error(ErrorCode::SortError,
                            "variable " + p->name + " annotated " + sort_name(s) +
                                " but has sort " + sort_name(*p->sort));
            p->sort = s;
        }
        return p;
    }

    CTermPtr resolve(const PTermPtr& p, Sort expected) {
        switch (p->kind) {
        case PTerm::Empty: {
            Sort s = p->sort.value_or(expected);
            return CTerm::empty(s);
        }
        case PTerm::Var: {
            Sort s = p->sort.value_or(expected);
            if (!lookup(p->name))
                free_[p->name] = s;
            else if (p->sort && *p->sort != s && is_set_sort(s)) {
                // annotation wins; mismatch against expectation surfaces below
            }
            if (s != expected && is_set_sort(expected))
                throw Error(ErrorCode::SortError,
                            "term " + p->name + " has sort " + sort_name(s) +
                                " where " + sort_name(expected) + " was expected");
            return CTerm::var(p->name, s);
        }
        case PTerm::TermOf: {
            CTermPtr base = resolve(p->base, expected);
            return CTerm::term_of(p->K, base);
        }
        }
        fail(lex_.cur(), "unreachable term kind");
    }

    // ---- set-language atoms -------------------------------------------------
    CFormulaPtr atom_c() {
        Token t = lex_.cur();
        if (lex_.cur().kind != Token::Ident)
            fail(t, "expected an atom");
        std::string head = lex_.cur().text;
        if (head == "sub") {
            lex_.advance();
            expect_punct("(");
            auto a = parse_pterm();
            expect_punct(",");
            auto b = parse_pterm();
            expect_punct(")");
            Sort s = a->sort ? *a->sort : b->sort.value_or(Sort::VertexSet);
            return CFormula::sub(resolve(a, s), resolve(b, s));
        }
        if (head == "sgl") {
            lex_.advance();
            expect_punct("(");
            auto a = parse_pterm();
            expect_punct(")");
            return CFormula::sgl(resolve(a, a->sort.value_or(Sort::VertexSet)));
        }
        if (head == "card") {
            lex_.advance();
            expect_punct("(");
            auto a = parse_pterm();
            expect_punct(",");
            int r = expect_int();
            expect_punct(",");
            int m = expect_int();
            expect_punct(")");
            try {
                return CFormula::card(resolve(a, a->sort.value_or(Sort::VertexSet)),
                                      r, m);
            } catch (const Error& e) {
                fail(t, e.what());
            }
        }
        if (head.rfind("conn", 0) == 0 && head.size() > 4) {
            int n = 0;
            for (size_t i = 4; i < head.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(head[i])))
                    fail(t, "expected an atom");
                n = n * 10 + (head[i] - '0');
            }
            lex_.advance();
            expect_punct("(");
            std::vector<PTermPtr> ps = {parse_pterm()};
            while (at_punct(",")) {
                lex_.advance();
                ps.push_back(parse_pterm());
            }
            expect_punct(")");
            if (static_cast<int>(ps.size()) != n + 1)
                fail(t, "conn" + std::to_string(n) + " takes " +
                            std::to_string(n + 1) + " arguments, got " +
                            std::to_string(ps.size()));
            std::vector<CTermPtr> ts;
            ts.push_back(resolve(ps[0], Sort::EdgeSet));
            for (size_t i = 1; i < ps.size(); ++i)
                ts.push_back(resolve(ps[i], Sort::VertexSet));
            try {
                return CFormula::conn(std::move(ts));
            } catch (const Error& e) {
                fail(t, e.what());
            }
        }
        fail(t, "expected an atom");
    }

    // ---- element-language atoms --------------------------------------------
    struct DVar {
        std::string name;
        std::optional<Sort> sort;
    };

    DVar parse_dvar() {
        Token t = lex_.cur();
        DVar v;
        v.name = expect_ident();
        if (v.name == "empty" || v.name == "term")
            fail(t, "set-builder terms belong to the set language");
        if (auto s = lookup(v.name))
            v.sort = *s;
        if (at_punct(":")) {
            lex_.advance();
            Sort s = parse_sort();
            if (v.sort && *v.sort != s)
                throw Error(ErrorCode::SortError, "variable " + v.name +
                                                      " annotated inconsistently");
            v.sort = s;
        }
        return v;
    }

    std::pair<std::string, Sort> resolve_d(const DVar& v, Sort fallback) {
        Sort s = v.sort.value_or(fallback);
        if (!lookup(v.name))
            free_[v.name] = s;
        return {v.name, s};
    }

    DFormulaPtr atom_d() {
        Token t = lex_.cur();
        if (lex_.cur().kind != Token::Ident)
            fail(t, "expected an atom");
        std::string head = lex_.cur().text;
        if (head == "in") {
            lex_.advance();
            expect_punct("(");
            auto x = parse_dvar();
            expect_punct(",");
            auto S = parse_dvar();
            expect_punct(")");
            Sort ss = S.sort.value_or(
                x.sort ? set_sort_of(*x.sort) : Sort::VertexSet);
            auto [sn, ssr] = resolve_d(S, ss);
            auto [xn, xs] = resolve_d(x, element_sort_of(ssr));
            try {
                return DFormula::member(xn, xs, sn, ssr);
            } catch (const Error& e) {
                fail(t, e.what());
            }
        }
        if (head == "card") {
            lex_.advance();
            expect_punct("(");
            auto S = parse_dvar();
            expect_punct(",");
            int r = expect_int();
            expect_punct(",");
            int m = expect_int();
            expect_punct(")");
            auto [sn, ss] = resolve_d(S, Sort::VertexSet);
            try {
                return DFormula::card(sn, ss, r, m);
            } catch (const Error& e) {
                fail(t, e.what());
            }
        }
        if (head.rfind("conn", 0) == 0 && head.size() > 4) {
            int n = 0;
            for (size_t i = 4; i < head.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(head[i])))
                    fail(t, "expected an atom");
                n = n * 10 + (head[i] - '0');
            }
            lex_.advance();
            expect_punct("(");
            std::vector<DVar> vs = {parse_dvar()};
            while (at_punct(",")) {
                lex_.advance();
                vs.push_back(parse_dvar());
            }
            expect_punct(")");
            if (static_cast<int>(vs.size()) != n + 1)
                fail(t, "conn" + std::to_string(n) + " takes " +
                            std::to_string(n + 1) + " arguments, got " +
                            std::to_string(vs.size()));
            std::vector<std::string> names;
            std::vector<Sort> sorts;
            for (size_t i = 0; i < vs.size(); ++i) {
                auto [nm, s] =
                    resolve_d(vs[i], i == 0 ? Sort::EdgeElem : Sort::VertexElem);
                names.push_back(nm);
                sorts.push_back(s);
            }
            try {
                return DFormula::conn(std::move(names), std::move(sorts));
            } catch (const Error& e) {
                fail(t, e.what());
            }
        }
        // bare identifier: must be the left side of an equality
        auto x = parse_dvar();
        if (!at_punct("="))
            fail(lex_.cur(), "expected \"=\" after a variable");
        lex_.advance();
        auto y = parse_dvar();
        Sort s = x.sort ? *x.sort : y.sort.value_or(Sort::VertexElem);
        auto [xn, xs] = resolve_d(x, s);
        auto [yn, ys] = resolve_d(y, xs);
        try {
            return DFormula::eq(xn, xs, yn, ys);
        } catch (const Error& e) {
            fail(t, e.what());
        }
    }
};

} // namespace

CFormulaPtr parse_circuit(const std::string& text) {
    return Parser(text, false).run_circuit();
}

DFormulaPtr parse_direct(const std::string& text) {
    return Parser(text, true).run_direct();
}

} // namespace mso
