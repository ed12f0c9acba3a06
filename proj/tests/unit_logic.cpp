#include <doctest.h>

#include "helpers.hpp"

using namespace mso;
using namespace testutil;

TEST_CASE("circuit parse/print round-trip") {
    for (const auto& s : circuit_sentence_corpus()) {
        CFormulaPtr f = parse_circuit(s);
        CFormulaPtr again = parse_circuit(print_circuit(f));
        CHECK(formula_equal(f, again));
    }
}

TEST_CASE("direct parse/print round-trip") {
    for (const auto& s : direct_sentence_corpus()) {
        DFormulaPtr f = parse_direct(s);
        DFormulaPtr again = parse_direct(print_direct(f));
        CHECK(print_direct(f) == print_direct(again));
    }
}

TEST_CASE("sugar desugars to the core connectives") {
    // or / implies / iff / exists all reduce to Not, And, Forall
    CFormulaPtr f = parse_circuit("exists X:V (sgl(X) | card(X, 0, 2))");
    std::function<void(const CFormulaPtr&)> walk = [&](const CFormulaPtr& g) {
        CHECK(g->kind != CFormula::Kind(-1));
        bool core = g->kind == CFormula::Sub || g->kind == CFormula::Sgl ||
                    g->kind == CFormula::Conn || g->kind == CFormula::Card ||
                    g->kind == CFormula::Not || g->kind == CFormula::And ||
                    g->kind == CFormula::Forall;
        CHECK(core);
        for (const auto& k : g->kids) walk(k);
    };
    walk(f);
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_WITH_AS(parse_circuit("sub(empty:V"), doctest::Contains("offset"),
                         Error);
    CHECK_THROWS_AS(parse_circuit("conn2(S:E, X:V)"), Error); // arity mismatch
    CHECK_THROWS_AS(parse_circuit("sub(X:E, Y:V)"), Error);   // sort clash
    CHECK_THROWS_AS(parse_direct("x:v in y:v"), Error);       // member needs a set
}

TEST_CASE("metrics") {
    CFormulaPtr f = parse_circuit(
        "exists X:V forall Y:E (conn2(Y, X, X) | card(X, 1, 3))");
    FormulaMetrics m = metrics(f);
    CHECK(m.width == 2);
    CHECK(m.var_count == 2);
    CHECK(m.max_conn_arity == 2);
    CHECK(m.max_card_modulus == 3);
    CHECK(m.free_vars.empty());

    FormulaMetrics fm = metrics(parse_circuit("sub(X:V, Y:V)"));
    CHECK(fm.free_vars.size() == 2);
}

TEST_CASE("brute-force evaluation on known instances") {
    TypedGraph p3 = path_graph(3);
    CHECK(eval_circuit(parse_circuit("exists X:V sgl(X)"), p3, {}));
    CHECK(eval_circuit(parse_circuit("exists X:E sgl(X)"), p3, {}));
    CHECK_FALSE(eval_circuit(parse_circuit("forall X:V sgl(X)"), p3, {}));
    // p3 has 3 vertices: a full set has odd size
    CHECK(eval_circuit(
        parse_circuit("exists X:V (card(X, 1, 2) & forall Y:V sub(Y, X))"), p3,
        {}));

    // assignment-driven evaluation
    Assignment a;
    a.sets["X"] = {"v0", "v1"};
    CHECK(eval_circuit(parse_circuit("card(X:V, 0, 2)"), p3, a));
    CHECK_FALSE(eval_circuit(parse_circuit("card(X:V, 1, 2)"), p3, a));
    CHECK_THROWS_AS(eval_circuit(parse_circuit("sgl(Z:V)"), p3, {}), Error);

    // terminals enter through term{K}
    TypedGraph t = path_graph(3, 2);
    CHECK(eval_circuit(parse_circuit("card(term{1,2}(empty:V), 0, 2)"), t, {}));
    CHECK(eval_circuit(parse_circuit("sgl(term{1}(empty:V))"), t, {}));
}

TEST_CASE("evaluation budget") {
    TypedGraph big = path_graph(12); // 12 vertices + 11 edges > 18
    CHECK_THROWS_AS(eval_circuit(parse_circuit("exists X:V sgl(X)"), big, {}),
                    Error);
    CHECK_NOTHROW(eval_circuit(parse_circuit("exists X:V sgl(X)"), big, {}, 64));
}

TEST_CASE("translation agrees with direct semantics") {
    auto corpus = small_graph_corpus(3, 3, 2);
    for (const auto& s : direct_sentence_corpus()) {
        DFormulaPtr d = parse_direct(s);
        CFormulaPtr c = translate(d);
        for (const auto& g : corpus) {
            if (g.vertices.empty()) continue; // element quantifiers need vertices
            CHECK_MESSAGE(eval_direct(d, g, {}) == eval_circuit(c, g, {}),
                          "sentence: " << s << " graph: " << print_graph(g));
        }
    }
}

TEST_CASE("translation of equality is mutual containment") {
    CFormulaPtr c = translate(parse_direct("forall x:v forall y:v x = y"));
    std::string printed = print_circuit(c);
    CHECK(printed.find("sub(") != std::string::npos);
    CHECK(printed.find("=") == std::string::npos);
}

TEST_CASE("normalization") {
    // nested term{..} collapses; indices above the type are pruned
    CFormulaPtr f = parse_circuit("sub(term{2}(term{1}(X:V)), X:V)");
    CFormulaPtr n1 = normalize(f, 2);
    CHECK(print_circuit(n1) == print_circuit(parse_circuit(
                                   "sub(term{1,2}(X:V), X:V)")));
    CFormulaPtr n0 = normalize(f, 0);
    CHECK(print_circuit(n0) == print_circuit(parse_circuit("sub(X:V, X:V)")));

    // double negation and conjunction ordering
    CFormulaPtr g = parse_circuit("!!sgl(X:V) & sgl(X:V) & sgl(Y:V)");
    CFormulaPtr h = parse_circuit("sgl(Y:V) & sgl(X:V)");
    CHECK(print_circuit(normalize(g, 0)) == print_circuit(normalize(h, 0)));

    // normalization preserves truth on every graph in the small corpus
    for (const auto& s : circuit_sentence_corpus()) {
        CFormulaPtr phi = parse_circuit(s);
        for (const auto& gg : small_graph_corpus(3, 2, 2)) {
            int n = gg.type();
            CHECK(eval_circuit(phi, gg, {}) ==
                  eval_circuit(normalize(phi, n), gg, {}));
        }
    }
}

TEST_CASE("formula order is total and consistent") {
    auto corpus = circuit_sentence_corpus();
    for (const auto& a : corpus)
        for (const auto& b : corpus) {
            CFormulaPtr fa = parse_circuit(a), fb = parse_circuit(b);
            bool lt = formula_less(fa, fb), gt = formula_less(fb, fa);
            CHECK_FALSE((lt && gt));
            CHECK(formula_equal(fa, fb) == (!lt && !gt));
        }
}
