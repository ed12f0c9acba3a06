#include <doctest.h>

#include "helpers.hpp"

using namespace mso;
using namespace testutil;

TEST_CASE("symbol typing") {
    CHECK(FnSymbol::vertex().out_type() == 1);
    CHECK(FnSymbol::edge(3).out_type() == 3);
    CHECK(FnSymbol::loop({1, 1, 2}).out_type() == 2);
    CHECK(FnSymbol::sum(2, 3).in_types() == std::vector<int>{2, 3});
    CHECK(FnSymbol::sum(2, 3).out_type() == 5);
    CHECK(FnSymbol::redef({2, 1}, 2).in_types() == std::vector<int>{2});
    CHECK(FnSymbol::redef({}, 3).out_type() == 0);
    CHECK(FnSymbol::twine(2, 2, {1}, 3).out_type() == 3);
    CHECK(FnSymbol::sprout(2).out_type() == 3);
    CHECK(FnSymbol::bloom(3, 2).out_type() == 3);
    CHECK_THROWS_AS(FnSymbol::fuse(1, 3, 2), Error);
    CHECK_THROWS_AS(FnSymbol::twine(2, 1, {2}, 1), Error);

    // names are canonical
    CHECK(FnSymbol::vertex().name() == FnSymbol::vertex().name());
    CHECK(FnSymbol::edge(2).name() != FnSymbol::edge(2, 1).name());
}

TEST_CASE("expression parse/print round-trip") {
    std::vector<std::string> exprs = {
        "(v)",
        "(e 2)",
        "(e 2 1)",
        "(loop \"1 1 2\")",
        "(sum (v) (v))",
        "(redef {1:2,2:1} (e 2))",
        "(fuse 1 2 (sum (v) (v)))",
        "(twine 2 {1,2} (e 2) (e 2))",
        "(sprout (v))",
        "(bloom 2 (sprout (v)))",
        "(bloom 1 \"1 1\" (v))",
    };
    for (const auto& s : exprs) {
        Expression e = parse_expression(s);
        Expression again = parse_expression(print_expression(e));
        CHECK(print_expression(e) == print_expression(again));
        CHECK(canonical_equal(evaluate(e), evaluate(again)));
    }
    CHECK_THROWS_AS(parse_expression("(sum (v)"), Error);
    CHECK_THROWS_AS(parse_expression("(frob 1)"), Error);
}

TEST_CASE("evaluation matches the basic operations") {
    Expression e = parse_expression("(fuse 1 2 (sum (v) (v)))");
    TypedGraph g = evaluate(e);
    CHECK(g.vertices.size() == 1);
    CHECK(g.type() == 2);

    // a two-edge path via twine
    Expression p = parse_expression("(redef {1:1,2:3} (twine 1 {1} (redef {1:2} (e 2)) (e 2)))");
    TypedGraph pg = evaluate(p);
    CHECK(pg.vertices.size() == 3);
    CHECK(pg.edges.size() == 2);
}

TEST_CASE("validation against profiles") {
    SignatureProfile tw;
    tw.family = SignatureProfile::TreeWidth;
    tw.k = 1;
    CHECK(validate(parse_expression("(e 2)"), tw).empty());
    CHECK_FALSE(validate(parse_expression("(e 3)"), tw).empty());
    CHECK_FALSE(validate(parse_expression("(sprout (v))"), tw).empty());

    SignatureProfile pw;
    pw.family = SignatureProfile::PathWidth;
    pw.k = 1;
    CHECK(validate(parse_expression("(bloom 2 (sprout (v)))"), pw).empty());
    CHECK_FALSE(validate(parse_expression("(twine 1 {1} (v) (v))"), pw).empty());
    // repeated bloom words need the loops flag
    CHECK_FALSE(validate(parse_expression("(bloom 1 \"1 1\" (v))"), pw).empty());
    pw.loops = true;
    CHECK(validate(parse_expression("(bloom 1 \"1 1\" (v))"), pw).empty());
}

TEST_CASE("alphabet is finite, admissible and deduplicated") {
    SignatureProfile tw;
    tw.family = SignatureProfile::TreeWidth;
    tw.k = 1;
    auto a = tw.alphabet();
    CHECK_FALSE(a.empty());
    std::set<std::string> names;
    for (const auto& f : a) {
        CHECK(tw.admits(f));
        CHECK(names.insert(f.name()).second);
    }

    SignatureProfile pw;
    pw.family = SignatureProfile::PathWidth;
    pw.k = 1;
    for (const auto& f : pw.alphabet()) CHECK(pw.admits(f));

    SignatureProfile gen;
    CHECK_THROWS_AS(gen.alphabet(), Error);
}

TEST_CASE("expansions agree with the composite semantics") {
    std::vector<FnSymbol> comps = {
        FnSymbol::twine(2, 2, {1, 2}, 2),
        FnSymbol::twine(1, 2, {1}, 2),
        FnSymbol::twine(2, 1, {}, 3),
        FnSymbol::sprout(1),
        FnSymbol::sprout(0),
        FnSymbol::bloom(2, 2),
        FnSymbol::bloom(3, 2, {2, 1}),
        FnSymbol::bloom(1, 1, {1, 1}),
    };
    for (const auto& f : comps) {
        Expansion ex = expand_symbol(f);
        CHECK(static_cast<int>(ex.hole_nodes.size()) == f.arity());
        // graft concrete arguments and compare against direct evaluation
        Expression direct, via;
        std::vector<int> dargs, vargs;
        auto ins = f.in_types();
        for (int t : ins) {
            TypedGraph arg = t == 0 ? redefine(vertex_graph(), {}) : edge_graph(std::max(t, 1));
            if (t == 1) arg = vertex_graph();
            (void)arg;
            // build an argument expression of type t
            std::string s = t == 0   ? "(redef {} (v))"
                            : t == 1 ? "(v)"
                                     : "(e " + std::to_string(t) + ")";
            Expression a = parse_expression(s);
            int base = direct.size();
            for (const auto& nd : a.nodes) {
                std::vector<int> kk;
                for (int k : nd.kids) kk.push_back(k + base);
                direct.add(nd.sym, kk);
            }
            dargs.push_back(a.root + base);
            int vbase = via.size();
            for (const auto& nd : a.nodes) {
                std::vector<int> kk;
                for (int k : nd.kids) kk.push_back(k + vbase);
                via.add(nd.sym, kk);
            }
            vargs.push_back(a.root + vbase);
        }
        direct.root = direct.add(f, dargs);
        via.root = graft(via, ex, vargs);
        bool need_loops = evaluate(direct).allow_loops;
        (void)need_loops;
        CHECK_MESSAGE(canonical_equal(evaluate(direct), evaluate(via)),
                      "composite " << f.name());
    }
}

TEST_CASE("locality") {
    Expression e = parse_expression("(redef {1:1} (sum (v) (redef {} (v))))");
    auto loc = locality(e);
    CHECK(loc.count(0));
    CHECK(loc.count(1));
    CHECK(loc.count(2));
    CHECK_FALSE(loc.count(3));
}

TEST_CASE("file round-trip") {
    Expression e = parse_expression("(twine 2 {1,2} (e 2) (e 2))");
    write_expression(e, "expr_roundtrip.tmp");
    Expression back = read_expression("expr_roundtrip.tmp");
    CHECK(print_expression(e) == print_expression(back));
}
