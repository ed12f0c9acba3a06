#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace mso;
using namespace testutil;

namespace {

TypedGraph random_graph(std::mt19937& rng, int max_v, bool directed, bool loops) {
    std::uniform_int_distribution<int> nv(1, max_v);
    int n = nv(rng);
    TypedGraph g;
    g.directed = directed;
    g.allow_loops = loops;
    for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
    std::uniform_int_distribution<int> pick(0, n - 1), coin(0, 2);
    int e = 0;
    for (int i = 0; i < n; ++i)
        for (int j = loops ? i : i + 1; j < n; ++j) {
            if (coin(rng) != 0) continue;
            std::string id = "e" + std::to_string(e++);
            g.edges.push_back(id);
            g.endpoints[id] = {g.vertices[i], g.vertices[j]};
            if (directed) g.orientation[id] = 1;
        }
    std::uniform_int_distribution<int> nt(0, std::min(2, n));
    int t = nt(rng);
    std::set<int> used;
    while (static_cast<int>(g.terminals.size()) < t) {
        int v = pick(rng);
        if (used.insert(v).second) g.terminals.push_back(g.vertices[v]);
    }
    g.check_invariants();
    return g;
}

void check_roundtrip_generic(const TypedGraph& g) {
    Expression e = build_generic(g);
    CHECK_MESSAGE(is_isomorphic(evaluate(e), g, 64),
                  "generic build: " << print_graph(g));
}

void check_roundtrip_width(const TypedGraph& g, Decomposition::Kind kind, int k) {
    auto d = decompose_for_build(g, k, kind);
    REQUIRE_MESSAGE(d.has_value(), "no decomposition: " << print_graph(g));
    Decomposition nice = make_nice(*d, g);
    Expression e = kind == Decomposition::Tree ? build_treewidth(g, nice, k)
                                               : build_pathwidth(g, nice, k);
    CHECK_MESSAGE(is_isomorphic(evaluate(e), g, 64),
                  "width build: " << print_graph(g));
}

} // namespace

TEST_CASE("generic builder round-trips on fixed instances") {
    check_roundtrip_generic(path_graph(4, 2));
    check_roundtrip_generic(cycle_graph(5));
    check_roundtrip_generic(complete_graph(4));
    check_roundtrip_generic(loop_corpus_graph(true));
    TypedGraph iso; // no vertices, type 0
    check_roundtrip_generic(iso);
    TypedGraph directed = edge_graph(2, 1);
    check_roundtrip_generic(directed);
}

TEST_CASE("tree-width builder round-trips on fixed instances") {
    check_roundtrip_width(path_graph(5, 2), Decomposition::Tree, 1);
    check_roundtrip_width(cycle_graph(6), Decomposition::Tree, 2);
    check_roundtrip_width(complete_graph(4), Decomposition::Tree, 3);
    check_roundtrip_width(caterpillar_graph(3, 2), Decomposition::Tree, 1);
}

TEST_CASE("path-width builder round-trips on fixed instances") {
    check_roundtrip_width(path_graph(5, 1), Decomposition::Path, 1);
    check_roundtrip_width(cycle_graph(5), Decomposition::Path, 2);
    check_roundtrip_width(caterpillar_graph(3, 1), Decomposition::Path, 2);
}

TEST_CASE("random round-trips in all modes") {
    std::mt19937 rng(7);
    for (int i = 0; i < 60; ++i) {
        bool directed = i % 2, loops = (i / 2) % 2;
        TypedGraph g = random_graph(rng, 6, directed, loops);
        check_roundtrip_generic(g);
        int k = std::max(1, static_cast<int>(g.vertices.size()) - 1);
        check_roundtrip_width(g, Decomposition::Tree, k);
        check_roundtrip_width(g, Decomposition::Path, k);
    }
}

TEST_CASE("builders respect the profile") {
    TypedGraph p = path_graph(6, 1);
    auto dt = decompose_for_build(p, 1, Decomposition::Tree);
    REQUIRE(dt.has_value());
    Expression et = build_treewidth(p, make_nice(*dt, p), 1);
    SignatureProfile tw;
    tw.family = SignatureProfile::TreeWidth;
    tw.k = 1;
    tw.target_type = p.type();
    CHECK(validate(et, tw).empty());

    auto dp = decompose_for_build(p, 1, Decomposition::Path);
    REQUIRE(dp.has_value());
    Expression ep = build_pathwidth(p, make_nice(*dp, p), 1);
    SignatureProfile pw;
    pw.family = SignatureProfile::PathWidth;
    pw.k = 1;
    pw.target_type = p.type();
    CHECK(validate(ep, pw).empty());
}

TEST_CASE("path builder refuses join nodes") {
    TypedGraph star = caterpillar_graph(1, 3); // K1,3
    auto dt = decompose_for_build(star, 1, Decomposition::Tree);
    REQUIRE(dt.has_value());
    Decomposition nice = make_nice(*dt, star);
    bool has_join = false;
    for (auto k : classify(nice)) has_join = has_join || k == NodeKind::Join;
    if (has_join)
        CHECK_THROWS_AS(build_pathwidth(star, nice, 1), Error);
}

TEST_CASE("expression sizes grow linearly on paths") {
    std::vector<int> sizes = {10, 20, 40, 80};
    std::vector<int> nodes;
    for (int n : sizes) {
        TypedGraph g = path_graph(n);
        auto d = decompose_for_build(g, 1, Decomposition::Tree);
        REQUIRE(d.has_value());
        nodes.push_back(build_treewidth(g, make_nice(*d, g), 1).size());
    }
    for (size_t i = 1; i < sizes.size(); ++i) {
        double per1 = double(nodes[i - 1]) / sizes[i - 1];
        double per2 = double(nodes[i]) / sizes[i];
        CHECK(per2 < per1 * 2.0);
    }
}
