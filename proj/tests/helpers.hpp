#pragma once

// Shared fixtures: standard graph families, graph corpora, and sentence
// corpora used across the unit and acceptance suites.

#include <random>
#include <string>
#include <vector>

#include "msograph/automaton.hpp"
#include "msograph/builder.hpp"
#include "msograph/graph_io.hpp"

namespace testutil {

using namespace mso;

inline TypedGraph path_graph(int n, int terminals = 0) {
    TypedGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
    for (int i = 0; i + 1 < n; ++i) {
        std::string e = "e" + std::to_string(i);
        g.edges.push_back(e);
        g.endpoints[e] = {g.vertices[i], g.vertices[i + 1]};
    }
    for (int i = 0; i < terminals; ++i) g.terminals.push_back(g.vertices[i]);
    g.check_invariants();
    return g;
}

inline TypedGraph cycle_graph(int n, int terminals = 0) {
    TypedGraph g = path_graph(n, terminals);
    std::string e = "e" + std::to_string(n - 1);
    g.edges.push_back(e);
    g.endpoints[e] = {g.vertices[n - 1], g.vertices[0]};
    g.check_invariants();
    return g;
}

inline TypedGraph complete_graph(int n, int terminals = 0) {
    TypedGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back("v" + std::to_string(i));
    int e = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::string id = "e" + std::to_string(e++);
            g.edges.push_back(id);
            g.endpoints[id] = {g.vertices[i], g.vertices[j]};
        }
    for (int i = 0; i < terminals; ++i) g.terminals.push_back(g.vertices[i]);
    g.check_invariants();
    return g;
}

// A caterpillar: a spine path of `spine` vertices, each carrying `legs` leaves.
inline TypedGraph caterpillar_graph(int spine, int legs) {
    TypedGraph g = path_graph(spine);
    int e = spine - 1, v = spine;
    for (int i = 0; i < spine; ++i)
        for (int l = 0; l < legs; ++l) {
            std::string leaf = "v" + std::to_string(v++);
            std::string edge = "e" + std::to_string(e++);
            g.vertices.push_back(leaf);
            g.edges.push_back(edge);
            g.endpoints[edge] = {g.vertices[i], leaf};
        }
    g.check_invariants();
    return g;
}

inline TypedGraph loop_corpus_graph(bool with_loop) {
    TypedGraph g;
    g.allow_loops = true;
    g.vertices = {"a", "b"};
    g.edges = {"e0"};
    g.endpoints["e0"] = with_loop ? std::vector<std::string>{"a", "a"}
                                  : std::vector<std::string>{"a", "b"};
    g.check_invariants();
    return g;
}

// Every loop-free 2-uniform simple graph with <= max_v labeled vertices and
// <= max_e edges, each with every repeat-free terminal sequence of length
// <= max_type.
inline std::vector<TypedGraph> small_graph_corpus(int max_v, int max_e,
                                                  int max_type) {
    std::vector<TypedGraph> out;
    for (int n = 0; n <= max_v; ++n) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
        int np = static_cast<int>(pairs.size());
        for (unsigned mask = 0; mask < (1u << np); ++mask) {
            if (__builtin_popcount(mask) > max_e) continue;
            TypedGraph base;
            for (int i = 0; i < n; ++i)
                base.vertices.push_back("v" + std::to_string(i));
            int e = 0;
            for (int p = 0; p < np; ++p)
                if ((mask >> p) & 1) {
                    std::string id = "e" + std::to_string(e++);
                    base.edges.push_back(id);
                    base.endpoints[id] = {base.vertices[pairs[p].first],
                                          base.vertices[pairs[p].second]};
                }
            // terminal sequences without repeats
            std::vector<std::vector<int>> seqs = {{}};
            for (size_t s = 0; s < seqs.size(); ++s) {
                auto seq = seqs[s];
                TypedGraph g = base;
                for (int i : seq) g.terminals.push_back(base.vertices[i]);
                g.check_invariants();
                out.push_back(std::move(g));
                if (static_cast<int>(seq.size()) < std::min(max_type, n))
                    for (int v = 0; v < n; ++v) {
                        bool used = false;
                        for (int i : seq) used = used || i == v;
                        if (!used) {
                            auto next = seq;
                            next.push_back(v);
                            seqs.push_back(std::move(next));
                        }
                    }
            }
        }
    }
    return out;
}

// Circuit sentences: width <= 2, <= 3 variables, connector arity <= 2,
// moduli <= 3; quantified counting atoms included.
inline std::vector<std::string> circuit_sentence_corpus() {
    return {
        "sub(empty:V, empty:V)",
        "!sub(empty:V, empty:V)",
        "exists X:V sgl(X)",
        "forall X:V sgl(X)",
        "exists X:E sgl(X)",
        "exists X:V !sub(X, empty:V)",
        "forall X:V sub(empty:V, X)",
        "exists X:V (sgl(X) & exists Y:E conn2(Y, X, X))",
        "exists X:V exists Y:E conn2(Y, X, X)",
        "forall Y:E !conn2(Y, empty:V, empty:V)",
        "exists X:V card(X, 0, 2)",
        "exists X:V (card(X, 1, 2) & sgl(X))",
        "forall X:V card(X, 0, 3) -> sub(X, empty:V)",
        "exists X:E card(X, 1, 3)",
        "exists X:V (card(X, 0, 2) & exists Y:E conn2(Y, X, X))",
        "forall X:E (card(X, 0, 2) | card(X, 1, 2))",
        "exists X:V forall Y:V (sgl(Y) -> sub(Y, X))",
        "exists X:V (sgl(X) & forall Y:E !conn2(Y, X, X))",
        "forall X:V (sgl(X) -> exists Y:E conn2(Y, X, X))",
        "exists X:V exists Y:E (conn2(Y, X, X) & card(Y, 1, 2))",
        "sub(term{1}(empty:V), term{1,2}(empty:V))",
        "exists X:V (sub(term{1}(empty:V), X) & sgl(X))",
        "card(term{1,2}(empty:V), 0, 2)",
        "exists Y:E conn2(Y, term{1}(empty:V), term{2}(empty:V))",
    };
}

// Direct-language sentences, Card included.
inline std::vector<std::string> direct_sentence_corpus() {
    return {
        "forall x:v x = x",
        "exists x:v x = x",
        "exists x:v exists y:v !(x = y)",
        "forall x:v forall y:v x = y",
        "exists e:e exists x:v conn2(e, x, x)",
        "exists x:v exists e:e conn2(e, x, x)",
        "exists X:V forall x:v x in X",
        "exists X:V (card(X, 0, 2) & forall x:v x in X)",
        "exists X:V card(X, 1, 2)",
        "exists X:V card(X, 2, 3)",
        "forall X:V (card(X, 0, 2) | card(X, 1, 2))",
        "exists X:E forall e:e e in X",
        "exists x:v forall X:V (x in X | !(x in X))",
        "forall x:v exists y:v (x = y)",
        "exists x:v exists y:v exists e:e conn2(e, x, y)",
        "forall e:e exists x:v exists y:v conn2(e, x, y)",
        "exists X:V exists x:v (x in X & forall y:v (y in X -> y = x))",
        "forall x:v forall y:v (exists e:e conn2(e, x, y) -> exists f:e conn2(f, y, x))",
        "exists X:V (forall x:v x in X) & exists Y:E (forall e:e e in Y)",
        "forall X:E exists Y:E sub(X, Y)",
        "exists X:V exists x:v (x in X) | forall x:v x = x",
    };
}

// The two-colourability sentence: a set X with no edge inside X nor inside
// its complement (certified by a covering disjoint Y).
inline std::string two_colourable_sentence() {
    return "exists X:V exists Y:V ("
           "  (forall Z:V (sgl(Z) -> (sub(Z, X) | sub(Z, Y))))"
           "  & !(exists F:E conn2(F, X, X))"
           "  & !(exists F:E conn2(F, Y, Y))"
           "  & (forall Z:V ((sub(Z, X) & sub(Z, Y)) -> sub(Z, empty:V))))";
}

inline std::string three_colourable_sentence() {
    return "exists A:V exists B:V exists C:V ("
           "  (forall Z:V (sgl(Z) -> (sub(Z, A) | sub(Z, B) | sub(Z, C))))"
           "  & !(exists F:E conn2(F, A, A))"
           "  & !(exists F:E conn2(F, B, B))"
           "  & !(exists F:E conn2(F, C, C)))";
}

inline std::string has_loop_sentence() {
    return "exists F:E exists Z:V (sgl(Z) & conn2(F, Z, Z))";
}

inline std::string triangle_sentence() {
    return "exists A:V exists B:V exists C:V ("
           "  sgl(A) & sgl(B) & sgl(C)"
           "  & !sub(A, B) & !sub(B, C) & !sub(A, C)"
           "  & (exists F:E conn2(F, A, B))"
           "  & (exists F:E conn2(F, B, C))"
           "  & (exists F:E conn2(F, A, C)))";
}

inline std::string edge_exists_sentence() {
    return "exists F:E !sub(F, empty:E)";
}

} // namespace testutil
