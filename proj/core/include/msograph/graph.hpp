#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "msograph/errors.hpp"

namespace mso {

// A finite typed hypergraph: vertices, edges with ordered endpoint words,
// optional orientation splits, and a sequence of terminal vertices whose
// length is the graph's type. Values are immutable by convention: every
// operation returns a fresh graph.
struct TypedGraph {
    bool allow_loops = false; // repeated endpoints permitted in an edge word
    bool directed = false;    // orientation split present on every edge

    std::vector<std::string> vertices; // nonempty, ordered
    std::vector<std::string> edges;    // ordered, ids disjoint from vertices
    std::map<std::string, std::vector<std::string>> endpoints; // edge -> word
    std::map<std::string, int> orientation; // edge -> split, 0 < s < |word|
    std::vector<std::string> terminals;     // t(1..n), repeats allowed

    int type() const { return static_cast<int>(terminals.size()); }

    bool has_vertex(const std::string& v) const;
    bool has_edge(const std::string& e) const;

    // Throws on any violated structural invariant.
    void check_invariants() const;
};

// Trivial graphs (nullary constants of the algebra).
TypedGraph vertex_graph();
TypedGraph edge_graph(int n, std::optional<int> split = std::nullopt);
// One edge visiting the i-th of n vertices per the word; every value 1..n
// must occur. The result allows loops whenever the word repeats a value.
TypedGraph loop_graph(const std::vector<int>& word,
                      std::optional<int> split = std::nullopt);

// Basic operations.
TypedGraph disjoint_sum(const TypedGraph& g, const TypedGraph& h);
TypedGraph redefine(const TypedGraph& g, const std::vector<int>& sigma);
TypedGraph fuse(const TypedGraph& g, int a, int b);

// Composite operations (width-preserving glue).
TypedGraph twine(const TypedGraph& g, const TypedGraph& h,
                 const std::set<int>& K, int k);
TypedGraph sprout(const TypedGraph& g);
// Attaches one new edge visiting terminals t(word[0]) t(word[1]) ... ; the
// default word is 1..m. A split makes the new edge oriented.
TypedGraph bloom(const TypedGraph& g, int m,
                 const std::vector<int>& word = {},
                 std::optional<int> split = std::nullopt);
// Fuses terminals a and b only when they are adjacent (loop-producing glue).
TypedGraph collapse(const TypedGraph& g, int a, int b);

// Renames vertices to v0,v1,... and edges to e0,e1,... in first-seen order.
TypedGraph canonicalize_ids(const TypedGraph& g);

// Queries.
int incidence(const TypedGraph& g, const std::string& v, const std::string& e);
int degree(const TypedGraph& g, const std::string& v);
std::set<std::string> neighbourhood(const TypedGraph& g, const std::string& v);
bool adjacent(const TypedGraph& g, const std::string& u, const std::string& v);

// Exhaustive typed-graph isomorphism for desk-scale graphs.
bool is_isomorphic(const TypedGraph& g, const TypedGraph& h,
                   int size_limit = 12);

// Structural equality after canonicalize_ids on both sides.
bool canonical_equal(const TypedGraph& g, const TypedGraph& h);

} // namespace mso
