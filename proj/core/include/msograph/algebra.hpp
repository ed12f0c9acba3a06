#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msograph/graph.hpp"

namespace mso {

// One letter of a graph-algebra signature. Parameters fix the typing:
//   Vertex            : () -> 1
//   Edge(n[,split])   : () -> n
//   Loop(word[,split]): () -> max(word)
//   Sum(n,m)          : (n,m) -> n+m
//   Redef(sigma,from) : (from) -> |sigma|, terminal i of the result is
//                       terminal sigma[i-1] of the argument
//   Fuse(a,b,n)       : (n) -> n
//   Twine(n,m,K,k)    : (n,m) -> k, glue the K-indexed terminals pairwise
//   Sprout(n)         : (n) -> n+1, add an isolated vertex as a new terminal
//   Bloom(n,m[,word,split]) : (n) -> n, attach an edge visiting terminals
//                       1..m (or the given word over 1..m)
//   Hole(i,t)         : () -> t, expansion placeholder, never admissible
struct FnSymbol {
    enum Kind { Vertex, Edge, Loop, Sum, Redef, Fuse, Twine, Sprout, Bloom, Hole };
    Kind kind = Vertex;
    int n = 0, m = 0, k = 0;
    int a = 0, b = 0;            // Fuse positions
    std::vector<int> sigma;      // Redef
    std::set<int> K;             // Twine
    std::vector<int> word;       // Loop; Bloom (empty means 1..m)
    std::optional<int> split;    // Edge / Loop / Bloom orientation
    int hole_index = 0;

    int arity() const;
    int out_type() const;
    std::vector<int> in_types() const;
    std::string name() const;    // canonical letter name; equal iff symbols equal

    bool operator==(const FnSymbol& o) const;
    bool operator<(const FnSymbol& o) const;

    static FnSymbol vertex();
    static FnSymbol edge(int n, std::optional<int> split = std::nullopt);
    static FnSymbol loop(std::vector<int> word, std::optional<int> split = std::nullopt);
    static FnSymbol sum(int n, int m);
    static FnSymbol redef(std::vector<int> sigma, int from);
    static FnSymbol fuse(int a, int b, int n);
    static FnSymbol twine(int n, int m, std::set<int> K, int k);
    static FnSymbol sprout(int n);
    static FnSymbol bloom(int n, int m, std::vector<int> word = {},
                          std::optional<int> split = std::nullopt);
    static FnSymbol hole(int index, int type);
};

// Rooted ordered tree of symbols, stored as an index arena so that very deep
// expressions never recurse on destruction.
struct Expression {
    struct Node {
        FnSymbol sym;
        std::vector<int> kids;
    };
    std::vector<Node> nodes;
    int root = -1;

    int add(FnSymbol sym, std::vector<int> kids = {});
    int size() const { return static_cast<int>(nodes.size()); }
    // Post-order node ids (children before parents), iterative.
    std::vector<int> post_order() const;
};

struct SignatureProfile {
    enum Family { Generic, TreeWidth, PathWidth };
    Family family = Generic;
    int k = 0;           // width bound (TreeWidth / PathWidth)
    int c = 2;           // max loop-word length for loop constants
    bool loops = false;
    int target_type = 0; // extends the admissible type set beyond k+1

    int max_type() const;
    bool admits(const FnSymbol& f, std::string* why = nullptr) const;
    // Finite alphabet enumeration (TreeWidth / PathWidth only).
    std::vector<FnSymbol> alphabet() const;
};

// Empty result = valid; entries name the node path and the violation.
std::vector<std::string> validate(const Expression& e, const SignatureProfile& p);

TypedGraph evaluate(const Expression& e);
std::set<int> locality(const Expression& e);

// Composite letters rewritten over {Sum, Redef, Fuse, Vertex, Edge, Loop}:
// hole_nodes[i] is the placeholder for the i-th argument.
struct Expansion {
    Expression expr;
    std::vector<int> hole_nodes;
};
Expansion expand_symbol(const FnSymbol& f);

// Grafts `args` into the holes of an expansion (arguments are subtree roots
// of `into`); returns the new root inside `into`.
int graft(Expression& into, const Expansion& ex, const std::vector<int>& args);

Expression parse_expression(const std::string& text);
std::string print_expression(const Expression& e);
Expression read_expression(const std::string& path);
void write_expression(const Expression& e, const std::string& path);

} // namespace mso
